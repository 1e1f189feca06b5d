/** Training orchestration: join the CSVs, split train/validation, boost,
 *  report the held-out R-value, export the portable document. */

import { Dataset, joinOnName, parseFeatureCsv, parseLabelCsv } from "./csv.js";
import {
  DEFAULT_PARAMS,
  GbdtModel,
  fit,
  pearsonR,
  predict,
} from "./gbdt.js";
import { ModelDoc, predictDoc, toModelDoc } from "./modeljson.js";
import { mulberry32, shuffled } from "./rng.js";

export interface TrainingConfig {
  nEstimators: number;
  maxDepth: number;
  learningRate: number;
  valSplit: number;
  objective: "delay" | "area";
  seed: number;
  note?: string;
}

export const DEFAULT_CONFIG: TrainingConfig = {
  nEstimators: DEFAULT_PARAMS.nEstimators,
  maxDepth: DEFAULT_PARAMS.maxDepth,
  learningRate: DEFAULT_PARAMS.learningRate,
  valSplit: 0.2,
  objective: "area",
  seed: 0,
};

export interface TrainReport {
  rValue: number;
  nTrain: number;
  nValidation: number;
  objective: string;
}

export interface TrainOutput {
  model: GbdtModel;
  doc: ModelDoc;
  report: TrainReport;
}

export const MIN_ROWS = 50;

export function trainFromCsv(featureCsv: string, labelCsv: string,
                             cfg: TrainingConfig = DEFAULT_CONFIG): TrainOutput {
  const data = joinOnName(parseFeatureCsv(featureCsv), parseLabelCsv(labelCsv));
  return train(data, cfg);
}

export function train(data: Dataset, cfg: TrainingConfig = DEFAULT_CONFIG): TrainOutput {
  const n = data.X.length;
  if (n < MIN_ROWS) {
    throw new Error(`need at least ${MIN_ROWS} joined rows, got ${n}`);
  }
  if (!(cfg.valSplit >= 0 && cfg.valSplit < 1)) {
    throw new Error("valSplit must be in [0, 1)");
  }
  const rng = mulberry32(cfg.seed);
  const order = shuffled(data.X.map((_, i) => i), rng);
  const nVal = Math.floor(n * cfg.valSplit);
  const valIdx = order.slice(0, nVal);
  const trainIdx = order.slice(nVal);

  const model = fit(
    trainIdx.map((i) => data.X[i]),
    trainIdx.map((i) => data.y[i]),
    {
      nEstimators: cfg.nEstimators,
      maxDepth: cfg.maxDepth,
      learningRate: cfg.learningRate,
    },
  );

  const evalIdx = valIdx.length > 0 ? valIdx : trainIdx;
  const preds = evalIdx.map((i) => predict(model, data.X[i]));
  const actual = evalIdx.map((i) => data.y[i]);
  const rValue = pearsonR(preds, actual);

  const doc = toModelDoc(model, cfg.objective, {
    trained_by: "eqnopt-trainer",
    note: cfg.note ?? "",
    seed: cfg.seed,
    n_estimators: cfg.nEstimators,
    max_depth: cfg.maxDepth,
    learning_rate: cfg.learningRate,
    n_train: trainIdx.length,
    n_validation: valIdx.length,
    r_value: rValue,
  });

  // the exported document must predict exactly what the trainer predicts
  for (const i of evalIdx.slice(0, 25)) {
    const delta = Math.abs(predictDoc(doc, data.X[i]) - predict(model, data.X[i]));
    if (delta > 1e-6) {
      throw new Error(`export drift ${delta} on row ${data.names[i]}`);
    }
  }

  return {
    model,
    doc,
    report: {
      rValue,
      nTrain: trainIdx.length,
      nValidation: valIdx.length,
      objective: cfg.objective,
    },
  };
}
