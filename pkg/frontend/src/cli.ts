/** CLI: read the feature and label CSVs, train, write model JSON, the
 *  train report, and optionally a fidelity fixture (random feature vectors
 *  with this trainer's predictions) for cross-implementation checks. */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { predictDoc } from "./modeljson.js";
import { mulberry32 } from "./rng.js";
import { DEFAULT_CONFIG, TrainingConfig, trainFromCsv } from "./train.js";

const USAGE = `usage: node dist/cli.js --features F.csv --labels L.csv --out MODEL.json
  [--objective delay|area] [--n-estimators N] [--max-depth D]
  [--learning-rate LR] [--val-split FRAC] [--seed S] [--note TEXT]
  [--report REPORT.json] [--fidelity-out FID.json] [--fidelity-count N]`;

export function main(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      features: { type: "string" },
      labels: { type: "string" },
      out: { type: "string" },
      objective: { type: "string", default: DEFAULT_CONFIG.objective },
      "n-estimators": { type: "string", default: String(DEFAULT_CONFIG.nEstimators) },
      "max-depth": { type: "string", default: String(DEFAULT_CONFIG.maxDepth) },
      "learning-rate": { type: "string", default: String(DEFAULT_CONFIG.learningRate) },
      "val-split": { type: "string", default: String(DEFAULT_CONFIG.valSplit) },
      seed: { type: "string", default: "0" },
      note: { type: "string" },
      report: { type: "string" },
      "fidelity-out": { type: "string" },
      "fidelity-count": { type: "string", default: "100" },
      help: { type: "boolean", default: false },
    },
  });

  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  if (!values.features || !values.labels || !values.out) {
    console.error(USAGE);
    return 2;
  }
  const objective = values.objective as string;
  if (objective !== "delay" && objective !== "area") {
    console.error(`unknown objective "${objective}"`);
    return 2;
  }

  const cfg: TrainingConfig = {
    nEstimators: Number(values["n-estimators"]),
    maxDepth: Number(values["max-depth"]),
    learningRate: Number(values["learning-rate"]),
    valSplit: Number(values["val-split"]),
    objective,
    seed: Number(values.seed),
    note: values.note,
  };

  let output;
  try {
    output = trainFromCsv(
      readFileSync(values.features, "utf8"),
      readFileSync(values.labels, "utf8"),
      cfg,
    );
  } catch (err) {
    console.error(`training failed: ${(err as Error).message}`);
    return 1;
  }

  writeFileSync(values.out, JSON.stringify(output.doc, null, 1) + "\n");
  console.log(
    `trained ${objective} model: ${output.report.nTrain} train rows, ` +
    `${output.report.nValidation} validation rows, ` +
    `R=${output.report.rValue.toFixed(4)} -> ${values.out}`,
  );
  if (values.report) {
    writeFileSync(values.report, JSON.stringify(output.report, null, 1) + "\n");
  }

  if (values["fidelity-out"]) {
    const count = Number(values["fidelity-count"]);
    const rng = mulberry32(cfg.seed + 0x5eed);
    const vectors: number[][] = [];
    const predictions: number[] = [];
    for (let i = 0; i < count; i++) {
      const nodeCount = 1 + Math.floor(rng() * 80);
      const vec = [
        Math.floor(rng() * 30),        // and_count
        Math.floor(rng() * 30),        // or_count
        Math.floor(rng() * 20),        // not_count
        nodeCount,                     // node_count
        1 + Math.floor(rng() * 25),    // depth
        rng(),                         // density
        Math.floor(rng() * 120),       // edge_sum
      ];
      vectors.push(vec);
      predictions.push(predictDoc(output.doc, vec));
    }
    writeFileSync(
      values["fidelity-out"],
      JSON.stringify({ objective, vectors, predictions }, null, 1) + "\n",
    );
    console.log(`wrote ${count} fidelity vectors -> ${values["fidelity-out"]}`);
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
