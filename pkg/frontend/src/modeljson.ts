/** The portable model document the optimizer loads, with a zod schema so
 *  exports are validated before they ever leave the trainer. */

import { z } from "zod";

import { FEATURE_NAMES } from "./csv.js";
import { GbdtModel, TreeNode } from "./gbdt.js";

const finite = z.number().finite();

export type NodeDoc =
  | { leaf: number }
  | {
      split: number;
      threshold: number;
      default_left: boolean;
      left: NodeDoc;
      right: NodeDoc;
    };

const nodeSchema: z.ZodType<NodeDoc> = z.lazy(() =>
  z.union([
    z.object({ leaf: finite }).strict(),
    z
      .object({
        split: z.number().int().min(0).max(FEATURE_NAMES.length - 1),
        threshold: finite,
        default_left: z.boolean(),
        left: nodeSchema,
        right: nodeSchema,
      })
      .strict(),
  ]),
);

export const modelSchema = z
  .object({
    objective: z.enum(["delay", "area"]),
    base_score: finite,
    feature_names: z.tuple([
      z.literal("and_count"), z.literal("or_count"), z.literal("not_count"),
      z.literal("node_count"), z.literal("depth"), z.literal("density"),
      z.literal("edge_sum"),
    ]),
    trees: z.array(nodeSchema),
    meta: z.record(z.unknown()),
  })
  .strict();

export type ModelDoc = z.infer<typeof modelSchema>;

export function toModelDoc(model: GbdtModel, objective: "delay" | "area",
                           meta: Record<string, unknown>): ModelDoc {
  const doc = {
    objective,
    base_score: model.baseScore,
    feature_names: [...FEATURE_NAMES] as ModelDoc["feature_names"],
    trees: model.trees as NodeDoc[],
    meta,
  };
  return modelSchema.parse(doc);
}

/** Evaluate a model document directly (the arithmetic the optimizer's own
 *  loader performs): base score plus one leaf per tree, descending left on
 *  feature < threshold. */
export function predictDoc(doc: ModelDoc, features: number[]): number {
  let total = doc.base_score;
  for (let tree of doc.trees) {
    let node: NodeDoc = tree;
    while (!("leaf" in node)) {
      const v = features[node.split];
      if (Number.isNaN(v)) node = node.default_left ? node.left : node.right;
      else node = v < node.threshold ? node.left : node.right;
    }
    total += node.leaf;
  }
  return total;
}

export { TreeNode };
