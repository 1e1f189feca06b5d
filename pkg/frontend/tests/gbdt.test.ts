import { describe, expect, it } from "vitest";

import {
  DEFAULT_PARAMS,
  fit,
  pearsonR,
  predict,
  treeDepth,
} from "../src/gbdt.js";
import { mulberry32 } from "../src/rng.js";

function grid(n: number, seed = 1): number[][] {
  const rng = mulberry32(seed);
  return Array.from({ length: n }, () => [
    Math.floor(rng() * 20),
    Math.floor(rng() * 20),
    Math.floor(rng() * 10),
    1 + Math.floor(rng() * 60),
    1 + Math.floor(rng() * 20),
    rng(),
    Math.floor(rng() * 100),
  ]);
}

describe("gbdt", () => {
  it("fits constant labels exactly up to shrinkage tolerance", () => {
    const X = grid(80);
    const y = X.map(() => 4.25);
    const model = fit(X, y);
    for (const x of X.slice(0, 10)) {
      expect(Math.abs(predict(model, x) - 4.25)).toBeLessThan(1e-9);
    }
  });

  it("grows exactly nEstimators trees of bounded depth", () => {
    const X = grid(100);
    const y = X.map((x) => x[3] * 2 + x[4]);
    const model = fit(X, y);
    expect(model.trees.length).toBe(DEFAULT_PARAMS.nEstimators);
    for (const tree of model.trees) {
      expect(treeDepth(tree)).toBeLessThanOrEqual(DEFAULT_PARAMS.maxDepth);
    }
  });

  it("recovers a single-split target on the training set", () => {
    const X = grid(120);
    const y = X.map((x) => (x[3] < 30 ? 1.0 : 2.0));
    const model = fit(X, y);
    for (let i = 0; i < X.length; i++) {
      expect(Math.abs(predict(model, X[i]) - y[i])).toBeLessThan(1e-6);
    }
  });

  it("is deterministic", () => {
    const X = grid(90, 7);
    const y = X.map((x) => x[0] + 3 * x[4] + x[5]);
    const a = fit(X, y);
    const b = fit(X, y);
    expect(JSON.stringify(a)).toBe(JSON.stringify(b));
  });

  it("reaches high correlation on a deterministic target", () => {
    const X = grid(300, 3);
    const y = X.map((x) => 2 * x[3] + 5 * x[4] + x[6]);
    const train = X.slice(0, 240);
    const hold = X.slice(240);
    const model = fit(train, y.slice(0, 240));
    const preds = hold.map((x) => predict(model, x));
    expect(pearsonR(preds, y.slice(240))).toBeGreaterThan(0.95);
  });

  it("pearsonR handles degenerate inputs", () => {
    expect(pearsonR([], [])).toBe(0);
    expect(pearsonR([1, 1, 1], [1, 2, 3])).toBe(0);
    expect(pearsonR([1, 2, 3], [2, 4, 6])).toBeCloseTo(1.0, 12);
  });
});
