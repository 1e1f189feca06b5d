/** Gradient-boosted regression trees, squared loss, exact greedy splits.
 *
 *  Leaf values are stored with the learning rate already applied, so a
 *  prediction is plainly base_score + sum of reached leaves - the exact
 *  arithmetic the portable JSON format (and the optimizer's evaluator)
 *  performs. In-memory and exported predictions are therefore identical.
 */

export type TreeNode =
  | { leaf: number }
  | {
      split: number;
      threshold: number;
      default_left: boolean;
      left: TreeNode;
      right: TreeNode;
    };

export interface GbdtParams {
  nEstimators: number;
  maxDepth: number;
  learningRate: number;
}

export const DEFAULT_PARAMS: GbdtParams = {
  nEstimators: 200,
  maxDepth: 5,
  learningRate: 0.3,
};

const MIN_GAIN = 1e-12;

function mean(values: number[], indices: number[]): number {
  let s = 0;
  for (const i of indices) s += values[i];
  return indices.length > 0 ? s / indices.length : 0;
}

interface Split {
  feature: number;
  threshold: number;
  gain: number;
  left: number[];
  right: number[];
}

function bestSplit(X: number[][], r: number[], indices: number[],
                   nFeatures: number): Split | null {
  const n = indices.length;
  if (n < 2) return null;
  let total = 0;
  for (const i of indices) total += r[i];
  const parentScore = (total * total) / n;

  let best: Split | null = null;
  for (let f = 0; f < nFeatures; f++) {
    const order = indices.slice().sort((a, b) => X[a][f] - X[b][f] || a - b);
    let leftSum = 0;
    for (let k = 0; k < n - 1; k++) {
      leftSum += r[order[k]];
      const a = X[order[k]][f];
      const b = X[order[k + 1]][f];
      if (a === b) continue;
      const nl = k + 1;
      const nr = n - nl;
      const rightSum = total - leftSum;
      const gain =
        (leftSum * leftSum) / nl + (rightSum * rightSum) / nr - parentScore;
      if (best === null || gain > best.gain + MIN_GAIN) {
        let threshold = a + (b - a) / 2;
        if (!(threshold > a)) threshold = b; // adjacent doubles
        best = {
          feature: f,
          threshold,
          gain,
          left: order.slice(0, nl),
          right: order.slice(nl),
        };
      }
    }
  }
  if (best === null || best.gain <= MIN_GAIN) return null;
  return best;
}

function growTree(X: number[][], r: number[], indices: number[],
                  depth: number, params: GbdtParams, nFeatures: number): TreeNode {
  if (depth >= params.maxDepth) {
    return { leaf: params.learningRate * mean(r, indices) };
  }
  const split = bestSplit(X, r, indices, nFeatures);
  if (split === null) {
    return { leaf: params.learningRate * mean(r, indices) };
  }
  return {
    split: split.feature,
    threshold: split.threshold,
    default_left: true,
    left: growTree(X, r, split.left, depth + 1, params, nFeatures),
    right: growTree(X, r, split.right, depth + 1, params, nFeatures),
  };
}

export function predictTree(node: TreeNode, x: number[]): number {
  while (!("leaf" in node)) {
    const v = x[node.split];
    if (Number.isNaN(v)) {
      node = node.default_left ? node.left : node.right;
    } else {
      node = v < node.threshold ? node.left : node.right;
    }
  }
  return node.leaf;
}

export interface GbdtModel {
  baseScore: number;
  trees: TreeNode[];
  params: GbdtParams;
}

export function predict(model: GbdtModel, x: number[]): number {
  let total = model.baseScore;
  for (const tree of model.trees) total += predictTree(tree, x);
  return total;
}

export function fit(X: number[][], y: number[],
                    params: GbdtParams = DEFAULT_PARAMS): GbdtModel {
  if (X.length !== y.length) throw new Error("X and y lengths differ");
  if (X.length === 0) throw new Error("empty training set");
  const nFeatures = X[0].length;
  const all = X.map((_, i) => i);

  let base = 0;
  for (const v of y) base += v;
  base /= y.length;

  const preds = new Array<number>(y.length).fill(base);
  const residuals = new Array<number>(y.length).fill(0);
  const trees: TreeNode[] = [];
  for (let t = 0; t < params.nEstimators; t++) {
    for (let i = 0; i < y.length; i++) residuals[i] = y[i] - preds[i];
    const tree = growTree(X, residuals, all, 0, params, nFeatures);
    trees.push(tree);
    for (let i = 0; i < y.length; i++) preds[i] += predictTree(tree, X[i]);
  }
  return { baseScore: base, trees, params };
}

export function treeDepth(node: TreeNode): number {
  if ("leaf" in node) return 0;
  return 1 + Math.max(treeDepth(node.left), treeDepth(node.right));
}

/** Pearson correlation between predictions and targets. */
export function pearsonR(pred: number[], actual: number[]): number {
  const n = pred.length;
  if (n === 0) return 0;
  const mp = pred.reduce((a, b) => a + b, 0) / n;
  const ma = actual.reduce((a, b) => a + b, 0) / n;
  let cov = 0;
  let vp = 0;
  let va = 0;
  for (let i = 0; i < n; i++) {
    const dp = pred[i] - mp;
    const da = actual[i] - ma;
    cov += dp * da;
    vp += dp * dp;
    va += da * da;
  }
  if (vp === 0 || va === 0) return 0;
  return cov / Math.sqrt(vp * va);
}
