/** A small token-classification network trained from scratch.
 *
 * Architecture: hashed sparse features -> embedding sum -> tanh hidden
 * layer -> softmax heads, one prediction per input token. The objective is
 * class-weighted cross-entropy with a constant learning rate; gradients are
 * sparse on the embedding table, so steps cost O(active features).
 *
 * The same network classifies whole sentences for the baseline by feeding
 * a sentence's bag of features as a single "token".
 */

import * as fs from "node:fs";
import { Rng } from "./rng.js";

export interface NetConfig {
  buckets: number;
  hidden: number;
  labels: string[];
  seed: number;
}

export class TokenNet {
  readonly cfg: NetConfig;
  /** Embedding table, buckets x hidden, zero until a feature is touched. */
  w1: Float32Array;
  b1: Float32Array;
  /** Output head, labels x hidden. */
  w2: Float32Array;
  b2: Float32Array;

  constructor(cfg: NetConfig) {
    this.cfg = cfg;
    this.w1 = new Float32Array(cfg.buckets * cfg.hidden);
    this.b1 = new Float32Array(cfg.hidden);
    this.w2 = new Float32Array(cfg.labels.length * cfg.hidden);
    this.b2 = new Float32Array(cfg.labels.length);
    const rng = new Rng(cfg.seed * 2654435761 + 0x9e3779b9);
    const scale = 1 / Math.sqrt(cfg.hidden);
    for (let i = 0; i < this.w2.length; i++) this.w2[i] = rng.uniform(scale);
  }

  /** Hidden activation for one feature-index list. */
  hidden(feats: number[]): Float32Array {
    const { hidden } = this.cfg;
    const h = new Float32Array(hidden);
    for (const f of feats) {
      const base = f * hidden;
      for (let j = 0; j < hidden; j++) h[j] += this.w1[base + j];
    }
    for (let j = 0; j < hidden; j++) h[j] = Math.tanh(h[j] + this.b1[j]);
    return h;
  }

  probs(h: Float32Array): Float32Array {
    const L = this.cfg.labels.length;
    const { hidden } = this.cfg;
    const logits = new Float32Array(L);
    let max = -Infinity;
    for (let y = 0; y < L; y++) {
      let z = this.b2[y];
      const base = y * hidden;
      for (let j = 0; j < hidden; j++) z += this.w2[base + j] * h[j];
      logits[y] = z;
      if (z > max) max = z;
    }
    let sum = 0;
    for (let y = 0; y < L; y++) {
      logits[y] = Math.exp(logits[y] - max);
      sum += logits[y];
    }
    for (let y = 0; y < L; y++) logits[y] /= sum;
    return logits;
  }

  predict(feats: number[]): number {
    const p = this.probs(this.hidden(feats));
    let best = 0;
    for (let y = 1; y < p.length; y++) if (p[y] > p[best]) best = y;
    return best;
  }

  /**
   * One SGD step on a batch of (features, gold label index) examples.
   * Returns the mean weighted cross-entropy loss over the batch.
   */
  step(
    batch: Array<{ feats: number[]; gold: number }>,
    classWeights: Float32Array,
    lr: number,
  ): number {
    const L = this.cfg.labels.length;
    const { hidden } = this.cfg;
    const gW2 = new Float32Array(this.w2.length);
    const gB2 = new Float32Array(L);
    const gB1 = new Float32Array(hidden);
    // Sparse embedding gradients: bucket -> accumulated vector.
    const gW1 = new Map<number, Float32Array>();
    let loss = 0;

    for (const { feats, gold } of batch) {
      const h = this.hidden(feats);
      const p = this.probs(h);
      const w = classWeights[gold];
      loss += -w * Math.log(Math.max(p[gold], 1e-12));

      // d loss / d logits = w * (p - onehot(gold))
      const dh = new Float32Array(hidden);
      for (let y = 0; y < L; y++) {
        const dz = w * (p[y] - (y === gold ? 1 : 0));
        gB2[y] += dz;
        const base = y * hidden;
        for (let j = 0; j < hidden; j++) {
          gW2[base + j] += dz * h[j];
          dh[j] += dz * this.w2[base + j];
        }
      }
      for (let j = 0; j < hidden; j++) dh[j] *= 1 - h[j] * h[j];
      for (let j = 0; j < hidden; j++) gB1[j] += dh[j];
      for (const f of feats) {
        let g = gW1.get(f);
        if (!g) {
          g = new Float32Array(hidden);
          gW1.set(f, g);
        }
        for (let j = 0; j < hidden; j++) g[j] += dh[j];
      }
    }

    const scale = lr / batch.length;
    for (let i = 0; i < this.w2.length; i++) this.w2[i] -= scale * gW2[i];
    for (let y = 0; y < L; y++) this.b2[y] -= scale * gB2[y];
    for (let j = 0; j < hidden; j++) this.b1[j] -= scale * gB1[j];
    for (const [f, g] of gW1) {
      const base = f * hidden;
      for (let j = 0; j < hidden; j++) this.w1[base + j] -= scale * g[j];
    }
    return loss / batch.length;
  }

  save(path: string, extra: Record<string, unknown> = {}): void {
    const { hidden } = this.cfg;
    const rows: Record<string, number[]> = {};
    for (let f = 0; f < this.cfg.buckets; f++) {
      const base = f * hidden;
      let nonzero = false;
      for (let j = 0; j < hidden; j++) {
        if (this.w1[base + j] !== 0) {
          nonzero = true;
          break;
        }
      }
      if (nonzero) rows[f] = Array.from(this.w1.subarray(base, base + hidden));
    }
    const doc = {
      format: "slate-finetune/1",
      config: this.cfg,
      w1: rows,
      b1: Array.from(this.b1),
      w2: Array.from(this.w2),
      b2: Array.from(this.b2),
      ...extra,
    };
    fs.writeFileSync(path, JSON.stringify(doc));
  }

  static load(path: string): { net: TokenNet; doc: any } {
    const doc = JSON.parse(fs.readFileSync(path, "utf-8"));
    if (doc.format !== "slate-finetune/1") {
      throw new Error(`unknown checkpoint format ${doc.format} in ${path}`);
    }
    const net = new TokenNet(doc.config);
    net.w1.fill(0);
    for (const [f, row] of Object.entries<number[]>(doc.w1)) {
      net.w1.set(row, Number(f) * doc.config.hidden);
    }
    net.b1.set(doc.b1);
    net.w2.set(doc.w2);
    net.b2.set(doc.b2);
    return { net, doc };
  }
}
