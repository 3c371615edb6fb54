/** Fine-tuning loops for the sequence labeler and the sentence classifier.
 *
 * Training follows the reference protocol: class-weighted cross-entropy,
 * constant learning rate, batch size 3 (regions/windows) for sequence
 * labeling and 16 (sentences) for classification, long regions split at
 * line breaks. Everything is deterministic per seed.
 */

import { aggregate, encodeWordLabels, projectToTokens, renderWindow } from "./codec.js";
import { loadCorpus, windowSpans } from "./corpus.js";
import { hashAll, sentenceFeatures, tokenFeatures } from "./features.js";
import { TokenNet } from "./model.js";
import { Rng } from "./rng.js";
import {
  ALPHABETS,
  type FineTuneConfig,
  type Region,
  type RenderedToken,
  type SentenceLabel,
} from "./types.js";

export interface WindowSample {
  regionId: string;
  windowStart: number;
  tokens: RenderedToken[];
  featIdx: number[][];
  goldIdx: number[];
}

export interface TrainLogEntry {
  epoch: number;
  loss: number;
}

export function buildWindowSamples(corpus: Region[], cfg: FineTuneConfig): WindowSample[] {
  const labels = ALPHABETS[cfg.scheme];
  const samples: WindowSample[] = [];
  for (const region of corpus) {
    const wordLabels = encodeWordLabels(region, cfg.scheme);
    for (const [lo, hi] of windowSpans(region, cfg.maxWindowWords)) {
      const tokens = renderWindow(region, lo, hi, cfg.useLayout);
      const tokenLabels = projectToTokens(wordLabels.slice(lo, hi), tokens, cfg.scheme, lo);
      samples.push({
        regionId: region.regionId,
        windowStart: lo,
        tokens,
        featIdx: tokens.map((_, i) => hashAll(tokenFeatures(tokens, i), cfg.hashBuckets)),
        goldIdx: tokenLabels.map((l) => labels.indexOf(l)),
      });
    }
  }
  return samples;
}

/** Inverse token-label frequency, normalized to mean 1. */
export function classWeights(samples: WindowSample[], labelCount: number): Float32Array {
  const counts = new Float32Array(labelCount);
  for (const s of samples) for (const g of s.goldIdx) counts[g] += 1;
  const inv = new Float32Array(labelCount);
  for (let y = 0; y < labelCount; y++) inv[y] = counts[y] > 0 ? 1 / counts[y] : 0;
  let mean = 0;
  let present = 0;
  for (let y = 0; y < labelCount; y++) {
    if (inv[y] > 0) {
      mean += inv[y];
      present += 1;
    }
  }
  mean /= Math.max(present, 1);
  for (let y = 0; y < labelCount; y++) inv[y] = inv[y] > 0 ? inv[y] / mean : 1;
  return inv;
}

export function finetune(
  corpus: Region[],
  cfg: FineTuneConfig,
  onEpoch?: (entry: TrainLogEntry) => void,
): { net: TokenNet; log: TrainLogEntry[] } {
  if (!corpus.length) throw new Error("empty training corpus");
  const labels = ALPHABETS[cfg.scheme];
  const samples = buildWindowSamples(corpus, cfg);
  const weights = classWeights(samples, labels.length);
  const net = new TokenNet({
    buckets: cfg.hashBuckets,
    hidden: cfg.hiddenSize,
    labels,
    seed: cfg.seed,
  });

  const rng = new Rng(cfg.seed + 1);
  const order = samples.map((_, i) => i);
  const log: TrainLogEntry[] = [];
  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    rng.shuffle(order);
    let lossSum = 0;
    let batches = 0;
    for (let at = 0; at < order.length; at += cfg.batchSize) {
      const batch: Array<{ feats: number[]; gold: number }> = [];
      for (const idx of order.slice(at, at + cfg.batchSize)) {
        const s = samples[idx];
        for (let i = 0; i < s.tokens.length; i++) {
          batch.push({ feats: s.featIdx[i], gold: s.goldIdx[i] });
        }
      }
      lossSum += net.step(batch, weights, cfg.learningRate);
      batches += 1;
    }
    const entry = { epoch, loss: lossSum / batches };
    log.push(entry);
    onEpoch?.(entry);
  }
  return { net, log };
}

export const CLASSIFIER_LABELS: SentenceLabel[] = ["nontask", "task"];

export function trainSentenceClassifier(
  sentences: Array<{ words: string[]; label: SentenceLabel }>,
  cfg: FineTuneConfig,
  onEpoch?: (entry: TrainLogEntry) => void,
): { net: TokenNet; log: TrainLogEntry[] } {
  if (!sentences.length) throw new Error("empty sentence list");
  const samples = sentences.map((s) => ({
    feats: hashAll(sentenceFeatures(s.words), cfg.hashBuckets),
    gold: CLASSIFIER_LABELS.indexOf(s.label),
  }));
  const counts = new Float32Array(2);
  for (const s of samples) counts[s.gold] += 1;
  const weights = new Float32Array([1 / counts[0], 1 / counts[1]]);
  const mean = (weights[0] + weights[1]) / 2;
  weights[0] /= mean;
  weights[1] /= mean;

  const net = new TokenNet({
    buckets: cfg.hashBuckets,
    hidden: cfg.hiddenSize,
    labels: [...CLASSIFIER_LABELS],
    seed: cfg.seed + 17,
  });
  const rng = new Rng(cfg.seed + 18);
  const order = samples.map((_, i) => i);
  const log: TrainLogEntry[] = [];
  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    rng.shuffle(order);
    let lossSum = 0;
    let batches = 0;
    for (let at = 0; at < order.length; at += cfg.classifierBatchSize) {
      const batch = order.slice(at, at + cfg.classifierBatchSize).map((i) => samples[i]);
      lossSum += net.step(batch, weights, cfg.learningRate);
      batches += 1;
    }
    const entry = { epoch, loss: lossSum / batches };
    log.push(entry);
    onEpoch?.(entry);
  }
  return { net, log };
}

export function goldSentences(
  corpus: Region[],
): Array<{ words: string[]; label: SentenceLabel }> {
  const out: Array<{ words: string[]; label: SentenceLabel }> = [];
  for (const region of corpus) {
    for (const s of region.sentences) {
      if (s.label) out.push({ words: region.words.slice(s.start, s.end), label: s.label });
    }
  }
  return out;
}

export { loadCorpus, aggregate };
