/** Prediction: token labels, aggregated to word labels, written as records
 * the primary toolkit loads directly. */

import * as fs from "node:fs";
import { aggregateToWords, decodeWordLabels, renderWindow } from "./codec.js";
import { windowSpans } from "./corpus.js";
import { hashAll, sentenceFeatures, tokenFeatures } from "./features.js";
import type { TokenNet } from "./model.js";
import { CLASSIFIER_LABELS } from "./train.js";
import type { FineTuneConfig, Region, SentenceSpan } from "./types.js";

/** Word labels for one region: window, render, classify tokens, aggregate. */
export function predictWordLabels(
  net: TokenNet,
  region: Region,
  cfg: FineTuneConfig,
): string[] {
  const labels = net.cfg.labels;
  const out = new Array<string>(region.words.length);
  for (const [lo, hi] of windowSpans(region, cfg.maxWindowWords)) {
    const tokens = renderWindow(region, lo, hi, cfg.useLayout);
    const tokenLabels = tokens.map((_, i) => {
      const feats = hashAll(tokenFeatures(tokens, i), net.cfg.buckets);
      return labels[net.predict(feats)];
    });
    const byWord = aggregateToWords(cfg.scheme, tokens, tokenLabels);
    for (const [w, label] of byWord) out[w] = label;
  }
  for (let i = 0; i < out.length; i++) {
    if (out[i] === undefined) throw new Error(`region ${region.regionId}: word ${i} unlabeled`);
  }
  return out;
}

/** Label-form prediction records, one region per line. */
export function predictToFile(
  net: TokenNet,
  corpus: Region[],
  cfg: FineTuneConfig,
  path: string,
): void {
  const lines = corpus
    .slice()
    .sort((a, b) => (a.regionId < b.regionId ? -1 : 1))
    .map((region) =>
      JSON.stringify({
        region_id: region.regionId,
        scheme: cfg.scheme,
        labels: predictWordLabels(net, region, cfg),
      }),
    );
  fs.writeFileSync(path, lines.join("\n") + "\n");
}

export function classifySentence(net: TokenNet, words: string[]): "task" | "nontask" {
  const feats = hashAll(sentenceFeatures(words), net.cfg.buckets);
  return CLASSIFIER_LABELS[net.predict(feats)];
}

/** Two-model baseline: segment with the BI net, then classify each decoded
 * sentence with one classifier invocation. Emits span-form records. */
export function twoModelPredictToFile(
  segNet: TokenNet,
  clsNet: TokenNet,
  corpus: Region[],
  cfg: FineTuneConfig,
  path: string,
): void {
  const lines = corpus
    .slice()
    .sort((a, b) => (a.regionId < b.regionId ? -1 : 1))
    .map((region) => {
      const labels = predictWordLabels(segNet, region, { ...cfg, scheme: "bi" });
      const spans: SentenceSpan[] = decodeWordLabels("bi", labels).map((s) => ({
        ...s,
        label: classifySentence(clsNet, region.words.slice(s.start, s.end)),
      }));
      return JSON.stringify({
        region_id: region.regionId,
        spans: spans.map((s) => ({ start: s.start, end: s.end, label: s.label })),
      });
    });
  fs.writeFileSync(path, lines.join("\n") + "\n");
}
