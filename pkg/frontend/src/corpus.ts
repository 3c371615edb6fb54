/** Corpus file reading and word-level windowing.
 *
 * The corpus format is the primary toolkit's JSONL: one region per line with
 * words, layout index sets, split tag and gold sentence spans. Windowing
 * mirrors the primary's policy: regions longer than the word budget split at
 * line breaks into non-overlapping windows.
 */

import * as fs from "node:fs";
import type { Region, SentenceSpan, Split } from "./types.js";

export function loadCorpus(path: string, split?: Split): Region[] {
  const regions: Region[] = [];
  const text = fs.readFileSync(path, "utf-8");
  for (const [lineno, line] of text.split("\n").entries()) {
    if (!line.trim()) continue;
    let record: any;
    try {
      record = JSON.parse(line);
    } catch (err) {
      throw new Error(`${path}:${lineno + 1}: invalid JSON: ${err}`);
    }
    const region: Region = {
      regionId: record.region_id,
      docId: record.doc_id,
      split: record.split,
      words: record.words,
      lineBreaks: new Set<number>(record.line_breaks ?? []),
      bullets: new Set<number>(record.bullets ?? []),
      sentences: (record.sentences ?? []).map(
        (s: any): SentenceSpan => ({
          start: s.start,
          end: s.end,
          label: s.label,
          context: Boolean(s.context),
        }),
      ),
    };
    if (!region.regionId || !Array.isArray(region.words) || region.words.length === 0) {
      throw new Error(`${path}:${lineno + 1}: malformed region record`);
    }
    if (split === undefined || region.split === split) {
      regions.push(region);
    }
  }
  return regions;
}

/** [start, end) word windows of at most maxWords, cut at line breaks. */
export function windowSpans(region: Region, maxWords: number): Array<[number, number]> {
  const n = region.words.length;
  if (n <= maxWords) return [[0, n]];
  const breaks = [...region.lineBreaks].sort((a, b) => a - b);
  const spans: Array<[number, number]> = [];
  let start = 0;
  while (n - start > maxWords) {
    const candidates = breaks.filter((b) => b > start && b <= start + maxWords);
    const cut = candidates.length ? candidates[candidates.length - 1] : start + maxWords;
    spans.push([start, cut]);
    start = cut;
  }
  spans.push([start, n]);
  return spans;
}
