/** Hashed sparse features for rendered tokens and whole sentences. */

import type { RenderedToken } from "./types.js";

/** FNV-1a, folded into the bucket range. */
export function hashFeature(feature: string, buckets: number): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < feature.length; i++) {
    h ^= feature.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return (h >>> 0) % buckets;
}

export function wordShape(text: string): string {
  let shape = "";
  let last = "";
  for (const ch of text) {
    let s: string;
    if (ch >= "A" && ch <= "Z") s = "X";
    else if (ch >= "a" && ch <= "z") s = "x";
    else if (ch >= "0" && ch <= "9") s = "d";
    else s = ch;
    if (s !== last) shape += s;
    last = s;
  }
  return shape;
}

function tokenText(tokens: RenderedToken[], i: number): string {
  if (i < 0) return "<s>";
  if (i >= tokens.length) return "</s>";
  return tokens[i].text.toLowerCase();
}

/** Feature strings for one token position, window of two on each side. */
export function tokenFeatures(tokens: RenderedToken[], i: number): string[] {
  const tok = tokens[i];
  const low = tok.text.toLowerCase();
  const fs = [
    "b",
    `w=${low}`,
    `w-1=${tokenText(tokens, i - 1)}`,
    `w+1=${tokenText(tokens, i + 1)}`,
    `w-2=${tokenText(tokens, i - 2)}`,
    `w+2=${tokenText(tokens, i + 2)}`,
    `k=${tok.kind}`,
    `sh=${wordShape(tok.text)}`,
  ];
  for (const k of [1, 2, 3]) {
    if (low.length > k) {
      fs.push(`p${k}=${low.slice(0, k)}`);
      fs.push(`s${k}=${low.slice(low.length - k)}`);
    }
  }
  if (i === 0) fs.push("first");
  return fs;
}

/** Bag of features for classifying one sentence in isolation. */
export function sentenceFeatures(words: string[]): string[] {
  const lows = words.map((w) => w.toLowerCase());
  const fs = lows.map((w) => `w=${w}`);
  for (let i = 0; i + 1 < lows.length; i++) fs.push(`bg=${lows[i]}_${lows[i + 1]}`);
  fs.push(`first=${lows[0] ?? "<empty>"}`);
  fs.push(`last=${lows[lows.length - 1] ?? "<empty>"}`);
  for (const w of words) fs.push(`sh=${wordShape(w)}`);
  for (const w of lows) {
    for (const k of [1, 2, 3]) {
      if (w.length > k) {
        fs.push(`p${k}=${w.slice(0, k)}`);
        fs.push(`s${k}=${w.slice(w.length - k)}`);
      }
    }
  }
  fs.push(`len=${Math.min(words.length, 8)}`);
  return fs;
}

export function hashAll(features: string[], buckets: number): number[] {
  return features.map((f) => hashFeature(f, buckets));
}
