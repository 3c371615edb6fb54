/** Labeling schemes over rendered tokens.
 *
 * Rendering, label projection and the token-to-word aggregation rules must
 * agree bit for bit with the primary toolkit, because this package emits
 * word-level label files that the primary evaluates. The aggregation rules
 * are cross-checked against a 10k-case fixture generated by the primary
 * (see tests/codec.test.ts).
 */

import {
  ALPHABETS,
  BULLET_TOKEN,
  LINE_BREAK_TOKEN,
  type Region,
  type RenderedToken,
  type Scheme,
  type SentenceSpan,
} from "./types.js";

/** Deterministic fixed-length character chunker (max 6 chars per piece). */
export function chunkSplit(word: string, maxLen = 6): string[] {
  const pieces: string[] = [];
  for (let i = 0; i < word.length; i += maxLen) {
    pieces.push(word.slice(i, i + maxLen));
  }
  return pieces.length ? pieces : [word];
}

/**
 * Render words [start, end) of a region into model-input tokens: bullet
 * marker, then line-break marker, then the word's subword pieces.
 */
export function renderWindow(
  region: Region,
  start: number,
  end: number,
  useLayout: boolean,
  splitter: (word: string) => string[] = chunkSplit,
): RenderedToken[] {
  const tokens: RenderedToken[] = [];
  for (let i = start; i < end; i++) {
    if (useLayout && region.bullets.has(i)) {
      tokens.push({ text: BULLET_TOKEN, kind: "bullet_marker" });
    }
    if (useLayout && region.lineBreaks.has(i)) {
      tokens.push({ text: LINE_BREAK_TOKEN, kind: "line_break_marker" });
    }
    for (const piece of splitter(region.words[i])) {
      tokens.push({ text: piece, kind: "word_piece", wordIndex: i });
    }
  }
  return tokens;
}

/** Gold word labels for a region under a scheme. */
export function encodeWordLabels(region: Region, scheme: Scheme): string[] {
  const labels = new Array<string>(region.words.length).fill("?");
  for (const s of region.sentences) {
    let first: string;
    let rest: string;
    if (scheme === "bi") {
      [first, rest] = ["B", "I"];
    } else if (scheme === "bio") {
      [first, rest] = s.label === "task" ? ["B", "I"] : ["O", "O"];
    } else {
      [first, rest] = s.label === "task" ? ["T", "I"] : ["N", "I"];
    }
    labels[s.start] = first;
    for (let i = s.start + 1; i < s.end; i++) labels[i] = rest;
  }
  if (labels.includes("?")) {
    throw new Error(`region ${region.regionId}: gold sentences do not cover all words`);
  }
  return labels;
}

const BEGIN = new Set(["B", "T", "N"]);

function continuation(scheme: Scheme): string {
  return scheme === "bio" ? "O" : "I";
}

/**
 * Spread word labels onto rendered tokens: a word's first piece carries its
 * label, later pieces the continuation; markers inherit the next word's
 * first-piece label (or the continuation label at the end).
 */
export function projectToTokens(
  wordLabels: string[],
  tokens: RenderedToken[],
  scheme: Scheme,
  windowStart = 0,
): string[] {
  const out: string[] = [];
  const seen = new Set<number>();
  for (let pos = 0; pos < tokens.length; pos++) {
    const tok = tokens[pos];
    if (tok.kind === "word_piece") {
      const w = tok.wordIndex! - windowStart;
      if (seen.has(w)) {
        const label = wordLabels[w];
        out.push(BEGIN.has(label) ? continuation(scheme) : label);
      } else {
        seen.add(w);
        out.push(wordLabels[w]);
      }
    } else {
      const next = tokens.slice(pos + 1).find((t) => t.kind === "word_piece");
      out.push(next ? wordLabels[next.wordIndex! - windowStart] : continuation(scheme));
    }
  }
  return out;
}

/** Sentence-boundary rule: B wins if present anywhere in the word. */
export function aggregateBi(tokenLabels: string[]): string {
  return tokenLabels.includes("B") ? "B" : "I";
}

/** Task-span rule: B wins, otherwise the mode; an I/O tie prefers I. */
export function aggregateBio(tokenLabels: string[]): string {
  if (tokenLabels.includes("B")) return "B";
  const nI = tokenLabels.filter((l) => l === "I").length;
  return nI >= tokenLabels.length - nI ? "I" : "O";
}

/** Joint rule: any beginning label present -> T only on strict majority. */
export function aggregateNti(tokenLabels: string[]): string {
  const nT = tokenLabels.filter((l) => l === "T").length;
  const nN = tokenLabels.filter((l) => l === "N").length;
  if (nT || nN) return nT > nN ? "T" : "N";
  return "I";
}

export function aggregate(scheme: Scheme, tokenLabels: string[]): string {
  if (!tokenLabels.length) throw new Error("empty token label list");
  const alphabet = ALPHABETS[scheme];
  for (const l of tokenLabels) {
    if (!alphabet.includes(l)) {
      throw new Error(`label ${l} outside ${scheme} alphabet`);
    }
  }
  if (scheme === "bi") return aggregateBi(tokenLabels);
  if (scheme === "bio") return aggregateBio(tokenLabels);
  return aggregateNti(tokenLabels);
}

/** Reduce token labels to one label per word; markers take no part. */
export function aggregateToWords(
  scheme: Scheme,
  tokens: RenderedToken[],
  tokenLabels: string[],
): Map<number, string> {
  const perWord = new Map<number, string[]>();
  tokens.forEach((tok, i) => {
    if (tok.kind === "word_piece") {
      const list = perWord.get(tok.wordIndex!) ?? [];
      list.push(tokenLabels[i]);
      perWord.set(tok.wordIndex!, list);
    }
  });
  const out = new Map<number, string>();
  for (const [w, labels] of perWord) out.set(w, aggregate(scheme, labels));
  return out;
}

/** Decode word labels into sentence spans (repairing stray prefixes). */
export function decodeWordLabels(scheme: Scheme, labels: string[]): SentenceSpan[] {
  if (!labels.length) return [];
  const fixed = [...labels];
  if (scheme !== "bio" && fixed[0] === "I") {
    fixed[0] = scheme === "bi" ? "B" : "N";
  }
  const spans: SentenceSpan[] = [];
  if (scheme === "bio") {
    let start: number | null = null;
    fixed.forEach((label, i) => {
      if (label === "B") {
        if (start !== null) spans.push({ start, end: i, label: "task", context: false });
        start = i;
      } else if (label !== "I" || start === null) {
        if (start !== null) spans.push({ start, end: i, label: "task", context: false });
        start = null;
      }
    });
    if (start !== null) spans.push({ start, end: fixed.length, label: "task", context: false });
    return spans;
  }
  let start = 0;
  for (let i = 1; i <= fixed.length; i++) {
    if (i === fixed.length || fixed[i] !== "I") {
      const label =
        scheme === "bi" ? null : fixed[start] === "T" ? ("task" as const) : ("nontask" as const);
      spans.push({ start, end: i, label, context: false });
      start = i;
    }
  }
  return spans;
}
