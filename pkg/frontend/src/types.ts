/** Shared domain types mirroring the corpus file schema. */

export type Split = "train" | "test";
export type SentenceLabel = "task" | "nontask";
export type Scheme = "bi" | "bio" | "nti";

export interface SentenceSpan {
  start: number;
  end: number;
  label: SentenceLabel | null;
  context: boolean;
}

export interface Region {
  regionId: string;
  docId: string;
  split: Split;
  words: string[];
  lineBreaks: Set<number>;
  bullets: Set<number>;
  sentences: SentenceSpan[];
}

export const LINE_BREAK_TOKEN = "</>";
export const BULLET_TOKEN = "<.>";

export type TokenKind = "word_piece" | "line_break_marker" | "bullet_marker";

export interface RenderedToken {
  text: string;
  kind: TokenKind;
  /** Word this piece belongs to; undefined for marker tokens. */
  wordIndex?: number;
}

export const ALPHABETS: Record<Scheme, string[]> = {
  bi: ["B", "I"],
  bio: ["B", "I", "O"],
  nti: ["N", "T", "I"],
};

/**
 * Fine-tuning configuration. The defaults are the reference protocol:
 * batch size 3 for sequence labeling and 16 for sentence classification,
 * 100 epochs, a constant learning rate of 1e-6, class weights by inverse
 * frequency, and line-break windowing at 128 words.
 *
 * The 1e-6 rate assumes a pretrained encoder; training this package's
 * from-scratch network needs a larger constant rate, passed explicitly
 * (the experiment uses 0.2). The rate stays constant either way.
 */
export interface FineTuneConfig {
  scheme: Scheme;
  batchSize: number;
  classifierBatchSize: number;
  epochs: number;
  learningRate: number;
  seed: number;
  useLayout: boolean;
  maxWindowWords: number;
  hiddenSize: number;
  hashBuckets: number;
}

export function defaultConfig(overrides: Partial<FineTuneConfig> = {}): FineTuneConfig {
  return {
    scheme: "nti",
    batchSize: 3,
    classifierBatchSize: 16,
    epochs: 100,
    learningRate: 1e-6,
    seed: 1,
    useLayout: true,
    maxWindowWords: 128,
    hiddenSize: 24,
    hashBuckets: 1 << 18,
    ...overrides,
  };
}
