/** Command line: train, predict, experiment.
 *
 * Flags mirror the fine-tune configuration; defaults are the reference
 * protocol (batch 3/16, 100 epochs, constant learning rate). Training this
 * package's from-scratch network needs --lr well above the pretrained-model
 * default; the experiment command uses 0.2.
 */

import * as fs from "node:fs";
import { loadCorpus } from "./corpus.js";
import { runExperiment } from "./experiment.js";
import { TokenNet } from "./model.js";
import { predictToFile } from "./predict.js";
import { finetune } from "./train.js";
import { defaultConfig, type FineTuneConfig, type Scheme, type Split } from "./types.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad arguments near ${key}`);
    }
    flags.set(key.slice(2), argv[i + 1]);
  }
  return flags;
}

function configFromFlags(flags: Map<string, string>): FineTuneConfig {
  return defaultConfig({
    scheme: (flags.get("scheme") ?? "nti") as Scheme,
    epochs: Number(flags.get("epochs") ?? 100),
    learningRate: Number(flags.get("lr") ?? 1e-6),
    seed: Number(flags.get("seed") ?? 1),
    useLayout: (flags.get("layout") ?? "on") === "on",
  });
}

function main(): number {
  const [command, ...rest] = process.argv.slice(2);
  if (!command) {
    console.error("usage: cli.js <train|predict|experiment> [--flag value ...]");
    return 2;
  }
  const flags = parseFlags(rest);
  const corpus = flags.get("corpus") ?? "../data/corpus.jsonl";

  if (command === "train") {
    const cfg = configFromFlags(flags);
    const out = flags.get("out") ?? "model.json";
    const split = (flags.get("split") ?? "train") as Split;
    const regions = loadCorpus(corpus, split);
    console.log(`training ${cfg.scheme} on ${regions.length} regions (seed ${cfg.seed})`);
    const { net, log } = finetune(regions, cfg, (e) => {
      if (e.epoch % 10 === 0) console.log(`epoch ${e.epoch}: loss ${e.loss.toFixed(4)}`);
    });
    net.save(out, { fineTune: cfg, trainLog: log });
    console.log(`wrote ${out}`);
    return 0;
  }

  if (command === "predict") {
    const modelPath = flags.get("model");
    const out = flags.get("out");
    if (!modelPath || !out) {
      console.error("predict needs --model and --out");
      return 2;
    }
    const { net, doc } = TokenNet.load(modelPath);
    const cfg: FineTuneConfig = doc.fineTune;
    const split = (flags.get("split") ?? "test") as Split;
    const regions = loadCorpus(corpus, split);
    predictToFile(net, regions, cfg, out);
    console.log(`wrote ${regions.length} prediction records to ${out}`);
    return 0;
  }

  if (command === "experiment") {
    const outDir = flags.get("out-dir") ?? "results";
    fs.mkdirSync(outDir, { recursive: true });
    runExperiment({
      corpusPath: corpus,
      outDir,
      seeds: (flags.get("seeds") ?? "1,2,3,4,5").split(",").map(Number),
      learningRate: Number(flags.get("lr") ?? 0.2),
      epochs: Number(flags.get("epochs") ?? 100),
      slateCmd: flags.get("slate-cmd") ?? "slate",
    });
    return 0;
  }

  console.error(`unknown command ${command}`);
  return 2;
}

process.exit(main());
