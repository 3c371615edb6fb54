/** The five-seed comparison: joint NTI model (with layout markers) vs the
 * two-model baseline, evaluated by the primary toolkit's `slate eval`.
 *
 * Prediction files are the only interface between the two packages: this
 * side trains and writes records, the primary side matches, counts and
 * scores them.
 */

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as path from "node:path";
import { loadCorpus } from "./corpus.js";
import { predictToFile, twoModelPredictToFile } from "./predict.js";
import { finetune, goldSentences, trainSentenceClassifier } from "./train.js";
import { defaultConfig, type FineTuneConfig, type Region } from "./types.js";

export interface EvalReport {
  counts: { tp: number; fp: number; tn: number; fn: number };
  task: { rec: number | null; prec: number | null; f1: number | null; context_rec: number | null };
  nontask: {
    rec: number | null;
    prec: number | null;
    f1: number | null;
    context_rec: number | null;
  };
  accuracy: number | null;
  b: number | null;
  b_tp: number | null;
}

export function runSlateEval(
  corpusPath: string,
  predictionsPath: string,
  reportPath: string,
  slateCmd = "slate",
): EvalReport {
  execFileSync(
    slateCmd,
    [
      "eval",
      "--corpus", corpusPath,
      "--split", "test",
      "--predictions", predictionsPath,
      "--out", reportPath,
    ],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  return JSON.parse(fs.readFileSync(reportPath, "utf-8"));
}

function mean(values: Array<number | null>): number | null {
  const xs = values.filter((v): v is number => v !== null);
  return xs.length ? xs.reduce((a, b) => a + b, 0) / xs.length : null;
}

export interface ExperimentOptions {
  corpusPath: string;
  outDir: string;
  seeds: number[];
  learningRate: number;
  epochs: number;
  slateCmd: string;
}

export function runExperiment(opts: ExperimentOptions): any {
  fs.mkdirSync(opts.outDir, { recursive: true });
  const train = loadCorpus(opts.corpusPath, "train");
  const test = loadCorpus(opts.corpusPath, "test");
  const sentences = goldSentences(train);

  const perSeed: any[] = [];
  for (const seed of opts.seeds) {
    console.log(`=== seed ${seed} ===`);
    const cfg: FineTuneConfig = defaultConfig({
      scheme: "nti",
      seed,
      learningRate: opts.learningRate,
      epochs: opts.epochs,
    });

    console.log("training joint NTI model...");
    const t0 = Date.now();
    const { net: nti, log } = finetune(train, cfg, (e) => {
      if (e.epoch % 20 === 0) console.log(`  epoch ${e.epoch}: loss ${e.loss.toFixed(4)}`);
    });
    console.log(`  done in ${((Date.now() - t0) / 1000).toFixed(0)}s`);
    const ntiPreds = path.join(opts.outDir, `nti_seed${seed}.jsonl`);
    predictToFile(nti, test, cfg, ntiPreds);
    const ntiReport = runSlateEval(
      opts.corpusPath, ntiPreds, path.join(opts.outDir, `nti_seed${seed}.report.json`),
      opts.slateCmd,
    );
    console.log(`  NTI f1=${ntiReport.task.f1} b=${ntiReport.b} ctx=${ntiReport.task.context_rec}`);

    console.log("training two-model baseline...");
    const segCfg: FineTuneConfig = { ...cfg, scheme: "bi" };
    const { net: seg } = finetune(train, segCfg);
    const { net: cls } = trainSentenceClassifier(sentences, cfg);
    const basePreds = path.join(opts.outDir, `baseline_seed${seed}.jsonl`);
    twoModelPredictToFile(seg, cls, test, segCfg, basePreds);
    const baseReport = runSlateEval(
      opts.corpusPath, basePreds, path.join(opts.outDir, `baseline_seed${seed}.report.json`),
      opts.slateCmd,
    );
    console.log(
      `  baseline f1=${baseReport.task.f1} b=${baseReport.b} ctx=${baseReport.task.context_rec}`,
    );

    perSeed.push({
      seed,
      nti: ntiReport,
      baseline: baseReport,
      final_loss: log[log.length - 1].loss,
    });
  }

  const summary = {
    config: {
      seeds: opts.seeds,
      epochs: opts.epochs,
      learning_rate: opts.learningRate,
      batch_size: 3,
      classifier_batch_size: 16,
      scheme: "nti",
      layout: true,
    },
    per_seed: perSeed,
    means: {
      nti_task_f1: mean(perSeed.map((s) => s.nti.task.f1)),
      nti_b: mean(perSeed.map((s) => s.nti.b)),
      nti_b_tp: mean(perSeed.map((s) => s.nti.b_tp)),
      nti_context_rec: mean(perSeed.map((s) => s.nti.task.context_rec)),
      baseline_task_f1: mean(perSeed.map((s) => s.baseline.task.f1)),
      baseline_context_rec: mean(perSeed.map((s) => s.baseline.task.context_rec)),
    },
    targets: {
      task_f1_center: 0.844,
      b_center: 0.884,
      band: 0.05,
    },
  };
  const resultPath = path.join(opts.outDir, "experiment.json");
  fs.writeFileSync(resultPath, JSON.stringify(summary, null, 2) + "\n");
  console.log(`\nwrote ${resultPath}`);
  console.log(JSON.stringify(summary.means, null, 2));
  return summary;
}
