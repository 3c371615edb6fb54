#!/usr/bin/env python3
"""Generate the bundled ink-notes corpus.

The real ink dataset cannot be redistributed here, so this script builds a
deterministic stand-in with the same shape and the same per-split statistics:

  train: 124 docs, 2496 sentences =  704 task + 1522 non-task
                                   + 173 context-task + 97 context-non-task
  test:   83 docs, 1416 sentences =  440 task +  857 non-task
                                   +  54 context-task + 65 context-non-task

Documents mimic recognized handwriting: lowercase, typos, terse phrases,
to-do lists with bullets and line breaks, note paragraphs with line wraps,
and recipe-style lists whose imperative steps are only non-tasks because of
their context (and elliptical list items that are only tasks in context).

Usage: python scripts/generate_corpus.py [--out data/corpus.jsonl] [--seed N]
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from slate.dataset import save_corpus, summarize  # noqa: E402
from slate.document import NONTASK, TASK, SentenceSpan, WritingRegion  # noqa: E402

SPLIT_TARGETS = {
    # (docs, plain tasks, context tasks, plain non-tasks, context non-tasks)
    "train": (124, 704, 173, 1522, 97),
    "test": (83, 440, 54, 857, 65),
}

TASK_VERBS = [
    "email", "call", "send", "buy", "schedule", "review", "fix", "update",
    "book", "ping", "draft", "order", "finish", "submit", "share", "print",
    "sign", "renew", "pay", "check", "ask", "prep", "confirm", "cancel",
    "upload", "invite", "remind", "plan",
]

TASK_OBJECTS = [
    "john", "sarah", "the budget doc", "milk", "the q3 report",
    "dentist appt", "slides for monday", "the team offsite",
    "insurance forms", "meeting room", "new laptops", "the design spec",
    "jira tickets", "travel plans", "the contract", "groceries",
    "birthday gift", "license renewal", "api keys", "expense report",
    "the onboarding guide", "server access", "the invite list",
    "marketing copy", "the survey results",
]

TASK_EXTRAS = [
    "by friday", "next week", "asap", "before the demo", "tomorrow",
    "after standup", "by eod", "this month", "w the team",
]

# Terse noun-only tasks: object plus deadline, no verb cue at all.
TASK_TERSE_PREFIX = [
    "dentist tuesday 10am", "milk eggs bread", "john re the numbers",
    "visa paperwork", "new badge photo", "flu shot this week",
    "laptop return label", "keys for the new hire",
]

NOTE_HEADERS = [
    "meeting notes", "shopping list", "ideas", "retro notes", "q3 planning",
    "standup summary", "random thoughts", "project alpha notes", "agenda",
    "brainstorm", "weekly sync", "launch checklist",
    "pasta sauce recipe", "grandmas bread recipe", "curry recipe",
    "notes from cooking class",
]

NOTE_STATEMENTS = [
    "q3 numbers look great", "meeting ran long today", "revenue up 12 pct",
    "team morale is high", "good discussion overall", "the demo went well",
    "lots of open questions", "budget is tight this quarter",
    "hiring is on track", "customers love the new ui",
    "traffic doubled since may", "office was cold again",
    "great turnout at the workshop", "sales flat in emea",
    "the release slipped a week", "everyone liked the proposal",
    "design looks clean", "too many meetings lately",
    "interesting idea from priya", "the vendor quote seems high",
    "latency is down a lot", "no blockers this sprint",
]

# Statement continuations: combined with a task verb or a task object they
# produce non-tasks that open exactly like tasks ("review ran long again",
# "the q3 report was approved"), so single surface cues are unreliable.
STATEMENT_TAILS = [
    "went well overall", "ran long again", "was down all day",
    "arrived damaged", "was deployed friday", "looks packed",
    "was nice", "seems solid so far", "still feels too long",
    "went smoothly", "dipped a bit", "got postponed", "needs no action",
    "was already done", "didnt help much", "was approved", "is blocked",
    "was cancelled", "arrived yesterday", "looks fine now",
]

# Context-flagged sentences draw from one ambiguous bank: the same surface
# text is a task inside a to-do list and a non-task inside a recipe or note
# paragraph, so the label is decidable only from the neighbors. Non-task
# context sentences lean on the first half of the bank, which makes those
# phrases non-task-heavy overall: a classifier that sees sentences in
# isolation has to get the to-do occurrences wrong.
AMBIGUOUS_CONTEXT = [
    "check the temperature", "mix in the rest", "stir until smooth",
    "let it rest", "keep it warm", "set it aside for now",
    "combine both parts", "do the second half", "rinse and repeat",
    "the second batch too", "add one more", "finish the rest",
    "same as last time", "one more for the list", "repeat for the others",
    "same for q2", "the usual one", "another one here", "note the changes",
    "and the other doc", "same but smaller", "backend too",
    "plus the side items", "one for each",
]

AMBIGUOUS_NONTASK_LEAN = AMBIGUOUS_CONTEXT[:12]


def typo(word: str, rng: random.Random) -> str:
    if len(word) < 3:
        return word
    op = rng.choice(("drop", "swap", "double"))
    i = rng.randrange(1, len(word) - 1)
    if op == "drop":
        return word[:i] + word[i + 1 :]
    if op == "swap":
        return word[:i] + word[i + 1] + word[i] + word[i + 2 :]
    return word[:i] + word[i] + word[i:]


def noisy(text: str, rng: random.Random, rate: float = 0.06) -> list[str]:
    """Recognition-style corruption: character typos, dropped words, and the
    occasional stray fragment."""
    words = [typo(w, rng) if rng.random() < rate else w for w in text.split()]
    if len(words) > 2 and rng.random() < 0.06:
        words.pop(rng.randrange(len(words)))
    if rng.random() < 0.05:
        frag = "".join(rng.choice("bcdfghjklmnpqrstvwz") for _ in range(rng.randint(2, 4)))
        words.insert(rng.randrange(len(words) + 1), frag)
    return words


def garble(rng: random.Random) -> str:
    """Heavily misrecognized text: pseudo-words nothing can classify in
    isolation."""
    n = rng.randint(3, 6)
    words = []
    for _ in range(n):
        length = rng.randint(2, 6)
        words.append("".join(rng.choice("bcdfghjklmnpqrstvwxz") for _ in range(length)))
    return " ".join(words)


def make_sentence(label: str, ctx: bool, rng: random.Random) -> list[str]:
    if ctx and rng.random() < 0.55:
        text = garble(rng)
    elif ctx and label == NONTASK:
        text = rng.choice(AMBIGUOUS_NONTASK_LEAN)
    elif ctx:
        # Most context tasks use list-flavored phrases, a quarter use the
        # cooking-flavored half that context non-tasks live in.
        bank = AMBIGUOUS_NONTASK_LEAN if rng.random() < 0.25 else AMBIGUOUS_CONTEXT[12:]
        text = rng.choice(bank)
    elif label == TASK:
        roll = rng.random()
        if roll < 0.2:
            text = rng.choice(TASK_TERSE_PREFIX)
            if rng.random() < 0.5:
                text += f" {rng.choice(TASK_EXTRAS)}"
        elif roll < 0.38:
            # Noun-only task: object plus deadline, no verb.
            text = f"{rng.choice(TASK_OBJECTS)} {rng.choice(TASK_EXTRAS)}"
        else:
            text = f"{rng.choice(TASK_VERBS)} {rng.choice(TASK_OBJECTS)}"
            if rng.random() < 0.4:
                text += f" {rng.choice(TASK_EXTRAS)}"
    else:
        roll = rng.random()
        if roll < 0.1:
            # Scribbles and recognition wreckage: never actionable, so
            # non-task by default.
            text = garble(rng)
        elif roll < 0.23:
            text = rng.choice(NOTE_HEADERS)
        elif roll < 0.44:
            # Opens like a verb task, reads like a status note.
            text = f"{rng.choice(TASK_VERBS)} {rng.choice(STATEMENT_TAILS)}"
        elif roll < 0.62:
            # Talks about a task object without asking for anything.
            text = f"{rng.choice(TASK_OBJECTS)} {rng.choice(STATEMENT_TAILS)}"
        else:
            text = rng.choice(NOTE_STATEMENTS)
    words = noisy(text, rng, rate=0.12 if ctx else 0.1)
    return words if words else ["x"]


class Pools:
    def __init__(self, plain_task, ctx_task, plain_non, ctx_non):
        self.plain_task = plain_task
        self.ctx_task = ctx_task
        self.plain_non = plain_non
        self.ctx_non = ctx_non

    def empty(self) -> bool:
        return not (self.plain_task or self.ctx_task or self.plain_non or self.ctx_non)


def build_blocks(pools: Pools, rng: random.Random) -> list[dict]:
    """Blocks of (label, ctx) sentence specs that drain the pools exactly.

    A block is one coherent stretch: a to-do list (tasks plus context-task
    ellipses, maybe a header), a note paragraph, or a recipe list (header
    plus context-non-task steps).
    """
    blocks: list[dict] = []
    while not pools.empty():
        feasible = []
        if pools.plain_task:
            feasible.append("todo")
        if pools.ctx_non:
            feasible.append("recipe")
        if pools.plain_non:
            feasible.append("notes")
        if pools.ctx_task and not pools.plain_task:
            feasible.append("ellipsis")
        kind = rng.choice(feasible)
        specs: list[tuple[str, bool]] = []
        if kind == "todo":
            if pools.plain_non and rng.random() < 0.45:
                specs.append((NONTASK, False))
                pools.plain_non -= 1
            take = min(pools.plain_task, rng.randint(2, 5))
            specs.extend([(TASK, False)] * take)
            pools.plain_task -= take
            if pools.ctx_task and rng.random() < 0.65:
                ctx_take = min(pools.ctx_task, rng.randint(1, 2))
                specs.extend([(TASK, True)] * ctx_take)
                pools.ctx_task -= ctx_take
            blocks.append({"kind": "list", "specs": specs})
        elif kind == "recipe":
            if pools.plain_non:
                specs.append((NONTASK, False))
                pools.plain_non -= 1
            take = min(pools.ctx_non, rng.randint(2, 4))
            specs.extend([(NONTASK, True)] * take)
            pools.ctx_non -= take
            blocks.append({"kind": "list", "specs": specs})
        elif kind == "notes":
            take = min(pools.plain_non, rng.randint(2, 6))
            specs.extend([(NONTASK, False)] * take)
            pools.plain_non -= take
            if pools.ctx_non and rng.random() < 0.3:
                ctx_take = min(pools.ctx_non, rng.randint(1, 2))
                specs.extend([(NONTASK, True)] * ctx_take)
                pools.ctx_non -= ctx_take
            blocks.append({"kind": "para", "specs": specs})
        else:  # leftover context tasks with no plain tasks left
            take = min(pools.ctx_task, rng.randint(1, 3))
            specs.extend([(TASK, True)] * take)
            pools.ctx_task -= take
            blocks.append({"kind": "list", "specs": specs})
    return blocks


def inject_label_noise(blocks: list[dict], rng: random.Random, rate: float = 0.025) -> None:
    """Swap the labels of a few task/non-task pairs while keeping their
    written style, mimicking annotation noise. Pairing keeps every count
    intact."""
    tasks = []
    nons = []
    for b, block in enumerate(blocks):
        for s, (label, ctx) in enumerate(block["specs"]):
            if ctx:
                continue
            (tasks if label == TASK else nons).append((b, s))
    m = int(min(len(tasks), len(nons)) * rate)
    flip = rng.sample(tasks, m) + rng.sample(nons, m)
    for b, s in flip:
        label, ctx = blocks[b]["specs"][s]
        other = NONTASK if label == TASK else TASK
        blocks[b]["specs"][s] = (other, ctx)
        blocks[b].setdefault("styled", {})[s] = label


def assemble_region(region_id, doc_id, blocks, rng: random.Random) -> WritingRegion:
    words: list[str] = []
    line_breaks: set[int] = set()
    bullets: set[int] = set()
    sentences: list[SentenceSpan] = []
    for block in blocks:
        for idx, (label, ctx) in enumerate(block["specs"]):
            style = block.get("styled", {}).get(idx, label)
            start = len(words)
            sent_words = make_sentence(style, ctx, rng)
            words.extend(sent_words)
            sentences.append(SentenceSpan(start, len(words), label, ctx))
            if block["kind"] == "list":
                # Context afterthoughts are squeezed in without their own
                # line more often than regular items.
                break_p = 0.45 if ctx else 0.5
                if (start > 0 or rng.random() < 0.3) and rng.random() < break_p:
                    line_breaks.add(start)
                if rng.random() < (0.25 if ctx else 0.4):
                    bullets.add(start)
                # Long items wrap onto a second line.
                if len(sent_words) > 4 and rng.random() < 0.75:
                    line_breaks.add(start + rng.randint(3, len(sent_words) - 1))
            else:
                if start > 0 and rng.random() < 0.12:
                    line_breaks.add(start)
        if block["kind"] == "para":
            # Paragraphs wrap: line breaks fall mid-flow, not at sentence
            # boundaries.
            lo = min(s.start for s in sentences[-len(block["specs"]):])
            pos = lo + rng.randint(6, 11)
            while pos < len(words):
                line_breaks.add(pos)
                pos += rng.randint(6, 11)
    return WritingRegion.build(
        region_id, doc_id, words,
        line_breaks=sorted(line_breaks), bullets=sorted(bullets),
        sentences=sentences,
    )


def build_split(split: str, rng: random.Random) -> list[tuple[WritingRegion, str]]:
    docs, plain_task, ctx_task, plain_non, ctx_non = SPLIT_TARGETS[split]
    pools = Pools(plain_task, ctx_task, plain_non, ctx_non)
    blocks = build_blocks(pools, rng)
    inject_label_noise(blocks, rng)
    rng.shuffle(blocks)

    total_sentences = plain_task + ctx_task + plain_non + ctx_non
    out: list[tuple[WritingRegion, str]] = []
    block_idx = 0
    remaining = total_sentences
    for d in range(docs):
        doc_id = f"{split}-{d:03d}"
        docs_left = docs - d
        target = remaining / docs_left
        doc_blocks: list[dict] = []
        count = 0
        while block_idx < len(blocks):
            blocks_left = len(blocks) - block_idx
            # Always leave at least one block per remaining doc.
            if d < docs - 1 and blocks_left <= (docs - d - 1):
                break
            if count >= target and doc_blocks and d < docs - 1:
                break
            doc_blocks.append(blocks[block_idx])
            count += len(blocks[block_idx]["specs"])
            block_idx += 1
        remaining -= count

        n_regions = rng.randint(1, min(3, len(doc_blocks)))
        cuts = sorted(rng.sample(range(1, len(doc_blocks)), n_regions - 1)) if n_regions > 1 else []
        bounds = [0, *cuts, len(doc_blocks)]
        for j in range(n_regions):
            region_blocks = doc_blocks[bounds[j] : bounds[j + 1]]
            region = assemble_region(f"{doc_id}:r{j}", doc_id, region_blocks, rng)
            out.append((region, split))
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/corpus.jsonl")
    parser.add_argument("--seed", type=int, default=20250811)
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    records = []
    for split in ("train", "test"):
        records.extend(build_split(split, rng))
    save_corpus(records, args.out)

    for split in ("train", "test"):
        regions = [r for r, s in records if s == split]
        print(f"{split}: {summarize(regions).as_dict()}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
