#!/usr/bin/env python3
"""Generate the cross-component aggregation fixture.

Draws 10000 random token-label lists, computes the expected word label with
the primary package's aggregation rules, and writes them to
fixtures/agg_cases.json. The TypeScript tests re-aggregate every case and
compare.

Usage: python3 scripts/gen_agg_fixture.py
"""

import json
import pathlib
import random

from slate.codec import aggregate_bi, aggregate_bio, aggregate_nti

RULES = {
    "bi": (aggregate_bi, "BI"),
    "bio": (aggregate_bio, "BIO"),
    "nti": (aggregate_nti, "NTI"),
}


def main() -> None:
    rng = random.Random(20250811)
    cases = []
    schemes = list(RULES)
    for i in range(10000):
        scheme = schemes[i % 3]
        rule, alphabet = RULES[scheme]
        labels = [rng.choice(alphabet) for _ in range(rng.randint(1, 6))]
        cases.append({"scheme": scheme, "labels": labels, "expected": rule(labels)})
    out = pathlib.Path(__file__).resolve().parents[1] / "fixtures" / "agg_cases.json"
    out.write_text(json.dumps(cases))
    print(f"wrote {len(cases)} cases to {out}")


if __name__ == "__main__":
    main()
