"""Run the width-five contraction cases through the eliminator chain.

Every high-degree contraction case is tried against invertibility, the
symmetry-image pairing, the hexagon covering, and the special-case
arguments, in that order; the run fails if any case survives all four.

    python3 scripts/run_pipeline.py --out results/pipeline.json
"""

import argparse
import json
import time
from pathlib import Path

from chipsplit.pipeline import pipeline_summary


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results") / "pipeline.json")
    args = parser.parse_args()

    started = time.perf_counter()
    report = pipeline_summary()
    elapsed = time.perf_counter() - started

    print(f"cases: {len(report.verdicts)}")
    for stage in ("invertibility", "symmetry", "hexagon", "special"):
        print(f"  eliminated by {stage}: {report.counts[stage]}")
    survivors = report.survivors()
    print(f"  survivors: {len(survivors)}")
    for verdict in survivors:
        print(f"    {verdict.case.record()}")

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.out} in {elapsed:.1f} s")
    return 0 if not survivors else 1


if __name__ == "__main__":
    raise SystemExit(main())
