"""Census of X(a,b): deep-locus shape plus a chart-finder run on sampled points.

    python3 scripts/xab_census.py --a-max 4 --b-max 7 --points 20
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from deeploci.braid_matrix import is_free_point
from deeploci.braids import xab_word
from deeploci.chart_finder import find_chart, sample_chart_point, sample_deep_point
from deeploci.errors import Unsupported
from deeploci.loci import deep_locus_xab


@dataclass
class CensusConfig:
    a_max: int = 4
    b_max: int = 7
    points: int = 20
    deep_points: int = 10
    seed: int = 0


def census_row(a: int, b: int, cfg: CensusConfig) -> dict:
    beta = xab_word(a, b)
    row = {"a": a, "b": b, "dim": len(beta) - 3}
    try:
        report = deep_locus_xab(a, b)
    except Unsupported:
        report = None
    row["deep"] = None if report is None else [c["dynkin"] for c in report.components]
    t0 = time.perf_counter()
    charts = stabs = 0
    for k in range(cfg.points):
        p = sample_chart_point(beta, cfg.seed + k, "random" if k % 2 else "leftmost")
        wit = find_chart(a, b, p)
        charts += wit.kind == "chart"
        stabs += wit.kind == "stabilizer"
        assert (wit.kind == "chart") == is_free_point(beta, p)
    deep_ok = 0
    if report is not None and not report.empty:
        for k in range(cfg.deep_points):
            deep_ok += find_chart(a, b, sample_deep_point(a, b, cfg.seed + k)).kind == "stabilizer"
    row.update(charts=charts, stabilizers=stabs, deep_stabilizers=deep_ok, seconds=round(time.perf_counter() - t0, 3))
    return row


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in asdict(CensusConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=val)
    ap.add_argument("--json", action="store_true")
    cfg = CensusConfig(**{k: v for k, v in vars(ap.parse_args()).items() if k != "json"})
    json_out = ap.parse_args().json
    rows = [census_row(a, b, cfg) for a in range(1, cfg.a_max + 1) for b in range(1, cfg.b_max + 1)]
    if json_out:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'a':>2} {'b':>2} {'dim':>3}  {'deep locus':<22} charts stabs deep   sec")
    for r in rows:
        deep = "n/a" if r["deep"] is None else (" ".join(r["deep"]) or "empty")
        print(f"{r['a']:>2} {r['b']:>2} {r['dim']:>3}  {deep:<22} {r['charts']:>6} {r['stabilizers']:>5} "
              f"{r['deep_stabilizers']:>4} {r['seconds']:>5}")


if __name__ == "__main__":
    main()
