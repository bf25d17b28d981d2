"""Deep loci of the really-full-rank finite cluster types via their braid models.

    python3 scripts/finite_types.py --max-rank 8
"""

import argparse

from deeploci.loci import deep_locus_finite_type, finite_type_model


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=8)
    args = ap.parse_args()
    cases = [("A", n) for n in range(1, args.max_rank + 1)]
    cases += [("D", n) for n in range(4, args.max_rank + 1)]
    cases += [(label, None) for label in ("E6", "E7", "E8")]
    for label, n in cases:
        name = label + (str(n) if n else "")
        model = finite_type_model(label, n)
        where = f"X(sigma^{model})" if isinstance(model, int) else f"X{model}"
        r = deep_locus_finite_type(label, n)
        if r.empty:
            print(f"{name:<4} {where:<14} empty")
            continue
        comps = " ".join(f"{c['dynkin']}(dim {c['dimension']})" for c in r.components)
        print(f"{name:<4} {where:<14} smooth={r.smooth} irreducible={r.irreducible} "
              f"equidim={r.equidimensional}  {comps}")


if __name__ == "__main__":
    main()
