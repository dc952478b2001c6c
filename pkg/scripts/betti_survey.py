"""Tabulate Koszul cohomology for the built-in nilpotent algebra catalog.

Prints Betti numbers, Euler characteristic, and nilpotency class for every
catalog entry, and optionally for extra abelian algebras or a user-supplied
structure-constant file.
"""

import argparse
import sys

from polyarith.jsonio import load_document, parse_lie_algebra
from polyarith.lie import abelian, build_koszul, nilpotent_catalog


def describe(name, algebra):
    kos = build_koszul(algebra)
    betti = kos.betti()
    # duality b_p = b_{n-p} holds for every nilpotent algebra
    n = algebra.dim
    dual = all(betti[p] == betti[n - p] for p in range(n + 1))
    return {
        "name": name,
        "dim": n,
        "class": algebra.nilpotency_class(),
        "betti": betti,
        "euler": kos.euler_characteristic(),
        "dual": dual,
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--abelian", type=int, metavar="N", default=0,
        help="also include abelian algebras of dimension 1..N",
    )
    parser.add_argument(
        "--algebra", metavar="FILE", default=None,
        help="JSON structure-constant file to include in the table",
    )
    args = parser.parse_args(argv)

    entries = [(name, alg) for name, alg in sorted(nilpotent_catalog().items())]
    for n in range(1, args.abelian + 1):
        entries.append((f"abelian_{n}", abelian(n)))
    if args.algebra:
        doc, _ = load_document(args.algebra)
        entries.append((args.algebra, parse_lie_algebra(doc)))

    width = max(len(name) for name, _ in entries)
    print(f"{'algebra':<{width}} {'dim':>3} {'cls':>3} {'euler':>5} {'dual':>4}  betti")
    for name, algebra in entries:
        row = describe(name, algebra)
        betti = ",".join(str(b) for b in row["betti"])
        dual = "yes" if row["dual"] else "NO"
        print(
            f"{row['name']:<{width}} {row['dim']:>3} {row['class']:>3}"
            f" {row['euler']:>5} {dual:>4}  ({betti})"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
