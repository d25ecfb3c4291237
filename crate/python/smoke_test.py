#!/usr/bin/env python3
"""Smoke test for the bqpvol_py extension module.

Run from the repository root after building the extension:

    cargo build -p bqpvol-py --release
    cp target/release/libbqpvol_py.so python/bqpvol_py.so
    python3 python/smoke_test.py
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import bqpvol_py as bq

checks = 0


def check(name: str, ok: bool, detail: str = "") -> None:
    global checks
    checks += 1
    status = "ok" if ok else "FAIL"
    print(f"  [{status}] {name}" + (f": {detail}" if detail else ""))
    if not ok:
        sys.exit(1)


def frac(pair) -> Fraction:
    num, den = pair
    return Fraction(num, den)


print("graph construction")
c3 = bq.Graph("cycle:3")
check("cycle:3 shape", (c3.n, c3.m, c3.dim) == (3, 3, 6), repr(c3))
custom = bq.Graph(n=4, edges=[(1, 2), (3, 4)])
check("explicit edge list", custom.m == 2 and custom.edges == [(1, 2), (3, 4)])
check("cactus cycles", c3.cycles() == [[1, 2, 3]])

print("exact volumes")
v = bq.volume(c3, polytope="Q")
check("vol Q(C_3) = 1/120", frac(v["exact"]) == Fraction(1, 120), v["value"])
check("closed form used", v["method"] == "closed-form", v["method"])
p = bq.volume(c3, polytope="P")
check("vol P(C_3) = 1/180", frac(p["exact"]) == Fraction(1, 180), p["value"])
diff = bq.volume(c3, polytope="Q-minus-P")
check("vol (Q∖P)(C_3) = 1/360", frac(diff["exact"]) == Fraction(1, 360))
engines = {e: frac(bq.volume(bq.Graph("path:3"), engine=e)["exact"])
           for e in ("auto", "brute", "ideal", "forest")}
check("engines agree on P_3", len(set(engines.values())) == 1, str(engines))

print("counting")
check("e(C_4) = 4·A_7 = 1088", bq.lecount(bq.Graph("cycle:4")) == 1088)
check("A_0..A_7", bq.euler_numbers(7) == [1, 1, 1, 2, 5, 16, 61, 272])
check("A_15 tangent number", bq.euler_numbers(15)[15] == 1903757312)
check("A_25 exceeds machine words", bq.euler_numbers(25)[25] == 246921480190207983616)

print("separation oracle")
hit = bq.separate(c3, x=["1/2"] * 3, y=["0", "1/2", "1/2"])
check("v0(A) is separated", hit is not None)
check("returns OC(A) for A = {(1,2)}", hit["a"] == [(1, 2)], str(hit["a"]))
check("violation exactly 1/2", frac(hit["violation"]) == Fraction(1, 2))
check("fractions accepted", bq.separate(
    c3, x=[Fraction(1, 2)] * 3, y=[Fraction(0), Fraction(1, 2), Fraction(1, 2)]
)["a"] == [(1, 2)])
inside = bq.separate(c3, x=[0.5, 0.5, 0.5], y=[0.25, 0.25, 0.25])
check("interior point certified", inside is None)

print("simplex geometry")
w = bq.simplex_w(c3, a=[(1, 2)])
check("|det| = 1/2", frac(w["det_abs"]) == Fraction(1, 2))
check("vol W = 1/(2·6!)", frac(w["volume"]) == Fraction(1, 1440))

print("Monte Carlo")
est = bq.estimate_volume(c3, polytope="Q", samples=200_000, seed=bq.DEFAULT_SEED)
exact = 1.0 / 120.0
band = 4.0 * est["std_error"]
check(
    "box rejection near 1/120",
    abs(est["estimate"] - exact) <= band,
    f"{est['estimate']:.6f} ± {est['std_error']:.6f}",
)
again = bq.estimate_volume(c3, polytope="Q", samples=200_000, seed=bq.DEFAULT_SEED)
check("deterministic for fixed seed", again["hits"] == est["hits"])

rep = bq.necklace_experiment(3, samples=100_000, seed=7)
hits = {row["polytope"]: row["hits"] for row in rep["rows"]}
check(
    "necklace hit ordering P ≤ T ≤ Q and P ≤ R ≤ Q",
    hits["P"] <= hits["T"] <= hits["Q"] and hits["P"] <= hits["R"] <= hits["Q"],
    str(hits),
)
check("necklace exact root present", 0.42 < rep["exact_q_root"] < 0.43)

print("H-representation")
rows = bq.hrep(c3, polytope="Q")
check("Q(C_3) has 4m + 2n = 18 rows", len(rows) == 18, f"{len(rows)} rows")

print(f"\nall {checks} smoke checks passed")
