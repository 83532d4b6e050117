"""Extended-real arithmetic and near-optimal selection, concretely.

The scalar type keeps every value exact: rationals plus the two infinities,
with the sign conventions that make lower integrals and minimization safe.

Run:  python3 demos/06_selectors_and_integrals.py
"""

from fractions import Fraction

from projcalc.selectors import eps_select_enumerate, sectionwise_optimum
from projcalc.xreal import (NEG_INF, POS_INF, fin, format_xreal,
                            integral_lower, integral_upper)

print("== the conventions, one by one ==")
for label, value in [
    ("(-inf) + (+inf)", NEG_INF + POS_INF),
    ("(+inf) + (-inf)", POS_INF + NEG_INF),
    ("-(+inf)", -POS_INF),
    ("0 * (+inf)", fin(0) * POS_INF),
    ("(-inf) * 0", NEG_INF * fin(0)),
]:
    print(f"  {label:16s} = {format_xreal(value)}")

print("\n== the doubly-infinite integral resolves by direction ==")
f = {"a": POS_INF, "b": NEG_INF}
p = {"a": Fraction(1, 2), "b": Fraction(1, 2)}
print("  two atoms, masses 1/2 and 1/2, values +inf and -inf")
print(f"  lower integral -> {format_xreal(integral_lower(f, p))}")
print(f"  upper integral -> {format_xreal(integral_upper(f, p))}")

print("\n== eps-optimal selection over a constraint set ==")
ys = ["y0", "y1", "y2"]
D = {("x0", "y0"), ("x0", "y1"), ("x1", "y1"), ("x1", "y2")}
f = {("x0", "y0"): fin(3), ("x0", "y1"): fin(Fraction(5, 2)),
     ("x1", "y1"): NEG_INF, ("x1", "y2"): fin(-40)}
opt = sectionwise_optimum(D, f, "inf")
for x in ("x0", "x1"):
    print(f"  sectionwise infimum at {x}: {format_xreal(opt[x])}")
eps = Fraction(1, 4)
sel = eps_select_enumerate(D, f, eps, "inf", ys)
print(f"  selector at eps={eps}: {dict(sorted(sel.items()))}")
print("  x0 takes the within-eps point; x1's infimum is -inf, so any value")
print(f"  below -1/eps = {-1 / eps} qualifies and the least index wins")
