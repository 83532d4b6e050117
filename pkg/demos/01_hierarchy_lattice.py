"""Tour of the class lattice: tokens, order, join/meet, and the level cap.

Run:  python3 demos/01_hierarchy_lattice.py
"""

from projcalc import LEVEL_CAP, delta, join, leq, meet, pi, sigma
from projcalc.pointclass import complement_class, product_class, projection_class

print("== the three kinds at each level ==")
for cls in (sigma(1), pi(1), delta(1), sigma(2), delta(3)):
    print(f"  {cls}")

print("\n== order: delta n sits under both sides, both sides under delta n+1 ==")
pairs = [(delta(2), sigma(2)), (sigma(2), pi(2)), (sigma(2), delta(3)),
         (pi(1), sigma(3)), (sigma(3), pi(1))]
for a, b in pairs:
    rel = "<=" if leq(a, b) else "</="
    print(f"  {a} {rel} {b}")

print("\n== join and meet are closed forms, no search ==")
for a, b in [(sigma(2), pi(2)), (sigma(1), sigma(3)), (delta(2), pi(2))]:
    print(f"  join({a}, {b}) = {join(a, b)}    meet({a}, {b}) = {meet(a, b)}")

print("\n== the structural operations behind the set rules ==")
print(f"  complement of {sigma(2)} is {complement_class(sigma(2))}")
print(f"  projection of {delta(3)} lands in {projection_class(delta(3))}")
print(f"  product of {sigma(2)} and {pi(3)} lands in {product_class(sigma(2), pi(3))}")

print(f"\nlevels are capped at {LEVEL_CAP}; arithmetic past the cap raises"
      " instead of wrapping")
