"""The rule table: stable ids, citations, and level arithmetic.

Each rule id names one inference step; the cite string is a self-contained
statement of the mathematical fact the step rests on.  The arithmetic
helpers below are the engine's single source of truth for the additive
rules (the derivation checker deliberately re-implements them).
"""

from __future__ import annotations

# determinacy-gated rules: always, or conditionally (checked structurally)
ALWAYS_GATED = frozenset({"F-INT", "F-EPS"})

CITATIONS = {
    "DECL": "declared in the program environment",
    "SCHED": "declared level schedule for a countable family",
    "S-COMPL": "complements swap sigma and pi at each level and fix delta",
    "S-CU": "each level of the hierarchy is closed under countable unions",
    "S-CI": "each level of the hierarchy is closed under countable intersections",
    "S-PROD": "binary products stay within a common kind at a common level; "
              "a strict sigma/pi mixture upcasts to the least common delta",
    "S-PROJ": "projecting along a factor preserves sigma n and sends pi n into sigma n+1",
    "S-BIMG": "images under level-1 (Borel) functions preserve sigma n and "
              "send pi n into sigma n+1",
    "S-BPRE": "preimages under level-1 (Borel) functions preserve every class; "
              "sections arise as such preimages under a pair embedding",
    "S-SUBLEV": "a level-p measurable function pulls every Borel target, in "
                "particular every sublevel set, back into delta p",
    "S-WR": "for a set at sigma n, the measures assigning it mass at least r "
            "form a sigma n subset of the measure space; beyond n = 1 this "
            "rests on determinacy",
    "F-DOM": "a function declared on a partial domain carries the domain's "
             "class, lifted to delta, joined into its level",
    "F-PAIR": "a pair of measurable functions is measurable at the larger of "
              "the two levels",
    "F-CYL": "extending a function along an extra product factor keeps its level",
    "F-COMP": "composing level-p after level-q measurable functions is "
              "measurable at level p+q",
    "F-COMP-B": "composing with an inner level-1 (Borel) function keeps the "
                "outer level: Borel preimages preserve each delta class",
    "F-PRE-Δ": "the preimage of a delta n set under a level-p function lies "
               "in delta p+n",
    "F-PRE-Σ": "the preimage of a sigma n set under a level-p function lies "
               "in sigma n+p-1",
    "F-GRAPH": "a level-n measurable function on a delta n domain has its "
               "graph in delta n+1 of the product",
    "F-UNGRAPH": "a function whose graph and domain both lie in delta n is "
                 "measurable at level n+1",
    "F-SECT": "fixing one product coordinate of a level-p function yields a "
              "level p+1 function of the other",
    "F-ARITH": "pointwise sums, negation, products, minima, maxima, inner "
               "products and positive powers of nonnegative functions keep "
               "the larger operand level",
    "F-CSUP": "a countable supremum over a family bounded at a fixed level "
              "stays at that level",
    "F-CINF": "a countable infimum over a family bounded at a fixed level "
              "stays at that level",
    "F-PARTIAL": "the sectionwise infimum or supremum over a constraint set "
                 "at level q is measurable at level q+1",
    "F-INT": "integrating a level-p function against a level-r kernel yields "
             "a level p+r+2 function; requires projective determinacy",
    "F-SELECT": "a set in pi 2m+1 admits a selector whose graph is again in "
                "pi 2m+1; for m >= 1 this requires projective determinacy",
    "F-EPS": "an eps-optimal measurable selector exists inside the constraint "
             "set; requires projective determinacy",
    "P-UM": "level-1 sets and functions are universally measurable outright; "
            "every projective level is, under projective determinacy",
}

UM_REFUSAL = (
    "universal measurability beyond level 1 is independent of the base "
    "axioms: consistently, a level-2 set can fail to be measurable"
)

UNBOUNDED_NOTE = (
    "a countable combination across an unbounded level schedule need not "
    "land in any fixed level of the hierarchy"
)


def rule_compose(p: int, q: int) -> int:
    """Level of a composition of level-p (outer) and level-q (inner) maps."""
    return p + q


def rule_preimage_delta(p: int, n: int) -> int:
    """Level of the preimage of a delta n set under a level-p map."""
    return p + n


def rule_preimage_sigma(p: int, n: int) -> int:
    """Sigma level of the preimage of a sigma n set under a level-p map."""
    return n + p - 1


def rule_graph(n: int) -> int:
    """Delta level of the graph of a level-n map on a delta n domain."""
    return n + 1


def rule_ungraph(n: int) -> int:
    """Level of a map recovered from a delta n graph and delta n domain."""
    return n + 1


def rule_section(p: int) -> int:
    """Level of a one-coordinate section of a level-p map on a product."""
    return p + 1


def rule_pair(p: int, q: int) -> int:
    return max(p, q)


def rule_partial_extremum(q: int) -> int:
    """Level of a sectionwise inf/sup over a level-q constraint picture."""
    return q + 1


def rule_integration(p: int, r: int) -> int:
    """Level of the kernel integral of a level-p integrand, level-r kernel."""
    return p + r + 2


def least_selector_stage(*, pi_threshold: int) -> int:
    """Least m with pi(2m+1) above the given pi-level threshold."""
    m = 0
    while 2 * m + 1 < pi_threshold:
        m += 1
    return m
