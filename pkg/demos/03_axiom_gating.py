"""What changes between the two reasoning modes.

ZFC admits only the outright-provable rules.  ZFC_PD additionally admits
kernel integration, measure thresholds above level 1, selection beyond
stage 0, and universal measurability above level 1.  Refusals carry the
responsible rule id.

Run:  python3 demos/03_axiom_gating.py
"""

import pathlib

import projcalc.ast as ast
from projcalc import (ZFC, ZFC_PD, evaluate_assertions, infer_func, infer_set,
                      parse, universal_measurability)
from projcalc.errors import AxiomRequiredError
from projcalc.pointclass import delta, pi

source = (pathlib.Path(__file__).parent / "programs" / "gated_rules.pjc").read_text()
program, env = parse(source)

print("== the same bindings in both modes ==")
for name, run, node in [("lam", infer_func, ast.NamedFunc("lam")),
                        ("phi", infer_func, ast.NamedFunc("phi")),
                        ("thick", infer_set, ast.NamedSet("thick"))]:
    try:
        _, d = run(node, env, ZFC)
        left = d.conclusion.judgment.render()
    except AxiomRequiredError as exc:
        left = f"refused ({exc.rule})"
    _, d = run(node, env, ZFC_PD)
    print(f"  {name}: ZFC {left:22s} ZFC_PD {d.conclusion.judgment.render()}")

print("\n== whole-program verdicts ==")
for mode in (ZFC, ZFC_PD):
    results = evaluate_assertions(program, env, mode)
    ok = sum(r.ok for r in results)
    print(f"  {mode}: {ok}/{len(results)} assertions hold")
    for r in results:
        if not r.ok:
            print(f"    line {r.line}: {r.detail}")

print("\n== universal measurability is a certificate-or-refusal value ==")
for subject, mode in [(pi(1), ZFC), (delta(3), ZFC), (delta(3), ZFC_PD)]:
    out = universal_measurability(subject, mode)
    print(f"  {subject} under {mode}: {type(out).__name__.lower()}")
