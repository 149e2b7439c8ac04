"""
From a Hilbert calculus to its containment calculus
===================================================

Every rule of the base calculus is guarded by the star term so that no
fresh variable can appear without an explicit witness.  We build the
transformed calculus, list a few of its rules and look for a short
derivation.
"""

from plonkalog.textformat import format_step
from plonkalog import builtin, check_derivation, derive_bounded, parse_formula, transform_to_containment

BOOL = builtin("BOOL")
star = parse_formula("x /\\ (x \\/ y)", BOOL)
CLr = transform_to_containment(builtin("CL"), star, builtin("SIGMA"), name="CLr")
print(len(CLr.rules), "rules and", len(CLr.schemas), "schemas")
print("schemas:", ", ".join(s.name for s in CLr.schemas[:6]), "...")

###############################################################################
# ``p, q`` yields ``p /\ (p \/ q)``: the variable ``q`` is now contained.

gamma = [parse_formula("p", BOOL), parse_formula("q", BOOL)]
goal = parse_formula("p /\\ (p \\/ q)", BOOL)
d = derive_bounded(CLr, gamma, goal)
for k, st in enumerate(d.steps, 1):
    print(format_step(k, st, BOOL))
print("checked:", bool(check_derivation(CLr, gamma, d)))
