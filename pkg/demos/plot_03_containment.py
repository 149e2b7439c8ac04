"""
Containment companions
======================

The containment companion of a logic keeps an inference only when the
conclusion's variables are included in those of the premises, unless the
premises are inconsistent.  For classical logic this is exactly Bochvar's
matrix; we confirm it on every sequent of bounded size.
"""

from plonkalog import BaseLogic, builtin, check_companion_equivalence, containment_entails, parse_formula

BOOL = builtin("BOOL")
CL = BaseLogic(builtin("CLm"), antitheorem=builtin("SIGMA"), name="CL")
P = lambda s: parse_formula(s, BOOL)  # noqa: E731

print("p |- p \\/ q      ", containment_entails(CL, [P("p")], P("p \\/ q")))
print("p |- p \\/ p      ", containment_entails(CL, [P("p")], P("p \\/ p")))
print("p, ~p |- q        ", containment_entails(CL, [P("p"), P("~p")], P("q")))

###############################################################################
# Bounded equivalence check: formulas of depth at most two over three
# variables, at most two premises.

rep = check_companion_equivalence(builtin("B3"), CL, ["p", "q", "r"], depth=2, max_premises=2)
print(rep.sequents_checked, "sequents checked,", len(rep.disagreements), "disagreements")
