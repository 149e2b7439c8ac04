"""
Weak Kleene tables and matrix consequence
=========================================

A logical matrix is a finite algebra together with a set of designated
values.  Here we compare Bochvar's three-valued logic with paraconsistent
weak Kleene: same truth tables, different filters.
"""

from plonkalog.textformat import emit_algebra
from plonkalog import builtin, entails, find_countermodel, is_antitheorem, parse_formula

WK = builtin("WK")
print(emit_algebra(WK))

###############################################################################
# Two matrices over the same tables.  ``B3`` designates only ``1``; ``PWK``
# also designates the infectious value ``u``.

B3, PWK = builtin("B3"), builtin("PWK")
BOOL, DM = builtin("BOOL"), builtin("DM")

gamma = [parse_formula("p /\\ q", DM)]
phi = parse_formula("p", DM)
print("PWK: p /\\ q |- p ?", entails(PWK, gamma, phi))
print("countermodel:", find_countermodel(PWK, gamma, phi).assignment)

###############################################################################
# Explosion survives in ``B3`` but not in ``PWK``.

x = [parse_formula("x", BOOL), parse_formula("~x", BOOL)]
print("{x, ~x} antitheorem in B3:", is_antitheorem(B3, x))
x_dm = [parse_formula("x", DM), parse_formula("~x", DM)]
print("{x, ~x} antitheorem in PWK:", is_antitheorem(PWK, x_dm))
