"""
Building and splitting Płonka sums
==================================

Gluing the two-element Boolean matrix to a one-element algebra with an
empty filter along a two-element chain yields Bochvar's matrix.  Going the
other way, the term x /\ (x \/ y) splits the weak Kleene algebra back into
its fibers.
"""

from plonkalog import builtin, decompose, parse_formula, plonka_sum_matrices
from plonkalog.textformat import emit_matrix

X = builtin("CL_SUM")
S = plonka_sum_matrices(X, name="Pl")
print(emit_matrix(S.sum))

###############################################################################
# After renaming the glued point to ``u`` and fixing the element order the
# sum is exactly ``B3``.

m = S.sum.renamed({"e": "u"}).reordered(["0", "u", "1"])
print("same structure as B3:", m.same_structure(builtin("B3")))

###############################################################################
# Decomposition recovers one fiber per "truth region".

star = parse_formula("x /\\ (x \\/ y)", builtin("BOOL"))
Y = decompose(builtin("WK"), star, filter=["1"])
for i in Y.index.elements:
    print(i, list(Y.algebra(i).carrier), sorted(Y.fibers[i].filter))
