import itertools

import pytest

import oracles as O
from plonkalog import (
    LogicalMatrix,
    MatrixFamily,
    PreconditionError,
    Rule,
    SignatureError,
    builtin,
    entails,
    find_countermodel,
    is_antitheorem,
    is_model_of,
    is_trivial_matrix,
)

PWK, B3, K4wn, LPm, Sfde, Bm, CLm = (builtin(n) for n in ("PWK", "B3", "K4wn", "LPm", "Sfde", "Bm", "CLm"))


@pytest.mark.parametrize(
    "name, elems, neg, conj, disj",
    [
        ("WK", O.WK_ELEMS, O.WK_NEG, O.WK_AND, O.WK_OR),
        ("K4", O.K4_ELEMS, O.K4_NEG, O.K4_AND, O.K4_OR),
        ("S4", O.S4_ELEMS, O.S4_NEG, O.S4_AND, O.S4_OR),
    ],
)
def test_builtin_tables_match_transcription(name, elems, neg, conj, disj):
    A = builtin(name)
    assert list(A.carrier) == elems
    for a in elems:
        assert A.op("neg", a) == neg[a]
    for (i, a), (j, b) in itertools.product(enumerate(elems), repeat=2):
        assert A.op("and", a, b) == conj[i][j]
        assert A.op("or", a, b) == disj[i][j]


def test_m4_is_the_four_element_lattice():
    A = builtin("M4")
    for a, b in itertools.product(O.M4_ELEMS, repeat=2):
        assert A.op("and", a, b) == O.m4_meet(a, b)
        assert A.op("or", a, b) == O.m4_join(a, b)
    assert all(A.op("neg", a) == O.M4_NEG[a] for a in O.M4_ELEMS)


def _ref(m):
    return (m.algebra.carrier, O.ops_of(m.algebra), set(m.filter))


SEQUENTS = [
    ([], "p \\/ ~p"),
    (["p"], "p \\/ q"),
    (["p /\\ q"], "p"),
    (["p", "~p"], "q"),
    (["p /\\ ~p"], "q"),
    (["p \\/ q", "~p"], "q"),
    (["~~p"], "p"),
    (["p"], "~~p"),
    (["p /\\ q"], "p \\/ q"),
    (["~(p /\\ q)"], "~p \\/ ~q"),
]


@pytest.mark.parametrize("name", ["CLm", "B3", "PWK", "K4wn", "LPm", "Sfde", "Bm"])
def test_entailment_against_reference(P, DM, name):
    m = builtin(name)
    sig = m.signature
    for gamma, phi in SEQUENTS:
        g, f = [P(t, sig) for t in gamma], P(phi, sig)
        bad = O.naive_countermodels(*_ref(m), g, f)
        cm = find_countermodel(m, g, f)
        assert (cm is None) == (not bad), (name, gamma, phi)
        if bad:
            assert cm.assignment == O.lex_first(bad, m.algebra.carrier)


class TestKnownFacts:
    def test_pwk_fails_conjunction_elimination(self, P, DM):
        cm = find_countermodel(PWK, [P("p /\\ q", DM)], P("p", DM))
        assert cm.assignment == {"p": "0", "q": "u"}

    def test_wk_with_top_filter_keeps_simplification(self, P):
        m = LogicalMatrix(builtin("WK"), ["1"])
        assert entails(m, [P("p /\\ q")], P("p"))

    def test_lp_explosion_fails(self, P, DM):
        assert not entails(LPm, [P("p", DM), P("~p", DM)], P("q", DM))

    def test_classical_explosion(self, P):
        assert entails(CLm, [P("p"), P("~p")], P("q"))

    def test_b3_is_paracomplete(self, P):
        assert not entails(B3, [], P("p \\/ ~p"))

    def test_fde_has_no_theorems_of_this_shape(self, P, DM):
        assert not entails(Bm, [], P("p \\/ ~p", DM))
        assert not entails(Bm, [P("p", DM), P("~p", DM)], P("q", DM))

    def test_family_is_intersection(self, P, DM):
        fam = MatrixFamily.of(LPm, K4wn, name="both")
        for gamma, phi in SEQUENTS:
            g, f = [P(t, DM) for t in gamma], P(phi, DM)
            members = [O.naive_entails([_ref(m)], g, f) for m in (LPm, K4wn)]
            assert entails(fam, g, f) == all(members)
        cm = find_countermodel(fam, [P("p", DM), P("~p", DM)], P("q", DM))
        assert cm.matrix == "LPm"

    def test_wrong_signature(self, P):
        with pytest.raises(SignatureError):
            entails(PWK, [P("p -> q")], P("p"))


class TestAntitheorems:
    def test_contradiction_in_classical_logic(self, P):
        assert is_antitheorem(CLm, [P("x"), P("~x")])

    def test_contradiction_in_b3(self, P):
        assert is_antitheorem(B3, [P("x"), P("~x")])

    def test_not_in_paraconsistent(self, P, DM):
        assert not is_antitheorem(LPm, [P("x", DM), P("~x", DM)])

    def test_pwk_has_none_of_this_shape(self, P, DM):
        assert not is_antitheorem(PWK, [P("x", DM), P("~x", DM)])

    def test_one_variable_required(self, P):
        with pytest.raises(PreconditionError):
            is_antitheorem(CLm, [P("x"), P("~y")])

    def test_empty_filter_makes_everything_explode(self, P):
        assert is_antitheorem(builtin("TWO_EMPTY"), [P("x")])


def test_trivial_matrices():
    assert is_trivial_matrix(builtin("TWO_TRIV"))
    assert is_trivial_matrix(builtin("ONE_TRIV"))
    assert not is_trivial_matrix(CLm)


def test_is_model_of(P, DM):
    ok = [Rule("R1", (P("p", DM),), P("p \\/ q", DM))]
    bad = ok + [Rule("R2", (P("p /\\ q", DM),), P("p", DM))]
    assert is_model_of(PWK, ok)
    v = is_model_of(PWK, bad)
    assert not v and v.reason == "R2"


def test_matrix_helpers():
    r = B3.renamed({"u": "h"})
    assert "h" in r.algebra.carrier and r.filter == B3.filter
    s = B3.reordered(["1", "u", "0"])
    assert s.algebra.carrier == ("1", "u", "0") and s.same_structure(B3)
    with pytest.raises(ValueError):
        LogicalMatrix(builtin("WK"), ["2"])
