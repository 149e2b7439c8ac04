import numpy as np
import pytest

import oracles as O
from plonkalog import (
    FiniteAlgebra,
    Homomorphism,
    Identity,
    Semilattice,
    SignatureError,
    builtin,
    check_homomorphism,
    check_identity,
    check_partition_function,
    evaluate_term,
    is_regular_identity,
    trivial_algebra,
    validate_semilattice,
)
from plonkalog.algebra import assignment_grid, partition_equations, star_table
from plonkalog.errors import EvaluationError, PartitionFunctionError

TWO, WK, S4, ONE = (builtin(n) for n in ("TWO", "WK", "S4", "ONE"))


class TestEvaluate:
    def test_infectious_value(self, P):
        assert evaluate_term(WK, P("x /\\ y"), {"x": "1", "y": "u"}) == "u"

    def test_excluded_middle_in_two(self, P):
        assert evaluate_term(TWO, P("x \\/ ~x"), {"x": "0"}) == "1"

    def test_s4_absorbing_middle(self, P, DM):
        assert evaluate_term(S4, P("x /\\ y", DM), {"x": "0", "y": "m"}) == "m"

    def test_unbound_variable(self, P):
        with pytest.raises(EvaluationError):
            evaluate_term(WK, P("x /\\ y"), {"x": "1"})

    def test_symbol_absent(self, P):
        with pytest.raises(EvaluationError):
            evaluate_term(S4, P("x -> y"), {"x": "0", "y": "0"})

    def test_agrees_with_reference_evaluator(self, P):
        ops = O.wk_ops()
        for text in ["~(x /\\ y) -> (x \\/ ~z)", "x /\\ (x \\/ y)", "(x -> y) -> z"]:
            phi = P(text)
            for asg in O.assignments({"x", "y", "z"}, WK.carrier):
                assert evaluate_term(WK, phi, asg) == O.ev(ops, phi, asg)

    def test_assignment_grid_order(self):
        g = assignment_grid(3, 2)
        assert g.shape == (2, 9)
        assert g[:, 1].tolist() == [0, 1]  # last variable varies fastest
        assert assignment_grid(5, 0).shape == (0, 1)


class TestConstruction:
    def test_partial_table_rejected(self, BOOL):
        with pytest.raises(SignatureError):
            FiniteAlgebra("A", BOOL, ["0"], {"neg": np.zeros(1, dtype=int)})

    def test_table_leaving_carrier_rejected(self, BOOL):
        tabs = {s: np.full((2,) * BOOL.arity(s), 2) for s in BOOL.symbols}
        with pytest.raises(ValueError):
            FiniteAlgebra("A", BOOL, ["0", "1"], tabs)

    def test_tables_are_read_only(self):
        with pytest.raises(ValueError):
            WK.tables["and"][0, 0] = 1

    def test_subalgebra_must_be_closed(self):
        with pytest.raises(ValueError):
            WK.subalgebra(["0", "u"])


class TestHomomorphism:
    def test_constant_into_trivial(self):
        assert check_homomorphism(Homomorphism(TWO, ONE, {"0": "e", "1": "e"}))

    def test_identity_on_wk(self):
        assert check_homomorphism(Homomorphism(WK, WK, {a: a for a in WK.carrier}))

    def test_swap_is_not_an_endomorphism(self):
        # Oracle first: swapping 0 and 1 turns meets into joins.
        swap = {"0": "1", "1": "0"}
        ops = O.bool_ops()
        bad = [
            (s, args)
            for s in ("neg", "and", "or")
            for args in __import__("itertools").product("01", repeat=1 if s == "neg" else 2)
            if swap[ops[s](*args)] != ops[s](*(swap[a] for a in args))
        ]
        assert bad and bad[0][0] == "and"
        A = TWO.with_signature(builtin("DM"))
        v = check_homomorphism(Homomorphism(A, A, swap))
        assert not v and v.witness["symbol"] == "and"

    def test_collapse_fails_on_negation(self):
        A = TWO.with_signature(builtin("DM"))
        v = check_homomorphism(Homomorphism(A, A, {"0": "1", "1": "1"}))
        assert not v and v.witness["symbol"] == "neg"

    def test_signature_mismatch(self):
        with pytest.raises(SignatureError):
            check_homomorphism(Homomorphism(TWO, S4, {"0": "0", "1": "1"}))


class TestIdentities:
    def test_commutativity_in_wk(self, P):
        assert check_identity(WK, Identity(P("x \\/ y"), P("y \\/ x")))

    def test_absorption_fails_in_wk(self, P):
        e = Identity(P("x /\\ (x \\/ y)"), P("x"))
        bad = O.identity_counterexamples(WK.carrier, O.wk_ops(), e.lhs, e.rhs)
        first = O.lex_first(bad, WK.carrier)
        assert first == {"x": "0", "y": "u"}
        assert {"x": "1", "y": "u"} in bad  # 1 /\ (1 \/ u) = u as well
        v = check_identity(WK, e)
        assert not v and v.witness["assignment"] == first

    def test_trivial_algebra_satisfies_everything(self, P):
        assert check_identity(ONE, Identity(P("x /\\ (x \\/ y)"), P("z")))

    def test_regularity(self, P):
        assert is_regular_identity(Identity(P("x \\/ y"), P("y \\/ x")))
        assert not is_regular_identity(Identity(P("x /\\ (x \\/ y)"), P("x")))
        assert is_regular_identity(Identity(P("x"), P("x")))

    @pytest.mark.parametrize("name", ["TWO", "WK", "K4", "SK", "S4", "M4"])
    def test_first_counterexample_matches_reference(self, P, DM, name):
        A = builtin(name)
        ops = O.ops_of(A)
        for l, r in [("x /\\ (x \\/ y)", "x"), ("~(x /\\ y)", "~x \\/ ~y"), ("x \\/ ~x", "y \\/ ~y"), ("x /\\ y", "y")]:
            e = Identity(P(l, DM), P(r, DM))
            bad = O.identity_counterexamples(A.carrier, ops, e.lhs, e.rhs)
            v = check_identity(A, e)
            assert bool(v) == (not bad)
            if bad:
                assert v.witness["assignment"] == O.lex_first(bad, A.carrier)


class TestPartitionFunctions:
    def test_lattice_term_on_two(self, star):
        assert check_partition_function(TWO, star)

    def test_lattice_term_on_wk(self, star):
        # reference: check every P-equation instance by hand
        ops = O.wk_ops()
        for _, e in partition_equations(star, WK.signature):
            assert not O.identity_counterexamples(WK.carrier, ops, e.lhs, e.rhs)
        assert check_partition_function(WK, star)

    def test_join_is_not_a_partition_function_on_two(self, P):
        s = P("x \\/ y")
        failing = [
            label
            for label, e in partition_equations(s, TWO.signature)
            if O.identity_counterexamples(TWO.carrier, O.bool_ops(), e.lhs, e.rhs)
        ]
        assert "P5[neg]" in failing
        v = check_partition_function(TWO, s)
        assert not v and v.reason == failing[0]

    def test_equation_inventory(self, star, BOOL):
        labels = [l for l, _ in partition_equations(star, BOOL)]
        assert labels == ["P1", "P2", "P3"] + [f"P{k}[{g}]" for g in BOOL.symbols for k in (4, 5)]

    def test_star_shape(self, P):
        with pytest.raises(PartitionFunctionError):
            check_partition_function(TWO, P("x /\\ z"))
        with pytest.raises(PartitionFunctionError):
            check_partition_function(TWO, P("x /\\ x"))

    def test_star_table(self, star):
        T = star_table(WK, star)
        c = WK.carrier
        assert c[T[c.index("1"), c.index("u")]] == "u"
        assert c[T[c.index("1"), c.index("0")]] == "1"


class TestSemilattice:
    def test_chain(self):
        assert validate_semilattice(Semilattice.from_pairs("S", ["i", "j"], {("i", "j"): "j"})).ok

    def test_boolean_lattice(self):
        assert validate_semilattice(builtin("BOOL4")).ok

    def test_commutativity_violation(self):
        S = Semilattice("S", ["i", "j"], {("i", "i"): "i", ("j", "j"): "j", ("i", "j"): "i", ("j", "i"): "j"})
        rep = validate_semilattice(S)
        assert "commutativity" in rep.laws()

    def test_associativity_violation(self):
        E = ["a", "b", "c"]
        J = {(i, i): i for i in E}
        J.update({("a", "b"): "b", ("b", "a"): "b", ("b", "c"): "c", ("c", "b"): "c", ("a", "c"): "a", ("c", "a"): "a"})
        assert "associativity" in validate_semilattice(Semilattice("S", E, J)).laws()

    def test_incomplete_table(self):
        rep = validate_semilattice(Semilattice("S", ["i", "j"], {("i", "i"): "i"}))
        assert "total" in rep.laws()

    def test_order(self):
        S = builtin("BOOL4")
        assert S.leq("i", "s") and not S.leq("j", "k")
        assert S.join("j", "k") == "s"


def test_trivial_algebra(BOOL):
    A = trivial_algebra(BOOL)
    assert A.carrier == ("e",) and A == builtin("ONE")
