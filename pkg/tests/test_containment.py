import itertools

import pytest

import oracles as O
from plonkalog import (
    BaseLogic,
    BoundExceeded,
    MatrixFamily,
    PreconditionError,
    SignatureError,
    builtin,
    check_companion_equivalence,
    containment_entails,
    formula_space,
    verify_r_partition_function,
)
from plonkalog.syntax import Var

def _ref(m):
    return (m.algebra.carrier, O.ops_of(m.algebra), set(m.filter))


def reference_companion(L, gamma, phi):
    mats = [_ref(m) for m in L.family]
    if O.variables(phi) <= O.variables(*gamma) and O.naive_entails(mats, gamma, phi):
        return True
    if L.antitheorem is None or not gamma:
        return False
    used = O.variables(*gamma, phi)
    fresh = Var(next(v for v in (f"z{k}" for k in itertools.count()) if v not in used))
    return O.naive_entails(mats, gamma, fresh)


@pytest.fixture(scope="module")
def bases():
    sigma = builtin("SIGMA")
    return {
        "CL": BaseLogic(builtin("CLm"), sigma, "CL"),
        "PWK": BaseLogic(builtin("PWK"), None, "PWK"),
        "LP": BaseLogic(builtin("LPm"), None, "LP"),
    }


class TestCompanion:
    def test_variable_inclusion(self, P, bases):
        assert not containment_entails(bases["CL"], [P("p")], P("p \\/ q"))
        assert containment_entails(bases["CL"], [P("p /\\ q")], P("p \\/ q"))

    def test_antitheorem_clause(self, P, bases):
        assert containment_entails(bases["CL"], [P("p"), P("~p")], P("q"))
        assert containment_entails(bases["CL"], [P("p /\\ ~p")], P("q"))

    def test_readings_differ_on_hidden_contradiction(self, P, bases):
        g, f = [P("p /\\ ~p")], P("q")
        assert containment_entails(bases["CL"], g, f, reading="inconsistent")
        assert not containment_entails(bases["CL"], g, f, reading="instance")
        assert not containment_entails(bases["CL"], g, f, reading="literal")

    def test_instance_reading(self, P, bases):
        g = [P("r /\\ q"), P("~(r /\\ q)")]
        assert containment_entails(bases["CL"], g, P("s"), reading="instance")
        assert not containment_entails(bases["CL"], g, P("s"), reading="literal")
        assert containment_entails(bases["CL"], [P("x"), P("~x")], P("s"), reading="literal")

    def test_no_antitheorem(self, P, DM, bases):
        assert not containment_entails(bases["LP"], [P("p", DM), P("~p", DM)], P("q", DM))

    def test_unknown_reading(self, P, bases):
        with pytest.raises(ValueError):
            containment_entails(bases["CL"], [P("p")], P("p"), reading="loose")

    def test_rejects_fake_antitheorem(self, P, DM):
        with pytest.raises(PreconditionError):
            BaseLogic(builtin("LPm"), (P("x", DM), P("~x", DM)))

    @pytest.mark.parametrize("name", ["CL", "PWK", "LP"])
    def test_agrees_with_reference(self, bases, name):
        L = bases[name]
        space = formula_space(L.signature, ["p", "q"], 1)
        for gamma in itertools.chain([()], itertools.combinations(space, 1), itertools.combinations(space, 2)):
            for phi in space:
                assert containment_entails(L, gamma, phi) == reference_companion(L, gamma, phi), (gamma, phi)


class TestRPartitionFunction:
    def test_lattice_term_in_classical_logic(self, star, bases):
        assert verify_r_partition_function(bases["CL"], star)

    def test_join_fails_clause_ii(self, P, bases):
        v = verify_r_partition_function(bases["CL"], P("x \\/ y"))
        assert not v and v.reason == "(ii)"

    def test_meet_fails_clause_iii(self, P, bases):
        # x /\ y satisfies (i) and (ii) but is not a partition function (P2 fails)
        v = verify_r_partition_function(bases["CL"], P("x /\\ y"))
        assert not v and v.reason.startswith("(iii)")


def _count_upto(v, unary, binary, d):
    t = v
    for _ in range(d):
        t = v + unary * t + binary * t * t
    return t


@pytest.mark.parametrize("nv, d", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_formula_space_counts(BOOL, DM, nv, d):
    vs = ["p", "q", "r"][:nv]
    sp = formula_space(DM, vs, d)
    assert len(sp) == len(set(sp)) == _count_upto(nv, 1, 2, d)
    assert len(formula_space(BOOL, vs, d)) == _count_upto(nv, 1, 3, d)


class TestHarness:
    @pytest.mark.parametrize(
        "cand, base, sigma",
        [("B3", "CLm", True), ("K4wn", "PWK", False), ("Sfde", "LPm", False), ("CLm", "CLm", True), ("LPm", "Sfde", False)],
    )
    def test_compressed_equals_naive(self, cand, base, sigma):
        L = BaseLogic(builtin(base), builtin("SIGMA") if sigma else None)
        kw = dict(variables=["p", "q"], depth=1, max_premises=2)
        fast = check_companion_equivalence(builtin(cand), L, **kw)
        slow = check_companion_equivalence(builtin(cand), L, naive=True, **kw)
        assert fast.sequents_checked == slow.sequents_checked
        assert fast.disagreeing_sequents == slow.disagreeing_sequents

    def test_detects_mismatch_with_witness(self):
        L = BaseLogic(builtin("CLm"), builtin("SIGMA"))
        rep = check_companion_equivalence(builtin("CLm"), L, variables=["p", "q"], depth=1, max_premises=1)
        assert not rep.ok
        d = rep.disagreements[0]
        assert d.candidate and not d.companion
        assert "do not occur" in d.witness or "countermodel" in d.witness

    def test_b3_is_the_companion_of_classical_logic(self):
        L = BaseLogic(builtin("CLm"), builtin("SIGMA"))
        rep = check_companion_equivalence(builtin("B3"), L, variables=["p", "q"], depth=2, max_premises=2)
        assert rep.ok and rep.sequents_checked > 10**6

    def test_signature_mismatch(self):
        with pytest.raises(SignatureError):
            check_companion_equivalence(builtin("B3"), BaseLogic(builtin("LPm")))

    def test_bound(self):
        L = BaseLogic(builtin("CLm"), builtin("SIGMA"))
        with pytest.raises(BoundExceeded):
            check_companion_equivalence(builtin("B3"), L, depth=2, naive=True, max_work=1000)

    def test_parallel_matches_serial(self):
        L = BaseLogic(builtin("LPm"))
        s = check_companion_equivalence(builtin("K4wn"), L, variables=["p", "q"], depth=2, jobs=1)
        p = check_companion_equivalence(builtin("K4wn"), L, variables=["p", "q"], depth=2, jobs=4)
        assert s.disagreeing_sequents == p.disagreeing_sequents > 0

    def test_family_candidate(self):
        L = BaseLogic(builtin("LPm"))
        fam = MatrixFamily.of(builtin("Sfde"), name="one")
        assert check_companion_equivalence(fam, L, variables=["p", "q"], depth=1).ok
