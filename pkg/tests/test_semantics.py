import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_ldlf, random_path, words
from ldlfmon.declare import instantiate_pattern
from ldlfmon.formula import (
    END, FALSE, FF, TRUE, TT, And, Box, Diamond, Letter, Not, Or, PAtom, Prop, Seq, Star,
    Union, Always, Eventually, LtlProp, Next,
)
from ldlfmon.formula import Test as PathTest
from ldlfmon.semantics import (
    PrefixOracle, classify_prefix_bruteforce, eval_at, eval_ltlf, path_match,
    powerset_symbols, satisfies,
)
from ldlfmon.syntax import parse_ldlf

a, b = PAtom("a"), PAtom("b")
SYMS2 = powerset_symbols("ab")
EMPTY = ()


class TestEmptyTraceClauses:
    """Every formula evaluated past the end of the trace."""

    phi = Prop(a)
    psi = Diamond(Letter(b), TT)

    @pytest.mark.parametrize("trace,i", [(EMPTY, 1), ([{"a"}], 2), ([{"a"}, {"b"}], 3)])
    def test_table(self, trace, i):
        holds = lambda f: eval_at(trace, i, f)  # noqa: E731
        assert holds(TT)
        assert not holds(FF)
        assert not holds(Prop(TRUE)), "propositions never hold past the end"
        assert not holds(self.phi)
        assert holds(Not(self.phi)) == (not holds(self.phi))
        assert holds(And(TT, self.psi)) == (holds(TT) and holds(self.psi))
        assert holds(Or(TT, self.psi)) == (holds(TT) or holds(self.psi))
        for r in (Letter(a), PathTest(TT), Star(Letter(a)), Union(Letter(a), PathTest(TT))):
            at_i = path_match(trace, i, i, r)
            assert holds(Diamond(r, TT)) == at_i
            assert holds(Box(r, FF)) == (not at_i)

    def test_path_clauses(self):
        assert not path_match(EMPTY, 1, 1, Letter(TRUE))
        assert path_match(EMPTY, 1, 1, PathTest(TT))
        assert not path_match(EMPTY, 1, 1, PathTest(FF))
        assert path_match(EMPTY, 1, 1, Union(Letter(a), PathTest(TT)))
        assert path_match(EMPTY, 1, 1, Seq(PathTest(TT), PathTest(TT)))
        assert not path_match(EMPTY, 1, 1, Seq(PathTest(TT), Letter(a)))
        assert path_match(EMPTY, 1, 1, Star(Letter(a)))


class TestExamples:
    def test_end_on_empty(self):
        assert eval_at(EMPTY, 1, END)

    def test_diamond_on_empty(self):
        assert not eval_at(EMPTY, 1, Diamond(Letter(a), TT))

    def test_full_match(self):
        assert eval_at([{"a"}, {"b"}], 1, parse_ldlf("<a;b>[true]ff"))

    def test_letter_consumes_last_step(self):
        assert path_match([{"a"}], 1, 2, Letter(a))

    def test_star_reflexive(self):
        t = [{"a"}, {"b"}]
        for i in (1, 2, 3):
            assert path_match(t, i, i, Star(Letter(b)))

    def test_failed_test(self):
        assert not path_match([{"a"}], 1, 1, PathTest(Prop(b)))

    def test_satisfies(self):
        assert satisfies(EMPTY, TT)
        assert satisfies(EMPTY, parse_ldlf("<true*>[true]ff"))
        assert satisfies([{"a"}], parse_ldlf("<true>[true]ff"))

    def test_ltlf(self):
        G, F, X = Always, Eventually, Next
        assert eval_ltlf([{"a"}], G(LtlProp(a)))
        assert eval_ltlf(EMPTY, G(LtlProp(a)))
        assert not eval_ltlf(EMPTY, F(LtlProp(a)))
        assert eval_ltlf([{"a"}, {"b"}], X(LtlProp(b)))

    def test_position_checks(self):
        with pytest.raises(ValueError):
            eval_at([{"a"}], 0, TT)
        with pytest.raises(ValueError):
            path_match([{"a"}], 1, 4, Letter(a))

    def test_test_only_star_terminates(self):
        f = parse_ldlf("<(tt? + (a?)*)*>a")
        assert satisfies([{"a"}], f)
        assert not satisfies([{"b"}], f)


class TestOracle:
    def test_unsatisfiable(self):
        for w in words(SYMS2, 2):
            assert not classify_prefix_bruteforce(w, FF, 2, SYMS2).poss_good

    def test_nonempty(self):
        c = classify_prefix_bruteforce((), parse_ldlf("<true>tt"), 2, SYMS2)
        assert c.poss_good and not c.nec_good

    def test_absence2_double(self):
        f = instantiate_pattern("absence2", ["a"])
        syms = [frozenset("a"), frozenset({"o"})]
        assert classify_prefix_bruteforce([{"a"}, {"a"}], f, 3, syms).nec_bad

    def test_horizon_must_be_positive(self):
        with pytest.raises(ValueError):
            PrefixOracle(TT, SYMS2, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 3))
def test_duality(seed, length):
    rng = random.Random(seed)
    r = random_path(rng, ["a", "b"], 3)
    f = random_ldlf(rng, ["a", "b"], 3)
    t = [rng.choice(SYMS2) for _ in range(length)]
    for i in range(1, length + 2):
        assert eval_at(t, i, Box(r, f)) == (not eval_at(t, i, Diamond(r, Not(f))))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_models_are_possibly_good(seed):
    f = random_ldlf(random.Random(seed), ["a", "b"], 3)
    oracle = PrefixOracle(f, SYMS2, 1)
    for w in words(SYMS2, 3):
        if satisfies(w, f):
            assert oracle.poss_good(w)
