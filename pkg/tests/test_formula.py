import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_ldlf, random_ltlf, random_path, words
from ldlfmon.formula import (
    END, EPS, FF, LAST, TRUE, TT, And, Always, Box, Diamond, Letter, LtlProp,
    Next, Not, Or, PAtom, PNot, Prop, Seq, Star, Union, Until, WeakNext, atoms,
    ltlf_to_ldlf, nnf, regex_embed, rename_atoms, subformulas,
)
from ldlfmon.formula import Test as PathTest
from ldlfmon.semantics import eval_ltlf, powerset_symbols, satisfies
from ldlfmon.syntax import ParseError, parse_ldlf, parse_ltlf, parse_path, render

a, b = PAtom("a"), PAtom("b")
SYMS2 = powerset_symbols("ab")


class TestHashConsing:
    def test_equal_structure_is_identical(self):
        assert Diamond(Letter(a), TT) is Diamond(Letter(a), TT)

    def test_distinct_structure(self):
        assert Diamond(Letter(a), TT) is not Box(Letter(a), TT)

    def test_prop_and_tt_are_different(self):
        assert Prop(TRUE) is not TT


class TestParse:
    def test_diamond(self):
        assert parse_ldlf("<a>tt") is Diamond(Letter(a), TT)

    def test_box_of_star(self):
        assert parse_ldlf("[(a;b)*]ff") is Box(Star(Seq(Letter(a), Letter(b))), FF)

    @pytest.mark.parametrize("text", ["<tt?>", "<a>", "a &", "[a", "(a"])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_ldlf(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_ldlf("<a>tt & [a")
        assert info.value.line == 1 and info.value.column == 11

    def test_precedence(self):
        assert parse_ldlf("a | b & !a") is parse_ldlf("a | (b & (!a))")
        assert parse_path("a;b + b") is Union(Seq(Letter(a), Letter(b)), Letter(b))

    def test_ltlf_examples(self):
        f = parse_ltlf("G(a -> F b)")
        assert isinstance(f, Always)
        assert parse_ltlf("a U b") is Until(LtlProp(a), LtlProp(b))
        with pytest.raises(ParseError):
            parse_ltlf("U a")


class TestRender:
    def test_examples(self):
        assert render(Diamond(Letter(a), TT)) == "<a>tt"
        assert render(END) == "[true]ff"
        assert render(Star(PathTest(TT))) == "(tt?)*"

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 10**9))
    def test_round_trip(self, seed):
        f = random_ldlf(random.Random(seed), ["a", "b", "c"], 5)
        assert parse_ldlf(render(f)) is f

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**9))
    def test_round_trip_ltlf(self, seed):
        f = random_ltlf(random.Random(seed), ["a", "b"], 4)
        assert parse_ltlf(render(f)) is f


NEGATED_KINDS = ("Tt", "Ff", "And", "Or", "Diamond", "Box")


class TestNnf:
    def test_dual(self):
        r = Letter(a)
        assert nnf(Not(Diamond(r, Prop(b)))) is Box(r, nnf(Not(Prop(b))))

    def test_double_negation(self):
        assert nnf(Not(Not(TT))) is TT

    def test_example_equivalence(self):
        # ¬(a ∧ ⟨b⟩tt) against ¬a ∨ [b]ff on every trace of length <= 3
        f = nnf(Not(And(Prop(a), Diamond(Letter(b), TT))))
        g = Or(Not(Prop(a)), Box(Letter(b), FF))
        for w in words(SYMS2, 3):
            assert satisfies(w, f) == satisfies(w, g)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**9))
    def test_equivalence_and_shape(self, seed):
        f = random_ldlf(random.Random(seed), ["a", "b", "c"], 4)
        g = nnf(f)
        for n in subformulas(g):
            if isinstance(n, Not):
                assert type(n.arg).__name__ not in NEGATED_KINDS
        for w in words(powerset_symbols("abc"), 2):
            assert satisfies(w, f) == satisfies(w, g)


class TestLtlfTranslation:
    def test_weak_next(self):
        assert ltlf_to_ldlf(WeakNext(LtlProp(a))) is parse_ldlf("[true][!a]ff")

    def test_always(self):
        assert ltlf_to_ldlf(Always(LtlProp(a))) is parse_ldlf("[true*][!a]ff")

    def test_until_shape(self):
        f = ltlf_to_ldlf(Until(LtlProp(a), LtlProp(b)))
        assert isinstance(f, Diamond) and isinstance(f.path, Star)

    def test_next_at_last_step(self):
        f = ltlf_to_ldlf(Next(LtlProp(a)))
        assert not satisfies([{"a"}], f)
        assert satisfies([{"b"}, {"a"}], f)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 10**9))
    def test_soundness(self, seed):
        g = random_ltlf(random.Random(seed), ["a", "b"], 4)
        f = ltlf_to_ldlf(g)
        for w in words(SYMS2, 4):
            assert satisfies(w, f) == eval_ltlf(w, g), (render(g), w)


class TestRegexEmbed:
    def test_sequence(self):
        f = regex_embed(parse_path("a;b"))
        sat = [w for w in words(SYMS2, 3) if satisfies(w, f)]
        one_hot = [w for w in sat if all(len(s) == 1 for s in w)]
        assert one_hot == [(frozenset("a"), frozenset("b"))]

    def test_universal(self):
        f = regex_embed(parse_path("true*"))
        assert all(satisfies(w, f) for w in words(SYMS2, 3))

    def test_rejects_tests(self):
        with pytest.raises(ValueError):
            regex_embed(parse_path("tt?;a"))


def test_abbreviations():
    assert satisfies([], END)
    assert not satisfies([{"a"}], END)
    assert satisfies([{"a"}], LAST)
    assert not satisfies([{"a"}, {"a"}], LAST)
    assert satisfies([], Diamond(EPS, TT))


def test_atoms_and_rename():
    f = parse_ldlf("<a;b*>(c & [true]ff)")
    assert atoms(f) == {"a", "b", "c"}
    g = rename_atoms(f, {"a": PNot(b), "c": a})
    assert g is parse_ldlf("<!b;b*>(a & [true]ff)")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_random_paths_render(seed):
    r = random_path(random.Random(seed), ["a", "b"], 4)
    assert parse_path(render(r)) is r
