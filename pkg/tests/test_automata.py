import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_ldlf, reach_counts, words
from ldlfmon.automata import (
    B_FALSE, B_TRUE, EPSILON, LAST, NOTHING, Alphabet, BAnd, BAtom, BOr, Dfa, Nfa,
    NotInNnf, StateLimitExceeded, UnknownSymbol, accepts, check_satisfiable,
    coaccessible_states, combine, complement, default_max_states, delta, determinize,
    equivalent, formula_automaton, formula_dfa, guard, implies, is_empty, ldlf_to_nfa,
    minimal_models, minimize, prefix_automaton, strip_last, to_dot, to_regex, valid,
)
from ldlfmon.declare import instantiate_pattern
from ldlfmon.formula import (
    END, EPS, FF, TT, Diamond, LdlfFormula, Letter, Not, PAtom, nnf, regex_embed, subformulas,
)
from ldlfmon.semantics import PrefixOracle, satisfies
from ldlfmon.syntax import parse_ldlf, parse_path, render

AB = Alphabet.powerset(["a", "b"])
a = PAtom("a")


def language(x, alphabet, max_len):
    return {w for w in words(alphabet.symbols, max_len) if accepts(x, w)}


def dfa_for(text, alphabet=AB):
    return formula_dfa(parse_ldlf(text), alphabet)


# --------------------------------------------------------------------------
# alphabet


class TestAlphabet:
    def test_powerset_order(self):
        assert AB.symbols == (frozenset(), frozenset("a"), frozenset("b"), frozenset("ab"))

    def test_tasks(self):
        t = Alphabet.of_tasks(["x", "y"])
        assert t.symbol_for("x") == frozenset("x")
        with pytest.raises(UnknownSymbol):
            t.symbol_for("z")
        with pytest.raises(ValueError):
            Alphabet.of_tasks(["x", "x"])

    def test_reserved_names_rejected(self):
        with pytest.raises(ValueError):
            Alphabet.of_tasks(["last"])

    def test_with_last(self):
        marked = AB.with_last()
        assert marked[1] == frozenset({LAST})
        assert len(marked) == 2 * len(AB)


# --------------------------------------------------------------------------
# delta


class TestDelta:
    def test_diamond_not_last(self):
        assert delta(parse_ldlf("<a>tt"), frozenset("a")) == BAtom(TT)

    def test_diamond_last(self):
        assert delta(parse_ldlf("<a>tt"), frozenset({"a", LAST})) is B_TRUE

    def test_box_unmatched(self):
        assert delta(parse_ldlf("[a]ff"), frozenset("b")) is B_TRUE

    def test_requires_nnf(self):
        with pytest.raises(NotInNnf):
            delta(Not(Diamond(Letter(a), TT)), frozenset())

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**9))
    def test_epsilon_is_constant(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 4))
        for g in subformulas(f):
            if isinstance(g, LdlfFormula):
                assert delta(g, EPSILON) in (B_TRUE, B_FALSE)


class TestMinimalModels:
    x, y = BAtom(parse_ldlf("a")), BAtom(parse_ldlf("b"))

    def test_or(self):
        assert minimal_models(BOr(self.x, self.y)) == {frozenset([self.x.formula]),
                                                         frozenset([self.y.formula])}

    def test_absorption(self):
        assert minimal_models(BOr(BAnd(self.x, self.y), self.x)) == {frozenset([self.x.formula])}

    def test_false(self):
        assert minimal_models(B_FALSE) == set()

    def test_true(self):
        assert minimal_models(B_TRUE) == {frozenset()}


# --------------------------------------------------------------------------
# construction


class TestConstruction:
    def test_tt(self):
        marked = ldlf_to_nfa(TT, AB)
        assert marked.num_states == 1 and marked.accepting == {0}
        assert all(marked.transitions[0][k] == {0} for k in range(len(marked.symbols)))
        nfa = formula_automaton(TT, AB)
        assert language(nfa, AB, 3) == set(words(AB.symbols, 3))

    def test_nonempty(self):
        nfa = formula_automaton(parse_ldlf("<true>tt"), AB)
        assert language(nfa, AB, 3) == {w for w in words(AB.symbols, 3) if w}

    def test_absence2(self):
        f = instantiate_pattern("absence2", ["close_order"])
        al = Alphabet.of_tasks(["close_order", "cancel_order", "pay_suppl"])
        for w in words(al.symbols, 4):
            closes = sum("close_order" in s for s in w)
            assert accepts(formula_automaton(f, al), w) == (closes <= 1)

    def test_marked_nfa_must_be_stripped(self):
        marked = ldlf_to_nfa(parse_ldlf("<a>tt"), AB)
        assert marked.marked
        with pytest.raises(ValueError):
            determinize(marked)
        with pytest.raises(ValueError):
            strip_last(strip_last(marked))

    def test_state_limit(self):
        with pytest.raises(StateLimitExceeded):
            formula_automaton(parse_ldlf("<a;b;a;b>tt"), AB, max_states=2)

    def test_state_limit_from_env(self, monkeypatch):
        monkeypatch.setenv("LDLFMON_MAX_STATES", "3")
        assert default_max_states() == 3
        with pytest.raises(StateLimitExceeded):
            formula_dfa(parse_ldlf("<a;b;a;b;a>tt"), AB)
        monkeypatch.setenv("LDLFMON_MAX_STATES", "zero")
        with pytest.raises(ValueError):
            default_max_states()

    def test_default_limit(self, monkeypatch):
        monkeypatch.delenv("LDLFMON_MAX_STATES", raising=False)
        assert default_max_states() == 1_000_000

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_oracle_agreement(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 4))
        nfa = formula_automaton(f, AB)
        dfa = formula_dfa(f, AB)
        for w in words(AB.symbols, 3):
            assert accepts(nfa, w) == accepts(dfa, w) == satisfies(w, f)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_state_bound(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 4))
        marked = ldlf_to_nfa(f, AB)
        quoted = set().union(*marked.labels)
        assert marked.num_states <= 2 ** len(quoted)


class TestSatisfiability:
    def test_ff(self):
        assert not check_satisfiable(FF, AB)

    def test_task_alphabet(self):
        # with one task per step, <a>tt demands an a that [a]ff forbids
        assert not check_satisfiable(parse_ldlf("<a>tt & [a]ff"), Alphabet.of_tasks(["a"]))

    def test_valid(self):
        assert valid(TT, AB)
        assert not valid(parse_ldlf("<true>tt"), AB)

    def test_implies(self):
        assert implies(parse_ldlf("<a>tt"), parse_ldlf("<true>tt"), AB)
        assert not implies(parse_ldlf("<true>tt"), parse_ldlf("<a>tt"), AB)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_matches_enumeration(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 3))
        d = formula_dfa(f, AB)
        assert check_satisfiable(f, AB) == (not is_empty(d))


# --------------------------------------------------------------------------
# dfa operations


class TestDfaOps:
    def test_union_letter_dfa(self):
        nfa = formula_automaton(regex_embed(parse_path("a + a")), AB)
        d = determinize(nfa)
        live = coaccessible_states(d)
        assert len(live) == 2

    def test_empty_nfa(self):
        nfa = formula_automaton(FF, AB)
        d = determinize(nfa)
        assert d.accepting == frozenset()
        assert is_empty(d)

    def test_minimize_merges_bisimilar(self):
        sym = range(len(AB))
        d = Dfa(AB, ("p", "q", "r"), 0, tuple(tuple(1 if q == 0 else 2 for _ in sym)
                                                for q in range(3)), frozenset({1, 2}))
        # states 1 and 2 both accept and loop among themselves
        m = minimize(d)
        assert m.num_states == 2

    def test_minimize_idempotent(self):
        d = dfa_for("<a;b*>[true]ff")
        assert minimize(d) == d

    def test_product_with_complement(self):
        d = dfa_for("<a>tt | [b]ff")
        assert is_empty(combine(d, complement(d), "and"))
        assert equivalent(minimize(combine(d, d, "or")), d)

    def test_unknown_op(self):
        d = dfa_for("tt")
        with pytest.raises(ValueError):
            combine(d, d, "nand")

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_boolean_correctness(self, seed):
        rng = random.Random(seed)
        f, g = (nnf(random_ldlf(rng, ["a", "b"], 3)) for _ in range(2))
        df, dg = formula_dfa(f, AB), formula_dfa(g, AB)
        ops = {"and": lambda x, y: x and y, "or": lambda x, y: x or y,
               "and-not": lambda x, y: x and not y, "xor": lambda x, y: x != y}
        for name, fn in ops.items():
            d = minimize(combine(df, dg, name))
            for w in words(AB.symbols, 4):
                assert accepts(d, w) == fn(accepts(df, w), accepts(dg, w))
        c = complement(df)
        assert all(accepts(c, w) != accepts(df, w) for w in words(AB.symbols, 4))

    def test_canonical_numbering(self):
        # equal languages give identical minimal tables
        assert dfa_for("<a*>[true]ff") == dfa_for("[true*](a | [true]ff)")


# --------------------------------------------------------------------------
# prefixes and regular expressions


class TestPrefix:
    def test_empty(self):
        assert is_empty(prefix_automaton(dfa_for("ff")))

    def test_prefix_closed(self):
        p = prefix_automaton(dfa_for("<a;b>[true]ff"))
        assert accepts(p, []) and accepts(p, [{"a"}]) and accepts(p, [{"a", "b"}])
        assert not accepts(p, [{"b"}])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_matches_oracle(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 3))
        d = formula_dfa(f, AB)
        p = prefix_automaton(d)
        horizon = reach_counts(d)
        oracle = PrefixOracle(f, AB.symbols, 1)
        for w in words(AB.symbols, 3):
            oracle.horizon = horizon[d.run(w)]
            assert accepts(p, w) == oracle.poss_good(w)


class TestToRegex:
    def test_single_letter(self):
        nfa = Nfa(AB, ("s", "t"), frozenset({0}),
                  ((frozenset(), frozenset({1}), frozenset(), frozenset({1})),
                   (frozenset(),) * 4), frozenset({1}))
        assert render(to_regex(nfa)) == "a"

    def test_epsilon_only(self):
        assert to_regex(dfa_for("[true]ff")) is EPS
        assert render(EPS) == "tt?"

    def test_empty(self):
        assert to_regex(dfa_for("ff")) is NOTHING

    def test_absence2_prefixes(self):
        al = Alphabet.of_tasks(["close_order", "o"])
        f = instantiate_pattern("absence2", ["close_order"])
        got = to_regex(prefix_automaton(formula_dfa(f, al)))
        want = parse_path("o* + (o*;close_order;o*)")
        assert equivalent(formula_dfa(Diamond(got, END), al), formula_dfa(regex_embed(want), al))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_round_trip(self, seed):
        f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 3))
        d = formula_dfa(f, AB)
        back = formula_dfa(Diamond(to_regex(d), END), AB)
        for w in words(AB.symbols, 5):
            assert accepts(back, w) == accepts(d, w)

    def test_guards(self):
        assert render(guard(AB, range(4))) == "true"
        assert render(guard(AB, [])) == "false"
        assert render(guard(AB, [1, 3])) == "a"
        tasks = Alphabet.of_tasks(["x", "y", "z"])
        assert render(guard(tasks, [0, 2])) == "x | z"


def test_dot_output():
    d = dfa_for("<a>tt")
    text = to_dot(d, "demo", {q: "temp_false" for q in range(d.num_states)})
    assert text.startswith('digraph "demo" {')
    assert "doublecircle" in text and "__start ->" in text
    assert text.count("->") >= d.num_states
    marked = to_dot(ldlf_to_nfa(parse_ldlf("<a>tt"), AB))
    assert "& last" in marked
