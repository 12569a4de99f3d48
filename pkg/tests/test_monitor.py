import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_ldlf, reach_counts, words
from ldlfmon.automata import Alphabet, UnknownSymbol, formula_dfa
from ldlfmon.declare import instantiate_pattern
from ldlfmon.formula import END, TT, And, Diamond, Not, nnf
from ldlfmon.monitor import (
    Monitor, RvVerdict, build_monitor, color_states, rv_classify, rv_formulas, verdict_timeline,
)
from ldlfmon.semantics import PrefixOracle, satisfies
from ldlfmon.syntax import parse_ldlf

T, F, TT_, TF = RvVerdict.TRUE, RvVerdict.FALSE, RvVerdict.TEMP_TRUE, RvVerdict.TEMP_FALSE
AB = Alphabet.powerset(["a", "b"])
ORDER = Alphabet.of_tasks(["close_order", "cancel_order", "pay_suppl"])


def test_verdict_tokens():
    assert [str(v) for v in RvVerdict] == ["true", "false", "temp_true", "temp_false"]
    assert T.stable and F.stable and not TT_.stable
    assert T.satisfied and TT_.satisfied and not TF.satisfied


class TestFormulaRoute:
    def test_false_formula_shape(self):
        canc = instantiate_pattern("negation_succession", ["close_order", "cancel_order"])
        fs = rv_formulas(canc, ORDER)
        assert fs.false is And(Diamond(fs.pref_neg, END), Not(Diamond(fs.pref, END)))
        assert fs[F] is fs.false

    def test_empty_trace_absence2(self):
        close = instantiate_pattern("absence2", ["close_order"])
        assert rv_classify([], close, ORDER) is TT_

    def test_double_occurrence(self):
        f = instantiate_pattern("absence2", ["a"])
        assert rv_classify([{"a"}, {"a"}], f, Alphabet.of_tasks(["a", "o"])) is F

    def test_permanent(self):
        assert rv_classify([{"a"}], parse_ldlf("<a>tt"), AB) is T


class TestColoredMonitor:
    def test_example_timeline(self):
        m = build_monitor(instantiate_pattern("absence2", ["close_order"]), ORDER)
        assert m.verdict is TT_
        assert m.run(["close_order", "pay_suppl", "close_order"]) == [TT_, TT_, F]
        assert m.step("cancel_order") is F, "false is absorbing"

    def test_response(self):
        m = build_monitor(instantiate_pattern("response", ["a", "b"]), Alphabet.of_tasks("ab"))
        assert m.run(["a", "b"]) == [TF, TT_]

    def test_unknown_event(self):
        m = build_monitor(parse_ldlf("<a>tt"), Alphabet.of_tasks(["a", "b"]))
        with pytest.raises(UnknownSymbol):
            m.step("c")

    def test_reset_and_copy(self):
        m = build_monitor(parse_ldlf("<true*>a"), Alphabet.of_tasks(["a", "b"]))
        m.step("b")
        c = m.copy()
        m.reset()
        assert m.steps == 0 and c.steps == 1 and c.verdict is TF

    def test_color_count_must_match(self):
        d = formula_dfa(TT, AB)
        with pytest.raises(ValueError):
            Monitor(d, colors=[T, T])

    def test_tt_timeline(self):
        assert verdict_timeline(TT, [{"a"}, set(), {"b"}]) == [T] * 4

    def test_timeline_length(self):
        assert len(verdict_timeline(parse_ldlf("<a>tt"), [{"a"}] * 3)) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_routes_agree_with_oracle(seed):
    f = nnf(random_ldlf(random.Random(seed), ["a", "b"], 4))
    d = formula_dfa(f, AB)
    m = Monitor(d, f)
    fs = rv_formulas(f, AB)
    horizon = reach_counts(d)
    oracle = PrefixOracle(f, AB.symbols, 1)
    for w in words(AB.symbols, 3):
        q = d.run(w)
        oracle.horizon = horizon[q]
        c = oracle.classify(w)
        expected = T if c.nec_good else F if c.nec_bad else TT_ if satisfies(w, f) else TF
        assert rv_classify(w, f, AB, fs) is m.colors[q] is expected


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_coloring_is_closed(seed):
    d = formula_dfa(nnf(random_ldlf(random.Random(seed), ["a", "b"], 4)), AB)
    colors = color_states(d)
    for q, row in enumerate(d.transitions):
        if colors[q].stable:
            assert all(colors[p] is colors[q] for p in row)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.lists(st.integers(0, 3), max_size=8))
def test_stable_verdicts_are_absorbing(seed, letters):
    f = random_ldlf(random.Random(seed), ["a", "b"], 4)
    timeline = verdict_timeline(f, [AB.symbols[k] for k in letters], AB)
    for i, v in enumerate(timeline):
        if v.stable:
            assert set(timeline[i:]) == {v}
