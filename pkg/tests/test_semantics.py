from dataclasses import replace
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldens import COUNT_TRACE_IN, COUNT_TRACE_OUT
from kanlift.corpus import random_program
from kanlift.frontend import elaborate, normalize, parse_c, parse_lustre
from kanlift.ir import clight as C
from kanlift.semantics import (
    EvalError, MachineState, eval_clight, eval_lustre, format_value, parse_value, random_trace,
    random_traces, read_trace, reset_machine, trace_equiv, wrap32, write_trace,
)
from kanlift.vertical import compile

INT_MIN, INT_MAX = -(2**31), 2**31 - 1


def outputs(trace, name="o"):
    return [step[name] for step in trace]


def lus(body, inputs="i : int32", out="o : int32", locals_=""):
    var = f"var {locals_}" if locals_ else ""
    return elaborate(parse_lustre(f"node n ({inputs}) returns ({out}) {var} let {body} tel"))


def both(p, inputs):
    """Outputs of the Lustre node and of its compiled C, which must agree."""
    n = normalize(p)
    lo = outputs(eval_lustre(p, "n", inputs))
    co = [next(iter(s.values())) for s in eval_clight(compile(n), "n", inputs)]
    assert lo == co
    return lo


def test_count_trace_on_both_sides(count_source, count_lifted, count_c):
    assert outputs(eval_lustre(count_source, "count", COUNT_TRACE_IN)) == COUNT_TRACE_OUT
    assert outputs(eval_lustre(count_lifted, "count", COUNT_TRACE_IN)) == COUNT_TRACE_OUT
    assert outputs(eval_clight(count_c, "count", COUNT_TRACE_IN)) == COUNT_TRACE_OUT


def test_empty_traces(count_lifted, count_c):
    assert eval_lustre(count_lifted, "count", []) == []
    assert eval_clight(count_c, "count", []) == []
    assert reset_machine(count_c, "count") == MachineState({"norm1$1": 0}, {})


def test_state_can_be_carried_across_calls(count_c):
    st = reset_machine(count_c, "count")
    assert outputs(eval_clight(count_c, "count", COUNT_TRACE_IN[:2], st)) == [5, 9]
    assert outputs(eval_clight(count_c, "count", COUNT_TRACE_IN[2:], st)) == [9]


def test_chained_nodes_agree():
    p = elaborate(parse_lustre("""
      node acc (x : int32) returns (s : int32) let s = (0 fby s) + x; tel
      node n (i : int32) returns (o : int32) let o = acc(acc(i)) - (1 fby i); tel"""))
    assert both(p, [{"i": v} for v in (1, 2, 3, 4)]) == [1 - 1, 4 - 1, 10 - 2, 20 - 3]


def test_fby_of_a_call_steps_the_instance_every_cycle():
    p = elaborate(parse_lustre("""
      node tick (x : int32) returns (c : int32) let c = (0 fby c) + 1; tel
      node n (i : int32) returns (o : int32) let o = 100 fby tick(i); tel"""))
    assert both(p, [{"i": 0}] * 4) == [100, 1, 2, 3]


def test_trace_equiv_reports_the_first_divergence(count_lifted, count_c):
    reset = count_c.function("fun$reset$count")
    first = reset.body.first
    mutated_reset = replace(reset, body=replace(reset.body, first=replace(first, expr=C.CConst(1, C.C_INT))))
    mutated = replace(count_c, functions=(count_c.functions[0], mutated_reset))
    report = trace_equiv(count_lifted, mutated, "count", [COUNT_TRACE_IN])
    assert not report.equal
    (d,) = report.divergences
    assert (d.trace, d.step, d.lustre, d.clight) == (0, 0, 5, 6)
    assert "step 0" in str(report)
    assert trace_equiv(count_lifted, count_c, "count", [COUNT_TRACE_IN]).equal
    assert trace_equiv(count_lifted, count_c, "count", []).equal


@pytest.mark.parametrize("expr, i, want", [
    ("i + 1", INT_MAX, INT_MIN),
    ("i - 1", INT_MIN, INT_MAX),
    ("i * 2", INT_MAX, -2),
    ("i / -1", INT_MIN, INT_MIN),
    ("-i", INT_MIN, INT_MIN),
    ("i / 2", -7, -3),
    ("i / -2", 7, -3),
    ("i * i", 65536, 0),
])
def test_wrapping_arithmetic_is_identical(expr, i, want):
    assert both(lus(f"o = {expr};"), [{"i": i}]) == [want]


def test_comparisons_and_logic_return_bools():
    p = lus("o = (i > 0) and not (i = 3) or false;", out="o : bool")
    assert both(p, [{"i": v} for v in (-1, 3, 4)]) == [False, False, True]


def test_division_by_zero_reports_the_step():
    p = lus("o = 10 / i;")
    with pytest.raises(EvalError, match="step 2") as exc:
        eval_lustre(p, "n", [{"i": 1}, {"i": 2}, {"i": 0}])
    assert exc.value.step == 2
    with pytest.raises(EvalError) as exc:
        eval_clight(compile(p), "n", [{"i": 1}, {"i": 2}, {"i": 0}])
    assert exc.value.step == 2


def test_missing_inputs_and_unknown_nodes_are_errors(count_lifted, count_c):
    with pytest.raises(EvalError, match="'i'"):
        eval_lustre(count_lifted, "count", [{}])
    with pytest.raises(EvalError, match="'i'"):
        eval_clight(count_c, "count", [{"j": 1}])
    with pytest.raises(EvalError, match="unknown node"):
        eval_lustre(count_lifted, "nope", [])
    with pytest.raises(EvalError, match="unknown node"):
        eval_clight(count_c, "nope", [])


def test_reading_an_unset_local_is_an_error():
    c = parse_c("""struct s { int m; };
      int fun$step$s(struct s *self, int i) { int o; int t; o = t + i; ; return o; }
      void fun$reset$s(struct s *self) { (*self).m = 0; ; return; }""")
    with pytest.raises(EvalError, match="'t'"):
        eval_clight(c, "s", [{"i": 1}])


@given(st.integers(INT_MIN * 4, INT_MAX * 4))
def test_wrap32_matches_twos_complement(v):
    w = wrap32(v)
    assert INT_MIN <= w <= INT_MAX and (w - v) % 2**32 == 0


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_oracles_agree_on_generated_programs(seed):
    p = random_program(seed)
    c = compile(p)
    for n in p.nodes:
        report = trace_equiv(p, c, n.name, random_traces(p, n.name, 3, 20, seed))
        assert report.equal, str(report)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_evaluation_is_deterministic(seed):
    p = random_program(seed)
    n = p.nodes[-1].name
    traces = random_traces(p, n, 2, 10, seed)
    assert traces == random_traces(p, n, 2, 10, seed)
    assert [eval_lustre(p, n, t) for t in traces] == [eval_lustre(p, n, t) for t in traces]


# -- trace files ----------------------------------------------------------------

values = st.one_of(st.booleans(), st.integers(INT_MIN, INT_MAX))


@given(st.lists(st.fixed_dictionaries({"a": values, "b$1": values}), max_size=8))
def test_trace_csv_round_trip(trace):
    assert read_trace(write_trace(trace, ["a", "b$1"])) == trace


def test_trace_csv_format():
    text = write_trace([{"i": 5, "ok": True}, {"i": -4, "ok": False}])
    assert text == "i,ok\n5,true\n-4,false\n"
    assert read_trace("i\n") == [] and read_trace("") == []
    assert format_value(True) == "true" and parse_value(" -3 ") == -3


@pytest.mark.parametrize("bad", ["2147483648", "maybe", "1.5"])
def test_trace_values_are_checked(bad):
    with pytest.raises(ValueError):
        parse_value(bad)


def test_ragged_csv_rows_are_rejected():
    with pytest.raises(ValueError, match="line 3"):
        read_trace("a,b\n1,2\n3\n")


def test_random_traces_cover_declared_inputs():
    tr = random_trace([("x", "int32"), ("y", "bool")], 50, random.Random(3))
    assert len(tr) == 50 and all(set(s) == {"x", "y"} for s in tr)
    assert all(type(s["y"]) is bool and INT_MIN <= s["x"] <= INT_MAX for s in tr)
