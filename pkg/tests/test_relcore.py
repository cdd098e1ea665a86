import importlib
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanlift.relcore import (
    EMPTY, IMPLEMENTATION, NIL, ZERO, Reified, SearchBudgetExceeded, Var, addR, conj, disj, eq, fail,
    fresh, mulR, nat, nat_value, neq, relation, run, run_answers, run_star, squareR, succeed, tup,
    unify, walk_star,
)
from kanlift.relcore import _kernel_py
from kanlift.relcore.terms import from_list, term_vars, to_list

try:
    from kanlift.relcore import _kernel as _kernel_c
except ImportError:  # pragma: no cover - depends on the build
    _kernel_c = None

KERNELS = [_kernel_py] + ([_kernel_c] if _kernel_c is not None else [])
kernel_param = pytest.mark.parametrize("k", KERNELS, ids=lambda m: m.IMPLEMENTATION)


# -- term strategies ------------------------------------------------------------

atoms = st.sampled_from(["O", "nil", "a", "b", "int32"])
ints = st.integers(min_value=-(2**63), max_value=2**63 - 1)
var_ids = st.integers(min_value=0, max_value=40)


def terms(with_vars=True):
    leaves = atoms | ints
    if with_vars:
        leaves = leaves | var_ids.map(Var)
    return st.recursive(
        leaves,
        lambda kids: st.builds(lambda tag, xs: (tag, *xs), st.sampled_from(["S", "P", "cons"]),
                               st.lists(kids, max_size=3)),
        max_leaves=12,
    )


def closure(k, s, t):
    return None if s is None else k.walk_star(t, s)


def entails(k, s, other):
    """Every binding of ``other`` already holds under ``s``."""
    return all(k.unify(Var(v), t, s) is s for v, t in other.items())


# -- unification ----------------------------------------------------------------


@kernel_param
def test_unify_binds_a_variable(k):
    s = k.unify(Var(0), 5, k.EMPTY)
    assert s.get(0) == 5 and len(s) == 1


@kernel_param
def test_unify_descends_into_tuples(k):
    s = k.unify(("S", Var(0)), ("S", "O"), k.EMPTY)
    assert k.walk_star(Var(0), s) == "O"


@kernel_param
def test_occurs_check_rejects_cycles(k):
    assert k.unify(Var(0), ("S", Var(0)), k.EMPTY) is None
    s = k.unify(Var(1), ("S", Var(2)), k.EMPTY)
    assert k.unify(Var(2), ("P", Var(1)), s) is None


@kernel_param
def test_tag_and_arity_must_match(k):
    assert k.unify(("S", 1), ("P", 1), k.EMPTY) is None
    assert k.unify(("S", 1), ("S", 1, 2), k.EMPTY) is None


@kernel_param
def test_scalars_compare_by_type(k):
    assert k.unify(1, True, k.EMPTY) is None
    assert k.unify("1", 1, k.EMPTY) is None
    assert k.unify(7, 7, k.EMPTY) is k.EMPTY


@kernel_param
def test_unify_reports_new_bindings(k):
    bound = []
    k.unify(("P", Var(3), Var(4)), ("P", 1, Var(3)), k.EMPTY, bound)
    assert sorted(bound) == [3, 4]


@kernel_param
def test_substitution_grows_past_one_trie_level(k):
    s = k.EMPTY
    for i in range(0, 5000, 7):
        s = s.set(i, i * 2)
    assert len(s) == len(range(0, 5000, 7))
    assert all(s.get(i) == i * 2 for i in range(0, 5000, 7))
    assert s.get(1) is None and s.get(10**6) is None
    assert sorted(s.items()) == [(i, i * 2) for i in range(0, 5000, 7)]


@kernel_param
@given(a=terms(), b=terms())
@settings(max_examples=300, deadline=None)
def test_unify_is_symmetric(k, a, b):
    s1 = k.unify(a, b, k.EMPTY)
    s2 = k.unify(b, a, k.EMPTY)
    assert (s1 is None) == (s2 is None)
    if s1 is not None:
        assert closure(k, s1, a) == closure(k, s1, b)
        assert closure(k, s2, a) == closure(k, s2, b)
        assert entails(k, s1, s2) and entails(k, s2, s1)


@kernel_param
@given(a=terms(), b=terms())
@settings(max_examples=300, deadline=None)
def test_unify_is_idempotent_and_fully_resolving(k, a, b):
    s = k.unify(a, b, k.EMPTY)
    if s is None:
        return
    assert k.unify(a, b, s) is s
    for vid, _ in s.items():
        resolved = k.walk_star(Var(vid), s)
        assert all(s.get(v.id) is None for v in term_vars(resolved))


@pytest.mark.skipif(_kernel_c is None, reason="compiled kernel not built")
@given(a=terms(), b=terms(), c=terms())
@settings(max_examples=300, deadline=None)
def test_kernels_agree(a, b, c):
    s_py = _kernel_py.unify(a, b, _kernel_py.EMPTY)
    s_c = _kernel_c.unify(a, b, _kernel_c.EMPTY)
    assert (s_py is None) == (s_c is None)
    if s_py is None:
        return
    assert sorted(s_py.items(), key=repr) == sorted(s_c.items(), key=repr)
    assert _kernel_py.walk_star(c, s_py) == _kernel_c.walk_star(c, s_c)


def test_kernel_selection_honours_the_environment():
    code = "import kanlift.relcore as r; print(r.IMPLEMENTATION)"
    env = dict(os.environ, KANLIFT_PURE_KERNEL="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    expected = "cython" if _kernel_c is not None else "python"
    assert IMPLEMENTATION == (expected if not os.environ.get("KANLIFT_PURE_KERNEL") else "python")


def test_public_unify_is_the_selected_kernel():
    mod = importlib.import_module("kanlift.relcore.kernel")
    assert unify is mod.unify and EMPTY is mod.EMPTY


# -- terms ----------------------------------------------------------------------


def test_tuple_tags_must_be_nonempty():
    with pytest.raises(ValueError):
        tup("")


def test_lists_and_nats_round_trip():
    assert to_list(from_list([1, 2, 3])) == [1, 2, 3]
    assert from_list([]) == NIL
    assert nat(0) == ZERO and nat_value(nat(7)) == 7


# -- goals ----------------------------------------------------------------------


def test_empty_disjunction_and_conjunction():
    assert run(None, 1, lambda q: disj()) == []
    assert run(None, 1, lambda q: conj()) == [Reified(0)]


def test_disj_gives_every_branch():
    assert sorted(run_star(1, lambda q: disj(eq(q, 1), eq(q, 2)))) == [1, 2]


def test_run_of_fail_is_empty():
    assert run(1, 1, lambda q: fail) == []


def test_fresh_variables_reify_in_order_of_appearance():
    out = run(1, 1, lambda q: fresh(2, lambda a, b: eq(q, ("P", b, a, b))))
    assert out == [("P", Reified(0), Reified(1), Reified(0))]


@relation
def forever(q):
    return disj(forever(q), forever(q))


@relation
def nats_from(n, q):
    return disj(eq(q, n), nats_from(("S", n), q))


def test_interleaving_reaches_answers_past_an_infinite_branch():
    assert run(1, 1, lambda q: disj(forever(q), eq(q, 1))) == [1]
    assert run(1, 1, lambda q: disj(nats_from("O", q), eq(q, "x"))) in (["O"], ["x"])
    got = run(4, 1, lambda q: disj(nats_from("O", q), eq(q, "x")))
    assert "x" in got


def test_budget_is_enforced():
    with pytest.raises(SearchBudgetExceeded):
        run(1, 1, lambda q: forever(q), budget=1000)
    with pytest.raises(ValueError):
        run(1, 1, lambda q: succeed, budget=0)


def test_runs_are_deterministic():
    query = lambda a, b: mulR(a, b, nat(12))  # noqa: E731
    assert run_star(2, query) == run_star(2, query)


# -- disequality ----------------------------------------------------------------


def test_neq_direct_violation():
    assert run(1, 1, lambda q: conj(neq(q, 1), eq(q, 1))) == []
    assert run(1, 1, lambda q: conj(eq(q, 1), neq(q, 1))) == []


def test_neq_satisfiable():
    assert run(1, 1, lambda q: conj(neq(q, 1), eq(q, 2))) == [2]


def test_neq_on_tuples_prunes_one_branch():
    goal = lambda q: conj(neq(("P", q, 1), ("P", 0, 1)), disj(eq(q, 0), eq(q, 5)))  # noqa: E731
    assert run(2, 1, goal) == [5]


def test_neq_of_unrelated_terms_is_dropped():
    assert run(1, 1, lambda q: conj(neq(("S", 1), ("P", 1)), eq(q, 3))) == [3]


def test_residual_constraints_are_reported():
    (ans,) = run_answers(None, 1, lambda q: neq(q, 7))
    assert ans.value == Reified(0)
    assert ans.constraints == (((Reified(0), 7),),)


def test_neq_fires_through_aliasing():
    goal = lambda q: fresh(2, lambda a, b: conj(neq(a, b), eq(q, ("P", a, b)), eq(a, b)))  # noqa: E731
    assert run(1, 1, goal) == []


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 3), st.integers(0, 1), st.integers(0, 3)),
                min_size=1, max_size=4))
@settings(max_examples=150, deadline=None)
def test_neq_soundness(specs):
    """No answer makes both sides of any stored disequality equal."""

    def goal(q):
        def body(a, b):
            vs = (a, b)
            cons = [neq(("P", vs[i], x), ("P", vs[j], y)) for i, x, j, y in specs]
            return conj(*cons, eq(q, ("P", a, b)),
                        disj(*[eq(a, v) for v in range(4)]), disj(*[eq(b, v) for v in range(4)]))
        return fresh(2, body)

    answers = run_star(1, goal)
    for _, a, b in answers:
        vs = (a, b)
        for i, x, j, y in specs:
            assert ("P", vs[i], x) != ("P", vs[j], y)
    oracle = [(a, b) for a in range(4) for b in range(4)
              if all(((a, b)[i], x) != ((a, b)[j], y) for i, x, j, y in specs)]
    assert sorted((a, b) for _, a, b in answers) == oracle


# -- arithmetic -----------------------------------------------------------------


def test_square_forward_and_backward():
    assert run_star(1, lambda q: squareR(nat(5), q)) == [nat(25)]
    assert run_star(1, lambda q: squareR(q, nat(25))) == [nat(5)]
    assert run_star(1, lambda q: squareR(ZERO, ZERO)) == [Reified(0)]


def test_mul_by_zero():
    assert run_star(1, lambda p: fresh(1, lambda y: mulR(ZERO, y, p))) == [ZERO]


def test_factor_pairs_of_twelve():
    got = run_star(2, lambda a, b: conj(mulR(a, b, nat(12)), neq(a, ZERO)))
    want = {(a, b) for a in range(13) for b in range(13) if a * b == 12}
    assert {(nat_value(a), nat_value(b)) for a, b in got} == want
    assert len(got) == len(want)


@given(st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=81, deadline=None)
def test_arithmetic_agrees_with_machine_integers(a, b):
    assert run_star(1, lambda q: addR(nat(a), nat(b), q)) == [nat(a + b)]
    assert run_star(1, lambda q: mulR(nat(a), nat(b), q)) == [nat(a * b)]
    if a:
        assert run_star(1, lambda q: mulR(nat(a), q, nat(a * b))) == [nat(b)]
    assert [nat_value(x) for x in run_star(1, lambda q: addR(q, nat(b), nat(a + b)))] == [a]


def test_walk_star_resolves_chains():
    s = unify(Var(0), ("S", Var(1)), EMPTY)
    s = unify(Var(1), ("S", "O"), s)
    assert walk_star(Var(0), s) == nat(2)


def test_fallback_kernel_gives_the_same_pipeline_results():
    code = ("import sys; from kanlift.corpus import corpus; from kanlift.frontend import print_c, print_lustre; "
            "from kanlift.vertical import compile, lift\n"
            "for p in corpus(15, seed=5):\n"
            "    c = compile(p); sys.stdout.write(print_c(c) + print_lustre(lift(c)))\n")
    outs = {}
    for flag in ("1", ""):
        env = dict(os.environ)
        env.pop("KANLIFT_PURE_KERNEL", None)
        if flag:
            env["KANLIFT_PURE_KERNEL"] = flag
        outs[flag] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                    check=True).stdout
    assert outs["1"] == outs[""] and outs[""]
