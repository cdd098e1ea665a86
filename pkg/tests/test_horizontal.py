from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kanlift.horizontal as H
from goldens import COUNT_C_LEFT_NESTED, COUNT_C_RESET_FIRST
from kanlift.corpus import random_program
from kanlift.frontend import parse_c, print_c
from kanlift.ir.clight import C_INT, CAssignLocal, CConst, CFun, ClightProgram, CReturn, CSeq, CSkip, CVar, seq_leaves
from kanlift.semantics import eval_clight, random_traces
from kanlift.vertical import NotInImage, compile, lift


def leaf(k):
    return CAssignLocal(f"x{k}", CConst(k, C_INT))


def fun(body, ret=C_INT):
    return CFun("fun$step$s", "self", "s", (), (), body, ret)


def prog(body, ret=C_INT):
    return ClightProgram((), (fun(body, ret),))


def body_of(c):
    return c.functions[0].body


def test_reassoc_example():
    s1, s2, s3 = leaf(1), leaf(2), leaf(3)
    assert body_of(H.reassoc_seq(prog(CSeq(CSeq(s1, s2), s3)))) == CSeq(s1, CSeq(s2, s3))


def test_reassoc_leaves_right_nested_bodies_alone(count_c):
    assert H.reassoc_seq(count_c) == count_c


@st.composite
def seq_trees(draw, leaves):
    if len(leaves) == 1:
        return leaves[0]
    k = draw(st.integers(1, len(leaves) - 1))
    return CSeq(draw(seq_trees(leaves[:k])), draw(seq_trees(leaves[k:])))


def flatten(s):
    if isinstance(s, CSeq):
        return flatten(s.first) + flatten(s.second)
    return [s]


def is_right_spine(s):
    while isinstance(s, CSeq):
        if isinstance(s.first, CSeq):
            return False
        s = s.second
    return True


@given(seq_trees([leaf(k) for k in range(6)]))
def test_reassoc_random_trees(tree):
    out = body_of(H.reassoc_seq(prog(tree)))
    assert is_right_spine(out)
    assert seq_leaves(out) == flatten(tree) == [leaf(k) for k in range(6)]


def test_insert_skips_terminates_chains():
    ret = CReturn(CVar("x0"))
    out = body_of(H.insert_skips(prog(CSeq(leaf(0), ret))))
    assert out == CSeq(leaf(0), CSeq(CSkip(), ret))


def test_insert_skips_on_empty_reset():
    out = body_of(H.insert_skips(prog(CSkip(), ret=None)))
    assert out == CSeq(CSkip(), CReturn(None))


def test_insert_skips_drops_interior_skips():
    ret = CReturn(CVar("x1"))
    out = body_of(H.insert_skips(prog(CSeq(leaf(0), CSeq(CSkip(), CSeq(leaf(1), ret))))))
    assert out == CSeq(leaf(0), CSeq(leaf(1), CSeq(CSkip(), ret)))


def test_insert_skips_is_identity_on_compiled_code(count_c):
    assert H.insert_skips(count_c) == count_c


def test_decl_order_puts_step_before_reset(count_c):
    flipped = replace(count_c, functions=tuple(reversed(count_c.functions)))
    assert H.order_decls(flipped) == count_c


def test_canonicalize_is_identity_on_the_image(count_c):
    assert H.canonicalize_c(count_c) == count_c


@pytest.mark.parametrize("text", [COUNT_C_LEFT_NESTED, COUNT_C_RESET_FIRST])
def test_variants_lift_only_after_canonicalization(text, count_lifted):
    c = parse_c(text)
    with pytest.raises(NotInImage):
        lift(c)
    assert lift(H.canonicalize_c(c)) == count_lifted


def test_each_pass_is_needed():
    reset_first = parse_c(COUNT_C_RESET_FIRST)
    with pytest.raises(NotInImage):
        lift(H.canonicalize_c(reset_first, ["reassoc-seq", "insert-skips"]))
    lift(H.canonicalize_c(reset_first, ["insert-skips", "decl-order"]))


def test_pass_selection():
    assert [p.name for p in H.select_passes(None)] == list(H.PASS_ORDER)
    assert [p.name for p in H.select_passes(["decl-order", "reassoc-seq"])] == ["reassoc-seq", "decl-order"]
    with pytest.raises(KeyError, match="nope"):
        H.select_passes(["nope"])


def test_non_confluent_passes_hit_the_cap(monkeypatch, count_c):
    flip = H.RewritePass("flip", lambda c: replace(c, functions=tuple(reversed(c.functions))))
    monkeypatch.setitem(H.PASSES, "flip", flip)
    with pytest.raises(H.CanonicalizationDiverged):
        H.canonicalize_c(count_c, ["flip"])


def mangle(c: ClightProgram) -> ClightProgram:
    """Left-nest every body, drop its skips and put reset functions first."""
    def left(s):
        leaves = [x for x in flatten(s) if not isinstance(x, CSkip)]
        out = leaves[0]
        for x in leaves[1:]:
            out = CSeq(out, x)
        return out
    funs = tuple(replace(f, body=left(f.body)) for f in c.functions)
    return replace(c, functions=tuple(sorted(funs, key=lambda f: not f.name.startswith("fun$reset$"))))


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_canonicalization_preserves_traces_and_recovers_the_image(seed):
    p = random_program(seed)
    c = compile(p)
    m = mangle(c)
    canon = H.canonicalize_c(m)
    assert canon == c
    assert H.canonicalize_c(canon) == canon
    for n in p.nodes:
        for tr in random_traces(p, n.name, 2, 20, seed):
            want = eval_clight(c, n.name, tr)
            assert eval_clight(m, n.name, tr) == want
            for name in H.PASS_ORDER:
                assert eval_clight(H.PASSES[name].transform(m), n.name, tr) == want


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_each_pass_is_idempotent(seed):
    m = mangle(compile(random_program(seed)))
    for p in H.PASSES.values():
        once = p.transform(m)
        assert p.transform(once) == once


def test_canonical_text_is_stable(count_c):
    c = parse_c(print_c(count_c))
    assert print_c(H.canonicalize_c(c)) == print_c(count_c)
