from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanlift.corpus import random_program
from kanlift.ir import DecodeError, decode, encode
from kanlift.ir import clight as C
from kanlift.ir import lustre as L
from kanlift.ir import obc as O
from kanlift.ir import stc as S
from kanlift.ir.alpha import alpha_eq, canonical_names
from kanlift.ir.wellformed import check_clight, check_lustre, check_nlustre, check_obc, check_stc
from kanlift.relcore import EMPTY, unify
from kanlift.vertical import PassName, compile_pass

CHECKERS = {"lustre": check_lustre, "nlustre": check_nlustre, "stc": check_stc, "obc": check_obc,
            "clight": check_clight}


def pipeline(p):
    """The program at every level, keyed by IR kind."""
    out = {"lustre": p}
    for name, kind in zip(PassName, ["nlustre", "stc", "obc", "clight"]):
        p = compile_pass(name, p)
        out[kind] = p
    return out


@pytest.fixture(scope="module")
def count_levels(count_lifted):
    return pipeline(count_lifted)


def test_count_levels_have_the_expected_shape(count_levels):
    nl = count_levels["nlustre"].nodes[0]
    assert [type(q) for q in nl.equations] == [L.NDef, L.NDelay]
    stc = count_levels["stc"].systems[0]
    assert [r.name for r in stc.registers] == ["norm1$1"]
    assert [type(t) for t in stc.transitions] == [S.Define, S.Next]
    cls = count_levels["obc"].classes[0]
    assert [m.name for m in cls.memories] == ["norm1$1"]
    assert isinstance(cls.step.body, O.Seq)
    c = count_levels["clight"]
    assert [f.name for f in c.functions] == ["fun$step$count", "fun$reset$count"]
    assert c.functions[0].self_name == "obc2c$self"


@pytest.mark.parametrize("kind", list(CHECKERS))
def test_count_is_well_formed_and_round_trips(count_levels, kind):
    p = count_levels[kind]
    assert CHECKERS[kind](p) == []
    t = encode(p)
    assert t[0] == kind
    assert decode(t) == p
    assert unify(t, t, EMPTY) is EMPTY


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_every_level_round_trips_through_terms(seed):
    for kind, p in pipeline(random_program(seed)).items():
        assert CHECKERS[kind](p) == [], kind
        assert decode(encode(p), kind) == p


def test_encoding_is_injective_on_distinct_programs(count_lifted):
    other = replace(count_lifted, nodes=(replace(count_lifted.nodes[0], name="count2"),))
    assert encode(other) != encode(count_lifted)


def test_decode_rejects_garbage_at_the_root():
    with pytest.raises(DecodeError, match="<root>"):
        decode("garbage", "lustre")
    with pytest.raises(DecodeError):
        decode("garbage")


def test_decode_reports_the_path_of_the_bad_subterm(count_lifted):
    t = encode(count_lifted)
    nodes = t[1]
    node = nodes[1]
    bad = ("lustre", ("cons", node[:2] + ("broken",) + node[3:], nodes[2]))
    with pytest.raises(DecodeError, match=r"nodes\[0\]"):
        decode(bad)


def test_decode_rejects_nonground_terms(count_lifted):
    from kanlift.relcore import Var

    t = encode(count_lifted)
    with pytest.raises(DecodeError):
        decode(("lustre", ("cons", Var(0), t[1][2])))


# -- well-formedness ------------------------------------------------------------


def node(eqs, locals_=(), inputs=(L.Decl("i", L.INT),), output=L.Decl("o", L.INT)):
    return L.Node("n", tuple(inputs), (output,), tuple(locals_), tuple(eqs))


def test_lustre_checker_catches_missing_and_double_definitions():
    missing = L.Program((node([]),))
    assert any("0 defining" in m for m in check_lustre(missing))
    twice = L.Program((node([L.Equation("o", L.VarRef("i")), L.Equation("o", L.IntLit(1))]),))
    assert any("2 defining" in m for m in check_lustre(twice))
    stray = L.Program((node([L.Equation("o", L.VarRef("i")), L.Equation("z", L.IntLit(1))]),))
    assert any("'z'" in m for m in check_lustre(stray))


def test_lustre_checker_catches_recursion_and_unknown_calls():
    rec = L.Program((replace(node([L.Equation("o", L.Call("n", (L.VarRef("i"),)))]), name="n"),))
    assert any("recursive" in m for m in check_lustre(rec))
    unknown = L.Program((node([L.Equation("o", L.Call("ghost", ()))]),))
    assert any("unknown node" in m for m in check_lustre(unknown))


def test_lustre_checker_rejects_nonconstant_fby_init():
    p = L.Program((node([L.Equation("o", L.Fby(L.VarRef("i"), L.VarRef("i")))]),))
    assert check_lustre(p)


def test_nlustre_checker_enforces_the_schedule():
    late = L.NNode("n", (L.Decl("i", L.INT),), (L.Decl("o", L.INT),), (L.Decl("x", L.INT),),
                   (L.NDef("o", L.VarRef("x")), L.NDef("x", L.VarRef("i"))))
    assert any("before it is defined" in m for m in check_nlustre(L.NProgram((late,))))
    ok = replace(late, equations=tuple(reversed(late.equations)))
    assert check_nlustre(L.NProgram((ok,))) == []
    stale = L.NNode("n", (L.Decl("i", L.INT),), (L.Decl("o", L.INT),), (L.Decl("x", L.INT),),
                    (L.NDelay("x", L.IntLit(0), L.VarRef("i")), L.NDef("o", L.VarRef("x"))))
    assert any("after its delay" in m for m in check_nlustre(L.NProgram((stale,))))


def test_nlustre_checker_rejects_nested_delays():
    bad = L.NNode("n", (), (L.Decl("o", L.INT),), (),
                  (L.NDef("o", L.Binop("+", L.Fby(L.IntLit(0), L.IntLit(1)), L.IntLit(1))),))
    assert any("normal form" in m for m in check_nlustre(L.NProgram((bad,))))


def test_stc_checker_requires_one_next_per_register(count_levels):
    s = count_levels["stc"].systems[0]
    no_next = replace(s, transitions=s.transitions[:1])
    assert any("0 Next" in m for m in check_stc(S.StcProgram((no_next,))))
    bad_call = replace(s, transitions=s.transitions + (S.StepCall("o", "ghost", ()),))
    assert any("unknown instance" in m for m in check_stc(S.StcProgram((bad_call,))))


def test_obc_checker_restricts_reset_bodies(count_levels):
    cls = count_levels["obc"].classes[0]
    bad = replace(cls, reset=O.ResetMethod(O.Seq(O.AssignState("norm1$1", L.VarRef("i")), O.Skip())))
    assert check_obc(O.ObcProgram((bad,)))
    ghost = replace(cls, step=replace(cls.step, body=O.Seq(O.AssignState("ghost", L.IntLit(1)), O.Skip())))
    assert any("unknown memory" in m for m in check_obc(O.ObcProgram((ghost,))))


def test_clight_checker_requires_both_functions(count_levels):
    c = count_levels["clight"]
    assert any("missing function" in m for m in check_clight(replace(c, functions=c.functions[:1])))
    bad_field = replace(c, structs=(C.CStruct("count", (C.CDecl("x", "float"),)),))
    assert any("bad type" in m for m in check_clight(bad_field))


# -- alpha equivalence ----------------------------------------------------------


def rename_local(p, old, new):
    def go(v):
        if isinstance(v, tuple):
            return tuple(go(x) for x in v)
        if isinstance(v, str):
            return new if v == old else v
        if hasattr(v, "__dataclass_fields__"):
            return replace(v, **{f: go(getattr(v, f)) for f in v.__dataclass_fields__ if f != "span"})
        return v
    return go(p)


def test_alpha_accepts_consistent_renaming(count_lifted):
    assert alpha_eq(count_lifted, rename_local(count_lifted, "norm1$1", "tmp"))


def test_alpha_keeps_interface_names_fixed(count_lifted):
    assert not alpha_eq(count_lifted, rename_local(count_lifted, "i", "j"))


def test_alpha_rejects_structural_changes(count_lifted):
    n = count_lifted.nodes[0]
    q = n.equations[0]
    minus = replace(n, equations=(replace(q, expr=replace(q.expr, op="-")),) + n.equations[1:])
    assert not alpha_eq(count_lifted, L.Program((minus,)))


@pytest.mark.parametrize("kind", ["nlustre", "stc", "obc", "clight"])
def test_alpha_works_on_every_ir(count_levels, kind):
    p = count_levels[kind]
    assert alpha_eq(p, rename_local(p, "norm1$1", "mem"))
    assert canonical_names(p) == canonical_names(rename_local(p, "norm1$1", "other"))


def test_alpha_refuses_mixed_kinds(count_levels):
    with pytest.raises(TypeError):
        alpha_eq(count_levels["lustre"], count_levels["clight"])
