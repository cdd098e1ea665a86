"""The compilation pipeline as relations over encoded programs.

Each pass is syntax directed: one disjunct per source constructor, and every
clause unifies the structure of *both* sides before recursing, so a pass
terminates whichever side is ground. Names are never invented inside a
relation; they are copied between the two sides, which is what lets the
backward direction recover them.

Term shapes are documented in ``kanlift.ir.encode``.
"""

from __future__ import annotations

import enum

from ..ir.clight import SELF
from ..ir.lustre import BASE_CLOCK
from ..relcore import NIL, conj, cons, disj, eq, fresh, neq, relation, walk_star
from ..relcore.terms import term_vars


class PassName(enum.Enum):
    LustreNL = "lustre-nlustre"
    NLStc = "nlustre-stc"
    StcObc = "stc-obc"
    ObcClight = "obc-clight"


# -- generic helpers ------------------------------------------------------------


@relation
def mapR(rel, xs, ys):
    return disj(
        conj(eq(xs, NIL), eq(ys, NIL)),
        fresh(4, lambda a, rest_a, b, rest_b: conj(
            eq(xs, cons(a, rest_a)),
            eq(ys, cons(b, rest_b)),
            rel(a, b),
            mapR(rel, rest_a, rest_b),
        )),
    )


@relation
def allR(rel, xs):
    return disj(
        eq(xs, NIL),
        fresh(2, lambda a, rest: conj(eq(xs, cons(a, rest)), rel(a), allR(rel, rest))),
    )


@relation
def constR(c):
    return disj(
        fresh(1, lambda n: eq(c, ("int", n))),
        fresh(1, lambda b: eq(c, ("bool", b))),
    )


@relation
def simpleR(e):
    """``e`` is an expression without ``fby`` or calls."""
    return disj(
        fresh(1, lambda n: eq(e, ("int", n))),
        fresh(1, lambda b: eq(e, ("bool", b))),
        fresh(1, lambda x: eq(e, ("var", x))),
        fresh(2, lambda op, a: conj(eq(e, ("unop", op, a)), simpleR(a))),
        fresh(3, lambda op, a, b: conj(eq(e, ("binop", op, a, b)), simpleR(a), simpleR(b))),
    )


def _single_output(o, ty, ck):
    return cons(("decl", o, ty, ck), NIL)


# -- Lustre <-> NLustre -------------------------------------------------------------


@relation
def _eq_l2n(q, nq):
    return disj(
        fresh(3, lambda x, c, e: conj(
            eq(q, ("eq", x, ("fby", c, e))),
            eq(nq, ("delay", x, c, e)),
            constR(c),
            simpleR(e),
        )),
        fresh(3, lambda x, f, args: conj(
            eq(q, ("eq", x, ("call", f, args))),
            eq(nq, ("app", x, f, args)),
            allR(simpleR, args),
        )),
        fresh(2, lambda x, e: conj(
            eq(q, ("eq", x, e)),
            eq(nq, ("def", x, e)),
            simpleR(e),
        )),
    )


@relation
def _node_l2n(n, nn):
    return fresh(6, lambda name, ins, outs, locs, eqs, neqs: conj(
        eq(n, ("node", name, ins, outs, locs, eqs)),
        eq(nn, ("nnode", name, ins, outs, locs, neqs)),
        mapR(_eq_l2n, eqs, neqs),
    ))


@relation
def lustreToNLustreR(l, nl):
    """Relates a Lustre program already in normal form to its NLustre form."""
    return fresh(2, lambda nodes, nnodes: conj(
        eq(l, ("lustre", nodes)),
        eq(nl, ("nlustre", nnodes)),
        mapR(_node_l2n, nodes, nnodes),
    ))


# -- NLustre <-> Stc ----------------------------------------------------------------


@relation
def _target(x, o, locs, locs1, slocs, slocs1):
    """Equation target ``x`` is the output, or the next declared local."""
    return disj(
        conj(eq(x, o), eq(locs1, locs), eq(slocs1, slocs)),
        fresh(2, lambda ty, ck: conj(
            neq(x, o),
            eq(locs, cons(("decl", x, ty, ck), locs1)),
            eq(slocs, cons(("decl", x, ty, ck), slocs1)),
        )),
    )


@relation
def _eqs_n2s(qs, o, locs, trans, slocs, regs, insts):
    """Walk equations in order, threading the declaration lists.

    Locals are consumed in equation order: delay targets become registers,
    everything else stays a local; applications also declare an instance
    named after their target.
    """
    return disj(
        conj(eq(qs, NIL), eq(trans, NIL), eq(locs, NIL), eq(slocs, NIL), eq(regs, NIL), eq(insts, NIL)),
        fresh(4, lambda q, qrest, t, trest: conj(
            eq(qs, cons(q, qrest)),
            eq(trans, cons(t, trest)),
            disj(
                fresh(4, lambda x, e, locs1, slocs1: conj(
                    eq(q, ("def", x, e)),
                    eq(t, ("define", x, e)),
                    _target(x, o, locs, locs1, slocs, slocs1),
                    _eqs_n2s(qrest, o, locs1, trest, slocs1, regs, insts),
                )),
                fresh(6, lambda x, c, e, ty, locs1, regs1: conj(
                    eq(q, ("delay", x, c, e)),
                    eq(t, ("next", x, e)),
                    eq(locs, cons(("decl", x, ty, BASE_CLOCK), locs1)),
                    eq(regs, cons(("reg", x, c, ty), regs1)),
                    _eqs_n2s(qrest, o, locs1, trest, slocs, regs1, insts),
                )),
                fresh(6, lambda x, f, args, locs1, slocs1, insts1: conj(
                    eq(q, ("app", x, f, args)),
                    eq(t, ("stepcall", x, x, args)),
                    eq(insts, cons(("inst", x, f), insts1)),
                    _target(x, o, locs, locs1, slocs, slocs1),
                    _eqs_n2s(qrest, o, locs1, trest, slocs1, regs, insts1),
                )),
            ),
        )),
    )


@relation
def _node_n2s(nn, sy):
    return fresh(11, lambda name, ins, o, oty, ock, locs, neqs, slocs, regs, insts, trans: conj(
        eq(nn, ("nnode", name, ins, _single_output(o, oty, ock), locs, neqs)),
        eq(sy, ("system", name, ins, _single_output(o, oty, ock), slocs, regs, insts, trans)),
        _eqs_n2s(neqs, o, locs, trans, slocs, regs, insts),
    ))


@relation
def nlustreToStcR(nl, stc):
    return fresh(2, lambda nnodes, systems: conj(
        eq(nl, ("nlustre", nnodes)),
        eq(stc, ("stc", systems)),
        mapR(_node_n2s, nnodes, systems),
    ))


# -- Stc <-> Obc --------------------------------------------------------------------


@relation
def _is_reg(x, regs):
    return disj(
        fresh(3, lambda c, ty, rest: eq(regs, cons(("reg", x, c, ty), rest))),
        fresh(4, lambda y, c, ty, rest: conj(
            eq(regs, cons(("reg", y, c, ty), rest)),
            neq(x, y),
            _is_reg(x, rest),
        )),
    )


@relation
def _not_reg(x, regs):
    return disj(
        eq(regs, NIL),
        fresh(4, lambda y, c, ty, rest: conj(
            eq(regs, cons(("reg", y, c, ty), rest)),
            neq(x, y),
            _not_reg(x, rest),
        )),
    )


@relation
def _expr_s2o(e, regs, oe):
    """Variable reads of registers become state reads."""
    return disj(
        fresh(1, lambda n: conj(eq(e, ("int", n)), eq(oe, ("int", n)))),
        fresh(1, lambda b: conj(eq(e, ("bool", b)), eq(oe, ("bool", b)))),
        fresh(1, lambda x: conj(eq(e, ("var", x)), eq(oe, ("state", x)), _is_reg(x, regs))),
        fresh(1, lambda x: conj(eq(e, ("var", x)), eq(oe, ("var", x)), _not_reg(x, regs))),
        fresh(3, lambda op, a, oa: conj(
            eq(e, ("unop", op, a)),
            eq(oe, ("unop", op, oa)),
            _expr_s2o(a, regs, oa),
        )),
        fresh(5, lambda op, a, b, oa, ob: conj(
            eq(e, ("binop", op, a, b)),
            eq(oe, ("binop", op, oa, ob)),
            _expr_s2o(a, regs, oa),
            _expr_s2o(b, regs, ob),
        )),
    )


@relation
def _exprs_s2o(es, regs, oes):
    return disj(
        conj(eq(es, NIL), eq(oes, NIL)),
        fresh(4, lambda e, rest, oe, orest: conj(
            eq(es, cons(e, rest)),
            eq(oes, cons(oe, orest)),
            _expr_s2o(e, regs, oe),
            _exprs_s2o(rest, regs, orest),
        )),
    )


@relation
def _trans_stmt(t, regs, s):
    return disj(
        fresh(3, lambda x, e, oe: conj(
            eq(t, ("define", x, e)),
            eq(s, ("assign", x, oe)),
            _expr_s2o(e, regs, oe),
        )),
        fresh(3, lambda x, e, oe: conj(
            eq(t, ("next", x, e)),
            eq(s, ("assignst", x, oe)),
            _expr_s2o(e, regs, oe),
        )),
        fresh(4, lambda x, i, args, oargs: conj(
            eq(t, ("stepcall", x, i, args)),
            eq(s, ("mcall", ("some", x), i, "step", oargs)),
            _exprs_s2o(args, regs, oargs),
        )),
    )


@relation
def _trans_chain(trans, regs, body):
    """Transitions in order as a right-nested, skip-terminated sequence."""
    return disj(
        conj(eq(trans, NIL), eq(body, "skip")),
        fresh(4, lambda t, trest, s, brest: conj(
            eq(trans, cons(t, trest)),
            eq(body, ("seq", s, brest)),
            _trans_stmt(t, regs, s),
            _trans_chain(trest, regs, brest),
        )),
    )


@relation
def _reset_insts(insts, body):
    return disj(
        conj(eq(insts, NIL), eq(body, "skip")),
        fresh(4, lambda i, f, rest, brest: conj(
            eq(insts, cons(("inst", i, f), rest)),
            eq(body, ("seq", ("mcall", "none", i, "reset", NIL), brest)),
            _reset_insts(rest, brest),
        )),
    )


@relation
def _reset_body(cells, tag, insts, body):
    """Initialise every register/memory (``tag``), then reset every instance."""
    return disj(
        fresh(5, lambda x, c, ty, rest, brest: conj(
            eq(cells, cons((tag, x, c, ty), rest)),
            eq(body, ("seq", ("assignst", x, c), brest)),
            _reset_body(rest, tag, insts, brest),
        )),
        conj(eq(cells, NIL), _reset_insts(insts, body)),
    )


def _reg_mem(r, m):
    return fresh(3, lambda x, c, ty: conj(eq(r, ("reg", x, c, ty)), eq(m, ("mem", x, c, ty))))


@relation
def _sys_s2o(sy, cls):
    return fresh(12, lambda name, ins, o, oty, ock, slocs, regs, insts, trans, mems, body, rbody: conj(
        eq(sy, ("system", name, ins, _single_output(o, oty, ock), slocs, regs, insts, trans)),
        eq(cls, ("class", name, mems, insts, ("step", ins, ("decl", o, oty, ock), slocs, body), ("reset", rbody))),
        mapR(_reg_mem, regs, mems),
        _trans_chain(trans, regs, body),
        _reset_body(regs, "reg", insts, rbody),
    ))


@relation
def stcToObcR(stc, obc):
    return fresh(2, lambda systems, classes: conj(
        eq(stc, ("stc", systems)),
        eq(obc, ("obc", classes)),
        mapR(_sys_s2o, systems, classes),
    ))


# -- Obc <-> Clight -----------------------------------------------------------------


@relation
def _type(ty, cty):
    return disj(
        conj(eq(ty, "int32"), eq(cty, "int")),
        conj(eq(ty, "bool"), eq(cty, "_Bool")),
    )


def _decl_cdecl(d, cd):
    return fresh(3, lambda x, ty, cty: conj(
        eq(d, ("decl", x, ty, BASE_CLOCK)),
        eq(cd, ("cdecl", x, cty)),
        _type(ty, cty),
    ))


@relation
def _inst_fields(insts, fields):
    return disj(
        conj(eq(insts, NIL), eq(fields, NIL)),
        fresh(4, lambda i, f, rest, frest: conj(
            eq(insts, cons(("inst", i, f), rest)),
            eq(fields, cons(("cdecl", i, ("structty", f)), frest)),
            _inst_fields(rest, frest),
        )),
    )


@relation
def _fields(mems, insts, fields):
    """Struct fields: memories in order, then one nested struct per instance."""
    return disj(
        fresh(6, lambda x, c, ty, cty, rest, frest: conj(
            eq(mems, cons(("mem", x, c, ty), rest)),
            eq(fields, cons(("cdecl", x, cty), frest)),
            _type(ty, cty),
            _fields(rest, insts, frest),
        )),
        conj(eq(mems, NIL), _inst_fields(insts, fields)),
    )


@relation
def _inst_class(i, insts, f):
    return disj(
        fresh(1, lambda rest: eq(insts, cons(("inst", i, f), rest))),
        fresh(3, lambda j, g, rest: conj(
            eq(insts, cons(("inst", j, g), rest)),
            neq(i, j),
            _inst_class(i, rest, f),
        )),
    )


@relation
def _expr_o2c(e, ce):
    return disj(
        fresh(1, lambda n: conj(eq(e, ("int", n)), eq(ce, ("cconst", n, "int")))),
        conj(eq(e, ("bool", "true")), eq(ce, ("cconst", 1, "_Bool"))),
        conj(eq(e, ("bool", "false")), eq(ce, ("cconst", 0, "_Bool"))),
        fresh(1, lambda x: conj(eq(e, ("var", x)), eq(ce, ("cvar", x)))),
        fresh(1, lambda x: conj(eq(e, ("state", x)), eq(ce, ("cfield", x)))),
        fresh(3, lambda op, a, ca: conj(
            eq(e, ("unop", op, a)),
            eq(ce, ("cunop", op, ca)),
            _expr_o2c(a, ca),
        )),
        fresh(5, lambda op, a, b, ca, cb: conj(
            eq(e, ("binop", op, a, b)),
            eq(ce, ("cbinop", op, ca, cb)),
            _expr_o2c(a, ca),
            _expr_o2c(b, cb),
        )),
    )


@relation
def _stmt_o2c(s, insts, cs):
    return disj(
        fresh(3, lambda x, e, ce: conj(eq(s, ("assign", x, e)), eq(cs, ("cassign", x, ce)), _expr_o2c(e, ce))),
        fresh(3, lambda x, e, ce: conj(eq(s, ("assignst", x, e)), eq(cs, ("cassignf", x, ce)), _expr_o2c(e, ce))),
        fresh(6, lambda r, i, m, f, args, cargs: conj(
            eq(s, ("mcall", r, i, m, args)),
            eq(cs, ("ccall", r, ("fname", m, f), i, cargs)),
            _inst_class(i, insts, f),
            mapR(_expr_o2c, args, cargs),
        )),
        fresh(4, lambda a, b, ca, cb: conj(
            eq(s, ("seq", a, b)),
            eq(cs, ("cseq", ca, cb)),
            _stmt_o2c(a, insts, ca),
            _stmt_o2c(b, insts, cb),
        )),
        conj(eq(s, "skip"), eq(cs, "cskip")),
        fresh(6, lambda c, a, b, cc, ca, cb: conj(
            eq(s, ("ite", c, a, b)),
            eq(cs, ("cif", cc, ca, cb)),
            _expr_o2c(c, cc),
            _stmt_o2c(a, insts, ca),
            _stmt_o2c(b, insts, cb),
        )),
    )


@relation
def _chain(body, insts, cbody, ret):
    """A skip-terminated method body becomes a chain ending in ``skip; ret``."""
    return disj(
        conj(eq(body, "skip"), eq(cbody, ("cseq", "cskip", ret))),
        fresh(4, lambda s, rest, cs, crest: conj(
            eq(body, ("seq", s, rest)),
            eq(cbody, ("cseq", cs, crest)),
            _stmt_o2c(s, insts, cs),
            _chain(rest, insts, crest, ret),
        )),
    )


@relation
def _class_o2c(c, struct, stepf, resetf):
    return fresh(16, lambda name, mems, insts, params, o, oty, locs, body, rbody, fields, cparams, clocs, coty, cbody, crbody, _: conj(
        eq(c, ("class", name, mems, insts, ("step", params, ("decl", o, oty, BASE_CLOCK), locs, body), ("reset", rbody))),
        eq(struct, ("struct", name, fields)),
        eq(stepf, ("fun", ("fname", "step", name), SELF, name, cparams, cons(("cdecl", o, coty), clocs), cbody, coty)),
        eq(resetf, ("fun", ("fname", "reset", name), SELF, name, NIL, NIL, crbody, "void")),
        _type(oty, coty),
        _fields(mems, insts, fields),
        mapR(_decl_cdecl, params, cparams),
        mapR(_decl_cdecl, locs, clocs),
        _chain(body, insts, cbody, ("creturn", ("some", ("cvar", o)))),
        _chain(rbody, insts, crbody, ("creturn", "none")),
        _reset_body(mems, "mem", insts, rbody),
    ))


@relation
def _classes_o2c(classes, structs, funs):
    return disj(
        conj(eq(classes, NIL), eq(structs, NIL), eq(funs, NIL)),
        fresh(7, lambda c, crest, s, srest, stepf, resetf, frest: conj(
            eq(classes, cons(c, crest)),
            eq(structs, cons(s, srest)),
            eq(funs, cons(stepf, cons(resetf, frest))),
            _class_o2c(c, s, stepf, resetf),
            _classes_o2c(crest, srest, frest),
        )),
    )


@relation
def obcToClightR(obc, cl):
    return fresh(3, lambda classes, structs, funs: conj(
        eq(obc, ("obc", classes)),
        eq(cl, ("clight", structs, funs)),
        _classes_o2c(classes, structs, funs),
    ))


# -- composition ------------------------------------------------------------------

PASSES = {
    PassName.LustreNL: lustreToNLustreR,
    PassName.NLStc: nlustreToStcR,
    PassName.StcObc: stcToObcR,
    PassName.ObcClight: obcToClightR,
}

# IR kind on each side of a pass, in pipeline order.
PASS_KINDS = {
    PassName.LustreNL: ("lustre", "nlustre"),
    PassName.NLStc: ("nlustre", "stc"),
    PassName.StcObc: ("stc", "obc"),
    PassName.ObcClight: ("obc", "clight"),
}


def _is_ground(term, state) -> bool:
    return not term_vars(walk_star(term, state.subst))


def compileR(l, cl):
    """Relates a normal-form Lustre program to its C translation.

    The four passes are chained through fresh intermediate programs. The
    chain is solved starting from whichever end is ground, so each pass
    always runs with one side known; conjunction order does not change
    the set of answers, only whether the search terminates.
    """

    def body(nl, stc, obc):
        steps = [
            lustreToNLustreR(l, nl),
            nlustreToStcR(nl, stc),
            stcToObcR(stc, obc),
            obcToClightR(obc, cl),
        ]

        def goal(state):
            if _is_ground(l, state) or not _is_ground(cl, state):
                return conj(*steps)(state)
            return conj(*reversed(steps))(state)

        return goal

    return fresh(3, body)
