"""Hypothesis strategies for well-typed Lustre programs outside the normal form."""

from hypothesis import strategies as st

from kanlift.ir.lustre import BOOL, INT, Binop, BoolLit, Call, Decl, Equation, Fby, IntLit, Node, Program, Unop, VarRef


@st.composite
def int_expr(draw, now, delayed, callees, depth):
    """Int expression reading ``now`` directly and ``delayed`` only under fby."""
    leaves = [st.integers(-50, 50).map(IntLit)]
    if now:
        leaves.append(st.sampled_from(now).map(VarRef))
    if depth <= 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.one_of(leaves))
    kind = draw(st.sampled_from(["bin", "bin", "neg", "fby", "fby", "div", "call"]))

    def sub(readable=now):
        return int_expr(readable, delayed, callees, depth - 1)

    if kind == "bin":
        return Binop(draw(st.sampled_from(["+", "-", "*"])), draw(sub()), draw(sub()))
    if kind == "neg":
        return Unop("-", draw(sub()))
    if kind == "div":
        return Binop("/", draw(sub()), IntLit(draw(st.sampled_from([1, 2, -3, 7]))))
    if kind == "fby":
        return Fby(IntLit(draw(st.integers(-5, 5))), draw(sub(sorted(set(now) | set(delayed)))))
    if callees:
        f = draw(st.sampled_from(callees))
        return Call(f.name, tuple(draw(sub()) for _ in f.inputs))
    return draw(sub())


@st.composite
def unnormalized_node(draw, name, callees):
    inputs = tuple(Decl(f"i{k}", INT) for k in range(draw(st.integers(1, 2))))
    locals_ = tuple(Decl(f"x{k}", INT) for k in range(draw(st.integers(0, 3))))
    bool_out = draw(st.booleans())
    # a boolean output is never read back, so int expressions stay int
    order = [d.name for d in locals_] + ([] if bool_out else ["o"])
    eqs = []
    for k, target in enumerate(order):
        now = [d.name for d in inputs] + order[:k]
        eqs.append(Equation(target, draw(int_expr(now, order[k:], callees, 3))))
    if bool_out:
        e = draw(int_expr([d.name for d in inputs] + order, [], callees, 3))
        cmp = Binop(draw(st.sampled_from(["<", ">=", "=", "<>"])), e, IntLit(0))
        eqs.append(Equation("o", Unop("not", cmp) if draw(st.booleans()) else cmp))
    eqs = draw(st.permutations(eqs))
    return Node(name, inputs, (Decl("o", BOOL if bool_out else INT),), locals_, tuple(eqs))


@st.composite
def unnormalized_program(draw):
    nodes = []
    for k in range(draw(st.integers(1, 3))):
        callees = [n for n in nodes if n.outputs[0].type == INT]
        nodes.append(draw(unnormalized_node(f"n{k}", callees)))
    return Program(tuple(nodes))


@st.composite
def arbitrary_program(draw):
    """Possibly ill-formed programs: undefined names, cycles, bad calls and types."""
    names = ["a", "b", "o", "x", "f", "g"]
    leaf = st.one_of(st.integers(-3, 3).map(IntLit), st.sampled_from(names).map(VarRef),
                     st.booleans().map(BoolLit))

    def grow(kids):
        return st.one_of(
            st.builds(Binop, st.sampled_from(["+", "and", "<", "=", "/"]), kids, kids),
            st.builds(Unop, st.sampled_from(["-", "not"]), kids),
            st.builds(Fby, st.integers(0, 2).map(IntLit), kids),
            st.builds(Call, st.sampled_from(["f", "g", "h"]), st.lists(kids, max_size=2).map(tuple)),
        )

    expr = st.recursive(leaf, grow, max_leaves=6)
    decl = st.builds(Decl, st.sampled_from(names), st.sampled_from([INT, BOOL]))

    def node(name):
        return st.builds(Node, st.just(name), st.lists(decl, max_size=2).map(tuple),
                         st.lists(decl, min_size=0, max_size=2).map(tuple),
                         st.lists(decl, max_size=2).map(tuple),
                         st.lists(st.builds(Equation, st.sampled_from(names), expr), max_size=3).map(tuple))

    return Program(tuple(draw(st.lists(st.sampled_from(["f", "g", "main"]), min_size=1, max_size=3,
                                       unique=True).flatmap(lambda ns: st.tuples(*[node(n) for n in ns])))))
