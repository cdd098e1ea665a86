import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kanlift.corpus import random_program
from kanlift.diagram import (
    Block, BlockGraph, DotSyntaxError, Wire, anf_blocks, check_graph, emit_dot, emit_json, is_valid_dot,
    lustre_to_blocks, read_json, validate_dot,
)
from kanlift.frontend import parse_lustre
from kanlift.ir.lustre import Fby


def graph(text, node="n"):
    return lustre_to_blocks(parse_lustre(text), node)


def by_kind(g, kind):
    return [b for b in g.blocks if b.kind == kind]


def test_count_graph_topology(count_lifted):
    g = lustre_to_blocks(count_lifted, "count")
    assert [g.count(k) for k in ("Input", "Output", "BinOp", "Fby")] == [1, 1, 1, 1]
    (inp,), (out,), (plus,), (fby,) = (by_kind(g, k) for k in ("Input", "Output", "BinOp", "Fby"))
    assert plus.op == "+" and fby.init == 0
    assert set(g.wires) == {
        Wire(fby.id, 0, plus.id, 0), Wire(inp.id, 0, plus.id, 1),
        Wire(plus.id, 0, out.id, 0), Wire(plus.id, 0, fby.id, 0),
    }
    assert check_graph(g) == []


def test_wire_through():
    g = graph("node n (i : int32) returns (o : int32) let o = i; tel")
    assert [b.kind for b in g.blocks] == ["Input", "Output"]
    assert g.wires == (Wire(0, 0, 1, 0),)


def test_node_instances_have_one_port_per_argument():
    text = """node f (a : int32; b : int32) returns (c : int32) let c = a - b; tel
      node n (i : int32) returns (o : int32) let o = f(i, 3); tel"""
    g = graph(text)
    (inst,) = by_kind(g, "NodeInstance")
    assert inst.op == "f"
    assert sorted(w.dst_port for w in g.wires if w.dst == inst.id) == [0, 1]


def test_unknown_node_is_an_error(count_lifted):
    with pytest.raises(KeyError):
        lustre_to_blocks(count_lifted, "nope")


def test_anf_merges_duplicated_constants():
    g = graph("node n (i : int32) returns (o : int32) let o = (i + 1) * (i + 1); tel")
    assert g.count("Const") == 2 and g.count("BinOp", "+") == 2
    a = anf_blocks(g)
    assert a.count("Const") == 1 and a.count("BinOp", "+") == 1
    (mul,) = [b for b in a.blocks if b.op == "*"]
    (plus,) = [b for b in a.blocks if b.op == "+"]
    assert sorted(w.dst_port for w in a.wires if w.src == plus.id and w.dst == mul.id) == [0, 1]
    assert check_graph(a) == []


def test_anf_never_merges_state():
    g = graph("node n (i : int32) returns (o : int32) let o = (0 fby i) + (0 fby i); tel")
    assert anf_blocks(g).count("Fby") == 2


def test_anf_of_count_and_of_empty_graphs(count_lifted):
    g = lustre_to_blocks(count_lifted, "count")
    assert anf_blocks(g) == g
    assert anf_blocks(BlockGraph()) == BlockGraph()


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_graph_invariants_on_generated_programs(seed):
    p = random_program(seed)
    for n in p.nodes:
        g = lustre_to_blocks(p, n.name)
        assert check_graph(g) == []
        assert g.count("Fby") == sum(isinstance(q.expr, Fby) for q in n.equations)
        assert g.count("Input") + g.count("Output") == len(n.inputs) + len(n.outputs)
        assert lustre_to_blocks(p, n.name) == g
        a = anf_blocks(g)
        assert anf_blocks(a) == a and check_graph(a) == []
        assert read_json(emit_json(a)) == a
        validate_dot(emit_dot(a))


def test_count_dot_has_four_nodes_and_four_edges(count_lifted):
    dot = emit_dot(lustre_to_blocks(count_lifted, "count"))
    validate_dot(dot)
    assert dot.count("->") == 4
    assert sum(1 for line in dot.splitlines() if "[label=" in line) == 4
    assert '"Fby fby(0)"' in dot and '"BinOp +"' in dot


def test_empty_graph_serializations():
    assert emit_dot(BlockGraph()) == "digraph { }\n"
    assert emit_json(BlockGraph()) == '{"blocks":[],"wires":[]}'
    assert read_json(emit_json(BlockGraph())) == BlockGraph()


def test_json_schema_and_key_order(count_lifted):
    text = emit_json(lustre_to_blocks(count_lifted, "count"))
    assert text.startswith('{"blocks":[{"id":0,"kind":"Input","label":"i"}')
    assert '{"id":3,"kind":"Fby","init":0,"label":"fby(0)"}' in text
    assert '{"from":2,"fromPort":0,"to":1,"toPort":0}' in text


def test_json_rejects_unknown_kinds():
    with pytest.raises(ValueError):
        read_json('{"blocks":[{"id":0,"kind":"Blob","label":"x"}],"wires":[]}')


def test_check_graph_flags_broken_graphs():
    g = BlockGraph((Block(0, "Input", "i"), Block(1, "Output", "o"), Block(2, "BinOp", "+", "+")),
                   (Wire(0, 0, 2, 0), Wire(0, 0, 9, 0)))
    problems = check_graph(g)
    assert any("missing block" in p for p in problems)
    assert any("output block 1" in p for p in problems)
    assert any("binary block 2" in p for p in problems)


def test_labels_with_quotes_stay_valid():
    g = BlockGraph((Block(0, "Input", 'we"ird\\'), Block(1, "Output", "o")), (Wire(0, 0, 1, 0),))
    validate_dot(emit_dot(g))


@pytest.mark.parametrize("text", [
    "digraph { }",
    "strict digraph G { a -> b -> c; }",
    'graph { a -- b [color="red", label=x]; node [shape=box]; rank=same }',
    "digraph { subgraph cluster_0 { a; b } -> c; a:p1:n -> d }",
    "/* c */ digraph { // line\n a }",
])
def test_validator_accepts_valid_dot(text):
    assert is_valid_dot(text)


@pytest.mark.parametrize("text", [
    "", "digraph {", "digraph { a -> }", "graph { a -> b }", "digraph { a [label=] }",
    "digraph { } extra", "tree { }", "digraph { a @ b }",
])
def test_validator_rejects_invalid_dot(text):
    assert not is_valid_dot(text)
    with pytest.raises(DotSyntaxError):
        validate_dot(text)
