"""Block diagrams of normalized Lustre nodes, emitted as DOT or JSON."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import Optional

from .ir.lustre import Binop, BoolLit, Call, Fby, IntLit, Program, Unop, VarRef

KINDS = ("Input", "Output", "Const", "BinOp", "UnOp", "Fby", "NodeInstance")
# Blocks that carry state or identity and are never merged.
_UNSHAREABLE = ("Input", "Output", "Fby", "NodeInstance")


@dataclass(frozen=True)
class Block:
    id: int
    kind: str
    label: str
    op: Optional[str] = None  # operator, or called node name for NodeInstance
    init: Optional[int] = None  # Fby initial value, or Const value; bools as 0/1


@dataclass(frozen=True)
class Wire:
    src: int
    src_port: int
    dst: int
    dst_port: int


@dataclass(frozen=True)
class BlockGraph:
    blocks: tuple[Block, ...] = ()
    wires: tuple[Wire, ...] = ()

    def count(self, kind: str, op: Optional[str] = None) -> int:
        return sum(1 for b in self.blocks if b.kind == kind and (op is None or b.op == op))


def _const_block(bid: int, c) -> Block:
    if isinstance(c, BoolLit):
        return Block(bid, "Const", "true" if c.value else "false", init=int(c.value))
    return Block(bid, "Const", str(c.value), init=c.value)


def lustre_to_blocks(prog: Program, node: str) -> BlockGraph:
    """Dataflow graph of ``node``; wires follow variable uses."""
    n = prog.node(node)
    blocks: list[Block] = []
    wires: list[Wire] = []
    producer: dict[str, tuple[int, int]] = {}
    aliases: dict[str, str] = {}
    pending: list[tuple[str, int, int]] = []  # variable read into (block, port)

    def new(kind, label, op=None, init=None) -> int:
        blocks.append(Block(len(blocks), kind, label, op, init))
        return len(blocks) - 1

    def feed(e, dst: int, port: int):
        if isinstance(e, VarRef):
            pending.append((e.name, dst, port))
        else:
            wires.append(Wire(expr(e), 0, dst, port))

    def expr(e) -> int:
        if isinstance(e, (IntLit, BoolLit)):
            b = _const_block(len(blocks), e)
            blocks.append(b)
            return b.id
        if isinstance(e, Unop):
            bid = new("UnOp", e.op, op=e.op)
            feed(e.arg, bid, 0)
            return bid
        if isinstance(e, Binop):
            bid = new("BinOp", e.op, op=e.op)
            feed(e.left, bid, 0)
            feed(e.right, bid, 1)
            return bid
        if isinstance(e, Fby):
            init = int(e.init.value)
            label = ("true" if e.init.value else "false") if isinstance(e.init, BoolLit) else str(init)
            bid = new("Fby", f"fby({label})", init=init)
            feed(e.arg, bid, 0)
            return bid
        if isinstance(e, Call):
            bid = new("NodeInstance", e.node, op=e.node)
            for k, a in enumerate(e.args):
                feed(a, bid, k)
            return bid
        raise TypeError(f"unexpected expression {e!r}")

    for d in n.inputs:
        producer[d.name] = (new("Input", d.name), 0)
    outputs = [(d.name, new("Output", d.name)) for d in n.outputs]
    for q in n.equations:
        if isinstance(q.expr, VarRef):
            aliases[q.target] = q.expr.name
        else:
            producer[q.target] = (expr(q.expr), 0)

    def resolve(name: str, seen=()) -> tuple[int, int]:
        if name in producer:
            return producer[name]
        if name in aliases and name not in seen:
            return resolve(aliases[name], seen + (name,))
        raise KeyError(f"variable '{name}' has no producer in node '{node}'")

    for name, bid in outputs:
        pending.append((name, bid, 0))
    for name, dst, port in pending:
        src, sport = resolve(name)
        wires.append(Wire(src, sport, dst, port))
    return BlockGraph(tuple(blocks), tuple(sorted(wires, key=lambda w: (w.dst, w.dst_port, w.src))))


def anf_blocks(g: BlockGraph) -> BlockGraph:
    """Merge structurally identical stateless blocks until nothing changes."""
    while True:
        inputs: dict[int, tuple] = {b.id: () for b in g.blocks}
        for w in sorted(g.wires, key=lambda w: (w.dst, w.dst_port)):
            inputs[w.dst] += ((w.dst_port, w.src, w.src_port),)
        seen: dict[tuple, int] = {}
        merge: dict[int, int] = {}
        for b in g.blocks:
            if b.kind in _UNSHAREABLE:
                continue
            key = (b.kind, b.op, b.init, b.label, inputs[b.id])
            if key in seen:
                merge[b.id] = seen[key]
            else:
                seen[key] = b.id
        if not merge:
            return g
        keep = [b for b in g.blocks if b.id not in merge]
        renum = {b.id: k for k, b in enumerate(keep)}
        for old, new in merge.items():
            renum[old] = renum[new]
        wires = {Wire(renum[w.src], w.src_port, renum[w.dst], w.dst_port)
                 for w in g.wires if w.dst not in merge}
        g = BlockGraph(tuple(replace(b, id=renum[b.id]) for b in keep),
                       tuple(sorted(wires, key=lambda w: (w.dst, w.dst_port, w.src))))


def check_graph(g: BlockGraph) -> list[str]:
    """Structural problems with ``g`` (empty when well formed)."""
    problems = []
    ids = {b.id for b in g.blocks}
    if len(ids) != len(g.blocks):
        problems.append("duplicate block ids")
    fan_in: dict[tuple[int, int], int] = {}
    for w in g.wires:
        if w.src not in ids or w.dst not in ids:
            problems.append(f"wire {w} references a missing block")
        fan_in[(w.dst, w.dst_port)] = fan_in.get((w.dst, w.dst_port), 0) + 1
    for (dst, port), k in fan_in.items():
        if k > 1:
            problems.append(f"block {dst} port {port} has {k} incoming wires")
    for b in g.blocks:
        ports = sorted(p for (d, p) in fan_in if d == b.id)
        if b.kind == "Output" and ports != [0]:
            problems.append(f"output block {b.id} needs exactly one incoming wire")
        if b.kind == "BinOp" and ports != [0, 1]:
            problems.append(f"binary block {b.id} needs two inputs")
    return problems


# -- DOT ----------------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(g: BlockGraph) -> str:
    if not g.blocks and not g.wires:
        return "digraph { }\n"
    lines = ["digraph {"]
    for b in g.blocks:
        lines.append(f"  b{b.id} [label={_quote(f'{b.kind} {b.label}')}];")
    for w in g.wires:
        lines.append(f"  b{w.src} -> b{w.dst} [taillabel={_quote(str(w.src_port))}, "
                     f"headlabel={_quote(str(w.dst_port))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|/\*.*?\*/|\#[^\n]*)
  | (?P<id>[A-Za-z_\u0080-\uffff][A-Za-z_0-9\u0080-\uffff]*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<op>->|--|[{}\[\];,=:])
""", re.VERBOSE | re.DOTALL)


class DotSyntaxError(ValueError):
    pass


def _dot_tokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if not m:
            raise DotSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(0)))
        pos = m.end()
    return out


def validate_dot(text: str) -> None:
    """Raise DotSyntaxError unless ``text`` is a syntactically valid DOT graph.

    Covers graph/digraph headers, node, edge and attribute statements,
    attribute lists and subgraphs.
    """
    toks = _dot_tokens(text)
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else ("eof", "")

    def take(text_=None, kind=None):
        nonlocal i
        t = peek()
        if (text_ is not None and t[1].lower() != text_) or (kind is not None and t[0] not in kind):
            raise DotSyntaxError(f"expected {text_ or kind}, found {t[1] or 'end of input'!r}")
        i += 1
        return t

    def is_id(t):
        return t[0] in ("id", "str")

    if peek()[1].lower() == "strict":
        take("strict")
    head = take(kind=("id",))[1].lower()
    if head not in ("graph", "digraph"):
        raise DotSyntaxError("graph must start with 'graph' or 'digraph'")
    edge_op = "->" if head == "digraph" else "--"
    if is_id(peek()):
        take(kind=("id", "str"))

    def attr_list():
        while peek()[1] == "[":
            take("[")
            while peek()[1] != "]":
                take(kind=("id", "str"))
                take("=")
                take(kind=("id", "str"))
                if peek()[1] in (",", ";"):
                    take()
            take("]")

    def node_id():
        take(kind=("id", "str"))
        if peek()[1] == ":":
            take(":")
            take(kind=("id", "str"))
            if peek()[1] == ":":
                take(":")
                take(kind=("id", "str"))

    def operand():
        if peek()[1].lower() == "subgraph" or peek()[1] == "{":
            subgraph()
        else:
            node_id()

    def subgraph():
        if peek()[1].lower() == "subgraph":
            take("subgraph")
            if is_id(peek()):
                take(kind=("id", "str"))
        stmt_list()

    def stmt():
        t = peek()
        if t[1].lower() in ("graph", "node", "edge") and t[0] == "id":
            take()
            attr_list()
            return
        if is_id(t) and peek(1)[1] == "=":
            take()
            take("=")
            take(kind=("id", "str"))
            return
        operand()
        if peek()[1] in ("->", "--"):
            while peek()[1] in ("->", "--"):
                if peek()[1] != edge_op:
                    raise DotSyntaxError(f"'{peek()[1]}' edge in a {head}")
                take()
                operand()
        attr_list()

    def stmt_list():
        take("{")
        while peek()[1] != "}":
            if peek()[0] == "eof":
                raise DotSyntaxError("unterminated statement list")
            stmt()
            if peek()[1] == ";":
                take(";")
        take("}")

    stmt_list()
    if i != len(toks):
        raise DotSyntaxError(f"trailing input after graph: {peek()[1]!r}")


def is_valid_dot(text: str) -> bool:
    try:
        validate_dot(text)
    except DotSyntaxError:
        return False
    return True


# -- JSON ---------------------------------------------------------------------------


def emit_json(g: BlockGraph) -> str:
    blocks = []
    for b in g.blocks:
        d = {"id": b.id, "kind": b.kind}
        if b.op is not None:
            d["op"] = b.op
        if b.init is not None:
            d["init"] = b.init
        d["label"] = b.label
        blocks.append(d)
    wires = [{"from": w.src, "fromPort": w.src_port, "to": w.dst, "toPort": w.dst_port} for w in g.wires]
    return json.dumps({"blocks": blocks, "wires": wires}, separators=(",", ":"))


def read_json(text: str) -> BlockGraph:
    data = json.loads(text)
    blocks = tuple(Block(b["id"], b["kind"], b["label"], b.get("op"), b.get("init")) for b in data["blocks"])
    for b in blocks:
        if b.kind not in KINDS:
            raise ValueError(f"unknown block kind {b.kind!r}")
    wires = tuple(Wire(w["from"], w["fromPort"], w["to"], w["toPort"]) for w in data["wires"])
    return BlockGraph(blocks, wires)
