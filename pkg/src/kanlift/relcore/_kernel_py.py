"""Pure-Python unification kernel.

Must stay behaviourally identical to ``_kernel.pyx``; the test-suite runs
both against each other.

The substitution is a persistent 32-way trie keyed by variable id. Updates
copy one path (``depth`` nodes of 32 slots), so branching search states can
share structure without copying whole maps.
"""

from __future__ import annotations

from .terms import Var

IMPLEMENTATION = "python"

_BITS = 5
_MASK = 31
_EMPTY_NODE = (None,) * 32


class Subst:
    __slots__ = ("root", "depth", "size")

    def __init__(self, root=_EMPTY_NODE, depth=1, size=0):
        self.root = root
        self.depth = depth
        self.size = size

    def get(self, key):
        if key >> (_BITS * self.depth):
            return None
        node = self.root
        shift = _BITS * (self.depth - 1)
        while shift:
            node = node[(key >> shift) & _MASK]
            if node is None:
                return None
            shift -= _BITS
        return node[key & _MASK]

    def set(self, key, value):
        root = self.root
        depth = self.depth
        while key >> (_BITS * depth):
            root = (root,) + (None,) * 31
            depth += 1
        return Subst(_assoc(root, _BITS * (depth - 1), key, value), depth, self.size + 1)

    def items(self):
        out = []
        _collect(self.root, _BITS * (self.depth - 1), 0, out)
        return out

    def __len__(self):
        return self.size


def _assoc(node, shift, key, value):
    idx = (key >> shift) & _MASK
    new = list(node)
    if shift:
        child = node[idx]
        new[idx] = _assoc(_EMPTY_NODE if child is None else child, shift - _BITS, key, value)
    else:
        new[idx] = value
    return tuple(new)


def _collect(node, shift, prefix, out):
    for i, child in enumerate(node):
        if child is None:
            continue
        key = (prefix << _BITS) | i
        if shift:
            _collect(child, shift - _BITS, key, out)
        else:
            out.append((key, child))


EMPTY = Subst()


def walk(t, s):
    while type(t) is Var:
        v = s.get(t.id)
        if v is None:
            return t
        t = v
    return t


def walk_star(t, s):
    t = walk(t, s)
    if type(t) is tuple:
        return (t[0],) + tuple([walk_star(e, s) for e in t[1:]])
    return t


def occurs(vid, t, s):
    t = walk(t, s)
    tt = type(t)
    if tt is Var:
        return t.id == vid
    if tt is tuple:
        for i in range(1, len(t)):
            if occurs(vid, t[i], s):
                return True
    return False


def _bind(v, t, s, bound):
    if type(t) is not Var and occurs(v.id, t, s):
        return None
    if bound is not None:
        bound.append(v.id)
    return s.set(v.id, t)


def unify(u, v, s, bound=None):
    """Unify ``u`` and ``v`` under ``s``; return the extended substitution or None.

    Ids of variables bound along the way are appended to ``bound``.
    """
    u = walk(u, s)
    v = walk(v, s)
    if u is v:
        return s
    tu = type(u)
    tv = type(v)
    if tu is Var:
        if tv is Var and u.id == v.id:
            return s
        return _bind(u, v, s, bound)
    if tv is Var:
        return _bind(v, u, s, bound)
    if tu is tuple:
        n = len(u)
        if tv is not tuple or len(v) != n or u[0] != v[0]:
            return None
        for i in range(1, n):
            s = unify(u[i], v[i], s, bound)
            if s is None:
                return None
        return s
    if tu is tv and u == v:
        return s
    return None
