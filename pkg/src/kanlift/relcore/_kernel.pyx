# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled unification kernel; mirrors ``_kernel_py`` exactly."""

from .terms import Var

IMPLEMENTATION = "cython"

cdef enum:
    BITS = 5
    MASK = 31

cdef tuple _EMPTY_NODE = (None,) * 32
cdef object _Var = Var


cdef class Subst:
    cdef public object root
    cdef public int depth
    cdef public Py_ssize_t size

    def __init__(self, root=_EMPTY_NODE, int depth=1, Py_ssize_t size=0):
        self.root = root
        self.depth = depth
        self.size = size

    cpdef object get(self, long key):
        cdef int shift
        cdef object node
        if key >> (BITS * self.depth):
            return None
        node = self.root
        shift = BITS * (self.depth - 1)
        while shift:
            node = (<tuple>node)[(key >> shift) & MASK]
            if node is None:
                return None
            shift -= BITS
        return (<tuple>node)[key & MASK]

    cpdef Subst set(self, long key, object value):
        cdef object root = self.root
        cdef int depth = self.depth
        while key >> (BITS * depth):
            root = (root,) + (None,) * 31
            depth += 1
        return Subst(_assoc(<tuple>root, BITS * (depth - 1), key, value), depth, self.size + 1)

    def items(self):
        out = []
        _collect(self.root, BITS * (self.depth - 1), 0, out)
        return out

    def __len__(self):
        return self.size


cdef tuple _assoc(tuple node, int shift, long key, object value):
    cdef int idx = (key >> shift) & MASK
    cdef list new = list(node)
    cdef object child
    if shift:
        child = node[idx]
        new[idx] = _assoc(_EMPTY_NODE if child is None else <tuple>child, shift - BITS, key, value)
    else:
        new[idx] = value
    return tuple(new)


cdef void _collect(tuple node, int shift, long prefix, list out):
    cdef int i
    cdef object child
    for i in range(32):
        child = node[i]
        if child is None:
            continue
        if shift:
            _collect(<tuple>child, shift - BITS, (prefix << BITS) | i, out)
        else:
            out.append(((prefix << BITS) | i, child))


EMPTY = Subst()


cpdef object walk(object t, Subst s):
    cdef object v
    while type(t) is _Var:
        v = s.get(t.id)
        if v is None:
            return t
        t = v
    return t


cpdef object walk_star(object t, Subst s):
    cdef Py_ssize_t i, n
    cdef list parts
    t = walk(t, s)
    if type(t) is tuple:
        n = len(<tuple>t)
        parts = [(<tuple>t)[0]]
        for i in range(1, n):
            parts.append(walk_star((<tuple>t)[i], s))
        return tuple(parts)
    return t


cpdef bint occurs(long vid, object t, Subst s):
    cdef Py_ssize_t i, n
    t = walk(t, s)
    if type(t) is _Var:
        return t.id == vid
    if type(t) is tuple:
        n = len(<tuple>t)
        for i in range(1, n):
            if occurs(vid, (<tuple>t)[i], s):
                return True
    return False


cdef object _bind(object v, object t, Subst s, object bound):
    if type(t) is not _Var and occurs(v.id, t, s):
        return None
    if bound is not None:
        bound.append(v.id)
    return s.set(v.id, t)


cpdef object unify(object u, object v, Subst s, object bound=None):
    """Unify ``u`` and ``v`` under ``s``; return the extended substitution or None."""
    cdef Py_ssize_t i, n
    cdef object tu, tv
    u = walk(u, s)
    v = walk(v, s)
    if u is v:
        return s
    tu = type(u)
    tv = type(v)
    if tu is _Var:
        if tv is _Var and u.id == v.id:
            return s
        return _bind(u, v, s, bound)
    if tv is _Var:
        return _bind(v, u, s, bound)
    if tu is tuple:
        n = len(<tuple>u)
        if tv is not tuple or len(<tuple>v) != n or (<tuple>u)[0] != (<tuple>v)[0]:
            return None
        for i in range(1, n):
            s = unify((<tuple>u)[i], (<tuple>v)[i], s, bound)
            if s is None:
                return None
        return s
    if tu is tv and u == v:
        return s
    return None
