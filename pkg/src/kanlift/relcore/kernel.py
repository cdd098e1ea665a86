"""Select the unification kernel at import time.

The compiled Cython kernel is used when it has been built; otherwise the
pure-Python one. Set ``KANLIFT_PURE_KERNEL=1`` to force the fallback.
"""

import os

if os.environ.get("KANLIFT_PURE_KERNEL"):
    from ._kernel_py import EMPTY, IMPLEMENTATION, Subst, occurs, unify, walk, walk_star
else:
    try:
        from ._kernel import EMPTY, IMPLEMENTATION, Subst, occurs, unify, walk, walk_star
    except ImportError:
        from ._kernel_py import EMPTY, IMPLEMENTATION, Subst, occurs, unify, walk, walk_star

__all__ = ["EMPTY", "IMPLEMENTATION", "Subst", "occurs", "unify", "walk", "walk_star"]
