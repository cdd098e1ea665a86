"""Compare the compiled and pure-Python unification kernels.

Usage: python3 benchmarks/bench_kernel.py [--programs N] [--repeat K]

Micro benchmarks call each kernel module directly. The end-to-end benchmark
runs compile and lift over a generated corpus in a child process per kernel,
since the engine binds its kernel at import time.
"""

from __future__ import annotations

import argparse
import importlib
import json
import os
import subprocess
import sys
import timeit

from kanlift.relcore.terms import Var, from_list

_E2E = """
import json, sys, time
from kanlift.corpus import corpus
from kanlift.relcore import IMPLEMENTATION
from kanlift.vertical import compile, lift
ps = corpus(int(sys.argv[1]), seed=7)
t = time.perf_counter()
for p in ps:
    lift(compile(p))
print(json.dumps({"impl": IMPLEMENTATION, "seconds": time.perf_counter() - t}))
"""


def _kernels():
    out = {"python": importlib.import_module("kanlift.relcore._kernel_py")}
    try:
        out["cython"] = importlib.import_module("kanlift.relcore._kernel")
    except ImportError:
        print("compiled kernel not built; only the fallback is measured", file=sys.stderr)
    return out


def _micro(k, repeat: int) -> dict[str, float]:
    n = 200
    vs = [Var(i) for i in range(n)]
    left = from_list([("pair", v, i) for i, v in enumerate(vs)])
    right = from_list([("pair", i, v) for i, v in enumerate(vs)])

    def chain():
        s = k.EMPTY
        for i in range(n - 1):
            s = s.set(i, vs[i + 1])
        return s

    s_chain = chain()

    def bench(fn):
        return min(timeit.repeat(fn, number=20, repeat=repeat)) / 20

    return {
        "unify 200-pair lists": bench(lambda: k.unify(left, right, k.EMPTY)),
        "build 200-link chain": bench(chain),
        "walk 200-link chain": bench(lambda: k.walk(vs[0], s_chain)),
        "walk_star bound list": bench(lambda: k.walk_star(left, k.unify(left, right, k.EMPTY))),
    }


def _end_to_end(impl: str, programs: int) -> float:
    env = dict(os.environ)
    env.pop("KANLIFT_PURE_KERNEL", None)
    if impl == "python":
        env["KANLIFT_PURE_KERNEL"] = "1"
    out = subprocess.run([sys.executable, "-c", _E2E, str(programs)], env=env,
                         capture_output=True, text=True, check=True)
    result = json.loads(out.stdout)
    assert result["impl"] == impl, result
    return result["seconds"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=100, help="corpus size for the end-to-end run")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions for micro benchmarks")
    args = ap.parse_args(argv)
    kernels = _kernels()
    rows = {name: _micro(k, args.repeat) for name, k in kernels.items()}
    rows_e2e = {name: _end_to_end(name, args.programs) for name in kernels}
    names = list(kernels)
    print(f"{'benchmark':32}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label in rows["python"]:
        vals = [rows[n][label] * 1e6 for n in names]
        line = f"{label:32}" + "".join(f"{v:10.1f}us" for v in vals)
        if len(vals) == 2:
            line += f"{vals[0] / vals[1]:11.2f}x"
        print(line)
    vals = [rows_e2e[n] for n in names]
    line = f"{f'compile+lift {args.programs} programs':32}" + "".join(f"{v:11.2f}s" for v in vals)
    if len(vals) == 2:
        line += f"{vals[0] / vals[1]:11.2f}x"
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
