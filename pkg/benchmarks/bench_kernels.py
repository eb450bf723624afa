"""Time the compiled kernels against the numpy fallback on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--groups S4,A4,...]
"""
import argparse
import timeit

import numpy as np

from eqk import _pykernels
from eqk.gset import gsets_up_to
from eqk.perm import build_group, enumerate_subgroups

try:
    from eqk import _ckernels
except ImportError:
    _ckernels = None


def workloads(G):
    images = np.array([p.images for p in G.elements], dtype=np.int64)
    subs = enumerate_subgroups(G)
    gens = np.array([G.index(g) for g in G.generators], dtype=np.int32)
    acts = np.array([G.table[g] for g in gens], dtype=np.int32)
    pairs = [(np.array(K.elements, dtype=np.int32), np.array(H.elements, dtype=np.int32))
             for K in subs for H in subs]
    sub_gens = [np.array(S.generators or (0,), dtype=np.int32) for S in subs]
    small = [X.action_array() for X in gsets_up_to(G, 3)]
    return {
        "mult_table": lambda k: k.mult_table(images),
        "closure": lambda k: [k.closure(G.table, g) for g in sub_gens],
        "double_coset_labels": lambda k: [k.double_coset_labels(G.table, l, r) for l, r in pairs],
        "extend_action": lambda k: k.extend_action(G.table, gens, acts),
        "orbit_labels": lambda k: [k.orbit_labels(a) for a in small],
        "level_stabilizers": lambda k: [k.level_stabilizers(a, 3) for a in small],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--groups", default="S3,D8,A4,S4")
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels is not None else [])
    if _ckernels is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'group':<6} {'kernel':<20} " + " ".join(f"{b:>12}" for b, _ in backends) + "   speedup")
    for name in args.groups.split(","):
        G = build_group(name)
        for kernel, fn in workloads(G).items():
            times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for _, mod in backends]
            cells = " ".join(f"{t * 1e3:>10.3f}ms" for t in times)
            speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 and times[1] > 0 else ""
            print(f"{name:<6} {kernel:<20} {cells} {speed}")


if __name__ == "__main__":
    main()
