"""Time the native and pure-Python kernels against each other.

    python3 benchmarks/bench_kernels.py --n 3 --repeat 3
"""

import argparse
import time

import numpy as np

from stubbornmc._kernels import BACKENDS
from stubbornmc.explorer import explore
from stubbornmc.models import build_peterson


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--variant", default="correct")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    names = [b for b in ("python", "native") if b in BACKENDS]
    if "native" not in names:
        print("native extension not built; timing the python backend only")

    space = explore(build_peterson(args.variant, args.n), "full", on_the_fly_safety=False).space
    offsets, dst, _ = space.csr()
    r_off, r_src = space.reverse_csr()
    terminals = np.flatnonzero(space.out_degree() == 0)
    sources = terminals if len(terminals) else np.array([0])

    rows = []
    for name in names:
        k = BACKENDS[name]
        model = build_peterson(args.variant, args.n, backend=name)
        rows.append((name, {
            "explore full": best_of(lambda: explore(model, "full", on_the_fly_safety=False), args.repeat),
            "explore reduced": best_of(lambda: explore(model, "reduced", on_the_fly_safety=False), args.repeat),
            "scc": best_of(lambda: k.scc_ids(space.n_states, offsets, dst), args.repeat),
            "backward reach": best_of(lambda: k.backward_reach(space.n_states, r_off, r_src, sources), args.repeat),
        }))

    print(f"{args.variant} n={args.n}: {space.n_states} states, {space.n_edges} edges")
    header = f"{'task':<16}" + "".join(f"{name:>12}" for name, _ in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for task in rows[0][1]:
        line = f"{task:<16}" + "".join(f"{r[task]:>11.3f}s" for _, r in rows)
        if len(rows) == 2:
            line += f"{rows[0][1][task] / rows[1][1][task]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
