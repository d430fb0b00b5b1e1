"""Time every hot kernel under the numba and numpy backends.

    python3 benchmarks/bench_backends.py [--repeat 5]

Both implementations are taken from ``kernels.NUMBA_KERNELS`` in the same
process, so the numba column is only compiled when numba is importable and
TANGLEDUALITY_NUMBA is not 0 (otherwise it runs as plain Python).  Outputs of
the two backends are compared before timing.
"""

import argparse
from timeit import repeat

import numpy as np

from tangleduality import _accel, kernels
from tangleduality.corpus import random_graph
from tangleduality.graphsep import complete_graph, enumerate_Sk, grid_graph


def _adj(G):
    return np.array(G.adj, dtype=np.uint64)


def workloads():
    H4, H5 = grid_graph(4), grid_graph(5)
    R = random_graph(8, 0.5, seed=3)
    S = enumerate_Sk(R, 4)
    keys, perm = kernels.pack_keys(S.A, S.B, R.n)
    join, _ = kernels.corner_tables(S.A, S.B, R.n)
    eligible = ~S.trivial & (S.inv != np.arange(len(S)))
    seps = kernels.separator_candidates(H4.n, 4)
    yield "enumerate_separations", f"H4, k=4 ({len(seps)} separators)", (_adj(H4), H4.n, 4, seps)
    yield "leq_matrix", f"random n=8, |S_4|={len(S)}", (S.A, S.B)
    yield "corners", f"random n=8, |S_4|={len(S)}", (S.A, S.B, R.n, keys, perm)
    yield "emulation_table", f"random n=8, |S_4|={len(S)}", (S.leq, join, S.inv, eligible)
    yield "local_connectivity", "H5, cap 6", (_adj(H5), H5.n, 6)
    yield "treewidth_dp", "K_12, upper 11", (_adj(complete_graph(12)), 12, 11)
    yield "treewidth_dp", "H4, upper 5", (_adj(H4), H4.n, 5)


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"backend: {_accel.backend()}")
    print(f"{'kernel':<22} {'workload':<34} {'numba ms':>10} {'numpy ms':>10} {'ratio':>7}")
    for name, what, inputs in workloads():
        nb, np_ = kernels.NUMBA_KERNELS[name]
        a, b = nb(*inputs), np_(*inputs)  # warm-up, and compilation for numba
        if name == "enumerate_separations":
            ok = sorted(zip(a[0].tolist(), a[1].tolist())) == sorted(zip(b[0].tolist(), b[1].tolist()))
        else:
            ok = _same(a, b)
        if not ok:
            raise SystemExit(f"{name}: backends disagree on {what}")
        t_nb = min(repeat(lambda: nb(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_np = min(repeat(lambda: np_(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22} {what:<34} {t_nb:>10.2f} {t_np:>10.2f} {t_np / t_nb:>6.1f}x")


if __name__ == "__main__":
    main()
