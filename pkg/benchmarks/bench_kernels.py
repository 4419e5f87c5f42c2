"""Timing comparison between the pure and compiled kernel backends.

Measures the three entry points at shapes the training loop actually
uses: single-step actor batches (cell_forward) and whole-episode
minibatches (seq_forward, seq_backward). Reports the median of several
repeats and the speedup of the compiled backend where it is available.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from convforge.kernels import get_backend
from convforge.policy import ArchSpec, init_params

# (label, batch, seq len, obs dim, action dim): actor stepping uses
# T=1 shapes, training uses full-episode segments from both tasks.
SHAPES = [
    ("step b16", 16, 1, 9, 4),
    ("step b64", 64, 1, 10, 9),
    ("short seq b32 t10", 32, 10, 9, 4),
    ("long seq b32 t50", 32, 50, 10, 9),
    ("long seq b128 t50", 128, 50, 10, 9),
]


def make_inputs(b, t, d, h, a, seed=0):
    arch = ArchSpec(obs_dim=d, action_dim=a, hidden_dim=h)
    theta = init_params(arch, seed)
    rng = np.random.default_rng(seed + 1)
    obs = rng.normal(size=(b, t, d))
    h0 = np.zeros((b, h))
    dlogits = rng.normal(size=(b, t, a))
    dvalues = rng.normal(size=(b, t))
    return theta, obs, h0, dlogits, dvalues


def median_time(fn, repeats):
    fn()  # warm up
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def bench_backend(impl, b, t, d, h, a, repeats):
    theta, obs, h0, dlogits, dvalues = make_inputs(b, t, d, h, a)
    _, _, cache = impl.seq_forward(theta, d, h, a, obs, h0)
    obs0 = np.ascontiguousarray(obs[:, 0])
    return {
        "cell": median_time(
            lambda: impl.cell_forward(theta, d, h, a, obs0, h0), repeats
        ),
        "fwd": median_time(
            lambda: impl.seq_forward(theta, d, h, a, obs, h0), repeats
        ),
        "bwd": median_time(
            lambda: impl.seq_backward(
                theta, d, h, a, obs, h0, cache, dlogits, dvalues
            ),
            repeats,
        ),
    }


def main():
    parser = argparse.ArgumentParser(
        description="compare pure and compiled kernel backends"
    )
    parser.add_argument("--hidden", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    backends = {"pure": get_backend("pure")}
    try:
        backends["compiled"] = get_backend("compiled")
    except ImportError:
        print("compiled backend not built; timing the pure backend only")

    print(f"hidden_dim={args.hidden}, median of {args.repeats} repeats, times in ms")
    header = f"{'shape':<20} {'op':<5}" + "".join(
        f" {name:>10}" for name in backends
    )
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for label, b, t, d, a in SHAPES:
        results = {
            name: bench_backend(impl, b, t, d, args.hidden, a, args.repeats)
            for name, impl in backends.items()
        }
        for op in ("cell", "fwd", "bwd"):
            if t == 1 and op != "cell":
                continue
            line = f"{label:<20} {op:<5}" + "".join(
                f" {results[name][op] * 1e3:>10.3f}" for name in backends
            )
            if len(backends) == 2:
                ratio = results["pure"][op] / results["compiled"][op]
                line += f" {ratio:>8.1f}x"
            print(line)


if __name__ == "__main__":
    main()
