"""Compare the compiled and pure-Python cascade kernels.

    python3 benchmarks/bench_cascade.py [--samples N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from eogpipe.dsp import kernels, paper_cascade


def bench(fn, coeffs, x, repeat):
    def once():
        state = np.zeros((coeffs.shape[0], 2))
        fn(coeffs, state, x)

    return min(timeit.repeat(once, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=250 * 60 * 4)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    coeffs = np.ascontiguousarray(paper_cascade().coeffs)
    x = np.random.default_rng(0).normal(size=args.samples)
    print(f"active backend: {kernels.BACKEND}; {args.samples} samples, 4 sections")

    py = bench(kernels.python_sos_process, coeffs, x, max(1, args.repeat // 2))
    print(f"python   {py * 1e3:9.2f} ms  {args.samples / py / 1e6:8.3f} Msamples/s")
    try:
        cy = bench(kernels.compiled_sos_process, coeffs, x, args.repeat)
    except RuntimeError as exc:
        print(f"cython   unavailable ({exc})")
        return
    print(f"cython   {cy * 1e3:9.2f} ms  {args.samples / cy / 1e6:8.3f} Msamples/s  ({py / cy:.0f}x)")
    a = kernels.python_sos_process(coeffs, np.zeros((4, 2)), x)
    b = kernels.compiled_sos_process(coeffs, np.zeros((4, 2)), x)
    print(f"max |python - cython| = {np.max(np.abs(a - b)):.3g}")


if __name__ == "__main__":
    main()
