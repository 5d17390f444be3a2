"""Compare the compiled scanning kernels against the pure-Python fallback.

Plants realistic markers in a random blob and times find_all / find_multi
under both implementations, printing throughput and speedup.  Run with
`python benchmarks/bench_scan.py` after `python setup.py build_ext --inplace`
(without the extension only the Python numbers appear).
"""

import argparse
import random
import time

from imartifacts._scan import BACKEND, pykernels

try:
    from imartifacts._scan import kernels
except ImportError:
    kernels = None

PATTERNS = [b"m_mid", b"orca_message", b"Messaging: 2.0", b"IM-Display-Name:", b'<?xml version="']


def build_blob(size: int, seed: int) -> bytes:
    rng = random.Random(seed)
    blob = bytearray(rng.randbytes(size))
    for _ in range(max(size // 65536, 1)):
        pattern = rng.choice(PATTERNS)
        offset = rng.randrange(0, size - len(pattern))
        blob[offset:offset + len(pattern)] = pattern
    return bytes(blob)


def timed(func, *args, repeats: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = func(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def run(size: int, repeats: int, seed: int) -> None:
    blob = build_blob(size, seed)
    mib = size / (1024 * 1024)
    jobs = [("find_all", lambda mod: (mod.find_all, blob, PATTERNS[1])),
            ("find_multi", lambda mod: (mod.find_multi, blob, PATTERNS))]
    print("blob %.1f MiB, best of %d runs, active backend: %s" % (mib, repeats, BACKEND))
    for name, setup in jobs:
        py_func, *py_args = setup(pykernels)
        py_time, py_result = timed(py_func, *py_args, repeats=repeats)
        line = "%-10s python %8.2f MiB/s" % (name, mib / py_time)
        if kernels is not None:
            c_func, *c_args = setup(kernels)
            c_time, c_result = timed(c_func, *c_args, repeats=repeats)
            if c_result != py_result:
                raise SystemExit("%s: backends disagree" % name)
            line += "   compiled %8.2f MiB/s   speedup %5.1fx" % (mib / c_time, py_time / c_time)
        print(line)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=32 * 1024 * 1024, help="blob bytes")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    run(args.size, args.repeats, args.seed)


if __name__ == "__main__":
    main()
