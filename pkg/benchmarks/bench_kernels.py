"""Throughput comparison between the compiled kernels and the numpy fallback.

Measures the two hot paths behind ``entcorr.kernels`` (deterministic
multinomial sampling and the batched ensemble objective) against both
backends in one process, then times one full convex-roof minimization per
backend in subprocesses so the import-time backend switch applies.

Run from the repository root after installing the package:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --shots 8000000 --batch 256 --skip-roof
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from entcorr import _kernels_py as fallback
from entcorr import kernels

try:
    from entcorr import _kernels as compiled
except ImportError:
    compiled = None


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_sampling(backend, shots, repeat):
    bounds = kernels.interval_bounds(np.array([0.4, 0.3, 0.2, 0.1]))
    return best_time(lambda: backend.counts_from_stream(12345, shots, bounds), repeat)


def objective_inputs(batch, rng):
    r, m = 4, 16
    k = m * (m - 1) // 2
    vt = rng.normal(size=(r, 4)) + 1j * rng.normal(size=(r, 4))
    vt /= np.linalg.norm(vt)
    pairs = np.array([(i, j) for i in range(m) for j in range(i + 1, m)], dtype=np.int32)
    theta = rng.uniform(-1.5, 1.5, (batch, k))
    phi = rng.uniform(-3, 3, (batch, k))
    alpha = rng.uniform(-3, 3, (batch, r))
    return (vt, m, 2, 2, pairs, np.cos(theta), np.sin(theta),
            np.exp(1j * phi), np.exp(1j * alpha), 0)


def bench_objective(backend, inputs, repeat):
    return best_time(lambda: backend.measure_batch(*inputs), repeat)


ROOF_SNIPPET = """
import json, time
import numpy as np
import entcorr as ec

bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
rho = 0.7 * np.outer(bell, bell.conj()) + 0.3 * np.eye(4) / 4
dm = ec.validate_density(rho, (2, 2))
opts = ec.RoofOptions(restarts=2, max_iterations=200, seed=0)
t0 = time.perf_counter()
res = ec.convex_roof(dm, measure="e2", options=opts)
doc = {"backend": ec.backend_name(), "seconds": time.perf_counter() - t0,
       "value": res.value}
print(json.dumps(doc))
"""


def bench_roof(pure_python):
    env = dict(os.environ)
    if pure_python:
        env["ENTCORR_PURE_PYTHON"] = "1"
    else:
        env.pop("ENTCORR_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", ROOF_SNIPPET], capture_output=True, text=True, env=env
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return json.loads(out.stdout)


def row(name, seconds, unit_count, unit):
    rate = unit_count / seconds / 1e6
    print(f"  {name:<10} {seconds * 1e3:10.2f} ms {rate:12.2f} M{unit}/s")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--shots", type=int, default=2_000_000)
    parser.add_argument("--batch", type=int, default=128)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-roof", action="store_true")
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    backends = [("python", fallback)]
    if compiled is not None:
        backends.insert(0, ("compiled", compiled))
    else:
        print("note: compiled extension not importable, fallback only\n")

    bounds = kernels.interval_bounds(np.array([0.4, 0.3, 0.2, 0.1]))
    counts = {name: np.asarray(b.counts_from_stream(7, 100_000, bounds))
              for name, b in backends}
    if len(backends) == 2 and not np.array_equal(counts["compiled"], counts["python"]):
        raise SystemExit("backend sampling mismatch, refusing to benchmark")

    print(f"sampling: counts_from_stream, {args.shots:,} shots, 4 outcomes")
    times = {}
    for name, backend in backends:
        times[name] = bench_sampling(backend, args.shots, args.repeat)
        row(name, times[name], args.shots, "shots")
    if len(times) == 2:
        print(f"  {'speedup':<10} {times['python'] / times['compiled']:10.1f} x")

    inputs = objective_inputs(args.batch, rng)
    evals = args.batch
    print(f"\nobjective: measure_batch, batch {args.batch}, ensemble 16 from rank 4")
    times = {}
    for name, backend in backends:
        times[name] = bench_objective(backend, inputs, args.repeat)
        row(name, times[name], evals, "evals")
    if len(times) == 2:
        print(f"  {'speedup':<10} {times['python'] / times['compiled']:10.1f} x")

    if args.skip_roof:
        return
    print("\nend to end: convex_roof on a noisy Bell mixture (2 restarts)")
    results = [bench_roof(pure_python=(name == "python")) for name, _ in backends]
    for res in results:
        print(f"  {res['backend']:<10} {res['seconds'] * 1e3:10.2f} ms"
              f"   value {res['value']:.9f}")
    if len(results) == 2:
        if abs(results[0]["value"] - results[1]["value"]) > 1e-9:
            raise SystemExit("backend roof values diverge, investigate before trusting timings")
        print(f"  {'speedup':<10} {results[1]['seconds'] / results[0]['seconds']:10.1f} x")


if __name__ == "__main__":
    main()
