"""A small timing grid through the benchmark harness.

Run with:  python demos/05_benchmark_grid.py [out.csv]
"""
import os
import sys
import tempfile

import numpy as np

from sparseconv import cli

path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(tempfile.mkdtemp(), "bench.csv")
sizes = [1 << 10, 1 << 11, 1 << 12, 1 << 13]
cli.main(["bench", "--family", "shift", "-N", str(1 << 32), "--planted", "1",
          "--grid", "n=" + ",".join(map(str, sizes)), "--seeds", "2", "--seed", "1",
          "--algo", "lasvegas,oracle", "--csv", path])
# det is left out: its (untimed) table build is quadratic in n, minutes at n=2^13

rows = cli.read_bench_csv(path)
print(f"{'n':>6} {'lasvegas':>10} {'oracle':>10}   (ms, mean of 2)")
times = {}
for n in sizes:
    line = []
    for algo in ("lasvegas", "oracle"):
        t = np.mean([r.wall_time_nanos for r in rows if r.n == n and r.algorithm == algo]) / 1e6
        times.setdefault(algo, []).append(t)
        line.append(f"{t:10.1f}")
    print(f"{n:>6} " + " ".join(line))

for algo, ts in times.items():
    slope = np.polyfit(np.log(sizes), np.log(ts), 1)[0]
    print(f"log-log slope {algo}: {slope:.2f}")
print("csv:", path)
