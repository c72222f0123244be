import sys
import matplotlib.pyplot as plt
import numpy as np
from scispace.bench.experiments import run_bench_meu
from scispace.bench.report import parse_rows

rows_file = sys.argv[1] if len(sys.argv) > 1 else "meu_rows.tsv"

report = run_bench_meu([5000, 10000, 20000, 40000], seed=0)
with open(rows_file, "w") as f:
    f.write(report.to_text())

print("MEU done")

# ----------------------------

with open(rows_file) as f:
    (meu,) = parse_rows(f.read())

points = sorted((int(r.param("files")), r.value) for r in meu.rows if r.metric == "elapsed_ms")
counts, elapsed = np.array(points).T
(r2_row,) = [r for r in meu.rows if r.metric == "fit.r2"]
slope = [r.value for r in meu.rows if r.metric == "fit.slope_ms_per_file"][0]
intercept = [r.value for r in meu.rows if r.metric == "fit.intercept_ms"][0]

plt.figure(figsize=(7, 5))
plt.plot(counts, elapsed / 1000.0, "o", label="export")
plt.plot(counts, (intercept + slope * counts) / 1000.0, "--", label="fit $R^2$={:.3f}".format(r2_row.value))
plt.xlabel("Files exported")
plt.ylabel("Export time (s)")
plt.legend()
plt.grid()

plt.show()
