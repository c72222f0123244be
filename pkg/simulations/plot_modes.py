import sys
import matplotlib.pyplot as plt
import numpy as np
from scispace.bench.experiments import run_bench_modes
from scispace.bench.report import parse_rows
from scispace.sds import MODES

rows_file = sys.argv[1] if len(sys.argv) > 1 else "modes_rows.tsv"

report = run_bench_modes([0, 5, 20], seed=0, n_files=2000, reps=5)
with open(rows_file, "w") as f:
    f.write(report.to_text())

print("Modes done")

# ----------------------------

with open(rows_file) as f:
    (modes,) = parse_rows(f.read())

attr_counts = sorted({int(r.param("attrs")) for r in modes.rows})
width = 0.25
x = np.arange(len(attr_counts))

plt.figure(figsize=(10, 8))

plt.subplot(211)
for k, mode in enumerate(MODES):
    values = [modes.value("end_to_end_ms.median", attrs=a, mode=mode) / 1000.0 for a in attr_counts]
    plt.bar(x + (k - 1) * width, values, width, label=mode)
plt.xticks(x, [str(a) for a in attr_counts])
plt.xlabel("Attributes per file")
plt.ylabel("End-to-end time (s)")
plt.legend()
plt.grid(axis="y")

plt.subplot(212)
for k, mode in enumerate(MODES):
    values = [modes.value("write_ack_ms.median", attrs=a, mode=mode) for a in attr_counts]
    plt.bar(x + (k - 1) * width, values, width, label=mode)
plt.xticks(x, [str(a) for a in attr_counts])
plt.xlabel("Attributes per file")
plt.ylabel("Median write-ack latency (ms)")
plt.yscale("log")
plt.grid(axis="y")

plt.show()
