import sys
import matplotlib.pyplot as plt
from scispace.bench.experiments import run_bench_hitratio
from scispace.bench.report import parse_rows

rows_file = sys.argv[1] if len(sys.argv) > 1 else "hitratio_rows.tsv"

report = run_bench_hitratio([0.0, 0.25, 0.5, 0.75, 1.0], seed=0)
with open(rows_file, "w") as f:
    f.write(report.to_text())

print("Hit ratio done")

# ----------------------------

with open(rows_file) as f:
    (hits,) = parse_rows(f.read())

plt.figure(figsize=(7, 5))
for attribute in ("Location", "Instrument", "Date", "DayNight"):
    rows = sorted(
        (float(r.param("ratio")), r.value)
        for r in hits.rows
        if r.metric == "latency_ms.median" and r.param("attribute") == attribute
    )
    plt.plot([100 * r for r, _ in rows], [v for _, v in rows], "o-", label=attribute)
plt.xlabel("Hit ratio (%)")
plt.ylabel("Median query latency (ms)")
plt.legend()
plt.grid()

plt.show()
