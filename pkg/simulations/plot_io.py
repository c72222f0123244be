import sys
import matplotlib.pyplot as plt
from scispace.bench.experiments import run_bench_io, run_bench_collab
from scispace.bench.report import parse_rows

rows_file = sys.argv[1] if len(sys.argv) > 1 else "io_rows.tsv"

io_report = run_bench_io(seed=0)
collab_report = run_bench_collab(seed=0)
with open(rows_file, "w") as f:
    f.write(io_report.to_text())
    f.write(collab_report.to_text())

print("IO and collaboration done")

# ----------------------------

with open(rows_file) as f:
    reports = {r.experiment: r for r in parse_rows(f.read())}

io, collab = reports["io"], reports["collab"]
blocks = sorted({int(r.param("block")) for r in io.rows})

plt.figure(figsize=(10, 10))

plt.subplot(311)
for path in ("workspace", "local"):
    plt.plot([b // 1024 for b in blocks], [io.value("write_mb_s", block=b, path=path) for b in blocks], "o-", label=path)
plt.xlabel("Block size (KiB)")
plt.ylabel("Write (MB/s)")
plt.xscale("log", base=2)
plt.legend()
plt.grid()

plt.subplot(312)
for path in ("workspace", "local"):
    plt.plot([b // 1024 for b in blocks], [io.value("read_mb_s", block=b, path=path) for b in blocks], "o-", label=path)
plt.xlabel("Block size (KiB)")
plt.ylabel("Read (MB/s)")
plt.xscale("log", base=2)
plt.grid()

plt.subplot(313)
sessions = sorted({int(r.param("sessions")) for r in collab.rows})
plt.plot(sessions, [collab.value("throughput_files_s", sessions=m) for m in sessions], "o-")
plt.xlabel("Concurrent collaborators")
plt.ylabel("Aggregate writes (files/s)")
plt.grid()

plt.show()
