"""Benchmark results as machine rows: `experiment<TAB>k=v;...<TAB>metric<TAB>value`."""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence
import numpy as np

_FORBIDDEN = ("\t", "\n", ";", "=")


def _check_token(token: str, what: str):
    if not token or any(ch in token for ch in _FORBIDDEN):
        raise ValueError("Bench {} {!r} should be non-empty without tabs, newlines, ';' or '='".format(what, token))


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def summarize(samples: Sequence[float]) -> Dict[str, float]:
    if len(samples) == 0:
        return {"mean": math.nan, "median": math.nan, "p95": math.nan}
    arr = np.asarray(samples, dtype=np.float64)
    return {
        "mean": float(np.mean(arr)),
        "median": float(np.median(arr)),
        "p95": float(np.percentile(arr, 95)),
    }


@dataclass(frozen=True)
class BenchRow:
    experiment: str
    params: tuple
    metric: str
    value: object

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)

    def to_line(self) -> str:
        params = ";".join("{}={}".format(k, v) for k, v in self.params)
        return "\t".join((self.experiment, params, self.metric, _format_value(self.value)))

    @classmethod
    def from_line(cls, line: str):
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 4:
            raise ValueError("Bench rows have 4 tab-separated fields, got {:d}: {!r}".format(len(parts), line))
        experiment, raw_params, metric, raw_value = parts
        params = []
        for item in raw_params.split(";") if raw_params else []:
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError("Malformed bench parameter {!r}".format(item))
            params.append((key, value))
        return cls(experiment, tuple(params), metric, _parse_value(raw_value))


@dataclass
class BenchReport:
    experiment: str
    rows: List[BenchRow] = field(default_factory=list)

    def add(self, params: dict, metric: str, value):
        _check_token(metric, "metric")
        items = []
        for key, val in params.items():
            _check_token(str(key), "parameter name")
            _check_token(str(val), "parameter value")
            items.append((str(key), str(val)))
        self.rows.append(BenchRow(self.experiment, tuple(items), metric, value))

    def add_stats(self, params: dict, metric: str, samples: Sequence[float]):
        for name, value in summarize(samples).items():
            self.add(params, "{}.{}".format(metric, name), value)

    def select(self, metric: str, **params) -> List[BenchRow]:
        wanted = {k: str(v) for k, v in params.items()}
        return [
            r for r in self.rows if r.metric == metric and all(r.param(k) == v for k, v in wanted.items())
        ]

    def value(self, metric: str, **params):
        rows = self.select(metric, **params)
        if len(rows) != 1:
            raise KeyError("Expected one {} row for {}, found {:d}".format(metric, params, len(rows)))
        return rows[0].value

    def to_text(self) -> str:
        return "".join(r.to_line() + "\n" for r in self.rows)

    def lines(self) -> Iterable[str]:
        """Human-readable rendering of the same rows."""
        for r in self.rows:
            params = ", ".join("{}={}".format(k, v) for k, v in r.params)
            yield "{:<10s} {:<40s} {:<28s} {}".format(r.experiment, params, r.metric, _format_value(r.value))


def parse_rows(text: str) -> List[BenchReport]:
    reports: Dict[str, BenchReport] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        row = BenchRow.from_line(line)
        reports.setdefault(row.experiment, BenchReport(row.experiment)).rows.append(row)
    return list(reports.values())
