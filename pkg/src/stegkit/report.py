"""Detector results and their tab-separated text form."""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DetectorResult:
    name: str
    statistic: float
    threshold: float
    verdict: bool
    inputs: tuple = ()
    note: str = ""

    def line(self):
        return f"{self.name}\t{_fmt(self.statistic)}\t{_fmt(self.threshold)}\t{'FLAG' if self.verdict else 'clear'}"


def _fmt(x):
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return str(x)
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


@dataclass
class AnalysisReport:
    results: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, result):
        self.results.append(result)
        return result

    def __getitem__(self, name):
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def __contains__(self, name):
        return any(r.name == name for r in self.results)

    @property
    def flagged(self):
        return any(r.verdict for r in self.results)

    def to_text(self):
        return "".join(r.line() + "\n" for r in self.results)

    @classmethod
    def from_text(cls, text):
        report = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            name, stat, thr, verdict = line.split("\t")
            report.add(DetectorResult(name, float(stat), float(thr), verdict == "FLAG"))
        return report
