"""Exponent diagnostics: exact counts with measured exponents against the
documented windows, written as CSV alongside a rendered figure.

For a group G and statistic v the measured exponent is log v / log |G|;
the documented windows are 1/2 for involution counts and 3/4 for order-4
elements and Klein four-subgroups.  Only exact values are asserted
anywhere; the exponents exist to be read against the reference lines.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .census import count_klein_subgroups, count_order_elements
from .errors import DomainError
from .groups import GroupAtlas, atlas as make_atlas

WINDOWS = {"i2": "1/2", "i4": "3/4", "i2x2": "3/4", "j4": "3/4"}


@dataclass(frozen=True)
class CountReport:
    group: str
    statistic: str
    value: int
    exponent: Fraction | None  # log_q(value)/log_q(|G|), denominator-limited
    window: str

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "statistic": self.statistic,
            "value": self.value,
            "exponent_num": None if self.exponent is None else self.exponent.numerator,
            "exponent_den": None if self.exponent is None else self.exponent.denominator,
            "window": self.window,
        }


def measured_exponent(value: int, order: int) -> Fraction | None:
    if value < 1 or order < 2:
        return None
    return Fraction(math.log(value) / math.log(order)).limit_denominator(10**6)


def count_report(atlas: GroupAtlas, statistic: str, cap: int = 10**7) -> CountReport:
    """Exact count plus measured exponent for i2 | i4 | i2x2."""
    if statistic == "i2":
        value = count_order_elements(atlas.generators, 2, cap)
    elif statistic == "i4":
        value = count_order_elements(atlas.generators, 4, cap)
    elif statistic == "i2x2":
        value = count_klein_subgroups(atlas.generators, cap)
    else:
        raise DomainError("unknown statistic %r" % statistic)
    return CountReport(atlas.label(), statistic, value,
                       measured_exponent(value, atlas.order), WINDOWS[statistic])


def build_reports(labels: list[str], statistics=("i2", "i4", "i2x2"),
                  cap: int = 10**7) -> list[CountReport]:
    out = []
    for label in labels:
        at = make_atlas(label)
        for stat in statistics:
            out.append(count_report(at, stat, cap))
    return out


def write_csv(reports: list[CountReport], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "statistic", "value",
                         "exponent_num", "exponent_den", "window"])
        for r in reports:
            j = r.to_json()
            writer.writerow([j["group"], j["statistic"], j["value"],
                             j["exponent_num"], j["exponent_den"], j["window"]])
    return path


def write_figure(reports: list[CountReport], path) -> Path:
    """Measured exponents per group against the 1/2 and 3/4 reference lines."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    groups = sorted({r.group for r in reports})
    stats = sorted({r.statistic for r in reports})
    markers = {"i2": "o", "i4": "s", "i2x2": "^", "j4": "d"}
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(groups), 4.2))
    for stat in stats:
        xs, ys = [], []
        for i, g in enumerate(groups):
            rep = next((r for r in reports if r.group == g and r.statistic == stat), None)
            if rep is not None and rep.exponent is not None:
                xs.append(i)
                ys.append(float(rep.exponent))
        ax.plot(xs, ys, markers.get(stat, "x"), label=stat, markersize=8)
    ax.axhline(0.75, color="gray", linestyle="--", linewidth=1, label="3/4 window")
    ax.axhline(0.5, color="gray", linestyle=":", linewidth=1, label="1/2 window")
    ax.set_xticks(range(len(groups)))
    ax.set_xticklabels(groups, rotation=30, ha="right")
    ax.set_ylabel("log(count) / log |G|")
    ax.set_ylim(0, 1)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("Exact-count exponents")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
