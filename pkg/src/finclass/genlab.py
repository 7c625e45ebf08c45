"""Generation experiments and criterion sums.

The experiment embeds two 2-groups almost-freely, picks the canonical
involution x from the first and an order-4 element y (or a Klein
subgroup K) from the second, samples seeded conjugate pairs, and tests
whether each pair generates the ambient matrix group, comparing exact
BSGS orders against the closed-formula order.  Success is judged in the
matrix cover (Sp, SL, SU, O as matrix groups), never projectively.

Criterion sums run over ingested maximal-subgroup catalogs: each entry
carries an index, a class count and the intersection counts
|x^G n M|, |y^G n M| or |{K^g <= M}| for a class representative M; the
sum expands over conjugates as index * class_count * product of ratios.
Catalogs are data, not derived objects.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import bsgs
from .census import count_order_elements
from .embed import TwoGroup, embed_almost_free, klein_subgroup
from .errors import DomainError, MissingDataError
from .groups import GroupAtlas, atlas as make_atlas
from .matrix import Matrix


# ---------------------------------------------------------------------------
# catalogs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupCatalogEntry:
    label: str
    index: int
    class_count: int
    intersect_x: int | None = None
    intersect_y: int | None = None
    intersect_k: int | None = None
    generators_file: str | None = None
    provenance: str = ""

    def __post_init__(self):
        if self.index < 2:
            raise DomainError("maximal subgroup index must be >= 2")
        if self.class_count < 1:
            raise DomainError("class count must be >= 1")


_FIELDS = ("label", "index", "class_count", "intersect_x", "intersect_y",
           "intersect_K", "generators_file", "provenance")


def load_catalog(path) -> list[SubgroupCatalogEntry]:
    entries = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in _FIELDS if f not in (reader.fieldnames or [])]
        if missing:
            raise DomainError("catalog file lacks columns: %s" % ", ".join(missing))
        for row in reader:
            def opt(key):
                val = (row.get(key) or "").strip()
                return int(val) if val else None
            entries.append(SubgroupCatalogEntry(
                label=row["label"].strip(),
                index=int(row["index"]),
                class_count=int(row["class_count"]),
                intersect_x=opt("intersect_x"),
                intersect_y=opt("intersect_y"),
                intersect_k=opt("intersect_K"),
                generators_file=(row.get("generators_file") or "").strip() or None,
                provenance=(row.get("provenance") or "").strip(),
            ))
    return entries


def save_catalog(entries: list[SubgroupCatalogEntry], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_FIELDS)
        for e in entries:
            writer.writerow([
                e.label, e.index, e.class_count,
                "" if e.intersect_x is None else e.intersect_x,
                "" if e.intersect_y is None else e.intersect_y,
                "" if e.intersect_k is None else e.intersect_k,
                e.generators_file or "", e.provenance,
            ])


def load_generators_file(path) -> list[Matrix]:
    """One matrix per nonempty line, in the standard text format."""
    mats = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            mats.append(Matrix.from_text(line))
    if not mats:
        raise MissingDataError("no matrices in %s" % path)
    return mats


# ---------------------------------------------------------------------------
# criterion sums and zeta
# ---------------------------------------------------------------------------

def criterion_sum(catalog: list[SubgroupCatalogEntry], x_class: int, y_class: int,
                  mode: str = "order4") -> Fraction:
    """Exact value of sum over conjugates of the intersection-ratio product.

    Each entry contributes index * class_count * (ix / x_class) * (iy / y_class)
    with iy drawn from intersect_y (mode order4) or intersect_K (mode klein).
    The comparison against 1 is the caller's to report, never assumed.
    """
    if mode not in ("order4", "klein"):
        raise DomainError("mode must be order4 or klein")
    if x_class < 1 or y_class < 1:
        raise DomainError("class sizes must be positive")
    total = Fraction(0)
    for e in catalog:
        ix = e.intersect_x
        iy = e.intersect_y if mode == "order4" else e.intersect_k
        if ix is None or iy is None:
            raise MissingDataError(
                "entry %r lacks intersection counts for mode %s" % (e.label, mode))
        if ix > x_class or iy > y_class:
            raise DomainError(
                "entry %r intersection exceeds its class size" % e.label)
        total += e.index * e.class_count * Fraction(ix, x_class) * Fraction(iy, y_class)
    return total


def zeta(catalog: list[SubgroupCatalogEntry], s: float) -> float:
    """sum class_count * index^(-s) over the catalog."""
    if s <= 0:
        raise DomainError("zeta exponent must be positive")
    return sum(e.class_count * e.index ** (-float(s)) for e in catalog)


@dataclass(frozen=True)
class I2RatioReport:
    label: str
    index: int
    i2_subgroup: int
    i2_group: int
    ratio: Fraction
    exponent: float | None  # log(ratio) / log(1/index), reported vs 1/2 - c/n

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "index": self.index,
            "i2_subgroup": self.i2_subgroup,
            "i2_group": self.i2_group,
            "ratio_num": self.ratio.numerator,
            "ratio_den": self.ratio.denominator,
            "exponent": self.exponent,
        }


def i2_ratio_report(entry: SubgroupCatalogEntry, atlas: GroupAtlas,
                    cap: int = 10**7, base_dir: str | Path | None = None) -> I2RatioReport:
    """Measured i2(M)/i2(G) with its exponent against the index.

    Needs the entry's generators_file; the only hard assertion is ratio <= 1.
    """
    if entry.generators_file is None:
        raise MissingDataError("entry %r has no generators file" % entry.label)
    path = Path(base_dir) / entry.generators_file if base_dir else Path(entry.generators_file)
    gens_m = load_generators_file(path)
    i2_m = count_order_elements(gens_m, 2, cap)
    i2_g = count_order_elements(atlas.generators, 2, cap)
    ratio = Fraction(i2_m, i2_g)
    if ratio > 1:
        raise DomainError("i2(M) exceeds i2(G): generators are not a subgroup's")
    exponent = None
    if 0 < ratio < 1 and entry.index > 1:
        exponent = math.log(ratio) / math.log(Fraction(1, entry.index))
    elif ratio == 1:
        exponent = 0.0
    return I2RatioReport(entry.label, entry.index, i2_m, i2_g, ratio, exponent)


# ---------------------------------------------------------------------------
# generation testing
# ---------------------------------------------------------------------------

def conjugate(x: Matrix, g: Matrix) -> Matrix:
    return g.inverse().mul(x).mul(g)


def generates(x: Matrix, y, atlas: GroupAtlas) -> tuple[bool, int]:
    """Whether <x, y> (y a matrix or a pair) is the whole matrix group;
    returns (generated, exact order found)."""
    mats = [x] + ([y] if isinstance(y, Matrix) else list(y))
    perms = [bsgs.matrix_to_perm(m) for m in mats]
    hints = bsgs.standard_basis_points(atlas.form.field.q, atlas.spec.n)
    order = bsgs.perm_group_order(perms, hints, target_order=atlas.order)
    return order == atlas.order, order


@dataclass(frozen=True)
class GenerationExperiment:
    atlas_label: str
    a_label: str
    b_label: str
    mode: str  # order4 | klein
    trials: int
    seed: int
    results: tuple[tuple[bool, int], ...]

    @property
    def successes(self) -> int:
        return sum(1 for ok, _ in self.results if ok)

    @property
    def frequency(self) -> float | None:
        return self.successes / self.trials if self.trials else None

    def to_json(self) -> dict:
        return {
            "atlas": self.atlas_label,
            "A": self.a_label,
            "B": self.b_label,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "successes": self.successes,
            "frequency": self.frequency,
            "per_trial": [
                {"generated": ok, "order_found": order} for ok, order in self.results
            ],
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def witness_pair(atlas: GroupAtlas, a_group: TwoGroup, b_group: TwoGroup):
    """Embed both groups and pick (x, y-or-K, mode) deterministically:
    x is the image of the first involution of A; the B-witness is the first
    order-4 element when one exists, else the first Klein pair."""
    emb_a = embed_almost_free(a_group, atlas)
    emb_b = embed_almost_free(b_group, atlas)
    x = emb_a.involution_image()
    if b_group.elements_of_order(4):
        return x, emb_b.order4_image(), "order4"
    if b_group.first_klein_pair() is not None:
        return x, klein_subgroup(emb_b), "klein"
    raise DomainError(
        "B must contain an element of order 4 or a Klein four-subgroup")


def sample_conjugate_pairs(atlas: GroupAtlas, x: Matrix, y, trials: int, seed: int,
                           walk_length: int = 50) -> tuple[tuple[bool, int], ...]:
    """Seeded conjugate-pair generation tests; per-trial rng streams are
    split deterministically from the seed, so results are order-stable."""
    results = []
    for t in range(trials):
        rng = random.Random(seed * 1_000_003 + t)
        g = atlas.random_element(rng, walk_length)
        h = atlas.random_element(rng, walk_length)
        xg = conjugate(x, g)
        yh = conjugate(y, h) if isinstance(y, Matrix) else tuple(conjugate(m, h) for m in y)
        results.append(generates(xg, yh, atlas))
    return tuple(results)


def run_generation_experiment(atlas_or_label, a_group: TwoGroup, b_group: TwoGroup,
                              trials: int, seed: int,
                              walk_length: int = 50) -> GenerationExperiment:
    """Embed A and B almost-freely, sample seeded conjugate pairs, and test
    generation of the full matrix group trial by trial."""
    if trials < 0:
        raise DomainError("trials must be nonnegative")
    target = make_atlas(atlas_or_label)
    x, y, mode = witness_pair(target, a_group, b_group)
    results = sample_conjugate_pairs(target, x, y, trials, seed, walk_length)
    return GenerationExperiment(target.label(), a_group.label, b_group.label,
                                mode, trials, seed, results)
