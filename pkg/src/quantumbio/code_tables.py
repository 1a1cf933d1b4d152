"""Amino-acid class table and the alphabet sizes implied by search query counts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .search_core import database_size_for_queries


class Property(str, enum.Enum):
    NON_POLAR = "NonPolar"
    POLAR = "Polar"
    NEGATIVE = "Negative"
    POSITIVE = "Positive"
    RING = "Ring"


class SynthetaseClass(str, enum.Enum):
    I = "I"  # noqa: E741
    II = "II"


@dataclass(frozen=True)
class AminoAcidRecord:
    code3: str
    name: str
    property: Property
    mol_wt: float
    klass: SynthetaseClass


def _rec(code3, name, prop, wt, klass) -> AminoAcidRecord:
    return AminoAcidRecord(code3, name, Property(prop), float(wt), SynthetaseClass(klass))


_TABLE: tuple[AminoAcidRecord, ...] = (
    _rec("Gly", "Glycine", "NonPolar", 75, "II"),
    _rec("Ala", "Alanine", "NonPolar", 89, "II"),
    _rec("Pro", "Proline", "NonPolar", 115, "II"),
    _rec("Val", "Valine", "NonPolar", 117, "I"),
    _rec("Leu", "Leucine", "NonPolar", 131, "I"),
    _rec("Ile", "Isoleucine", "NonPolar", 131, "I"),
    _rec("Ser", "Serine", "Polar", 105, "II"),
    _rec("Thr", "Threonine", "Polar", 119, "II"),
    _rec("Asn", "Asparagine", "Polar", 132, "II"),
    _rec("Cys", "Cysteine", "Polar", 121, "I"),
    _rec("Met", "Methionine", "Polar", 149, "I"),
    _rec("Gln", "Glutamine", "Polar", 146, "I"),
    _rec("Asp", "Aspartate", "Negative", 133, "II"),
    _rec("Glu", "Glutamate", "Negative", 147, "I"),
    _rec("Lys", "Lysine", "Positive", 146, "II"),
    _rec("Arg", "Arginine", "Positive", 174, "I"),
    _rec("His", "Histidine", "Ring", 155, "II"),
    _rec("Phe", "Phenylalanine", "Ring", 165, "II"),
    _rec("Tyr", "Tyrosine", "Ring", 181, "I"),
    _rec("Trp", "Tryptophan", "Ring", 204, "I"),
)

SULPHUR = ("Cys", "Met")


def canonical_table() -> tuple[AminoAcidRecord, ...]:
    return _TABLE


def by_code(records: Sequence[AminoAcidRecord] | None = None) -> dict[str, AminoAcidRecord]:
    return {r.code3: r for r in (records if records is not None else _TABLE)}


def reassign(records: Sequence[AminoAcidRecord], **changes: str) -> tuple[AminoAcidRecord, ...]:
    """Copy of ``records`` with classes changed, e.g. ``reassign(t, Gly="I")``."""
    out = []
    for r in records:
        if r.code3 in changes:
            r = replace(r, klass=SynthetaseClass(changes[r.code3]))
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class PartitionCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class PartitionReport:
    checks: tuple[PartitionCheck, ...]
    group_means: dict[str, tuple[float, float]]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> PartitionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs) if xs else math.nan


def validate_partition(records: Sequence[AminoAcidRecord]) -> PartitionReport:
    """Run the four class-partition checks.

    ``class_split``: 10 records per class. ``property_split``: every R-group
    property has equally many members in each class. ``heavier_class_i``:
    per property, class I has the strictly larger mean weight. This holds in
    aggregate only, since Cys (121, I) is lighter than Asn (132, II).
    ``sulphur_class_i``: Cys and Met are both class I.
    """
    records = list(records)
    if len(records) != 20:
        raise ValueError(f"expected 20 amino-acid records, got {len(records)}")

    n1 = sum(r.klass is SynthetaseClass.I for r in records)
    checks = [PartitionCheck("class_split", n1 == 10, f"class I: {n1}, class II: {len(records) - n1}")]

    split_parts, split_ok = [], True
    weight_parts, weight_ok = [], True
    means: dict[str, tuple[float, float]] = {}
    for prop in Property:
        group = [r for r in records if r.property is prop]
        w1 = [r.mol_wt for r in group if r.klass is SynthetaseClass.I]
        w2 = [r.mol_wt for r in group if r.klass is SynthetaseClass.II]
        split_ok &= len(w1) == len(w2)
        split_parts.append(f"{prop.value} {len(w1)}/{len(w2)}")
        m1, m2 = _mean(w1), _mean(w2)
        means[prop.value] = (m1, m2)
        # an empty side gives nan, which fails the comparison
        weight_ok &= m1 > m2
        weight_parts.append(f"{prop.value} {m1:g}>{m2:g}")
    checks.append(PartitionCheck("property_split", bool(split_ok), ", ".join(split_parts)))
    checks.append(PartitionCheck("heavier_class_i", bool(weight_ok), ", ".join(weight_parts)))

    codes = by_code(records)
    sulphur = {c: codes[c].klass.value if c in codes else "missing" for c in SULPHUR}
    checks.append(
        PartitionCheck(
            "sulphur_class_i",
            all(v == "I" for v in sulphur.values()),
            ", ".join(f"{c}: {v}" for c, v in sulphur.items()),
        )
    )
    return PartitionReport(tuple(checks), means)


@dataclass(frozen=True)
class CodeSignalCount:
    queries: int | None
    exact_n: float
    rounded_alphabet: int
    interpretation: str


INTERPRETATIONS = {
    1: "nucleotide bases",
    2: "doublet code / one amino-acid class",
    3: "triplet code amino acids; 21 with STOP",
}

STRUCTURAL_BOUND = CodeSignalCount(
    queries=None,
    exact_n=9.0,
    rounded_alphabet=9,
    interpretation="structural lower bound: 9 backbone orientations, 10 with the trans-cis option",
)


def alphabet_summary(q_max: int = 3, include_bound: bool = True) -> list[CodeSignalCount]:
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    rows = []
    for q in range(1, q_max + 1):
        n = database_size_for_queries(q)
        rows.append(CodeSignalCount(q, n, int(round(n)), INTERPRETATIONS.get(q, "")))
    if include_bound:
        rows.append(STRUCTURAL_BOUND)
    return rows
