import math

import pytest

from quantumbio.code_tables import (
    Property,
    SynthetaseClass,
    alphabet_summary,
    by_code,
    canonical_table,
    reassign,
    validate_partition,
)
from quantumbio.search_core import database_size_for_queries

CHECKS = ("class_split", "property_split", "heavier_class_i", "sulphur_class_i")

# one mutant per check; each keeps the other three checks intact where possible
MUTANTS = {
    "class_split": {"Gly": "I"},
    "property_split": {"Gly": "I", "Gln": "II"},
    "heavier_class_i": {"Asp": "I", "Glu": "II"},
    "sulphur_class_i": {"Cys": "II", "Asn": "I"},
}


def test_table_rows():
    t = by_code()
    assert len(canonical_table()) == 20
    gly, trp = t["Gly"], t["Trp"]
    assert (gly.property, gly.mol_wt, gly.klass) == (Property.NON_POLAR, 75, SynthetaseClass.II)
    assert (trp.property, trp.mol_wt, trp.klass) == (Property.RING, 204, SynthetaseClass.I)
    assert (t["Asp"].property, t["Asp"].mol_wt, t["Asp"].klass) == (Property.NEGATIVE, 133, SynthetaseClass.II)
    assert (t["Glu"].property, t["Glu"].mol_wt, t["Glu"].klass) == (Property.NEGATIVE, 147, SynthetaseClass.I)
    assert t["His"].property is Property.RING


def test_table_is_constant():
    assert canonical_table() is canonical_table()
    assert canonical_table() == tuple(canonical_table())


def test_canonical_table_passes_everything():
    report = validate_partition(canonical_table())
    assert report.all_passed
    assert [c.name for c in report.checks] == list(CHECKS)


def test_ring_group_means():
    means = validate_partition(canonical_table()).group_means
    assert means["Ring"] == ((181 + 204) / 2, (155 + 165) / 2) == (192.5, 160.0)


def test_gly_reassigned_breaks_split_checks():
    report = validate_partition(reassign(canonical_table(), Gly="I"))
    assert not report["class_split"].passed
    assert not report["property_split"].passed


@pytest.mark.parametrize("target", CHECKS)
def test_each_check_has_a_killing_mutant(target):
    report = validate_partition(reassign(canonical_table(), **MUTANTS[target]))
    assert not report[target].passed
    if target != "class_split":
        others = [c for c in report.checks if c.name != target]
        assert all(c.passed for c in others), others


def test_gly_cys_swap_keeps_class_split_only():
    report = validate_partition(reassign(canonical_table(), Gly="I", Cys="II"))
    assert report["class_split"].passed
    assert not report["property_split"].passed
    assert not report["sulphur_class_i"].passed


def test_wrong_record_count():
    with pytest.raises(ValueError):
        validate_partition(canonical_table()[:19])


def test_cys_lighter_than_asn_yet_aggregate_holds():
    t = by_code()
    assert t["Cys"].mol_wt < t["Asn"].mol_wt
    assert validate_partition(canonical_table())["heavier_class_i"].passed


def test_alphabet_summary():
    rows = alphabet_summary()
    q1, q2, q3, bound = rows
    assert (q1.queries, q1.rounded_alphabet) == (1, 4)
    assert q1.exact_n == pytest.approx(4.0, abs=1e-12)
    assert q2.exact_n == pytest.approx(1 / math.sin(math.pi / 10) ** 2, abs=1e-12)
    assert q2.exact_n == pytest.approx(10.47, abs=0.005) and q2.rounded_alphabet == 10
    assert q3.exact_n == pytest.approx(20.20, abs=0.01) and q3.rounded_alphabet == 20
    assert "21" in q3.interpretation
    assert bound.queries is None and bound.rounded_alphabet == 9 and "10" in bound.interpretation


@pytest.mark.parametrize("q_max", [1, 3, 6])
def test_alphabet_matches_search_core(q_max):
    rows = alphabet_summary(q_max, include_bound=False)
    assert len(rows) == q_max
    for row in rows:
        assert row.exact_n == pytest.approx(database_size_for_queries(row.queries), abs=1e-9)
