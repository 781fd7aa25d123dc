from fractions import Fraction

import pytest

from chordspectra.oracle import count_table
from chordspectra.recursion import check_all, class_of, recursion_check, recursion_rhs
from chordspectra.spectra import BackboneSpectrum, CountTable, Mode, Spectrum

E = BackboneSpectrum.unit


def oracle_tables(b: BackboneSpectrum, k_max: int, mode: Mode = Mode.ORIENTED):
    """Oracle tables for every sub-spectrum of ``b`` and chord number up to ``k_max``."""
    out = {}
    for sub in b.sub_spectra():
        if sub.total == 0:
            continue
        for k in range(min(k_max, sub.vertices // 2) + 1):
            out[(sub, k)] = count_table(sub, k, mode)
    return out


def test_rainbow_from_bare_backbone():
    lower = oracle_tables(E(2), 1)
    assert recursion_check(lower[(E(2), 1)], lower) == []


def test_four_vertices():
    lower = oracle_tables(E(4), 2)
    assert recursion_check(lower[(E(4), 2)], lower) == []


@pytest.mark.parametrize("mode", list(Mode))
@pytest.mark.parametrize("b", [BackboneSpectrum((0, 1, 1)), BackboneSpectrum((0, 0, 1, 1)), E(2, 2), E(6)], ids=str)
def test_check_all_on_oracle(mode, b):
    assert check_all(oracle_tables(b, 3, mode)) == {}


def perturbed(table: CountTable, delta: int = 1) -> tuple[CountTable, object]:
    cls, count = table.sorted_entries()[0]
    entries = dict(table.entries)
    entries[cls] = count + delta
    return CountTable(table.mode, table.policy, table.k, table.backbones, entries), cls


@pytest.mark.parametrize("mode", list(Mode))
def test_fault_injection_reports_exactly_the_perturbed_class(mode):
    b = BackboneSpectrum((0, 1, 0, 1))
    lower = oracle_tables(b, 2, mode)
    bad_table, cls = perturbed(lower[(b, 2)])
    report = recursion_check(bad_table, lower)
    assert len(report) == 1
    m = report[0]
    assert (m.euler_index, m.spectrum) == (cls.euler_index, cls.spectrum)
    assert m.lhs == 2 * (lower[(b, 2)].entries[cls] + 1) and m.rhs == 2 * lower[(b, 2)].entries[cls]
    assert class_of(bad_table, (m.euler_index, m.spectrum.items)) == cls
    assert "k*M" in str(m)


def test_literal_diagonal_sign_undercounts():
    lower = oracle_tables(E(6), 3)
    target = lower[(E(6), 3)]
    good = recursion_rhs(target, lower)
    literal = recursion_rhs(target, lower, diagonal_sign=-1)
    assert good == {(c.euler_index, c.spectrum.items): 3 * n for c, n in target.entries.items()}
    key = (1, Spectrum.from_counts({(0,): 1, (0, 0, 0, 0, 0, 0): 1}).items)
    assert (good[key], literal[key]) == (Fraction(15), Fraction(11))


def test_missing_lower_table_is_reported():
    lower = oracle_tables(E(4), 2)
    target = lower.pop((E(4), 2))
    del lower[(E(4), 1)]
    report = recursion_check(target, lower)
    assert {(m.euler_index, m.spectrum.items) for m in report} == {
        (c.euler_index, c.spectrum.items) for c in target.entries
    }
    assert all(m.rhs == 0 for m in report)
