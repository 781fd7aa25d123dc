import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordspectra.errors import EmptyTuple, NegativeEntry
from chordspectra.oracle import count_table
from chordspectra.spectra import (
    BackboneSpectrum,
    CountTable,
    CyclicPolicy,
    DiagramClass,
    Mode,
    Spectrum,
    aggregate_N,
    canonical_tuple,
    canonicalize,
    catalan,
    double_factorial,
    least_rotation,
    project_spectra,
    validate_class,
)

ROT, REF = CyclicPolicy.ROTATION, CyclicPolicy.ROTATION_REFLECTION
tuples = st.lists(st.integers(0, 4), min_size=1, max_size=10).map(tuple)


@pytest.mark.parametrize(
    "raw, policy, want",
    [
        ((2, 0, 1), ROT, (0, 1, 2)),
        ((3, 2, 1), ROT, (1, 3, 2)),
        ((3, 2, 1), REF, (1, 2, 3)),
        ((0,), ROT, (0,)),
        ((0,), REF, (0,)),
    ],
)
def test_canonical_examples(raw, policy, want):
    assert canonicalize(raw, policy).rep == want


def test_canonicalize_rejects_bad_input():
    with pytest.raises(EmptyTuple):
        canonicalize(())
    with pytest.raises(NegativeEntry):
        canonicalize((1, -1))


@given(tuples)
def test_least_rotation_is_minimum(raw):
    k = least_rotation(raw)
    assert raw[k:] + raw[:k] == min(raw[i:] + raw[:i] for i in range(len(raw)))


@given(tuples, st.integers(0, 20))
def test_canonical_is_rotation_invariant(raw, shift):
    shift %= len(raw)
    moved = raw[shift:] + raw[:shift]
    for policy in CyclicPolicy:
        assert canonical_tuple(moved, policy) == canonical_tuple(raw, policy)


@given(tuples)
def test_reflection_policy_identifies_reversal(raw):
    assert canonical_tuple(raw[::-1], REF) == canonical_tuple(raw, REF)
    assert canonical_tuple(raw, REF) <= canonical_tuple(raw, ROT)


def test_spectrum_merges_equivalent_tuples():
    s = Spectrum.from_tuples([(0, 1), (1, 0), (0,)])
    assert s.counts() == {(0,): 1, (0, 1): 2}
    assert str(s) == "(0)^1 (0,1)^2"
    assert s.multiplicity((1, 0)) == 2
    assert (s.components, s.total_length, s.total_marks) == (3, 5, 2)


def test_spectrum_rejects_negative_multiplicity():
    with pytest.raises(ValueError):
        Spectrum.from_counts({(0,): -1})


GENUS_ONE_SPECTRUM = Spectrum.from_counts({(1,): 1, (0, 0): 2, (0, 0, 0, 0, 0, 1, 0, 0, 0): 1})


def rainbow(g: int) -> DiagramClass:
    return DiagramClass(Mode.ORIENTED, g, 1, 0, BackboneSpectrum.unit(2), Spectrum.from_counts({(0,): 1, (0, 0): 1}))


def test_validate_genus_one_two_backbones():
    cls = DiagramClass(Mode.ORIENTED, 1, 6, 2, BackboneSpectrum.from_sizes([6, 8]), GENUS_ONE_SPECTRUM)
    assert validate_class(cls) == []


def test_validate_rainbow():
    assert validate_class(rainbow(0)) == []
    problems = validate_class(rainbow(1))
    assert len(problems) == 1 and "Euler" in problems[0]


def test_validate_flags_each_identity():
    b = BackboneSpectrum.unit(2)
    wrong_marks = DiagramClass(Mode.ORIENTED, 0, 1, 0, b, Spectrum.from_counts({(1,): 1, (0, 0): 1}))
    assert any("l=" in p for p in validate_class(wrong_marks))
    wrong_length = DiagramClass(Mode.ORIENTED, 0, 1, 0, b, Spectrum.from_counts({(0,): 1, (0, 0, 0): 1}))
    assert any("2k+b" in p for p in validate_class(wrong_length))
    twisted = DiagramClass(Mode.NON_ORIENTED, 1, 1, 0, b, Spectrum.from_counts({(0, 0, 0): 1}))
    assert validate_class(twisted) == []


def test_project_spectra():
    assert project_spectra(Spectrum.from_counts({(0,): 1, (0, 0): 1})) == ({1: 1, 2: 1}, {0: 2})
    assert project_spectra(GENUS_ONE_SPECTRUM) == ({1: 1, 2: 2, 9: 1}, {0: 2, 1: 2})
    assert project_spectra(Spectrum()) == ({}, {})


def test_aggregate_N_on_four_vertex_table():
    table = count_table(BackboneSpectrum.unit(4), 2)
    assert aggregate_N(table, lengths={1: 1, 2: 2}, points={0: 3}) == 1
    assert aggregate_N(table, lengths={1: 1, 2: 1}) == 0
    assert aggregate_N(table, euler_index=0) == catalan(2)
    assert aggregate_N(table) == 3
    assert aggregate_N([table, table], euler_index=1) == 2


def test_backbone_spectrum_arithmetic():
    b = BackboneSpectrum((0, 1, 0, 1, 0, 0))
    assert b.counts == (0, 1, 0, 1)
    assert (b.total, b.vertices, b.sizes()) == (2, 4, (1, 3))
    assert b.arrangements() == [(1, 3), (3, 1)]
    assert BackboneSpectrum.unit(1) + BackboneSpectrum.unit(3) == b
    assert b - BackboneSpectrum.unit(3) == BackboneSpectrum.unit(1)
    assert len(list(b.sub_spectra())) == 4
    assert BackboneSpectrum.from_sizes([2, 2]).arrangements() == [(2, 2)]
    assert str(b) == "{b_1=1,b_3=1}"
    with pytest.raises(ValueError):
        BackboneSpectrum((1, -1))


def test_count_table_add_and_merge():
    b = BackboneSpectrum.unit(2)
    t = CountTable(Mode.ORIENTED, REF, 1, b)
    t.add(rainbow(0), 2)
    other = CountTable(Mode.ORIENTED, REF, 1, b, {rainbow(0): -2})
    assert len(t.merge(other)) == 0
    assert t.total == 2 and t.l == 0
    with pytest.raises(ValueError):
        t.add(DiagramClass(Mode.ORIENTED, 0, 0, 2, b, Spectrum.from_counts({(2,): 1})))


def test_classical_numbers():
    assert [double_factorial(n) for n in (-1, 0, 1, 5, 9)] == [1, 1, 1, 15, 945]
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]
