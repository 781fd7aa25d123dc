"""Term-by-term evaluation of the cut-and-join recursion on count tables.

This path never touches :class:`~chordspectra.series.Series`: it walks the
tables at lower chord number, applies the index vectors ``s, q`` (and
``s^x, q^x``) to their spectra and weighs each term with the combinatorial
factors of the recursion, ``(m_d + 1)``, ``(m_f + 1 + delta)`` and the ordered
splitting multinomial.  The result is compared with ``k * count``.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .cutjoin import (
    SignedIndexVector,
    build_q,
    build_q_x,
    build_s,
    build_s_diag,
    build_s_diag_x,
    build_s_x,
    cross_indices,
    diag_indices,
    pair_indices,
)
from .spectra import BackboneSpectrum, CountTable, DiagramClass, Mode, Rep, Spectrum, class_key

TableKey = tuple[BackboneSpectrum, int]
Target = tuple[int, tuple[tuple[Rep, int], ...]]


@dataclass(frozen=True)
class Mismatch:
    euler_index: int
    spectrum: Spectrum
    lhs: int  # k * count found in the table
    rhs: Fraction

    def __str__(self) -> str:
        return f"index={self.euler_index} m={self.spectrum}: k*M={self.lhs} but recursion gives {self.rhs}"


def _subtract(m: Mapping[Rep, int], p: SignedIndexVector) -> Counter | None:
    """Spectrum ``m - p`` or ``None`` if some multiplicity would go negative."""
    out = Counter(m)
    for r, e in p.pos:
        out[r] -= e
        if out[r] < 0:
            return None
    for r, e in p.neg:
        out[r] += e
    return +out


def _key(index: int, m: Counter) -> Target:
    return index, tuple(sorted(((r, e) for r, e in m.items() if e), key=lambda it: class_key(it[0])))


def _single_terms(d: Rep, mode: Mode, policy) -> Iterator[tuple[SignedIndexVector, int]]:
    """Index vectors for a chord with both ends on one boundary ``d`` and the
    Euler-index increase each produces."""
    for I, J, l, m in pair_indices(d):
        yield build_s(d, I, J, l, m, policy), 0
        if mode is Mode.NON_ORIENTED:
            yield build_s_x(d, I, J, l, m, policy), 1
    for I, l, m in diag_indices(d):
        yield build_s_diag(d, I, l, m, policy), 0
        if mode is Mode.NON_ORIENTED:
            yield build_s_diag_x(d, I, l, m, policy), 1


def _pair_terms(d: Rep, f: Rep, mode: Mode, policy) -> Iterator[SignedIndexVector]:
    for I, J, l, m in cross_indices(d, f):
        yield build_q(d, f, I, J, l, m, policy)
        if mode is Mode.NON_ORIENTED:
            yield build_q_x(d, f, I, J, l, m, policy)


def recursion_rhs(
    target: CountTable, lower: Mapping[TableKey, CountTable], diagonal_sign: int = 1
) -> dict[Target, Fraction]:
    """Right-hand side of the recursion for every class of ``target``'s parameters.

    A splitting chord whose two boundaries share the class ``d`` leaves
    ``m_d + 2`` such boundaries behind, hence the pair weight
    ``(m_d + 1)(m_f + 1 + delta) / 2``.  ``diagonal_sign=-1`` evaluates the
    ``(m_f + 1 - delta)`` variant instead, which undercounts those terms.
    """
    mode, policy, k, b = target.mode, target.policy, target.k, target.backbones
    genus_step = 1 if mode is Mode.ORIENTED else 2  # Euler-index increase of a genus-raising join
    rhs: dict[Target, Fraction] = defaultdict(Fraction)
    if k == 0:
        return rhs
    prev = lower.get((b, k - 1))

    # chord removal keeps the diagram connected
    for cls, count in (prev.entries.items() if prev else ()):
        small = cls.spectrum.counts()
        for d in small:
            for p, dh in _single_terms(d, mode, policy):
                m = _subtract(small, p)
                if m is None:
                    continue
                weight = m[d] + 1
                rhs[_key(cls.euler_index + dh, m)] += weight * count
        for d in small:
            for f in small:
                if d == f and small[d] < 2:
                    continue
                for p in _pair_terms(d, f, mode, policy):
                    m = _subtract(small, p)
                    if m is None:
                        continue
                    weight = Fraction((m[d] + 1) * (m[f] + 1 + diagonal_sign * (d == f)), 2)
                    rhs[_key(cls.euler_index + genus_step, m)] += weight * count

    # chord removal disconnects the diagram
    bfact = math.factorial(b.total)
    for b1 in b.sub_spectra():
        b2 = b - b1
        if b1.total == 0 or b2.total == 0:
            continue
        split = Fraction(bfact, math.factorial(b1.total) * math.factorial(b2.total))
        for k1 in range(k):
            t1, t2 = lower.get((b1, k1)), lower.get((b2, k - 1 - k1))
            if not t1 or not t2:
                continue
            for c1, n1 in t1.entries.items():
                m1 = c1.spectrum.counts()
                for c2, n2 in t2.entries.items():
                    m2 = c2.spectrum.counts()
                    both = Counter(m1) + Counter(m2)
                    for d in m1:
                        for f in m2:
                            weight = Fraction(m1[d] * m2[f], 2) * split * n1 * n2
                            for p in _pair_terms(d, f, mode, policy):
                                m = _subtract(both, p)
                                if m is not None:
                                    rhs[_key(c1.euler_index + c2.euler_index, m)] += weight
    return {key: v for key, v in rhs.items() if v}


def recursion_check(target: CountTable, lower: Mapping[TableKey, CountTable]) -> list[Mismatch]:
    """Classes where ``k * count`` differs from the recursion; empty on success.

    ``lower`` must hold the tables for the same mode and policy at every
    backbone sub-spectrum and every chord number below ``target.k``.
    """
    rhs = recursion_rhs(target, lower)
    found: dict[Target, int] = {
        (cls.euler_index, cls.spectrum.items): target.k * count for cls, count in target.entries.items()
    }
    out = []
    for key in sorted(set(rhs) | set(found), key=lambda it: (it[0], [(len(r), r, e) for r, e in it[1]])):
        lhs, want = found.get(key, 0), rhs.get(key, Fraction(0))
        if lhs != want:
            out.append(Mismatch(key[0], Spectrum(key[1], target.policy), lhs, want))
    return out


def check_all(tables: Mapping[TableKey, CountTable]) -> dict[TableKey, list[Mismatch]]:
    """Run :func:`recursion_check` on every table with ``k >= 1``; only failures are returned."""
    failures = {}
    for (b, k), table in sorted(tables.items(), key=lambda it: (it[0][1], it[0][0])):
        if k == 0:
            continue
        bad = recursion_check(table, tables)
        if bad:
            failures[(b, k)] = bad
    return failures


def class_of(target: CountTable, key: Target) -> DiagramClass:
    return DiagramClass(target.mode, key[0], target.k, target.l, target.backbones, Spectrum(key[1], target.policy))
