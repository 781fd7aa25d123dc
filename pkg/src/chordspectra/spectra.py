"""Canonical cyclic tuples, boundary spectra, diagram classes and count tables.

A boundary component of a partial chord diagram is summarised by the cyclic
tuple ``(d_1, ..., d_K)`` of marked-point counts read between its length
elements.  Tuples are stored in canonical form so that they can be used as
dictionary keys; the canonical form depends on a :class:`CyclicPolicy`.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmptyTuple, NegativeEntry

Rep = tuple[int, ...]


class Mode(str, enum.Enum):
    ORIENTED = "oriented"
    NON_ORIENTED = "nonoriented"


class CyclicPolicy(str, enum.Enum):
    """Which symmetries of a cyclic tuple are quotiented out."""

    ROTATION = "rotation"
    ROTATION_REFLECTION = "rotation-reflection"


DEFAULT_POLICY = CyclicPolicy.ROTATION_REFLECTION


def least_rotation(seq: Sequence[int]) -> int:
    """Return the start index of the lexicographically least rotation of ``seq``.

    Booth's algorithm, linear in ``len(seq)``.
    """
    doubled = list(seq) * 2
    n = len(doubled)
    fail = [-1] * n
    k = 0
    for j in range(1, n):
        sj = doubled[j]
        i = fail[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != doubled[k + i + 1]:
            # here i == -1
            if sj < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def _min_rotation(seq: Rep) -> Rep:
    k = least_rotation(seq)
    return seq[k:] + seq[:k]


@lru_cache(maxsize=1 << 18)
def canonical_tuple(raw: Rep, policy: CyclicPolicy = DEFAULT_POLICY) -> Rep:
    """Canonical representative of ``raw`` as a plain tuple (hot path)."""
    if not raw:
        raise EmptyTuple("a boundary tuple needs at least one entry")
    best = _min_rotation(raw)
    if policy is CyclicPolicy.ROTATION_REFLECTION:
        rev = _min_rotation(raw[::-1])
        if rev < best:
            best = rev
    return best


def class_key(rep: Rep) -> tuple[int, Rep]:
    """Sort key for canonical tuples: shorter boundaries first, then lexicographic."""
    return (len(rep), rep)


def class_text(rep: Rep) -> str:
    return "(" + ",".join(str(d) for d in rep) + ")"


@dataclass(frozen=True)
class BoundaryClass:
    rep: Rep
    policy: CyclicPolicy = DEFAULT_POLICY

    @property
    def length(self) -> int:
        return len(self.rep)

    @property
    def marks(self) -> int:
        return sum(self.rep)

    def __lt__(self, other: "BoundaryClass") -> bool:
        return class_key(self.rep) < class_key(other.rep)

    def __str__(self) -> str:
        return class_text(self.rep)


def canonicalize(raw: Iterable[int], policy: CyclicPolicy = DEFAULT_POLICY) -> BoundaryClass:
    raw = tuple(int(d) for d in raw)
    if not raw:
        raise EmptyTuple("a boundary tuple needs at least one entry")
    if min(raw) < 0:
        raise NegativeEntry(f"negative entry in {raw}")
    return BoundaryClass(canonical_tuple(raw, CyclicPolicy(policy)), CyclicPolicy(policy))


@dataclass(frozen=True)
class Spectrum:
    """Boundary length and point spectrum: a finite multiset of boundary classes.

    ``items`` holds ``(canonical tuple, multiplicity)`` pairs sorted by
    :func:`class_key`; zero multiplicities are never stored.
    """

    items: tuple[tuple[Rep, int], ...] = ()
    policy: CyclicPolicy = DEFAULT_POLICY

    @classmethod
    def from_counts(
        cls, counts: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]],
        policy: CyclicPolicy = DEFAULT_POLICY,
    ) -> "Spectrum":
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        merged: Counter[Rep] = Counter()
        for raw, mult in pairs:
            if mult < 0:
                raise ValueError(f"negative multiplicity {mult} for {raw}")
            if mult:
                merged[canonicalize(raw, policy).rep] += mult
        return cls._from_canonical(merged, policy)

    @classmethod
    def from_tuples(cls, tuples: Iterable[Sequence[int]], policy: CyclicPolicy = DEFAULT_POLICY) -> "Spectrum":
        return cls.from_counts([(t, 1) for t in tuples], policy)

    @classmethod
    def _from_canonical(cls, counts: Mapping[Rep, int], policy: CyclicPolicy) -> "Spectrum":
        items = tuple(sorted(((r, m) for r, m in counts.items() if m), key=lambda it: class_key(it[0])))
        return cls(items, CyclicPolicy(policy))

    def counts(self) -> dict[Rep, int]:
        return dict(self.items)

    def classes(self) -> Iterator[tuple[BoundaryClass, int]]:
        for rep, mult in self.items:
            yield BoundaryClass(rep, self.policy), mult

    def multiplicity(self, raw: Sequence[int]) -> int:
        rep = canonical_tuple(tuple(raw), self.policy)
        return self.counts().get(rep, 0)

    @property
    def components(self) -> int:
        return sum(m for _, m in self.items)

    @property
    def total_length(self) -> int:
        return sum(len(r) * m for r, m in self.items)

    @property
    def total_marks(self) -> int:
        return sum(sum(r) * m for r, m in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return " ".join(f"{class_text(r)}^{m}" for r, m in self.items)


LengthPointSpectrum = Spectrum


def project_spectra(spectrum: Spectrum) -> tuple[dict[int, int], dict[int, int]]:
    """Return the boundary length spectrum and the boundary point spectrum.

    Both are dictionaries (``K -> count`` and ``i -> count``) with keys in
    increasing order and no zero values.
    """
    lengths: Counter[int] = Counter()
    points: Counter[int] = Counter()
    for rep, mult in spectrum.items:
        lengths[len(rep)] += mult
        points[sum(rep)] += mult
    return dict(sorted(lengths.items())), dict(sorted(points.items()))


@dataclass(frozen=True)
class BackboneSpectrum:
    """``counts[i]`` backbones carry exactly ``i`` vertices; trailing zeros are dropped."""

    counts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"negative backbone count in {counts}")
        while counts and counts[-1] == 0:
            counts = counts[:-1]
        object.__setattr__(self, "counts", counts)

    @classmethod
    def unit(cls, i: int, times: int = 1) -> "BackboneSpectrum":
        return cls((0,) * i + (times,))

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "BackboneSpectrum":
        c = Counter(sizes)
        return cls(tuple(c.get(i, 0) for i in range(max(c, default=-1) + 1)))

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def vertices(self) -> int:
        return sum(i * c for i, c in enumerate(self.counts))

    def get(self, i: int) -> int:
        return self.counts[i] if i < len(self.counts) else 0

    def sizes(self) -> tuple[int, ...]:
        """Backbone vertex counts in increasing order (one entry per backbone)."""
        return tuple(i for i, c in enumerate(self.counts) for _ in range(c))

    def arrangements(self) -> list[tuple[int, ...]]:
        """All distinct left-to-right orders of the backbones, sorted."""
        return sorted(set(permutations(self.sizes())))

    def __add__(self, other: "BackboneSpectrum") -> "BackboneSpectrum":
        n = max(len(self.counts), len(other.counts))
        return BackboneSpectrum(tuple(self.get(i) + other.get(i) for i in range(n)))

    def __sub__(self, other: "BackboneSpectrum") -> "BackboneSpectrum":
        n = max(len(self.counts), len(other.counts))
        return BackboneSpectrum(tuple(self.get(i) - other.get(i) for i in range(n)))

    def sub_spectra(self) -> Iterator["BackboneSpectrum"]:
        """Every ``b1`` with ``0 <= b1 <= self`` componentwise."""
        ranges = [range(c + 1) for c in self.counts]

        def rec(i: int, acc: tuple[int, ...]) -> Iterator[BackboneSpectrum]:
            if i == len(ranges):
                yield BackboneSpectrum(acc)
                return
            for c in ranges[i]:
                yield from rec(i + 1, acc + (c,))

        yield from rec(0, ())

    def __lt__(self, other: "BackboneSpectrum") -> bool:
        return (self.total, self.vertices, self.counts) < (other.total, other.vertices, other.counts)

    def __str__(self) -> str:
        parts = [f"b_{i}={c}" for i, c in enumerate(self.counts) if c]
        return "{" + ",".join(parts) + "}"


@dataclass(frozen=True)
class DiagramClass:
    """Full type ``{g or h, k, l; b; m}`` of a partial chord diagram."""

    mode: Mode
    euler_index: int
    k: int
    l: int
    backbones: BackboneSpectrum
    spectrum: Spectrum
    surfaces: int = 1  # connected pieces; everything but the raw oracle works with 1

    @property
    def components(self) -> int:
        return self.spectrum.components

    def sort_key(self) -> tuple:
        return (self.surfaces, self.euler_index, [class_key(r) + (m,) for r, m in self.spectrum.items])


def validate_class(c: DiagramClass) -> list[str]:
    """List the identities violated by ``c``; an empty list means it is consistent."""
    problems = []
    b = c.backbones.total
    n = c.spectrum.components
    chi = 2 * c.surfaces
    if c.k < 0 or c.l < 0 or c.euler_index < 0 or c.surfaces < 1:
        problems.append("negative k, l or Euler index")
    if c.mode is Mode.ORIENTED:
        if chi - 2 * c.euler_index != b - c.k + n:
            problems.append(f"Euler relation 2-2g=b-k+n fails: {chi - 2 * c.euler_index} != {b - c.k + n}")
    elif chi - c.euler_index != b - c.k + n:
        problems.append(f"Euler relation 2-h=b-k+n fails: {chi - c.euler_index} != {b - c.k + n}")
    if 2 * c.k + c.l != c.backbones.vertices:
        problems.append(f"2k+l={2 * c.k + c.l} != sum i*b_i={c.backbones.vertices}")
    if c.spectrum.total_marks != c.l:
        problems.append(f"sum |d|*m={c.spectrum.total_marks} != l={c.l}")
    if c.spectrum.total_length != 2 * c.k + b:
        problems.append(f"sum K*m={c.spectrum.total_length} != 2k+b={2 * c.k + b}")
    for rep, mult in c.spectrum.items:
        if not rep or min(rep) < 0 or mult <= 0:
            problems.append(f"malformed spectrum entry {class_text(rep)}^{mult}")
        elif canonical_tuple(rep, c.spectrum.policy) != rep:
            problems.append(f"non-canonical class {class_text(rep)}")
    return problems


@dataclass
class CountTable:
    """Exact counts of diagrams of fixed mode, chord number and backbone spectrum."""

    mode: Mode
    policy: CyclicPolicy
    k: int
    backbones: BackboneSpectrum
    entries: dict[DiagramClass, int] = field(default_factory=dict)

    @property
    def l(self) -> int:
        return self.backbones.vertices - 2 * self.k

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def add(self, cls: DiagramClass, count: int = 1) -> None:
        if (cls.mode, cls.k, cls.backbones) != (self.mode, self.k, self.backbones):
            raise ValueError(f"class {cls} does not belong to this table")
        if count:
            new = self.entries.get(cls, 0) + count
            if new:
                self.entries[cls] = new
            else:
                del self.entries[cls]

    def merge(self, other: "CountTable") -> "CountTable":
        if (self.mode, self.policy, self.k, self.backbones) != (other.mode, other.policy, other.k, other.backbones):
            raise ValueError("tables with different parameters cannot be merged")
        out = CountTable(self.mode, self.policy, self.k, self.backbones, dict(self.entries))
        for cls, count in other.entries.items():
            out.add(cls, count)
        return out

    def sorted_entries(self) -> list[tuple[DiagramClass, int]]:
        return sorted(self.entries.items(), key=lambda it: it[0].sort_key())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.mode, self.policy, self.k, self.backbones, self.entries) == (
            other.mode, other.policy, other.k, other.backbones, other.entries)

    def __len__(self) -> int:
        return len(self.entries)


def aggregate_N(
    tables: CountTable | Iterable[CountTable],
    lengths: Mapping[int, int] | None = None,
    points: Mapping[int, int] | None = None,
    euler_index: int | None = None,
) -> int:
    """Sum counts over all spectra projecting to the given length/point spectra.

    Any of ``lengths``, ``points`` and ``euler_index`` left as ``None`` is
    summed over, which gives the marginal counts.  Passing several tables
    sums over backbone spectra as well.
    """
    if isinstance(tables, CountTable):
        tables = [tables]
    want_len = None if lengths is None else {K: v for K, v in lengths.items() if v}
    want_pts = None if points is None else {i: v for i, v in points.items() if v}
    total = 0
    for table in tables:
        for cls, count in table.entries.items():
            if euler_index is not None and cls.euler_index != euler_index:
                continue
            ell, n = project_spectra(cls.spectrum)
            if want_len is not None and ell != want_len:
                continue
            if want_pts is not None and n != want_pts:
                continue
            total += count
    return total


def double_factorial(n: int) -> int:
    """``n!!`` with the convention ``(-1)!! = 0!! = 1``."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)
