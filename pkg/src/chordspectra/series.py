"""Sparse truncated formal series in x, y, t_i and u_d with rational coefficients.

Monomials are plain named tuples so they hash quickly; the ``u`` part is
keyed by canonical cyclic tuples, all canonicalised under the policy stored
on the owning :class:`Series`.  Truncation travels with every series value.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional

from .errors import (
    NonIntegralCount,
    NotExponentiable,
    NotLogarithmizable,
    PolicyMismatch,
    TruncationMismatch,
)
from .spectra import (
    DEFAULT_POLICY,
    BackboneSpectrum,
    CyclicPolicy,
    DiagramClass,
    Mode,
    Rep,
    Spectrum,
    canonical_tuple,
    class_key,
    class_text,
)

TPart = tuple[tuple[int, int], ...]
UPart = tuple[tuple[Rep, int], ...]


class Monomial(NamedTuple):
    x: int = 0
    y: int = 0
    t: TPart = ()
    u: UPart = ()

    @property
    def backbones(self) -> int:
        return sum(e for _, e in self.t)

    @property
    def vertices(self) -> int:
        return sum(i * e for i, e in self.t)

    def grade(self) -> int:
        return self.y + self.backbones

    def text(self) -> str:
        parts = []
        if self.x:
            parts.append(f"x^{self.x}")
        if self.y:
            parts.append(f"y^{self.y}")
        parts += [f"t{i}^{e}" for i, e in self.t]
        parts += [f"u{class_text(r)}^{e}" for r, e in self.u]
        return "*".join(parts) or "1"


ONE = Monomial()


def merge_t(a: TPart, b: TPart) -> TPart:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for i, e in b:
        acc[i] = acc.get(i, 0) + e
    return tuple(sorted(acc.items()))


def merge_u(a: UPart, b: UPart) -> UPart:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for r, e in b:
        acc[r] = acc.get(r, 0) + e
    return tuple(sorted(acc.items(), key=lambda it: class_key(it[0])))


def adjust_u(u: UPart, remove: Iterable[Rep], add: Iterable[Rep]) -> UPart:
    """Lower the exponent of each class in ``remove`` by one and raise those in ``add``."""
    acc = dict(u)
    for r in remove:
        e = acc[r] - 1
        if e:
            acc[r] = e
        else:
            del acc[r]
    for r in add:
        acc[r] = acc.get(r, 0) + 1
    return tuple(sorted(acc.items(), key=lambda it: class_key(it[0])))


@dataclass(frozen=True)
class Truncation:
    """Series terms kept: y-degree <= k_max, at most b_max backbones, each with at
    most v_max vertices and (optionally) at most vertex_max vertices in total."""

    k_max: int
    b_max: int
    v_max: int
    vertex_max: Optional[int] = None

    def admits(self, mono: Monomial) -> bool:
        if mono.y > self.k_max:
            return False
        return self.admits_t(mono.t)

    def admits_t(self, t: TPart) -> bool:
        nb = 0
        nv = 0
        for i, e in t:
            if i > self.v_max:
                return False
            nb += e
            nv += i * e
        if nb > self.b_max:
            return False
        return self.vertex_max is None or nv <= self.vertex_max

    @property
    def max_grade(self) -> int:
        return self.k_max + self.b_max


class Series:
    """Immutable sparse series; arithmetic returns new values."""

    __slots__ = ("terms", "truncation", "policy")

    def __init__(
        self,
        terms: Mapping[Monomial, Fraction | int] | None = None,
        truncation: Truncation = Truncation(4, 2, 8),
        policy: CyclicPolicy = DEFAULT_POLICY,
    ):
        clean = {}
        for mono, c in (terms or {}).items():
            if c and truncation.admits(mono):
                clean[mono] = Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self.truncation = truncation
        self.policy = CyclicPolicy(policy)

    # construction ----------------------------------------------------------

    @classmethod
    def zero(cls, truncation: Truncation, policy: CyclicPolicy = DEFAULT_POLICY) -> "Series":
        return cls({}, truncation, policy)

    @classmethod
    def one(cls, truncation: Truncation, policy: CyclicPolicy = DEFAULT_POLICY) -> "Series":
        return cls({ONE: 1}, truncation, policy)

    @staticmethod
    def make_monomial(
        x: int = 0,
        y: int = 0,
        t: Mapping[int, int] | None = None,
        u: Mapping[Iterable[int], int] | Iterable[tuple[Iterable[int], int]] | None = None,
        policy: CyclicPolicy = DEFAULT_POLICY,
    ) -> Monomial:
        tp = tuple(sorted((i, e) for i, e in (t or {}).items() if e))
        acc: dict[Rep, int] = {}
        pairs = (u.items() if isinstance(u, Mapping) else u) if u else ()
        for raw, e in pairs:
            if e:
                r = canonical_tuple(tuple(raw), policy)
                acc[r] = acc.get(r, 0) + e
        up = tuple(sorted(acc.items(), key=lambda it: class_key(it[0])))
        return Monomial(x, y, tp, up)

    @classmethod
    def monomial(
        cls,
        coef: Fraction | int,
        truncation: Truncation,
        policy: CyclicPolicy = DEFAULT_POLICY,
        **powers,
    ) -> "Series":
        return cls({cls.make_monomial(policy=policy, **powers): coef}, truncation, policy)

    def _new(self, terms: Mapping[Monomial, Fraction]) -> "Series":
        return Series(terms, self.truncation, self.policy)

    def _compatible(self, other: "Series") -> None:
        if self.policy is not other.policy:
            raise PolicyMismatch(f"{self.policy.value} vs {other.policy.value}")
        if self.truncation != other.truncation:
            raise TruncationMismatch(f"{self.truncation} vs {other.truncation}")

    # ring operations --------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        self._compatible(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return self._new(out)

    def __neg__(self) -> "Series":
        return self.scale(-1)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "Series":
        c = Fraction(c)
        return self._new({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        self._compatible(other)
        trunc = self.truncation
        left = self.buckets()
        right = other.buckets()
        out: dict[Monomial, Fraction] = defaultdict(Fraction)
        for (ya, ta), terms_a in left.items():
            for (yb, tb), terms_b in right.items():
                if ya + yb > trunc.k_max:
                    continue
                t = merge_t(ta, tb)
                if not trunc.admits_t(t):
                    continue
                y = ya + yb
                for ma, ca in terms_a:
                    for mb, cb in terms_b:
                        out[Monomial(ma.x + mb.x, y, t, merge_u(ma.u, mb.u))] += ca * cb
        return self._new(out)

    __rmul__ = scale

    def buckets(self) -> dict[tuple[int, TPart], list[tuple[Monomial, Fraction]]]:
        """Terms grouped by their (y, t) part, which alone decides truncation."""
        groups: dict[tuple[int, TPart], list] = defaultdict(list)
        for m, c in self.terms.items():
            groups[(m.y, m.t)].append((m, c))
        return groups

    def exp(self) -> "Series":
        """``sum S^n / n!``; every term of ``S`` must have positive (y + t) grade."""
        for m in self.terms:
            if m.grade() == 0:
                raise NotExponentiable(f"term {m.text()} has zero grade")
        result = Series.one(self.truncation, self.policy)
        power = Series.one(self.truncation, self.policy)
        for n in range(1, self.truncation.max_grade + 1):
            power = (power * self).scale(Fraction(1, n))
            if not power.terms:
                break
            result = result + power
        return result

    def log(self) -> "Series":
        """Inverse of :meth:`exp` for series of the form ``1 + N``."""
        if self.terms.get(ONE) != 1:
            raise NotLogarithmizable(f"constant term {self.terms.get(ONE, 0)} is not 1")
        rest = self._new({m: c for m, c in self.terms.items() if m != ONE})
        for m in rest.terms:
            if m.grade() == 0:
                raise NotLogarithmizable(f"term {m.text()} has zero grade")
        result = Series.zero(self.truncation, self.policy)
        power = Series.one(self.truncation, self.policy)
        for n in range(1, self.truncation.max_grade + 1):
            power = power * rest
            if not power.terms:
                break
            result = result + power.scale(Fraction((-1) ** (n + 1), n))
        return result

    # structural helpers ------------------------------------------------------

    def map_monomials(self, fn: Callable[[Monomial], Monomial]) -> "Series":
        out: dict[Monomial, Fraction] = defaultdict(Fraction)
        for m, c in self.terms.items():
            out[fn(m)] += c
        return self._new(out)

    def times_x(self, power: int) -> "Series":
        return self.map_monomials(lambda m: m._replace(x=m.x + power))

    def shift_y(self, power: int) -> "Series":
        return self.map_monomials(lambda m: m._replace(y=m.y + power))

    def y_part(self, k: int) -> "Series":
        return self._new({m: c for m, c in self.terms.items() if m.y == k})

    def filter(self, keep: Callable[[Monomial], bool]) -> "Series":
        return self._new({m: c for m, c in self.terms.items() if keep(m)})

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def with_truncation(self, truncation: Truncation) -> "Series":
        return Series(self.terms, truncation, self.policy)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.policy is other.policy and self.terms == other.terms

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda it: monomial_order(it[0]))

    def to_text(self) -> str:
        return "\n".join(f"{c} {m.text()}" for m, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"Series({len(self.terms)} terms, {self.truncation})"


def monomial_order(m: Monomial) -> tuple:
    """Serialisation order: y, x, t exponents, then u classes by their text."""
    return (m.y, m.x, m.t, tuple((class_text(r), e) for r, e in m.u))


def diff(a: Series, b: Series) -> list[tuple[Monomial, Fraction, Fraction]]:
    """Monomials where ``a`` and ``b`` disagree, in serialisation order."""
    keys = sorted(set(a.terms) | set(b.terms), key=monomial_order)
    return [(m, a.coefficient(m), b.coefficient(m)) for m in keys if a.coefficient(m) != b.coefficient(m)]


# counts <-> coefficients -----------------------------------------------------


def class_monomial(cls: DiagramClass) -> Monomial:
    x = 2 * cls.euler_index if cls.mode is Mode.ORIENTED else cls.euler_index
    t = tuple((i, c) for i, c in enumerate(cls.backbones.counts) if c)
    return Monomial(x, cls.k, t, cls.spectrum.items)


def extract_count(H: Series, cls: DiagramClass) -> Fraction:
    """``b! * [x^(2g or h) y^k t^b u^m] H``."""
    if cls.spectrum.policy is not H.policy:
        raise PolicyMismatch("class and series use different policies")
    return math.factorial(cls.backbones.total) * H.coefficient(class_monomial(cls))


def as_integer_count(value: Fraction, what: str = "count") -> int:
    if value.denominator != 1:
        raise NonIntegralCount(f"{what} = {value} is not an integer")
    if value < 0:
        raise NonIntegralCount(f"{what} = {value} is negative")
    return int(value)


def class_from_monomial(mono: Monomial, mode: Mode, policy: CyclicPolicy) -> DiagramClass:
    b = BackboneSpectrum(tuple(dict(mono.t).get(i, 0) for i in range(max((i for i, _ in mono.t), default=-1) + 1)))
    if mode is Mode.ORIENTED:
        if mono.x % 2:
            raise NonIntegralCount(f"odd x power in oriented series term {mono.text()}")
        index = mono.x // 2
    else:
        index = mono.x
    return DiagramClass(mode, index, mono.y, b.vertices - 2 * mono.y, b, Spectrum(mono.u, policy))
