"""Cut-and-join operators and the y-steppers that build H and Z order by order.

Adding a chord to a diagram happens in one of three ways, each mirrored by
an operator on generating series:

* both ends on one boundary component: the untwisted split is ``M0`` (index
  ``s``), the non-splitting twisted reconnection is ``M1x`` (index ``s^x``);
* ends on two boundary components of one connected diagram: ``M2``/``M2x``
  (index ``q``/``q^x``), raising the Euler index by two;
* ends on two different connected diagrams: the bilinear ``S``/``S^x``.

Cluster positions ``I, J`` are 1-based throughout, marked-point offsets
``l, m`` are 0-based.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NegativeEntry
from .spectra import (
    DEFAULT_POLICY,
    BackboneSpectrum,
    CountTable,
    CyclicPolicy,
    Mode,
    Rep,
    canonical_tuple,
    class_key,
)
from .series import (
    Monomial,
    Series,
    Truncation,
    adjust_u,
    as_integer_count,
    class_from_monomial,
    class_monomial,
    merge_t,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SignedIndexVector:
    """``p = p+ - p-`` over boundary classes; ``D_p = u^(p-) d^(p+)/du^(p+)``."""

    pos: tuple[tuple[Rep, int], ...] = ()
    neg: tuple[tuple[Rep, int], ...] = ()

    @classmethod
    def of(cls, plus: Iterable[Rep], minus: Iterable[Rep]) -> "SignedIndexVector":
        p, n = Counter(plus), Counter(minus)
        common = p & n
        p, n = p - common, n - common
        key = lambda it: class_key(it[0])  # noqa: E731
        return cls(tuple(sorted(p.items(), key=key)), tuple(sorted(n.items(), key=key)))

    def is_zero(self) -> bool:
        return not self.pos and not self.neg


def _checked(raw: Sequence[int], policy: CyclicPolicy) -> Rep:
    raw = tuple(raw)
    if min(raw) < 0:
        raise NegativeEntry(f"constructed tuple {raw} has a negative entry")
    return canonical_tuple(raw, policy)


def _check_range(d: Rep, I: int, l: int) -> None:
    if not (1 <= I <= len(d)) or not (0 <= l <= d[I - 1] - 1):
        raise NegativeEntry(f"index I={I}, l={l} out of range for {d}")


# index constructors: raw tuples ---------------------------------------------


def split_pair(d: Rep, I: int, J: int, l: int, m: int) -> tuple[Rep, Rep]:
    """Two boundaries left after a splitting chord joins clusters ``I < J``."""
    if not I < J:
        raise ValueError("split_pair needs I < J")
    _check_range(d, I, l)
    _check_range(d, J, m)
    a = d[:I - 1] + (d[I - 1] - l - 1, m) + d[J:]
    b = (l,) + d[I:J - 1] + (d[J - 1] - m - 1,)
    return a, b


def split_pair_diag(d: Rep, I: int, l: int, m: int) -> tuple[Rep, Rep]:
    """Both chord ends inside cluster ``I``: ``l`` points before, ``m`` after."""
    if not (1 <= I <= len(d)) or l < 0 or m < 0 or l + m > d[I - 1] - 2:
        raise NegativeEntry(f"index I={I}, l={l}, m={m} out of range for {d}")
    return d[:I - 1] + (l, m) + d[I:], (d[I - 1] - l - m - 2,)


def join_tuple(d: Rep, f: Rep, I: int, J: int, l: int, m: int) -> Rep:
    _check_range(d, I, l)
    _check_range(f, J, m)
    return d[:I - 1] + (d[I - 1] - l - 1, m) + f[J:] + f[:J - 1] + (f[J - 1] - m - 1, l) + d[I:]


def twist_tuple(d: Rep, I: int, J: int, l: int, m: int) -> Rep:
    """Single boundary after a non-splitting chord joins clusters ``I < J``."""
    if not I < J:
        raise ValueError("twist_tuple needs I < J")
    _check_range(d, I, l)
    _check_range(d, J, m)
    return d[:I - 1] + (l, m) + d[I:J - 1][::-1] + (d[I - 1] - l - 1, d[J - 1] - m - 1) + d[J:]


def twist_tuple_diag(d: Rep, I: int, l: int, m: int) -> Rep:
    if not (1 <= I <= len(d)) or l < 0 or m < 0 or l + m > d[I - 1] - 2:
        raise NegativeEntry(f"index I={I}, l={l}, m={m} out of range for {d}")
    return d[:I - 1] + (l, d[I - 1] - l - m - 2, m) + d[I:]


def join_tuple_x(d: Rep, f: Rep, I: int, J: int, l: int, m: int) -> Rep:
    _check_range(d, I, l)
    _check_range(f, J, m)
    return f[:J - 1] + (f[J - 1] - m - 1, l) + d[:I - 1][::-1] + d[I:][::-1] + (d[I - 1] - l - 1, m) + f[J:]


# index constructors: signed vectors -------------------------------------------


def build_s(d, I, J, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d = tuple(d)
    a, b = split_pair(d, I, J, l, m)
    return SignedIndexVector.of([_checked(d, policy)], [_checked(a, policy), _checked(b, policy)])


def build_s_diag(d, I, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d = tuple(d)
    a, b = split_pair_diag(d, I, l, m)
    return SignedIndexVector.of([_checked(d, policy)], [_checked(a, policy), _checked(b, policy)])


def build_q(d, f, I, J, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d, f = tuple(d), tuple(f)
    c = join_tuple(d, f, I, J, l, m)
    return SignedIndexVector.of([_checked(d, policy), _checked(f, policy)], [_checked(c, policy)])


def build_s_x(d, I, J, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d = tuple(d)
    return SignedIndexVector.of([_checked(d, policy)], [_checked(twist_tuple(d, I, J, l, m), policy)])


def build_s_diag_x(d, I, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d = tuple(d)
    return SignedIndexVector.of([_checked(d, policy)], [_checked(twist_tuple_diag(d, I, l, m), policy)])


def build_q_x(d, f, I, J, l, m, policy=DEFAULT_POLICY) -> SignedIndexVector:
    d, f = tuple(d), tuple(f)
    c = join_tuple_x(d, f, I, J, l, m)
    return SignedIndexVector.of([_checked(d, policy), _checked(f, policy)], [_checked(c, policy)])


# index ranges -----------------------------------------------------------------


def pair_indices(d: Rep):
    """``(I, J, l, m)`` with ``I < J``: one marked point in each of two clusters."""
    K = len(d)
    for I in range(1, K + 1):
        for J in range(I + 1, K + 1):
            for l in range(d[I - 1]):
                for m in range(d[J - 1]):
                    yield I, J, l, m


def diag_indices(d: Rep):
    """``(I, l, m)`` with ``l + m <= d_I - 2``: two marked points in one cluster."""
    for I in range(1, len(d) + 1):
        for l in range(d[I - 1] - 1):
            for m in range(d[I - 1] - 1 - l):
                yield I, l, m


def cross_indices(d: Rep, f: Rep):
    for I in range(1, len(d) + 1):
        for J in range(1, len(f) + 1):
            for l in range(d[I - 1]):
                for m in range(f[J - 1]):
                    yield I, J, l, m


# cached outcome tables -----------------------------------------------------------


@lru_cache(maxsize=None)
def split_outcomes(d: Rep, policy: CyclicPolicy) -> tuple[tuple[tuple[Rep, Rep], int], ...]:
    out: Counter = Counter()
    for I, J, l, m in pair_indices(d):
        a, b = split_pair(d, I, J, l, m)
        out[tuple(sorted((canonical_tuple(a, policy), canonical_tuple(b, policy))))] += 1
    for I, l, m in diag_indices(d):
        a, b = split_pair_diag(d, I, l, m)
        out[tuple(sorted((canonical_tuple(a, policy), canonical_tuple(b, policy))))] += 1
    return tuple(out.items())


@lru_cache(maxsize=None)
def twist_outcomes(d: Rep, policy: CyclicPolicy) -> tuple[tuple[Rep, int], ...]:
    out: Counter = Counter()
    for I, J, l, m in pair_indices(d):
        out[canonical_tuple(twist_tuple(d, I, J, l, m), policy)] += 1
    for I, l, m in diag_indices(d):
        out[canonical_tuple(twist_tuple_diag(d, I, l, m), policy)] += 1
    return tuple(out.items())


@lru_cache(maxsize=None)
def join_outcomes(d: Rep, f: Rep, policy: CyclicPolicy, crossed: bool = False) -> tuple[tuple[Rep, int], ...]:
    build = join_tuple_x if crossed else join_tuple
    out: Counter = Counter()
    for I, J, l, m in cross_indices(d, f):
        out[canonical_tuple(build(d, f, I, J, l, m), policy)] += 1
    return tuple(out.items())


# operators -------------------------------------------------------------------------


def _falling(n: int, r: int) -> int:
    return math.perm(n, r) if n >= r else 0


def apply_D(p: SignedIndexVector, S: Series) -> Series:
    """Apply ``prod u^(p-) prod (d/du)^(p+)`` term by term."""
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for mono, coef in S:
        exps = dict(mono.u)
        factor = 1
        for r, e in p.pos:
            factor *= _falling(exps.get(r, 0), e)
            if not factor:
                break
        if not factor:
            continue
        removed = [r for r, e in p.pos for _ in range(e)]
        added = [r for r, e in p.neg for _ in range(e)]
        out[mono._replace(u=adjust_u(mono.u, removed, added))] += coef * factor
    return Series(out, S.truncation, S.policy)


def apply_M0(S: Series) -> Series:
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    policy = S.policy
    for mono, coef in S:
        for d, e in mono.u:
            for (a, b), mult in split_outcomes(d, policy):
                out[mono._replace(u=adjust_u(mono.u, (d,), (a, b)))] += coef * e * mult
    return Series(out, S.truncation, policy)


def apply_M1x(S: Series) -> Series:
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    policy = S.policy
    for mono, coef in S:
        for d, e in mono.u:
            for c, mult in twist_outcomes(d, policy):
                out[mono._replace(u=adjust_u(mono.u, (d,), (c,)))] += coef * e * mult
    return Series(out, S.truncation, policy)


def _apply_second_order(S: Series, crossed: bool) -> Series:
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    policy = S.policy
    for mono, coef in S:
        for d, ed in mono.u:
            for f, ef in mono.u:
                pairs = ed * (ef - 1) if d == f else ed * ef
                if not pairs:
                    continue
                weight = coef * pairs * HALF
                for c, mult in join_outcomes(d, f, policy, crossed):
                    out[mono._replace(u=adjust_u(mono.u, (d, f), (c,)))] += weight * mult
    return Series(out, S.truncation, policy)


def apply_M2(S: Series) -> Series:
    """Second-order join operator including its 1/2; the caller attaches x^2."""
    return _apply_second_order(S, crossed=False)


def apply_M2x(S: Series) -> Series:
    return _apply_second_order(S, crossed=True)


def _derivative_terms(S: Series):
    """For every (y, t) bucket: list of (class d, monomial / u_d, coef * exponent)."""
    groups: dict = defaultdict(list)
    for mono, coef in S:
        for d, e in mono.u:
            groups[(mono.y, mono.t)].append((d, mono.x, adjust_u(mono.u, (d,), ()), coef * e))
    return groups


def apply_S_bilinear(A: Series, B: Series, variant: str = "plain") -> Series:
    """``1/2 sum_{d,f} sum_c u_c (dA/du_d)(dB/du_f)`` with ``c`` the joined boundary."""
    A._compatible(B)
    if variant not in ("plain", "cross"):
        raise ValueError(f"unknown variant {variant!r}")
    crossed = variant == "cross"
    trunc, policy = A.truncation, A.policy
    left, right = _derivative_terms(A), _derivative_terms(B)
    out: dict[Monomial, Fraction] = defaultdict(Fraction)
    for (ya, ta), terms_a in left.items():
        for (yb, tb), terms_b in right.items():
            y = ya + yb
            t = merge_t(ta, tb)
            if y > trunc.k_max or not trunc.admits_t(t):
                continue
            for d, xa, ua, ca in terms_a:
                for f, xb, ub, cb in terms_b:
                    weight = ca * cb * HALF
                    base = adjust_u(ua, (), [r for r, e in ub for _ in range(e)])
                    for c, mult in join_outcomes(d, f, policy, crossed):
                        out[Monomial(xa + xb, y, t, adjust_u(base, (), (c,)))] += weight * mult
    return Series(out, trunc, policy)


def operator_M(S: Series, mode: Mode) -> Series:
    """``M0 + x^2 M2`` (oriented) or ``M0 + x M1x + x^2 (M2 + M2x)`` (non-oriented)."""
    out = apply_M0(S) + apply_M2(S).times_x(2)
    if mode is Mode.NON_ORIENTED:
        out = out + apply_M1x(S).times_x(1) + apply_M2x(S).times_x(2)
    return out


def operator_S(A: Series, B: Series, mode: Mode) -> Series:
    out = apply_S_bilinear(A, B, "plain")
    if mode is Mode.NON_ORIENTED:
        out = out + apply_S_bilinear(A, B, "cross")
    return out


# steppers ----------------------------------------------------------------------------


def initial_H(truncation: Truncation, policy: CyclicPolicy = DEFAULT_POLICY) -> Series:
    """``sum_{1<=i<=v_max} t_i u_(i)``: one bare backbone with i marked points."""
    terms = {Monomial(0, 0, ((i, 1),), (((i,), 1),)): Fraction(1) for i in range(1, truncation.v_max + 1)}
    return Series(terms, truncation, policy)


def step_connected(parts: Sequence[Series], mode: Mode) -> Series:
    """Next y-order of the connected series from ``H_0 .. H_{k-1}`` (``k = len(parts)``)."""
    k = len(parts)
    if k == 0:
        raise ValueError("need at least the initial term")
    acc = operator_M(parts[k - 1], mode)
    for a in range(k):
        acc = acc + operator_S(parts[a], parts[k - 1 - a], mode)
    return acc.shift_y(1).scale(Fraction(1, k))


def solve_connected(truncation: Truncation, mode: Mode, policy: CyclicPolicy = DEFAULT_POLICY) -> list[Series]:
    parts = [initial_H(truncation, policy)]
    for _ in range(truncation.k_max):
        parts.append(step_connected(parts, mode))
    return parts


def step_full(Z_prev: Series, k: int, mode: Mode) -> Series:
    return operator_M(Z_prev, mode).shift_y(1).scale(Fraction(1, k))


def solve_full(truncation: Truncation, mode: Mode, policy: CyclicPolicy = DEFAULT_POLICY) -> list[Series]:
    parts = [initial_H(truncation, policy).exp()]
    for k in range(1, truncation.k_max + 1):
        parts.append(step_full(parts[-1], k, mode))
    return parts


def total(parts: Iterable[Series]) -> Series:
    parts = list(parts)
    out = Series.zero(parts[0].truncation, parts[0].policy)
    for p in parts:
        out = out + p
    return out


# x-grading between H and Z -------------------------------------------------------------


def to_full_grading(H: Series) -> Series:
    """Re-grade connected terms from x^(2-b+k-n) to x^(b+k-n), which is additive.

    With this grading exp(H) satisfies the linear equation dZ/dy = M Z exactly.
    """
    return H.map_monomials(lambda m: m._replace(x=m.x + 2 * m.backbones - 2))


def from_full_grading(G: Series) -> Series:
    def back(m: Monomial) -> Monomial:
        x = m.x - 2 * m.backbones + 2
        if x < 0:
            raise ValueError(f"term {m.text()} cannot come from a connected diagram")
        return m._replace(x=x)

    return G.map_monomials(back)


def connected_to_full(H: Series) -> Series:
    return to_full_grading(H).exp()


def full_to_connected(Z: Series) -> Series:
    return from_full_grading(Z.log())


# tables <-> series ----------------------------------------------------------------------


def sector_of(mono: Monomial) -> BackboneSpectrum:
    t = dict(mono.t)
    return BackboneSpectrum(tuple(t.get(i, 0) for i in range(max(t, default=-1) + 1)))


def table_from_series(H: Series, backbones: BackboneSpectrum, k: int, mode: Mode) -> CountTable:
    """Extract ``b! * coefficient`` for one sector and order, asserting integrality."""
    t = tuple((i, c) for i, c in enumerate(backbones.counts) if c)
    bfact = math.factorial(backbones.total)
    table = CountTable(mode, H.policy, k, backbones)
    for mono, coef in H:
        if mono.y != k or mono.t != t:
            continue
        cls = class_from_monomial(mono, mode, H.policy)
        table.add(cls, as_integer_count(bfact * coef, f"b!*[{mono.text()}]"))
    return table


def sectors(truncation: Truncation, include_empty_backbones: bool = False) -> list[BackboneSpectrum]:
    """All backbone spectra admitted by the truncation (b_0 = 0 unless asked)."""
    lo = 0 if include_empty_backbones else 1
    out = []

    def rec(i: int, counts: tuple[int, ...], nb: int, nv: int) -> None:
        if i > truncation.v_max:
            if nb:
                out.append(BackboneSpectrum((0,) * lo + counts))
            return
        for c in range(truncation.b_max - nb + 1):
            if truncation.vertex_max is not None and nv + i * c > truncation.vertex_max:
                break
            rec(i + 1, counts + (c,), nb + c, nv + i * c)

    rec(lo, (), 0, 0)
    return sorted(out)


def tables_from_parts(parts: Sequence[Series], mode: Mode) -> dict[tuple[BackboneSpectrum, int], CountTable]:
    trunc = parts[0].truncation
    out = {}
    for k, Hk in enumerate(parts):
        for b in sectors(trunc):
            if 2 * k <= b.vertices:
                out[(b, k)] = table_from_series(Hk, b, k, mode)
    return out


def series_from_tables(
    tables: Iterable[CountTable], truncation: Truncation, policy: CyclicPolicy = DEFAULT_POLICY
) -> Series:
    terms: dict[Monomial, Fraction] = {}
    for table in tables:
        bfact = math.factorial(table.backbones.total)
        for cls, count in table.entries.items():
            terms[class_monomial(cls)] = Fraction(count, bfact)
    return Series(terms, truncation, policy)
