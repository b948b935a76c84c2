"""Set algebra and exact energy counting over F_q.

Every count here is an exact Python int.  Numpy is used only to enumerate
pairs; aggregated counts are converted to Python ints before they are squared
or multiplied, so no result can overflow.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .field import FieldCtx, FieldError

BRUTE_FORCE_LIMIT = 10**8


class BudgetError(ValueError):
    """Requested enumeration exceeds the configured budget."""


@dataclass(frozen=True)
class FSet:
    """Finite subset of F_q, stored as a strictly increasing tuple of encodings."""

    ctx: FieldCtx
    elements: tuple[int, ...] = ()

    def __post_init__(self):
        elems = tuple(sorted({int(a) for a in self.elements}))
        for a in elems[:1] + elems[-1:]:
            self.ctx.check(a)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, ctx: FieldCtx, values: Iterable[int]) -> "FSet":
        return cls(ctx, tuple(values))

    @classmethod
    def from_array(cls, ctx: FieldCtx, arr) -> "FSet":
        return cls(ctx, tuple(int(x) for x in np.unique(np.asarray(arr, dtype=np.int64))))

    @classmethod
    def full(cls, ctx: FieldCtx) -> "FSet":
        return cls(ctx, tuple(range(ctx.q)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a) -> bool:
        i = np.searchsorted(self.elements, a) if self.elements else 0
        return i < len(self.elements) and self.elements[i] == a

    def array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def nonzero(self) -> "FSet":
        return FSet(self.ctx, tuple(a for a in self.elements if a != 0))

    def __or__(self, other: "FSet") -> "FSet":
        _same_ctx(self, other)
        return FSet(self.ctx, self.elements + other.elements)

    def __and__(self, other: "FSet") -> "FSet":
        _same_ctx(self, other)
        return FSet(self.ctx, tuple(set(self.elements) & set(other.elements)))

    def __sub__(self, other: "FSet") -> "FSet":
        _same_ctx(self, other)
        return FSet(self.ctx, tuple(set(self.elements) - set(other.elements)))

    def issubset(self, other: "FSet") -> bool:
        _same_ctx(self, other)
        return set(self.elements) <= set(other.elements)

    def __repr__(self):
        return f"FSet({list(self.elements)} in {self.ctx!r})"


def _same_ctx(*sets: FSet) -> FieldCtx:
    ctx = sets[0].ctx
    for s in sets[1:]:
        if s.ctx != ctx:
            raise FieldError("sets belong to different fields")
    return ctx


def _pairs(A: FSet, B: FSet) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.meshgrid(A.array(), B.array(), indexing="ij")
    return a.ravel(), b.ravel()


# -- sumsets and friends ------------------------------------------------------

def sumset(A: FSet, B: FSet) -> FSet:
    ctx = _same_ctx(A, B)
    if not len(A) or not len(B):
        return FSet(ctx)
    a, b = _pairs(A, B)
    return FSet.from_array(ctx, ctx.vadd(a, b))


def difference_set(A: FSet, B: FSet) -> FSet:
    ctx = _same_ctx(A, B)
    if not len(A) or not len(B):
        return FSet(ctx)
    a, b = _pairs(A, B)
    return FSet.from_array(ctx, ctx.vsub(a, b))


def productset(A: FSet, B: FSet) -> FSet:
    ctx = _same_ctx(A, B)
    if not len(A) or not len(B):
        return FSet(ctx)
    a, b = _pairs(A, B)
    return FSet.from_array(ctx, ctx.vmul(a, b))


def quotient_set(A: FSet, B: FSet) -> FSet:
    """{a/b : a in A, b in B, b != 0}."""
    return productset(A, inverse_set(B))


def inverse_set(A: FSet) -> FSet:
    nz = A.nonzero()
    if not len(nz):
        return FSet(A.ctx)
    return FSet.from_array(A.ctx, A.ctx.vinv(nz.array()))


def iterated_sumset(sets: Sequence[FSet]) -> FSet:
    out = sets[0]
    for S in sets[1:]:
        out = sumset(out, S)
    return out


def dilate(A: FSet, lam: int) -> FSet:
    if lam == 0:
        raise ValueError("dilation by zero")
    if not len(A):
        return A
    return FSet.from_array(A.ctx, A.ctx.vmul(A.array(), lam))


def translate(A: FSet, s: int) -> FSet:
    if not len(A):
        return A
    return FSet.from_array(A.ctx, A.ctx.vadd(A.array(), s))


def fiber_set(A: FSet, s: int) -> FSet:
    """A ∩ (s - A)."""
    if not len(A):
        return A
    reflected = FSet.from_array(A.ctx, A.ctx.vsub(s, A.array()))
    return A & reflected


def ratio_set(A: FSet, B: FSet) -> FSet:
    """{(a1 - a2)/(b1 - b2) : a1, a2 in A, b1 != b2 in B}."""
    ctx = _same_ctx(A, B)
    if len(B) < 2:
        raise ValueError("ratio set needs |B| >= 2")
    if not len(A):
        return FSet(ctx)
    num = difference_set(A, A)
    den = difference_set(B, B).nonzero()
    return productset(num, inverse_set(den))


@dataclass(frozen=True)
class ClosureProbe:
    """Which of 1+R ⊆ R, B·R ⊆ R, B⁻¹·R ⊆ R hold for R = R(A, B)."""

    case1: bool
    case2: bool
    case3: bool
    ratio_size: int


def ratio_closure_probe(A: FSet, B: FSet) -> ClosureProbe:
    R = ratio_set(A, B)
    one = FSet(R.ctx, (1,))
    return ClosureProbe(
        case1=sumset(one, R).issubset(R),
        case2=productset(B, R).issubset(R),
        case3=productset(inverse_set(B), R).issubset(R),
        ratio_size=len(R),
    )


# -- representation functions and energies ----------------------------------

@dataclass(frozen=True)
class RepFunction:
    """Exact counts r(x); zero counts are not stored."""

    ctx: FieldCtx
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, x: int) -> int:
        return self.counts.get(x, 0)

    def support(self) -> list[int]:
        return sorted(self.counts)

    def sum_of_squares(self) -> int:
        return sum(c * c for c in self.counts.values())

    def dense(self) -> list[int]:
        return [self.counts.get(x, 0) for x in range(self.ctx.q)]


def _rep_from_values(ctx: FieldCtx, values: np.ndarray) -> RepFunction:
    keys, cnt = np.unique(values, return_counts=True)
    return RepFunction(ctx, {int(k): int(c) for k, c in zip(keys, cnt)})


def rep_add(A: FSet, B: FSet) -> RepFunction:
    ctx = _same_ctx(A, B)
    if not len(A) or not len(B):
        return RepFunction(ctx, {})
    a, b = _pairs(A, B)
    return _rep_from_values(ctx, ctx.vadd(a, b))


def rep_mul(A: FSet, B: FSet) -> RepFunction:
    ctx = _same_ctx(A, B)
    if not len(A) or not len(B):
        return RepFunction(ctx, {})
    a, b = _pairs(A, B)
    return _rep_from_values(ctx, ctx.vmul(a, b))


def convolve(f: RepFunction, g: RepFunction) -> RepFunction:
    """Additive convolution over F_q by a double loop over the supports."""
    ctx = f.ctx
    out: Counter[int] = Counter()
    for x, cx in f.counts.items():
        for y, cy in g.counts.items():
            out[ctx.add(x, y)] += cx * cy
    return RepFunction(ctx, dict(out))


@dataclass(frozen=True)
class EnergyReport:
    value: int
    method: str
    sizes: tuple[int, ...]


def additive_energy(A: FSet) -> EnergyReport:
    return EnergyReport(rep_add(A, A).sum_of_squares(), "convolution", (len(A),))


def mult_energy(A: FSet, B: FSet) -> EnergyReport:
    return EnergyReport(rep_mul(A, B).sum_of_squares(), "convolution", (len(A), len(B)))


def _q_brute_force(A: FSet, B: FSet, C: FSet, D: FSet) -> int:
    """Literal 8-tuple count; the independent oracle for Q."""
    ctx = A.ctx
    left = [
        ctx.add(ctx.mul(a, b), ctx.mul(c, d))
        for a, b, c, d in itertools.product(A, B, C, D)
    ]
    return sum(1 for u in left for v in left if u == v)


def bilinear_energy_Q(A: FSet, B: FSet, C: FSet, D: FSet, method: str = "convolution") -> EnergyReport:
    """Number of 8-tuples with a1 b1 + c1 d1 = a2 b2 + c2 d2."""
    _same_ctx(A, B, C, D)
    sizes = (len(A), len(B), len(C), len(D))
    if method == "convolution":
        value = convolve(rep_mul(A, B), rep_mul(C, D)).sum_of_squares()
    elif method == "brute_force":
        tuples = sizes[0] * sizes[1] * sizes[2] * sizes[3]
        if tuples * tuples > BRUTE_FORCE_LIMIT:
            raise BudgetError(f"brute-force Q over {tuples}^2 tuple pairs exceeds {BRUTE_FORCE_LIMIT}")
        value = _q_brute_force(A, B, C, D)
    else:
        raise ValueError(f"unknown method {method!r}")
    return EnergyReport(value, method, sizes)


def lemma22_count(A: FSet, method: str = "convolution") -> EnergyReport:
    """Solutions in A^8 of a1 a2 + a3 a4 = a1' a2' + a3' a4', i.e. Q(A, A, A, A)."""
    return bilinear_energy_Q(A, A, A, A, method)


# -- shifted intersections ----------------------------------------------------

@dataclass(frozen=True)
class ShiftReport:
    max: int
    argmax: int | None
    rhs_ratio_4th: Fraction   # (max / (|A|^(-1/2) |AB|^(5/4)))^4, exact
    rhs_ratio: float          # display only
    hypothesis_ratio: Fraction  # |A|^2 |AB| / p^2


def max_shifted_intersection(A: FSet, B: FSet) -> ShiftReport:
    """max over x != 0 of |A ∩ (B + x)|, i.e. of r_{A-B}(x)."""
    ctx = _same_ctx(A, B)
    r = rep_add(A, FSet.from_array(ctx, ctx.vneg(B.array())) if len(B) else B)
    best, arg = 0, None
    for x in sorted(r.counts):
        if x != 0 and r.counts[x] > best:
            best, arg = r.counts[x], x
    ab = len(productset(A, B))
    if ab == 0:
        ratio4 = Fraction(0)
    else:
        ratio4 = Fraction(best**4 * len(A) ** 2, ab**5)
    return ShiftReport(
        max=best,
        argmax=arg,
        rhs_ratio_4th=ratio4,
        rhs_ratio=float(ratio4) ** 0.25,
        hypothesis_ratio=Fraction(len(A) ** 2 * ab, ctx.q**2),
    )


# -- Plünnecke–Ruzsa ------------------------------------------------------------

@dataclass(frozen=True)
class PRReport:
    lhs: int
    rhs: Fraction
    ok: bool
    diff_lhs: int | None = None
    diff_rhs: Fraction | None = None
    diff_ok: bool | None = None


def pr_inequality_check(X: FSet, Bs: Sequence[FSet]) -> PRReport:
    """Check |B1+...+Bk| <= prod |X+Bi| / |X|^(k-1), and the difference form for k >= 2."""
    if not len(X):
        raise ValueError("X must be nonempty")
    if not Bs:
        raise ValueError("need at least one B")
    k = len(Bs)
    lhs = len(iterated_sumset(list(Bs)))
    num = 1
    for B in Bs:
        num *= len(sumset(X, B))
    rhs = Fraction(num, len(X) ** (k - 1))
    ok = lhs <= rhs
    if k < 2:
        return PRReport(lhs, rhs, ok)
    dl = len(difference_set(Bs[0], Bs[1]))
    dr = Fraction(len(sumset(X, Bs[0])) * len(sumset(X, Bs[1])), len(X))
    return PRReport(lhs, rhs, ok and dl <= dr, dl, dr, dl <= dr)
