"""SL_2(F_p): the restricted-entry set R(A), product sets, and collision statistics.

A matrix ((a, b), (c, d)) is keyed by the integer ((a p + b) p + c) p + d, so
sets of matrices are sorted int64 arrays.  Products with top-left entry t = 0
are kept as first-class members and tallied separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exact import exact_sum, exact_sum_squares, merge_counts
from .field import FieldCtx, FieldError
from .setalg import BudgetError, FSet, productset, sumset

DEFAULT_PAIR_BUDGET = 24**6


class PreconditionError(ValueError):
    """Input violates an operation's precondition (e.g. 0 in A where 0 is excluded)."""


def _require_prime(ctx: FieldCtx):
    if ctx.n != 1:
        raise FieldError("SL_2 routines need a prime field")
    if ctx.p**4 >= 2**62:
        raise FieldError("p too large for 4-tuple keys")


def _require_nonzero(A: FSet):
    if 0 in A:
        raise PreconditionError("0 must not belong to A here")


@dataclass(frozen=True)
class MatSL2:
    ctx: FieldCtx
    entries: tuple[int, int, int, int]

    def __post_init__(self):
        a, b, c, d = self.entries
        if (a * d - b * c) % self.ctx.p != 1:
            raise ValueError(f"determinant of {self.entries} is not 1 mod {self.ctx.p}")

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "MatSL2":
        return cls(ctx, (1, 0, 0, 1))

    @property
    def key(self) -> int:
        a, b, c, d = self.entries
        p = self.ctx.p
        return ((a * p + b) * p + c) * p + d

    def inverse(self) -> "MatSL2":
        a, b, c, d = self.entries
        p = self.ctx.p
        return MatSL2(self.ctx, (d, -b % p, -c % p, a))

    def __matmul__(self, other: "MatSL2") -> "MatSL2":
        return mat_mul(self, other)


def mat_mul(M1: MatSL2, M2: MatSL2) -> MatSL2:
    if M1.ctx != M2.ctx:
        raise FieldError("matrices over different fields")
    p = M1.ctx.p
    a, b, c, d = M1.entries
    e, f, g, h = M2.entries
    return MatSL2(M1.ctx, ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p))


def _decode(keys: np.ndarray, p: int) -> np.ndarray:
    out = np.empty((len(keys), 4), dtype=np.int64)
    k = keys.copy()
    for col in (3, 2, 1, 0):
        k, out[:, col] = np.divmod(k, p)
    return out


def _encode(a, b, c, d, p: int) -> np.ndarray:
    return ((a * p + b) * p + c) * p + d


@dataclass(frozen=True)
class MatSet:
    """Duplicate-free set of SL_2 matrices, as sorted int64 keys."""

    ctx: FieldCtx
    keys: np.ndarray

    @classmethod
    def of(cls, ctx: FieldCtx, mats) -> "MatSet":
        return cls(ctx, np.unique(np.array([m.key for m in mats], dtype=np.int64)))

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        for row in _decode(self.keys, self.ctx.p):
            yield MatSL2(self.ctx, tuple(int(v) for v in row))

    def __contains__(self, M: MatSL2) -> bool:
        i = np.searchsorted(self.keys, M.key)
        return i < len(self.keys) and self.keys[i] == M.key

    def entries(self) -> np.ndarray:
        return _decode(self.keys, self.ctx.p)

    def count_zero_t(self) -> int:
        return int(np.count_nonzero(self.keys < self.ctx.p**3))


def build_R(A: FSet) -> MatSet:
    """R(A): matrices of SL_2(F_p) with a11, a12, a21 in A."""
    ctx = A.ctx
    _require_prime(ctx)
    p = ctx.p
    a = A.array()
    parts = []
    nz = a[a != 0]
    if len(nz):
        a11, a12, a21 = np.meshgrid(nz, a, a, indexing="ij")
        a22 = ((1 + a12 * a21) % p) * ctx.vinv(a11) % p
        parts.append(_encode(a11, a12, a21, a22, p).ravel())
    if 0 in A:
        # a11 = 0 forces a12 a21 = -1 and leaves a22 free
        b, c = np.meshgrid(a, a, indexing="ij")
        ok = (b * c) % p == p - 1
        for x, y in zip(b[ok], c[ok]):
            parts.append(_encode(0, x, y, np.arange(p, dtype=np.int64), p))
    keys = np.unique(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
    return MatSet(ctx, keys)


def product_set(S1: MatSet, S2: MatSet, budget: int = DEFAULT_PAIR_BUDGET, chunk: int = 1 << 22) -> MatSet:
    """All distinct products M1 M2, M1 in S1, M2 in S2."""
    if S1.ctx != S2.ctx:
        raise FieldError("matrix sets over different fields")
    ctx = S1.ctx
    p = ctx.p
    if len(S1) * len(S2) > budget:
        raise BudgetError(f"{len(S1)}*{len(S2)} ordered pairs exceeds budget {budget}")
    if not len(S1) or not len(S2):
        return MatSet(ctx, np.zeros(0, dtype=np.int64))
    L, R = S1.entries(), S2.entries()
    e, f, g, h = (R[:, i][None, :] for i in range(4))
    rows = max(1, chunk // len(R))
    found = []
    for start in range(0, len(L), rows):
        blk = L[start:start + rows]
        a, b, c, d = (blk[:, i][:, None] for i in range(4))
        keys = _encode((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p, p)
        found.append(np.unique(keys))
    return MatSet(ctx, np.unique(np.concatenate(found)))


@dataclass(frozen=True)
class NuStats:
    """Collision statistics of the (t, α, β) parametrisation of M1 M2.

    ``keys``/``counts`` hold ν(t, α, β) for t != 0 with key (t p + α) p + β.
    """

    p: int
    keys: np.ndarray
    counts: np.ndarray
    zero_t_total: int
    T: int
    omega: dict[int, int]

    @property
    def nonzero_total(self) -> int:
        return exact_sum(self.counts)

    @property
    def distinct_nonzero(self) -> int:
        return len(self.keys)

    def nu(self, t: int, alpha: int, beta: int) -> int:
        k = (t * self.p + alpha) * self.p + beta
        i = np.searchsorted(self.keys, k)
        return int(self.counts[i]) if i < len(self.keys) and self.keys[i] == k else 0


def nu_statistics(A: FSet) -> NuStats:
    """ν(t, α, β) over A^6 computed through the system

        a11 b11 + a12 b21 = t,  (b12 t + a12)/b11 = α,  (a21 t + b21)/a11 = β.
    """
    ctx = A.ctx
    _require_prime(ctx)
    _require_nonzero(A)
    p = ctx.p
    a = A.array()
    inv = ctx.vinv(a) if len(a) else a
    # axes: a12, a21, b11, b12, b21 ; a11 fixed per chunk
    ax = lambda arr, i: arr.reshape([-1 if j == i else 1 for j in range(5)])
    a12, a21, b11, b12, b21 = (ax(a, i) for i in range(5))
    inv_b11 = ax(inv, 2)
    keys_l, counts_l = [], []
    zero_t = 0
    for a11, inv_a11 in zip(a, inv):
        t = (a11 * b11 + a12 * b21) % p
        alpha = ((b12 * t + a12) % p) * inv_b11 % p
        beta = ((a21 * t + b21) % p) * inv_a11 % p
        t, alpha, beta = np.broadcast_arrays(t, alpha, beta)
        key = ((t * p + alpha) * p + beta).ravel()
        nz = t.ravel() != 0
        zero_t += int(np.count_nonzero(~nz))
        k, c = np.unique(key[nz], return_counts=True)
        keys_l.append(k)
        counts_l.append(c)
    keys, counts = merge_counts(keys_l, counts_l)
    T = exact_sum_squares(counts)
    omega: dict[int, int] = {}
    if len(keys):
        tvals = keys // (p * p)
        starts = np.flatnonzero(np.concatenate([[True], tvals[1:] != tvals[:-1]]))
        ends = np.append(starts[1:], len(keys))
        for st, en in zip(starts, ends):
            omega[int(tvals[st])] = exact_sum_squares(counts[st:en])
    return NuStats(p, keys, counts, zero_t, T, omega)


@dataclass(frozen=True)
class CrossPath:
    product_size: int
    nonzero_triples: int
    zero_t_products: int
    ok: bool


def cross_path_identity(A: FSet, budget: int = DEFAULT_PAIR_BUDGET) -> CrossPath:
    """|R(A) R(A)| against (#(t, α, β) with ν > 0, t != 0) + (#products with t = 0)."""
    R = build_R(A)
    prod = product_set(R, R, budget)
    nu = nu_statistics(A)
    z = prod.count_zero_t()
    return CrossPath(len(prod), nu.distinct_nonzero, z, len(prod) == nu.distinct_nonzero + z)


@dataclass(frozen=True)
class Certificate:
    lhs: int
    rhs: Fraction | int
    ok: bool
    detail: dict


def cs_lower_bound_certificate(
    A: FSet, budget: int = DEFAULT_PAIR_BUDGET, prod: MatSet | None = None, nu: NuStats | None = None
) -> Certificate:
    """|R R|_{t≠0} · T >= (Σ_{t≠0} ν)^2.

    The left side comes from the matrix product set, T from the ν table, so the
    check also ties the two computation paths together.
    """
    _require_nonzero(A)
    if prod is None:
        R = build_R(A)
        prod = product_set(R, R, budget)
    if nu is None:
        nu = nu_statistics(A)
    lhs = len(prod) - prod.count_zero_t()
    total = nu.nonzero_total
    ok = lhs * nu.T >= total * total
    rhs = Fraction(total * total, nu.T) if nu.T else Fraction(0)
    return Certificate(lhs, rhs, ok, {"T": nu.T, "nonzero_total": total, "zero_t_total": nu.zero_t_total})


def containment_certificate(A: FSet, budget: int = DEFAULT_PAIR_BUDGET, prod: MatSet | None = None) -> Certificate:
    """|R(A) R(A)| >= |(AA+AA) \\ {0}| · |A|^2."""
    _require_nonzero(A)
    if prod is None:
        R = build_R(A)
        prod = product_set(R, R, budget)
    AA = productset(A, A)
    image = sumset(AA, AA).nonzero()
    rhs = len(image) * len(A) ** 2
    return Certificate(len(prod), rhs, len(prod) >= rhs, {"AA+AA\\0": len(image)})
