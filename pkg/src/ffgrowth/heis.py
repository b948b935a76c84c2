"""Heisenberg groups H_n(F_p), cube sets, and the 16-tuple collision count.

[x, y, z] is the unitriangular matrix with first row (1, x, z), middle block
(0, I_n, y^t) and last row (0, 0, 1).  Multiplying two such matrices gives

    [x, y, z] · [x', y', z'] = [x + x', y + y', z + z' + x·y'].

A product of two cube elements therefore splits into a part depending on
(x, y, x', y') and an independent z + z' shift, which is how product sets of
cubes with a nontrivial z-set are counted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._exact import exact_sum_squares, merge_counts
from .field import FieldCtx, FieldError
from .setalg import (
    BudgetError,
    FSet,
    bilinear_energy_Q,
    convolve,
    fiber_set,
    productset,
    rep_mul,
    sumset,
)

DEFAULT_PAIR_BUDGET = 10**9
DIRECT_BUDGET = 10**8  # left tuples |A|^8 for the collision count


@dataclass(frozen=True)
class HeisElem:
    ctx: FieldCtx
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: int

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have the same length")

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "HeisElem":
        return cls(ctx, (0,) * n, (0,) * n, 0)

    def inverse(self) -> "HeisElem":
        p = self.ctx.p
        dot = sum(a * b for a, b in zip(self.x, self.y))
        return HeisElem(self.ctx, tuple(-a % p for a in self.x), tuple(-b % p for b in self.y), (-self.z + dot) % p)

    def __mul__(self, other: "HeisElem") -> "HeisElem":
        return heis_mul(self, other)

    def to_matrix(self) -> np.ndarray:
        n = self.n
        M = np.eye(n + 2, dtype=np.int64)
        M[0, 1:n + 1] = self.x
        M[0, n + 1] = self.z
        M[1:n + 1, n + 1] = self.y
        return M

    @classmethod
    def from_matrix(cls, ctx: FieldCtx, M) -> "HeisElem":
        M = np.asarray(M) % ctx.p
        n = M.shape[0] - 2
        return cls(ctx, tuple(int(v) for v in M[0, 1:n + 1]), tuple(int(v) for v in M[1:n + 1, n + 1]), int(M[0, n + 1]))


def heis_mul(g: HeisElem, h: HeisElem) -> HeisElem:
    if g.ctx != h.ctx:
        raise FieldError("elements over different fields")
    if g.n != h.n:
        raise ValueError(f"degree mismatch: {g.n} vs {h.n}")
    p = g.ctx.p
    dot = sum(a * b for a, b in zip(g.x, h.y))
    return HeisElem(
        g.ctx,
        tuple((a + b) % p for a, b in zip(g.x, h.x)),
        tuple((a + b) % p for a, b in zip(g.y, h.y)),
        (g.z + h.z + dot) % p,
    )


@dataclass(frozen=True)
class HeisCube:
    """[A^n, B^n, C]; pass C = None for the z = 0 cube."""

    A: FSet
    B: FSet
    C: FSet | None = None
    n: int = 1

    def __post_init__(self):
        if self.A.ctx.n != 1:
            raise FieldError("Heisenberg cubes live over a prime field")
        if self.C is None:
            object.__setattr__(self, "C", FSet(self.A.ctx, (0,)))

    @property
    def ctx(self) -> FieldCtx:
        return self.A.ctx

    def __len__(self):
        return len(self.A) ** self.n * len(self.B) ** self.n * len(self.C)

    def __iter__(self):
        for x in itertools.product(self.A, repeat=self.n):
            for y in itertools.product(self.B, repeat=self.n):
                for z in self.C:
                    yield HeisElem(self.ctx, x, y, z)


def _grid(S: FSet, n: int) -> np.ndarray:
    """All n-tuples over S as a (|S|^n, n) array."""
    if n == 0 or not len(S):
        return np.zeros((0 if n else 1, n), dtype=np.int64)
    return np.array(list(itertools.product(S.elements, repeat=n)), dtype=np.int64).reshape(-1, n)


@dataclass(frozen=True)
class CubeProduct:
    ctx: FieldCtx
    n: int
    keys: np.ndarray  # sorted; key = ((u, v) packed base p) * p + z

    @property
    def size(self) -> int:
        return len(self.keys)

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        p, n = self.ctx.p, self.n
        for k in self.keys:
            k = int(k)
            k, z = divmod(k, p)
            digits = []
            for _ in range(2 * n):
                k, d = divmod(k, p)
                digits.append(d)
            digits.reverse()
            yield HeisElem(self.ctx, tuple(digits[:n]), tuple(digits[n:]), z)

    def key_of(self, g: HeisElem) -> int:
        k = 0
        for d in g.x + g.y:
            k = k * self.ctx.p + d
        return k * self.ctx.p + g.z


def cube_product_set(K1: HeisCube, K2: HeisCube, budget: int = DEFAULT_PAIR_BUDGET) -> CubeProduct:
    """Distinct products g h with g in K1, h in K2."""
    ctx = K1.ctx
    if K2.ctx != ctx:
        raise FieldError("cubes over different fields")
    if K1.n != K2.n:
        raise ValueError("degree mismatch")
    n, p = K1.n, ctx.p
    if p ** (2 * n + 1) >= 2**62:
        raise FieldError("p^(2n+1) too large for packed keys")
    X1, Y1, X2, Y2 = _grid(K1.A, n), _grid(K1.B, n), _grid(K2.A, n), _grid(K2.B, n)
    if len(X1) * len(Y1) * len(X2) * len(Y2) > budget:
        raise BudgetError("cube product exceeds pair budget")
    shifts = sumset(K1.C, K2.C).array()
    if min(len(X1), len(Y1), len(X2), len(Y2), len(shifts)) == 0:
        return CubeProduct(ctx, n, np.zeros(0, dtype=np.int64))

    # per x in X1: grid over (y, x', y')
    yy = (Y1[:, None, None, :] + Y2[None, None, :, :]) % p  # (|Y1|, 1, |Y2|, n)
    found = []
    for x in X1:
        u = (x[None, None, None, :] + X2[None, :, None, :]) % p          # (1, |X2|, 1, n)
        w = (Y2[None, None, :, :] * x).sum(axis=-1) % p                     # (1, 1, |Y2|)
        u, v = np.broadcast_arrays(u, yy)
        key = np.zeros(u.shape[:-1], dtype=np.int64)
        for i in range(n):
            key = key * p + u[..., i]
        for i in range(n):
            key = key * p + v[..., i]
        key = key * p + np.broadcast_to(w, key.shape)
        found.append(np.unique(key))
    base = np.unique(np.concatenate(found))
    if len(shifts) == 1 and shifts[0] == 0:
        return CubeProduct(ctx, n, base)
    prefix, z = np.divmod(base, p)
    shifted = [prefix * p + (z + s) % p for s in shifts]
    return CubeProduct(ctx, n, np.unique(np.concatenate(shifted)))


# -- the 16-tuple collision count N for [A^2, A^2, 0] --------------------------

@dataclass(frozen=True)
class CollisionReport:
    N: int
    method: str
    product_set_size: int | None = None


def collision_count_direct(A: FSet, budget: int = DIRECT_BUDGET) -> CollisionReport:
    """N by hashing the 8 left coordinates on the key
    (x1+z1, x2+z2, y1+t1, y2+t2, x1 t1 + x2 t2) and summing squared bucket sizes.
    """
    ctx = A.ctx
    if ctx.n != 1:
        raise FieldError("prime field required")
    p = ctx.p
    m = len(A)
    if m**8 > budget:
        raise BudgetError(f"|A|^8 = {m**8} exceeds direct-count budget {budget}")
    if m == 0:
        return CollisionReport(0, "direct", 0)
    a = A.array()
    # fix (x1, x2); grid over (z1, z2, y1, y2, t1, t2)
    sh = lambda i: a.reshape([-1 if j == i else 1 for j in range(6)])
    z1, z2, y1, y2, t1, t2 = (sh(i) for i in range(6))
    keys_l, counts_l = [], []
    for x1 in a:
        for x2 in a:
            k = (x1 + z1) % p
            k = k * p + (x2 + z2) % p
            k = k * p + (y1 + t1) % p
            k = k * p + (y2 + t2) % p
            k = k * p + (x1 * t1 + x2 * t2) % p
            kk, cc = np.unique(np.broadcast_to(k, (m,) * 6).ravel(), return_counts=True)
            keys_l.append(kk)
            counts_l.append(cc)
    keys, counts = merge_counts(keys_l, counts_l)
    return CollisionReport(exact_sum_squares(counts), "direct", len(keys))


def collision_count_fiber(A: FSet) -> CollisionReport:
    """N = Σ over s1, s2, s3, s4 in A+A of Q(A_{s1}, A_{s3}, A_{s2}, A_{s4}).

    With x_i + z_i = s_i and y_i + t_i = s_{i+2}, the free variables are
    x1, x1' in A_{s1}, x2, x2' in A_{s2}, t1, t1' in A_{s3}, t2, t2' in A_{s4},
    constrained by x1 t1 + x2 t2 = x1' t1' + x2' t2'.  So x1 pairs with t1
    (fibers s1, s3) and x2 with t2 (fibers s2, s4) inside the bilinear form.
    """
    sums = sumset(A, A)
    fibers = {s: fiber_set(A, s) for s in sums}
    # r_{A_s A_s'} for every ordered pair of fibers
    reps = [rep_mul(fibers[s], fibers[s2]) for s in sums for s2 in sums]
    reps = [r for r in reps if r.counts]
    total = 0
    for r13 in reps:
        for r24 in reps:
            total += convolve(r13, r24).sum_of_squares()
    return CollisionReport(total, "fiber_decomposition")


def fiber_term(A: FSet, s1: int, s2: int, s3: int, s4: int) -> int:
    """Single summand Q(A_{s1}, A_{s3}, A_{s2}, A_{s4}) of the fiber decomposition."""
    f = lambda s: fiber_set(A, s)
    return bilinear_energy_Q(f(s1), f(s3), f(s2), f(s4)).value


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class HeisCertificate:
    lhs: int
    rhs: int
    ok: bool
    detail: dict = field(default_factory=dict)


def _zero_cube_square(A: FSet, budget: int) -> CubeProduct:
    K = HeisCube(A, A, None, 2)
    return cube_product_set(K, K, budget)


def cs_certificate_heis(
    A: FSet, budget: int = DEFAULT_PAIR_BUDGET, size: int | None = None, N: int | None = None
) -> HeisCertificate:
    """|[A^2, A^2, 0]^2| · N >= |A|^16."""
    if size is None:
        size = _zero_cube_square(A, budget).size
    if N is None:
        N = collision_count_direct(A).N
    rhs = len(A) ** 16
    return HeisCertificate(size, rhs, size * N >= rhs, {"N": N})


def bilinear_image(A: FSet) -> FSet:
    """{x1 t1 + x2 t2 : x1, t1, x2, t2 in A} by direct enumeration."""
    ctx = A.ctx
    vals = {ctx.add(ctx.mul(x1, t1), ctx.mul(x2, t2)) for x1, t1, x2, t2 in itertools.product(A, repeat=4)}
    return FSet(ctx, tuple(vals))


def bilinear_image_certificate(A: FSet, budget: int = DEFAULT_PAIR_BUDGET, size: int | None = None) -> HeisCertificate:
    """|[A^2, A^2, 0]^2| >= |A|^4 · |{x1 t1 + x2 t2}|."""
    if size is None:
        size = _zero_cube_square(A, budget).size
    image = bilinear_image(A)
    AA = productset(A, A)
    rhs = len(A) ** 4 * len(image)
    return HeisCertificate(size, rhs, size >= rhs, {"image": len(image), "image_is_AA+AA": image == sumset(AA, AA)})


def thm4_certificate(A: FSet, budget: int = DEFAULT_PAIR_BUDGET) -> HeisCertificate:
    """|[A^2, A^2, A]^2| >= |A|^4 · |AA+AA+A+A|."""
    K = HeisCube(A, A, A, 2)
    size = cube_product_set(K, K, budget).size
    AA = productset(A, A)
    target = sumset(sumset(AA, AA), sumset(A, A))
    rhs = len(A) ** 4 * len(target)
    return HeisCertificate(size, rhs, size >= rhs, {"AA+AA+A+A": len(target)})


def hh_degree1_quantities(A: FSet, budget: int = DEFAULT_PAIR_BUDGET) -> dict:
    """|[A, A, 0]^2| and the benchmark growth rates it is measured against."""
    p = A.ctx.p
    m = len(A)
    K = HeisCube(A, A, None, 1)
    size = cube_product_set(K, K, budget).size
    sA, pA = len(sumset(A, A)), len(productset(A, A))
    AA = productset(A, A)
    aa_aa = len(sumset(AA, AA))
    # constant-1: |A|^2 |AA| always; |A|^2 |A+A| needs 0 not in A
    floor = m * m * (max(sA, pA) if 0 not in A else pA)

    def ratio(value, bench):
        return value / bench if bench else float("nan")

    benches = {
        "hh_large": min(math.sqrt(p) * m**2.5, m**4 / math.sqrt(p)) if m else 0.0,
        "hh_small": m**3.5,
        "subfield_free": m ** (3 + 1 / 11),
    }
    return {
        "size": size,
        "sumset": sA,
        "productset": pA,
        "AA+AA": aa_aa,
        "max_sum_prod": max(sA, pA),
        "certificate_rhs": floor,
        "certificate_ok": size >= floor,
        "regime_large": m * m >= p,  # hypothesis |A| >= p^(1/2)
        "regime_small": m**3 <= p * p,  # hypothesis |A| <= p^(2/3)
        "ratios": {k: ratio(size, v) for k, v in benches.items()}
        | {"max_sum_prod": ratio(max(sA, pA), m ** (12 / 11)), "AA+AA": ratio(aa_aa, m ** 1.2)},
    }
