"""Exact point-line (F_p^2) and point-plane (F_p^3) incidence counting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .setalg import FSet, rep_mul


def _canonical(coeffs: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Scale so the first nonzero coefficient is 1."""
    for c in coeffs:
        if c % p:
            inv = pow(c, -1, p)
            return tuple(v * inv % p for v in coeffs)
    raise ValueError("degenerate coefficient vector")


@dataclass(frozen=True)
class PointSet:
    p: int
    dim: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = sorted({tuple(int(c) % self.p for c in pt) for pt in self.points})
        if any(len(pt) != self.dim for pt in pts):
            raise ValueError(f"points must have {self.dim} coordinates")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def grid(cls, *sets: FSet) -> "PointSet":
        p = sets[0].ctx.p
        axes = np.meshgrid(*[s.array() for s in sets], indexing="ij")
        pts = np.stack([ax.ravel() for ax in axes], axis=1)
        return cls(p, len(sets), tuple(map(tuple, pts.tolist())))

    def __len__(self):
        return len(self.points)

    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64).reshape(-1, self.dim)


@dataclass(frozen=True)
class FlatSet:
    """Lines u X + v Y = w (dim 2) or planes u X + v Y + w Z = c (dim 3).

    Each flat is stored as its coefficient tuple followed by the right-hand
    side, scaled so that the first nonzero coefficient is 1.
    """

    p: int
    dim: int
    flats: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = set()
        for f in self.flats:
            if len(f) != self.dim + 1:
                raise ValueError(f"flats need {self.dim + 1} entries")
            f = tuple(int(c) % self.p for c in f)
            if not any(f[: self.dim]):
                raise ValueError("normal vector must be nonzero")
            canon.add(_canonical(f, self.p))
        object.__setattr__(self, "flats", tuple(sorted(canon)))

    def __len__(self):
        return len(self.flats)

    def array(self) -> np.ndarray:
        return np.asarray(self.flats, dtype=np.int64).reshape(-1, self.dim + 1)


def LineSet(p: int, lines: Iterable[tuple[int, int, int]]) -> FlatSet:
    return FlatSet(p, 2, tuple(lines))


def PlaneSet(p: int, planes: Iterable[tuple[int, int, int, int]]) -> FlatSet:
    return FlatSet(p, 3, tuple(planes))


def incidence_matrix(P: PointSet, L: FlatSet) -> np.ndarray:
    if P.dim != L.dim or P.p != L.p:
        raise ValueError("dimension or field mismatch between points and flats")
    pts, fl = P.array(), L.array()
    if not len(pts) or not len(fl):
        return np.zeros((len(pts), len(fl)), dtype=bool)
    lhs = (pts @ fl[:, : P.dim].T) % P.p
    return lhs == fl[:, P.dim][None, :]


def count_incidences(P: PointSet, L: FlatSet, chunk: int = 1 << 22) -> int:
    if P.dim != L.dim or P.p != L.p:
        raise ValueError("dimension or field mismatch between points and flats")
    pts, fl = P.array(), L.array()
    if not len(pts) or not len(fl):
        return 0
    normals, rhs = fl[:, : P.dim].T, fl[:, P.dim][None, :]
    rows = max(1, chunk // len(fl))
    total = 0
    for start in range(0, len(pts), rows):
        total += int(np.count_nonzero((pts[start:start + rows] @ normals) % P.p == rhs))
    return total


def _canonical_rows(d: np.ndarray, inv: np.ndarray, p: int) -> np.ndarray:
    first = np.argmax(d != 0, axis=1)
    lead = d[np.arange(len(d)), first]
    return d * inv[lead][:, None] % p


def max_collinear(P: PointSet) -> int:
    """Largest number of points of P on one line, by bucketing directions from each point."""
    pts = P.array()
    m = len(pts)
    if m < 3:
        return m
    inv = np.array([0] + [pow(v, -1, P.p) for v in range(1, P.p)], dtype=np.int64)
    best = 2
    for i in range(m - 1):
        d = (pts[i + 1:] - pts[i]) % P.p
        canon = _canonical_rows(d, inv, P.p)
        key = np.zeros(len(canon), dtype=np.int64)
        for col in range(P.dim):
            key = key * P.p + canon[:, col]
        _, cnt = np.unique(key, return_counts=True)
        best = max(best, int(cnt.max()) + 1)
    return best


@dataclass(frozen=True)
class SdzReport:
    I: int
    bound_main: float
    ok: bool          # I <= |A|^(3/4) |B|^(1/2) |L|^(3/4) + |L|, decided exactly
    hyp1: bool        # |A| |B|^2 <= |L|^3
    hyp2_ratio: Fraction  # |A| |L| / p^2
    ratio: float


def sdz_bound_report(A: FSet, B: FSet, L: FlatSet) -> SdzReport:
    """Incidences between the grid A x B and lines L against the point-line bound."""
    a, b, l = len(A), len(B), len(L)
    if a > b:
        raise ValueError("order the grid so that |A| <= |B|")
    I = count_incidences(PointSet.grid(A, B), L)
    excess = I - l
    ok = excess <= 0 or excess**4 <= a**3 * b**2 * l**3
    bound = a**0.75 * b**0.5 * l**0.75 + l
    return SdzReport(
        I=I,
        bound_main=bound,
        ok=ok,
        hyp1=a * b * b <= l**3,
        hyp2_ratio=Fraction(a * l, A.ctx.p**2),
        ratio=I / bound if bound else 0.0,
    )


@dataclass(frozen=True)
class RudnevReport:
    I: int
    k: int
    bound: float
    ok: bool  # I <= |P||Π|/p + |P|^(1/2)|Π| + k|P|, decided exactly
    ratio: float


def rudnev_bound_report(P: PointSet, planes: FlatSet) -> RudnevReport:
    m, n = len(P), len(planes)
    if m > n:
        raise ValueError("need |P| <= |Π|")
    I = count_incidences(P, planes)
    k = max_collinear(P)
    rest = I - Fraction(m * n, P.p) - k * m
    ok = rest <= 0 or rest * rest <= m * n * n
    bound = m * n / P.p + math.sqrt(m) * n + k * m
    return RudnevReport(I, k, bound, ok, I / bound if bound else 0.0)


@dataclass(frozen=True)
class QConfiguration:
    """Points (a, d, λ) and planes b X - c Y + Z = μ with their r_CD / r_AB weights."""

    points: PointSet
    planes: FlatSet
    point_weight: dict[tuple[int, ...], int]
    plane_weight: dict[tuple[int, ...], int]


def q_configuration(A: FSet, B: FSet, C: FSet, D: FSet) -> QConfiguration:
    p = A.ctx.p
    r_cd, r_ab = rep_mul(C, D), rep_mul(A, B)
    pw = {(a, d, lam): r_cd[lam] for a in A for d in D for lam in r_cd.counts}
    raw = {(b, -c % p, 1, mu): r_ab[mu] for b in B for c in C for mu in r_ab.counts}
    planes = PlaneSet(p, raw)
    qw = {_canonical(k, p): v for k, v in raw.items()}
    return QConfiguration(PointSet(p, 3, tuple(pw)), planes, pw, qw)


def weighted_incidences(cfg: QConfiguration) -> int:
    """Σ over incident (point, plane) of r_CD(λ) r_AB(μ); equals Q(A, B, C, D)."""
    inc = incidence_matrix(cfg.points, cfg.planes)
    pw = np.array([cfg.point_weight[pt] for pt in cfg.points.points], dtype=object)
    qw = np.array([cfg.plane_weight[f] for f in cfg.planes.flats], dtype=object)
    total = 0
    for i, j in zip(*np.nonzero(inc)):
        total += pw[i] * qw[j]
    return int(total)
