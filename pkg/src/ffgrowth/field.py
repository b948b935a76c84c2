"""Exact arithmetic in F_p and F_{p^n}.

Elements are encoded as plain Python ints.  For a prime field the encoding is
the residue in ``[0, p)``.  For an extension field the coefficient vector
``(c_0, ..., c_{n-1})`` of ``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` is packed as
``sum(c_i * p**i)``, so the prime subfield is exactly ``range(p)`` and the
encoding order is the canonical element order used by :class:`FSet`.

Scalar operations live on :class:`FieldCtx` (``ctx.add(a, b)`` etc.); the
``v*`` variants act elementwise on numpy integer arrays.  :class:`FieldElement`
is a thin operator-overloading wrapper for interactive use.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 2**20


class FieldError(ValueError):
    """Invalid field construction or operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- polynomials over F_p, coefficient lists with constant term first --------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    """Remainder of f modulo g (g nonzero) over F_p."""
    r = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    dg = len(g) - 1
    lead_inv = pow(g[-1], -1, p)
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        factor = (r[-1] * lead_inv) % p
        for i, c in enumerate(g):
            r[shift + i] = (r[shift + i] - factor * c) % p
        _trim(r)
    return r


def poly_mulmod(f: Sequence[int], g: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                prod[i + j] = (prod[i + j] + a * b) % p
    return poly_mod(prod, m, p)


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    f = _trim([c % p for c in f])
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n, constant term compared first."""
    for low in itertools.product(range(p), repeat=n):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no monic irreducible of degree {n} over F_{p}")  # unreachable for prime p


class FieldCtx:
    """Arithmetic context for F_q, q = p**n.  Immutable after construction."""

    def __init__(self, p: int, n: int = 1, cap: int = DEFAULT_CAP):
        if not isinstance(p, int) or not is_prime(p) or p == 2:
            raise FieldError(f"p must be an odd prime, got {p!r}")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        if p**n > cap:
            raise FieldError(f"field size {p}^{n} exceeds cap {cap}")
        self.p = p
        self.n = n
        self.q = p**n
        self.cap = cap
        self.modulus = smallest_irreducible(p, n) if n > 1 else None
        self._weights = np.array([p**i for i in range(n)], dtype=np.int64)

    # identity and display
    def _key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.n == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.p}^{self.n}, modulus={list(self.modulus)})"

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    # encodings
    def vector(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_vector(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.n:
            coeffs = poly_mod(coeffs, self.modulus, self.p) if self.modulus else [sum(coeffs) % self.p]
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def element(self, value) -> "FieldElement":
        if isinstance(value, (tuple, list)):
            value = self.from_vector(value)
        else:
            value = int(value)
            if self.n == 1:
                value %= self.p
        self.check(value)
        return FieldElement(self, value)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not a canonical element of {self!r}")
        return a

    def elements(self) -> range:
        return range(self.q)

    # lazy tables for extension fields
    @functools.cached_property
    def _digits(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        cols = [(idx // self.p**i) % self.p for i in range(self.n)]
        return np.stack(cols, axis=1)

    def _mul_matrix(self, g: int) -> np.ndarray:
        """Matrix of multiplication by g acting on coefficient column vectors."""
        gv = list(self.vector(g))
        cols = []
        for i in range(self.n):
            basis = [0] * i + [1]
            cols.append(poly_mulmod(basis, gv, self.modulus, self.p) + [0] * self.n)
        return np.array([c[: self.n] for c in cols], dtype=np.int64).T

    @functools.cached_property
    def primitive_element(self) -> int:
        order = self.q - 1
        exps = [order // r for r in prime_factors(order)]
        for g in range(2, self.q):
            if all(self.pow(g, e) != 1 for e in exps):
                return g
        return 1  # q == 3 only reaches here if 2 fails, which it does not

    @functools.cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        order = self.q - 1
        exp = np.zeros(order, dtype=np.int64)
        exp[0] = 1
        filled, step = 1, self.primitive_element
        while filled < order:
            # exp[filled + k] = exp[k] * g^filled
            take = min(filled, order - filled)
            vecs = self._digits[exp[:take]]
            prod = (vecs @ self._mul_matrix(step).T) % self.p
            exp[filled:filled + take] = prod @ self._weights
            filled += take
            step = self._mul_poly(step, step)
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        return exp, log

    @functools.cached_property
    def _inv_table(self) -> np.ndarray:
        if self.n == 1:
            p = self.p
            inv = [0, 1] + [0] * (p - 2)
            for i in range(2, p):
                inv[i] = (-(p // i) * inv[p % i]) % p
            return np.array(inv, dtype=np.int64)
        exp, log = self._exp_log
        out = np.zeros(self.q, dtype=np.int64)
        out[1:] = exp[(-log[1:]) % (self.q - 1)]
        return out

    def _mul_poly(self, a: int, b: int) -> int:
        return self.from_vector(poly_mulmod(list(self.vector(a)), list(self.vector(b)), self.modulus, self.p))

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return self.from_vector([x + y for x, y in zip(self.vector(a), self.vector(b))])

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self.from_vector([-x for x in self.vector(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, -1, self.p)
        return int(self._inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.n == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def scalar(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    # vectorized arithmetic on int64 arrays of encodings
    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        d = self._digits
        return ((d[a] + d[b]) % self.p) @ self._weights

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return (-a) % self.p
        return ((-self._digits[a]) % self.p) @ self._weights

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a * b) % self.p
        exp, log = self._exp_log
        a, b = np.broadcast_arrays(a, b)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._inv_table[a]


@functools.lru_cache(maxsize=None)
def make_field(p: int, n: int = 1, cap: int = DEFAULT_CAP) -> FieldCtx:
    """Build (and cache) the context for F_{p^n}."""
    return FieldCtx(p, n, cap)


@dataclass(frozen=True)
class FieldElement:
    """Operator-friendly view of an encoded element; mixing contexts raises."""

    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldError("operands belong to different fields")
            return other.value
        return self.ctx.element(other).value

    def __add__(self, other):
        return FieldElement(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.ctx, self.ctx.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    @property
    def vector(self) -> tuple[int, ...]:
        return self.ctx.vector(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.ctx.n == 1:
            return f"{self.value} (mod {self.ctx.p})"
        return f"{self.vector} in F_{self.ctx.p}^{self.ctx.n}"


# -- subfields ----------------------------------------------------------------

@dataclass(frozen=True)
class SubfieldDescriptor:
    ctx: FieldCtx
    degree: int
    elements: tuple[int, ...]  # sorted encodings

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, a: int) -> bool:
        i = np.searchsorted(self.elements, a)
        return i < len(self.elements) and self.elements[i] == a


def _subfield_of_degree(ctx: FieldCtx, d: int) -> SubfieldDescriptor:
    if d == ctx.n:
        return SubfieldDescriptor(ctx, d, tuple(range(ctx.q)))
    if d == 1:
        return SubfieldDescriptor(ctx, 1, tuple(range(ctx.p)))
    exp, _ = ctx._exp_log
    step = (ctx.q - 1) // (ctx.p**d - 1)
    elems = np.concatenate([[0], exp[::step]])
    return SubfieldDescriptor(ctx, d, tuple(int(x) for x in np.sort(elems)))


def list_subfields(ctx: FieldCtx) -> list[SubfieldDescriptor]:
    """One descriptor per divisor d of n: the unique subfield of order p^d."""
    return [_subfield_of_degree(ctx, d) for d in divisors(ctx.n)]


def generated_subfield(B) -> SubfieldDescriptor:
    """Smallest subfield containing B, by closing B | {0, 1} under +, *, inverse."""
    ctx = B.ctx
    S = np.unique(np.concatenate([np.asarray(B.elements, dtype=np.int64), [0, 1]]))
    while True:
        a, b = np.meshgrid(S, S, indexing="ij")
        a, b = a.ravel(), b.ravel()
        nz = S[S != 0]
        grown = np.unique(np.concatenate([S, ctx.vadd(a, b), ctx.vmul(a, b), ctx.vinv(nz)]))
        if len(grown) == len(S):
            break
        S = grown
    size = len(S)
    degree = round(math.log(size, ctx.p))
    return SubfieldDescriptor(ctx, degree, tuple(int(x) for x in S))


@dataclass(frozen=True)
class SubfieldConditionReport:
    ok: bool
    worst_lambda: int | None
    worst_degree: int | None
    worst_count: int


def check_subfield_condition(A) -> SubfieldConditionReport:
    """Test |A ∩ λF| <= |F|^(1/2) for every proper subfield F and every λ != 0.

    λF = {0} ∪ λF*, so it suffices to bucket A∖{0} by cosets of F* in F_q*; the
    worst λ reported is the smallest-encoded member of the worst coset.
    """
    ctx = A.ctx
    if ctx.n == 1:
        return SubfieldConditionReport(True, None, None, 0)
    exp, log = ctx._exp_log
    elems = np.asarray(A.elements, dtype=np.int64)
    has_zero = int(len(elems) > 0 and elems[0] == 0)
    logs = log[elems[elems != 0]]
    best = None  # (count^2 / |F|, -degree, count, lambda)
    ok = True
    for d in divisors(ctx.n)[:-1]:
        fsize = ctx.p**d
        ncosets = (ctx.q - 1) // (fsize - 1)
        counts = np.bincount(logs % ncosets, minlength=ncosets) + has_zero
        c = int(counts.max())
        coset = int(np.argmax(counts))
        members = exp[np.arange(coset, ctx.q - 1, ncosets)]
        lam = int(members.min())
        if c * c > fsize:
            ok = False
        cand = (Fraction(c * c, fsize), -d, c, lam)
        if best is None or cand[:2] > best[:2]:
            best = cand
    return SubfieldConditionReport(ok, best[3], -best[1], best[2])
