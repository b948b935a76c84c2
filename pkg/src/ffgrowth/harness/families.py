"""Deterministic set families used as experiment inputs."""

from __future__ import annotations

from ..field import FieldCtx, list_subfields, prime_factors
from ..setalg import FSet
from .rng import SplitMix64

FAMILIES = (
    "uniform_random",
    "interval",
    "arithmetic_progression",
    "geometric_progression",
    "multiplicative_subgroup",
    "subfield_coset",
)

_MAX_TRIES = 10_000


class FamilyError(ValueError):
    """Family and size cannot be combined over this field."""


def _nonzero(rng: SplitMix64, ctx: FieldCtx) -> int:
    return 1 + rng.below(ctx.q - 1)


def mult_order(ctx: FieldCtx, g: int) -> int:
    order = ctx.q - 1
    for r in prime_factors(ctx.q - 1):
        while order % r == 0 and ctx.pow(g, order // r) == 1:
            order //= r
    return order


def generate_set(family: str, size: int, seed: int, ctx: FieldCtx, exclude_zero: bool = True) -> FSet:
    if size < 0:
        raise FamilyError("size must be nonnegative")
    room = ctx.q - 1 if exclude_zero else ctx.q
    if size > room:
        raise FamilyError(f"size {size} exceeds the {room} available elements")
    rng = SplitMix64(seed)
    if size == 0:
        return FSet(ctx)

    if family == "uniform_random":
        pool = list(range(1, ctx.q)) if exclude_zero else list(range(ctx.q))
        return FSet(ctx, tuple(rng.sample(pool, size)))

    if family == "interval":
        # consecutive encodings; over an extension field this walks the encoding order
        start = 1 if exclude_zero else 0
        return FSet(ctx, tuple(range(start, start + size)))

    if family == "arithmetic_progression":
        if size > ctx.p or (exclude_zero and size == ctx.p):
            raise FamilyError("progression longer than the characteristic")
        for _ in range(_MAX_TRIES):
            a, d = rng.below(ctx.q), _nonzero(rng, ctx)
            terms, cur = [], a
            for _ in range(size):
                terms.append(cur)
                cur = ctx.add(cur, d)
            if not (exclude_zero and 0 in terms):
                return FSet(ctx, tuple(terms))
        raise FamilyError("could not place a zero-free progression")

    if family == "geometric_progression":
        if size > ctx.q - 1:
            raise FamilyError("geometric progression longer than the multiplicative group")
        for _ in range(_MAX_TRIES):
            g = _nonzero(rng, ctx)
            if mult_order(ctx, g) >= size:
                break
        else:
            raise FamilyError("no ratio of sufficient order found")
        a = _nonzero(rng, ctx)
        terms, cur = [], a
        for _ in range(size):
            terms.append(cur)
            cur = ctx.mul(cur, g)
        return FSet(ctx, tuple(terms))

    if family == "multiplicative_subgroup":
        if (ctx.q - 1) % size:
            raise FamilyError(f"subgroup order {size} does not divide {ctx.q - 1}")
        h = ctx.pow(ctx.primitive_element, (ctx.q - 1) // size)
        terms, cur = [], 1
        for _ in range(size):
            terms.append(cur)
            cur = ctx.mul(cur, h)
        return FSet(ctx, tuple(terms))

    if family == "subfield_coset":
        for sub in list_subfields(ctx):
            want = sub.size - 1 if exclude_zero else sub.size
            if want == size:
                lam = _nonzero(rng, ctx)
                elems = [ctx.mul(lam, a) for a in sub.elements if not (exclude_zero and a == 0)]
                return FSet(ctx, tuple(elems))
        raise FamilyError(f"no subfield of F_{ctx.q} has a coset of size {size}")

    raise FamilyError(f"unknown family {family!r}")

