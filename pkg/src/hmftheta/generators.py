"""Seeded random weights and q-expansions for the property suites."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .exponents import Exponent, ExponentModel
from .gfq import GFElement
from .qexp import QExpansion
from .shape import FieldShape
from .weights import WeightVector


def random_weight(shape: FieldShape, rng: random.Random, lo: int = -6, hi: int = 12) -> WeightVector:
    return WeightVector(shape, [rng.randint(lo, hi) for _ in range(shape.d)])


def random_cone_weight(shape: FieldShape, rng: random.Random, top: int = 40) -> WeightVector:
    """A random point of the minimal cone, by rejection from sorted blocks.

    Inside a block the slots j >= 2 only need k_{j-1} <= k_j, so sorting a
    random draw per residue index satisfies those; the j = 1 constraints are
    then checked.
    """
    from .weights import in_min_cone

    while True:
        entries = []
        for P in shape.primes:
            for _ in range(P.f):
                entries.extend(sorted(rng.randint(0, top) for _ in range(P.e)))
        k = WeightVector(shape, entries)
        if in_min_cone(k):
            return k


def random_nonzero(field, rng: random.Random) -> GFElement:
    while True:
        c = field([rng.randrange(field.p) for _ in range(field.degree)])
        if c:
            return c


@lru_cache(maxsize=64)
def _window(model: ExponentModel, bound: Fraction) -> tuple[Exponent, ...]:
    return tuple(sorted(model.window(bound)))


def window(model: ExponentModel, bound: Fraction) -> tuple[Exponent, ...]:
    return _window(model, Fraction(bound))


def random_expansion(
    model: ExponentModel,
    rng: random.Random,
    bound: Fraction,
    nterms: int = 8,
    k: WeightVector | None = None,
    l: WeightVector | None = None,
    constant: bool = True,
    admissible: Callable[[Exponent], bool] | None = None,
    max_trace: Fraction | None = None,
) -> QExpansion:
    """Random expansion with up to ``nterms`` terms drawn from the window.

    ``admissible`` filters candidate exponents; ``max_trace`` caps their trace
    below the bound.
    """
    bound = Fraction(bound)
    cap = bound if max_trace is None else min(bound, Fraction(max_trace))
    pool = [m for m in window(model, bound) if model.trace(m) <= cap]
    if admissible is not None:
        pool = [m for m in pool if admissible(m)]
    chosen = rng.sample(pool, min(nterms, len(pool)))
    terms = {m: random_nonzero(model.field, rng) for m in chosen}
    field = model.field
    const = field([rng.randrange(field.p) for _ in range(field.degree)]) if constant else None
    shape = model.shape
    k = random_weight(shape, rng) if k is None else k
    l = random_weight(shape, rng) if l is None else l
    return QExpansion(model, k, l, terms, const, bound)
