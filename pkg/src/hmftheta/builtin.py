"""Named exponent models used by the verification suites and the CLI."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exponents import ExponentModel, model_from_json

# name -> (config, default truncation bound)
BUILTIN_MODELS: dict[str, tuple[dict, Fraction]] = {
    # 3 is inert in Q(sqrt 2); sqrt 2 -> g with g^2 = 2 in F_9
    "d2-inert3": (
        {
            "kind": "quadratic",
            "D": 2,
            "field": {"p": 3, "degree": 2, "modulus": [1, 0, 1]},
            "primes": {"P": {"pi": [3, 0], "e": 1, "f": 2, "residue_gen_image": [0, 1]}},
        },
        Fraction(60),
    ),
    # 2 = (2 + sqrt 2)^2 / (3 + 2 sqrt 2)
    "d2-ramified2": (
        {
            "kind": "quadratic",
            "D": 2,
            "field": {"p": 2, "degree": 2, "modulus": [1, 1, 1]},
            "primes": {"P": {"pi": [2, 1], "e": 2, "f": 1, "residue_gen_image": [0]}},
        },
        Fraction(40),
    ),
    # w = (1 + sqrt 5)/2, pi = 2 + w of norm 5
    "d5-ramified5": (
        {
            "kind": "quadratic",
            "D": 5,
            "field": {"p": 5, "degree": 1, "modulus": [0, 1]},
            "primes": {"P": {"pi": [2, 1], "e": 2, "f": 1, "residue_gen_image": [3]}},
        },
        Fraction(60),
    ),
    # 7 = (3 + sqrt 2)(3 - sqrt 2)
    "d2-split7": (
        {
            "kind": "quadratic",
            "D": 2,
            "field": {"p": 7, "degree": 1, "modulus": [0, 1]},
            "primes": {
                "P": {"pi": [3, 1], "e": 1, "f": 1, "residue_gen_image": [4]},
                "Q": {"pi": [3, -1], "e": 1, "f": 1, "residue_gen_image": [3]},
            },
        },
        Fraction(80),
    ),
    "synthetic-split": (
        {
            "kind": "synthetic",
            "rank": 2,
            "field": {"p": 5, "degree": 1, "modulus": [0, 1]},
            "positivity": [[1, 0], [0, 1]],
            "primes": {
                "P": {"pi": [[5, 0], [0, 1]], "e": 1, "f": 1, "residue_images": [[1], [0]]},
                "Q": {"pi": [[1, 0], [0, 5]], "e": 1, "f": 1, "residue_images": [[0], [1]]},
            },
        },
        Fraction(40),
    ),
    # e = 2, f = 2 over 3: pi^2 = 3 on each plane; residue x + z g in F_9
    "synthetic-e2f2": (
        {
            "kind": "synthetic",
            "rank": 4,
            "field": {"p": 3, "degree": 2, "modulus": [1, 0, 1]},
            "positivity": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            "primes": {
                "P": {
                    "pi": [[0, 3, 0, 0], [1, 0, 0, 0], [0, 0, 0, 3], [0, 0, 1, 0]],
                    "e": 2,
                    "f": 2,
                    "residue_images": [[1], [0], [0, 1], [0]],
                },
            },
        },
        Fraction(24),
    ),
}


@lru_cache(maxsize=None)
def builtin_model(name: str) -> ExponentModel:
    try:
        config, _ = BUILTIN_MODELS[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; known: {', '.join(BUILTIN_MODELS)}") from None
    return model_from_json(config, name=name)


def default_bound(name: str) -> Fraction:
    return BUILTIN_MODELS[name][1]
