"""Finite fields F_{p^k} as polynomial residues over F_p."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import ContextMismatch, DivisionByZero, InvalidConfig
from .kernels import poly_mulmod

MAX_DEGREE = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_rem(a: list[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial b over F_p (low-to-high)."""
    a = [x % p for x in a]
    db = len(b) - 1
    for deg in range(len(a) - 1, db - 1, -1):
        c = a[deg]
        if c:
            base = deg - db
            for t in range(db + 1):
                a[base + t] = (a[base + t] - c * b[t]) % p
    return a[:db]


@lru_cache(maxsize=None)
def _is_irreducible(p: int, modulus: tuple[int, ...]) -> bool:
    k = len(modulus) - 1
    if k == 1:
        return True
    # a reducible polynomial has a monic factor of degree <= k // 2
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if any(_poly_rem(list(modulus), (*low, 1), p)):
                continue
            return False
    return True


@dataclass(frozen=True)
class GFContext:
    """The field F_p[x]/(modulus); modulus coefficients run low to high."""

    p: int
    degree: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if not is_prime(self.p):
            raise InvalidConfig(f"characteristic {self.p} is not prime")
        if not 1 <= self.degree <= MAX_DEGREE:
            raise InvalidConfig(f"degree must lie in 1..{MAX_DEGREE}, got {self.degree}")
        if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
            raise InvalidConfig("modulus must be monic of the stated degree")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise InvalidConfig("modulus coefficients must be reduced mod p")
        if not _is_irreducible(self.p, self.modulus):
            raise InvalidConfig(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    @classmethod
    def prime_field(cls, p: int) -> "GFContext":
        return cls(p, 1, (0, 1))

    @classmethod
    def from_json(cls, data: dict) -> "GFContext":
        try:
            return cls(int(data["p"]), int(data["degree"]), tuple(data["modulus"]))
        except (KeyError, TypeError) as exc:
            raise InvalidConfig(f"bad coefficient-field config: {exc}") from None

    def to_json(self) -> dict:
        return {"p": self.p, "degree": self.degree, "modulus": list(self.modulus)}

    @property
    def order(self) -> int:
        return self.p ** self.degree

    def __call__(self, value: int | Sequence[int]) -> "GFElement":
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.degree - 1)
        else:
            if len(value) > self.degree:
                raise ValueError("too many coefficients")
            coeffs = [int(c) % self.p for c in value]
            coeffs += [0] * (self.degree - len(coeffs))
        return GFElement(self, tuple(coeffs))

    def zero(self) -> "GFElement":
        return GFElement(self, (0,) * self.degree)

    def one(self) -> "GFElement":
        return self(1)

    def gen(self) -> "GFElement":
        """The class of x."""
        if self.degree == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def elements(self) -> Iterator["GFElement"]:
        for c in product(range(self.p), repeat=self.degree):
            yield GFElement(self, tuple(reversed(c)))


class GFElement:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: GFContext, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _check(self, other: "GFElement") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch("elements belong to different fields")

    def _coerce(self, other) -> "GFElement":
        if isinstance(other, int):
            return self.ctx(other)
        if isinstance(other, GFElement):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return GFElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return GFElement(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.ctx.p
        return GFElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if ctx.degree == 1:
            return GFElement(ctx, ((self.coeffs[0] * other.coeffs[0]) % ctx.p,))
        return GFElement(ctx, poly_mulmod(self.coeffs, other.coeffs, ctx.modulus, ctx.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GFElement":
        if not self:
            raise DivisionByZero("inverse of zero")
        return self ** (self.ctx.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, GFElement):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(str(c))
                else:
                    mono = "g" if i == 1 else f"g^{i}"
                    terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


def frobenius(a: GFElement, i: int) -> GFElement:
    """a^(p^i); the exponent i is read modulo the field degree."""
    if i < 0:
        raise ValueError("frobenius power must be nonnegative")
    for _ in range(i % a.ctx.degree):
        a = a ** a.ctx.p
    return a
