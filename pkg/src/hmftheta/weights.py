"""The weight lattice Z^Sigma and its combinatorics.

Every function takes weights as :class:`WeightVector`, an immutable integer
vector indexed by the canonical order of ``shape.enumerate_sigma()``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, lcm
from typing import Iterable, Sequence

from . import intlin
from .errors import NonDivisibleWeight, WeightMismatch
from .kernels import cone_box_search
from .shape import FieldShape, Tau, ThetaIndex


class WeightVector:
    __slots__ = ("shape", "entries")

    def __init__(self, shape: FieldShape, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if len(entries) != shape.d:
            raise WeightMismatch(f"expected {shape.d} entries, got {len(entries)}")
        self.shape = shape
        self.entries = entries

    @classmethod
    def zero(cls, shape: FieldShape) -> "WeightVector":
        return cls(shape, (0,) * shape.d)

    @classmethod
    def unit(cls, shape: FieldShape, theta: ThetaIndex) -> "WeightVector":
        v = [0] * shape.d
        v[shape.index(theta)] = 1
        return cls(shape, v)

    def __getitem__(self, key: int | ThetaIndex) -> int:
        if isinstance(key, ThetaIndex):
            key = self.shape.index(key)
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def _same(self, other: "WeightVector") -> None:
        if other.shape != self.shape:
            raise WeightMismatch("weights over different shapes")

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._same(other)
        return WeightVector(self.shape, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        self._same(other)
        return WeightVector(self.shape, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "WeightVector":
        return WeightVector(self.shape, (-a for a in self.entries))

    def __mul__(self, c: int) -> "WeightVector":
        return WeightVector(self.shape, (c * a for a in self.entries))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"WeightVector({list(self.entries)})"

    def to_json(self) -> list[int]:
        return list(self.entries)


@dataclass(frozen=True)
class PsiCharacter:
    """Per-prime classes modulo p^f - 1, in the shape's prime order."""

    classes: tuple[int, ...]
    moduli: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.classes)

    def to_json(self) -> list[int]:
        return list(self.classes)


def hasse_weight(shape: FieldShape, theta: ThetaIndex) -> WeightVector:
    v = [0] * shape.d
    v[shape.index(shape.sigma_inv(theta))] += shape.multiplier_n(theta)
    v[shape.index(theta)] -= 1
    return WeightVector(shape, v)


@lru_cache(maxsize=None)
def hasse_matrix(shape: FieldShape) -> tuple[tuple[int, ...], ...]:
    """Rows h_theta in canonical order."""
    return tuple(hasse_weight(shape, t).entries for t in shape.enumerate_sigma())


def combine_hasse(shape: FieldShape, coeffs: Sequence[int]) -> WeightVector:
    """sum_theta coeffs[theta] * h_theta."""
    v = [0] * shape.d
    for c, row in zip(coeffs, hasse_matrix(shape)):
        if c:
            for n, x in enumerate(row):
                if x:
                    v[n] += c * x
    return WeightVector(shape, v)


def in_min_cone(k: WeightVector) -> bool:
    shape = k.shape
    mult = shape.multipliers()
    sinv = shape.sigma_inv_perm()
    e = k.entries
    return all(mult[t] * e[t] >= e[sinv[t]] for t in range(shape.d))


def theta_weight_shift(tau: Tau, k: WeightVector, l: WeightVector) -> tuple[WeightVector, WeightVector]:
    shape = k.shape
    t0 = shape.theta0(tau)
    e0 = WeightVector.unit(shape, t0)
    return k + hasse_weight(shape, t0) + 2 * e0, l - e0


def _frob_pointwise(pid: str, k: WeightVector) -> WeightVector:
    shape = k.shape
    out = list(k.entries)
    for t in shape.block(pid):
        theta = shape.enumerate_sigma()[t]
        st = shape.sigma(theta)
        out[t] = shape.multiplier_n(st) * k[st]
    return WeightVector(shape, out)


def _frob_hsum(pid: str, k: WeightVector) -> WeightVector:
    shape = k.shape
    coeffs = [0] * shape.d
    for t in shape.block(pid):
        coeffs[t] = k.entries[t]
    return k + combine_hasse(shape, coeffs)


def frob_weight_shift(pid: str, k: WeightVector, l: WeightVector) -> tuple[WeightVector, WeightVector]:
    out = []
    for w in (k, l):
        a = _frob_pointwise(pid, w)
        b = _frob_hsum(pid, w)
        assert a == b, f"Frobenius weight formulas disagree on {w}"
        out.append(a)
    return out[0], out[1]


def frob_weight_unshift(pid: str, k2: WeightVector) -> WeightVector:
    """The k0 whose Frobenius shift at ``pid`` is ``k2``.

    Raises NonDivisibleWeight when p fails to divide k2 at a slot theta(P, i, e).
    """
    shape = k2.shape
    sig = shape.enumerate_sigma()
    out = list(k2.entries)
    for t in shape.block(pid):
        st = shape.sigma(sig[t])
        n = shape.multiplier_n(st)
        if k2.entries[t] % n:
            raise NonDivisibleWeight(
                f"{n} does not divide the weight {k2.entries[t]} at {sig[t]}",
                weight=k2.to_json(),
                slot=str(sig[t]),
            )
    for t in shape.block(pid):
        st = shape.sigma(sig[t])
        out[shape.index(st)] = k2.entries[t] // shape.multiplier_n(st)
    return WeightVector(shape, out)


def frob_phi(k: WeightVector) -> WeightVector:
    """The relabel (k^phi)_{P,i,j} = k_{P,i+1,j}."""
    shape = k.shape
    return WeightVector(
        shape, (k[ThetaIndex(t.prime, t.i + 1, t.j)] for t in shape.enumerate_sigma())
    )


def frob_phi_inv(k: WeightVector) -> WeightVector:
    shape = k.shape
    return WeightVector(
        shape, (k[ThetaIndex(t.prime, t.i - 1, t.j)] for t in shape.enumerate_sigma())
    )


def character_moduli(shape: FieldShape) -> tuple[int, ...]:
    return tuple(shape.p ** P.f - 1 for P in shape.primes)


def rho(k: WeightVector) -> PsiCharacter:
    shape = k.shape
    moduli = character_moduli(shape)
    acc = {P.id: 0 for P in shape.primes}
    for t, x in zip(shape.enumerate_sigma(), k.entries):
        if x:
            acc[t.prime] += x * shape.p ** t.i
    classes = tuple(acc[P.id] % m for P, m in zip(shape.primes, moduli))
    return PsiCharacter(classes, moduli)


def expected_lambda_index(shape: FieldShape) -> int:
    out = 1
    for m in character_moduli(shape):
        out *= m
    return out


def lambda_index(shape: FieldShape) -> int:
    """Index of the span of the h_theta, by Smith normal form."""
    index = intlin.lattice_index(hasse_matrix(shape))
    expected = expected_lambda_index(shape)
    assert index == expected, f"lattice index {index} != {expected} for {shape}"
    return index


@lru_cache(maxsize=None)
def _hasse_hnf(shape: FieldShape) -> list[list[int]]:
    return intlin.hermite_form(hasse_matrix(shape))


def lambda_contains(k: WeightVector) -> bool:
    by_rho = rho(k).is_trivial
    by_span = intlin.in_row_span(_hasse_hnf(k.shape), k.entries)
    assert by_rho == by_span, f"character and span membership disagree on {k}"
    return by_rho


def hbasis_decompose(k: WeightVector) -> list[Fraction]:
    shape = k.shape
    s = intlin.solve_left(hasse_matrix(shape), k.entries)
    bound = lcm(*character_moduli(shape))
    for x in s:
        assert bound % x.denominator == 0, f"denominator {x.denominator} does not divide {bound}"
    return s


def leq_hasse(k: WeightVector, k2: WeightVector) -> tuple[int, ...] | None:
    """The nonnegative integer m with k2 = k + sum m_theta h_theta, if any."""
    s = hbasis_decompose(k2 - k)
    if all(x.denominator == 1 and x >= 0 for x in s):
        return tuple(int(x) for x in s)
    return None


def ptwt0_feasible(p: int, e: int, f: int) -> set[tuple[int, ...]]:
    """All m >= 0 with 2 e_{theta0} - sum m h in the minimal cone, theta0 = (0, e)."""
    shape = FieldShape.single(p, e, f)
    target = 2 * WeightVector.unit(shape, ThetaIndex("P", 0, e))
    s = hbasis_decompose(target)
    assert all(x >= 0 for x in s)
    caps = [ceil(x) for x in s]
    found = cone_box_search(
        list(target.entries),
        [list(r) for r in hasse_matrix(shape)],
        caps,
        shape.multipliers(),
        shape.sigma_inv_perm(),
    )
    return set(found)
