"""The total algebra over all weights and its collapse by characters.

Modulo the ideal generated by H'_theta - 1 and G'_theta - 1, an expansion
only remembers the characters rho(k), rho(l) of its weight. ``qbar_collapse``
computes that image; ``exactness_probe`` checks that V_P and Theta_tau form
an exact sequence on a given element.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ModelMismatch, NonDivisibleWeight, NotInKernel, TruncationTooSmall
from .exponents import ExponentModel
from .qexp import QExpansion, apply_theta, apply_v, mul, v0_preimage
from .shape import Tau, ThetaIndex
from .weights import (
    PsiCharacter,
    WeightVector,
    combine_hasse,
    hasse_weight,
    hbasis_decompose,
    rho,
)

WeightKey = tuple[tuple[int, ...], tuple[int, ...]]


class GradedElement:
    """A finite sum of expansions of distinct weights."""

    __slots__ = ("model", "bound", "components")

    def __init__(self, model: ExponentModel, bound: Fraction, parts: Iterable[QExpansion] = ()):
        self.model = model
        self.bound = Fraction(bound)
        comps: dict[WeightKey, QExpansion] = {}
        for f in parts:
            if f.model is not model and f.model.to_json() != model.to_json():
                raise ModelMismatch("component over a different model")
            if f.bound != self.bound:
                raise ModelMismatch("component with a different truncation bound")
            key = (f.k.entries, f.l.entries)
            comps[key] = comps[key] + f if key in comps else f
        self.components = {key: f for key, f in comps.items() if not f.is_zero()}

    def __iter__(self):
        return iter(self.components.values())

    def __len__(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.model, self.bound, [*self, *other])

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.model, self.bound, [-f for f in self])

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.model, self.bound, [mul(f, g) for f in self for g in other])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.components == other.components

    def __repr__(self) -> str:
        return f"GradedElement({len(self.components)} components)"


@dataclass
class CharacterBucketSum:
    """Bucket (rho(k), rho(l)) -> bare expansion, stored at weight (0, 0)."""

    buckets: dict[tuple[tuple[int, ...], tuple[int, ...]], QExpansion] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.buckets

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharacterBucketSum):
            return NotImplemented
        return self.buckets == other.buckets


def bucket_key(k: WeightVector, l: WeightVector) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return rho(k).classes, rho(l).classes


def qbar_collapse(x: GradedElement) -> CharacterBucketSum:
    zero = WeightVector.zero(x.model.shape)
    out: dict = {}
    for f in x:
        key = bucket_key(f.k, f.l)
        bare = f.with_weight(zero, zero)
        out[key] = out[key] + bare if key in out else bare
    return CharacterBucketSum({key: f for key, f in out.items() if not f.is_zero()})


def ring_v(pid: str, x: GradedElement) -> GradedElement:
    return GradedElement(x.model, x.bound, [apply_v(pid, f) for f in x])


def ring_theta(tau: Tau, x: GradedElement) -> GradedElement:
    return GradedElement(x.model, x.bound, [apply_theta(tau, f) for f in x])


def ideal_generators(model: ExponentModel, bound: Fraction) -> list[tuple[str, GradedElement]]:
    """H'_theta - 1 and G'_theta - 1 for every theta."""
    shape = model.shape
    z = WeightVector.zero(shape)
    one = model.field.one()
    out = []
    for t in shape.enumerate_sigma():
        h = hasse_weight(shape, t)
        minus_one = QExpansion(model, z, z, constant=-one, bound=bound)
        hp = QExpansion(model, h, z, constant=one, bound=bound)
        gp = QExpansion(model, z, h, constant=one, bound=bound)
        out.append((f"H'[{t}] - 1", GradedElement(model, bound, [hp, minus_one])))
        out.append((f"G'[{t}] - 1", GradedElement(model, bound, [gp, minus_one])))
    return out


@dataclass
class Verdict:
    status: str  # "exact", "not_in_kernel" or "not_applicable"
    y: GradedElement | None = None
    detail: dict = field(default_factory=dict)

    @property
    def is_exact(self) -> bool:
        return self.status == "exact"


def _common_weight(pid: str, weights: list[WeightVector]) -> tuple[WeightVector, list[list[int]]]:
    """A weight above every input in the Hasse order, p-divisible at the
    last slots of ``pid``; also the H'-exponents lifting each input to it."""
    base = weights[0]
    shape = base.shape
    diffs = []
    for k in weights:
        s = hbasis_decompose(k - base)
        assert all(x.denominator == 1 for x in s), "weights in one bucket differ outside the lattice"
        diffs.append([int(x) for x in s])
    top = [max(col) for col in zip(*diffs)]
    target = base + combine_hasse(shape, top)
    extra = [0] * shape.d
    P = shape.prime(pid)
    for i in range(P.f):
        t = ThetaIndex(pid, i, P.e)
        r = target[t] % shape.p
        if r:
            extra[shape.index(t)] = r
            target = target + r * hasse_weight(shape, t)
    lifts = [[top[n] - s[n] + extra[n] for n in range(shape.d)] for s in diffs]
    return target, lifts


def _restrict(x: GradedElement, keep) -> GradedElement:
    return GradedElement(
        x.model, x.bound, [f._like({m: c for m, c in f.terms.items() if keep(m)}) for f in x]
    )


def exactness_probe(pid: str, tau: Tau, x: GradedElement) -> Verdict:
    model = x.model
    shape = model.shape
    if shape.normalize_tau(tau).prime != pid:
        raise ValueError(f"{tau} does not lie over {pid}")
    # injectivity: V(x) collapsing to 0 forces x to collapse to 0, checked on
    # the part of x whose V-image stays inside the window
    fit = _restrict(x, lambda m: model.trace(model.scale(pid, m)) <= x.bound)
    if qbar_collapse(ring_v(pid, fit)).is_zero():
        assert qbar_collapse(fit).is_zero(), "V is not injective on buckets"
    theta_image = qbar_collapse(ring_theta(tau, x))
    if not theta_image.is_zero():
        return Verdict("not_in_kernel", detail={"buckets": len(theta_image.buckets)})
    buckets: dict = {}
    for f in x:
        buckets.setdefault(bucket_key(f.k, f.l), []).append(f)
    pieces = []
    for key, comps in buckets.items():
        k_b, lifts = _common_weight(pid, [f.k for f in comps])
        l_b = comps[0].l
        total = None
        for f, lift in zip(comps, lifts):
            assert combine_hasse(shape, lift) + f.k == k_b
            g = f.with_weight(k_b, l_b)
            total = g if total is None else total + g
        if total.is_zero():
            continue
        try:
            pieces.append(v0_preimage(pid, total))
        except NonDivisibleWeight as exc:
            return Verdict("not_applicable", detail={"weight": exc.weight, "slot": exc.slot})
        except NotInKernel as exc:
            return Verdict("not_in_kernel", detail={"exponent": list(exc.exponent or ())})
        except TruncationTooSmall as exc:
            return Verdict("not_applicable", detail={"reason": str(exc)})
    y = GradedElement(model, x.bound, pieces)
    residual = qbar_collapse(ring_v(pid, y) - x)
    assert residual.is_zero(), "constructed preimage does not collapse onto the input"
    return Verdict("exact", y=y)


__all__ = [
    "GradedElement",
    "CharacterBucketSum",
    "PsiCharacter",
    "qbar_collapse",
    "ring_v",
    "ring_theta",
    "ideal_generators",
    "exactness_probe",
    "Verdict",
]
