"""Truncated q-expansions and the operators acting on them.

A :class:`QExpansion` stores the coefficients r_m of a formal sum
``r_0 + sum r_m q^m`` with m totally positive and trace(m) <= B. Partial
Hasse invariants and their companions G are normalized to constant
expansion 1, so multiplying by them only moves the weight.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    ModelMismatch,
    NotInKernel,
    TruncationTooSmall,
    WeightMismatch,
)
from .exponents import Exponent, ExponentModel
from .gfq import GFElement
from .kernels import cauchy_product
from .shape import Tau, ThetaIndex
from .weights import (
    WeightVector,
    frob_phi_inv,
    frob_weight_shift,
    frob_weight_unshift,
    hasse_weight,
    theta_weight_shift,
)


class QExpansion:
    __slots__ = ("model", "k", "l", "terms", "constant", "bound")

    def __init__(
        self,
        model: ExponentModel,
        k: WeightVector,
        l: WeightVector,
        terms: Mapping[Exponent, GFElement] | None = None,
        constant: GFElement | None = None,
        bound: Fraction | int = 1,
        check: bool = True,
    ):
        self.model = model
        self.k = k
        self.l = l
        self.bound = Fraction(bound)
        self.constant = model.field.zero() if constant is None else constant
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                clean[tuple(m)] = c
        self.terms = clean
        if check:
            self._validate()

    def _validate(self) -> None:
        model = self.model
        shape = model.shape
        if self.k.shape != shape or self.l.shape != shape:
            raise WeightMismatch("weight shape does not match the model")
        if self.bound <= 0:
            raise ValueError("truncation bound must be positive")
        field = model.field
        if self.constant.ctx != field:
            raise ModelMismatch("constant term lies outside the coefficient field")
        for m, c in self.terms.items():
            if c.ctx != field:
                raise ModelMismatch(f"coefficient at {m} lies outside the coefficient field")
            if len(m) != model.rank or not model.is_totally_positive(m):
                raise ValueError(f"exponent {m} is not totally positive")
            if model.trace(m) > self.bound:
                raise ValueError(f"exponent {m} has trace above the bound {self.bound}")

    # construction helpers
    @classmethod
    def zero(cls, model, k=None, l=None, bound=1) -> "QExpansion":
        z = WeightVector.zero(model.shape)
        return cls(model, k or z, l or z, bound=bound)

    @classmethod
    def one(cls, model, bound=1) -> "QExpansion":
        z = WeightVector.zero(model.shape)
        return cls(model, z, z, constant=model.field.one(), bound=bound)

    def _like(self, terms, constant=None, k=None, l=None, check=False) -> "QExpansion":
        return QExpansion(
            self.model,
            self.k if k is None else k,
            self.l if l is None else l,
            terms,
            self.constant if constant is None else constant,
            self.bound,
            check=check,
        )

    def with_weight(self, k: WeightVector, l: WeightVector) -> "QExpansion":
        return self._like(self.terms, k=k, l=l)

    # inspection
    def coeff(self, m: Exponent) -> GFElement:
        if not any(m):
            return self.constant
        return self.terms.get(tuple(m), self.model.field.zero())

    def support(self) -> set[Exponent]:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms and not self.constant

    def same_series(self, other: "QExpansion") -> bool:
        """Coefficientwise equality, ignoring weights."""
        return self.terms == other.terms and self.constant == other.constant

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (
            _same_model(self.model, other.model)
            and self.k == other.k
            and self.l == other.l
            and self.bound == other.bound
            and self.same_series(other)
        )

    def __hash__(self):
        return hash((self.k, self.l, self.bound, frozenset(self.terms.items()), self.constant))

    def __repr__(self) -> str:
        head = f"QExpansion(k={list(self.k)}, l={list(self.l)}, B={self.bound}"
        return f"{head}, const={self.constant!r}, {len(self.terms)} terms)"

    # linear structure
    def _compatible(self, other: "QExpansion") -> None:
        if not _same_model(self.model, other.model):
            raise ModelMismatch("expansions over different models")
        if self.bound != other.bound:
            raise ModelMismatch("expansions with different truncation bounds")

    def _check_weights(self, other: "QExpansion") -> None:
        self._compatible(other)
        if self.k != other.k or self.l != other.l:
            raise WeightMismatch(
                f"weights differ: ({list(self.k)}, {list(self.l)}) vs ({list(other.k)}, {list(other.l)})"
            )

    def __add__(self, other: "QExpansion") -> "QExpansion":
        self._check_weights(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                terms[m] = terms[m] + c
            else:
                terms[m] = c
        return self._like(terms, self.constant + other.constant)

    def __neg__(self) -> "QExpansion":
        return self._like({m: -c for m, c in self.terms.items()}, -self.constant)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + (-other)

    def scalar_mul(self, c: GFElement | int) -> "QExpansion":
        if isinstance(c, int):
            c = self.model.field(c)
        return self._like({m: c * r for m, r in self.terms.items()}, c * self.constant)

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        return mul(self, other)


def _same_model(a: ExponentModel, b: ExponentModel) -> bool:
    return a is b or a.to_json() == b.to_json()


def add(f: QExpansion, g: QExpansion) -> QExpansion:
    return f + g


def scalar_mul(c: GFElement | int, f: QExpansion) -> QExpansion:
    return f.scalar_mul(c)


def _flat(f: QExpansion) -> tuple[list, list]:
    exps = list(f.terms)
    coeffs = [f.terms[m].coeffs for m in exps]
    if f.constant:
        exps.append(f.model.zero())
        coeffs.append(f.constant.coeffs)
    return exps, coeffs


def mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Truncated Cauchy product; weights add."""
    f._compatible(g)
    model = f.model
    field = model.field
    ae, ac = _flat(f)
    be, bc = _flat(g)
    B = f.bound
    raw = cauchy_product(ae, ac, be, bc, list(model.trace_weights), B.numerator,
                         B.denominator, list(field.modulus), field.p)
    zero = model.zero()
    constant = field.zero()
    terms = {}
    for m, c in raw.items():
        if m == zero:
            constant = GFElement(field, c)
        else:
            terms[m] = GFElement(field, c)
    return QExpansion(model, f.k + g.k, f.l + g.l, terms, constant, B, check=False)


def power(f: QExpansion, n: int) -> QExpansion:
    out = QExpansion.one(f.model, f.bound)
    for _ in range(n):
        out = mul(out, f)
    return out


def mul_hasse(theta: ThetaIndex, f: QExpansion, times: int = 1) -> QExpansion:
    """Multiply by H'_theta^times (negative powers allowed)."""
    h = hasse_weight(f.model.shape, theta)
    return f.with_weight(f.k + times * h, f.l)


def mul_g(theta: ThetaIndex, f: QExpansion, times: int = 1) -> QExpansion:
    """Multiply by G'_theta^times (negative powers allowed)."""
    h = hasse_weight(f.model.shape, theta)
    return f.with_weight(f.k, f.l + times * h)


def apply_theta(tau: Tau, f: QExpansion) -> QExpansion:
    model = f.model
    tau = model.shape.normalize_tau(tau)
    k2, l2 = theta_weight_shift(tau, f.k, f.l)
    terms = {m: model.tau_reduce(tau, m) * c for m, c in f.terms.items()}
    return f._like(terms, model.field.zero(), k2, l2)


def _v_terms(pid: str, f: QExpansion, bound: Fraction | None) -> dict:
    model = f.model
    out = {}
    for m, c in f.terms.items():
        n = model.scale(pid, m)
        if bound is None or model.trace(n) <= bound:
            out[n] = c
    return out


def apply_v(pid: str, f: QExpansion) -> QExpansion:
    """Re-support on pi_P M; source terms whose image leaves the window are dropped."""
    k2, l2 = frob_weight_shift(pid, f.k, f.l)
    return f._like(_v_terms(pid, f, f.bound), k=k2, l=l2)


def apply_v0(pid: str, f: QExpansion) -> QExpansion:
    k2, _ = frob_weight_shift(pid, f.k, f.l)
    return f._like(_v_terms(pid, f, f.bound), k=k2, l=f.l)


def frob_coeffs(f: QExpansion) -> QExpansion:
    """Raise every coefficient to the p-th power; weight w becomes w relabelled by phi^-1."""
    p = f.model.field.p
    terms = {m: c ** p for m, c in f.terms.items()}
    return f._like(terms, f.constant ** p, frob_phi_inv(f.k), frob_phi_inv(f.l))


def ppower_check(f: QExpansion) -> bool:
    """Compare the twisted product of all V^e with f^p."""
    model = f.model
    shape = model.shape
    p = shape.p
    if f.terms and p * max(model.trace(m) for m in f.terms) > f.bound:
        raise TruncationTooSmall(
            f"bound {f.bound} is below p times the largest trace in the support"
        )
    # V^e composites move m to p*nu*m, which can overshoot B before the
    # nu-twist brings it back, so the intermediate steps are not truncated
    terms = dict(f.terms)
    k, l = f.k, f.l
    for P in shape.primes:
        for _ in range(P.e):
            terms = {model.scale(P.id, m): c for m, c in terms.items()}
            k, l = frob_weight_shift(P.id, k, l)
    nu = model.unit_nu()
    twisted = {model.apply_unit_inverse(nu, m): c for m, c in terms.items()}
    twisted = {m: c for m, c in twisted.items() if model.trace(m) <= f.bound}
    lhs = frob_coeffs(f._like(twisted, k=k, l=l))
    rhs = power(f, p)
    if lhs.k != rhs.k or lhs.l != rhs.l:
        return False
    return lhs.same_series(rhs)


def in_theta_kernel(tau: Tau, f: QExpansion) -> bool:
    model = f.model
    by_theta = not apply_theta(tau, f).terms
    by_support = all(model.in_scaled(tau.prime, 1, m) for m in f.terms)
    assert by_theta == by_support, "Theta-kernel and support tests disagree"
    return by_theta


def v0_preimage(pid: str, f: QExpansion) -> QExpansion:
    """The g with apply_v0(pid, g) = f."""
    model = f.model
    terms = {}
    for m, c in f.terms.items():
        n = model.unscale(pid, m)
        if n is None:
            raise NotInKernel(f"exponent {m} is not in pi_{pid} M", exponent=m)
        if model.trace(n) > f.bound:
            raise TruncationTooSmall(f"preimage {n} of {m} leaves the window {f.bound}")
        terms[n] = c
    k0 = frob_weight_unshift(pid, f.k)
    return f._like(terms, k=k0, l=f.l)


def theta_p_relation_weights(tau0: Tau, f: QExpansion) -> tuple[WeightVector, WeightVector]:
    """Weight of Theta_{tau1}(f) after the H', G' relabel that matches Theta_{tau0}^p(f)."""
    shape = f.model.shape
    tau0 = shape.normalize_tau(tau0)
    tau1 = shape.normalize_tau(Tau(tau0.prime, tau0.i + 1))
    t0, t1 = shape.theta0(tau0), shape.theta0(tau1)
    k, l = theta_weight_shift(tau1, f.k, f.l)
    h = lambda t: hasse_weight(shape, t)
    k = k + shape.p * h(t0) + h(t1)
    l = l - h(t1)
    t = t0
    for _ in range(shape.prime(tau0.prime).e - 1):
        t = shape.sigma(t)
        k = k + 2 * h(t)
        l = l - h(t)
    return k, l


def theta_p_relation_check(tau0: Tau, f: QExpansion) -> bool:
    shape = f.model.shape
    tau0 = shape.normalize_tau(tau0)
    tau1 = Tau(tau0.prime, tau0.i + 1)
    lhs = f
    for _ in range(shape.p):
        lhs = apply_theta(tau0, lhs)
    k, l = theta_p_relation_weights(tau0, f)
    rhs = apply_theta(tau1, f).with_weight(k, l)
    return lhs == rhs


def validate_unit_invariance(f: QExpansion, units: Iterable, l: WeightVector | None = None) -> bool:
    model = f.model
    l = f.l if l is None else l
    for u in units:
        model.check_unit(u)
        chi = model.chi(l.entries, u)
        for m, c in f.terms.items():
            n = model.apply_unit_inverse(u, m)
            if not model.is_totally_positive(n) or model.trace(n) > f.bound:
                continue
            if f.coeff(n) != chi * c:
                return False
    return True


__all__ = [
    "QExpansion",
    "add",
    "scalar_mul",
    "mul",
    "power",
    "mul_hasse",
    "mul_g",
    "apply_theta",
    "apply_v",
    "apply_v0",
    "frob_coeffs",
    "ppower_check",
    "in_theta_kernel",
    "v0_preimage",
    "theta_p_relation_weights",
    "theta_p_relation_check",
    "validate_unit_invariance",
]
