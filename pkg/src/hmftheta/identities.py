"""Operator identity suites, each runnable on random or supplied inputs.

Every suite has a generator (model, bound, rng) -> inputs and a checker
(model, *inputs) -> (ok, details). ``run_random`` fans cases out over a
thread pool; each case draws from its own seeded generator, so results do
not depend on scheduling.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .exponents import ExponentModel
from .generators import random_expansion, random_nonzero, window
from .qexp import (
    QExpansion,
    apply_theta,
    apply_v,
    apply_v0,
    in_theta_kernel,
    mul,
    ppower_check,
    theta_p_relation_check,
    v0_preimage,
    validate_unit_invariance,
)
from .ring import GradedElement, exactness_probe, qbar_collapse, ring_v
from .shape import Tau
from .weights import WeightVector


@dataclass
class CaseResult:
    identity: str
    model: str
    case: int
    ok: bool
    details: dict = field(default_factory=dict)
    inputs: list = field(default_factory=list)


def _nterms(rng: random.Random) -> int:
    return rng.randint(1, 10)


def _fits_all_scalings(model: ExponentModel, bound: Fraction):
    def ok(m):
        return all(model.trace(model.scale(P.id, m)) <= bound for P in model.shape.primes)
    return ok


# derivation
def gen_pair(model, bound, rng):
    return (random_expansion(model, rng, bound, _nterms(rng)),
            random_expansion(model, rng, bound, _nterms(rng)))


def check_derivation(model, f, g):
    for tau in model.shape.taus():
        lhs = apply_theta(tau, mul(f, g))
        rhs = mul(f, apply_theta(tau, g)) + mul(apply_theta(tau, f), g)
        if lhs != rhs:
            return False, {"tau": str(tau)}
    return True, {}


# Theta commutation
def gen_one(model, bound, rng):
    return (random_expansion(model, rng, bound, _nterms(rng)),)


def check_theta_commute(model, f):
    taus = model.shape.taus()
    for a in taus:
        for b in taus:
            if apply_theta(a, apply_theta(b, f)) != apply_theta(b, apply_theta(a, f)):
                return False, {"tau": str(a), "tau2": str(b)}
    return True, {}


# Theta after V
def check_theta_v_zero(model, f):
    shape = model.shape
    for P in shape.primes:
        vf = apply_v(P.id, f)
        if vf.is_zero():
            # injectivity inside the window
            kept = [m for m in f.terms if model.trace(model.scale(P.id, m)) <= f.bound]
            if kept or f.constant:
                return False, {"prime": P.id, "reason": "V killed a nonzero expansion"}
        for tau in shape.taus():
            lhs = apply_theta(tau, vf)
            if tau.prime == P.id:
                if not lhs.is_zero():
                    return False, {"prime": P.id, "tau": str(tau)}
            else:
                c = model.cusp_scalar(tau, P.id)
                rhs = apply_v(P.id, apply_theta(tau, f)).scalar_mul(c)
                if lhs != rhs:
                    return False, {"prime": P.id, "tau": str(tau), "reason": "no commutation"}
    return True, {}


# p-power
def gen_small(model, bound, rng):
    cap = Fraction(bound) / model.shape.p
    return (random_expansion(model, rng, bound, _nterms(rng), max_trace=cap),)


def check_ppower(model, f):
    return ppower_check(f), {}


# Theta^p relation
def check_theta_p(model, f):
    shape = model.shape
    for tau in shape.taus():
        if not theta_p_relation_check(tau, f):
            return False, {"tau": str(tau)}
        if shape.prime(tau.prime).f == 1:
            lhs = f
            for _ in range(shape.p):
                lhs = apply_theta(tau, lhs)
            if not lhs.same_series(apply_theta(tau, f)):
                return False, {"tau": str(tau), "reason": "f = 1 case is not coefficientwise trivial"}
    return True, {}


# kernel = image
def gen_preimage(model, bound, rng):
    admissible = _fits_all_scalings(model, Fraction(bound))
    return (random_expansion(model, rng, bound, _nterms(rng), admissible=admissible),)


def check_kernel_image(model, g):
    shape = model.shape
    for P in shape.primes:
        f = apply_v0(P.id, g)
        for tau in shape.taus(P.id):
            if not in_theta_kernel(tau, f):
                return False, {"prime": P.id, "tau": str(tau), "reason": "image not in kernel"}
        if v0_preimage(P.id, f) != g:
            return False, {"prime": P.id, "reason": "preimage differs"}
        # kernel membership agrees across all tau over P
        verdicts = {in_theta_kernel(tau, g) for tau in shape.taus(P.id)}
        if len(verdicts) != 1:
            return False, {"prime": P.id, "reason": "kernels differ between residue embeddings"}
    return True, {}


# unit invariance
def invariant_expansion(model, bound, rng, nu, l: WeightVector, orbits: int = 3) -> QExpansion:
    """An expansion satisfying r_{nu^-1 m} = chi_l(nu) r_m on the window."""
    chi = model.chi(l.entries, nu)
    pool = list(window(model, bound))
    terms = {}
    for _ in range(orbits):
        m0 = rng.choice(pool)
        if m0 in terms:
            continue
        r0 = random_nonzero(model.field, rng)
        terms[m0] = r0
        for step, scale in ((1, chi.inverse()), (-1, chi)):
            m, r = m0, r0
            while True:
                m = model.apply_unit(nu, m) if step == 1 else model.apply_unit_inverse(nu, m)
                if m == m0 or not model.is_totally_positive(m) or model.trace(m) > bound:
                    break
                r = r * scale
                terms[m] = r
    field = model.field
    return QExpansion(model, WeightVector.zero(model.shape), l, terms,
                      field([rng.randrange(field.p) for _ in range(field.degree)]), bound)


def gen_invariant(model, bound, rng):
    l = WeightVector(model.shape, [rng.randint(-4, 4) for _ in range(model.shape.d)])
    return (invariant_expansion(model, bound, rng, model.units()[0], l),)


def check_unit_invariance(model, f):
    units = model.units()
    if not validate_unit_invariance(f, units, f.l):
        return False, {"reason": "invariance fails"}
    nu = units[0]
    # a perturbation inside a nontrivial orbit must be caught
    for m in sorted(f.terms):
        n = model.apply_unit_inverse(nu, m)
        if n != m and n in f.terms:
            # bump the partner; if it cancels to zero the mismatch at m remains
            terms = dict(f.terms)
            terms[n] = terms[n] + model.field.one()
            bad = f._like(terms)
            if validate_unit_invariance(bad, units, f.l):
                return False, {"reason": "perturbation not detected", "m": list(m)}
            break
    return True, {}


# exactness
def gen_graded(model, bound, rng):
    pid = model.shape.primes[rng.randrange(len(model.shape.primes))].id
    admissible = _fits_all_scalings(model, Fraction(bound))
    parts = [random_expansion(model, rng, bound, _nterms(rng), admissible=admissible)
             for _ in range(rng.randint(1, 3))]
    return (GradedElement(model, bound, parts), pid)


def check_exactness(model, y0, pid):
    tau = Tau(pid, 0)
    x = ring_v(pid, y0)
    verdict = exactness_probe(pid, tau, x)
    if not verdict.is_exact:
        return False, {"reason": f"V-image classified {verdict.status}", "prime": pid}
    if qbar_collapse(verdict.y) != qbar_collapse(y0):
        return False, {"reason": "recovered preimage differs modulo the ideal", "prime": pid}
    off = [m for m in window(model, x.bound) if not model.in_scaled(pid, 1, m)]
    rng = random.Random(len(off) + len(y0))
    m = rng.choice(off)
    z = WeightVector.zero(model.shape)
    bump = QExpansion(model, z, z, {m: model.field.one()}, bound=x.bound)
    status = exactness_probe(pid, tau, x + GradedElement(model, x.bound, [bump])).status
    if status != "not_in_kernel":
        return False, {"reason": f"perturbed input classified {status}", "prime": pid}
    return True, {}


IDENTITIES: dict[str, tuple[Callable, Callable]] = {
    "derivation": (gen_pair, check_derivation),
    "theta-commute": (gen_one, check_theta_commute),
    "theta-v-zero": (gen_one, check_theta_v_zero),
    "ppower": (gen_small, check_ppower),
    "theta-p": (gen_one, check_theta_p),
    "kernel-image": (gen_preimage, check_kernel_image),
    "unit-invariance": (gen_invariant, check_unit_invariance),
    "exactness": (gen_graded, check_exactness),
}


def thread_count() -> int:
    try:
        cap = int(os.environ.get("HMF_THETA_THREADS", "0"))
    except ValueError:
        cap = 0
    return max(1, cap if cap > 0 else min(8, os.cpu_count() or 1))


def case_rng(identity: str, model: ExponentModel, seed: int, case: int) -> random.Random:
    return random.Random(f"{identity}|{model.name}|{seed}|{case}")


def run_case(identity: str, model: ExponentModel, bound, seed: int, case: int) -> CaseResult:
    gen, check = IDENTITIES[identity]
    inputs = gen(model, Fraction(bound), case_rng(identity, model, seed, case))
    try:
        ok, details = check(model, *inputs)
    except AssertionError as exc:
        ok, details = False, {"assertion": str(exc)}
    return CaseResult(identity, model.name, case, ok, details, list(inputs) if not ok else [])


def run_random(identity: str, model: ExponentModel, bound, count: int, seed: int,
               threads: int | None = None) -> list[CaseResult]:
    threads = thread_count() if threads is None else threads
    if threads <= 1:
        return [run_case(identity, model, bound, seed, c) for c in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: run_case(identity, model, bound, seed, c), range(count)))


def run_on_inputs(identity: str, model: ExponentModel, inputs: list[Any]) -> tuple[bool, dict]:
    _, check = IDENTITIES[identity]
    try:
        return check(model, *inputs)
    except AssertionError as exc:
        return False, {"assertion": str(exc)}
