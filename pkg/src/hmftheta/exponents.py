"""Cusp exponent lattices with exact positivity and residue reductions.

An exponent is a tuple of integer coordinates. In the quadratic model,
``(a, b)`` stands for a + b*w with w = sqrt(D), or w = (1 + sqrt(D))/2 when
D = 1 mod 4. The synthetic model is Z^r with positivity cut out by integer
functionals, for shapes that no quadratic field realizes.

Each prime P carries a scaling map m -> pi_P m whose image is P M, and a
residue map red_P onto F_{p^f} inside the coefficient field. The reduction
attached to tau = (P, i) is frobenius(red_P(m), i).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Iterator, Sequence

from . import intlin
from .errors import HMFThetaError, InvalidConfig, ModelInconsistent, NotAUnit
from .gfq import GFContext, GFElement, frobenius
from .shape import FieldShape, PrimeShape, Tau

Exponent = tuple[int, ...]


class ExponentModel:
    """Shared machinery; subclasses define the lattice arithmetic."""

    name: str
    shape: FieldShape
    field: GFContext
    rank: int
    trace_weights: tuple[int, ...]

    def _init_residues(self, images: dict[str, list[GFElement]]) -> None:
        # images[P][c] = red_P(basis vector c); precompute Frobenius twists
        self._red = {}
        for P in self.shape.primes:
            for i in range(P.f):
                self._red[Tau(P.id, i)] = tuple(frobenius(x, i) for x in images[P.id])

    # lattice arithmetic supplied by subclasses
    def is_totally_positive(self, m: Exponent) -> bool:
        raise NotImplementedError

    def scale(self, pid: str, m: Exponent) -> Exponent:
        raise NotImplementedError

    def unscale(self, pid: str, m: Exponent) -> Exponent | None:
        raise NotImplementedError

    def unit_nu(self):
        raise NotImplementedError

    def apply_unit(self, u, m: Exponent) -> Exponent:
        raise NotImplementedError

    def apply_unit_inverse(self, u, m: Exponent) -> Exponent:
        raise NotImplementedError

    def unit_residue(self, tau: Tau, u) -> GFElement:
        raise NotImplementedError

    def check_unit(self, u) -> None:
        raise NotImplementedError

    def window(self, bound: Fraction) -> list[Exponent]:
        raise NotImplementedError

    # shared operations
    def trace(self, m: Exponent) -> int:
        return sum(w * x for w, x in zip(self.trace_weights, m))

    def add(self, m: Exponent, n: Exponent) -> Exponent:
        return tuple(a + b for a, b in zip(m, n))

    def times(self, c: int, m: Exponent) -> Exponent:
        return tuple(c * a for a in m)

    def zero(self) -> Exponent:
        return (0,) * self.rank

    def scale_pow(self, pid: str, n: int, m: Exponent) -> Exponent:
        for _ in range(n):
            m = self.scale(pid, m)
        return m

    def in_scaled(self, pid: str, n: int, m: Exponent) -> bool:
        for _ in range(n):
            m = self.unscale(pid, m)
            if m is None:
                return False
        return True

    def tau_reduce(self, tau: Tau, m: Exponent) -> GFElement:
        tau = self.shape.normalize_tau(tau)
        images = self._red[tau]
        acc = self.field.zero()
        for x, img in zip(m, images):
            if x:
                acc = acc + img * x
        return acc

    def chi(self, l: Sequence[int], u) -> GFElement:
        """prod over tau of tau(u) raised to the l-weights sitting over tau."""
        self.check_unit(u)
        out = self.field.one()
        for tau in self.shape.taus():
            exp = sum(l[self.shape.index(t)] for t in self.shape.enumerate_sigma()
                      if t.prime == tau.prime and t.i == tau.i)
            if exp:
                out = out * self.unit_residue(tau, u) ** exp
        return out

    def cusp_scalar(self, tau: Tau, pid: str) -> GFElement:
        """The constant c with tau(pi_P m) = c tau(m) for all m.

        Theta_tau and V_P for distinct primes commute up to this factor; it
        records the change of cusp trivialization under V_P.
        """
        basis = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        c = None
        for b in basis:
            src = self.tau_reduce(tau, b)
            dst = self.tau_reduce(tau, self.scale(pid, b))
            if src:
                c = dst / src
                break
        if c is None:
            raise ModelInconsistent(f"residue map for {tau} vanishes on the basis")
        for b in basis:
            if self.tau_reduce(tau, self.scale(pid, b)) != c * self.tau_reduce(tau, b):
                raise ModelInconsistent(f"scaling by {pid} is not a scalar on the residues of {tau}")
        return c

    def residue_kernel_check(self) -> None:
        """Kernel of every tau-reduction equals P M on a fundamental domain."""
        for P in self.shape.primes:
            box = self._fundamental_box(P.id)
            for m in box:
                inside = self.in_scaled(P.id, 1, m)
                for i in range(P.f):
                    zero = not self.tau_reduce(Tau(P.id, i), m)
                    if zero != inside:
                        raise ModelInconsistent(
                            f"residue kernel differs from P M at {m} for {P.id}:{i}"
                        )

    def _fundamental_box(self, pid: str) -> Iterator[Exponent]:
        size = abs(self._scale_det(pid))
        return product(range(size), repeat=self.rank)

    def _scale_det(self, pid: str) -> int:
        raise NotImplementedError

    def check_image_size(self, P: PrimeShape) -> None:
        seen = {self.tau_reduce(Tau(P.id, 0), m) for m in self._fundamental_box(P.id)}
        if len(seen) != self.shape.p ** P.f:
            raise ModelInconsistent(
                f"residue map for {P.id} has image of size {len(seen)}, expected {self.shape.p ** P.f}"
            )
        for x in seen:
            if frobenius(x, P.f) != x:
                raise ModelInconsistent(f"residue image for {P.id} is not inside F_(p^{P.f})")


class QuadraticModel(ExponentModel):
    def __init__(self, D: int, field: GFContext, primes: dict, name: str = "quadratic"):
        if D < 2 or any(D % (q * q) == 0 for q in range(2, isqrt(D) + 1)):
            raise InvalidConfig(f"D = {D} must be squarefree and > 1")
        self.name = name
        self.D = D
        self.field = field
        self.rank = 2
        self.half = D % 4 == 1
        # w^2 = wt * w + wn
        self.wt, self.wn = (1, (D - 1) // 4) if self.half else (0, D)
        self.trace_weights = (2, 1) if self.half else (2, 0)
        p = field.p
        shape_primes = []
        self.pi: dict[str, Exponent] = {}
        images = {}
        for pid, cfg in primes.items():
            P = PrimeShape(str(pid), int(cfg["e"]), int(cfg["f"]))
            if field.degree % P.f:
                raise InvalidConfig(f"coefficient field degree must be a multiple of f = {P.f}")
            shape_primes.append(P)
            self.pi[P.id] = tuple(int(x) for x in cfg["pi"])
            w = field(cfg["residue_gen_image"])
            images[P.id] = [field.one(), w]
        self.shape = FieldShape(p, tuple(shape_primes))
        self._init_residues(images)
        self._verify()

    # arithmetic in O_F
    def mul(self, m: Exponent, n: Exponent) -> Exponent:
        a, b = m
        c, d = n
        return (a * c + self.wn * b * d, a * d + b * c + self.wt * b * d)

    def conj(self, m: Exponent) -> Exponent:
        a, b = m
        return (a + b, -b) if self.half else (a, -b)

    def norm(self, m: Exponent) -> int:
        a, b = m
        return a * a + self.wt * a * b - self.wn * b * b

    def _uv(self, m: Exponent) -> tuple[int, int]:
        a, b = m
        return (2 * a + b, b) if self.half else (a, b)

    def is_totally_positive(self, m: Exponent) -> bool:
        u, v = self._uv(m)
        return u > 0 and u * u > self.D * v * v

    def exact_div(self, m: Exponent, n: Exponent) -> Exponent | None:
        num = self.mul(m, self.conj(n))
        nn = self.norm(n)
        if num[0] % nn or num[1] % nn:
            return None
        return (num[0] // nn, num[1] // nn)

    def scale(self, pid: str, m: Exponent) -> Exponent:
        return self.mul(self.pi[pid], m)

    def unscale(self, pid: str, m: Exponent) -> Exponent | None:
        return self.exact_div(m, self.pi[pid])

    def in_scaled(self, pid: str, n: int, m: Exponent) -> bool:
        pin = (1, 0)
        for _ in range(n):
            pin = self.mul(pin, self.pi[pid])
        return self.exact_div(m, pin) is not None

    def _scale_det(self, pid: str) -> int:
        return self.norm(self.pi[pid])

    def unit_nu(self) -> Exponent:
        total = (1, 0)
        for P in self.shape.primes:
            for _ in range(P.e):
                total = self.mul(total, self.pi[P.id])
        p = self.shape.p
        if total[0] % p or total[1] % p:
            raise ModelInconsistent(f"product of pi^e = {total} is not divisible by p")
        nu = (total[0] // p, total[1] // p)
        if abs(self.norm(nu)) != 1 or not self.is_totally_positive(nu):
            raise ModelInconsistent(f"nu = {nu} is not a totally positive unit")
        return nu

    def check_unit(self, u) -> None:
        if abs(self.norm(u)) != 1 or not self.is_totally_positive(u):
            raise NotAUnit(f"{u} is not a totally positive unit")

    def apply_unit(self, u, m: Exponent) -> Exponent:
        return self.mul(u, m)

    def apply_unit_inverse(self, u, m: Exponent) -> Exponent:
        out = self.exact_div(m, u)
        if out is None:
            raise NotAUnit(f"{u} is not a unit")
        return out

    def unit_residue(self, tau: Tau, u) -> GFElement:
        return self.tau_reduce(tau, u)

    def fundamental_unit(self) -> Exponent:
        """Smallest totally positive unit other than 1."""
        b = 1
        while True:
            if self.half:
                # norm 1 means (2a + b)^2 - D b^2 = 4
                disc = self.D * b * b + 4
                r = isqrt(disc)
                if r * r == disc and (r - b) % 2 == 0:
                    return ((r - b) // 2, b)
            else:
                disc = self.D * b * b + 1
                r = isqrt(disc)
                if r * r == disc:
                    return (r, b)
            b += 1

    def units(self) -> list[Exponent]:
        return [self.fundamental_unit()]

    def window(self, bound: Fraction) -> list[Exponent]:
        bound = Fraction(bound)
        out = []
        if self.half:
            # trace = U, with U = 2a + b
            for u in range(1, int(bound) + 1):
                vmax = isqrt((u * u - 1) // self.D) if u * u > 1 else 0
                for v in range(-vmax, vmax + 1):
                    if (u - v) % 2 == 0 and u * u > self.D * v * v:
                        out.append(((u - v) // 2, v))
        else:
            for a in range(1, int(bound / 2) + 1):
                vmax = isqrt((a * a - 1) // self.D)
                for v in range(-vmax, vmax + 1):
                    out.append((a, v))
        return out

    def _verify(self) -> None:
        p = self.shape.p
        for P in self.shape.primes:
            pi = self.pi[P.id]
            if not self.is_totally_positive(pi):
                raise ModelInconsistent(f"pi for {P.id} = {pi} is not totally positive")
            if abs(self.norm(pi)) != p ** P.f:
                raise ModelInconsistent(f"|N(pi)| for {P.id} is {abs(self.norm(pi))}, expected {p ** P.f}")
            w = self._red[Tau(P.id, 0)][1]
            if w * w != w * self.wt + self.wn:
                raise ModelInconsistent(f"residue image of w for {P.id} fails its minimal polynomial")
            if self.tau_reduce(Tau(P.id, 0), pi):
                raise ModelInconsistent(f"pi for {P.id} does not reduce to 0")
            self.check_image_size(P)
        self.nu = self.unit_nu()

    def to_json(self) -> dict:
        primes = {}
        for P in self.shape.primes:
            primes[P.id] = {
                "pi": list(self.pi[P.id]),
                "e": P.e,
                "f": P.f,
                "residue_gen_image": list(self._red[Tau(P.id, 0)][1].coeffs),
            }
        return {"kind": "quadratic", "D": self.D, "field": self.field.to_json(), "primes": primes}


def _matmul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


def _matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def _transpose(A):
    return tuple(zip(*A))


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _det(A) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return int(det)


class SyntheticModel(ExponentModel):
    """Z^r with m > 0 iff L m > 0 componentwise (L square, invertible)."""

    def __init__(self, rank: int, field: GFContext, positivity, primes: dict,
                 name: str = "synthetic"):
        self.name = name
        self.rank = rank
        self.field = field
        self.L = tuple(tuple(int(x) for x in row) for row in positivity)
        if len(self.L) != rank or any(len(r) != rank for r in self.L):
            raise InvalidConfig("positivity functionals must form a square matrix")
        if _det(self.L) == 0:
            raise InvalidConfig("positivity functionals must be independent")
        self.trace_weights = tuple(sum(col) for col in zip(*self.L))
        p = field.p
        shape_primes = []
        self.pi: dict[str, tuple] = {}
        images = {}
        for pid, cfg in primes.items():
            P = PrimeShape(str(pid), int(cfg["e"]), int(cfg["f"]))
            if field.degree % P.f:
                raise InvalidConfig(f"coefficient field degree must be a multiple of f = {P.f}")
            shape_primes.append(P)
            mat = tuple(tuple(int(x) for x in row) for row in cfg["pi"])
            if len(mat) != rank or any(len(r) != rank for r in mat):
                raise InvalidConfig(f"pi for {P.id} must be {rank}x{rank}")
            self.pi[P.id] = mat
            imgs = cfg["residue_images"]
            if len(imgs) != rank:
                raise InvalidConfig(f"need {rank} residue images for {P.id}")
            images[P.id] = [field(x) for x in imgs]
        self.shape = FieldShape(p, tuple(shape_primes))
        self._init_residues(images)
        self._verify()

    def is_totally_positive(self, m: Exponent) -> bool:
        return all(x > 0 for x in _matvec(self.L, m))

    def scale(self, pid: str, m: Exponent) -> Exponent:
        return _matvec(self.pi[pid], m)

    def _solve(self, A, m) -> Exponent | None:
        s = intlin.solve_left(_transpose(A), m)
        if any(x.denominator != 1 for x in s):
            return None
        return tuple(int(x) for x in s)

    def unscale(self, pid: str, m: Exponent) -> Exponent | None:
        return self._solve(self.pi[pid], m)

    def _scale_det(self, pid: str) -> int:
        return _det(self.pi[pid])

    def unit_nu(self):
        total = _identity(self.rank)
        for P in self.shape.primes:
            for _ in range(P.e):
                total = _matmul(total, self.pi[P.id])
        p = self.shape.p
        if any(x % p for row in total for x in row):
            raise ModelInconsistent("product of pi^e is not divisible by p")
        nu = tuple(tuple(x // p for x in row) for row in total)
        self.check_unit(nu, ModelInconsistent)
        return nu

    def check_unit(self, u, exc=NotAUnit) -> None:
        if abs(_det(u)) != 1:
            raise exc("unit matrix must have determinant +-1")
        for m in self.window(Fraction(6 * max(self.trace_weights))):
            if not self.is_totally_positive(_matvec(u, m)):
                raise exc("unit does not preserve positivity")

    def apply_unit(self, u, m: Exponent) -> Exponent:
        return _matvec(u, m)

    def apply_unit_inverse(self, u, m: Exponent) -> Exponent:
        out = self._solve(u, m)
        if out is None:
            raise NotAUnit("unit matrix is not invertible over Z")
        return out

    def unit_residue(self, tau: Tau, u) -> GFElement:
        # units act trivially on the residue side of the synthetic model
        return self.field.one()

    def units(self) -> list:
        return [self.nu]

    def window(self, bound: Fraction) -> list[Exponent]:
        bound = Fraction(bound)
        out = []
        top = int(bound)

        def compositions(prefix, remaining, slots):
            if slots == 0:
                yield prefix
                return
            for y in range(1, remaining - slots + 2):
                yield from compositions(prefix + (y,), remaining - y, slots - 1)

        for y in compositions((), top, self.rank):
            m = self._solve(_transpose(self.L), y) if self.L != _identity(self.rank) else y
            if m is not None:
                out.append(m)
        return out

    def _verify(self) -> None:
        p = self.shape.p
        probe = self.window(Fraction(4 * self.rank))
        for P in self.shape.primes:
            pi = self.pi[P.id]
            if abs(_det(pi)) != p ** P.f:
                raise ModelInconsistent(f"|det pi| for {P.id} is {abs(_det(pi))}, expected {p ** P.f}")
            for m in probe:
                if not self.is_totally_positive(self.scale(P.id, m)):
                    raise ModelInconsistent(f"pi for {P.id} does not preserve positivity")
            for c in range(self.rank):
                col = tuple(pi[r][c] for r in range(self.rank))
                if self.tau_reduce(Tau(P.id, 0), col):
                    raise ModelInconsistent(f"pi for {P.id} does not reduce to 0")
            self.check_image_size(P)
        ids = [P.id for P in self.shape.primes]
        for a in ids:
            for b in ids:
                if _matmul(self.pi[a], self.pi[b]) != _matmul(self.pi[b], self.pi[a]):
                    raise ModelInconsistent(f"scalings for {a} and {b} do not commute")
        self.nu = self.unit_nu()

    def to_json(self) -> dict:
        primes = {}
        for P in self.shape.primes:
            primes[P.id] = {
                "pi": [list(r) for r in self.pi[P.id]],
                "e": P.e,
                "f": P.f,
                "residue_images": [list(x.coeffs) for x in self._red[Tau(P.id, 0)]],
            }
        return {
            "kind": "synthetic",
            "rank": self.rank,
            "field": self.field.to_json(),
            "positivity": [list(r) for r in self.L],
            "primes": primes,
        }


def _default_field(data: dict) -> GFContext:
    """F_p when no field is given; p is read off the norm of the first uniformizer."""
    pi = next(iter(data["primes"].values()))["pi"]
    if data["kind"] == "quadratic":
        D = int(data["D"])
        a, b = pi
        norm = a * a - D * b * b if D % 4 != 1 else a * a + a * b - (D - 1) // 4 * b * b
    else:
        norm = int(_det(pi))
    norm = abs(norm)
    p = next((q for q in range(2, norm + 1) if norm % q == 0), None)
    if p is None:
        raise InvalidConfig("cannot infer the coefficient field from a unit uniformizer")
    return GFContext.prime_field(p)


def model_from_json(data: dict, name: str | None = None) -> ExponentModel:
    try:
        kind = data["kind"]
        field = GFContext.from_json(data["field"]) if "field" in data else _default_field(data)
        if kind == "quadratic":
            return QuadraticModel(int(data["D"]), field, data["primes"], name=name or "quadratic")
        if kind == "synthetic":
            return SyntheticModel(int(data["rank"]), field, data["positivity"], data["primes"],
                                  name=name or "synthetic")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, HMFThetaError):
            raise
        raise InvalidConfig(f"bad model config: {exc}") from None
    raise InvalidConfig(f"unknown model kind {kind!r}")
