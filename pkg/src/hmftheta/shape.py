"""Index combinatorics: primes over p, the embeddings theta, the shift sigma.

Convention: ``sigma`` increments the slot, theta(P, i, j) -> theta(P, i, j+1),
wrapping theta(P, i, e) -> theta(P, i+1, 1). ``sigma_inv`` decrements. The
Hasse weight ``n * e[sigma_inv(t)] - e[t]`` and the character map ``rho`` are
written against this orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .errors import InvalidConfig
from .gfq import is_prime


@dataclass(frozen=True)
class PrimeShape:
    id: str
    e: int
    f: int

    def __post_init__(self) -> None:
        if self.e < 1 or self.f < 1:
            raise InvalidConfig(f"prime {self.id!r}: e and f must be positive")


class ThetaIndex(NamedTuple):
    prime: str
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.prime}:{self.i},{self.j}"


class Tau(NamedTuple):
    """Residue embedding tau_{P,i}."""

    prime: str
    i: int

    def __str__(self) -> str:
        return f"{self.prime}:{self.i}"


@dataclass(frozen=True)
class FieldShape:
    p: int
    primes: tuple[PrimeShape, ...]
    _sigma: tuple[ThetaIndex, ...] = field(init=False, repr=False, compare=False)
    _pos: dict = field(init=False, repr=False, compare=False)
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "primes", tuple(self.primes))
        if not is_prime(self.p):
            raise InvalidConfig(f"{self.p} is not prime")
        if not self.primes:
            raise InvalidConfig("a shape needs at least one prime")
        ids = [P.id for P in self.primes]
        if len(set(ids)) != len(ids):
            raise InvalidConfig(f"duplicate prime ids in {ids}")
        sig = tuple(
            ThetaIndex(P.id, i, j)
            for P in self.primes
            for i in range(P.f)
            for j in range(1, P.e + 1)
        )
        object.__setattr__(self, "_sigma", sig)
        object.__setattr__(self, "_pos", {t: n for n, t in enumerate(sig)})
        object.__setattr__(self, "_by_id", {P.id: P for P in self.primes})

    @classmethod
    def single(cls, p: int, e: int, f: int, id: str = "P") -> "FieldShape":
        return cls(p, (PrimeShape(id, e, f),))

    @classmethod
    def from_json(cls, data: dict) -> "FieldShape":
        try:
            primes = tuple(
                PrimeShape(str(q["id"]), int(q["e"]), int(q["f"])) for q in data["primes"]
            )
            return cls(int(data["p"]), primes)
        except (KeyError, TypeError) as exc:
            raise InvalidConfig(f"bad shape config: {exc}") from None

    def to_json(self) -> dict:
        return {"p": self.p, "primes": [{"id": P.id, "e": P.e, "f": P.f} for P in self.primes]}

    @property
    def d(self) -> int:
        return len(self._sigma)

    def prime(self, pid: str) -> PrimeShape:
        try:
            return self._by_id[pid]
        except KeyError:
            raise InvalidConfig(f"unknown prime {pid!r}") from None

    def enumerate_sigma(self) -> tuple[ThetaIndex, ...]:
        return self._sigma

    def __iter__(self) -> Iterator[ThetaIndex]:
        return iter(self._sigma)

    def index(self, theta: ThetaIndex) -> int:
        return self._pos[self.normalize(theta)]

    def normalize(self, theta: ThetaIndex) -> ThetaIndex:
        P = self.prime(theta.prime)
        if not 1 <= theta.j <= P.e:
            raise InvalidConfig(f"slot j={theta.j} out of range for {P.id}")
        return ThetaIndex(P.id, theta.i % P.f, theta.j)

    def block(self, pid: str) -> range:
        """Positions of Sigma_P in canonical order."""
        start = 0
        for P in self.primes:
            if P.id == pid:
                return range(start, start + P.e * P.f)
            start += P.e * P.f
        raise InvalidConfig(f"unknown prime {pid!r}")

    def sigma(self, theta: ThetaIndex) -> ThetaIndex:
        P = self.prime(theta.prime)
        if theta.j < P.e:
            return ThetaIndex(P.id, theta.i % P.f, theta.j + 1)
        return ThetaIndex(P.id, (theta.i + 1) % P.f, 1)

    def sigma_inv(self, theta: ThetaIndex) -> ThetaIndex:
        P = self.prime(theta.prime)
        if theta.j > 1:
            return ThetaIndex(P.id, theta.i % P.f, theta.j - 1)
        return ThetaIndex(P.id, (theta.i - 1) % P.f, P.e)

    def multiplier_n(self, theta: ThetaIndex) -> int:
        return self.p if theta.j == 1 else 1

    def taus(self, pid: str | None = None) -> list[Tau]:
        return [
            Tau(P.id, i)
            for P in self.primes
            if pid is None or P.id == pid
            for i in range(P.f)
        ]

    def normalize_tau(self, tau: Tau) -> Tau:
        P = self.prime(tau.prime)
        return Tau(P.id, tau.i % P.f)

    def theta0(self, tau: Tau) -> ThetaIndex:
        """The last slot theta(P, i, e) attached to tau(P, i)."""
        P = self.prime(tau.prime)
        return ThetaIndex(P.id, tau.i % P.f, P.e)

    # permutation arrays in canonical positions, used by the weight code
    def sigma_perm(self) -> list[int]:
        return [self.index(self.sigma(t)) for t in self._sigma]

    def sigma_inv_perm(self) -> list[int]:
        return [self.index(self.sigma_inv(t)) for t in self._sigma]

    def multipliers(self) -> list[int]:
        return [self.multiplier_n(t) for t in self._sigma]

    def __str__(self) -> str:
        body = ", ".join(f"{P.id}(e={P.e},f={P.f})" for P in self.primes)
        return f"p={self.p} [{body}]"


def parse_tau(text: str) -> Tau:
    """Parse ``P:i``."""
    pid, sep, i = text.rpartition(":")
    if not sep or not pid:
        raise ValueError(f"expected PRIME:i, got {text!r}")
    return Tau(pid, int(i))
