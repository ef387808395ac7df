"""Exact arithmetic over the two ambient structures: the integers and F_p.

Elements are plain Python ints.  Prime-field elements are kept as canonical
residues in [0, p).  Integer arithmetic is arbitrary precision but checked
against a configurable magnitude cap, so a runaway product fails loudly
instead of eating the machine.  Ratio sets over the integers produce
fractions.Fraction values in lowest terms; those pass through normalize()
untouched and are never capped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

INTEGERS = "integers"
PRIME_FIELD = "prime_field"

# Generous default: multiplicative cubes over Z with a couple dozen
# moderate generators stay well inside this.
DEFAULT_MAGNITUDE_CAP = 1 << 512


class CapExceededError(RuntimeError):
    """An enumeration, pairing, grid, or magnitude cap was exceeded."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin.

    The fixed witness set is exact for all n < 3.3e24, far beyond the
    64-bit moduli this workbench targets.
    """
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class AmbientRing:
    """Immutable description of the ambient ring: Z or F_p (p an odd prime)."""

    kind: str
    modulus: int | None = None
    magnitude_cap: int = DEFAULT_MAGNITUDE_CAP

    def __post_init__(self) -> None:
        if self.kind == INTEGERS:
            if self.modulus is not None:
                raise ValueError("integer ring takes no modulus")
            if self.magnitude_cap < 2:
                raise ValueError("magnitude cap too small")
        elif self.kind == PRIME_FIELD:
            p = self.modulus
            if p is None or p == 2 or not is_prime(p):
                raise ValueError(f"modulus must be an odd prime, got {p!r}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls, magnitude_cap: int = DEFAULT_MAGNITUDE_CAP) -> "AmbientRing":
        return cls(INTEGERS, None, magnitude_cap)

    @classmethod
    def prime_field(cls, p: int) -> "AmbientRing":
        return cls(PRIME_FIELD, p)

    @property
    def is_field(self) -> bool:
        return self.kind == PRIME_FIELD

    def _checked(self, x: int) -> int:
        if x > self.magnitude_cap or -x > self.magnitude_cap:
            raise CapExceededError(
                f"magnitude {x.bit_length()} bits exceeds cap "
                f"{self.magnitude_cap.bit_length() - 1} bits"
            )
        return x

    def normalize(self, x):
        """Canonical form of x: residue in [0, p) over F_p, cap-checked over Z.

        Fractions (from ratio sets over Z) are already canonical and pass
        through; they are rejected in field mode where ratios are residues.
        """
        if self.kind == PRIME_FIELD:
            if isinstance(x, Fraction):
                raise TypeError("prime-field elements are residues, not fractions")
            return x % self.modulus
        if isinstance(x, Fraction):
            return x
        return self._checked(x)

    def add(self, x, y):
        if self.kind == PRIME_FIELD:
            return (x + y) % self.modulus
        return self._checked(x + y)

    def sub(self, x, y):
        if self.kind == PRIME_FIELD:
            return (x - y) % self.modulus
        return self._checked(x - y)

    def mul(self, x, y):
        if self.kind == PRIME_FIELD:
            return (x * y) % self.modulus
        return self._checked(x * y)

    def neg(self, x):
        if self.kind == PRIME_FIELD:
            return (-x) % self.modulus
        return -x

    def inv(self, x):
        """Multiplicative inverse.  Over Z only the units 1 and -1 qualify;
        exact rationals are the job of ratio sets, not of this ring."""
        if self.kind == PRIME_FIELD:
            x = x % self.modulus
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, self.modulus)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if x in (1, -1):
            return x
        raise ValueError(f"{x} is not a unit of the integers")

    def to_json_dict(self) -> dict:
        if self.kind == PRIME_FIELD:
            return {"kind": self.kind, "p": self.modulus}
        return {"kind": self.kind}

    @classmethod
    def from_json_dict(cls, data: dict) -> "AmbientRing":
        kind = data["kind"]
        if kind == PRIME_FIELD:
            return cls.prime_field(int(data["p"]))
        if kind == INTEGERS:
            return cls.integers()
        raise ValueError(f"unknown ring kind {kind!r}")
