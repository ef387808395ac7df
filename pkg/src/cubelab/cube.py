"""Combinatorial cubes and the finite sets they enumerate to.

A cube is the data (a_0; a_1, ..., a_d) together with a digit set D and a
mode.  In additive mode it describes {a_0 + sum_j eps_j a_j : eps_j in D};
interval digits D = {0..h} give the classical height-h cube, a general D
containing 0 gives a missing-digit cube.  In multiplicative mode the digits
are exponents {0, 1} and the cube is {a_0 * prod_j a_j^{eps_j}}.

Enumeration collapses repeated values, so |Q| <= |D|^d with equality exactly
for proper cubes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .numeric import PRIME_FIELD, AmbientRing, CapExceededError

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"

# Cap on the number of digit vectors a single enumeration may touch.
DEFAULT_ENUM_CAP = 1 << 24

# Exhaustive bipartition fallback cost grows like (|D|+1)^d; past this
# dimension we refuse rather than stall.
_SPLIT_EXHAUSTIVE_MAX_D = 12


@dataclass(frozen=True)
class FiniteSet:
    """Immutable finite set of ring elements, stored sorted ascending.

    Elements are ints (canonical residues over F_p) or Fractions when the
    set came out of a ratio operation over Z.
    """

    ring: AmbientRing
    elements: tuple

    def __post_init__(self) -> None:
        for a, b in zip(self.elements, self.elements[1:]):
            if not a < b:
                raise ValueError("elements must be strictly increasing")

    @classmethod
    def from_iterable(cls, ring: AmbientRing, values) -> "FiniteSet":
        return cls(ring, tuple(sorted({ring.normalize(v) for v in values})))

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    def to_lines(self) -> str:
        """One element per line, decimal (fractions as num/den)."""
        return "\n".join(str(x) for x in self.elements) + "\n"

    @classmethod
    def from_lines(cls, ring: AmbientRing, text: str) -> "FiniteSet":
        values = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "/" in line:
                values.append(Fraction(line))
            else:
                values.append(int(line))
        return cls.from_iterable(ring, values)


@dataclass(frozen=True)
class CubeSpec:
    """Immutable cube description; values are normalized at construction."""

    ring: AmbientRing
    a0: int
    generators: tuple[int, ...]
    digits: tuple[int, ...] = (0, 1)
    mode: str = ADDITIVE

    def __post_init__(self) -> None:
        if self.mode not in (ADDITIVE, MULTIPLICATIVE):
            raise ValueError(f"unknown mode {self.mode!r}")
        digits = tuple(sorted(set(int(c) for c in self.digits)))
        if len(digits) < 2:
            raise ValueError("digit set needs at least two digits")
        if digits[0] != 0 or any(c < 0 for c in digits):
            raise ValueError("digits must be nonnegative and contain 0")
        if self.mode == MULTIPLICATIVE and digits != (0, 1):
            raise ValueError("multiplicative cubes use exponent digits {0, 1}")
        gens = tuple(self.ring.normalize(int(g)) for g in self.generators)
        a0 = self.ring.normalize(int(self.a0))
        if self.mode == MULTIPLICATIVE:
            if a0 == 0:
                raise ValueError("multiplicative cube needs a nonzero base point")
            if any(g == 0 for g in gens):
                raise ValueError("multiplicative generators must be nonzero")
        else:
            if any(g == 0 for g in gens):
                raise ValueError("generators must be nonzero")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "a0", a0)

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def height(self) -> int:
        return max(self.digits)

    @property
    def has_interval_digits(self) -> bool:
        return self.digits == tuple(range(len(self.digits)))

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "a0": self.a0,
            "generators": list(self.generators),
            "digits": list(self.digits),
            "ring": self.ring.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CubeSpec":
        return cls(
            ring=AmbientRing.from_json_dict(data["ring"]),
            a0=int(data["a0"]),
            generators=tuple(int(g) for g in data["generators"]),
            digits=tuple(int(c) for c in data["digits"]),
            mode=data["mode"],
        )


def _vector_count(spec: CubeSpec) -> int:
    return len(spec.digits) ** spec.dimension


def _value_set(spec: CubeSpec, cap: int) -> set:
    """Raw Python set of cube values, built one generator at a time."""
    if _vector_count(spec) > cap:
        raise CapExceededError(
            f"{len(spec.digits)}^{spec.dimension} digit vectors exceed cap {cap}"
        )
    ring = spec.ring
    values = {spec.a0}
    if spec.mode == ADDITIVE:
        if ring.kind == PRIME_FIELD:
            p = ring.modulus
            for g in spec.generators:
                steps = [(c * g) % p for c in spec.digits]
                values = {(v + s) % p for v in values for s in steps}
        else:
            cap_mag = ring.magnitude_cap
            for g in spec.generators:
                steps = [c * g for c in spec.digits]
                big = max(abs(s) for s in steps)
                if max(abs(v) for v in values) + big > cap_mag:
                    raise CapExceededError("cube values exceed the magnitude cap")
                values = {v + s for v in values for s in steps}
    else:
        if ring.kind == PRIME_FIELD:
            p = ring.modulus
            for g in spec.generators:
                values = values | {(v * g) % p for v in values}
        else:
            cap_mag = ring.magnitude_cap
            for g in spec.generators:
                if max(abs(v) for v in values) * abs(g) > cap_mag:
                    raise CapExceededError("cube values exceed the magnitude cap")
                values = values | {v * g for v in values}
    return values


def enumerate_cube(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> FiniteSet:
    """The set of values the cube attains (duplicates collapsed)."""
    return FiniteSet(spec.ring, tuple(sorted(_value_set(spec, cap))))


def is_proper(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff all |D|^d digit vectors give pairwise distinct values."""
    return len(_value_set(spec, cap)) == _vector_count(spec)


def subcube(spec: CubeSpec, indices) -> CubeSpec:
    """The cube restricted to nonzero digits only at the given generator
    positions (0-based).  The empty index set gives the singleton {a_0}."""
    picked = sorted(set(int(i) for i in indices))
    if picked and (picked[0] < 0 or picked[-1] >= spec.dimension):
        raise ValueError(f"indices out of range for dimension {spec.dimension}")
    return CubeSpec(
        ring=spec.ring,
        a0=spec.a0,
        generators=tuple(spec.generators[i] for i in picked),
        digits=spec.digits,
        mode=spec.mode,
    )


def symmetry_witness(spec: CubeSpec) -> int:
    """The reflection point U + 2*a_0, U = h * sum(generators).

    An interval-digit additive cube satisfies Q = (U + 2*a_0) - Q: replacing
    every digit eps_j by h - eps_j reflects the cube onto itself.  Missing
    digit sets break the identity, so they are rejected.
    """
    if spec.mode != ADDITIVE:
        raise ValueError("symmetry witness is defined for additive cubes")
    if not spec.has_interval_digits:
        raise ValueError("symmetry witness needs interval digits {0..h}")
    ring = spec.ring
    u = ring.normalize(0)
    for g in spec.generators:
        u = ring.add(u, ring.mul(spec.height, g))
    return ring.add(u, ring.add(spec.a0, spec.a0))


def is_symmetric(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Check Q == witness - Q by exhaustive reflection of the value set."""
    w = symmetry_witness(spec)
    ring = spec.ring
    values = _value_set(spec, cap)
    return all(ring.sub(w, v) in values for v in values)


def _subcube_size(spec: CubeSpec, indices, cap: int) -> int:
    return len(_value_set(subcube(spec, indices), cap))


def split_balanced(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP):
    """Bipartition [d] = X | Y with |Q(X)| <= |Q(Y)| <= |D| * |Q(X)|.

    Greedy pass: each generator joins the side whose current subcube is
    smaller (ties go to X).  Adding one generator multiplies a side's size
    by at most |D|, so the two sizes can never drift past a factor |D|;
    an exhaustive scan over bipartitions is kept as a belt-and-braces
    fallback for small d.
    """
    ring = spec.ring
    d = spec.dimension
    sides: list[set] = [{spec.a0}, {spec.a0}]
    index_sides: list[list[int]] = [[], []]
    if len(spec.digits) ** d > cap:
        raise CapExceededError("subcube enumeration exceeds cap")
    for j, g in enumerate(spec.generators):
        pick = 0 if len(sides[0]) <= len(sides[1]) else 1
        cur = sides[pick]
        if spec.mode == ADDITIVE:
            steps = [ring.mul(c, g) for c in spec.digits]
            cur = {ring.add(v, s) for v in cur for s in steps}
        else:
            cur = cur | {ring.mul(v, g) for v in cur}
        sides[pick] = cur
        index_sides[pick].append(j)
    if len(sides[0]) > len(sides[1]):
        sides.reverse()
        index_sides.reverse()
    if len(sides[1]) <= len(spec.digits) * len(sides[0]):
        return tuple(index_sides[0]), tuple(index_sides[1])
    # Unreachable by the size argument above; scan bipartitions anyway.
    if d > _SPLIT_EXHAUSTIVE_MAX_D:
        raise CapExceededError("balanced split fallback infeasible at this dimension")
    everything = list(range(d))
    for r in range(d + 1):
        for xs in combinations(everything, r):
            ys = tuple(i for i in everything if i not in xs)
            sx = _subcube_size(spec, xs, cap)
            sy = _subcube_size(spec, ys, cap)
            if sx <= sy <= len(spec.digits) * sx:
                return xs, ys
            if sy <= sx <= len(spec.digits) * sy:
                return ys, xs
    raise AssertionError("no balanced bipartition found; this contradicts the size argument")
