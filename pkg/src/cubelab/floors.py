"""Frozen assertable floors for growth experiments.

Theorem-level exponents for cube growth (100/79 for products and 14/11 for
ratios of additive cubes, and the mirrored sum/difference exponents for
multiplicative cubes) hide implicit constants, so measured sizes cannot be
asserted against them directly.  The floors below are deliberately weaker
exponents that generic proper cubes at desk scale clear with a wide margin;
they were calibrated on sweeps over dimensions 4..12 with ten seeds per
dimension (uniform 40-bit generators for additive cubes, 16-bit for
multiplicative ones), where every measured exponent landed above 1.9.

Floors are exact rationals: a measured size M over a cube of size q passes
the floor num/den iff M^den >= q^num, an integer comparison with no float
in sight.
"""

from __future__ import annotations

from fractions import Fraction

GROWTH_FLOORS: dict[str, Fraction] = {
    # additive cubes over Z: product set and ratio set
    "z_additive_prod": Fraction(6, 5),
    "z_additive_ratio": Fraction(6, 5),
    # multiplicative cubes over Z: sumset and difference set
    "z_multiplicative_sum": Fraction(6, 5),
    "z_multiplicative_diff": Fraction(6, 5),
}


def clears_floor(measured: int, base_size: int, floor: Fraction) -> bool:
    """measured >= base_size ** floor, compared exactly on integers."""
    if base_size < 2:
        raise ValueError("floor comparison needs a base of size at least 2")
    return measured**floor.denominator >= base_size**floor.numerator
