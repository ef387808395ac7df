"""Structural decompositions and inequality checkers.

Each checker evaluates both sides of a proven inequality exactly and
returns a Verdict; a False verdict on valid inputs would falsify the
statement (or expose a bug here), so the test suite asserts them wholesale.
Popularity thresholds of the form r >= sqrt(q) are compared as r^2 >= q,
never through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import sqrt

from .cube import (
    ADDITIVE,
    DEFAULT_ENUM_CAP,
    MULTIPLICATIVE,
    CubeSpec,
    FiniteSet,
    enumerate_cube,
    is_proper,
)
from .energy import energy_pair
from .numeric import PRIME_FIELD, AmbientRing, CapExceededError
from .setops import DEFAULT_PAIR_CAP, DIFF, SUM, pairwise, pairwise_set

OLMEZOV_TERM_CAP = 10**9


@dataclass(frozen=True)
class Verdict:
    """Outcome of one inequality check, both sides exact."""

    name: str
    params: dict
    lhs: int
    rhs: int | float
    passed: bool
    seed: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.passed,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SDDecomposition:
    """Popular sums S and popular differences D of a height-1 cube Q.

    S collects x with r_{Q+Q}(x) >= sqrt(|Q|), D likewise for Q - Q.  Every
    pair (b1, b2) of cube elements lands in at least one of them: b1 + b2
    in S or b1 - b2 in D.
    """

    cube_set: FiniteSet
    sums: FiniteSet
    diffs: FiniteSet
    threshold: float

    def coverage_ok(self) -> bool:
        ring = self.cube_set.ring
        p = ring.modulus
        s_members = self.sums._members
        d_members = self.diffs._members
        elems = self.cube_set.elements
        if p is None:
            for b1 in elems:
                for b2 in elems:
                    if b1 + b2 not in s_members and b1 - b2 not in d_members:
                        return False
        else:
            for b1 in elems:
                for b2 in elems:
                    if (b1 + b2) % p not in s_members and (b1 - b2) % p not in d_members:
                        return False
        return True

    def sizes_ok(self) -> bool:
        q = len(self.cube_set)
        return len(self.sums) ** 2 <= q**3 and len(self.diffs) ** 2 <= q**3


def _require_height1(spec: CubeSpec) -> None:
    if spec.mode != ADDITIVE:
        raise ValueError("decomposition is defined for additive cubes")
    if spec.digits != (0, 1):
        raise ValueError("decomposition needs height-1 digits {0, 1}")


def sd_decompose(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> SDDecomposition:
    _require_height1(spec)
    q_set = enumerate_cube(spec, cap=cap)
    q = len(q_set)
    _, plus = pairwise(SUM, q_set, q_set)
    _, minus = pairwise(DIFF, q_set, q_set)
    popular_sums = [x for x, c in plus.counts.items() if c * c >= q]
    popular_diffs = [x for x, c in minus.counts.items() if c * c >= q]
    return SDDecomposition(
        cube_set=q_set,
        sums=FiniteSet(spec.ring, tuple(sorted(popular_sums))),
        diffs=FiniteSet(spec.ring, tuple(sorted(popular_diffs))),
        threshold=sqrt(q),
    )


def sd_popularity_ok(spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Pointwise form behind the coverage: for a proper height-1 cube,
    r_{Q+Q}(q1+q2) + r_{Q-Q}(q1-q2) >= 2 sqrt(|Q|) for every pair."""
    _require_height1(spec)
    if not is_proper(spec, cap=cap):
        raise ValueError("the pointwise popularity bound is stated for proper cubes")
    q_set = enumerate_cube(spec, cap=cap)
    q = len(q_set)
    _, plus = pairwise(SUM, q_set, q_set)
    _, minus = pairwise(DIFF, q_set, q_set)
    pc, mc = plus.counts, minus.counts
    p = spec.ring.modulus
    for q1 in q_set.elements:
        for q2 in q_set.elements:
            if p is None:
                r = pc[q1 + q2] + mc[q1 - q2]
            else:
                r = pc[(q1 + q2) % p] + mc[(q1 - q2) % p]
            if r * r < 4 * q:
                return False
    return True


def energy_lower_check(B: FiniteSet, spec: CubeSpec, *, cap: int = DEFAULT_ENUM_CAP) -> Verdict:
    """E^+(B, Q) >= |B|^2 sqrt(|Q|) for any B inside a height-1 cube Q."""
    _require_height1(spec)
    q_set = enumerate_cube(spec, cap=cap)
    if any(b not in q_set for b in B.elements):
        raise ValueError("B must be a subset of the cube")
    value = energy_pair(ADDITIVE, B, q_set).value
    q = len(q_set)
    nb = len(B)
    return Verdict(
        name="energy_lower",
        params={"|B|": nb, "|Q|": q, "d": spec.dimension},
        lhs=value,
        rhs=nb * nb * sqrt(q),
        passed=value * value >= nb**4 * q,
    )


def _group_view(mode: str, ring: AmbientRing):
    """(combine, inverse, identity) for the ambient group of shifts."""
    if mode == ADDITIVE:
        return ring.add, ring.neg, ring.normalize(0)
    if ring.kind == PRIME_FIELD:
        p = ring.modulus

        def comb(a, b):
            return a * b % p

        def inv(a):
            return pow(a, -1, p)

        return comb, inv, 1

    def comb(a, b):
        return a * b

    def inv(a):
        return Fraction(1, a) if a not in (1, -1) else a

    return comb, inv, 1


def olmezov_sides(
    A: FiniteSet,
    B: FiniteSet,
    D: FiniteSet,
    n: int,
    s: int,
    m: int,
    mode: str = ADDITIVE,
    *,
    term_cap: int = OLMEZOV_TERM_CAP,
    seed: int | None = None,
) -> Verdict:
    """Both sides of the Hoelder chain bounding sigma = #{(x, y) in A x B :
    y - x in D} (y x^{-1} in multiplicative mode).

    lhs = sigma^(mn).  rhs multiplies |A|^((n-1)m) |B|^(s(m-1))
    |D|^((n-s)(m-1)) into the grid sum over shift tuples (x_2..x_m,
    y_1..y_s) of C_m(B)(x)^(n-s) * C_{m+s}(A..A,B..B)(x, y) * prod_{i,j}
    D(y_i - x_j), with x_1 pinned to the identity.  The grid is walked
    through the base point z of the long correlation, so only tuples with
    a live C_{m+s} term are ever touched, and the D-product factorizes
    over the y_i.
    """
    if not (1 <= s < n):
        raise ValueError("need 1 <= s < n")
    if m < 1:
        raise ValueError("need m >= 1")
    if mode not in (ADDITIVE, MULTIPLICATIVE):
        raise ValueError(f"unknown mode {mode!r}")
    ring = A.ring
    if B.ring != ring or D.ring != ring:
        raise ValueError("operands live in different rings")
    if mode == MULTIPLICATIVE and 0 in A:
        raise ValueError("multiplicative mode needs 0 outside A")
    if len(A) ** m * max(len(B), 1) ** s * (m + s) > term_cap:
        raise CapExceededError("shift grid exceeds the term cap")
    comb, invert, _ = _group_view(mode, ring)
    a_members, b_members, d_members = A._members, B._members, D._members

    sigma = 0
    for x in A.elements:
        ix = invert(x)
        for y in B.elements:
            if comb(y, ix) in d_members:
                sigma += 1
    lhs = sigma ** (m * n)

    coef = len(A) ** ((n - 1) * m) * len(B) ** (s * (m - 1)) * len(D) ** ((n - s) * (m - 1))
    corr_memo: dict = {}

    def corr_m_of_b(xs: tuple) -> int:
        val = corr_memo.get(xs)
        if val is None:
            val = 0
            for z in B.elements:
                for x in xs:
                    if comb(z, x) not in b_members:
                        break
                else:
                    val += 1
            corr_memo[xs] = val
        return val

    inv_memo: dict = {}

    def inv_of(x):
        val = inv_memo.get(x)
        if val is None:
            val = invert(x)
            inv_memo[x] = val
        return val

    grid_sum = 0
    power = n - s
    for z in A.elements:
        iz = inv_of(z)
        xs_cand = [comb(a, iz) for a in A.elements]
        ys_cand = [comb(b, iz) for b in B.elements]
        for xs in iter_product(xs_cand, repeat=m - 1):
            cm = corr_m_of_b(xs)
            if cm == 0:
                continue
            inv_xs = [inv_of(x) for x in xs]
            live = 0
            for y in ys_cand:
                if y not in d_members:
                    continue
                for ixj in inv_xs:
                    if comb(y, ixj) not in d_members:
                        break
                else:
                    live += 1
            if live:
                grid_sum += cm**power * live**s
    rhs = coef * grid_sum
    return Verdict(
        name="olmezov",
        params={"n": n, "s": s, "m": m, "mode": mode, "sizes": [len(A), len(B), len(D)]},
        lhs=lhs,
        rhs=rhs,
        passed=lhs <= rhs,
        seed=seed,
    )


def gmr_check(sets, *, cap: int = DEFAULT_PAIR_CAP, seed: int | None = None) -> Verdict:
    """Projection bound for sumsets: with S = A_1 + ... + A_k and S_j the
    sum leaving out A_j, |S|^(k-1) <= prod_j |S_j|."""
    sets = list(sets)
    k = len(sets)
    if k < 2:
        raise ValueError("need at least two sets")
    ring = sets[0].ring
    for t in sets[1:]:
        if t.ring != ring:
            raise ValueError("operands live in different rings")
    prefix = [sets[0]]
    for t in sets[1:]:
        prefix.append(pairwise_set(SUM, prefix[-1], t, cap=cap))
    suffix = [sets[-1]]
    for t in reversed(sets[:-1]):
        suffix.append(pairwise_set(SUM, suffix[-1], t, cap=cap))
    suffix.reverse()
    total = prefix[-1]
    leave_out_sizes = []
    for j in range(k):
        if j == 0:
            s_j = suffix[1]
        elif j == k - 1:
            s_j = prefix[k - 2]
        else:
            s_j = pairwise_set(SUM, prefix[j - 1], suffix[j + 1], cap=cap)
        leave_out_sizes.append(len(s_j))
    lhs = len(total) ** (k - 1)
    rhs = 1
    for v in leave_out_sizes:
        rhs *= v
    return Verdict(
        name="gmr",
        params={"k": k, "sizes": [len(t) for t in sets], "leave_out": leave_out_sizes},
        lhs=lhs,
        rhs=rhs,
        passed=lhs <= rhs,
        seed=seed,
    )


def shifted_intersection_count(
    S: FiniteSet, x: int, Pi: FiniteSet, *, cap: int = DEFAULT_PAIR_CAP
) -> int:
    """#{(pi1, pi2, q1, q2) in Pi^2 x S^2 : pi1/q1 - pi2/q2 = x} over F_p."""
    ring = S.ring
    if ring.kind != PRIME_FIELD:
        raise ValueError("shifted intersection counting needs field mode")
    if Pi.ring != ring:
        raise ValueError("operands live in different rings")
    if 0 in S:
        raise ValueError("S may not contain 0: its elements are denominators")
    if len(S) * len(Pi) > cap:
        raise CapExceededError("ratio table exceeds cap")
    p = ring.modulus
    x = x % p
    ratios: dict = {}
    get = ratios.get
    for q in S.elements:
        iq = pow(q, -1, p)
        for pi in Pi.elements:
            t = (pi * iq) % p
            ratios[t] = get(t, 0) + 1
    return sum(c * ratios.get((t + x) % p, 0) for t, c in ratios.items())


def intersection_bound_verdict(S: FiniteSet, x: int, Pi: FiniteSet | None = None) -> Verdict:
    """|S and (S - x)| <= count / |S|^2 with Pi defaulting to the product
    set SS, compared without division."""
    from .setops import PROD

    ring = S.ring
    p = ring.modulus
    if Pi is None:
        Pi = pairwise_set(PROD, S, S)
    count = shifted_intersection_count(S, x, Pi)
    inter = sum(1 for u in S.elements if (u + x) % p in S)
    lhs = inter * len(S) ** 2
    return Verdict(
        name="shifted_intersection",
        params={"|S|": len(S), "|Pi|": len(Pi), "x": x % p, "p": p},
        lhs=lhs,
        rhs=count,
        passed=lhs <= count,
    )
