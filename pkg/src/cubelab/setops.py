"""Exact pairwise set operations, iterated sums/products, and correlations.

Everything here counts representations exactly: pairwise(op, A, B) returns
both the result set and the full multiplicity map r(x) = #{(a, b) : a op b
= x}.  Ratio sets over the integers are sets of Fractions in lowest terms;
over F_p they are residue sets (zero denominators are always excluded).

Size-only variants (pairwise_set, pairwise_size) skip the counting and use
commutativity / reflection shortcuts, which matters when the inputs have
thousands of elements.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import gcd

from .cube import ADDITIVE, MULTIPLICATIVE, CubeSpec, DEFAULT_ENUM_CAP, FiniteSet, enumerate_cube
from .numeric import INTEGERS, PRIME_FIELD, AmbientRing, CapExceededError

SUM = "sum"
DIFF = "diff"
PROD = "prod"
RATIO = "ratio"

DEFAULT_PAIR_CAP = 1 << 26
DEFAULT_GRID_CAP = 1 << 24


@dataclass(frozen=True)
class MultiplicityMap:
    """r(x): how many input pairs produced each element."""

    ring: AmbientRing
    counts: dict

    def mass(self) -> int:
        return sum(self.counts.values())

    def support(self) -> FiniteSet:
        return FiniteSet(self.ring, tuple(sorted(self.counts)))

    def __getitem__(self, x) -> int:
        return self.counts.get(x, 0)

    def items(self):
        return sorted(self.counts.items())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["element", "count"])
        for x, c in self.items():
            writer.writerow([str(x), c])
        return buf.getvalue()


def _require_same_ring(A: FiniteSet, B: FiniteSet) -> AmbientRing:
    if A.ring != B.ring:
        raise ValueError("operands live in different rings")
    return A.ring


def _check_pair_cap(A: FiniteSet, B: FiniteSet, cap: int) -> None:
    if len(A) * len(B) > cap:
        raise CapExceededError(f"{len(A)}x{len(B)} pairs exceed cap {cap}")


def _check_magnitude(ring: AmbientRing, op: str, A: FiniteSet, B: FiniteSet) -> None:
    """One up-front bound check instead of one per pair."""
    if ring.kind != INTEGERS or not A.elements or not B.elements:
        return
    if any(isinstance(x, Fraction) for x in (A.elements[0], A.elements[-1], B.elements[0], B.elements[-1])):
        return
    ma = max(abs(A.elements[0]), abs(A.elements[-1]))
    mb = max(abs(B.elements[0]), abs(B.elements[-1]))
    worst = ma + mb if op in (SUM, DIFF) else ma * mb if op == PROD else 0
    if worst > ring.magnitude_cap:
        raise CapExceededError(f"{op} results would exceed the magnitude cap")


def pairwise(op: str, A: FiniteSet, B: FiniteSet, *, cap: int = DEFAULT_PAIR_CAP):
    """(result set, multiplicity map) for A op B, op in sum/diff/prod/ratio.

    Ratio skips pairs with zero denominator; its mass is |A| * |B \\ {0}|.
    """
    ring = _require_same_ring(A, B)
    _check_pair_cap(A, B, cap)
    _check_magnitude(ring, op, A, B)
    counts: dict = {}
    get = counts.get
    p = ring.modulus
    if op == SUM:
        if p is None:
            for a in A.elements:
                for b in B.elements:
                    x = a + b
                    counts[x] = get(x, 0) + 1
        else:
            for a in A.elements:
                for b in B.elements:
                    x = (a + b) % p
                    counts[x] = get(x, 0) + 1
    elif op == DIFF:
        if p is None:
            for a in A.elements:
                for b in B.elements:
                    x = a - b
                    counts[x] = get(x, 0) + 1
        else:
            for a in A.elements:
                for b in B.elements:
                    x = (a - b) % p
                    counts[x] = get(x, 0) + 1
    elif op == PROD:
        if p is None:
            for a in A.elements:
                for b in B.elements:
                    x = a * b
                    counts[x] = get(x, 0) + 1
        else:
            for a in A.elements:
                for b in B.elements:
                    x = (a * b) % p
                    counts[x] = get(x, 0) + 1
    elif op == RATIO:
        if p is None:
            for b in B.elements:
                if b == 0:
                    continue
                for a in A.elements:
                    x = Fraction(a, b)
                    counts[x] = get(x, 0) + 1
        else:
            for b in B.elements:
                if b == 0:
                    continue
                ib = pow(b, -1, p)
                for a in A.elements:
                    x = (a * ib) % p
                    counts[x] = get(x, 0) + 1
    else:
        raise ValueError(f"unknown pairwise op {op!r}")
    result = FiniteSet(ring, tuple(sorted(counts)))
    return result, MultiplicityMap(ring, counts)


def _raw_value_set(op: str, A: FiniteSet, B: FiniteSet, cap: int) -> set:
    ring = _require_same_ring(A, B)
    _check_pair_cap(A, B, cap)
    _check_magnitude(ring, op, A, B)
    p = ring.modulus
    ea = A.elements
    if A is B and p is None:
        # Same operand on both sides: halve the work via commutativity
        # (sum, prod), reflection (diff), or reciprocals (ratio).
        n = len(ea)
        if op == SUM:
            return {ea[i] + ea[j] for i in range(n) for j in range(i, n)}
        if op == PROD:
            return {ea[i] * ea[j] for i in range(n) for j in range(i, n)}
        if op == DIFF:
            pos = {ea[j] - ea[i] for i in range(n) for j in range(i + 1, n)}
            out = {-x for x in pos}
            out.update(pos)
            if n:
                out.add(0)
            return out
        if op == RATIO:
            nz = [x for x in ea if x != 0]
            out = set()
            if nz:
                out.add(Fraction(1))
                if len(nz) < n:
                    out.add(Fraction(0))
            m = len(nz)
            for i in range(m):
                x = nz[i]
                for j in range(i + 1, m):
                    y = nz[j]
                    out.add(Fraction(x, y))
                    out.add(Fraction(y, x))
            return out
    eb = B.elements
    if op == SUM:
        if p is None:
            return {a + b for a in ea for b in eb}
        return {(a + b) % p for a in ea for b in eb}
    if op == DIFF:
        if p is None:
            return {a - b for a in ea for b in eb}
        return {(a - b) % p for a in ea for b in eb}
    if op == PROD:
        if p is None:
            return {a * b for a in ea for b in eb}
        return {(a * b) % p for a in ea for b in eb}
    if op == RATIO:
        out = set()
        if p is None:
            for b in eb:
                if b:
                    out.update(Fraction(a, b) for a in ea)
        else:
            for b in eb:
                if b:
                    ib = pow(b, -1, p)
                    out.update((a * ib) % p for a in ea)
        return out
    raise ValueError(f"unknown pairwise op {op!r}")


def pairwise_set(op: str, A: FiniteSet, B: FiniteSet, *, cap: int = DEFAULT_PAIR_CAP) -> FiniteSet:
    """Result set only; multiplicities are not tracked."""
    return FiniteSet(A.ring, tuple(sorted(_raw_value_set(op, A, B, cap))))


def _ratio_pair(a: int, b: int) -> tuple[int, int]:
    if b < 0:
        a, b = -a, -b
    g = gcd(a, b)
    return (a // g, b // g)


def _ratio_size_integers(A: FiniteSet, B: FiniteSet, cap: int) -> int:
    """|A/B| over Z counted on normalized (num, den) pairs.

    Fraction objects are correct but slow to build by the million; a
    gcd-reduced tuple is the same canonical value.
    """
    _check_pair_cap(A, B, cap)
    seen: set = set()
    if A is B:
        nz = [x for x in A.elements if x != 0]
        m = len(nz)
        if m and A.elements[0] > 0:
            # All positive: ratios below 1 pair off with their reciprocals,
            # so store one orientation and count the diagonal once.
            sub_unit: set = set()
            add = sub_unit.add
            for i in range(m):
                x = nz[i]
                for j in range(i + 1, m):
                    y = nz[j]
                    g = gcd(x, y)
                    add((x // g, y // g))
            return 2 * len(sub_unit) + 1
        if nz:
            seen.add((1, 1))
            if m < len(A):
                seen.add((0, 1))
        for i in range(m):
            x = nz[i]
            for j in range(i + 1, m):
                y = nz[j]
                pair = _ratio_pair(x, y)
                seen.add(pair)
                n, d = pair
                seen.add((-d, -n) if n < 0 else (d, n))
        return len(seen)
    for b in B.elements:
        if b == 0:
            continue
        for a in A.elements:
            seen.add(_ratio_pair(a, b))
    return len(seen)


def _diff_size_integers(A: FiniteSet, cap: int) -> int:
    """|A-A| over Z from positive differences only; the set is symmetric."""
    _check_pair_cap(A, A, cap)
    ea = A.elements
    n = len(ea)
    pos = {ea[j] - ea[i] for i in range(n) for j in range(i + 1, n)}
    return 2 * len(pos) + (1 if n else 0)


def pairwise_size(op: str, A: FiniteSet, B: FiniteSet, *, cap: int = DEFAULT_PAIR_CAP) -> int:
    """|A op B| without building a sorted set; the fast path for growth trials."""
    if op == RATIO and A.ring.kind == INTEGERS:
        return _ratio_size_integers(A, B, cap)
    if op == DIFF and A is B and A.ring.kind == INTEGERS:
        return _diff_size_integers(A, cap)
    return len(_raw_value_set(op, A, B, cap))


def _fold_digit_sumset(digits: tuple[int, ...], k: int) -> tuple[int, ...]:
    acc = {0}
    for _ in range(k):
        acc = {c + e for c in acc for e in digits}
    return tuple(sorted(acc))


def _convolve_counts(ring: AmbientRing, counts: dict, values: tuple, op: str, cap: int) -> dict:
    if len(counts) * len(values) > cap:
        raise CapExceededError("convolution step exceeds the pair cap")
    out: dict = {}
    get = out.get
    p = ring.modulus
    if op == SUM:
        if p is None:
            for x, c in counts.items():
                for v in values:
                    y = x + v
                    out[y] = get(y, 0) + c
        else:
            for x, c in counts.items():
                for v in values:
                    y = (x + v) % p
                    out[y] = get(y, 0) + c
    elif op == PROD:
        if p is None:
            for x, c in counts.items():
                for v in values:
                    y = x * v
                    out[y] = get(y, 0) + c
        else:
            for x, c in counts.items():
                for v in values:
                    y = (x * v) % p
                    out[y] = get(y, 0) + c
    else:
        raise ValueError(f"cannot convolve with op {op!r}")
    return out


def iterate_sum(
    spec: CubeSpec,
    k: int,
    *,
    with_multiplicities: bool = True,
    enum_cap: int = DEFAULT_ENUM_CAP,
    pair_cap: int = DEFAULT_PAIR_CAP,
):
    """k-fold sumset kQ of an additive cube, optionally with r_kQ counts.

    The value set needs no convolution: summing k digit vectors coordinate
    by coordinate shows kQ is itself a cube over the k-fold digit sumset,
    so it is enumerated directly.  Multiplicities (representation counts
    over the *set* Q) come from k-1 convolution steps with the indicator
    of Q.
    """
    if spec.mode != ADDITIVE:
        raise ValueError("iterated sumsets are defined for additive cubes")
    if k < 1:
        raise ValueError("k must be at least 1")
    ring = spec.ring
    kd = _fold_digit_sumset(spec.digits, k)
    a0k = spec.a0 * k if ring.kind == INTEGERS else (spec.a0 * k) % ring.modulus
    folded = CubeSpec(ring=ring, a0=a0k, generators=spec.generators, digits=kd, mode=ADDITIVE)
    value_set = enumerate_cube(folded, cap=enum_cap)
    if not with_multiplicities:
        return value_set, None
    base = enumerate_cube(spec, cap=enum_cap)
    counts = dict.fromkeys(base.elements, 1)
    for _ in range(k - 1):
        counts = _convolve_counts(ring, counts, base.elements, SUM, pair_cap)
    if set(counts) != set(value_set.elements):
        raise AssertionError("convolution support disagrees with direct enumeration")
    return value_set, MultiplicityMap(ring, counts)


def iterate_prod(Q: FiniteSet, n: int, *, cap: int = DEFAULT_PAIR_CAP) -> FiniteSet:
    """n-fold product set Q^(n) = Q * ... * Q.

    On a cap overflow the raised error carries .largest_n and .sizes for
    the prefix that did complete.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    acc = Q
    sizes = [len(Q)]
    for step in range(2, n + 1):
        try:
            acc = pairwise_set(PROD, acc, Q, cap=cap)
        except CapExceededError as exc:
            exc.largest_n = step - 1
            exc.sizes = sizes
            raise
        sizes.append(len(acc))
    return acc


@dataclass(frozen=True)
class CorrelationTable:
    """Counts C(x_1..x_k) = #{z : z in A_1, z op x_i in A_{i+1} for all i}."""

    mode: str
    arity: int
    table: dict

    def count(self, shifts) -> int:
        return self.table.get(tuple(shifts), 0)

    def items(self):
        return sorted(self.table.items())


def _apply_shift(ring: AmbientRing, mode: str, z, x):
    if mode == ADDITIVE:
        return ring.add(z, x)
    return ring.mul(z, x)


def correlation(mode: str, sets, shifts="all", *, grid_cap: int = DEFAULT_GRID_CAP) -> CorrelationTable:
    """Higher correlation of k+1 sets: sum over z of the shifted indicators.

    shifts: either a list of k-tuples to evaluate, or "all" to enumerate
    the whole (finite) support grid.  In multiplicative mode the support
    is infinite when every set contains 0, which is rejected.
    """
    if mode not in (ADDITIVE, MULTIPLICATIVE):
        raise ValueError(f"unknown mode {mode!r}")
    sets = list(sets)
    if len(sets) < 2:
        raise ValueError("correlation needs at least two sets")
    ring = sets[0].ring
    for s in sets[1:]:
        if s.ring != ring:
            raise ValueError("correlation sets live in different rings")
    k = len(sets) - 1
    base = sets[0]
    members = [s._members for s in sets]

    def evaluate(point) -> int:
        total = 0
        for z in base.elements:
            for x, m in zip(point, members[1:]):
                if _apply_shift(ring, mode, z, x) not in m:
                    break
            else:
                total += 1
        return total

    table: dict = {}
    if shifts == "all":
        if mode == MULTIPLICATIVE and all(0 in m for m in members):
            raise ValueError("correlation support is not finite: 0 lies in every set")
        candidates = []
        for s in sets[1:]:
            cand = set()
            if mode == ADDITIVE:
                for b in s.elements:
                    for z in base.elements:
                        cand.add(ring.sub(b, z))
            else:
                for z in base.elements:
                    if z == 0:
                        continue
                    if ring.kind == PRIME_FIELD:
                        iz = pow(z, -1, ring.modulus)
                        for b in s.elements:
                            cand.add((b * iz) % ring.modulus)
                    else:
                        for b in s.elements:
                            cand.add(Fraction(b, z))
            candidates.append(sorted(cand))
        grid = 1
        for cand in candidates:
            grid *= len(cand)
        if grid > grid_cap:
            raise CapExceededError(f"correlation grid of {grid} points exceeds cap {grid_cap}")
        for point in iter_product(*candidates):
            c = evaluate(point)
            if c:
                table[point] = c
    else:
        for point in shifts:
            point = tuple(ring.normalize(x) for x in point)
            if len(point) != k:
                raise ValueError(f"shift tuple {point} has arity {len(point)}, expected {k}")
            table[point] = evaluate(point)
    return CorrelationTable(mode=mode, arity=k, table=table)
