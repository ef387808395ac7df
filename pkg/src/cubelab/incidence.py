"""Point-line and point-plane incidence counting over F_p, by brute force.

Counts are exact; the bound functions evaluate the right-hand sides of the
standard incidence theorems with the implicit constant set to 1, so callers
can report measured/bound ratios.  Nothing here asserts those bounds: with
unknown constants a ratio above 1 falsifies nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .numeric import is_prime


def _require_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class Line:
    """y = a x + b, or the vertical x = a."""

    vertical: bool
    a: int
    b: int = 0

    def contains(self, x: int, y: int, p: int) -> bool:
        if self.vertical:
            return x % p == self.a % p
        return (self.a * x + self.b - y) % p == 0


@dataclass(frozen=True)
class LineSet:
    p: int
    lines: tuple[Line, ...]

    @classmethod
    def from_lines(cls, p: int, lines) -> "LineSet":
        _require_prime(p)
        canonical = []
        seen = set()
        for line in lines:
            if line.vertical:
                key = (True, line.a % p, 0)
            else:
                key = (False, line.a % p, line.b % p)
            if key not in seen:
                seen.add(key)
                canonical.append(Line(key[0], key[1], key[2]))
        return cls(p, tuple(canonical))

    @classmethod
    def all_lines(cls, p: int) -> "LineSet":
        """All p^2 + p distinct lines of the affine plane."""
        _require_prime(p)
        lines = [Line(False, a, b) for a in range(p) for b in range(p)]
        lines.extend(Line(True, c) for c in range(p))
        return cls(p, tuple(lines))

    def __len__(self) -> int:
        return len(self.lines)


def normalize_points_2d(p: int, points) -> tuple[tuple[int, int], ...]:
    _require_prime(p)
    return tuple(sorted({(x % p, y % p) for x, y in points}))


def incidences_per_line(points, line_set: LineSet) -> list[int]:
    p = line_set.p
    return [sum(1 for (x, y) in points if line.contains(x, y, p)) for line in line_set.lines]


def incidences_per_point(points, line_set: LineSet) -> list[int]:
    p = line_set.p
    return [sum(1 for line in line_set.lines if line.contains(x, y, p)) for (x, y) in points]


def count_incidences_2d(points, line_set: LineSet) -> int:
    return sum(incidences_per_line(points, line_set))


def szt_rhs(n_points: int, n_lines: int) -> float:
    """Szemeredi-Trotter shape with constant 1."""
    return (n_points * n_lines) ** (2.0 / 3.0) + n_points + n_lines


def grid_line_rhs(n_a: int, n_b: int, n_lines: int) -> float:
    """Error-term shape for points A x B against lines over F_p, constant 1."""
    return n_a**0.75 * n_b**0.5 * n_lines**0.75 + n_lines + n_a * n_b


def grid_line_main(n_a: int, n_b: int, n_lines: int, p: int) -> float:
    return n_a * n_b * n_lines / p


@dataclass(frozen=True)
class Plane:
    """a x + b y + c z = e with (a, b, c) scaled so its first nonzero
    coefficient is 1."""

    a: int
    b: int
    c: int
    e: int

    def contains(self, x: int, y: int, z: int, p: int) -> bool:
        return (self.a * x + self.b * y + self.c * z - self.e) % p == 0


def canonical_plane(a: int, b: int, c: int, e: int, p: int) -> Plane:
    a, b, c, e = a % p, b % p, c % p, e % p
    for lead in (a, b, c):
        if lead:
            s = pow(lead, -1, p)
            return Plane((a * s) % p, (b * s) % p, (c * s) % p, (e * s) % p)
    raise ValueError("plane normal may not be zero")


@dataclass(frozen=True)
class PlaneSet:
    p: int
    planes: tuple[Plane, ...]

    @classmethod
    def from_coefficients(cls, p: int, rows) -> "PlaneSet":
        _require_prime(p)
        return cls(p, tuple(sorted({canonical_plane(a, b, c, e, p) for a, b, c, e in rows},
                                   key=lambda q: (q.a, q.b, q.c, q.e))))

    def __len__(self) -> int:
        return len(self.planes)


def normalize_points_3d(p: int, points) -> tuple[tuple[int, int, int], ...]:
    _require_prime(p)
    return tuple(sorted({(x % p, y % p, z % p) for x, y, z in points}))


def max_collinear(points, p: int) -> int:
    """Largest number of the given points on a common line of F_p^3.

    Every unordered pair is keyed by its canonical line (direction scaled
    to leading coefficient 1, base point shifted to zero that coordinate);
    collinear triples collide on the key.
    """
    pts = list(points)
    n = len(pts)
    if n <= 1:
        return n
    best = 1
    lines: dict = {}
    for i in range(n):
        xi, yi, zi = pts[i]
        for j in range(i + 1, n):
            dx = (pts[j][0] - xi) % p
            dy = (pts[j][1] - yi) % p
            dz = (pts[j][2] - zi) % p
            if dx:
                s = pow(dx, -1, p)
                lead = 0
            elif dy:
                s = pow(dy, -1, p)
                lead = 1
            else:
                s = pow(dz, -1, p)
                lead = 2
            direction = ((dx * s) % p, (dy * s) % p, (dz * s) % p)
            t = (xi, yi, zi)[lead]
            base = (
                (xi - t * direction[0]) % p,
                (yi - t * direction[1]) % p,
                (zi - t * direction[2]) % p,
            )
            key = (direction, base)
            members = lines.get(key)
            if members is None:
                lines[key] = members = set()
            members.add(i)
            members.add(j)
            if len(members) > best:
                best = len(members)
    return best


def count_incidences_3d(points, plane_set: PlaneSet) -> tuple[int, int]:
    """(incidence count, max collinear k) for points against planes."""
    p = plane_set.p
    count = 0
    for plane in plane_set.planes:
        for x, y, z in points:
            if plane.contains(x, y, z, p):
                count += 1
    return count, max_collinear(points, p)


def plane_rhs(n_points: int, n_planes: int, k: int) -> float:
    """Error-term shape for point-plane incidences, constant 1."""
    return n_points**0.5 * n_planes + k * n_planes


def plane_main(n_points: int, n_planes: int, p: int) -> float:
    return n_points * n_planes / p


def instance_to_json(p: int, points, lines: LineSet | None = None, planes: PlaneSet | None = None) -> str:
    data: dict = {"p": p, "points": [list(pt) for pt in points]}
    if lines is not None:
        data["lines"] = [
            {"vertical": ln.vertical, "a": ln.a, "b": ln.b} for ln in lines.lines
        ]
    if planes is not None:
        data["planes"] = [[q.a, q.b, q.c, q.e] for q in planes.planes]
    return json.dumps(data, indent=2)


def instance_from_json(text: str) -> dict:
    data = json.loads(text)
    p = int(data["p"])
    _require_prime(p)
    out: dict = {"p": p}
    if "lines" in data:
        out["points"] = normalize_points_2d(p, [tuple(pt) for pt in data["points"]])
        out["lines"] = LineSet.from_lines(
            p, [Line(bool(ln["vertical"]), int(ln["a"]), int(ln.get("b", 0))) for ln in data["lines"]]
        )
    if "planes" in data:
        out["points"] = normalize_points_3d(p, [tuple(pt) for pt in data["points"]])
        out["planes"] = PlaneSet.from_coefficients(p, [tuple(row) for row in data["planes"]])
    return out
