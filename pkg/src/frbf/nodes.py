"""Node generation: Halton interiors and Cartesian boundaries on boxes."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DimensionError, DomainError, DuplicateNodeError

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)
_MIN_SEPARATION = 1e-12

HALTON_CARTESIAN = "halton_interior_cartesian_boundary"


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box [lower_1, upper_1] x ... x [lower_d, upper_d]."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lower) != len(upper) or not lower:
            raise DomainError("lower and upper bounds must have equal, nonzero length")
        for lo, hi in zip(lower, upper):
            if not lo < hi:
                raise DomainError(f"need lower < upper per axis, got [{lo}, {hi}]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def square(cls, a: float, b: float, d: int = 2) -> "Domain":
        return cls((a,) * d, (b,) * d)

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def scale_b(self) -> float:
        """Kernel scale: the largest upper bound across axes."""
        return max(self.upper)

    @property
    def sides(self) -> np.ndarray:
        return np.array(self.upper) - np.array(self.lower)

    def contains(self, x, strict: bool = False) -> bool:
        x = np.asarray(x, dtype=float)
        lo, hi = np.array(self.lower), np.array(self.upper)
        if strict:
            return bool(np.all(x > lo) and np.all(x < hi))
        return bool(np.all(x >= lo) and np.all(x <= hi))


@dataclass(frozen=True)
class NodeSet:
    """Interior and boundary points, kept in that fixed order."""

    interior: np.ndarray
    boundary: np.ndarray

    def __post_init__(self):
        interior = np.atleast_2d(np.asarray(self.interior, dtype=float))
        boundary = np.atleast_2d(np.asarray(self.boundary, dtype=float))
        if interior.size == 0:
            interior = interior.reshape(0, boundary.shape[1] if boundary.size else 1)
        if boundary.size == 0:
            boundary = boundary.reshape(0, interior.shape[1] if interior.size else 1)
        if interior.shape[1] != boundary.shape[1]:
            raise DomainError("interior and boundary dimensions differ")
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "boundary", boundary)
        pts = self.points
        if len(pts) > 1:
            diff = pts[:, None, :] - pts[None, :, :]
            dist = np.sqrt(np.sum(diff**2, axis=-1))
            np.fill_diagonal(dist, np.inf)
            if dist.min() <= _MIN_SEPARATION:
                raise DuplicateNodeError(
                    f"nodes closer than {_MIN_SEPARATION}: min distance {dist.min()}"
                )

    @property
    def points(self) -> np.ndarray:
        """All nodes, interior first then boundary."""
        return np.vstack([self.interior, self.boundary])

    @property
    def n_interior(self) -> int:
        return len(self.interior)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)

    @property
    def d(self) -> int:
        return self.interior.shape[1]


def _radical_inverse(k: int, base: int) -> float:
    inv, f = 0.0, 1.0 / base
    while k > 0:
        inv += f * (k % base)
        k //= base
        f /= base
    return inv


def halton_points(n: int, d: int, skip: int = 0) -> np.ndarray:
    """First n Halton points in (0,1)^d, starting at index skip + 1.

    Coordinate j uses the j-th prime as base; the index-0 point (the
    origin) is never produced.
    """
    if d < 1 or d > len(_PRIMES):
        raise DimensionError(f"Halton generation supports 1 <= d <= {len(_PRIMES)}")
    if n < 0 or skip < 0:
        raise DomainError("counts must be non-negative")
    out = np.empty((n, d))
    for i in range(n):
        k = skip + i + 1
        for j in range(d):
            out[i, j] = _radical_inverse(k, _PRIMES[j])
    return out


def boundary_grid(domain: Domain, per_side: int) -> np.ndarray:
    """Equally spaced points on every face, shared corners kept once.

    Faces are walked in axis order (low face then high face); each face
    carries a Cartesian grid with per_side points per remaining axis.
    """
    if per_side < 0:
        raise DomainError("per_side must be non-negative")
    if per_side == 0:
        return np.empty((0, domain.d))
    if per_side == 1:
        raise DomainError("per_side=1 cannot place corners exactly once; use >= 2")
    d = domain.d
    if d == 1:
        return np.array([[domain.lower[0]], [domain.upper[0]]])
    axes = [np.linspace(domain.lower[j], domain.upper[j], per_side) for j in range(d)]
    seen = {}
    for j in range(d):
        for face_value in (domain.lower[j], domain.upper[j]):
            rest = [axes[k] for k in range(d) if k != j]
            for combo in product(*rest):
                pt = list(combo)
                pt.insert(j, face_value)
                seen.setdefault(tuple(pt), None)
    return np.array(list(seen.keys()))


def make_node_set(
    domain: Domain,
    n_interior: int,
    boundary_per_side: int,
    layout: str = HALTON_CARTESIAN,
    skip: int = 0,
    inset_margin: float = 0.0,
    inset_ring: bool = False,
    inset_offset: float = None,
) -> NodeSet:
    """Halton interior plus Cartesian boundary nodes on a box.

    The Halton sequence is mapped affinely into the (optionally inset)
    open box.  With inset_ring=True an extra rectangle of near-boundary
    nodes is appended to the interior, offset inward by inset_offset
    (default 2% of each side).
    """
    if layout != HALTON_CARTESIAN:
        raise DomainError(f"unknown layout {layout!r}")
    if n_interior < 0 or boundary_per_side < 0:
        raise DomainError("counts must be non-negative")
    lower = np.array(domain.lower)
    sides = domain.sides
    if inset_margin < 0 or 2 * inset_margin >= sides.min():
        if inset_margin != 0.0:
            raise DomainError(f"inset margin {inset_margin} does not fit the domain")
    unit = halton_points(n_interior, domain.d, skip=skip)
    interior = lower + inset_margin + (sides - 2 * inset_margin) * unit
    if inset_ring:
        offset = 0.02 * sides if inset_offset is None else np.full(domain.d, inset_offset)
        ring_domain = Domain(tuple(lower + offset), tuple(lower + sides - offset))
        ring = boundary_grid(ring_domain, boundary_per_side)
        interior = np.vstack([interior, ring]) if len(interior) else ring
    boundary = boundary_grid(domain, boundary_per_side)
    return NodeSet(interior, boundary)


def nodes_to_csv(nodes: NodeSet, path) -> None:
    """Write nodes as x1..xd plus a kind column (interior/boundary)."""
    d = nodes.d
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j + 1}" for j in range(d)] + ["kind"])
        for row in nodes.interior:
            writer.writerow([repr(float(v)) for v in row] + ["interior"])
        for row in nodes.boundary:
            writer.writerow([repr(float(v)) for v in row] + ["boundary"])


def nodes_from_csv(path) -> NodeSet:
    interior, boundary = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[-1] != "kind":
            raise DomainError("node CSV must end with a 'kind' column")
        for row in reader:
            pt = [float(v) for v in row[:-1]]
            if row[-1] == "interior":
                interior.append(pt)
            elif row[-1] == "boundary":
                boundary.append(pt)
            else:
                raise DomainError(f"unknown node kind {row[-1]!r}")
    d = len(interior[0]) if interior else (len(boundary[0]) if boundary else 1)
    interior = np.array(interior).reshape(-1, d)
    boundary = np.array(boundary).reshape(-1, d)
    return NodeSet(interior, boundary)


def star_discrepancy_1d(points) -> float:
    """Exact star discrepancy of a 1-d point set in [0, 1]."""
    x = np.sort(np.asarray(points, dtype=float))
    n = len(x)
    if n == 0:
        return 1.0
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - x, x - (i - 1) / n)))
