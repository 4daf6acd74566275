"""Constructive ingredients for the tube-measure contradiction argument.

The argument that a set cannot be split into two "large" halves by any
tube decomposition runs through a chain of concrete, checkable builds:

1. pack the cross-section ball of a tube with dyadic squares, turning
   the tube into countably many square tubes (truncated at a depth, with
   the measure deficit reported);
2. pick, by pigeonhole, a square tube that keeps at least a (1 - eps)
   share of its mass;
3. refine two selected square widths to an exact common rational width;
4. place disjoint balls of that width inside the two tubes, inscribe an
   eccentric cuboid of cross width eta in each, and align the pair
   inside a single enclosing square tube of half-width eta / 2;
5. compare the cuboid volume against the enclosing tube's cost: with
   parameters chosen here the comparison lands strictly above 1, the
   desired contradiction.

``run_proof_walkthrough`` executes the chain end to end with synthetic
mass data standing in for the unknowable intersection measures, and
reports every step.  Each numbered piece is also exposed on its own.

Packing cells live on an integer lattice: a cell of depth d has center
k * r / 2^d with every component of k odd, so disjointness and ball
containment are integer comparisons, exact at any depth.  Children of
lexicographically sorted parents are again lexicographically sorted, so
the canonical cell order needs no global sort and deep packings can be
streamed instead of stored.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import square_tube_exact_measure
from .errors import (
    DimensionError,
    GeometryError,
    InvariantError,
    NoWitnessError,
    ParameterError,
    StepFailureError,
)
from .geometry import (
    Ball,
    Cuboid,
    Frame,
    MAX_DIM,
    SquareTube,
    Tube,
    orthonormal_frame,
    unit_ball_volume,
    unit_vector,
    volume_exact,
)
from .montecarlo import TAG_PROOF

_SCAN_CHUNK = 1 << 20
_MAX_STORED_CELLS = 8_000_000
_MAX_MATERIALIZED_WEIGHTS = 4_000_000


# ---------------------------------------------------------------------------
# dyadic square packing of a ball


def _seed_cells(m: int) -> np.ndarray:
    """Depth-1 cells: all odd sign vectors, lexicographically sorted."""
    return np.array(sorted(itertools.product((-1, 1), repeat=m)), dtype=np.int32)


def _child_offsets(m: int) -> np.ndarray:
    return np.array(sorted(itertools.product((-1, 1), repeat=m)), dtype=np.int32)


def _classify(cells: np.ndarray, depth: int, need_boundary: bool = True):
    """Masks (inside, boundary) for integer cells against the unit sphere.

    A cell at depth d with center index k (odd components) has corners
    (|k| +/- 1) * r / 2^d, so it lies inside the radius-r ball iff
    sum (|k_i| + 1)^2 <= 4^d and fully outside iff
    sum max(|k_i| - 1, 0)^2 >= 4^d.  Radius-free by design.  float64
    keeps these integer comparisons exact: depth <= 20 bounds |k| by
    2^20, so every square-sum stays far below 2^53.
    """
    thr = float(4 ** depth)
    a = np.abs(cells).astype(np.float64)
    a += 1.0
    far = np.einsum("ij,ij->i", a, a)
    inside = far <= thr
    if not need_boundary:
        return inside, None
    a -= 2.0
    np.maximum(a, 0.0, out=a)
    near = np.einsum("ij,ij->i", a, a)
    boundary = (~inside) & (near < thr)
    return inside, boundary


def _scan_packing(m: int, max_depth: int):
    """Yield (depth, inside_cells) chunks in canonical order.

    Canonical order is depth-major, lexicographic within a depth; the
    parent-major child generation preserves it without sorting.
    """
    frontier = _seed_cells(m)
    offsets = _child_offsets(m)
    for depth in range(1, max_depth + 1):
        last = depth == max_depth
        next_frontier = []
        for start in range(0, len(frontier), _SCAN_CHUNK):
            block = frontier[start : start + _SCAN_CHUNK]
            inside, boundary = _classify(block, depth, need_boundary=not last)
            if np.any(inside):
                yield depth, block[inside]
            if not last and np.any(boundary):
                parents = block[boundary]
                children = (2 * parents)[:, None, :] + offsets[None, :, :]
                next_frontier.append(children.reshape(-1, m))
        if last or not next_frontier:
            return
        frontier = np.concatenate(next_frontier, axis=0)


def _validate_packing_args(m: int, radius: float, max_depth: int) -> float:
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= MAX_DIM - 1:
        raise DimensionError(f"cross-section dimension must be 1..{MAX_DIM - 1}, got {m}")
    radius = float(radius)
    if not (math.isfinite(radius) and radius > 0):
        raise ParameterError(f"radius must be positive, got {radius}")
    if not isinstance(max_depth, (int, np.integer)) or not 1 <= max_depth <= 20:
        raise ParameterError(f"max_depth must be 1..20, got {max_depth}")
    # boundary cells multiply by ~2^(m-1) per level, so this bound must
    # hold before scanning; the stored-cell limit alone would trip only
    # after an impractically long scan in high dimension
    if (m - 1) * (max_depth - 1) > 21:
        raise ParameterError(
            f"max_depth {max_depth} too deep for cross dimension {m}; "
            "the subdivision would not fit in memory"
        )
    return radius


@dataclass(frozen=True)
class SquarePacking:
    """Dyadic squares inside a ball of R^m, in canonical order.

    Pairwise interior-disjoint by lattice construction, each cell inside
    the closed ball by the exact corner check.  ``covered_fraction`` is
    the packed share of the ball volume; it can only grow with depth.
    """

    m: int
    radius: float
    max_depth: int
    cells: dict[int, np.ndarray]
    covered_fraction: float

    @property
    def depth_counts(self) -> dict[int, int]:
        return {d: len(rows) for d, rows in sorted(self.cells.items())}

    @property
    def n_squares(self) -> int:
        return sum(len(rows) for rows in self.cells.values())

    def half_width(self, depth: int) -> Fraction:
        return Fraction(self.radius) / 2 ** depth

    def iter_squares(self):
        """(center array, half-width Fraction) in canonical order."""
        for depth in sorted(self.cells):
            hw = self.half_width(depth)
            scale = self.radius / 2 ** depth
            for row in self.cells[depth]:
                yield row * scale, hw

    @property
    def squares(self) -> list[tuple[np.ndarray, Fraction]]:
        return list(self.iter_squares())

    def square(self, index: int) -> tuple[np.ndarray, Fraction]:
        if index < 0:
            raise ParameterError("square index must be nonnegative")
        for depth in sorted(self.cells):
            rows = self.cells[depth]
            if index < len(rows):
                scale = self.radius / 2 ** depth
                return rows[index] * scale, self.half_width(depth)
            index -= len(rows)
        raise ParameterError("square index out of range")

    def square_exact(self, index: int) -> tuple[tuple[Fraction, ...], Fraction]:
        """Exact rational center and half-width of one square."""
        remaining = int(index)
        for depth in sorted(self.cells):
            rows = self.cells[depth]
            if remaining < len(rows):
                r = Fraction(self.radius)
                center = tuple(r * int(k) / 2 ** depth for k in rows[remaining])
                return center, self.half_width(depth)
            remaining -= len(rows)
        raise ParameterError("square index out of range")

    def to_dict(self, include_squares: bool | None = None) -> dict:
        """JSON-ready summary; squares listed with exact rationals.

        Squares are included by default only up to 100000 cells; the
        census fields remain exact either way.
        """
        if include_squares is None:
            include_squares = self.n_squares <= 100_000
        out = {
            "m": self.m,
            "radius": self.radius,
            "max_depth": self.max_depth,
            "n_squares": self.n_squares,
            "depth_counts": {str(d): c for d, c in self.depth_counts.items()},
            "covered_fraction": self.covered_fraction,
        }
        if include_squares:
            squares = []
            r = Fraction(self.radius)
            for depth in sorted(self.cells):
                hw = self.half_width(depth)
                for row in self.cells[depth]:
                    center = [r * int(k) / 2 ** depth for k in row]
                    squares.append({"center": center, "half_width": hw})
            out["squares"] = _jsonable(squares)
        return out


def _covered_fraction(m: int, counts: dict[int, int]) -> float:
    scaled = sum(
        count * Fraction(1, 2 ** (depth - 1)) ** m for depth, count in counts.items()
    )
    return float(scaled) / unit_ball_volume(m)


def ball_square_packing(m: int, radius: float, max_depth: int) -> SquarePacking:
    """Whitney-style dyadic square packing of the radius-r ball in R^m.

    Cells start at side r (depth 1) and halve per depth; a cell is kept
    once it fits entirely inside the ball, otherwise subdivided until
    max_depth.  Deep packings in high dimension can hold millions of
    cells; storage is refused beyond a sanity limit since the streaming
    census below serves that regime.
    """
    radius = _validate_packing_args(m, radius, max_depth)
    cells: dict[int, list[np.ndarray]] = {}
    total = 0
    for depth, block in _scan_packing(m, max_depth):
        total += len(block)
        if total > _MAX_STORED_CELLS:
            raise ParameterError(
                f"packing exceeds {_MAX_STORED_CELLS} stored cells; "
                "reduce max_depth for this dimension"
            )
        cells.setdefault(depth, []).append(block)
    packed = {d: np.concatenate(blocks, axis=0) for d, blocks in cells.items()}
    counts = {d: len(rows) for d, rows in packed.items()}
    return SquarePacking(
        m=m,
        radius=radius,
        max_depth=max_depth,
        cells=packed,
        covered_fraction=_covered_fraction(m, counts),
    )


def _packing_census(m: int, max_depth: int) -> dict[int, int]:
    """Cell counts per depth without storing the cells."""
    counts: dict[int, int] = {}
    for depth, block in _scan_packing(m, max_depth):
        counts[depth] = counts.get(depth, 0) + len(block)
    return counts


def _packing_cell_by_rank(m: int, max_depth: int, rank: int) -> tuple[int, np.ndarray]:
    """(depth, integer cell) of the rank-th cell in canonical order."""
    seen = 0
    for depth, block in _scan_packing(m, max_depth):
        if rank < seen + len(block):
            return depth, block[rank - seen].copy()
        seen += len(block)
    raise ParameterError("cell rank out of range")


def subdivide_tube(tube: Tube, max_depth: int) -> list[SquareTube]:
    """Square tubes packing a round tube, one per cross-section square.

    The union of the returned tubes sits inside the round tube and their
    total cost equals the packed share of its exact measure.
    """
    packing = ball_square_packing(tube.dim - 1, tube.radius, max_depth)
    if packing.n_squares > 1_000_000:
        raise ParameterError("subdivision too large to materialize; lower max_depth")
    frame = orthonormal_frame(tube.axis)
    out = []
    for center, hw in packing.iter_squares():
        anchor = tube.point + center @ frame.cross
        out.append(SquareTube(frame=frame, anchor=anchor, half_width=hw))
    return out


# ---------------------------------------------------------------------------
# pigeonhole and refinement


def pigeonhole_select(masses, weights, eps: float) -> int:
    """Smallest index i with weights[i] >= (1 - eps) * masses[i].

    Precondition: sum(weights) >= (1 - eps) * sum(masses); under it a
    qualifying index must exist (else the total would fall short), and
    the scan returns the first one.
    """
    m = np.asarray(masses, dtype=float)
    w = np.asarray(weights, dtype=float)
    if m.ndim != 1 or m.size == 0 or w.shape != m.shape:
        raise ParameterError("masses and weights must be equal-length nonempty vectors")
    if not (0.0 < eps < 1.0):
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if np.any(m <= 0) or np.any(w < 0):
        raise ParameterError("masses must be positive and weights nonnegative")
    if math.fsum(w) < (1.0 - eps) * math.fsum(m):
        raise NoWitnessError(
            "total weight falls below (1 - eps) of total mass; no witness guaranteed"
        )
    hits = np.nonzero(w >= (1.0 - eps) * m)[0]
    if hits.size == 0:
        raise NoWitnessError("no index qualifies despite the mass precondition")
    return int(hits[0])


def common_refinement(delta_a, delta_b) -> tuple[Fraction, int, int]:
    """Largest rational width dividing both inputs, with the two counts.

    Exact: gcd(a/b, c/d) = gcd(a d, c b) / (b d), reduced by Fraction.
    """
    da, db = Fraction(delta_a), Fraction(delta_b)
    if da <= 0 or db <= 0:
        raise ParameterError("widths must be positive rationals")
    g = Fraction(
        math.gcd(da.numerator * db.denominator, db.numerator * da.denominator),
        da.denominator * db.denominator,
    )
    ca, cb = da / g, db / g
    if ca.denominator != 1 or cb.denominator != 1:  # cannot happen
        raise InvariantError("refinement counts are not integral")
    return g, int(ca), int(cb)


# ---------------------------------------------------------------------------
# cuboids in balls


def cuboid_in_ball(ball: Ball, axis, eta: float, frame: Frame | None = None) -> Cuboid:
    """Inscribed eccentric cuboid: cross edges eta, long edge along axis.

    The long half-edge is set by Pythagoras so that every vertex lies at
    distance exactly ball.radius from the center; the cuboid's diameter
    is then the ball's diameter.
    """
    n = ball.dim
    if n < 2:
        raise DimensionError("inscribed cuboids need ambient dimension >= 2")
    eta = float(eta)
    delta = ball.radius
    if not (math.isfinite(eta) and eta > 0):
        raise ParameterError(f"eta must be positive, got {eta}")
    if (n - 1) * eta * eta >= 4.0 * delta * delta:
        raise GeometryError(
            f"cross width eta={eta} too large: (n-1) eta^2 must stay below (2 delta)^2"
        )
    long_edge = math.sqrt(4.0 * delta * delta - (n - 1) * eta * eta)
    if frame is None:
        frame = orthonormal_frame(axis)
    half = np.concatenate([np.full(n - 1, eta / 2.0), [long_edge / 2.0]])
    return Cuboid(center=ball.center, frame=frame, half_lengths=half)


@dataclass(frozen=True)
class AlignedCuboidPair:
    """Two congruent inscribed cuboids sharing one enclosing square tube.

    Both cuboids use the same frame (axis along the center-to-center
    direction), so the enclosing tube of half-width eta / 2 contains
    every vertex of both.
    """

    first: Cuboid
    second: Cuboid
    enclosing: SquareTube


def align_cuboids(b1: Ball, b2: Ball, eta: float) -> AlignedCuboidPair:
    """Inscribe congruent cuboids in two disjoint equal balls, aligned
    along the center-to-center direction, inside one square tube.

    The cross half-widths are nudged inward by a few ulps if needed so
    that the closed membership test of the enclosing tube holds exactly
    in floating point for all 2^n vertices; the nudge is far below every
    stated tolerance.
    """
    if b1.dim != b2.dim:
        raise DimensionError("balls must share one ambient dimension")
    if abs(b1.radius - b2.radius) > 1e-12 * max(b1.radius, b2.radius):
        raise ParameterError("balls must have equal radii")
    dvec = b2.center - b1.center
    dist = float(np.linalg.norm(dvec))
    if dist <= b1.radius + b2.radius:
        raise ParameterError("balls overlap or coincide; alignment needs disjoint balls")
    n = b1.dim
    eta = float(eta)
    axis = dvec / dist
    frame = orthonormal_frame(axis)
    # validates the eta bound and fixes the long edge
    ideal = cuboid_in_ball(b1, axis, eta, frame=frame)
    long_half = float(ideal.half_lengths[-1])
    tube = SquareTube(frame=frame, anchor=b1.center, half_width=Fraction(eta) / 2)
    target = float(tube.half_width)

    cross_half = eta / 2.0
    for _ in range(8):
        half = np.concatenate([np.full(n - 1, cross_half), [long_half]])
        c1 = Cuboid(center=b1.center, frame=frame, half_lengths=half)
        c2 = Cuboid(center=b2.center, frame=frame, half_lengths=half)
        verts = np.vstack([c1.vertices, c2.vertices])
        coords = np.abs(tube.cross_coordinates(verts))
        overshoot = float(coords.max()) - target
        if overshoot <= 0.0:
            return AlignedCuboidPair(first=c1, second=c2, enclosing=tube)
        cross_half -= overshoot + 4.0 * np.spacing(target)
    raise InvariantError("could not fit cuboid vertices inside the enclosing tube")


# ---------------------------------------------------------------------------
# parameters and the final inequality


@dataclass(frozen=True)
class ProofParameters:
    """Parameter pack (n, p, eps, delta, eta) for the final comparison.

    Constructed values keep sqrt(1 - (n-1) p^2) > 1/2 via the upper
    bound on p, keep eta = 2 delta p, and keep the cross width feasible
    for the inscribed cuboid.  Whether eps is small enough for the
    contradiction is exactly what ``contradiction_check`` evaluates, so
    that inequality is deliberately not a construction invariant.
    """

    n: int
    p: float
    eps: float
    delta: Fraction
    eta: float

    def __post_init__(self):
        if not 2 <= self.n <= MAX_DIM:
            raise DimensionError(f"n must be 2..{MAX_DIM}, got {self.n}")
        delta = self.delta
        if not isinstance(delta, Fraction):
            delta = Fraction(delta)
            object.__setattr__(self, "delta", delta)
        if delta <= 0:
            raise ParameterError("delta must be a positive rational")
        p_max = math.sqrt(3.0 / (4.0 * (self.n - 1)))
        if not (0.0 < self.p < p_max):
            raise ParameterError(f"p must lie in (0, {p_max:.7f}), got {self.p}")
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ParameterError(f"eps must be positive, got {self.eps}")
        expected_eta = 2.0 * float(delta) * self.p
        if abs(self.eta - expected_eta) > 1e-12 * max(1.0, expected_eta):
            raise ParameterError("eta must equal 2 * delta * p")
        if (self.n - 1) * self.eta ** 2 >= 4.0 * float(delta) ** 2:
            raise ParameterError("cross width infeasible: (n-1) eta^2 >= (2 delta)^2")


def choose_parameters(n: int, delta) -> ProofParameters:
    """Midpoint defaults: p at half its allowed range, eps at half the slack.

    With p^2 = 3 / (16 (n-1)) the root sqrt(1 - (n-1) p^2) is sqrt(13)/4
    for every n, and eps = p^{n-1} (root - 1/2) / 2 leaves half the gap,
    so the final comparison lands at 1.4013876 regardless of n.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ParameterError("delta must be a positive rational")
    if not 2 <= n <= MAX_DIM:
        raise DimensionError(f"n must be 2..{MAX_DIM}, got {n}")
    p = 0.5 * math.sqrt(3.0 / (4.0 * (n - 1)))
    root = math.sqrt(1.0 - (n - 1) * p * p)
    eps = 0.5 * p ** (n - 1) * (root - 0.5)
    eta = 2.0 * float(delta) * p
    return ProofParameters(n=n, p=p, eps=eps, delta=delta, eta=eta)


def contradiction_check(params: ProofParameters) -> tuple[float, bool]:
    """Evaluate 2 (sqrt(1 - (n-1)(eta / 2 delta)^2) - eps (2 delta / eta)^{n-1}).

    Computed twice: from the closed form above and from the volume of an
    actual inscribed cuboid via |C| / (2 delta eta^{n-1}); the two must
    agree to 1e-12.  A return above 1 is the contradiction: two disjoint
    cuboids would each carry more than half the enclosing tube's cost.
    """
    n = params.n
    m = n - 1
    delta = float(params.delta)
    x = params.eta / (2.0 * delta)
    tail = params.eps * (1.0 / x) ** m
    simplified = 2.0 * (math.sqrt(1.0 - m * x * x) - tail)

    ball = Ball(center=np.zeros(n), radius=delta)
    cuboid = cuboid_in_ball(ball, np.eye(n)[-1], params.eta)
    volume = volume_exact(cuboid)
    raw = 2.0 * (volume / (2.0 * delta * params.eta ** m) - tail)
    if abs(raw - simplified) > 1e-12:
        raise InvariantError(
            f"final inequality forms disagree: {raw!r} vs {simplified!r}"
        )
    return simplified, simplified > 1.0


# ---------------------------------------------------------------------------
# the walkthrough


_RADII_FIRST = (Fraction(1), Fraction(3, 2), Fraction(2))
_RADII_SECOND = (Fraction(3, 4), Fraction(5, 4), Fraction(1, 2))


@dataclass
class WalkthroughStep:
    name: str
    passed: bool
    inputs: dict
    outputs: dict


@dataclass
class WalkthroughReport:
    n: int
    depth: int
    seed: int
    steps: list[WalkthroughStep] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "seed": self.seed,
            "all_passed": self.all_passed,
            "steps": [
                {
                    "name": s.name,
                    "passed": s.passed,
                    "inputs": _jsonable(s.inputs),
                    "outputs": _jsonable(s.outputs),
                }
                for s in self.steps
            ],
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, np.ndarray):
        return [float(v) for v in x.ravel()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, str) or x is None:
        return x
    return repr(x)


def _walkthrough_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=[int(seed) & (2 ** 64 - 1), TAG_PROOF, *key])
    )


def _stream_pigeonhole(
    groups: list[tuple[int, float]], eps: float, seed: int, key: int
) -> tuple[int, float, int]:
    """First qualifying index over synthetic per-cell shares.

    Cells get shares q ~ U[1 - 1.5 eps, 1] of their masses, drawn in
    chunks so arbitrarily large packings stream in constant memory.  A
    draw must satisfy the mass precondition sum(q m) >= (1 - eps) sum(m)
    (expected margin eps/4 of the total); rare shortfalls retry with a
    fresh subseed.  Returns (global index, its share, retries used).
    """
    total_cells = sum(count for count, _ in groups)
    total_mass = math.fsum(count * mass for count, mass in groups)
    if total_cells == 0:
        raise NoWitnessError("no cells to select from")
    if total_cells == 1:
        return 0, 1.0 - 0.5 * eps, 0
    threshold = 1.0 - eps
    low = 1.0 - 1.5 * eps
    for retry in range(8):
        first = None
        first_q = 0.0
        acc = 0.0
        base = 0
        bindex = 0
        for count, mass in groups:
            done = 0
            while done < count:
                c = min(_SCAN_CHUNK, count - done)
                rng = _walkthrough_rng(seed, key, retry, bindex)
                q = low + rng.random(c) * (1.0 - low)
                acc += mass * float(q.sum())
                if first is None:
                    hits = np.nonzero(q >= threshold)[0]
                    if hits.size:
                        first = base + done + int(hits[0])
                        first_q = float(q[hits[0]])
                done += c
                bindex += 1
            base += count
        if acc >= threshold * total_mass and first is not None:
            return first, first_q, retry
    raise NoWitnessError("synthetic shares kept missing the mass precondition")


def _select_square_tube(
    n: int,
    tube: Tube,
    radius: Fraction,
    depth: int,
    counts: dict[int, int],
    eps: float,
    seed: int,
    key: int,
    synthetic_weight_fn,
):
    """Pigeonhole a square tube out of a packed subdivision.

    Returns (SquareTube, half-width Fraction, detail dict).  The default
    synthetic shares stream; an explicit weight function forces
    materialized masses and the public selection routine, so adversarial
    weights exercise the same no-witness path users hit.
    """
    m = n - 1
    groups = [
        (counts[d], float((2 * radius / 2 ** d) ** m)) for d in sorted(counts)
    ]
    if synthetic_weight_fn is not None:
        total = sum(c for c, _ in groups)
        if total > _MAX_MATERIALIZED_WEIGHTS:
            raise ParameterError("packing too large for explicit synthetic weights")
        masses = np.concatenate(
            [np.full(count, mass) for count, mass in groups]
        )
        weights = np.asarray(synthetic_weight_fn(masses), dtype=float)
        index = pigeonhole_select(masses, weights, eps)
        share = float(weights[index] / masses[index])
        retries = 0
    else:
        index, share, retries = _stream_pigeonhole(groups, eps, seed, key)

    cell_depth, cell = _packing_cell_by_rank(m, depth, index)
    half = radius / 2 ** cell_depth
    frame = orthonormal_frame(tube.axis)
    center = cell.astype(float) * (float(radius) / 2 ** cell_depth)
    anchor = tube.point + center @ frame.cross
    square = SquareTube(frame=frame, anchor=anchor, half_width=half)
    outputs = {
        "selected_index": index,
        "cell_depth": cell_depth,
        "half_width": half,
        "share": share,
        "retries": retries,
        "anchor": anchor,
    }
    return square, half, outputs


def run_proof_walkthrough(
    n: int,
    depth: int,
    seed: int = 0,
    synthetic_weight_fn=None,
) -> WalkthroughReport:
    """Execute the whole construction on synthetic data and report each step.

    Two seeded tubes are subdivided to ``depth``; synthetic mass shares
    drive the pigeonhole selections; the selected widths are refined to
    a common rational delta; disjoint delta-balls go on the tubes' axes
    (stepping along the second axis until separated, erroring if the
    tubes are too entangled to separate at the default spacing); aligned
    inscribed cuboids then feed the final inequality.  Any failing step
    raises StepFailureError naming the step, with the partial report
    attached.
    """
    if not 2 <= n <= MAX_DIM:
        raise DimensionError(f"n must be 2..{MAX_DIM}, got {n}")
    if not isinstance(depth, (int, np.integer)) or not 1 <= depth <= 20:
        raise ParameterError(f"depth must be 1..20, got {depth}")
    m = n - 1
    if (m - 1) * (depth - 1) > 21:
        raise ParameterError(
            f"depth {depth} too deep for cross dimension {m}; "
            "the subdivision would not fit in memory"
        )
    report = WalkthroughReport(n=n, depth=depth, seed=int(seed))

    def step(name: str, passed: bool, inputs: dict, outputs: dict, message: str = ""):
        report.steps.append(
            WalkthroughStep(name=name, passed=bool(passed), inputs=inputs, outputs=outputs)
        )
        if not passed:
            raise StepFailureError(name, message or "check failed", report=report)

    # eps and p depend on n alone; the selections below need eps, and the
    # later parameter step must reproduce exactly these values
    preview = choose_parameters(n, Fraction(1))
    eps, p = preview.eps, preview.p

    rng = _walkthrough_rng(seed, 0)
    r1 = _RADII_FIRST[int(rng.integers(len(_RADII_FIRST)))]
    r2 = _RADII_SECOND[int(rng.integers(len(_RADII_SECOND)))]
    tube1 = Tube(
        point=rng.uniform(-2.0, 2.0, n),
        axis=unit_vector(rng.standard_normal(n)),
        radius=float(r1),
    )
    tube2 = Tube(
        point=rng.uniform(-2.0, 2.0, n),
        axis=unit_vector(rng.standard_normal(n)),
        radius=float(r2),
    )

    # 1: dyadic subdivision of both tubes (census only; cells streamed);
    # the integer-lattice census is radius-free, so both tubes share it
    counts1 = _packing_census(m, depth)
    counts2 = counts1
    n1 = sum(counts1.values())
    n2 = sum(counts2.values())
    step(
        "subdivide_tubes",
        n1 >= 1 and n2 >= 1,
        {
            "depth": depth,
            "radius_first": r1,
            "radius_second": r2,
            "axis_first": tube1.axis,
            "axis_second": tube2.axis,
        },
        {"squares_first": n1, "squares_second": n2},
        "subdivision produced no interior squares at this depth",
    )

    # 2: partial sums against the exact tube measures
    frac1 = _covered_fraction(m, counts1)
    frac2 = _covered_fraction(m, counts2)
    mu1 = unit_ball_volume(m) * float(r1) ** m
    mu2 = unit_ball_volume(m) * float(r2) ** m
    sum1 = frac1 * mu1
    sum2 = frac2 * mu2
    ok = 0.0 < sum1 <= mu1 * (1 + 1e-12) and 0.0 < sum2 <= mu2 * (1 + 1e-12)
    step(
        "partial_sums",
        ok,
        {"squares_first": n1, "squares_second": n2},
        {
            "tube_measure_first": mu1,
            "packed_sum_first": sum1,
            "deficit_first": 1.0 - frac1,
            "tube_measure_second": mu2,
            "packed_sum_second": sum2,
            "deficit_second": 1.0 - frac2,
        },
        "packed square-tube measures must stay within the tube measure",
    )

    # 3, 4: pigeonhole selection on synthetic mass shares
    select_inputs = {"eps": eps, "synthetic": synthetic_weight_fn is None}
    try:
        square1, delta_a, out1 = _select_square_tube(
            n, tube1, r1, depth, counts1, eps, seed, 1, synthetic_weight_fn
        )
        step("select_square_tube", True, select_inputs, out1)
        square2, delta_b, out2 = _select_square_tube(
            n, tube2, r2, depth, counts2, eps, seed, 2, synthetic_weight_fn
        )
        step("select_square_tube_complement", True, select_inputs, out2)
    except NoWitnessError as exc:
        name = (
            "select_square_tube"
            if len(report.steps) < 3
            else "select_square_tube_complement"
        )
        report.steps.append(
            WalkthroughStep(
                name=name,
                passed=False,
                inputs=select_inputs,
                outputs={"error": str(exc)},
            )
        )
        raise StepFailureError(name, str(exc), report=report) from exc

    # 5: exact common refinement of the two selected widths
    delta, count_a, count_b = common_refinement(delta_a, delta_b)
    ok = count_a * delta == delta_a and count_b * delta == delta_b
    step(
        "refine_widths",
        ok,
        {"delta_first": delta_a, "delta_second": delta_b},
        {
            "delta": delta,
            "count_first": count_a,
            "count_second": count_b,
            "cells_per_cross_section_first": count_a ** m,
            "cells_per_cross_section_second": count_b ** m,
        },
        "refined width must divide both selected widths exactly",
    )

    # 6: disjoint delta-balls on the axes of the two selected square tubes
    delta_f = float(delta)
    ball1 = Ball(center=square1.anchor, radius=delta_f)
    ball2 = None
    separation = 0.0
    for k in range(0, 65):
        for sign in (1, -1) if k else (1,):
            cand = Ball(
                center=square2.anchor + sign * k * 4.0 * delta_f * tube2.axis,
                radius=delta_f,
            )
            separation = float(np.linalg.norm(cand.center - ball1.center))
            if separation > 2.0 * delta_f * (1.0 + 1e-9):
                ball2 = cand
                break
        if ball2 is not None:
            break
    step(
        "place_balls",
        ball2 is not None,
        {"radius": delta},
        {
            "center_first": ball1.center,
            "center_second": None if ball2 is None else ball2.center,
            "separation_over_diameter": separation / (2.0 * delta_f) if delta_f else 0.0,
        },
        "tubes too entangled to separate the balls at the default spacing",
    )

    # 7: parameters for the chosen delta (cuboids below need eta = 2 delta p)
    params = choose_parameters(n, delta)
    if params.eps != eps or params.p != p:
        raise InvariantError("parameter preview diverged from final parameters")
    root = math.sqrt(1.0 - m * params.p ** 2)
    step(
        "choose_parameters",
        root > 0.5,
        {"n": n, "delta": delta},
        {"p": params.p, "eps": params.eps, "eta": params.eta, "root": root},
        "sqrt(1 - (n-1) p^2) must exceed 1/2",
    )

    # 8: aligned inscribed cuboids inside one enclosing square tube
    pair = align_cuboids(ball1, ball2, params.eta)
    verts = np.vstack([pair.first.vertices, pair.second.vertices])
    contained = bool(np.all(pair.enclosing.contains(verts)))
    diam = float(np.linalg.norm(2.0 * pair.first.half_lengths))
    step(
        "build_cuboids",
        contained and abs(diam - 2.0 * delta_f) <= 1e-9 * max(1.0, delta_f),
        {"eta": params.eta, "ball_radius": delta},
        {
            "cuboid_volume": volume_exact(pair.first),
            "cuboid_diameter": diam,
            "ball_diameter": 2.0 * delta_f,
            "enclosing_half_width": pair.enclosing.half_width,
            "enclosing_cost": square_tube_exact_measure(pair.enclosing),
            "vertices_contained": contained,
        },
        "cuboid vertices must sit inside the enclosing tube with ball diameter",
    )

    # 9: the final comparison must exceed 1
    rhs, contradiction = contradiction_check(params)
    step(
        "final_inequality",
        contradiction,
        {"p": params.p, "eps": params.eps, "eta": params.eta, "delta": delta},
        {"rhs": rhs, "margin": rhs - 1.0},
        "final comparison failed to exceed 1",
    )
    return report
