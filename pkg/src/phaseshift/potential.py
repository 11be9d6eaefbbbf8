"""Grids, quadrature weights, and potential definitions.

Everything downstream (wave integration, the correction hierarchy, the exact
oracle) consumes potentials through the sampling helpers here.  Two sampling
views exist:

* :func:`evaluate_potential` — plain node values, the user-facing view.
* :func:`sample_potential` — a :class:`PotentialSamples` bundle carrying node
  values as one-sided limits plus cell-midpoint values.  Piecewise-constant
  potentials jump at segment edges; integrating them accurately requires
  knowing the value on *each side* of a node, not a single number at it.

Units are dimensionless throughout (hbar = m = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EvenPointCount, GridMismatch, TabulatedGridMismatch

#: values with magnitude below this are treated as an exact zero tail
DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform grid over [0, x_max] with both endpoints included.

    Parameters
    ----------
    x_max : float
        Upper end of the computational domain.
    n_points : int
        Number of nodes, endpoints included.  Must be odd and >= 3 so the
        composite Simpson rule applies.

    Notes
    -----
    Nodes are exactly ``x_i = i * step`` with ``step = x_max / (n_points - 1)``.
    """

    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not self.x_max > 0.0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise EvenPointCount(
                f"n_points must be odd and >= 3, got {self.n_points}"
            )

    @property
    def step(self) -> float:
        return self.x_max / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        x = np.arange(self.n_points) * self.step
        x.flags.writeable = False
        return x

    @cached_property
    def midpoints(self) -> np.ndarray:
        x = (np.arange(self.n_points - 1) + 0.5) * self.step
        x.flags.writeable = False
        return x

    def refined(self, factor: int = 4) -> "Grid":
        """A grid over the same domain with each cell split `factor` ways."""
        return Grid(self.x_max, factor * (self.n_points - 1) + 1)


def _as_readonly(values: np.ndarray, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ComplexGridFunction:
    """A complex-valued function sampled on the nodes of a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_readonly(self.values, complex))
        if self.values.shape != (self.grid.n_points,):
            raise GridMismatch(
                f"expected {self.grid.n_points} values, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function contains non-finite values")

    @property
    def at_zero(self) -> complex:
        return complex(self.values[0])


def require_same_grid(*objs) -> Grid:
    """Return the common grid of the arguments or raise :class:`GridMismatch`."""
    grid = objs[0].grid
    for other in objs[1:]:
        if other.grid != grid:
            raise GridMismatch(f"{other.grid} != {grid}")
    return grid


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative description of a compactly supported potential.

    Use the classmethod constructors; `kind` selects which payload field is
    meaningful.

    Attributes
    ----------
    kind : str
        One of ``piecewise_constant``, ``gaussian_sum``, ``tabulated``.
    segments : tuple of (x_lo, x_hi, value)
        Piecewise-constant segments, non-overlapping, ordered, bounds >= 0.
    bumps : tuple of (center, width, height)
        Gaussian bumps ``height * exp(-(x-center)^2 / (2 width^2))``.
    samples : ndarray or None
        Node values for the tabulated kind.
    declared_grid : Grid or None
        The grid the tabulated samples live on.
    support_hi : float
        Smallest x beyond which the potential is identically zero (or below
        the tail tolerance for gaussians).
    """

    kind: str
    segments: tuple = ()
    bumps: tuple = ()
    samples: np.ndarray | None = None
    declared_grid: Grid | None = None
    support_hi: float = 0.0
    eps_tail: float = DEFAULT_TAIL_EPS

    # -- constructors ---------------------------------------------------

    @classmethod
    def piecewise_constant(cls, segments) -> "PotentialSpec":
        segs = tuple((float(a), float(b), float(v)) for a, b, v in segments)
        prev_hi = 0.0
        for lo, hi, _ in segs:
            if lo < 0.0 or hi <= lo:
                raise ValueError(f"bad segment bounds ({lo}, {hi})")
            if lo < prev_hi:
                raise ValueError("segments must be ordered and non-overlapping")
            prev_hi = hi
        support = max((hi for _, hi, v in segs if v != 0.0), default=0.0)
        return cls(kind="piecewise_constant", segments=segs, support_hi=support)

    @classmethod
    def gaussian_sum(cls, bumps, eps_tail: float = DEFAULT_TAIL_EPS) -> "PotentialSpec":
        bms = tuple((float(c), float(w), float(h)) for c, w, h in bumps)
        support = 0.0
        for c, w, h in bms:
            if w <= 0.0:
                raise ValueError(f"gaussian width must be positive, got {w}")
            if h != 0.0 and abs(h) > eps_tail:
                # radius where the bump decays to the tail tolerance
                radius = w * math.sqrt(2.0 * math.log(abs(h) / eps_tail))
                support = max(support, c + radius)
        return cls(kind="gaussian_sum", bumps=bms, support_hi=support,
                   eps_tail=eps_tail)

    @classmethod
    def tabulated(cls, samples, grid: Grid,
                  eps_tail: float = DEFAULT_TAIL_EPS) -> "PotentialSpec":
        vals = _as_readonly(samples, float)
        if vals.shape != (grid.n_points,):
            raise TabulatedGridMismatch(
                f"{vals.shape[0]} samples for a {grid.n_points}-point grid"
            )
        nonzero = np.nonzero(np.abs(vals) >= eps_tail)[0]
        support = float(grid.nodes[nonzero[-1]]) if nonzero.size else 0.0
        return cls(kind="tabulated", samples=vals, declared_grid=grid,
                   support_hi=support, eps_tail=eps_tail)

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls.piecewise_constant(())

    # -- evaluation -----------------------------------------------------

    def values_at(self, x: np.ndarray, side: int = +1) -> np.ndarray:
        """Potential values at arbitrary points.

        `side` picks the one-sided limit at a discontinuity: +1 for the
        right limit (value on [x, x+eps)), -1 for the left limit.  Only the
        piecewise kind distinguishes the two.
        """
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if self.kind == "piecewise_constant":
            for lo, hi, v in self.segments:
                if side >= 0:
                    mask = (x >= lo) & (x < hi)
                else:
                    mask = (x > lo) & (x <= hi)
                out[mask] = v
        elif self.kind == "gaussian_sum":
            for c, w, h in self.bumps:
                out += h * np.exp(-((x - c) ** 2) / (2.0 * w * w))
            out[np.abs(out) < self.eps_tail] = 0.0
        elif self.kind == "tabulated":
            out = np.interp(x, self.declared_grid.nodes, self.samples)
        else:  # pragma: no cover - constructors forbid this
            raise ValueError(f"unknown potential kind {self.kind!r}")
        return out


@dataclass(frozen=True)
class PotentialSamples:
    """Potential sampled for integration on a specific grid.

    ``at_nodes`` holds right limits at the nodes, ``at_nodes_left`` left
    limits, and ``at_midpoints`` the values at cell centers.  For continuous
    potentials all node channels coincide.
    """

    grid: Grid
    at_nodes: np.ndarray
    at_nodes_left: np.ndarray
    at_midpoints: np.ndarray
    support_hi: float = 0.0

    def __post_init__(self) -> None:
        n = self.grid.n_points
        for name, length in (("at_nodes", n), ("at_nodes_left", n),
                             ("at_midpoints", n - 1)):
            arr = _as_readonly(getattr(self, name), float)
            if arr.shape != (length,):
                raise GridMismatch(f"{name}: expected {length} values")
            object.__setattr__(self, name, arr)

    @classmethod
    def from_array(cls, grid: Grid, values: np.ndarray) -> "PotentialSamples":
        """Wrap plain node samples (one-sided; midpoints by averaging)."""
        values = np.asarray(values, dtype=float)
        mid = 0.5 * (values[:-1] + values[1:])
        return cls(grid, values, values, mid, support_hi=grid.x_max)


def as_samples(u, grid: Grid) -> PotentialSamples:
    """Coerce a PotentialSamples / PotentialSpec / plain array to samples."""
    if isinstance(u, PotentialSamples):
        if u.grid != grid:
            raise GridMismatch(f"{u.grid} != {grid}")
        return u
    if isinstance(u, PotentialSpec):
        return sample_potential(u, grid)
    return PotentialSamples.from_array(grid, u)


def combine_samples(a: PotentialSamples, b: PotentialSamples,
                    weight_b: float) -> PotentialSamples:
    """Samples of ``a + weight_b * b`` on the common grid."""
    grid = require_same_grid(a, b)
    return PotentialSamples(
        grid,
        a.at_nodes + weight_b * b.at_nodes,
        a.at_nodes_left + weight_b * b.at_nodes_left,
        a.at_midpoints + weight_b * b.at_midpoints,
        support_hi=max(a.support_hi, b.support_hi if weight_b != 0.0 else 0.0),
    )


def evaluate_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    """Node values of the potential.

    Piecewise segments are applied over closed intervals in order, so at a
    boundary shared by two segments the later segment wins; the isolated
    upper edge of a run of segments keeps the segment value.  Integration
    code never consumes these node values at a jump — it goes through
    :func:`sample_potential`, which carries one-sided limits.

    Raises
    ------
    TabulatedGridMismatch
        If a tabulated spec declares a different grid than `grid`.
    """
    if spec.kind == "tabulated":
        if spec.declared_grid != grid:
            raise TabulatedGridMismatch(
                f"tabulated on {spec.declared_grid}, requested {grid}"
            )
        return np.array(spec.samples)
    if spec.kind == "piecewise_constant":
        x = grid.nodes
        out = np.zeros_like(x)
        for lo, hi, v in spec.segments:
            out[(x >= lo) & (x <= hi)] = v
        return out
    return spec.values_at(grid.nodes)


def sample_potential(spec: PotentialSpec, grid: Grid) -> PotentialSamples:
    """Two-sided node limits plus midpoint values on `grid`.

    Tabulated specs must declare `grid` itself or a grid that `grid` refines
    (same domain, cell count an integer multiple); off-node values are then
    linearly interpolated.
    """
    if spec.kind == "tabulated":
        declared = spec.declared_grid
        if declared != grid:
            same_domain = math.isclose(declared.x_max, grid.x_max,
                                       rel_tol=0.0, abs_tol=1e-12)
            if not (same_domain and
                    (grid.n_points - 1) % (declared.n_points - 1) == 0):
                raise TabulatedGridMismatch(
                    f"tabulated on {declared}, requested {grid}"
                )
        nodes = spec.values_at(grid.nodes)
        return PotentialSamples(grid, nodes, nodes,
                                spec.values_at(grid.midpoints),
                                support_hi=spec.support_hi)
    return PotentialSamples(
        grid,
        spec.values_at(grid.nodes, side=+1),
        spec.values_at(grid.nodes, side=-1),
        spec.values_at(grid.midpoints, side=+1),
        support_hi=spec.support_hi,
    )


def simpson_weights(grid: Grid) -> np.ndarray:
    """Composite Simpson weights on the grid nodes.

    ``sum(w * g(x))`` approximates the integral over [0, x_max] with
    O(step^4) error for smooth g.

    Raises
    ------
    EvenPointCount
        If the node count is even (Simpson needs an odd count).
    """
    n = grid.n_points
    if n < 3 or n % 2 == 0:
        raise EvenPointCount(f"composite Simpson needs odd n_points, got {n}")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (grid.step / 3.0)


def cumulative_from_right(values: np.ndarray, step: float,
                          values_left: np.ndarray | None = None) -> np.ndarray:
    """Right-to-left cumulative trapezoid integral on a uniform grid.

    Returns ``out`` with ``out[i] ~ integral from x_i to x_max`` and
    ``out[-1] = 0`` exactly.  For integrands with jump discontinuities at
    the nodes, pass the right-limit channel in `values` and the left-limit
    channel in `values_left`: each cell [x_i, x_i+1] is then integrated with
    the limits taken from inside the cell, which keeps the trapezoid rule at
    O(step^2) across jumps instead of O(step).
    """
    if values_left is None:
        values_left = values
    seg = 0.5 * step * (values[:-1] + values_left[1:])
    out = np.zeros(len(values), dtype=seg.dtype)
    out[:-1] = np.cumsum(seg[::-1])[::-1]
    return out
