"""Staggered-grid vector calculus on a truncated cubic box.

Yee placement on an n x n x n cell grid over [-L, L]^3, L = n h / 2:

  * scalars (potential phi, charge density rho) live on the (n+1)^3 nodes,
  * E, D, A and the current density j live on cell edges,
  * B and H live on cell faces,
  * constitutive laws are evaluated on collocated 3-vectors at cell centers.

Arrays are indexed [ix, iy, iz].  Edge component x has shape
(n, n+1, n+1) (one value per x-directed edge), face component x has
shape (n+1, n, n) (one value per x-normal face).

The discrete operators form an exact complex:

    curl_e2f(grad(phi)) = 0      div_faces(curl_e2f(u)) = 0

to round-off, and the dual operators div_edges = -grad^T and
curl_f2e = curl_e2f^T satisfy the mirrored identities.  Out-of-range
values are treated as zero, which matches homogeneous Dirichlet data for
phi and for tangential A on the box boundary.  These exact identities
are what make the integration-by-parts steps of the uniqueness checks
sharp instead of O(h)-polluted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .fields import FieldPoint, ModelParams, energy_density


class SourcePlacementError(ValueError):
    """A source sits too close to the box boundary for its mollifier."""


@dataclass(frozen=True)
class GridSpec:
    """Cubic staggered grid: n cells per axis (n even, >= 8), spacing h.

    The box is [-L, L]^3 with L = n h / 2; ``origin`` is the corner node
    (-L, -L, -L).
    """

    n: int
    h: float

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError("GridSpec.n must be even and at least 8")
        if not (self.h > 0.0 and np.isfinite(self.h)):
            raise ValueError("GridSpec.h must be a positive finite real")

    @property
    def half_width(self) -> float:
        return 0.5 * self.n * self.h

    @property
    def origin(self) -> np.ndarray:
        L = self.half_width
        return np.array([-L, -L, -L])

    @property
    def cell_volume(self) -> float:
        return self.h ** 3

    def node_coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """1D coordinate arrays of the nodes along each axis."""
        c = self.origin[0] + self.h * np.arange(self.n + 1)
        return c, c.copy(), c.copy()

    def cell_centers(self) -> np.ndarray:
        """Cell-center coordinates, shape (n, n, n, 3)."""
        c = self.origin[0] + self.h * (np.arange(self.n) + 0.5)
        X, Y, Z = np.meshgrid(c, c, c, indexing="ij")
        return np.stack([X, Y, Z], axis=-1)

    def edge_shapes(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return ((n, n + 1, n + 1), (n + 1, n, n + 1), (n + 1, n + 1, n))

    def face_shapes(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return ((n + 1, n, n), (n, n + 1, n), (n, n, n + 1))

    def edge_midpoints(self, axis: int) -> np.ndarray:
        """Midpoint coordinates of the edges directed along ``axis``; shape (*edge_shape, 3)."""
        n, h = self.n, self.h
        o = self.origin[0]
        along = o + h * (np.arange(n) + 0.5)
        across = o + h * np.arange(n + 1)
        coords = [across, across, across]
        coords[axis] = along
        X, Y, Z = np.meshgrid(*coords, indexing="ij")
        return np.stack([X, Y, Z], axis=-1)


def _check_values(values: np.ndarray, shape, what: str) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    if a.shape != tuple(shape):
        raise ValueError(f"{what} has shape {a.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite values")
    return a


@dataclass
class ScalarGrid:
    """Node-centered scalar values, shape (n+1)^3."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        n = self.spec.n
        self.values = _check_values(self.values, (n + 1, n + 1, n + 1), "ScalarGrid.values")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "ScalarGrid":
        n = spec.n
        return cls(spec, np.zeros((n + 1, n + 1, n + 1)))

    def copy(self) -> "ScalarGrid":
        return ScalarGrid(self.spec, self.values.copy())


@dataclass
class EdgeField:
    """Vector field with components on cell edges (Yee placement for E, D, A, j)."""

    spec: GridSpec
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        sx, sy, sz = self.spec.edge_shapes()
        self.x = _check_values(self.x, sx, "EdgeField.x")
        self.y = _check_values(self.y, sy, "EdgeField.y")
        self.z = _check_values(self.z, sz, "EdgeField.z")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "EdgeField":
        sx, sy, sz = spec.edge_shapes()
        return cls(spec, np.zeros(sx), np.zeros(sy), np.zeros(sz))

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.x, self.y, self.z

    def copy(self) -> "EdgeField":
        return EdgeField(self.spec, self.x.copy(), self.y.copy(), self.z.copy())


@dataclass
class FaceField:
    """Vector field with components on cell faces (Yee placement for B, H)."""

    spec: GridSpec
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        sx, sy, sz = self.spec.face_shapes()
        self.x = _check_values(self.x, sx, "FaceField.x")
        self.y = _check_values(self.y, sy, "FaceField.y")
        self.z = _check_values(self.z, sz, "FaceField.z")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "FaceField":
        sx, sy, sz = spec.face_shapes()
        return cls(spec, np.zeros(sx), np.zeros(sy), np.zeros(sz))

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.x, self.y, self.z

    def copy(self) -> "FaceField":
        return FaceField(self.spec, self.x.copy(), self.y.copy(), self.z.copy())


@dataclass
class FieldState:
    """Discrete solution state: B on faces, D on edges, potentials phi and A.

    By construction B = curl A, so div_faces(B) = 0 exactly; the Gauss
    residual div_edges(D) - 4 pi rho is driven to solver tolerance at
    interior nodes.
    """

    B: FaceField
    D: EdgeField
    phi: ScalarGrid
    A: EdgeField

    @property
    def spec(self) -> GridSpec:
        return self.phi.spec

    @classmethod
    def zeros(cls, spec: GridSpec) -> "FieldState":
        return cls(
            B=FaceField.zeros(spec),
            D=EdgeField.zeros(spec),
            phi=ScalarGrid.zeros(spec),
            A=EdgeField.zeros(spec),
        )

    def copy(self) -> "FieldState":
        return FieldState(self.B.copy(), self.D.copy(), self.phi.copy(), self.A.copy())

    def scaled_fields(self, lam: float) -> "FieldState":
        """State with B and D multiplied by lam (potentials scaled alike)."""
        return FieldState(
            B=FaceField(self.B.spec, lam * self.B.x, lam * self.B.y, lam * self.B.z),
            D=EdgeField(self.D.spec, lam * self.D.x, lam * self.D.y, lam * self.D.z),
            phi=ScalarGrid(self.phi.spec, lam * self.phi.values),
            A=EdgeField(self.A.spec, lam * self.A.x, lam * self.A.y, lam * self.A.z),
        )


# --- elementary difference stencils -----------------------------------------


def _fdiff(a: np.ndarray, axis: int) -> np.ndarray:
    """Forward difference along axis: out[i] = a[i+1] - a[i] (length m-1)."""
    lo = [slice(None)] * a.ndim
    hi = [slice(None)] * a.ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    return a[tuple(hi)] - a[tuple(lo)]


def _bdiff(a: np.ndarray, axis: int) -> np.ndarray:
    """Zero-padded backward difference, the exact negative transpose of _fdiff.

    out has length m+1 from input length m: out[0] = a[0], out[i] =
    a[i] - a[i-1], out[m] = -a[m-1]; indices outside the box read as 0.
    """
    shape = list(a.shape)
    shape[axis] += 1
    out = np.zeros(shape, dtype=a.dtype)
    lo = [slice(None)] * a.ndim
    hi = [slice(None)] * a.ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    out[tuple(lo)] += a
    out[tuple(hi)] -= a
    return out


# --- the discrete complex ----------------------------------------------------


def discrete_grad(phi: ScalarGrid) -> EdgeField:
    """Node-to-edge gradient; exact null space = constant fields."""
    v, h = phi.values, phi.spec.h
    return EdgeField(
        phi.spec,
        _fdiff(v, 0) / h,
        _fdiff(v, 1) / h,
        _fdiff(v, 2) / h,
    )


def discrete_curl_e2f(u: EdgeField) -> FaceField:
    """Edge-to-face curl (circulation per face area)."""
    h = u.spec.h
    ux, uy, uz = u.components()
    cx = (_fdiff(uz, 1) - _fdiff(uy, 2)) / h
    cy = (_fdiff(ux, 2) - _fdiff(uz, 0)) / h
    cz = (_fdiff(uy, 0) - _fdiff(ux, 1)) / h
    return FaceField(u.spec, cx, cy, cz)


def discrete_curl_f2e(w: FaceField) -> EdgeField:
    """Face-to-edge curl: the exact transpose of :func:`discrete_curl_e2f`."""
    h = w.spec.h
    wx, wy, wz = w.components()
    ex = (_bdiff(wz, 1) - _bdiff(wy, 2)) / h
    ey = (_bdiff(wx, 2) - _bdiff(wz, 0)) / h
    ez = (_bdiff(wy, 0) - _bdiff(wx, 1)) / h
    return EdgeField(w.spec, ex, ey, ez)


def discrete_div(u: EdgeField) -> ScalarGrid:
    """Edge-to-node divergence, -grad^T; div(curl_f2e(w)) = 0 exactly."""
    h = u.spec.h
    ux, uy, uz = u.components()
    v = (_bdiff(ux, 0) + _bdiff(uy, 1) + _bdiff(uz, 2)) / h
    return ScalarGrid(u.spec, v)


def discrete_div_faces(w: FaceField) -> np.ndarray:
    """Face-to-cell divergence, shape (n, n, n); div(curl_e2f(u)) = 0 exactly."""
    h = w.spec.h
    wx, wy, wz = w.components()
    return (_fdiff(wx, 0) + _fdiff(wy, 1) + _fdiff(wz, 2)) / h


# --- staggered <-> collocated transfer ---------------------------------------


def edges_to_centers(u: EdgeField) -> np.ndarray:
    """Average each edge component to cell centers; shape (n, n, n, 3), O(h^2)."""
    ux, uy, uz = u.components()
    cx = 0.25 * (ux[:, :-1, :-1] + ux[:, 1:, :-1] + ux[:, :-1, 1:] + ux[:, 1:, 1:])
    cy = 0.25 * (uy[:-1, :, :-1] + uy[1:, :, :-1] + uy[:-1, :, 1:] + uy[1:, :, 1:])
    cz = 0.25 * (uz[:-1, :-1, :] + uz[1:, :-1, :] + uz[:-1, 1:, :] + uz[1:, 1:, :])
    return np.stack([cx, cy, cz], axis=-1)


def faces_to_centers(w: FaceField) -> np.ndarray:
    """Average each face component to cell centers; shape (n, n, n, 3), O(h^2)."""
    wx, wy, wz = w.components()
    cx = 0.5 * (wx[:-1, :, :] + wx[1:, :, :])
    cy = 0.5 * (wy[:, :-1, :] + wy[:, 1:, :])
    cz = 0.5 * (wz[:, :, :-1] + wz[:, :, 1:])
    return np.stack([cx, cy, cz], axis=-1)


def centers_to_edges(spec: GridSpec, c: np.ndarray) -> EdgeField:
    """Transpose of :func:`edges_to_centers` (variational scatter, not interpolation)."""
    n = spec.n
    cx, cy, cz = c[..., 0], c[..., 1], c[..., 2]
    sx, sy, sz = spec.edge_shapes()
    ux = np.zeros(sx)
    for jj in (slice(None, -1), slice(1, None)):
        for kk in (slice(None, -1), slice(1, None)):
            ux[:, jj, kk] += 0.25 * cx
    uy = np.zeros(sy)
    for ii in (slice(None, -1), slice(1, None)):
        for kk in (slice(None, -1), slice(1, None)):
            uy[ii, :, kk] += 0.25 * cy
    uz = np.zeros(sz)
    for ii in (slice(None, -1), slice(1, None)):
        for jj in (slice(None, -1), slice(1, None)):
            uz[ii, jj, :] += 0.25 * cz
    return EdgeField(spec, ux, uy, uz)


def centers_to_faces(spec: GridSpec, c: np.ndarray) -> FaceField:
    """Transpose of :func:`faces_to_centers`."""
    cx, cy, cz = c[..., 0], c[..., 1], c[..., 2]
    sx, sy, sz = spec.face_shapes()
    wx = np.zeros(sx)
    wx[:-1, :, :] += 0.5 * cx
    wx[1:, :, :] += 0.5 * cx
    wy = np.zeros(sy)
    wy[:, :-1, :] += 0.5 * cy
    wy[:, 1:, :] += 0.5 * cy
    wz = np.zeros(sz)
    wz[:, :, :-1] += 0.5 * cz
    wz[:, :, 1:] += 0.5 * cz
    return FaceField(spec, wx, wy, wz)


def average_to_centers(state: FieldState) -> FieldPoint:
    """Collocated (B, D) samples at every cell center, as one batched FieldPoint."""
    return FieldPoint(B=faces_to_centers(state.B), D=edges_to_centers(state.D))


def total_energy(state: FieldState, m: ModelParams) -> float:
    """Field energy h^3 sum over cells of the energy density at cell centers; >= 0."""
    p = average_to_centers(state)
    return float(state.spec.cell_volume * np.sum(energy_density(p, m)))


# --- sources ------------------------------------------------------------------


@dataclass
class SourceSpec:
    """Stationary sources: point charges plus optional smooth densities.

    ``point_charges`` is a sequence of (q, position) pairs.  ``smooth_rho``
    is a callable rho(x, y, z) sampled at nodes; ``smooth_j`` is a callable
    (x, y, z) -> (jx, jy, jz) sampled per component at that component's
    edge midpoints, or a callable returning one component when called as
    smooth_j(x, y, z, axis).  Gridded densities may be passed directly as
    a ScalarGrid / EdgeField via ``rho_grid`` / ``j_grid``.
    """

    point_charges: Sequence[tuple[float, Sequence[float]]] = ()
    smooth_rho: Optional[Callable] = None
    smooth_j: Optional[Callable] = None
    rho_grid: Optional[ScalarGrid] = None
    j_grid: Optional[EdgeField] = None

    @property
    def has_charge(self) -> bool:
        return bool(self.point_charges) or self.smooth_rho is not None or self.rho_grid is not None

    @property
    def has_current(self) -> bool:
        return self.smooth_j is not None or self.j_grid is not None


def deposit_sources(src: SourceSpec, spec: GridSpec) -> tuple[ScalarGrid, EdgeField]:
    """Sample sources onto the grid: rho at nodes, j on edges.

    Point charges are mollified by a normalized Gaussian of width
    sigma = 2h; the numeric normalization makes the deposited total
    charge match sum(q) to round-off (well below the 1e-12 contract).
    Charges closer than 4h to the boundary are rejected, since their
    mollifier would leak through the box.

    The divergence of the deposited current is *not* checked here; the
    magnetostatic and coupled solvers enforce their stationarity
    tolerance on div j themselves.
    """
    n, h = spec.n, spec.h
    rho = ScalarGrid.zeros(spec)
    j = EdgeField.zeros(spec)

    if src.point_charges:
        sigma = 2.0 * h
        L = spec.half_width
        xs, ys, zs = spec.node_coords()
        X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
        for q, pos in src.point_charges:
            pos = np.asarray(pos, dtype=float)
            if np.any(np.abs(pos) > L - 4.0 * h):
                raise SourcePlacementError(
                    f"point charge at {pos.tolist()} is closer than 4h to the box boundary"
                )
            r2 = (X - pos[0]) ** 2 + (Y - pos[1]) ** 2 + (Z - pos[2]) ** 2
            g = np.exp(-0.5 * r2 / sigma**2)
            total = g.sum() * spec.cell_volume
            rho.values += (q / total) * g

    if src.rho_grid is not None:
        if src.rho_grid.spec != spec:
            raise ValueError("rho_grid was built for a different GridSpec")
        rho.values += src.rho_grid.values

    if src.smooth_rho is not None:
        xs, ys, zs = spec.node_coords()
        X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
        rho.values += np.asarray(src.smooth_rho(X, Y, Z), dtype=float)

    if src.j_grid is not None:
        if src.j_grid.spec != spec:
            raise ValueError("j_grid was built for a different GridSpec")
        j.x += src.j_grid.x
        j.y += src.j_grid.y
        j.z += src.j_grid.z

    if src.smooth_j is not None:
        comps = []
        for axis in range(3):
            pts = spec.edge_midpoints(axis)
            vals = src.smooth_j(pts[..., 0], pts[..., 1], pts[..., 2], axis)
            comps.append(np.asarray(vals, dtype=float))
        j.x += comps[0]
        j.y += comps[1]
        j.z += comps[2]

    return rho, j


def loop_current(
    spec: GridSpec,
    center=(0.0, 0.0, 0.0),
    radius: float = 1.0,
    width: float = 0.5,
    strength: float = 1.0,
    axis: int = 2,
) -> EdgeField:
    """Smooth azimuthal loop current, discretely divergence-free by construction.

    Built as j = curl_f2e(M) with M a smooth magnetization plateau of the
    given radius along ``axis``, so div_edges(j) vanishes to round-off at
    every node.  The resulting current circulates around ``axis`` in a
    band of scale ``width`` at cylindrical radius ``radius``; it is the
    canonical stationary current for the magnetostatic solvers.
    """
    from scipy.special import erfc

    center = np.asarray(center, dtype=float)
    if radius + 4.0 * width > spec.half_width - 4.0 * spec.h:
        raise SourcePlacementError(
            "loop current support is closer than 4h to the box boundary"
        )
    n, h = spec.n, spec.h
    o = spec.origin[0]
    # face centers for the chosen component: on-node along the normal,
    # offset by h/2 in the two transverse directions
    coords = []
    for a in range(3):
        if a == axis:
            coords.append(o + h * np.arange(n + 1))
        else:
            coords.append(o + h * (np.arange(n) + 0.5))
    X, Y, Z = np.meshgrid(coords[0], coords[1], coords[2], indexing="ij")
    rel = [X - center[0], Y - center[1], Z - center[2]]
    z_ax = rel[axis]
    rho2 = sum(r * r for a, r in enumerate(rel) if a != axis)
    m = (
        strength
        * 0.5
        * erfc((np.sqrt(rho2) - radius) / (np.sqrt(2.0) * width))
        * np.exp(-0.5 * z_ax**2 / width**2)
    )
    M = FaceField.zeros(spec)
    if axis == 0:
        M.x += m
    elif axis == 1:
        M.y += m
    else:
        M.z += m
    return discrete_curl_f2e(M)
