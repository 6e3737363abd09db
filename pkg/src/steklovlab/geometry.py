"""Radially parametrised planar domains, their triangulations and mesh checks.

A boundary curve is a closed radial graph given by radii at uniform angles
``theta_i = 2 pi i / N``, joined by straight chords.
Domains are either disks (outer curve only) or topological annuli (inner and
outer curve), always centred at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    CurveIntersection,
    DegenerateElement,
    GeometryError,
    IOFailure,
    NonPositiveRadius,
    ResolutionMismatch,
)

TWO_PI = 2.0 * np.pi
COMPONENTS = ("inner", "outer")
MIN_SAMPLES = 8


@dataclass(frozen=True, eq=False)
class RadialCurve:
    """Closed polyline through ``(rho_i, theta_i)``.

    Between samples the curve is the straight chord, so resampling at a
    multiple of ``n`` adds collinear points and leaves the polygon unchanged.
    """

    samples: np.ndarray

    def __post_init__(self):
        rho = np.array(self.samples, dtype=float).ravel()
        if rho.size < MIN_SAMPLES:
            raise GeometryError(f"a radial curve needs at least {MIN_SAMPLES} samples, got {rho.size}")
        if not np.all(np.isfinite(rho)):
            raise GeometryError("curve samples must be finite")
        if np.any(rho <= 0.0):
            raise NonPositiveRadius(f"minimum radius {rho.min():g} is not positive")
        rho.setflags(write=False)
        object.__setattr__(self, "samples", rho)

    @classmethod
    def constant(cls, radius: float, n: int = 64) -> "RadialCurve":
        return cls(np.full(n, float(radius)))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    def resample(self, n: int) -> "RadialCurve":
        if n == self.n:
            return self
        return RadialCurve(self.radius_at(TWO_PI * np.arange(n) / n))

    def scaled(self, c: float) -> "RadialCurve":
        return RadialCurve(c * self.samples)

    def points(self) -> np.ndarray:
        th = self.angles
        return np.column_stack((self.samples * np.cos(th), self.samples * np.sin(th)))

    def is_constant(self) -> bool:
        return bool(np.ptp(self.samples) == 0.0)

    def radius_at(self, phi) -> np.ndarray:
        """Radius at which the ray of angle ``phi`` meets the chord polyline."""
        phi = np.mod(np.asarray(phi, dtype=float), TWO_PI)
        t = phi * (self.n / TWO_PI)
        i = np.minimum(np.floor(t).astype(int), self.n - 1)
        frac = t - i
        j = (i + 1) % self.n
        d = TWO_PI / self.n
        th_i = i * d
        r0, r1 = self.samples[i], self.samples[j]
        num = r0 * r1 * np.sin(d)
        den = r0 * np.sin(phi - th_i) + r1 * np.sin(th_i + d - phi)
        # land exactly on the samples
        return np.where(frac == 0.0, r0, num / den)


@dataclass(frozen=True, eq=False)
class AnnularDomain:
    outer: RadialCurve
    inner: RadialCurve | None = None

    @property
    def b(self) -> int:
        return 1 if self.inner is None else 2

    @property
    def components(self) -> tuple[str, ...]:
        return ("outer",) if self.inner is None else COMPONENTS

    def curve(self, component: str) -> RadialCurve:
        if component == "outer":
            return self.outer
        if component == "inner" and self.inner is not None:
            return self.inner
        raise GeometryError(f"domain has no {component!r} boundary component")

    def resample(self, n: int) -> "AnnularDomain":
        inner = None if self.inner is None else self.inner.resample(n)
        return AnnularDomain(self.outer.resample(n), inner)

    def scaled(self, c: float) -> "AnnularDomain":
        inner = None if self.inner is None else self.inner.scaled(c)
        return AnnularDomain(self.outer.scaled(c), inner)

    def polygon_area(self) -> float:
        """Area enclosed between the two chord polylines (shoelace formula)."""
        area = _shoelace(self.outer.points())
        if self.inner is not None:
            area -= _shoelace(self.inner.points())
        return area


def _shoelace(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def build_annular_domain(outer: RadialCurve, inner: RadialCurve | None = None) -> AnnularDomain:
    """Validate the curve pair and return the domain between them.

    Inside each angular wedge of the union of both sample grids the two curves
    are straight segments, which can only cross if their order differs on
    the bounding rays; checking the rays is therefore exhaustive.
    """
    if inner is not None:
        th = np.union1d(inner.angles, outer.angles)
        gap = outer.radius_at(th) - inner.radius_at(th)
        if np.any(gap <= 0.0):
            k = int(np.argmin(gap))
            raise CurveIntersection(
                f"inner curve reaches the outer curve near theta={th[k]:.6f} (gap {gap[k]:g})"
            )
    return AnnularDomain(outer, inner)


@dataclass(frozen=True, eq=False)
class TriMesh:
    """P1 triangulation with tagged boundary edges.

    ``edge_theta`` holds the boundary parameter of both edge endpoints; the
    closing edge of a ring carries ``2 pi`` rather than ``0`` at its end so
    that parameters increase along every edge.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    edge_tags: np.ndarray
    edge_theta: np.ndarray
    n_theta: int = 0
    n_radial: int = 0

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.boundary_edges)

    def signed_areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def scaled(self, c: float) -> "TriMesh":
        return TriMesh(
            c * self.nodes,
            self.triangles,
            self.boundary_edges,
            self.edge_tags,
            self.edge_theta,
            self.n_theta,
            self.n_radial,
        )


def mesh_domain(domain: AnnularDomain, n_theta: int, n_radial: int, grading: float = 1.0) -> TriMesh:
    """Transfinite polar grid between the boundary curves, quads split in two.

    Ring ``j`` sits at ``(1 - s_j) rho_in + s_j rho_out`` with
    ``s_j = (j / n_radial) ** grading``; ``grading > 1`` clusters rings at the
    inner curve. For a disk the ``s = 0`` ring collapses to the centre node.
    Each quad is split along its shorter diagonal.
    """
    n_theta = int(n_theta)
    n_radial = int(n_radial)
    if n_radial < 2:
        raise ResolutionMismatch(f"n_radial must be >= 2, got {n_radial}")
    for comp in domain.components:
        c = domain.curve(comp)
        if n_theta % c.n:
            raise ResolutionMismatch(
                f"n_theta={n_theta} is not a multiple of the {comp} curve sample count {c.n}"
            )

    theta = TWO_PI * np.arange(n_theta) / n_theta
    rho_out = domain.outer.radius_at(theta)
    rho_in = np.zeros(n_theta) if domain.inner is None else domain.inner.radius_at(theta)
    disk = domain.inner is None

    if grading < 1.0:
        raise ResolutionMismatch(f"grading exponent must be >= 1, got {grading}")
    s = (np.arange(n_radial + 1) / n_radial) ** grading
    rho = (1.0 - s)[:, None] * rho_in[None, :] + s[:, None] * rho_out[None, :]
    ring_xy = np.stack((rho * np.cos(theta), rho * np.sin(theta)), axis=-1)

    if disk:
        nodes = np.vstack(([[0.0, 0.0]], ring_xy[1:].reshape(-1, 2)))

        def idx(j, i):
            return 1 + (j - 1) * n_theta + (i % n_theta)

        j_first = 1
    else:
        nodes = ring_xy.reshape(-1, 2)

        def idx(j, i):
            return j * n_theta + (i % n_theta)

        j_first = 0

    i = np.arange(n_theta)
    tris = []
    if disk:
        tris.append(np.column_stack((np.zeros(n_theta, dtype=int), idx(1, i), idx(1, i + 1))))
    for j in range(j_first, n_radial):
        a, b, c, d = idx(j, i), idx(j, i + 1), idx(j + 1, i + 1), idx(j + 1, i)
        ac = np.linalg.norm(nodes[a] - nodes[c], axis=1)
        bd = np.linalg.norm(nodes[b] - nodes[d], axis=1)
        use_ac = ac <= bd
        # a -> b -> c -> d runs clockwise in the plane
        t1 = np.where(use_ac[:, None], np.column_stack((a, c, b)), np.column_stack((a, d, b)))
        t2 = np.where(use_ac[:, None], np.column_stack((a, d, c)), np.column_stack((b, d, c)))
        tris.extend((t1, t2))
    triangles = np.vstack(tris).astype(np.int64)

    th_end = theta + TWO_PI / n_theta
    edges, tags, thetas = [], [], []
    if not disk:
        edges.append(np.column_stack((idx(0, i), idx(0, i + 1))))
        tags.append(np.full(n_theta, "inner"))
        thetas.append(np.column_stack((theta, th_end)))
    edges.append(np.column_stack((idx(n_radial, i), idx(n_radial, i + 1))))
    tags.append(np.full(n_theta, "outer"))
    thetas.append(np.column_stack((theta, th_end)))

    mesh = TriMesh(
        nodes=nodes,
        triangles=triangles,
        boundary_edges=np.vstack(edges).astype(np.int64),
        edge_tags=np.concatenate(tags),
        edge_theta=np.vstack(thetas),
        n_theta=n_theta,
        n_radial=n_radial,
    )
    areas = mesh.signed_areas()
    if np.any(areas <= 0.0):
        bad = int(np.sum(areas <= 0.0))
        raise DegenerateElement(f"{bad} triangle(s) inverted or degenerate (min signed area {areas.min():g})")
    return mesh


def boundary_curve_length(curve: RadialCurve) -> float:
    """Length of the closed chord polyline through the samples."""
    pts = curve.points()
    return float(np.sum(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)))


def _point_polyline_distance(points: np.ndarray, poly: np.ndarray, chunk: int = 512) -> np.ndarray:
    a = poly
    ab = np.roll(poly, -1, axis=0) - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], chunk):
        p = points[start : start + chunk]
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("pij,ij->pi", ap, ab) / ab2, 0.0, 1.0)
        diff = ap - t[..., None] * ab[None, :, :]
        out[start : start + chunk] = np.sqrt(np.min(np.einsum("pij,pij->pi", diff, diff), axis=1))
    return out


def _refined_points(curve: RadialCurve, extra_angles: np.ndarray) -> np.ndarray:
    th = np.union1d(curve.angles, np.mod(extra_angles, TWO_PI))
    r = curve.radius_at(th)
    return np.column_stack((r * np.cos(th), r * np.sin(th)))


def hausdorff_distance(a: RadialCurve, b: RadialCurve) -> float:
    """Symmetric Hausdorff distance between the two chord polylines.

    Each polyline is probed at its own vertices plus the points where the
    rays through the other curve's vertices cross it.
    """
    pa = _refined_points(a, b.angles)
    pb = _refined_points(b, a.angles)
    d_ab = _point_polyline_distance(pa, b.points()).max()
    d_ba = _point_polyline_distance(pb, a.points()).max()
    return float(max(d_ab, d_ba))


@dataclass
class MeshReport:
    min_angle_deg: float
    max_aspect_ratio: float
    euler_characteristic: int
    component_count: int
    total_area: float
    boundary_lengths: dict[str, float]
    n_inverted: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_mesh(mesh: TriMesh, expected_components: int | None = None) -> MeshReport:
    """Diagnose a mesh; problems are listed in ``failures`` rather than raised.

    Topology is recomputed from the triangles alone (edges used by exactly one
    triangle form the boundary), independently of the stored edge tags.
    """
    tri = mesh.triangles
    p = mesh.nodes[tri]
    areas = mesh.signed_areas()
    n_inverted = int(np.sum(areas <= 0.0))

    e = np.stack((p[:, 1] - p[:, 2], p[:, 2] - p[:, 0], p[:, 0] - p[:, 1]), axis=1)
    lens = np.linalg.norm(e, axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        angles = []
        for k in range(3):
            u = -e[:, (k + 1) % 3]
            v = e[:, (k + 2) % 3]
            cosang = np.einsum("ij,ij->i", u, v) / (lens[:, (k + 1) % 3] * lens[:, (k + 2) % 3])
            angles.append(np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0))))
        angles = np.column_stack(angles)
        abs_area = np.abs(areas)
        semi = 0.5 * lens.sum(axis=1)
        inradius = abs_area / semi
        circumradius = np.prod(lens, axis=1) / (4.0 * abs_area)
        aspect = circumradius / (2.0 * inradius)

    all_edges = np.sort(np.vstack((tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]])), axis=1)
    uniq, counts = np.unique(all_edges, axis=0, return_counts=True)
    n_used = np.unique(tri).size
    chi = int(n_used - uniq.shape[0] + tri.shape[0])

    bnd = uniq[counts == 1]
    if bnd.size:
        verts, inv = np.unique(bnd, return_inverse=True)
        inv = inv.reshape(-1, 2)
        g = coo_matrix(
            (np.ones(inv.shape[0]), (inv[:, 0], inv[:, 1])), shape=(verts.size, verts.size)
        )
        n_cycles, _ = connected_components(g, directed=False)
        degree = np.bincount(inv.ravel(), minlength=verts.size)
        simple_cycles = bool(np.all(degree == 2))
    else:
        n_cycles, simple_cycles = 0, True

    seg = np.linalg.norm(mesh.nodes[mesh.boundary_edges[:, 1]] - mesh.nodes[mesh.boundary_edges[:, 0]], axis=1)
    lengths = {str(t): float(seg[mesh.edge_tags == t].sum()) for t in np.unique(mesh.edge_tags)}

    failures = []
    if n_inverted:
        failures.append(f"{n_inverted} inverted triangle(s)")
    if not simple_cycles:
        failures.append("boundary edges do not form simple cycles")
    if expected_components is not None:
        if n_cycles != expected_components:
            failures.append(f"{n_cycles} boundary cycle(s), expected {expected_components}")
        if chi != 2 - expected_components:
            failures.append(f"Euler characteristic {chi}, expected {2 - expected_components}")
    if not (np.all(np.isfinite(angles)) and np.all(np.isfinite(aspect))):
        failures.append("non-finite element quality values")

    return MeshReport(
        min_angle_deg=float(np.nanmin(angles)),
        max_aspect_ratio=float(np.nanmax(aspect)),
        euler_characteristic=chi,
        component_count=int(n_cycles),
        total_area=float(abs_area.sum()),
        boundary_lengths=lengths,
        n_inverted=n_inverted,
        failures=failures,
    )


def dump_mesh(mesh: TriMesh, path) -> None:
    """Write the plain-text mesh dump (nodes, 0-based triangles, boundary edges)."""
    lines = [f"nodes {mesh.n_nodes}"]
    lines += [f"{x!r} {y!r}" for x, y in mesh.nodes.tolist()]
    lines.append(f"triangles {mesh.triangles.shape[0]}")
    lines += [f"{i} {j} {k}" for i, j, k in mesh.triangles.tolist()]
    lines.append(f"boundary_edges {mesh.boundary_edges.shape[0]}")
    for (i, j), tag, (ti, tj) in zip(mesh.boundary_edges.tolist(), mesh.edge_tags, mesh.edge_theta.tolist()):
        lines.append(f"{i} {j} {tag} {ti!r} {tj!r}")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IOFailure(f"cannot write mesh dump to {path}: {exc}") from exc


def load_mesh(path) -> TriMesh:
    """Inverse of :func:`dump_mesh`."""
    try:
        text = Path(path).read_text().split("\n")
    except OSError as exc:
        raise IOFailure(f"cannot read mesh dump {path}: {exc}") from exc
    pos = 0

    def header(name):
        nonlocal pos
        key, count = text[pos].split()
        if key != name:
            raise GeometryError(f"expected section {name!r}, found {key!r}")
        pos += 1
        rows = text[pos : pos + int(count)]
        pos += int(count)
        return [r.split() for r in rows]

    nodes = np.array([[float(v) for v in r] for r in header("nodes")]).reshape(-1, 2)
    triangles = np.array([[int(v) for v in r] for r in header("triangles")], dtype=np.int64).reshape(-1, 3)
    rows = header("boundary_edges")
    edges = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64).reshape(-1, 2)
    tags = np.array([r[2] for r in rows])
    thetas = np.array([[float(r[3]), float(r[4])] for r in rows]).reshape(-1, 2)
    return TriMesh(nodes, triangles, edges, tags, thetas)
