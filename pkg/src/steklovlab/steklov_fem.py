"""P1 finite elements for the weighted Steklov problem.

Harmonic extension is eliminated by a Schur complement onto the boundary
nodes, which leaves the dense pencil ``S v = sigma M v`` with ``S`` the
discrete Dirichlet-to-Neumann matrix and ``M`` the weighted boundary mass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .density import BoundaryDensity, eval_density, weighted_boundary_length
from .errors import (
    ComponentMismatch,
    ConvergenceFailure,
    DegenerateTriangle,
    NotPositiveDefinite,
    SingularInterior,
)
from .geometry import AnnularDomain, TriMesh, mesh_domain

EIG_RTOL = 1e-9
SCHUR_CHUNK = 256


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    stiffness: sp.csr_matrix
    boundary_mass: sp.csr_matrix
    boundary_index: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.stiffness.shape[0]

    @property
    def interior_index(self) -> np.ndarray:
        mask = np.ones(self.n_nodes, dtype=bool)
        mask[self.boundary_index] = False
        return np.flatnonzero(mask)


@dataclass
class PencilSolution:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray


@dataclass
class Spectrum:
    raw: np.ndarray
    normalised: np.ndarray
    k_max: int
    metadata: dict = field(default_factory=dict)


def stiffness_matrix(mesh: TriMesh) -> sp.csr_matrix:
    p = mesh.nodes[mesh.triangles]
    area = mesh.signed_areas()
    if np.any(area <= 0.0):
        raise DegenerateTriangle(f"{int(np.sum(area <= 0.0))} triangle(s) with non-positive area")
    # b_i = y_{i+1} - y_{i+2}, c_i = x_{i+2} - x_{i+1}
    b = np.roll(p[:, :, 1], -1, axis=1) - np.roll(p[:, :, 1], -2, axis=1)
    c = np.roll(p[:, :, 0], -2, axis=1) - np.roll(p[:, :, 0], -1, axis=1)
    local = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.n_nodes
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def boundary_mass_matrix(mesh: TriMesh, beta: BoundaryDensity) -> sp.csr_matrix:
    """Exact integral of (linear weight) x (hat_i hat_j) over every boundary edge.

    The weight is sampled at the edge endpoints; on an edge of length ``h``
    with endpoint weights ``ba, bb`` the local block is
    ``h/12 * [[3ba + bb, ba + bb], [ba + bb, ba + 3bb]]``.
    """
    e = mesh.boundary_edges
    h = np.linalg.norm(mesh.nodes[e[:, 1]] - mesh.nodes[e[:, 0]], axis=1)
    ba = np.empty(len(e))
    bb = np.empty(len(e))
    for tag in np.unique(mesh.edge_tags):
        sel = mesh.edge_tags == tag
        if getattr(beta, str(tag), None) is None:
            raise ComponentMismatch(f"density has no weight for the {tag} component")
        ba[sel] = eval_density(beta, str(tag), mesh.edge_theta[sel, 0])
        bb[sel] = eval_density(beta, str(tag), mesh.edge_theta[sel, 1])
    off = h * (ba + bb) / 12.0
    data = np.concatenate((h * (3.0 * ba + bb) / 12.0, h * (ba + 3.0 * bb) / 12.0, off, off))
    rows = np.concatenate((e[:, 0], e[:, 1], e[:, 0], e[:, 1]))
    cols = np.concatenate((e[:, 0], e[:, 1], e[:, 1], e[:, 0]))
    n = mesh.n_nodes
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def assemble(mesh: TriMesh, beta: BoundaryDensity) -> AssembledSystem:
    stiffness = stiffness_matrix(mesh)
    full_mass = boundary_mass_matrix(mesh, beta)
    bidx = mesh.boundary_nodes()
    return AssembledSystem(stiffness, full_mass[bidx][:, bidx].tocsr(), bidx)


def dtn_matrix(system: AssembledSystem) -> np.ndarray:
    """Dense ``A_BB - A_BI A_II^{-1} A_IB`` over the boundary nodes.

    ``A_II`` is factorised sparsely without pivoting in symmetric mode, so a
    non-positive pivot signals a matrix that is not positive definite.
    """
    A = system.stiffness.tocsc()
    bidx = system.boundary_index
    iidx = system.interior_index
    if iidx.size == 0:
        raise SingularInterior("mesh has no interior nodes")
    A_II = A[iidx][:, iidx].tocsc()
    A_IB = A[iidx][:, bidx].tocsc()
    A_BI = A[bidx][:, iidx].tocsr()
    S = A[bidx][:, bidx].toarray()
    try:
        lu = splu(
            A_II,
            permc_spec="MMD_AT_PLUS_A",
            diag_pivot_thresh=0.0,
            options={"SymmetricMode": True},
        )
    except RuntimeError as exc:
        raise SingularInterior(f"interior factorisation failed: {exc}") from exc
    pivots = lu.U.diagonal()
    if not np.all(pivots > 0.0):
        raise SingularInterior("interior stiffness block is not positive definite")
    for start in range(0, bidx.size, SCHUR_CHUNK):
        stop = min(start + SCHUR_CHUNK, bidx.size)
        X = lu.solve(A_IB[:, start:stop].toarray())
        S[:, start:stop] -= A_BI @ X
    return S


def solve_pencil(S, M, k_max: int) -> PencilSolution:
    """Smallest ``k_max + 1`` eigenpairs of ``S v = sigma M v``.

    ``M = L L^T`` reduces the pencil to the symmetric matrix ``L^-1 S L^-T``.
    """
    S = S.toarray() if sp.issparse(S) else np.asarray(S, dtype=float)
    M = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=float)
    n = S.shape[0]
    if not 0 <= k_max < n:
        raise ValueError(f"k_max must lie in [0, {n - 1}], got {k_max}")
    try:
        L = sla.cholesky(M, lower=True)
    except sla.LinAlgError as exc:
        raise NotPositiveDefinite(f"boundary mass is not positive definite: {exc}") from exc
    C = sla.solve_triangular(L, S, lower=True)
    C = sla.solve_triangular(L, C.T, lower=True)
    C = 0.5 * (C + C.T)
    try:
        values, Y = sla.eigh(C, subset_by_index=[0, k_max], driver="evr")
    except sla.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolver failed: {exc}") from exc
    V = sla.solve_triangular(L.T, Y, lower=False)
    R = S @ V - (M @ V) * values
    residuals = np.linalg.norm(R, axis=0) / np.linalg.norm(V, axis=0)
    scale = np.linalg.norm(S)
    if scale > 0.0 and np.any(residuals > EIG_RTOL * scale):
        raise ConvergenceFailure(
            f"eigen residual {residuals.max():.3e} exceeds {EIG_RTOL:g} * ||S|| = {EIG_RTOL * scale:.3e}"
        )
    return PencilSolution(values, V, residuals)


def mesh_spectrum(mesh: TriMesh, beta: BoundaryDensity, k_max: int) -> Spectrum:
    """Spectrum on a given mesh, normalised by the discrete weighted boundary length."""
    t0 = time.perf_counter()
    system = assemble(mesh, beta)
    S = dtn_matrix(system)
    sol = solve_pencil(S, system.boundary_mass, k_max)
    length = float(system.boundary_mass.sum())
    return Spectrum(
        raw=sol.values,
        normalised=sol.values * length,
        k_max=k_max,
        metadata={
            "n_nodes": mesh.n_nodes,
            "n_boundary": int(system.boundary_index.size),
            "n_theta": mesh.n_theta,
            "n_radial": mesh.n_radial,
            "weighted_length": length,
            "area": float(mesh.signed_areas().sum()),
            "residuals": sol.residuals,
            "wall_ms": 1e3 * (time.perf_counter() - t0),
        },
    )


def steklov_spectrum(
    domain: AnnularDomain,
    beta: BoundaryDensity,
    n_theta: int,
    n_radial: int,
    k_max: int,
    grading: float = 1.0,
) -> Spectrum:
    """Mesh, assemble, reduce to the boundary, solve and normalise.

    In two dimensions the normalisation is the weighted boundary length alone.
    """
    t0 = time.perf_counter()
    mesh = mesh_domain(domain, n_theta, n_radial, grading)
    spec = mesh_spectrum(mesh, beta, k_max)
    length = weighted_boundary_length(domain.resample(n_theta), beta)
    spec.normalised = spec.raw * length
    spec.metadata["weighted_length"] = length
    spec.metadata["wall_ms"] = 1e3 * (time.perf_counter() - t0)
    return spec


def full_pencil_spectrum(system: AssembledSystem, k_max: int) -> np.ndarray:
    """Brute-force spectrum from the unreduced singular pencil on all nodes.

    Solves ``M_full v = mu (A + M_full) v`` densely; finite Steklov eigenvalues
    are ``1/mu - 1`` for the ``mu > 0``. Only meant for coarse meshes.
    """
    A = system.stiffness.toarray()
    n = A.shape[0]
    M = np.zeros((n, n))
    bidx = system.boundary_index
    M[np.ix_(bidx, bidx)] = system.boundary_mass.toarray()
    mu = sla.eigh(M, A + M, eigvals_only=True, subset_by_index=[n - k_max - 1, n - 1])
    return np.sort(1.0 / mu[::-1] - 1.0)
