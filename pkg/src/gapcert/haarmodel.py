"""Permutation-state machinery for the Haar-projector model.

The single-site ground states are psi_sigma = (Pi_sigma x Id) Omega with
Omega the normalized maximally entangled vector between the t ket copies and
the t bra copies of C^q making up one site.  Products psi_sigma^(x n) are
annihilated by every edge projector, and the kernel of the n-site chain
Hamiltonian is their (non-orthogonal) span.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .graphs import Graph, build_star
from .hamiltonian import DEFAULT_POLICY, ResourcePolicy, assemble, frustration_free_residual
from .interactions import haar_projector, permutation_vector
from .randmat import Permutation
from .spectra import KERNEL_THRESHOLD, dense_spectrum, extract_gap, iterative_lowest

STAR_GAP_SLACK = 1e-7


@dataclass(frozen=True)
class PermutationState:
    q: int
    t: int
    sigma: Permutation
    vector: np.ndarray

    def __post_init__(self):
        norm = np.linalg.norm(self.vector)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"permutation state norm {norm} deviates from 1")


def all_permutations(t: int) -> list[Permutation]:
    """S_t in the fixed iteration order used everywhere in this package."""
    return [Permutation(p) for p in itertools.permutations(range(t))]


def permutation_state(sigma: Permutation, q: int,
                      policy: ResourcePolicy = DEFAULT_POLICY) -> PermutationState:
    if q < 2:
        raise ValueError("q must be at least 2")
    t = sigma.size
    dim = q ** (2 * t)
    if dim > policy.matrix_free_cap:
        raise ResourceLimitError(f"site dimension {dim} exceeds policy", dimension=dim)
    return PermutationState(q=q, t=t, sigma=sigma,
                            vector=permutation_vector(sigma.images, q))


def basis_change(q: int, t: int) -> np.ndarray:
    """B: columns are the t! permutation states; B^T B is their Gram matrix."""
    states = [permutation_state(s, q) for s in all_permutations(t)]
    return np.stack([s.vector for s in states], axis=1)


def _product_state(vector: np.ndarray, n: int) -> np.ndarray:
    out = vector
    for _ in range(n - 1):
        out = np.kron(out, vector)
    return out


def ground_space_basis(q: int, t: int, n: int) -> np.ndarray:
    """Columns psi_sigma^(x n) over sigma in S_t (not mutually orthogonal)."""
    B = basis_change(q, t)
    return np.stack([_product_state(B[:, j], n) for j in range(B.shape[1])], axis=1)


def ground_space_residuals(q: int, t: int, graph: Graph,
                           policy: ResourcePolicy = DEFAULT_POLICY) -> float:
    """max over sigma of ||H psi_sigma^(x n)||; ~0 certifies frustration-freeness."""
    H = assemble(graph, haar_projector(q, t), policy)
    n = graph.vertex_count
    worst = 0.0
    for sigma in all_permutations(t):
        state = _product_state(permutation_state(sigma, q).vector, n)
        worst = max(worst, frustration_free_residual(H, state))
    return worst


@dataclass(frozen=True)
class DefectResult:
    defect: float
    bound: float
    kernel_dimension: int


def orthogonality_defect(q: int, t: int, n: int,
                         policy: ResourcePolicy = DEFAULT_POLICY) -> DefectResult:
    """Operator-norm distance between sum_sigma |psi^xn><psi^xn| and the
    kernel projector of the n-site chain, with the t^2/q^n reference bound.

    The kernel projector is taken from the dense eigensolution of the chain
    Hamiltonian, so this also reports the numerical kernel dimension.
    """
    if n < 2:
        raise ValueError("need at least two sites")
    from .graphs import build_path

    H = assemble(build_path(n), haar_projector(q, t), policy)
    dense = H.dense()
    eigenvalues, eigenvectors = np.linalg.eigh(dense)
    kernel_dim = int(np.sum(eigenvalues < KERNEL_THRESHOLD))
    K = eigenvectors[:, :kernel_dim]
    Q_chain = K @ K.T
    S = np.zeros_like(Q_chain)
    for sigma in all_permutations(t):
        state = _product_state(permutation_state(sigma, q).vector, n)
        S += np.outer(state, state)
    defect = float(np.linalg.norm(S - Q_chain, 2))
    return DefectResult(defect=defect, bound=t * t / q**n, kernel_dimension=kernel_dim)


def rank1_sum_operator(psi: np.ndarray, m: int) -> np.ndarray:
    """sum_i psi_i x Id - m psi^(x m) for a rank-1 projector psi on C^D."""
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
        raise ValueError("psi must be a square matrix")
    if abs(np.trace(psi) - 1.0) > 1e-10 or np.abs(psi @ psi - psi).max() > 1e-10:
        raise ValueError("psi must be a rank-1 projector")
    if m < 2:
        raise ValueError("m must be at least 2")
    D = psi.shape[0]
    dim = D**m
    total = np.zeros((dim, dim))
    for i in range(m):
        factors = [psi if j == i else np.eye(D) for j in range(m)]
        term = factors[0]
        for f in factors[1:]:
            term = np.kron(term, f)
        total += term
    power = psi
    for _ in range(m - 1):
        power = np.kron(power, psi)
    return total - m * power


def rank1_sum_norm(psi: np.ndarray, m: int) -> float:
    """Operator norm of the rank-1 sum defect; equals m - 1 for any rank-1 psi,
    with spectrum exactly {0, 1, ..., m-1}."""
    eigenvalues = np.linalg.eigvalsh(rank1_sum_operator(psi, m))
    return float(max(abs(eigenvalues[0]), abs(eigenvalues[-1])))


@dataclass(frozen=True)
class StarGapResult:
    gap: float
    analytic: float
    satisfied: bool
    method: str


def star_gap_check(q: int, t: int, legs: int,
                   policy: ResourcePolicy = DEFAULT_POLICY,
                   tol: float = 1e-9) -> StarGapResult:
    """Gap of the (legs+1)-site star vs the analytic floor 1 - 2*legs*t^2/q.

    Dense within policy; otherwise iterative with the known ground states
    deflated out.  `satisfied` allows a 1e-7 slack on the analytic side.
    """
    if legs < 1:
        raise ValueError("need at least one leg")
    sites = legs + 1
    H = assemble(build_star(sites), haar_projector(q, t), policy)
    if H.total_dimension <= policy.dense_cap:
        result = dense_spectrum(H)
        method = "dense"
    else:
        basis = ground_space_basis(q, t, sites)
        result = iterative_lowest(H, how_many=min(4, math.factorial(t) + 2),
                                  deflation_basis=basis, tol=tol)
        method = "iterative"
    gap = extract_gap(result)
    analytic = 1.0 - 2.0 * legs * t * t / q
    return StarGapResult(gap=gap, analytic=analytic,
                         satisfied=gap >= analytic - STAR_GAP_SLACK, method=method)
