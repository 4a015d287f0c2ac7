"""Two-site projector interactions: random rank-1 and Haar-moment classes.

Both classes produce a swap-symmetric projector P on the two-site space
(C^dloc) x (C^dloc):

* rank-1: P = |v><v| with v the vectorization of a Frobenius-normalized
  symmetric coefficient matrix C (v = sum_ij C_ij e_i x e_j).
* Haar: P = Id - Q, where Q projects onto the simultaneous fixed space of
  the t-fold two-site moment action of the unitary group U(q^2).  Each site
  carries t "ket" and t "bra" copies of C^q.  Grouped by replica, the moment
  action is U^(x t) on the ket copies and conj(U)^(x t) on the bra copies
  with U mixing one q-factor from each site; its fixed space is spanned by
  the vectorized permutation operators on (C^{q^2})^(x t).  Regrouped
  site-by-site those spanning vectors factorize as psi_tau x psi_tau, where
  psi_tau is the single-site vectorized permutation state, which is the form
  constructed here.  (Grouping the moment action site-by-site instead would
  not annihilate the product ground states psi_sigma^(x n), so the replica
  grouping is the one consistent with frustration-freeness.)
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GramSingularError, InapplicableBoundError, ResourceLimitError
from .randmat import Permutation, cycle_count

TWO_SITE_DENSE_CAP = 65536          # max two-site dimension for dense materialization
GRAM_EIGENVALUE_FLOOR = 1e-12       # relative to the largest Gram eigenvalue
HERMITICITY_TOL = 1e-10
IDEMPOTENCE_TOL = 1e-10
SCHMIDT_TOL = 1e-8


@dataclass(frozen=True)
class GOEProvenance:
    coefficients: np.ndarray        # symmetric, Frobenius norm 1


@dataclass(frozen=True)
class HaarProvenance:
    q: int
    t: int
    ground_basis: np.ndarray        # columns phi_tau, shape (dloc^2, t!)
    gram: np.ndarray                # Gram matrix of the columns, t! x t!
    gram_inverse: np.ndarray


@dataclass(frozen=True)
class Interaction:
    """A two-site projector with its construction record.

    `apply_pairs` acts matrix-free on arrays whose first axis is the
    two-site index; `dense` materializes the full projector when the
    two-site dimension is within the dense cap.
    """

    local_dimension: int
    rank: int
    provenance: GOEProvenance | HaarProvenance

    @property
    def two_site_dimension(self) -> int:
        return self.local_dimension ** 2

    @property
    def is_goe(self) -> bool:
        return isinstance(self.provenance, GOEProvenance)

    @cached_property
    def _rank1_vector(self) -> np.ndarray:
        return self.provenance.coefficients.reshape(-1)

    def apply_pairs(self, mat: np.ndarray) -> np.ndarray:
        """P @ mat for mat of shape (two_site_dimension, ...)."""
        if self.is_goe:
            v = self._rank1_vector
            return np.multiply.outer(v, v @ mat)
        prov = self.provenance
        coeff = prov.gram_inverse @ (prov.ground_basis.T @ mat)
        return mat - prov.ground_basis @ coeff

    def dense(self, cap: int = TWO_SITE_DENSE_CAP) -> np.ndarray:
        D = self.two_site_dimension
        if D > cap:
            raise ResourceLimitError(
                f"two-site dimension {D} exceeds the dense cap {cap}", dimension=D
            )
        if self.is_goe:
            v = self._rank1_vector
            return np.outer(v, v)
        prov = self.provenance
        Q = prov.ground_basis @ prov.gram_inverse @ prov.ground_basis.T
        return np.eye(D) - Q


# ---------------------------------------------------------------------------
# rank-1 class


def normalize_coefficients(G: np.ndarray) -> np.ndarray:
    """C = G / sqrt(Tr(G^T G)); requires a nonzero symmetric square matrix."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {G.shape}")
    if not np.array_equal(G, G.T):
        raise ValueError("coefficient matrix must be exactly symmetric")
    norm = float(np.linalg.norm(G))
    if norm == 0.0:
        raise ValueError("zero matrix cannot be normalized")
    return G / norm


def rank1_projector(C: np.ndarray) -> Interaction:
    """P = |v><v| for v = sum_ij C_ij e_i x e_j; swap symmetry from C = C^T."""
    C = np.asarray(C, dtype=float)
    d = C.shape[0]
    if abs(np.linalg.norm(C) - 1.0) > 1e-10:
        raise ValueError("coefficient matrix must have Frobenius norm 1")
    if not np.array_equal(C, C.T):
        raise ValueError("coefficient matrix must be exactly symmetric")
    return Interaction(local_dimension=d, rank=1, provenance=GOEProvenance(C))


@dataclass(frozen=True)
class SchmidtResult:
    kind: str                       # "product" or "entangled"
    singular_values: np.ndarray

    @property
    def is_product(self) -> bool:
        return self.kind == "product"


def schmidt_rank_test(C: np.ndarray, tol: float = SCHMIDT_TOL) -> SchmidtResult:
    """Classify v = vec(C) as a product state (C has matrix rank 1) or entangled.

    For symmetric C a rank-1 factorization forces v = u x u, so the second
    singular value relative to the first decides the dichotomy.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(np.asarray(C, dtype=float), compute_uv=False)
    if len(s) < 2 or s[1] <= tol * s[0]:
        return SchmidtResult("product", s)
    return SchmidtResult("entangled", s)


def intersection_dimension(interaction: Interaction, tol: float = 1e-8) -> int:
    """dim(ran P_12 intersect ran P_23) on the 3-site space, rank-1 class only.

    Computed from the principal angles between the two d-dimensional ranges
    span{v x e_k} and span{e_i x v}: the intersection dimension is the number
    of principal cosines at 1.
    """
    if not interaction.is_goe:
        raise InapplicableBoundError(
            "intersection dimension is computed only for the rank-1 class"
        )
    C = interaction.provenance.coefficients
    d = interaction.local_dimension
    v = C.reshape(-1)
    left = np.zeros((d**3, d))
    right = np.zeros((d**3, d))
    for k in range(d):
        left[:, k] = np.kron(v, np.eye(d)[:, k])
        right[:, k] = np.kron(np.eye(d)[:, k], v)
    cosines = np.linalg.svd(left.T @ right, compute_uv=False)
    return int(np.sum(cosines >= 1.0 - tol))


# ---------------------------------------------------------------------------
# Haar class


def permutation_operator(images: tuple[int, ...], q: int) -> np.ndarray:
    """Operator on (C^q)^(x t) moving the content of slot j to slot images[j]."""
    t = len(images)
    op = np.eye(q**t).reshape((q,) * (2 * t))
    inverse = [0] * t
    for j, target in enumerate(images):
        inverse[target] = j
    op = op.transpose(tuple(inverse) + tuple(range(t, 2 * t)))
    return op.reshape(q**t, q**t)


def permutation_vector(images: tuple[int, ...], q: int) -> np.ndarray:
    """Unit vector psi_sigma: the normalized vectorization of the permutation
    operator, living on one site of dimension q^(2t)."""
    t = len(images)
    return permutation_operator(images, q).reshape(-1) / q ** (t / 2)


def gram_matrix(base_dimension: int, t: int) -> np.ndarray:
    """Gram matrix of the t! normalized permutation vectors on base dimension D.

    Entries are D^(cycles(sigma^-1 tau) - t); unit diagonal, positive definite
    for D >= t.
    """
    if base_dimension < 1:
        raise ValueError("base dimension must be positive")
    perms = [Permutation(p) for p in itertools.permutations(range(t))]
    W = np.empty((len(perms), len(perms)))
    for i, s in enumerate(perms):
        s_inv = s.inverse()
        for j, u in enumerate(perms):
            W[i, j] = float(base_dimension) ** (cycle_count(s_inv.compose(u)) - t)
    return W


def haar_projector(q: int, t: int) -> Interaction:
    """P = Id - Q with Q the projector onto span{psi_tau x psi_tau : tau in S_t}.

    Q is assembled from its range: Phi holds the t! spanning vectors and
    Q = Phi W^-1 Phi^T with W their Gram matrix.  Requires q^2 >= t for the
    Gram matrix to be invertible; q > t is the regime in which the analytic
    star bounds are nonvacuous, and smaller q only triggers a warning.
    """
    if q < 1 or t < 1:
        raise ValueError("q and t must be positive")
    if q * q < t:
        raise GramSingularError(
            f"permutation vectors are linearly dependent for q^2 = {q * q} < t = {t}"
        )
    if q <= t:
        warnings.warn(
            f"q={q}, t={t} is outside the q > t regime; analytic bounds are vacuous",
            RuntimeWarning,
            stacklevel=2,
        )
    dloc = q ** (2 * t)
    order = math.factorial(t)
    columns = np.empty((dloc * dloc, order))
    for j, images in enumerate(itertools.permutations(range(t))):
        psi = permutation_vector(images, q)
        columns[:, j] = np.kron(psi, psi)
    W = columns.T @ columns
    evals, evecs = np.linalg.eigh(W)
    if evals[0] < GRAM_EIGENVALUE_FLOOR * evals[-1]:
        raise GramSingularError(
            f"Gram matrix numerically singular (eigenvalues {evals[0]:.3e}"
            f" .. {evals[-1]:.3e})"
        )
    W_inv = (evecs / evals) @ evecs.T
    return Interaction(
        local_dimension=dloc,
        rank=dloc * dloc - order,
        provenance=HaarProvenance(
            q=q, t=t, ground_basis=columns, gram=W, gram_inverse=W_inv
        ),
    )
