"""Spectra and spectral gaps: dense eigensolution, deflated iterative extremal
eigensolution, and gap extraction respecting kernel degeneracy.

The kernel threshold (default 1e-8, absolute) separates numerically-zero
eigenvalues from the gap; it sits several orders above eigensolver residuals
and several below the smallest gaps arising at the scales handled here, and
it is recorded on every result.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, IndeterminateGapError, ResourceLimitError
from .hamiltonian import HamiltonianOperator

KERNEL_THRESHOLD = 1e-8
MAX_ITERATIVE_EIGENVALUES = 16


@dataclass(frozen=True)
class SpectralResult:
    lowest_eigenvalues: np.ndarray   # ascending
    kernel_dimension: int
    gap: float | None                # smallest eigenvalue above the threshold
    residual_norms: np.ndarray       # for the lowest computed eigenpairs
    method: str                      # "dense" or "iterative"
    kernel_threshold: float = KERNEL_THRESHOLD
    deflated_dimension: int = 0      # size of any deflated-out basis

    @property
    def gap_error_margin(self) -> float:
        res = float(self.residual_norms.max()) if self.residual_norms.size else 0.0
        return self.kernel_threshold + res


def _classify(eigenvalues: np.ndarray, threshold: float):
    kernel_dim = int(np.sum(eigenvalues < threshold))
    gap = float(eigenvalues[kernel_dim]) if kernel_dim < len(eigenvalues) else None
    return kernel_dim, gap


def dense_spectrum(H: HamiltonianOperator,
                   kernel_threshold: float = KERNEL_THRESHOLD,
                   compute_residuals: bool = True) -> SpectralResult:
    """Full spectrum by Hermitian eigensolution of the dense realization.

    With compute_residuals=False only eigenvalues are computed (roughly 2-3x
    faster at large dimension) and the residual list is empty.
    """
    dense = H.dense()   # raises ResourceLimitError above the policy cap
    if compute_residuals:
        eigenvalues, eigenvectors = np.linalg.eigh(dense)
    else:
        eigenvalues = np.linalg.eigvalsh(dense)
    kernel_dim, gap = _classify(eigenvalues, kernel_threshold)
    if compute_residuals:
        n_res = min(len(eigenvalues), kernel_dim + 16)
        block = eigenvectors[:, :n_res]
        residuals = np.linalg.norm(dense @ block - block * eigenvalues[:n_res], axis=0)
    else:
        residuals = np.empty(0)
    return SpectralResult(
        lowest_eigenvalues=eigenvalues,
        kernel_dimension=kernel_dim,
        gap=gap,
        residual_norms=residuals,
        method="dense",
        kernel_threshold=kernel_threshold,
    )


def iterative_lowest(H: HamiltonianOperator, how_many: int,
                     deflation_basis: np.ndarray | None = None,
                     tol: float = 1e-9,
                     kernel_threshold: float = KERNEL_THRESHOLD) -> SpectralResult:
    """Lowest eigenvalues of H restricted to the complement of a known basis.

    Deflation is projection-based: every matvec is wrapped in (Id - Pi) and
    the deflated span is shifted above ||H||, so the restricted extremal
    eigenvalues are the algebraically smallest ones of the wrapped operator.
    Each returned pair is verified against `tol`; non-convergence raises
    ConvergenceError carrying the best residual instead of returning a guess.
    """
    if how_many < 1 or how_many > MAX_ITERATIVE_EIGENVALUES:
        raise ValueError(f"how_many must be in 1..{MAX_ITERATIVE_EIGENVALUES}")
    dim = H.total_dimension
    if how_many >= dim:
        raise ValueError("requested as many eigenvalues as the full dimension")

    basis = None
    n_defl = 0
    if deflation_basis is not None and len(deflation_basis):
        basis = np.asarray(deflation_basis, dtype=float)
        if basis.ndim == 1:
            basis = basis[:, None]
        for j in range(basis.shape[1]):
            vec = basis[:, j]
            res = np.linalg.norm(H.apply(vec)) / np.linalg.norm(vec)
            if res > 1e-8:
                raise ValueError(
                    f"deflation vector {j} has residual {res:.3e} > 1e-8 under H"
                )
        basis, _ = np.linalg.qr(basis)
        n_defl = basis.shape[1]

    shift = H.norm_upper_bound() + 1.0

    if basis is None:
        matvec = H.apply
    else:
        def matvec(x):
            overlap = basis.T @ x
            x_perp = x - basis @ overlap
            y = H.apply(x_perp)
            y -= basis @ (basis.T @ y)
            return y + shift * (basis @ overlap)

    op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=float)
    ncv = min(dim - 1, max(20, 2 * how_many + 4))
    try:
        vals, vecs = spla.eigsh(op, k=how_many, which="SA", tol=tol,
                                ncv=ncv, maxiter=200 * how_many)
    except spla.ArpackNoConvergence as exc:
        best = None
        if exc.eigenvalues is not None and len(exc.eigenvalues):
            v = exc.eigenvectors[:, 0]
            best = float(np.linalg.norm(matvec(v) - exc.eigenvalues[0] * v))
        raise ConvergenceError(
            f"iterative eigensolve did not converge within budget: {exc}",
            best_residual=best,
        ) from exc

    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    residuals = np.empty(how_many)
    for j in range(how_many):
        residuals[j] = np.linalg.norm(matvec(vecs[:, j]) - vals[j] * vecs[:, j])
    worst = float(residuals.max())
    if worst > 10 * max(tol, 1e-14) * max(1.0, shift):
        raise ConvergenceError(
            f"eigenpair residual {worst:.3e} exceeds the requested tolerance {tol}",
            best_residual=worst,
        )
    kernel_dim, gap = _classify(vals, kernel_threshold)
    return SpectralResult(
        lowest_eigenvalues=vals,
        kernel_dimension=kernel_dim,
        gap=gap,
        residual_norms=residuals,
        method="iterative",
        kernel_threshold=kernel_threshold,
        deflated_dimension=n_defl,
    )


def extract_gap(result: SpectralResult,
                kernel_threshold: float = KERNEL_THRESHOLD) -> float:
    """Smallest computed eigenvalue at or above the kernel threshold."""
    above = result.lowest_eigenvalues[result.lowest_eigenvalues >= kernel_threshold]
    if len(above) == 0:
        raise IndeterminateGapError(
            "all computed eigenvalues lie below the kernel threshold; "
            "request more eigenvalues or deflate the kernel"
        )
    return float(above[0])


def spectral_gap(H: HamiltonianOperator,
                 deflation_basis: np.ndarray | None = None,
                 kernel_threshold: float = KERNEL_THRESHOLD,
                 how_many: int = 6) -> tuple[float, SpectralResult]:
    """Gap of H: dense within policy, otherwise iterative with deflation."""
    if H.total_dimension <= H.policy.dense_cap:
        result = dense_spectrum(H, kernel_threshold)
    else:
        result = iterative_lowest(H, how_many, deflation_basis=deflation_basis,
                                  kernel_threshold=kernel_threshold)
    return extract_gap(result, kernel_threshold), result
