import math

import numpy as np
import pytest

from gapcert.errors import IndeterminateGapError
from gapcert.graphs import build_path, build_star
from gapcert.hamiltonian import ResourcePolicy, assemble
from gapcert.haarmodel import ground_space_basis
from gapcert.interactions import haar_projector, normalize_coefficients, rank1_projector
from gapcert.randmat import sample_goe
from gapcert.spectra import (
    SpectralResult,
    dense_spectrum,
    extract_gap,
    iterative_lowest,
    spectral_gap,
)


def goe_interaction(d, seed):
    return rank1_projector(normalize_coefficients(sample_goe(d, seed)))


def closed_form_gap(inter):
    C = inter.provenance.coefficients
    smax = np.linalg.svd(C, compute_uv=False)[0]
    return 1.0 - smax * smax


def test_single_edge_dense():
    d = 3
    result = dense_spectrum(assemble(build_path(2), goe_interaction(d, 1)))
    assert result.kernel_dimension == d * d - 1
    assert result.gap == pytest.approx(1.0, abs=1e-12)


def test_two_site_gap_is_one_for_any_rank():
    # single projector term: spectrum {0, 1} regardless of rank
    for inter in (goe_interaction(4, 2), haar_projector(2, 2)):
        result = dense_spectrum(assemble(build_path(2), inter))
        assert result.gap == pytest.approx(1.0, abs=1e-12)


def test_maximally_entangled_qubit_gap_half():
    C = np.eye(2) / math.sqrt(2)
    result = dense_spectrum(assemble(build_path(3), rank1_projector(C)))
    # 8x8 spectrum is {0 x4, 1/2 x2, 3/2 x2}
    assert result.kernel_dimension == 4
    assert result.gap == pytest.approx(0.5, abs=1e-12)
    assert result.lowest_eigenvalues[-1] == pytest.approx(1.5, abs=1e-12)


def test_kernel_dimension_of_path3():
    for d in (2, 3, 4):
        result = dense_spectrum(assemble(build_path(3), goe_interaction(d, d + 40)))
        assert result.kernel_dimension == d**3 - 2 * d


def test_dense_residuals_small():
    result = dense_spectrum(assemble(build_path(3), goe_interaction(3, 3)))
    assert result.residual_norms.max() <= 1e-12


def test_path3_gap_matches_closed_form():
    for seed in range(20):
        inter = goe_interaction(4, 900 + seed)
        result = dense_spectrum(assemble(build_path(3), inter))
        assert result.gap >= closed_form_gap(inter) - 1e-9


def test_path3_gap_d15_within_band():
    # heavyweight dense check at local dimension 15 (3375-dimensional)
    for seed in (0, 1):
        inter = goe_interaction(15, seed)
        H = assemble(build_path(3), inter)
        result = dense_spectrum(H, compute_residuals=False)
        gap = extract_gap(result)
        assert closed_form_gap(inter) - 1e-9 <= gap <= 1.0 + 1e-12


def test_iterative_agrees_with_dense():
    # haar q=2, t=1 chain: kernel dimension 1, so low eigenvalues are reachable
    H = assemble(build_path(3), haar_projector(2, 1))
    dense = dense_spectrum(H)
    it = iterative_lowest(H, how_many=4, tol=1e-10)
    assert np.abs(it.lowest_eigenvalues - dense.lowest_eigenvalues[:4]).max() <= 1e-8
    assert it.residual_norms.max() <= 1e-8


def test_iterative_no_deflation_returns_zero_mode():
    H = assemble(build_path(2), goe_interaction(2, 5))
    result = iterative_lowest(H, how_many=2, tol=1e-10)
    assert result.lowest_eigenvalues[0] == pytest.approx(0.0, abs=1e-10)


def test_iterative_deflation_removes_kernel():
    inter = haar_projector(2, 2)
    H = assemble(build_path(3), inter)
    basis = ground_space_basis(2, 2, 3)
    deflated = iterative_lowest(H, how_many=3, deflation_basis=basis, tol=1e-10)
    assert deflated.kernel_dimension == 0
    assert deflated.deflated_dimension == 2
    # the first excited energy must match the dense gap
    dense_gap = extract_gap(dense_spectrum(H))
    assert deflated.lowest_eigenvalues[0] == pytest.approx(dense_gap, abs=1e-8)


def test_deflation_vector_must_be_near_kernel():
    H = assemble(build_path(3), haar_projector(2, 2))
    bad = np.random.default_rng(0).standard_normal(H.total_dimension)
    with pytest.raises(ValueError, match="residual"):
        iterative_lowest(H, how_many=2, deflation_basis=bad[:, None])


def test_how_many_bounds():
    H = assemble(build_path(3), haar_projector(2, 1))
    with pytest.raises(ValueError):
        iterative_lowest(H, how_many=0)
    with pytest.raises(ValueError):
        iterative_lowest(H, how_many=17)


def test_extract_gap_synthetic():
    result = SpectralResult(
        lowest_eigenvalues=np.array([0.0, 0.0, 0.5, 1.0]),
        kernel_dimension=2, gap=0.5, residual_norms=np.zeros(4), method="dense",
    )
    assert extract_gap(result, 1e-8) == 0.5


def test_extract_gap_indeterminate():
    result = SpectralResult(
        lowest_eigenvalues=np.zeros(3),
        kernel_dimension=3, gap=None, residual_norms=np.zeros(3), method="dense",
    )
    with pytest.raises(IndeterminateGapError):
        extract_gap(result)


def test_spectral_gap_dispatches_to_iterative():
    # 4096-dimensional haar chain sits above a lowered dense cap
    policy = ResourcePolicy(dense_cap=256)
    H = assemble(build_path(3), haar_projector(2, 2), policy)
    basis = ground_space_basis(2, 2, 3)
    gap, result = spectral_gap(H, deflation_basis=basis)
    assert result.method == "iterative"
    dense_gap, dense_result = spectral_gap(
        assemble(build_path(3), haar_projector(2, 2)))
    assert dense_result.method == "dense"
    assert gap == pytest.approx(dense_gap, abs=1e-7)


def test_gap_error_margin():
    result = dense_spectrum(assemble(build_path(2), goe_interaction(2, 6)))
    assert result.gap_error_margin >= result.kernel_threshold
