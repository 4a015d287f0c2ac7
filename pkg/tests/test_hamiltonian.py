import math

import numpy as np
import pytest

from gapcert.errors import ResourceLimitError
from gapcert.graphs import Graph, build_grid_torus, build_path, build_star, build_triangle
from gapcert.hamiltonian import (
    ResourcePolicy,
    assemble,
    frustration_free_residual,
    qsat_condition,
)
from gapcert.interactions import (
    haar_projector,
    normalize_coefficients,
    rank1_projector,
)
from gapcert.randmat import sample_goe


def goe_interaction(d, seed):
    return rank1_projector(normalize_coefficients(sample_goe(d, seed)))


def test_single_edge_spectrum():
    for d in (2, 3):
        H = assemble(build_path(2), goe_interaction(d, d))
        eigenvalues = np.linalg.eigvalsh(H.dense())
        assert np.abs(eigenvalues[: d * d - 1]).max() <= 1e-12
        assert abs(eigenvalues[-1] - 1.0) <= 1e-12


def test_path3_is_sum_of_two_embeddings():
    d = 3
    inter = goe_interaction(d, 4)
    P = inter.dense()
    expected = np.kron(P, np.eye(d)) + np.kron(np.eye(d), P)
    H = assemble(build_path(3), inter)
    assert np.allclose(H.dense(), expected, atol=1e-14)


def test_edgeless_graph_is_zero_operator():
    graph = Graph(2, frozenset(), 1)
    H = assemble(graph, goe_interaction(2, 1))
    x = np.random.default_rng(0).standard_normal(4)
    assert np.abs(H.apply(x)).max() == 0.0
    assert np.abs(H.dense()).max() == 0.0


@pytest.mark.parametrize("graph,make", [
    (build_path(3), lambda: goe_interaction(3, 7)),
    (build_triangle(), lambda: haar_projector(2, 1)),
    (build_grid_torus(2), lambda: goe_interaction(2, 9)),
    (build_star(4), lambda: goe_interaction(2, 11)),
])
def test_dense_matches_matrix_free(graph, make):
    inter = make()
    H = assemble(graph, inter)
    dense = H.dense()
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.standard_normal(H.total_dimension)
        assert np.abs(H.apply(x) - dense @ x).max() <= 1e-12


def test_apply_linear():
    H = assemble(build_path(3), goe_interaction(3, 2))
    rng = np.random.default_rng(8)
    x, y = rng.standard_normal((2, 27))
    lhs = H.apply(0.3 * x + 1.7 * y)
    rhs = 0.3 * H.apply(x) + 1.7 * H.apply(y)
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_apply_complex_state():
    H = assemble(build_path(3), goe_interaction(2, 3))
    rng = np.random.default_rng(1)
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert np.abs(H.apply(x) - H.dense() @ x).max() <= 1e-12


def test_apply_shape_check():
    H = assemble(build_path(3), goe_interaction(2, 3))
    with pytest.raises(ValueError):
        H.apply(np.zeros(7))


def test_hermitian_and_psd_on_probes():
    H = assemble(build_star(4), goe_interaction(3, 13))
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = rng.standard_normal(H.total_dimension)
        y = rng.standard_normal(H.total_dimension)
        assert abs(x @ H.apply(y) - y @ H.apply(x)) <= 1e-10
        assert x @ H.apply(x) >= -1e-10


def test_operator_norm_bounded_by_edge_count():
    graph = build_triangle()
    H = assemble(graph, goe_interaction(2, 21))
    top = np.linalg.eigvalsh(H.dense())[-1]
    assert top <= graph.edge_count + 1e-12


def test_qsat_condition():
    assert not qsat_condition(2, 2)      # 4 < 3e
    assert qsat_condition(3, 2)          # 9 > 3e
    assert qsat_condition(15, 2)
    assert not qsat_condition(3, 3)      # 9 < 5e


def test_numerical_frustration_freeness_when_qsat_holds():
    # d = 3, k = 2 satisfies the guarantee; chains up to 5 sites stay within
    # the dense cap and must have an exact-to-numerics zero eigenvalue
    for n in (3, 4, 5):
        H = assemble(build_path(n), goe_interaction(3, 17 + n))
        assert np.linalg.eigvalsh(H.dense())[0] <= 1e-9


def test_frustration_free_residual_single_edge_kernel():
    d = 2
    inter = goe_interaction(d, 23)
    v = inter.provenance.coefficients.reshape(-1)
    basis = np.linalg.svd(np.outer(v, v))[0][:, 1:]   # orthogonal complement
    H = assemble(build_path(2), inter)
    for j in range(basis.shape[1]):
        assert frustration_free_residual(H, basis[:, j]) <= 1e-12


def test_frustration_free_residual_generic_positive():
    H = assemble(build_path(3), goe_interaction(2, 29))
    x = np.random.default_rng(4).standard_normal(8)
    assert frustration_free_residual(H, x) > 1e-3


def test_frustration_free_residual_rejects_zero():
    H = assemble(build_path(2), goe_interaction(2, 23))
    with pytest.raises(ValueError):
        frustration_free_residual(H, np.zeros(4))


def test_haar_ground_states_annihilated():
    from gapcert.haarmodel import all_permutations, permutation_state

    inter = haar_projector(2, 2)
    H = assemble(build_path(3), inter)
    for sigma in all_permutations(2):
        psi = permutation_state(sigma, 2).vector
        state = np.kron(np.kron(psi, psi), psi)
        assert frustration_free_residual(H, state) <= 1e-10


def test_spectrum_invariant_under_relabeling():
    inter = goe_interaction(2, 31)
    graph = Graph(5, frozenset({(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}), 2)
    relabeled = graph.relabeled([2, 0, 4, 1, 3])
    ev1 = np.linalg.eigvalsh(assemble(graph, inter).dense())
    ev2 = np.linalg.eigvalsh(assemble(relabeled, inter).dense())
    assert np.abs(ev1 - ev2).max() <= 1e-10


def test_single_edge_gap_dominates_path3_gap():
    # adding an edge never lowers Rayleigh quotients: the single-edge gap (=1)
    # bounds the 3-site gap for the same interaction
    from gapcert.spectra import dense_spectrum, extract_gap

    for seed in range(10):
        inter = goe_interaction(3, 500 + seed)
        gap3 = extract_gap(dense_spectrum(assemble(build_path(3), inter)))
        assert gap3 <= 1.0 + 1e-10


def test_per_edge_factor_scales_spectrum():
    inter = goe_interaction(2, 37)
    H1 = assemble(build_path(3), inter)
    H2 = assemble(build_path(3), inter, per_edge_factor=2.0)
    ev1 = np.linalg.eigvalsh(H1.dense())
    ev2 = np.linalg.eigvalsh(H2.dense())
    assert np.abs(2 * ev1 - ev2).max() <= 1e-12


def test_resource_policy_errors():
    tiny = ResourcePolicy(dense_cap=8, matrix_free_cap=64)
    H = assemble(build_path(3), goe_interaction(3, 1), tiny)   # 27 <= 64
    with pytest.raises(ResourceLimitError) as err:
        H.dense()
    assert err.value.dimension == 27
    with pytest.raises(ResourceLimitError):
        assemble(build_path(4), goe_interaction(3, 1), tiny)   # 81 > 64
