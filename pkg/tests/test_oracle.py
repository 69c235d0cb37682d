import math

import numpy as np
import pytest

from tfcert import (FunctionEvaluator, GridSpec, InputError, NumericalRefusal,
                    PointSet, SingularityHitError, check_theorem1,
                    collocation_rank, default_collocation_points,
                    dependence_residual_er, er_lattice, gram_matrix,
                    make_example1, make_example2, make_gaussian,
                    make_singular_cos, metaplectic_residual, modulate,
                    stft_grid, stft_identity_residual, translate)

PI = math.pi


def bump():
    """Smooth bump supported in [-0.4, 0.4]."""
    def fn(t):
        with np.errstate(all="ignore"):
            u = t / 0.4
            inside = np.abs(u) < 1.0
            vals = np.where(inside, np.exp(-1.0 / np.maximum(1.0 - u * u, 1e-300)), 0.0)
        return vals.astype(complex)
    return FunctionEvaluator(dim=1, fn=fn, square_integrable=True)


# ---------------------------------------------------------------------------
# gram_matrix
# ---------------------------------------------------------------------------

def test_gram_disjoint_supports_is_diagonal():
    lam = PointSet.from_rows([[0, 0.4], [1, -2.0], [2, 1.1]])
    report = gram_matrix(bump(), lam)
    assert report.verdict == "Independent"
    assert report.relative_gap == pytest.approx(1.0, abs=1e-10)
    off = report.matrix - np.diag(np.diag(report.matrix))
    assert np.max(np.abs(off)) < 1e-15


def test_gram_gaussian_pair_closed_form():
    lam = PointSet.from_rows([[0, 0], [1, 0]])
    report = gram_matrix(make_gaussian(1), lam)
    assert abs(report.matrix[0, 1]) == pytest.approx(math.exp(-PI / 2), abs=1e-10)
    assert report.sigma_min == pytest.approx(1.0 - math.exp(-PI / 2), abs=1e-10)
    assert report.verdict == "Independent"


def test_gram_near_duplicate_points_read_dependent():
    # a shift of 1e-9 is indistinguishable at quadrature accuracy, so the
    # relative gap falls under the dependence threshold
    lam = PointSet.from_rows([[0, 0], [1e-9, 0]])
    report = gram_matrix(make_gaussian(1), lam)
    assert report.verdict == "Dependent"
    assert report.relative_gap < 1e-10


def test_gram_refuses_non_square_integrable():
    with pytest.raises(NumericalRefusal, match="collocation"):
        gram_matrix(make_singular_cos(1.0), PointSet.from_rows([[0, 0], [3, 0]]))


def test_gram_rejects_oversized_sets():
    lam = PointSet.from_rows([[k, 0] for k in range(65)])
    with pytest.raises(InputError):
        gram_matrix(make_gaussian(1), lam)


def test_gram_two_dimensional():
    lam = PointSet.from_rows([[0, 0, 0, 0], [1.5, 0, 0, 0], [0, 1.5, 1, 0]], dim=2)
    report = gram_matrix(make_gaussian(2), lam)
    assert report.verdict == "Independent"


@pytest.mark.parametrize("f", [make_gaussian(1), make_example1(6.0, 2.0),
                               make_example2(1.0)])
def test_gram_hermitian_psd(f):
    lam = PointSet.from_rows([[0, 0], [0.7, -1.0], [1.9, 0.4], [3.1, 2.0]])
    report = gram_matrix(f, lam, GridSpec(8.0, 4096, exclusion_radius=1e-6))
    G = report.matrix
    assert np.max(np.abs(G - G.conj().T)) < 1e-12
    eigs = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
    assert eigs[0] > -1e-10


def test_gram_translation_invariance_gaussian():
    # unitary equivalence: exact in L2, matched by quadrature because the
    # Gaussian's mass outside the shifted box is far below the tolerance
    lam = PointSet.from_rows([[0, 0], [1, 1], [2.5, -0.5]])
    base = gram_matrix(make_gaussian(1), lam)
    a = 0.5
    shifted = PointSet.from_rows([[p.x[0] + a, p.omega[0]] for p in lam.points])
    moved = gram_matrix(translate(make_gaussian(1), a), shifted)
    np.testing.assert_allclose(np.abs(moved.matrix), np.abs(base.matrix), atol=1e-8)


def test_gram_translation_invariance_slow_decay_within_tail_bound():
    # for 1/|t| tails the defect is the boundary slice of the truncation box:
    # per entry at most 2 a env(L - a - max|x|)^2, and it shrinks with the box
    f = make_example1(6.0, 2.0)
    lam = PointSet.from_rows([[0, 0], [1, 1], [2.5, -0.5]])
    a, xmax = 0.5, 2.5

    def defect(L, m):
        grid = GridSpec(L, m)
        base = gram_matrix(f, lam, grid)
        shifted = PointSet.from_rows([[p.x[0] + a, p.omega[0]] for p in lam.points])
        moved = gram_matrix(translate(f, a), shifted, grid)
        return float(np.max(np.abs(np.abs(moved.matrix) - np.abs(base.matrix))))

    d8 = defect(8.0, 4096)
    assert d8 <= 2 * a * f.envelope(8.0 - a - xmax) ** 2
    d32 = defect(32.0, 16384)
    assert d32 <= 2 * a * f.envelope(32.0 - a - xmax) ** 2
    assert d32 < d8 / 4


# ---------------------------------------------------------------------------
# collocation_rank
# ---------------------------------------------------------------------------

def test_collocation_singular_cos_independent():
    f = make_singular_cos(1.0)
    lam = PointSet.from_rows([[0, 0], [3, 0], [6, 0], [9, 1]])
    pts = default_collocation_points(f, lam)
    report = collocation_rank(f, lam, pts)
    assert report.verdict == "Independent"
    assert report.relative_gap > 1e-6


def test_collocation_single_function():
    f = make_gaussian(1)
    report = collocation_rank(f, PointSet.from_rows([[0, 0]]), [0.0, 0.5, 1.0])
    assert report.sigma_min > 0


def test_collocation_degenerate_sampling_is_inconclusive():
    # every sample sits on a zero of cos, so the matrix is numerically zero
    f = make_singular_cos(1.0)
    zeros = [PI / 2, 3 * PI / 2, 5 * PI / 2, 7 * PI / 2]
    report = collocation_rank(f, PointSet.from_rows([[0, 0]]), zeros)
    assert report.sigma_max <= 1e-12
    assert report.verdict == "Inconclusive"


def test_collocation_sample_on_singularity_rejected():
    f = make_singular_cos(1.0)
    lam = PointSet.from_rows([[0, 0], [3, 0]])
    with pytest.raises(SingularityHitError):
        collocation_rank(f, lam, [0.0, 1.0, 2.0])


def test_collocation_needs_enough_samples():
    lam = PointSet.from_rows([[0, 0], [3, 0]])
    with pytest.raises(InputError):
        collocation_rank(make_gaussian(1), lam, [0.0])


def test_collocation_sound_on_certified_configs():
    rng = np.random.default_rng(13)
    for _ in range(3):
        C = float(rng.uniform(5, 10))
        f = make_example1(C, float(rng.uniform(0, 4)))
        times = np.cumsum(rng.uniform(1.0, 2.0, 4))
        freqs = rng.uniform(-2, 2, 4)
        lam = PointSet.from_rows([[t, w] for t, w in zip(times, freqs)])
        assert check_theorem1(f, lam).certified
        pts = default_collocation_points(f, lam)
        assert len(pts) >= 2 * len(lam)
        assert collocation_rank(f, lam, pts).verdict == "Independent"


# ---------------------------------------------------------------------------
# Edgar-Rosenblatt dependence residual
# ---------------------------------------------------------------------------

def test_er_residual_small_lattice():
    rep = dependence_residual_er(er_lattice(1.0, 0.5), 1e-9)
    assert rep.max_abs_residual < 1e-6
    assert not rep.phase_optimized


def test_er_residual_single_point():
    rep = dependence_residual_er(np.array([[0.0, 0.0]]), 1e-9)
    assert rep.max_abs_residual < 1e-8


def test_er_residual_negative_control():
    # the dependence is exact with coefficient 2; 2.1 must visibly fail
    from tfcert import make_edgar_rosenblatt
    f = make_edgar_rosenblatt(1e-9)
    pts = np.array([[0.0, 0.0], [1, 0], [-1, 0], [0, 1], [0, -1]])
    v = f(pts)
    assert abs(2.1 * v[0] - v[1] - v[2] - v[3] - v[4]) > 0.01


def test_er_residual_monotone_refinement():
    base = dependence_residual_er(np.array([[0.0, 0.0]]), 1e-7).max_abs_residual
    finer = dependence_residual_er(np.array([[0.0, 0.0]]), 5e-8).max_abs_residual
    assert finer <= base + 1e-12


def test_er_residual_rejects_loose_tolerance():
    with pytest.raises(InputError):
        dependence_residual_er(np.array([[0.0, 0.0]]), 1e-3)


# ---------------------------------------------------------------------------
# STFT identity residual
# ---------------------------------------------------------------------------

def test_stft_identity_zero_shift():
    g = make_gaussian(1)
    rep = stft_identity_residual(g, g, 0.0, 0.0)
    assert rep.max_abs_residual < 1e-12


def test_stft_identity_gaussian():
    g = make_gaussian(1)
    rep = stft_identity_residual(g, g, 1.0, 0.5)
    assert rep.max_abs_residual < 1e-8
    assert rep.identity_name == "stft_covariance"


def test_stft_identity_wrong_phase_control():
    # flipping the phase sign must break the identity visibly somewhere
    g = make_gaussian(1)
    u, eta = 1.0, 0.5
    xs = np.linspace(-3, 3, 33)
    lhs = stft_grid(translate(modulate(g, eta), u), g, xs, xs)
    rhs = stft_grid(g, g, xs - u, xs - eta) * np.exp(+2j * PI * u * xs)[None, :]
    assert float(np.max(np.abs(lhs - rhs))) > 0.1


def test_stft_identity_ordering_phase_relation():
    # M_eta T_u f = e^{2 pi i u eta} T_u M_eta f, exactly
    g = make_gaussian(1)
    u, eta = 0.75, -1.25
    xs = np.linspace(-2, 2, 17)
    first = stft_grid(modulate(translate(g, u), eta), g, xs, xs)
    second = stft_grid(translate(modulate(g, eta), u), g, xs, xs)
    np.testing.assert_allclose(first, np.exp(2j * PI * u * eta) * second,
                               rtol=0, atol=1e-12)


# ---------------------------------------------------------------------------
# metaplectic residuals
# ---------------------------------------------------------------------------

def test_metaplectic_dilation_identity_at_r_one():
    reports = metaplectic_residual("dilation", (1.0, 1.0, 1.0), make_gaussian(1))
    assert reports["printed"].max_abs_residual == 0.0


def test_metaplectic_dilation_standard_convention_exact():
    reports = metaplectic_residual("dilation", (2.0, 1.0, 1.0), make_gaussian(1))
    assert reports["standard"].max_abs_residual < 1e-12
    # the printed parameterization documents the convention mismatch
    assert reports["printed"].max_abs_residual > 0.1


def test_metaplectic_chirp():
    r, x = 0.5, 1.0
    reports = metaplectic_residual("chirp", (r, x, 1.0), make_gaussian(1))
    assert reports["standard"].max_abs_residual < 1e-12
    assert reports["printed"].max_abs_residual > 0.1
    expected_phase = np.exp(-2j * PI * r * x * x)
    assert abs(reports["standard"].best_phase - expected_phase) < 1e-9


def test_metaplectic_fourier_multiplier():
    r, omega = 0.25, 0.5
    reports = metaplectic_residual("fourier_multiplier", (r, 0.5, omega),
                                   make_gaussian(1))
    assert reports["standard"].max_abs_residual < 1e-8
    assert reports["printed"].max_abs_residual > 0.1
    expected_phase = np.exp(2j * PI * r * omega * omega)
    assert abs(reports["standard"].best_phase - expected_phase) < 1e-6


def test_metaplectic_extra_variant_and_errors():
    reports = metaplectic_residual("dilation", (2.0, 1.0, 1.0), make_gaussian(1),
                                   extra_variants={"identity_params": (1.0, 1.0)})
    assert "identity_params" in reports
    with pytest.raises(InputError):
        metaplectic_residual("dilation", (0.0, 1.0, 1.0), make_gaussian(1))
    with pytest.raises(InputError):
        metaplectic_residual("squeeze", (1.0, 1.0, 1.0), make_gaussian(1))


# ---------------------------------------------------------------------------
# report structure
# ---------------------------------------------------------------------------

def test_reports_serialize():
    import json
    rep = gram_matrix(make_gaussian(1), PointSet.from_rows([[0, 0], [1, 0]]))
    back = json.loads(json.dumps(rep.to_json()))
    assert back["mode"] == "Gram"
    assert back["verdict"] == "Independent"
    assert 0 <= back["sigma_min"] <= back["sigma_max"]

    res = dependence_residual_er(np.array([[0.0, 0.0]]), 1e-9)
    back = json.loads(json.dumps(res.to_json()))
    assert back["best_phase"] == [1.0, 0.0]
