import math

import numpy as np
import pytest

from tfcert import (GridSpec, InputError, NearOrthogonalError, PointSet,
                    WindowParams, check_theorem3, hermite_function, l2_norm,
                    make_example1, make_gaussian, realize_window, search,
                    tail_ratio)

PI = math.pi


def gaussian_params(scale=1.0):
    return WindowParams(1.0, np.array([scale]))


def test_window_params_validation():
    with pytest.raises(InputError):
        WindowParams(0.01, np.array([1.0]))
    with pytest.raises(InputError):
        WindowParams(1.0, np.zeros(3))
    with pytest.raises(InputError):
        WindowParams(1.0, np.ones(12))


def test_realized_hermite_functions_are_orthonormal():
    from tfcert import inner_product
    hs = [hermite_function(k) for k in range(4)]
    for i, hi in enumerate(hs):
        for j, hj in enumerate(hs):
            want = 1.0 if i == j else 0.0
            assert abs(inner_product(hi, hj) - want) < 1e-10


def test_width_one_coeff_one_is_unit_gaussian():
    g = realize_window(gaussian_params())
    ref = make_gaussian(1)
    ts = np.linspace(-4, 4, 101)
    np.testing.assert_allclose(g(ts), ref(ts), atol=1e-14)


def test_tail_ratio_at_target_boundary():
    # R chosen just inside the radius where |V| = 1/2, so the boundary-ring
    # maximum lands a hair above the target and 'achieved' stays false
    f = make_gaussian(1)
    R = 0.66428
    ratio = tail_ratio(f, gaussian_params(), R, 2)
    assert ratio == pytest.approx(math.exp(-PI * R * R / 2.0), abs=1e-9)
    assert not ratio < 0.5


def test_tail_ratio_well_inside():
    f = make_gaussian(1)
    ratio = tail_ratio(f, gaussian_params(), 2.0, 2)
    assert ratio == pytest.approx(math.exp(-2 * PI), abs=1e-6)
    assert ratio < 0.5


def test_tail_ratio_orthogonal_window_refused():
    f = make_gaussian(1)
    odd = WindowParams(1.0, np.array([0.0, 1.0]))
    with pytest.raises(NearOrthogonalError):
        tail_ratio(f, odd, 1.0, 2)


def test_tail_ratio_scaling_invariance():
    f = make_example1(4.0, 1.0)
    base = WindowParams(1.0, np.array([0.8, 0.3, -0.2]))
    scaled = WindowParams(1.0, 2.5 * np.asarray(base.hermite_coeffs))
    r1 = tail_ratio(f, base, 1.5, 3)
    r2 = tail_ratio(f, scaled, 1.5, 3)
    assert r2 == pytest.approx(r1, rel=1e-12)


def test_search_gaussian_easy_target():
    res = search(make_gaussian(1), R=2.0, N=2, d=0, budget=50, seed=0)
    assert res.achieved
    assert res.evaluations <= 50
    assert res.ratio < 0.5


def test_search_budget_contract():
    res = search(make_gaussian(1), R=2.0, N=2, d=1, budget=10, seed=987654321)
    assert res.evaluations <= 10
    assert res.ratio >= 0.0
    assert res.trace


def test_search_trace_monotone():
    res = search(make_example1(4.0, 2.0), R=1.0, N=4, d=4, budget=60, seed=3)
    ratios = [r for _, r in res.trace]
    assert all(b <= a for a, b in zip(ratios[:-1], ratios[1:]))
    assert res.ratio == ratios[-1]


def test_search_deterministic():
    a = search(make_gaussian(1), R=1.0, N=3, d=2, budget=40, seed=42)
    b = search(make_gaussian(1), R=1.0, N=3, d=2, budget=40, seed=42)
    assert a.evaluations == b.evaluations
    assert a.ratio == b.ratio
    assert len(a.trace) == len(b.trace)
    for (pa, ra), (pb, rb) in zip(a.trace, b.trace):
        assert ra == rb
        assert pa.width == pb.width
        assert np.array_equal(pa.hermite_coeffs, pb.hermite_coeffs)


def test_search_rejects_tiny_budget():
    with pytest.raises(InputError):
        search(make_gaussian(1), R=1.0, N=2, d=0, budget=5, seed=0)


def test_achieved_config_upgrades_to_theorem3_certificate():
    # achieved at double lattice density ties into the full TF certificate
    f = make_gaussian(1)
    params = gaussian_params()
    R, N = 2.0, 2
    coarse = tail_ratio(f, params, R, N, GridSpec(8.0, 81))
    fine = tail_ratio(f, params, R, N, GridSpec(8.0, 161))
    assert coarse < 1.0 / N and fine < 1.0 / N
    g = realize_window(params)
    lam = PointSet.from_rows([[0, 0], [2.5, 0]])  # pairwise distance > R
    cert = check_theorem3(f, g, lam)
    assert cert.certified


def test_search_result_serializes():
    import json
    res = search(make_gaussian(1), R=2.0, N=2, d=0, budget=12, seed=0)
    back = json.loads(json.dumps(res.to_json()))
    assert back["achieved"] is True
    assert back["target"] == 0.5
    assert back["trace"]
