import math

import numpy as np
import pytest

from tfcert import (FamilySpec, GridSpec, InputError, fourier, l2_norm,
                    make_edgar_rosenblatt, make_example1, make_example2,
                    make_gaussian, make_singular_cos)


def test_example1_peak():
    assert make_example1(2.0, 0.0)(0.0) == pytest.approx(2.0)


def test_example1_continuity_at_breakpoint():
    f = make_example1(5.0, 3.0)
    cut = 1.0 / 5.0
    for eps in (1e-4, 1e-6, 1e-8):
        jump = abs(f(cut - eps) - f(cut + eps))
        assert jump < 40 * eps  # slope of both branches is O(C^2)


def test_example1_outer_branch_value():
    assert make_example1(4.0, 0.0)(2.0) == pytest.approx(0.5)


def test_example1_rejects_nonpositive_scale():
    with pytest.raises(InputError):
        make_example1(0.0, 1.0)
    with pytest.raises(InputError):
        make_example1(-2.0, 1.0)


def test_example2_branch_agreement_at_one():
    f = make_example2(2.0)
    assert f(1.0) == pytest.approx(math.cos(2.0))


def test_example2_inner_branch_value():
    assert make_example2(0.0)(1.0 / 16.0) == pytest.approx(2.0)


def test_example2_envelope_bounds_samples():
    f = make_example2(1.5)
    ts = np.logspace(-4, 1, 400)
    for t in ts:
        assert abs(f(t)) <= f.envelope(t) + 1e-12


def test_singular_cos_value():
    for omega in (0.5, 2.0):
        assert make_singular_cos(omega)(1.0) == pytest.approx(math.cos(omega))


def test_singular_cos_blows_up():
    f = make_singular_cos(1.0)
    for k in range(1, 7):
        assert abs(f(10.0 ** -k)) >= 10.0 ** k / 2


def test_singular_cos_not_square_integrable():
    from tfcert import NumericalRefusal, PointSet, gram_matrix
    f = make_singular_cos(1.0)
    assert not f.square_integrable
    with pytest.raises(NumericalRefusal):
        gram_matrix(f, PointSet.from_rows([[0, 0], [3, 0]]))


def test_edgar_rosenblatt_constant_integrand():
    f = make_edgar_rosenblatt(1e-9)
    assert f(np.array([0.0, 0.0])) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_edgar_rosenblatt_conjugate_symmetry():
    f = make_edgar_rosenblatt(1e-9)
    rng = np.random.default_rng(8)
    for _ in range(5):
        a, b = rng.uniform(-3, 3, 2)
        lhs = f(np.array([-a, -b]))
        rhs = np.conj(f(np.array([a, b])))
        assert abs(lhs - rhs) < 2e-9


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (1.5, -0.5), (3.0, 2.0)])
def test_edgar_rosenblatt_five_term_residual(a, b):
    f = make_edgar_rosenblatt(1e-9)
    pts = np.array([[a, b], [a + 1, b], [a - 1, b], [a, b + 1], [a, b - 1]])
    v = f(pts)
    assert abs(2 * v[0] - v[1] - v[2] - v[3] - v[4]) < 1e-6


def test_edgar_rosenblatt_deterministic():
    f = make_edgar_rosenblatt(1e-9)
    p = np.array([1.25, -2.5])
    first = f(p)
    for _ in range(3):
        assert f(p) == first


def test_edgar_rosenblatt_quad_tol_validation():
    with pytest.raises(InputError):
        make_edgar_rosenblatt(1e-2)
    with pytest.raises(InputError):
        make_edgar_rosenblatt(0.0)


def test_gaussian_unit_norm():
    assert l2_norm(make_gaussian(1)) == pytest.approx(1.0, abs=1e-10)


def test_gaussian_peak():
    for n in (1, 2):
        g = make_gaussian(n)
        at = 0.0 if n == 1 else np.zeros(n)
        assert g(at) == pytest.approx(2.0 ** (n / 4.0))


def test_gaussian_fourier_self_dual():
    g = make_gaussian(1)
    fh = fourier(g, GridSpec(6.0, 4096))
    for omega in (0.0, 0.3, 1.0):
        assert abs(fh(omega) - 2 ** 0.25 * math.exp(-math.pi * omega * omega)) < 1e-6


# ---------------------------------------------------------------------------
# family invariants
# ---------------------------------------------------------------------------

FAMILIES_WITH_ENVELOPES = [
    make_example1(3.0, 2.0),
    make_example1(8.0, 0.0),
    make_example2(1.0),
    make_singular_cos(2.0),
    make_gaussian(1),
    make_gaussian(2),
]


@pytest.mark.parametrize("f", FAMILIES_WITH_ENVELOPES)
def test_envelope_nonincreasing(f):
    radii = np.logspace(-4, 1.5, 300)
    vals = [f.envelope(r) for r in radii]
    for lo, hi in zip(vals[1:], vals[:-1]):
        assert lo <= hi + 1e-15


@pytest.mark.parametrize("f", FAMILIES_WITH_ENVELOPES)
def test_envelope_dominates_samples(f):
    radii = np.logspace(-4, 1, 200)
    for r in radii:
        t = r if f.dim == 1 else np.concatenate([[r], np.zeros(f.dim - 1)])
        assert abs(f(t)) <= f.envelope(r) + 1e-12


def test_example1_pointwise_limit_is_exact_outside_breakpoint():
    omega = 2.5
    limit = make_singular_cos(omega)
    for C in (2.0, 10.0, 100.0):
        f = make_example1(C, omega)
        ts = np.linspace(1.0 / C, 8.0, 50)
        assert np.array_equal(f(ts), limit(ts))


# ---------------------------------------------------------------------------
# FamilySpec
# ---------------------------------------------------------------------------

def test_family_spec_builds_each_family():
    cases = [
        ({"family": "example1", "params": {"C": 4, "omega": 1}}, 1),
        ({"family": "example2", "params": {"omega": 0}}, 1),
        ({"family": "singular_cos", "params": {"omega": 1}}, 1),
        ({"family": "gaussian", "params": {"n": 2}}, 2),
        ({"family": "edgar_rosenblatt", "quad_tol": 1e-8}, 2),
    ]
    for obj, dim in cases:
        f = FamilySpec.from_json(obj).build()
        assert f.dim == dim


def test_family_spec_rejects_unknowns():
    with pytest.raises(InputError):
        FamilySpec.from_json({"family": "nope"})
    with pytest.raises(InputError):
        FamilySpec.from_json({"family": "gaussian", "bogus": 1})
    with pytest.raises(InputError):
        FamilySpec.from_json({"family": "gaussian", "params": {"spread": 2}}).build()
    with pytest.raises(InputError):
        FamilySpec.from_json({"family": "example1", "params": {}}).build()
