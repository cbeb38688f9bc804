import math

import numpy as np
import pytest

from widthlab.errors import NonMonotoneProfileError, NotRadialError, PreconditionError
from widthlab.weights import (
    NAMED_PHI,
    WeightSpec,
    check_monotone_domain,
    custom_radial,
    evaluate,
    evaluate_many,
    gevrey,
    isotropic,
    mixed,
    parse_p,
    phi_of,
    ratio,
)


def test_evaluate_examples():
    assert evaluate(isotropic(1, 1, 2), (1, 1)) == 3.0
    assert evaluate(isotropic(1, math.inf, 1), (2,)) == 2.0
    assert evaluate(gevrey(1, 1, 1, 1), (1,)) == pytest.approx(math.e, rel=1e-15)


def test_origin_weight_is_one():
    for spec in (isotropic(2, 0.5, 3), gevrey(0.5, 2, 2, 3), mixed(1, 1, 3), custom_radial("max1", 1, 3)):
        assert evaluate(spec, (0, 0, 0)) == 1.0


def test_mixed_weight_is_product():
    spec = mixed(1.5, 1, 3)
    assert evaluate(spec, (2, -1, 0)) == pytest.approx((3 * 2 * 1) ** 1.5, rel=1e-15)


def test_phi_inverse_examples():
    phi = phi_of(isotropic(2, 2, 3))
    assert float(phi(2.0)) == pytest.approx(5.0)
    assert float(phi.inv(4.0)) == pytest.approx(math.sqrt(3), rel=1e-14)
    phi = phi_of(gevrey(1, 1, 1, 2))
    assert float(phi.inv(math.e**2)) == pytest.approx(2.0, rel=1e-14)


def test_ratio_rejects_non_monotone_quotient():
    with pytest.raises(NonMonotoneProfileError):
        phi_of(ratio(gevrey(1, 1, 1, 1), isotropic(2, 1, 1)))


def test_ratio_profile_monotone_from_one():
    phi = phi_of(ratio(gevrey(1, 2, 1, 1), isotropic(1, 1, 1)))
    assert phi.monotone_from == 1.0
    assert float(phi(1.0)) == pytest.approx(math.e**2 / 2)
    assert float(phi.inv(float(phi(3.0)))) == pytest.approx(3.0, rel=1e-12)


def test_check_monotone_domain_examples():
    assert check_monotone_domain(lambda t: math.exp(t) / t, 1, 10, 100)
    assert not check_monotone_domain(lambda t: math.exp(t) / t**2, 1, 1.5, 100)
    assert check_monotone_domain(lambda t: max(1.0, t), 0, 5, 10)
    with pytest.raises(PreconditionError):
        check_monotone_domain(lambda t: t, 2, 1, 10)


def test_mixed_has_no_profile():
    with pytest.raises(NotRadialError):
        phi_of(mixed(1, 1, 2))


def test_dimension_mismatch():
    with pytest.raises(PreconditionError):
        evaluate(isotropic(1, 1, 2), (1, 2, 3))


def test_parse_p():
    assert parse_p("inf") == math.inf
    assert parse_p("3/2") == 1.5
    assert parse_p(2) == 2.0


def test_json_round_trip():
    specs = [
        isotropic(1, 1, 2),
        isotropic(2, math.inf, 4),
        gevrey(0.5, 1, 1.5, 3),
        mixed(1, 2, 5),
        ratio(gevrey(1, 2, 1, 2), isotropic(1, 1, 2)),
        custom_radial("exp", 1, 2),
    ]
    for spec in specs:
        back = WeightSpec.from_json(spec.to_json())
        assert back.to_json() == spec.to_json()
        K = np.array([[0, 0], [1, -2], [3, 1]])[:, :1].repeat(spec.d, axis=1)
        assert np.array_equal(evaluate_many(back, K), evaluate_many(spec, K))


def test_evaluate_many_matches_scalar():
    rng = np.random.default_rng(3)
    for spec in (isotropic(1.5, 0.5, 3), gevrey(0.5, 1, 2, 3), mixed(1, 1, 3), custom_radial("max1", 2, 3)):
        K = rng.integers(-20, 21, size=(200, 3))
        many = evaluate_many(spec, K)
        assert all(many[i] == evaluate(spec, K[i]) for i in range(len(K)))


def test_named_phi_inverses():
    for name in ("max1", "exp", "one_plus", "identity", "square"):
        phi = NAMED_PHI[name]
        for t in (1.5, 3.0, 10.0):
            assert float(phi.inv(float(phi(t)))) == pytest.approx(t, rel=1e-12)
