import math

import pytest

from widthlab.errors import NotRadialError, PreconditionError
from widthlab.tractability import (
    alpha_beta_weak_iso,
    classify_gevrey,
    classify_iso,
    info_complexity_bounds_iso,
    info_complexity_exact,
    named_phi,
    transfer_identity_check,
)
from widthlab.weights import custom_radial, gevrey, isotropic, mixed


def n_of(spec, eps):
    return info_complexity_exact(spec, eps).value


def test_info_complexity_examples():
    assert n_of(isotropic(1, math.inf, 1), 0.6) == 4
    assert n_of(isotropic(1, math.inf, 1), 0.999) == 4
    assert n_of(isotropic(1, math.inf, 1), 1.0) == 1
    assert n_of(isotropic(1, 1, 2), 0.4) == 6


def test_tie_is_excluded():
    # weight 2 equals 1/eps exactly and is not counted
    assert n_of(isotropic(1, 1, 2), 0.5) == 2


def test_eps_range():
    with pytest.raises(PreconditionError):
        info_complexity_exact(isotropic(1, 1, 2), 0.0)
    with pytest.raises(PreconditionError):
        info_complexity_exact(isotropic(1, 1, 2), 1.5)


def test_monotone_in_eps_and_d():
    eps_grid = [0.9, 0.5, 0.2, 0.1, 0.03, 0.01]
    for spec in (isotropic(2, 1, 3), gevrey(0.5, 1, 2, 3), mixed(1, 1, 3)):
        vals = [n_of(spec, e) for e in eps_grid]
        assert vals == sorted(vals)
        by_d = [n_of(spec.with_d(d), 0.1) for d in range(1, 7)]
        assert by_d == sorted(by_d)


def test_curse_witness():
    for d in range(1, 31):
        for eps in (0.999, 0.5, 0.3):
            assert n_of(isotropic(1, math.inf, d), eps) > 2**d


def test_weak_witness_far_diagonal():
    ratios = [math.log2(n_of(isotropic(2, 1, i), 1 / i)) / (2 * i) for i in (32, 64, 128)]
    assert ratios[0] > ratios[1] > ratios[2]


@pytest.mark.xfail(strict=True, reason="log2 n / (1/eps + d) rises until about i = 30 before it decays")
def test_weak_witness_near_diagonal():
    ratios = [math.log2(n_of(isotropic(2, 1, i), 1 / i)) / (2 * i) for i in range(2, 31)]
    assert all(b <= a for a, b in zip(ratios, ratios[1:]))


def test_lemma_reference():
    rep = info_complexity_bounds_iso(2, 1, 0.1, 10)
    assert not rep.certified
    assert rep.thresholds["eps2_U"] < 0.1 < rep.thresholds["eps1_U"]
    assert rep.upper_branch == 2
    assert rep.log_n_upper == pytest.approx(math.log2(10) * 10**0.5)
    eps = 0.5 * 16**-0.5
    rep = info_complexity_bounds_iso(1, 2, eps, 16)
    assert rep.log_n_lower == pytest.approx((1 / eps) ** 2)
    with pytest.raises(PreconditionError):
        info_complexity_bounds_iso(1, math.inf, 0.1, 4)


def test_classify_iso_examples():
    assert classify_iso(1, math.inf).cls == "curse"
    assert classify_iso(1, 2).cls == "intractable-not-curse"
    v = classify_iso(3, 2)
    assert v.cls == "weakly-tractable"
    assert v.flags["alpha_beta_weak_for_alpha_above"] == pytest.approx(2 / 3)
    assert alpha_beta_weak_iso(3, 2, 0.7, 1) and not alpha_beta_weak_iso(3, 2, 0.6, 1)


def test_classify_iso_boundary():
    assert classify_iso(2, 2).cls == "intractable-not-curse"


def test_classify_gevrey_examples():
    assert classify_gevrey(2, 1, 1).cls == "quasi-polynomially-tractable"
    assert classify_gevrey(1, 5, 2).cls == "not-quasi-polynomially-tractable"
    assert classify_gevrey(1.5, 1, 1.5).cls == "quasi-polynomially-tractable"
    v = classify_gevrey(1, 1, math.inf)
    assert v.cls == "curse" and not v.flags["quasi_polynomial"]
    assert classify_gevrey(2, 1, 1).flags["modified_weak"]
    assert not classify_gevrey(1, 1, 1).flags["modified_weak"]


def test_transfer_examples():
    base = isotropic(1, 1, 2)
    (row,) = transfer_identity_check(base, named_phi("square"), [0.1])
    assert row.equal and row.eps_base == pytest.approx(1 / math.sqrt(10))
    rows = transfer_identity_check(base, named_phi("identity"), [0.9, 0.3, 0.05])
    assert all(r.equal and r.lhs == r.rhs for r in rows)


def test_transfer_exp_matches_gevrey():
    base = custom_radial("max1", 1, 2)
    g = gevrey(1, 1, 1, 2)
    for j in (2, 3):
        eps = math.exp(-j)
        (row,) = transfer_identity_check(base, named_phi("exp"), [eps])
        assert row.equal
        assert row.lhs == n_of(g, eps) == n_of(base, 1 / j)
    # at eps = 1/e the base threshold is 1, where only the origin-rank correction applies
    (row,) = transfer_identity_check(base, named_phi("exp"), [math.exp(-1)])
    assert row.equal and row.rhs == 1 and row.lhs == 2


def test_transfer_needs_radial_base():
    with pytest.raises(NotRadialError):
        transfer_identity_check(mixed(1, 1, 2), named_phi("square"), [0.5])
