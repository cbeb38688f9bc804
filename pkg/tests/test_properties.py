import itertools
import math

import numpy as np
from hypothesis import HealthCheck, assume, given, reject, settings
from hypothesis import strategies as st

from widthlab.approx import approx_number, characterization_bounds, view_for
from widthlab.entropy import entropy_bounds
from widthlab.errors import CountCeilingError
from widthlab.lattice import grid_count_hyperbolic, grid_count_pball
from widthlab.tractability import info_complexity_exact
from widthlab.weights import WeightSpec, custom_radial, evaluate, gevrey, isotropic, mixed, phi_of

P_VALUES = st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0, math.inf])
FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def weight_specs(draw, max_d=3, radial_only=False):
    d = draw(st.integers(1, max_d))
    kinds = ["Isotropic", "Gevrey", "CustomRadial"] + ([] if radial_only else ["Mixed"])
    kind = draw(st.sampled_from(kinds))
    if kind == "Isotropic":
        return isotropic(draw(st.sampled_from([0.5, 1.0, 2.0])), draw(P_VALUES), d)
    if kind == "Gevrey":
        return gevrey(draw(st.sampled_from([0.5, 1.0])), draw(st.sampled_from([0.5, 1.0])), draw(P_VALUES), d)
    if kind == "Mixed":
        return mixed(draw(st.sampled_from([0.5, 1.0, 2.0])), draw(st.sampled_from([1.0, 2.0])), d)
    return custom_radial(draw(st.sampled_from(["max1", "one_plus"])), draw(P_VALUES), d)


def signed_permutation(k, perm, signs):
    return tuple(s * k[i] for i, s in zip(perm, signs))


@FAST
@given(weight_specs(), st.data())
def test_weight_symmetry(spec, data):
    d = spec.d
    k = data.draw(st.lists(st.integers(-30, 30), min_size=d, max_size=d))
    perm = data.draw(st.permutations(range(d)))
    signs = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=d, max_size=d))
    assert evaluate(spec, k) == evaluate(spec, signed_permutation(k, perm, signs))


@FAST
@given(weight_specs(radial_only=True), st.data())
def test_radial_profile(spec, data):
    d = spec.d
    k = np.array(data.draw(st.lists(st.integers(-50, 50), min_size=d, max_size=d)))
    p = spec.norm_p
    norm = np.abs(k).max() if math.isinf(p) else (np.abs(k).astype(float) ** p).sum() ** (1 / p)
    want = float(phi_of(spec)(norm))
    assert math.isclose(evaluate(spec, k), want, rel_tol=1e-10)


@FAST
@given(st.integers(1, 4), st.data())
def test_isotropic_p2_integer_s(s, data):
    k = data.draw(st.lists(st.integers(-1000, 1000), min_size=3, max_size=3))
    exact = (1 + sum(t * t for t in k)) ** s  # integer exponent s/2 of the weight with smoothness 2s
    got = evaluate(isotropic(2 * s, 2, 3), k)
    if exact < 2**53:
        assert got == float(exact)
    else:
        # above 2^53 no double holds the value; pow is within one ulp of it
        assert abs(got - exact) <= math.ulp(float(exact))


@FAST
@given(P_VALUES, st.integers(1, 3), st.floats(0, 6, allow_nan=False))
def test_pball_count_matches_box(p, d, r):
    box = range(-math.floor(r), math.floor(r) + 1)
    if math.isinf(p):
        want = len(box) ** d
    else:
        # skip radii that land within float noise of a lattice level
        levels = {sum(abs(t) ** p for t in k) for k in itertools.product(box, repeat=d)}
        assume(all(abs(u - r**p) > 1e-9 * max(1.0, r**p) for u in levels))
        want = sum(sum(abs(t) ** p for t in k) <= r**p for k in itertools.product(box, repeat=d))
    assert grid_count_pball(p, r, d).value == want


@FAST
@given(P_VALUES, st.integers(1, 4), st.floats(0, 5), st.floats(0, 5))
def test_pball_count_monotone_in_r(p, d, r1, r2):
    lo, hi = sorted((r1, r2))
    assert grid_count_pball(p, lo, d).value <= grid_count_pball(p, hi, d).value


@FAST
@given(st.integers(1, 200), st.integers(1, 8))
def test_hyperbolic_count_properties(r, d):
    c = grid_count_hyperbolic(r, d).value
    assert c >= 1 + 2 * d * (r - 1)  # the axes alone
    assert grid_count_hyperbolic(r + 1, d).value >= c
    assert c <= grid_count_pball(math.inf, r - 1, d).value


@FAST
@given(weight_specs(max_d=3), st.integers(1, 3000), st.integers(1, 3000))
def test_sigma_nonincreasing(spec, n1, n2):
    lo, hi = sorted((n1, n2))
    view = view_for(spec)
    assert view.sigma(hi) <= view.sigma(lo) <= 1.0


@FAST
@given(weight_specs(max_d=4), st.floats(5e-3, 0.999))
def test_galois_connection(spec, eps):
    try:
        n = info_complexity_exact(spec, eps).value
    except CountCeilingError:
        reject()  # the library refuses tables beyond its budgets
    if n is None:
        reject()
    view = view_for(spec)
    assert view.sigma(n) <= eps
    if n > 1:
        assert view.sigma(n - 1) > eps


@FAST
@given(weight_specs(max_d=4, radial_only=True), st.integers(2, 20000))
def test_characterization_contains(spec, n):
    assume(spec.kind != "CustomRadial" or spec.phi.monotone_from == 0)
    bp = characterization_bounds(spec, n)
    assert bp.contains(approx_number(spec, n).value, rel=1e-12)


@FAST
@given(st.integers(1, 10**12), st.integers(1, 8), st.sampled_from([0.5, 1.0, 2.0, math.inf]))
def test_entropy_bounds_ordered(n, d, p):
    est = entropy_bounds(n, d, p)
    assert 0 < est.lower <= est.upper <= 1.0
    nxt = entropy_bounds(n + 1, d, p)
    assert nxt.lower <= est.lower and nxt.upper <= est.upper


@FAST
@given(weight_specs())
def test_spec_json_round_trip(spec):
    back = WeightSpec.from_json(spec.to_json())
    k = tuple(range(spec.d))
    assert back.to_json() == spec.to_json()
    assert evaluate(back, k) == evaluate(spec, k)
