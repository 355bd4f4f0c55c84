import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracops.grid import (
    SampledFunction1D,
    UniformGrid1D,
    cumulative_trapezoid,
    l1_distance,
    sample,
)
from fracops.rl_core import (
    FAMILY_NAMES,
    estimate_order,
    make_family,
    product_quadrature_weights,
    rl_integral,
    rl_integral_shifted,
    rl_kernel,
)

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)  # closed form of I^0.5 1 at t = 1


def ones_on(a=0.0, T=1.0, n=256):
    return sample(lambda t: 1.0, UniformGrid1D(a, T, n))


def test_kernel_at_unit_order_is_constant():
    assert rl_kernel(1.0, 0.37) == 1.0


def test_kernel_at_order_two_is_linear():
    assert rl_kernel(2.0, 3.0) == 3.0


def test_kernel_half_order():
    # Gamma(1/2) = sqrt(pi), via the standard-library gamma as oracle
    assert rl_kernel(0.5, 1.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)


def test_kernel_rejects_bad_arguments():
    with pytest.raises(ValueError):
        rl_kernel(0.5, 0.0)
    with pytest.raises(ValueError):
        rl_kernel(0.5, -1.0)
    with pytest.raises(ValueError):
        rl_kernel(-1.0, 1.0)
    with pytest.raises(ValueError):
        rl_kernel(0.0, 1.0)


def test_unit_order_integral_of_one_is_nodes():
    f = ones_on(n=4)
    out = rl_integral(1.0, f)
    assert np.array_equal(out.values.real, f.grid.nodes)


def test_unit_order_is_trapezoid_bit_for_bit():
    for n in (7, 64, 333, 1024):
        g = UniformGrid1D(0.0, 1.0, n)
        for expr in (np.cos, lambda t: np.exp(-t) + 0.3 * t * t, lambda t: t):
            f = sample(expr, g)
            assert np.array_equal(
                rl_integral(1.0, f).values, cumulative_trapezoid(f).values
            )


def test_half_order_closed_form_at_endpoint():
    out = rl_integral(0.5, ones_on(n=4096))
    assert abs(out.values[-1].real - TWO_OVER_SQRT_PI) < 1e-4


def test_left_endpoint_is_zero():
    for alpha in (0.3, 1.0, 2.5):
        out = rl_integral(alpha, sample(np.cos, UniformGrid1D(0.0, 1.0, 64)))
        assert out.values[0] == 0.0


def test_index_law_residual_on_cos():
    g = UniformGrid1D(0.0, 1.0, 2048)
    f = sample(np.cos, g)
    twice = rl_integral(0.5, rl_integral(0.5, f))
    once = rl_integral(1.0, f)
    assert l1_distance(twice, once) < 5e-4


def test_index_law_converges_at_order_1p4():
    def resid(n):
        f = ones_on(n=n)
        return l1_distance(rl_integral(0.5, rl_integral(0.5, f)), rl_integral(1.0, f))

    e_coarse, e_fine = resid(256), resid(1024)
    order = math.log(e_coarse / e_fine) / math.log(4.0)
    assert order >= 1.4


def test_rejects_nonpositive_order():
    f = ones_on(n=8)
    for alpha in (0.0, -0.5, math.nan, math.inf):
        with pytest.raises(ValueError):
            rl_integral(alpha, f)


def test_weights_are_nonnegative():
    for alpha in (0.25, 0.5, 1.0, 1.7, 3.2):
        wl, wr = product_quadrature_weights(alpha, 1.0 / 257, 257)
        assert np.all(wl >= 0.0)
        assert np.all(wr >= 0.0)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.floats(0.0, 100.0), min_size=4, max_size=48),
    st.floats(0.1, 4.0),
)
def test_positivity_is_exact(vals, alpha):
    g = UniformGrid1D(0.0, 1.0, len(vals) - 1)
    out = rl_integral(alpha, SampledFunction1D(g, np.array(vals, dtype=complex)))
    assert np.all(out.values.real >= 0.0)
    assert np.all(out.values.imag == 0.0)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.floats(-50.0, 50.0), min_size=4, max_size=40),
    st.lists(st.floats(-50.0, 50.0), min_size=4, max_size=40),
    st.floats(0.2, 3.0),
)
def test_linearity_to_machine_precision(a_vals, b_vals, alpha):
    n = min(len(a_vals), len(b_vals))
    g = UniformGrid1D(0.0, 1.0, n - 1)
    f1 = SampledFunction1D(g, np.array(a_vals[:n], dtype=complex))
    f2 = SampledFunction1D(g, np.array(b_vals[:n], dtype=complex))
    lhs = rl_integral(alpha, 2.0 * f1 + (-3.0) * f2)
    rhs = 2.0 * rl_integral(alpha, f1) + (-3.0) * rl_integral(alpha, f2)
    scale = max(1.0, float(np.abs(rhs.values).max()))
    assert float(np.abs(lhs.values - rhs.values).max()) < 1e-12 * scale


def test_order_continuity_surrogate():
    f = ones_on(n=512)
    base = rl_integral(0.7, f)
    resid = [l1_distance(rl_integral(0.7 + d, f), base) for d in (0.1, 0.01, 0.001)]
    assert resid[0] > resid[1] > resid[2]
    assert resid[2] < 1e-2


def test_order_continuity_pointwise_for_nonnegative_input():
    # at fixed t the map alpha -> output(t) is continuous for f >= 0
    f = sample(lambda t: max(0.0, t - 0.3), UniformGrid1D(0.0, 1.0, 512))
    base = rl_integral(0.9, f).values[-1]
    gaps = [
        abs(rl_integral(0.9 + d, f).values[-1] - base) for d in (0.1, 0.01, 0.001)
    ]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_shifted_integral_on_translated_interval():
    f = sample(lambda t: 1.0, UniformGrid1D(2.0, 3.0, 64))
    out = rl_integral_shifted(1.0, f)
    assert np.allclose(out.values.real, f.grid.nodes - 2.0, atol=1e-13)


def test_shifted_integral_negative_origin():
    f = sample(lambda t: 1.0, UniformGrid1D(-1.0, 1.0, 4096))
    out = rl_integral_shifted(0.5, f)
    k = 2048  # node at t = 0, one unit from the origin
    assert abs(out.values[k].real - TWO_OVER_SQRT_PI) < 1e-4


def test_shifted_equals_plain_at_zero_origin():
    f = sample(np.cos, UniformGrid1D(0.0, 1.0, 200))
    assert np.array_equal(
        rl_integral_shifted(0.8, f).values, rl_integral(0.8, f).values
    )


def test_shifted_route_matches_direct_kernel_formula():
    # the kernel depends only on t - s, so conjugating by the translation
    # reproduces the origin-a formula identically
    f = sample(np.cos, UniformGrid1D(2.0, 3.0, 200))
    assert np.array_equal(
        rl_integral_shifted(0.8, f).values, rl_integral(0.8, f).values
    )


def test_family_catalog_names():
    assert FAMILY_NAMES == (
        "doubled_order",
        "geometric",
        "phase",
        "riemann_liouville",
        "scaled_order",
    )
    with pytest.raises(ValueError, match="riemann_liouville"):
        make_family("nope")


def test_family_riemann_liouville_value():
    fam = make_family("riemann_liouville")
    out = fam.apply(0.5, ones_on(n=2048))
    assert abs(out.values[-1].real - TWO_OVER_SQRT_PI) < 1e-4


def test_family_scaled_order_is_alpha_times_nodes():
    fam = make_family("scaled_order")
    f = ones_on(n=64)
    out = fam.apply(0.5, f)
    assert np.allclose(out.values.real, 0.5 * f.grid.nodes, atol=1e-14)


def test_family_phase_value():
    fam = make_family("phase")
    out = fam.apply(0.5, ones_on(n=2048))
    v = out.values[-1]
    assert abs(v.real - (-TWO_OVER_SQRT_PI)) < 1e-4
    assert abs(v.imag) < 1e-12


def test_family_expected_profiles():
    profiles = {
        "riemann_liouville": (True, True, True, True),
        "scaled_order": (True, False, True, True),
        "doubled_order": (False, True, True, True),
        "geometric": (False, True, True, True),
        "phase": (True, True, True, False),
    }
    for name, (ident, index, cont, pos) in profiles.items():
        p = make_family(name).expected_profile
        assert (p.identity, p.index_law, p.continuity, p.positivity) == (
            ident,
            index,
            cont,
            pos,
        )


def test_estimate_order_half():
    out = rl_integral(0.5, ones_on(n=1024))
    assert abs(estimate_order(out) - 0.5) < 1e-3


def test_estimate_order_on_closed_form_samples():
    # the model fitted is exactly t^b / Gamma(b+1); sample it directly
    g = UniformGrid1D(0.0, 1.0, 512)
    closed = sample(lambda t: t ** 0.5 / math.gamma(1.5), g)
    assert abs(estimate_order(closed) - 0.5) < 1e-3


def test_estimate_order_unit():
    out = rl_integral(1.0, ones_on(n=1024))
    assert abs(estimate_order(out) - 1.0) < 1e-3


def test_estimate_order_sees_through_doubling():
    fam = make_family("doubled_order")
    out = fam.apply(0.5, ones_on(n=1024))
    assert abs(estimate_order(out) - 1.0) < 1e-3


def test_estimate_order_rejects_nonpositive():
    g = UniformGrid1D(0.0, 1.0, 16)
    vals = np.linspace(0, 1, 17)
    vals[5] = -1.0
    with pytest.raises(ValueError, match="interior node"):
        estimate_order(SampledFunction1D(g, vals.astype(complex)))


def test_estimate_order_respects_grid_origin():
    out = rl_integral(0.5, ones_on(a=2.0, T=3.0, n=1024))
    assert abs(estimate_order(out) - 0.5) < 1e-3
