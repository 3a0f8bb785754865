import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsomimo.channel import ChannelParams, combined_cdf_paper, combined_pdf, PdfVariant
from fsomimo.exceptions import DomainError, ModelRangeWarning, PaperDiscrepancyWarning
from fsomimo.geometry import BeamGeometry
from fsomimo.performance import (
    BPSK,
    DPSK,
    QPSK,
    DpskForm,
    LinkBudget,
    Modulation,
    SnrSpec,
    ber_closed,
    ber_conditional,
    ber_dpsk_closed,
    ber_mpsk_closed,
    log_ber_closed,
    mpsk_params,
    outage_probability,
    received_power,
    responsivity,
    snr_from_link_budget,
)

from oracles import ln_ber_bpsk_reference, ln_ber_dpsk_reference, quadpack_semi_infinite

INV_2_SQRT_PI = 1.0 / (2.0 * math.sqrt(math.pi))
GRID = [
    (mn, xi2)
    for mn in (1, 4, 16, 36)
    for xi2 in (0.5, 1.0, 2.0, 4.0)
    if xi2 < mn + 1
]


def test_snr_spec():
    assert SnrSpec.from_db(0.0).gamma_avg == 1.0
    assert SnrSpec.from_db(20.0).gamma_avg == pytest.approx(100.0, rel=1e-15)
    assert SnrSpec(1000.0).db == pytest.approx(30.0, rel=1e-15)
    assert SnrSpec.from_components(1.0, 2.0, 2.0).gamma_avg == pytest.approx(2.0)
    with pytest.raises(DomainError):
        SnrSpec(0.0)


def test_modulation_parse():
    assert Modulation.parse("bpsk") == BPSK
    assert Modulation.parse("qpsk") == QPSK
    assert Modulation.parse("8psk") == Modulation.mpsk(8)
    assert Modulation.parse("dpsk") == DPSK
    with pytest.raises(DomainError):
        Modulation.mpsk(6)
    with pytest.raises(ValueError):
        Modulation.parse("qam")


def test_mpsk_params_examples():
    p2 = mpsk_params(2)
    assert (p2.zeta, p2.tau) == (1.0, 1)
    assert p2.a == pytest.approx((math.sqrt(2.0),), rel=1e-15)
    p4 = mpsk_params(4)
    assert (p4.zeta, p4.tau) == (1.0, 1)
    assert p4.a == pytest.approx((1.0,), rel=1e-15)
    p8 = mpsk_params(8)
    assert p8.zeta == pytest.approx(2.0 / 3.0)
    assert p8.tau == 2
    assert p8.a == pytest.approx((0.541196100146197, 1.3065629648763766), rel=1e-14)
    for M in (2, 4, 8, 16, 32):
        assert all(0 < a <= math.sqrt(2.0) + 1e-15 for a in mpsk_params(M).a)


def test_ber_conditional_examples():
    assert ber_conditional(BPSK, 0.0, 5.0) == 0.5
    assert ber_conditional(DPSK, 0.0, 5.0) == 0.5
    i = np.linspace(0.0, 10.0, 201)
    for mod in (BPSK, QPSK, Modulation.mpsk(8), DPSK):
        vals = ber_conditional(mod, i, 3.0)
        assert np.all(np.diff(vals) <= 0)
        assert np.all(vals >= 0)
        assert vals[-1] < 1e-12
    # two-term 8PSK sum starts at zeta * tau / 2 = 2/3
    assert ber_conditional(Modulation.mpsk(8), 0.0, 1.0) == pytest.approx(2.0 / 3.0)
    for mod in (BPSK, QPSK, DPSK):
        assert ber_conditional(mod, i, 1.0).max() <= 0.5
    with pytest.raises(DomainError):
        ber_conditional(BPSK, -0.1, 1.0)


def test_mpsk_closed_trivial_examples():
    assert ber_mpsk_closed(2, 1.0, ChannelParams.from_xi2(1, 1.0, 1.0)) == pytest.approx(
        INV_2_SQRT_PI, rel=1e-14
    )
    assert ber_mpsk_closed(4, 2.0, ChannelParams.from_xi2(2, 1.0, 1.0)) == pytest.approx(
        INV_2_SQRT_PI, rel=1e-14
    )
    assert INV_2_SQRT_PI == pytest.approx(0.2820948, abs=1e-7)


def test_mpsk_closed_derived_example():
    # QUADPACK of power-law pdf x conditional BPSK BER gave 5.812372139107475e-27
    p = ChannelParams(36, 5.5, 1.0)
    assert ber_mpsk_closed(2, 1.0, p) == pytest.approx(5.812372139107475e-27, rel=1e-8)


def test_dpsk_closed_examples():
    assert ber_dpsk_closed(10.0, ChannelParams.from_xi2(2, 2.0, 1.0)) == pytest.approx(0.05, rel=1e-14)
    assert ber_dpsk_closed(10.0, ChannelParams.from_xi2(3, 2.0, 1.0)) == pytest.approx(0.025, rel=1e-14)


def test_printed_dpsk_form_disagrees_and_quadrature_adjudicates():
    p = ChannelParams.from_xi2(3, 2.0, 1.0)
    with pytest.warns(PaperDiscrepancyWarning):
        printed = ber_dpsk_closed(10.0, p, DpskForm.AS_PRINTED)
    derived = ber_dpsk_closed(10.0, p)
    truth = quadpack_semi_infinite(
        lambda x: combined_pdf(x, p, PdfVariant.PAPER_EQ13) * ber_conditional(DPSK, x, 10.0)
    )
    assert derived == pytest.approx(truth, rel=1e-8)
    assert abs(printed - truth) / truth > 1e-2


def test_printed_dpsk_form_value():
    # xi² Γ(2)Γ(1)/(2√2 Γ(3)) 10^(-1/2)
    p = ChannelParams.from_xi2(3, 2.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PaperDiscrepancyWarning)
        printed = ber_dpsk_closed(10.0, p, "printed")
    assert printed == pytest.approx(2.0 / (2.0 * math.sqrt(2.0) * 2.0) / math.sqrt(10.0), rel=1e-14)


@pytest.mark.parametrize("mn,xi2", GRID)
@pytest.mark.parametrize("g", [1.0, 10.0, 100.0, 1000.0])
def test_log_forms_match_lgamma_reference(mn, xi2, g):
    xi = math.sqrt(xi2)
    p = ChannelParams(mn, xi, 0.8)
    assert log_ber_closed(BPSK, g, p) == pytest.approx(ln_ber_bpsk_reference(xi, mn, 0.8, g), rel=1e-12)
    assert log_ber_closed(DPSK, g, p) == pytest.approx(ln_ber_dpsk_reference(xi, mn, 0.8, g), rel=1e-12)
    assert math.exp(log_ber_closed(Modulation.mpsk(8), g, p)) == pytest.approx(
        ber_mpsk_closed(8, g, p), rel=1e-13
    )


@pytest.mark.parametrize("mod", [BPSK, QPSK, Modulation.mpsk(8), DPSK], ids=lambda m: m.label)
@pytest.mark.parametrize("mn,xi2", [(1, 0.5), (4, 2.0), (16, 4.0), (36, 1.0)])
def test_closed_form_matches_quadpack(mod, mn, xi2):
    p = ChannelParams.from_xi2(mn, xi2, 0.9)
    for g in (1.0, 100.0):
        closed = ber_closed(mod, g, p)
        quad = quadpack_semi_infinite(
            lambda x: combined_pdf(x, p, PdfVariant.PAPER_EQ13) * ber_conditional(mod, x, g)
        )
        assert closed == pytest.approx(quad, rel=1e-8)


@pytest.mark.parametrize("mn,xi2", GRID)
def test_grid_range_and_monotonicity(mn, xi2):
    p = ChannelParams.from_xi2(mn, xi2, 1.0)
    for mod in (BPSK, QPSK, Modulation.mpsk(8), DPSK):
        vals = [ber_closed(mod, g, p) for g in (1.0, 10.0, 100.0, 1000.0)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_power_law_average_can_exceed_one_half():
    # the power-law density is not normalizable, so its BER average is not a
    # probability at small xi² and large MN; quadrature of the same integrand agrees
    p = ChannelParams.from_xi2(36, 0.5, 1.0)
    closed = ber_closed(BPSK, 1.0, p)
    quad = quadpack_semi_infinite(
        lambda x: combined_pdf(x, p, PdfVariant.PAPER_EQ13) * ber_conditional(BPSK, x, 1.0)
    )
    assert closed > 2.0
    assert closed == pytest.approx(quad, rel=1e-8)


@pytest.mark.parametrize("mn,xi2", GRID)
@pytest.mark.parametrize("g", [1.0, 10.0, 100.0, 1000.0])
def test_bpsk_no_worse_than_dpsk(mn, xi2, g):
    p = ChannelParams.from_xi2(mn, xi2, 1.0)
    assert ber_closed(BPSK, g, p) <= ber_closed(DPSK, g, p)


def test_gamma_domain_guard():
    p = ChannelParams.from_xi2(2, 2.9, 1.0)
    assert ber_mpsk_closed(2, 1.0, p) > 0
    with pytest.raises(DomainError, match=r"xi\^2 must be < M\*N \+ 1"):
        ChannelParams.from_xi2(2, 3.2, 1.0)


def test_outage_examples():
    p = ChannelParams.from_xi2(2, 1.0, 1.0)
    assert outage_probability(5.0, 5.0, p) == pytest.approx(1.0, rel=1e-14)
    assert outage_probability(0.25, 1.0, p) == pytest.approx(0.5, rel=1e-14)
    with pytest.raises(DomainError):
        outage_probability(0.0, 1.0, p)


def test_outage_derived_example():
    # nested QUADPACK over the exact law: P(I <= sqrt(0.1)) = 0.03175052170658372,
    # the power-law formula gives 0.06609763205500939
    p = ChannelParams.from_xi2(4, 2.0, 0.710144)
    value = outage_probability(0.1, 1.0, p)
    assert value == pytest.approx(0.06609763205500939, rel=1e-12)
    assert value / 0.03175052170658372 == pytest.approx(2.0817, abs=1e-4)


def test_outage_out_of_range_warns():
    with pytest.warns(ModelRangeWarning):
        value = outage_probability(10.0, 1.0, ChannelParams.from_xi2(2, 1.0, 1.0))
    assert value > 1.0


@settings(max_examples=100)
@given(
    st.integers(1, 36),
    st.floats(0.1, 1.0),
    st.floats(0.3, 1.0),
    st.floats(1e-3, 10.0),
    st.floats(1.0, 1e4),
)
def test_outage_is_the_power_law_cdf(mn, frac, A0, gamma_th, g):
    p = ChannelParams.from_xi2(mn, frac * mn, A0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelRangeWarning)
        value = outage_probability(gamma_th, g, p)
        assert value == combined_cdf_paper(math.sqrt(gamma_th / g), p)
        assert outage_probability(gamma_th, 2.0 * g, p) < value


def test_received_power():
    geom = BeamGeometry(0.05, 0.1, 0.05)
    unit = LinkBudget(P_T=2.0)
    assert received_power(unit, geom, 1.0, 1.0, simplified=True) == 2.0
    full = received_power(unit, geom, 0.5, 3.0)
    free_space = (1.55e-6 / (4 * math.pi * 1000.0)) ** 2
    assert full == pytest.approx(2.0 * 0.5 * 3.0 * free_space, rel=1e-14)
    assert free_space == pytest.approx(1.5214e-20, rel=1e-4)
    doubled = received_power(LinkBudget(P_T=2.0, G_T=2.0), geom, 0.5, 3.0)
    assert doubled == pytest.approx(2.0 * full, rel=1e-15)


def test_link_budget_validation():
    with pytest.raises(DomainError):
        LinkBudget(P_T=0.0)
    with pytest.raises(DomainError):
        LinkBudget(P_T=1.0, eta_T=1.2)
    with pytest.raises(DomainError):
        LinkBudget(P_T=1.0, I_d_dark=-1.0)


def test_responsivity():
    # q lambda / (h0 c) recomputed by hand: 1.602176634e-19 * 1.55e-6 / (6.626069e-34 * 2.99792458e8)
    rho = responsivity(1.0, 1550e-9)
    assert rho == pytest.approx(1.602176634e-19 * 1.55e-6 / (6.626069e-34 * 2.99792458e8), rel=1e-15)
    assert rho == pytest.approx(1.2501, abs=1e-4)
    assert responsivity(1.0, 3100e-9) == pytest.approx(2 * rho, rel=1e-15)
    with pytest.raises(DomainError):
        responsivity(0.0, 1550e-9)
    with pytest.raises(DomainError):
        responsivity(1.0, 0.0)


def test_snr_from_link_budget():
    geom = BeamGeometry(0.05, 0.1, 0.05)
    lb = LinkBudget(P_T=1e-3, eta_q=0.8)
    rho = responsivity(0.8, geom.wavelength_lambda)
    snr = snr_from_link_budget(lb, geom, sigma_n=1e-4)
    assert snr.gamma_avg == pytest.approx(2.0 * (1e-3 * rho / 1e-4) ** 2, rel=1e-14)
