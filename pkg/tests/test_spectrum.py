from fractions import Fraction as F

import mpmath
import pytest

from polyhg.families import (
    AssocPollaczek,
    LittleQLegendre,
    PollaczekParams,
    RandomWalk,
    RandomWalkParams,
    SyntheticFamily,
)
from polyhg.hypergroup import HSequence, LinearizationTable
from polyhg.scalars import DomainError, scalar_cmp, to_mpf, working_precision
from polyhg.spectrum import (
    character,
    character_limit_series,
    derivative_growth,
    eval_poly,
    fourier,
    integrate_poly_power,
    q_hypergeometric_R,
    q_measure,
    q_pochhammer,
    support_interval,
)


@pytest.fixture(scope="module")
def qleg():
    return LittleQLegendre(F(1, 2))


@pytest.fixture(scope="module")
def qleg_table(qleg):
    return LinearizationTable(qleg)


# --- evaluation -----------------------------------------------------------------

def test_normalization_at_one(qleg):
    for n in range(51):
        assert eval_poly(qleg, n, 1) == 1


def test_point_values(qleg):
    assert eval_poly(qleg, 1, 0) == F(-1, 2)
    assert eval_poly(qleg, 2, 0) == F(1, 8)


def test_first_derivative_constant(qleg):
    for x in (F(0), F(1, 3), F(-1)):
        assert eval_poly(qleg, 1, x, form="derivative") == F(3, 2)


def test_monic_and_orthonormal_consistency(qleg):
    table = LinearizationTable(qleg)
    # monic = P_n / lead(P_n); orthonormal = sqrt(h) P_n
    for n in range(1, 8):
        mono = table.monomial_coeffs(n)
        lead = mono[-1]
        x = F(2, 7)
        pn = eval_poly(qleg, n, x)
        assert eval_poly(qleg, n, x, form="monic") == pn / lead
        with working_precision(256):
            orth = eval_poly(qleg, n, x, form="orthonormal")
            hn = table.haar(n)
            assert scalar_cmp(abs(orth * orth - hn * pn * pn), F(1, 2 ** 200)) < 0


def test_pollaczek_normalization_at_one():
    cs = AssocPollaczek(PollaczekParams(F(1, 2), F(3, 10), F(1)))
    for n in range(51):
        assert eval_poly(cs, n, 1) == 1


# --- characters -------------------------------------------------------------------

def test_character_at_one_all_ones(qleg):
    ch = character(qleg, 1, 30, assert_in_spectrum=True)
    assert all(v == 1 for v in ch.values)
    assert ch.bound_violation is None


def test_character_at_zero(qleg):
    ch = character(qleg, 0, 2, assert_in_spectrum=True)
    assert ch.values == [F(1), F(-1, 2), F(1, 8)]


def test_character_bound_violation_reported_not_raised(qleg):
    ch = character(qleg, F(3, 2), 20, assert_in_spectrum=True)
    assert ch.bound_violation is not None
    n, v = ch.bound_violation
    assert abs(v) > 1


def test_character_ratio_pattern(qleg):
    # |v(k+1)/(v(k) q^{k+1})| < 4 from the admissible shift onward
    q = F(1, 2)
    ch = character(qleg, 0, 45)
    for k in range(1, 41):
        va, vb = ch.values[k], ch.values[k + 1]
        assert va != 0
        assert abs(vb / (va * q ** (k + 1))) < 4


# --- Fourier ------------------------------------------------------------------------

def test_fourier_unit(qleg_table):
    eps0 = qleg_table.epsilon(0)
    for x in (F(0), F(1, 2), F(1)):
        assert fourier(qleg_table, eps0, x) == 1


def test_fourier_difference_formula(qleg_table):
    # (eps0 - eps1)^ at 1 - q^n equals (q+1) q^n
    q = F(1, 2)
    f = qleg_table.epsilon(0) - qleg_table.epsilon(1)
    for n in range(8):
        assert fourier(qleg_table, f, 1 - q ** n) == (q + 1) * q ** n


def test_fourier_multiplicative_on_convolution(qleg_table):
    f = HSequence({0: F(1, 2), 2: F(3)})
    g = HSequence({1: F(-1, 5), 3: F(2, 7)})
    conv = qleg_table.convolve(f, g)
    for x in (F(0), F(3, 8), F(1)):
        lhs = fourier(qleg_table, conv, x)
        rhs = fourier(qleg_table, f, x) * fourier(qleg_table, g, x)
        assert lhs == rhs


def test_fourier_epsilon_squared(qleg_table):
    e1 = qleg_table.epsilon(1)
    conv = qleg_table.convolve(e1, e1)
    for x in (F(0), F(2, 3)):
        assert fourier(qleg_table, conv, x) == fourier(qleg_table, e1, x) ** 2


# --- measure ---------------------------------------------------------------------------

def test_q_measure_atoms_and_mass():
    q = F(1, 2)
    mu = q_measure(q, 10)
    assert mu.atoms[0] == (F(0), F(1, 2))
    assert mu.total_mass() == 1 - q ** 11
    assert mu.tail == q ** 11


def test_q_measure_kills_p1(qleg):
    # orthogonality: integral of P_1 against the truncated measure is within tail
    mu = q_measure(F(1, 2), 60)
    val = mu.integrate(lambda x: eval_poly(qleg, 1, x))
    assert abs(val) <= mu.tail * 2  # |P_1| <= 2 on [0, 1]


def test_plancherel_truncation(qleg_table):
    # |sum f^2(atoms) * mass - ||f||_2^2| <= ||f||_1^2 q^{K+1}
    q = F(1, 2)
    K = 150
    mu = q_measure(q, K)
    f = HSequence({0: F(2, 3), 1: F(-1), 4: F(1, 7), 6: F(3)})
    n2 = qleg_table.norms(f).l2sq
    n1 = qleg_table.norms(f).l1
    spectral = sum(fourier(qleg_table, f, x) ** 2 * m for x, m in mu.atoms)
    assert abs(n2 - spectral) <= n1 * n1 * q ** (K + 1)


def test_character_l2_norm_closed_form(qleg_table):
    # truncated ||alpha_{1-q^n}||_2^2 vs 1/(q^n (1-q)) within 1e-10; K = n + 80
    q = F(1, 2)
    for n in range(9):
        K = n + 80
        ch = character(qleg_table.cs, 1 - q ** n, K)
        trunc = sum(
            ch.values[k] ** 2 * qleg_table.haar(k) for k in range(K + 1)
        )
        closed = 1 / (q ** n * (1 - q))
        assert abs(trunc - closed) < F(1, 10 ** 10)


# --- integral sweeps -------------------------------------------------------------------

def test_integrate_orthonormality():
    for n in (0, 3, 7, 10):
        val, tail = integrate_poly_power(F(1, 2), n, 2, 120)
        assert abs(val - 1) <= tail


def test_integrate_power4_constant():
    val, tail = integrate_poly_power(F(1, 2), 0, 4, 20)
    assert val == 1 - F(1, 2) ** 21


def test_integrate_power4_divergence():
    v20, _ = integrate_poly_power(F(1, 5), 20, 4, 120)
    v40, _ = integrate_poly_power(F(1, 5), 40, 4, 120)
    assert v40 / v20 > 5


# --- basic hypergeometric cross-check -----------------------------------------------------

def test_q_pochhammer_basics():
    assert q_pochhammer(F(1, 2), F(1, 2), 0) == 1
    assert q_pochhammer(F(1, 2), F(1, 2), 2) == F(1, 2) * F(3, 4)


def test_2phi1_matches_recurrence(qleg):
    q = F(1, 2)
    for n in range(21):
        for x in (F(0), F(1, 2), F(1)):
            assert q_hypergeometric_R(q, n, x) == eval_poly(qleg, n, x)


def test_2phi1_small_values(qleg):
    assert q_hypergeometric_R(F(1, 2), 0, F(2, 3)) == 1
    assert q_hypergeometric_R(F(1, 2), 1, 0) == F(-1, 2)


# --- support interval ------------------------------------------------------------------

def test_support_interval_pollaczek_tends_to_one():
    cs = AssocPollaczek(PollaczekParams(0, F(1, 4), 0))
    si = support_interval(cs, 400)
    assert si.premise_ok
    lo, hi = si.endpoint_bracket
    assert hi == 1
    assert scalar_cmp(lo, F(99, 100)) > 0


def test_support_interval_random_walk_omega():
    p = RandomWalkParams(3, F(9, 2), 0, tilde=True)
    cs = RandomWalk(p)
    si = support_interval(cs, 600)
    lo, hi = si.endpoint_bracket
    omega = p.omega()
    assert scalar_cmp(abs(lo - omega), F(1, 100)) < 0
    # c converges to 1/(a+1) = 1/4 < 1/2, upper bracket end stays the crude 1
    assert si.c_bracket[1] == F(1, 2)


def test_support_interval_constant_quarter():
    syn = SyntheticFamily(
        lambda n: (F(3, 4), F(0), F(1, 4)) if n else (F(1), F(0), F(0)),
        "const-quarter",
    )
    si = support_interval(syn, 50)
    lo, _ = si.endpoint_bracket
    with working_precision(256):
        assert abs(lo - mpmath.sqrt(3) / 2) < mpmath.mpf(2) ** -200


def test_support_interval_premise_violation_reported(qleg):
    si = support_interval(qleg, 30)
    assert not si.premise_ok
    assert "b(" in si.premise_reason


# --- character limit series ------------------------------------------------------------

def test_series_first_term_is_product():
    r = character_limit_series(F(1, 2), 1)
    assert r.value == q_pochhammer(F(1, 2), F(1, 2), r.product_cutoff)


def test_series_value_q_half():
    r = character_limit_series(F(1, 2), 6)
    assert F(-247, 1000) < r.value < F(-246, 1000)


@pytest.mark.parametrize("q,n", [(F(1, 10), 30), (F(1, 5), 30)])
def test_series_matches_deep_character_value(q, n):
    r = character_limit_series(q, 12)
    cs = LittleQLegendre(q)
    deep = eval_poly(cs, n, 1 - q ** n)
    assert abs(r.value - deep) < F(1, 10 ** 6)
    assert r.gammas_decreasing


# --- derivative growth -----------------------------------------------------------------

def test_growth_flag_heuristics():
    bounded = AssocPollaczek(PollaczekParams(1, 0, 0))  # quarter-bound premise holds
    with working_precision(128):
        gp = derivative_growth(bounded, to_mpf(0, 128), 500)
    assert gp.heuristic_bounded_looking

    growing = AssocPollaczek(PollaczekParams(0, 0, 0))
    with working_precision(128):
        gp0 = derivative_growth(growing, to_mpf(0, 128), 500)
    assert not gp0.heuristic_bounded_looking
    assert gp0.argmax > 250


def test_growth_case2_decay():
    cs = AssocPollaczek(PollaczekParams(0, F(1, 20), 0))
    with working_precision(128):
        gp = derivative_growth(cs, to_mpf(0, 128), 800)
    assert gp.heuristic_bounded_looking


def test_growth_at_endpoint_grows():
    cs = AssocPollaczek(PollaczekParams(0, 0, 0))
    with working_precision(128):
        gp = derivative_growth(cs, to_mpf(1, 128), 300)
    assert not gp.heuristic_bounded_looking
    assert gp.argmax == 300


def test_growth_domain():
    cs = AssocPollaczek(PollaczekParams(0, 0, 0))
    with pytest.raises(DomainError):
        derivative_growth(cs, F(3, 2), 10)


def test_growth_profile_json():
    import json

    cs = AssocPollaczek(PollaczekParams(1, 0, 0))
    gp = derivative_growth(cs, F(0), 40)
    doc = json.loads(gp.as_json())
    assert doc["N"] == 40
    assert doc["heuristic_bounded_looking"] is True
