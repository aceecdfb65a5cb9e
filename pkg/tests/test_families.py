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
    aux_eval,
    basis_coefficients,
    critical_points,
    laguerre_eval,
    laguerre_ratio,
    pollaczek_phi,
    pollaczek_phi_complement,
    transform_params,
)
from polyhg.scalars import (
    DomainError,
    InvariantViolation,
    mpf_to_fraction,
    scalar_cmp,
    working_precision,
)


# --- little q-Legendre -------------------------------------------------------

def test_qleg_first_coefficients():
    cs = LittleQLegendre(F(1, 2))
    assert cs.a(0) == F(2, 3)
    assert cs.b(0) == F(1, 3)
    assert cs.c(1) == F(2, 7)
    assert cs.a(1) == F(18, 35)
    assert cs.b(1) == F(1, 5)


def test_qleg_b1_closed_form_crosscheck():
    q = F(1, 2)
    cs = LittleQLegendre(q)
    assert cs.b(1) == (1 - q) * (1 - q ** 2) / ((1 + q) * (1 + q ** 2))


@pytest.mark.parametrize("q", [F(1, 4), F(1, 2), F(3, 4)])
def test_qleg_sum_to_one_and_ranges(q):
    cs = LittleQLegendre(q)
    for n in range(201):
        a, b, c = cs.triple(n)
        assert a + b + c == 1
        if n >= 1:
            assert 0 < a < 1 and 0 < c < 1 and 0 <= b < 1


def test_qleg_domain():
    with pytest.raises(DomainError):
        LittleQLegendre(F(3, 2))
    with pytest.raises(DomainError):
        LittleQLegendre(F(0))


# --- associated symmetric Pollaczek -----------------------------------------

def test_ultraspherical_closed_form():
    cs = AssocPollaczek(PollaczekParams(0, 0, 0))
    for n in range(1, 60):
        assert cs.c(n) == F(n, 2 * n + 1)


def test_pollaczek_quarter_examples():
    cs = AssocPollaczek(PollaczekParams(0, F(1, 4), 0))
    assert cs.c(0) == 0
    assert cs.c(1) == F(4, 21)
    assert cs.c(2) == F(48, 187)


GRID_ALPHA = [F(-2, 5), F(-1, 4), F(0), F(1, 2), F(1), F(2)]
GRID_LAM = [F(0), F(1, 10), F(3, 10), F(1), F(5)]
GRID_NU = [F(0), F(1, 2), F(1), F(3)]


@pytest.mark.parametrize("alpha", GRID_ALPHA)
@pytest.mark.parametrize("lam", [F(0), F(3, 10), F(5)])
@pytest.mark.parametrize("nu", [F(0), F(1)])
def test_pollaczek_recursion_vs_laguerre_ratio(alpha, lam, nu):
    p = PollaczekParams(alpha, lam, nu)
    cs = AssocPollaczek(p)
    for n in (1, 2, 7, 25):
        assert cs.c(n) == cs.c_from_laguerre(n)


def test_pollaczek_param_validation():
    with pytest.raises(DomainError):
        PollaczekParams(F(-1, 2), 0, 0)
    with pytest.raises(DomainError):
        PollaczekParams(0, F(-1), 0)
    with pytest.raises(DomainError):
        PollaczekParams(0, 0, F(-1, 3))


# --- associated Laguerre -----------------------------------------------------

def test_laguerre_seed_and_point_values():
    assert laguerre_eval(0, F(5), F(3), F(2)) == 1
    assert laguerre_eval(1, F(-1, 2), 0, 0) == F(3, 2)
    for n in range(21):
        assert laguerre_eval(n, 0, 0, 0) == 1


def test_laguerre_zero_ratio_identity():
    # L_n(0)/L_{n-1}(0) = (n + 2a)/n for the plain (nu = 0) family
    two_alpha = F(3, 2)
    for n in range(1, 30):
        ratio = laguerre_eval(n, 0, two_alpha, 0) / laguerre_eval(n - 1, 0, two_alpha, 0)
        assert ratio == (n + two_alpha) / F(n)


def test_laguerre_ratio_matches_direct():
    x, two_alpha, nu = F(-1, 2), F(1, 3), F(2, 7)
    for n in range(1, 40):
        direct = laguerre_eval(n - 1, x, two_alpha, nu) / laguerre_eval(n, x, two_alpha, nu)
        assert laguerre_ratio(n, x, two_alpha, nu) == direct


# --- random walk -------------------------------------------------------------

def test_random_walk_tilde_example():
    rw = RandomWalk(RandomWalkParams(3, F(9, 2), 0, tilde=True))
    assert rw.c(1) == F(2, 17)


def test_random_walk_variants_coincide_at_nu_zero():
    pt = RandomWalkParams(3, F(9, 2), 0, tilde=True)
    pp = RandomWalkParams(3, F(9, 2), 0, tilde=False)
    t, p = RandomWalk(pt), RandomWalk(pp)
    for n in range(40):
        assert t.c(n) == p.c(n)


@pytest.mark.parametrize("params", [
    RandomWalkParams(3, F(9, 2), F(1)),
    RandomWalkParams(F(3, 2), F(1, 3), F(5, 2)),
    RandomWalkParams(F(7), F(4), F(0)),
])
def test_random_walk_domination_and_cap(params):
    tilde = RandomWalk(RandomWalkParams(params.a, params.b, params.nu, tilde=True))
    plain = RandomWalk(RandomWalkParams(params.a, params.b, params.nu, tilde=False))
    cap = 1 / (params.a + 1)
    for n in range(1, 101):
        assert plain.c(n) <= tilde.c(n) < cap


def test_random_walk_validation():
    with pytest.raises(DomainError):
        RandomWalkParams(1, F(1), 0)
    with pytest.raises(DomainError):
        RandomWalkParams(2, 0, 0)


# --- auxiliary functions -----------------------------------------------------

def test_phi_values():
    assert pollaczek_phi(1, PollaczekParams(0, 0, 0)) == F(1, 3)
    assert pollaczek_phi(1, PollaczekParams(0, F(1, 4), 0)) == F(4, 21)


@pytest.mark.parametrize("alpha", GRID_ALPHA)
@pytest.mark.parametrize("lam", GRID_LAM)
def test_phi_two_forms_agree_exactly(alpha, lam):
    p = PollaczekParams(alpha, lam, F(1, 2))
    for x in (F(1), F(7, 2), F(100), F(1000)):
        phi = pollaczek_phi(x, p)
        assert 0 < phi < 1
        assert phi == 1 - pollaczek_phi_complement(x, p)


@pytest.mark.parametrize("alpha", GRID_ALPHA)
@pytest.mark.parametrize("nu", GRID_NU)
def test_phi_dominated_by_lambda_zero(alpha, nu):
    base = PollaczekParams(alpha, 0, nu)
    for lam in (F(1, 10), F(1), F(5)):
        p = PollaczekParams(alpha, lam, nu)
        for x in (F(1), F(3), F(50), F(1000)):
            assert pollaczek_phi(x, p) <= pollaczek_phi(x, base)


def test_iota_example():
    p = PollaczekParams(0, F(1, 4), 0)
    v = aux_eval("iota", 1, p)
    with working_precision(256):
        expect = (1 - mpmath.sqrt(17) / 7) / 2
        assert abs(v - expect) < mpmath.mpf(2) ** -200


def test_xi_needs_small_phi():
    p = PollaczekParams(0, 0, 0)  # phi(1) = 1/3 > 1/4
    with pytest.raises(DomainError):
        aux_eval("xi", 1, p)


def test_aux_domain_errors():
    p = PollaczekParams(0, F(1, 4), 0)
    with pytest.raises(DomainError):
        aux_eval("phi", F(1, 2), p)
    with pytest.raises(DomainError):
        aux_eval("iota", F(-1), p)
    with pytest.raises(DomainError):
        aux_eval("nope", 1, p)


# --- critical points ----------------------------------------------------------

def test_critical_points_exact_example():
    cp = critical_points(PollaczekParams(0, F(1, 8), 0))
    assert cp.x_star == F(15, 8)
    assert cp.x_star_star == F(15, 8)  # nu = 0 forces equality
    assert cp.x0 is None  # phi(1) = 16/65 < 1/4


def test_critical_points_zero_of_eta_theta():
    p = PollaczekParams(F(1, 10), F(1, 20), F(1))
    cp = critical_points(p)
    with working_precision(256):
        eta_at_star = aux_eval("eta", cp.x_star, p)
        theta_at_star2 = aux_eval("theta", cp.x_star_star, p)
        tol = F(1, 10 ** 20)  # stated float tolerance at 256 bits
        assert scalar_cmp(abs(eta_at_star), tol) < 0
        assert scalar_cmp(abs(theta_at_star2), tol) < 0
        assert scalar_cmp(cp.x_star_star, cp.x_star) >= 0
        assert scalar_cmp(cp.x_star, 0) > 0


def test_critical_points_x0_bisection():
    # small lambda keeps phi above 1/4 for a long initial stretch
    p = PollaczekParams(0, F(1, 100), 0)
    cp = critical_points(p)
    assert cp.x0 is not None
    assert pollaczek_phi(cp.x0 + F(1, 2 ** 32), p) <= F(1, 4)
    assert pollaczek_phi(cp.x0 - F(1, 2 ** 32), p) > F(1, 4)
    assert cp.x0 < cp.x_star


def test_critical_points_regime_errors():
    with pytest.raises(DomainError):
        critical_points(PollaczekParams(0, 0, 0))
    with pytest.raises(DomainError):
        critical_points(PollaczekParams(0, F(1, 2), 0))
    with pytest.raises(DomainError):
        critical_points(PollaczekParams(F(1, 4), F(3, 10), 0))


# --- transform ----------------------------------------------------------------

def test_transform_quarter_point():
    tb = transform_params(0, F(1, 4))
    assert tb.a == 3
    assert tb.b == 3
    with working_precision(256):
        root3 = mpmath.sqrt(3)
        assert abs(tb.omega - root3 / 2) < mpmath.mpf(2) ** -200
        assert abs(tb.rho - root3 / 2) < mpmath.mpf(2) ** -200
        assert abs(tb.gamma - 1 / root3) < mpmath.mpf(2) ** -200
    assert tb.s(1) == F(6, 7)
    assert tb.t(1) == F(1, 7)


@pytest.mark.parametrize("alpha,lam", [
    (F(0), F(1, 4)), (F(1, 2), F(1, 2)), (F(2), F(9, 4)), (F(-1, 4), F(1, 5)),
])
def test_transform_omega_equals_rho_and_partition(alpha, lam):
    tb = transform_params(alpha, lam, F(1, 3))
    assert scalar_cmp(abs(tb.omega - tb.rho), F(1, 2 ** 200)) < 0
    for n in range(1, 101):
        assert tb.s(n) + tb.t(n) == 1
        assert 0 < tb.s(n) < 1


def test_transform_domain():
    with pytest.raises(DomainError):
        transform_params(0, 0)
    with pytest.raises(DomainError):
        transform_params(0, F(1, 2))


# --- basis views ----------------------------------------------------------------

def test_monic_view_qleg():
    cs = LittleQLegendre(F(1, 2))
    mv = basis_coefficients(cs, "monic")
    assert mv.lam(1) == F(8, 63)
    assert mv.shift(0) == F(1, 3)


def test_monic_view_symmetric_shift_zero():
    cs = AssocPollaczek(PollaczekParams(0, 0, 0))
    mv = basis_coefficients(cs, "monic")
    for n in range(30):
        assert mv.shift(n) == 0


@pytest.mark.parametrize("alpha,lam,nu", [
    (F(0), F(1, 4), F(0)), (F(1), F(3, 10), F(1, 2)), (F(-1, 4), F(0), F(3)),
])
def test_monic_lam_matches_phi(alpha, lam, nu):
    p = PollaczekParams(alpha, lam, nu)
    cs = AssocPollaczek(p)
    mv = basis_coefficients(cs, "monic")
    for n in range(1, 51):
        assert mv.lam(n) == pollaczek_phi(n, p)


def test_orthonormal_view_signals_mode():
    cs = LittleQLegendre(F(1, 2))
    ov = basis_coefficients(cs, "orthonormal")
    assert ov.mode == "float"  # sqrt(2/7) is irrational
    got = mpf_to_fraction(ov.offdiag(0)) ** 2
    assert abs(got - F(4, 9) * F(2, 7)) < F(1, 2 ** 240)


def test_synthetic_family_invariant_violation():
    def corrupt(n):
        if n == 0:
            return F(1), F(0), F(0)
        if n == 1:
            return F(11, 10), F(-1, 10), F(0)  # b_1 < 0
        return F(1, 2), F(0), F(1, 2)

    cs = SyntheticFamily(corrupt, "corrupt")
    with pytest.raises(InvariantViolation):
        cs.b(1)
