"""Chain sequences, parameter sequences, and bounded continued fractions.

A sequence L(1), L(2), ... in (0,1) is a chain sequence when it factors as
L(n) = p(n)(1 - p(n-1)) with parameters p(n) in (0,1), p(0) in [0,1).
Minimal parameters come from the forward recursion seeded at 0; maximal
parameters from a backward recursion with a horizon-doubling convergence
certificate.  The continued-fraction quotes carry explicit containment and
tail-bound data.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

import mpmath

from .families import (
    LittleQLegendre,
    PollaczekParams,
    RandomWalk,
    RandomWalkParams,
    TransformBundle,
    pollaczek_phi,
    transform_params,
)
from .scalars import (
    DEFAULT_PRECISION,
    DomainError,
    Scalar,
    coerce,
    scalar_cmp,
    scalar_str,
    sqrt_scalar,
    to_mpf,
    working_precision,
)
from .spectrum import _eval_sweep

_ZERO = Fraction(0)
_ONE = Fraction(1)
QUARTER = Fraction(1, 4)


class ChainSequenceProbe:
    """A candidate chain sequence Lambda with an optional known factorization."""

    def __init__(
        self,
        generator: Callable[[int], Scalar],
        known_parameters: Optional[Callable[[int], Scalar]] = None,
        name: str = "probe",
    ):
        self._gen = generator
        self.known_parameters = known_parameters
        self.name = name
        self._memo: dict = {}

    def value(self, n: int) -> Scalar:
        if n < 1:
            raise DomainError("chain sequences are indexed from 1")
        v = self._memo.get(n)
        if v is None:
            v = coerce(self._gen(n))
            self._memo[n] = v
        return v

    @classmethod
    def constant(cls, value: Scalar) -> "ChainSequenceProbe":
        value = coerce(value)
        return cls(lambda n: value, name=f"const({scalar_str(value)})")

    @classmethod
    def from_pollaczek(cls, p: PollaczekParams) -> "ChainSequenceProbe":
        return cls(lambda n: pollaczek_phi(n, p), name="pollaczek-phi")


@dataclass
class NonChainWitness:
    index: int
    parameter: Scalar

    def __str__(self):
        return f"parameter left (0,1) at n={self.index}: {scalar_str(self.parameter)}"


@dataclass
class MinimalParameters:
    values: List[Scalar]
    certificate: Optional[NonChainWitness]  # set => NOT a chain sequence on range

    @property
    def ok(self) -> bool:
        return self.certificate is None


def minimal_parameters(probe: ChainSequenceProbe, N: int) -> MinimalParameters:
    """Forward recursion m(0) = 0, m(n) = L(n)/(1 - m(n-1)).

    Escape from (0,1) certifies that L is not a chain sequence on [1, N];
    that outcome is returned as data, not raised.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    values: List[Scalar] = [_ZERO]
    for n in range(1, N + 1):
        lam = probe.value(n)
        if not (0 < lam < 1):
            return MinimalParameters(values, NonChainWitness(n, lam))
        m = lam / (1 - values[-1])
        if not (0 < m < 1):
            return MinimalParameters(values, NonChainWitness(n, m))
        values.append(m)
    return MinimalParameters(values, None)


@dataclass
class MaximalParameters:
    values: List[Scalar]
    horizon: int
    converged: bool
    monotone_nonincreasing: Optional[bool]  # checked when Lambda is nondecreasing


def maximal_parameters(
    probe: ChainSequenceProbe,
    N: int,
    horizon: Optional[int] = None,
    tol: Scalar = Fraction(1, 10 ** 6),
    prec: int = DEFAULT_PRECISION,
    max_horizon: int = 2 ** 20,
) -> MaximalParameters:
    """Backward recursion M(n-1) = 1 - L(n)/M(n) seeded with M(H) = 1.

    The horizon doubles until two successive sweeps agree within tol on
    [0, N]; backward iterates from seed 1 decrease to the maximal sequence,
    so agreement is a genuine convergence certificate.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    H = horizon if horizon is not None else max(2 * N, 16)
    if H < 2 * N:
        raise DomainError("horizon must be at least 2N")
    tol = coerce(tol)

    def sweep(h: int) -> Optional[List[Scalar]]:
        with working_precision(prec):
            one = mpmath.mpf(1)
            m = one
            out_rev = []
            for n in range(h, 0, -1):
                if n <= N + 1:
                    out_rev.append(m)
                m = one - to_mpf(probe.value(n), prec) / m
                if m <= 0:
                    return None  # not a chain sequence at this horizon
            out_rev.append(m)  # M(0)
            out = list(reversed(out_rev))
            return out[: N + 1]

    tol_m = to_mpf(tol, prec)
    prev = sweep(H)
    while True:
        H2 = 2 * H
        if H2 > max_horizon:
            return MaximalParameters(prev or [], H, False, None)
        cur = sweep(H2)
        if prev is not None and cur is not None:
            gap = max(abs(a - b) for a, b in zip(prev, cur))
            if gap < tol_m:
                mono = None
                nondecr = all(
                    scalar_cmp(probe.value(n + 1), probe.value(n)) >= 0
                    for n in range(1, N + 1)
                )
                if nondecr:
                    mono = all(
                        cur[i + 1] <= cur[i] + tol_m for i in range(len(cur) - 1)
                    )
                return MaximalParameters(cur, H2, True, mono)
        prev, H = cur, H2


@dataclass
class CfQuote:
    """A bottom-up continued fraction value with containment and tail data."""

    value: Scalar
    depth: int
    contained: Optional[bool]  # in [2/3, 2]; None when the premise is not checked
    tail_bound: Scalar


def worpitzky_cf(partials, depth: int, prec: int = DEFAULT_PRECISION) -> CfQuote:
    """Evaluate 1/(1 - a1/(1 - a2/(1 - ...))) to the given depth.

    partials is a callable on 1-based indices or a sequence.  When every
    partial numerator lies in (0, 1/4) the value is certified to lie in
    [2/3, 2] and the tail bound prod(4 a_i) applies (each layer contracts
    by at most 4 a_i); otherwise the containment flag is withheld and the
    tail bound is reported as infinite.
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    if callable(partials):
        vals = [coerce(partials(i)) for i in range(1, depth + 1)]
    else:
        vals = [coerce(v) for v in list(partials)[:depth]]
        if len(vals) < depth:
            raise DomainError("not enough partial numerators for requested depth")
    premise = all(a > 0 and scalar_cmp(a, QUARTER) < 0 for a in vals)
    v = _ONE
    for a in reversed(vals):
        v = 1 / (1 - a * v)
    if premise:
        tail = _ONE
        for a in vals:
            tail *= 4 * a
        contained = Fraction(2, 3) <= v <= 2
        return CfQuote(value=v, depth=depth, contained=contained, tail_bound=tail)
    return CfQuote(value=v, depth=depth, contained=None, tail_bound=to_mpf("inf", prec))


def ratio_threshold_index(q: Scalar) -> int:
    """Smallest admissible shift N = ceil(log 4 / log(1/q) - 1) for the
    uniform character ratio bound of the q-family."""
    q = coerce(q)
    # exact integer ceiling: smallest N with q^{N+1} <= 1/4
    N = 0
    power = q
    while scalar_cmp(power, QUARTER) > 0:
        power *= q
        N += 1
    return N


@dataclass
class ABQuantities:
    A: Scalar                 # A_n(k)
    B: Scalar                 # B_n(k)
    A_shifted: Scalar         # A_n(n+k), the quantity bounded below by 4
    threshold: int            # N(q)
    flag_A: Optional[bool]    # A_n(n+k) > 4 (only asserted for k >= N)
    flag_B: Optional[bool]    # B_n(k) > 1/(2q) (only asserted for k >= N)
    B_limit_gap: Scalar       # B_n(k) - 1/q


def ab_quantities(q: Scalar, n: int, k: int) -> ABQuantities:
    """The two comparison quantities controlling character decay.

    A_n(k) = (b_{k+1} - P_1(1-q^n))(b_{k+2} - P_1(1-q^n)) / (a_{k+1} c_{k+2})
    B_n(k) = (b_{n+k+1} - P_1(1-q^n)) q^k / c_{n+k+1}
    """
    if n < 0 or k < 0:
        raise DomainError("indices must be nonnegative")
    q = coerce(q)
    cs = LittleQLegendre(q)
    x = 1 - q ** n
    p1 = (x - cs.b(0)) / cs.a(0)

    def A_at(j: int) -> Scalar:
        return (cs.b(j + 1) - p1) * (cs.b(j + 2) - p1) / (cs.a(j + 1) * cs.c(j + 2))

    A = A_at(k)
    A_shift = A_at(n + k)
    B = (cs.b(n + k + 1) - p1) * q ** k / cs.c(n + k + 1)
    N = ratio_threshold_index(q)
    flag_A = A_shift > 4 if k >= N else None
    flag_B = B > 1 / (2 * q) if k >= N else None
    return ABQuantities(
        A=A,
        B=B,
        A_shifted=A_shift,
        threshold=N,
        flag_A=flag_A,
        flag_B=flag_B,
        B_limit_gap=B - 1 / q,
    )


@dataclass
class RatioBoundEntry:
    k: int
    ratio: Optional[Scalar]   # |alpha(n+k+1)/(alpha(n+k) q^{k+1})|; None at a zero
    ok: bool


@dataclass
class RatioBoundReport:
    n: int
    threshold: int
    entries: List[RatioBoundEntry]
    zero_indices: List[int]          # cached character zeros (skipped, reported)
    envelope_ok: bool
    envelope_worst_margin: Scalar    # min over k of bound - |alpha(n+N+k)|
    all_ratios_ok: bool


def ratio_bound_check(q: Scalar, n: int, k_max: int) -> RatioBoundReport:
    """Uniform ratio bound |alpha(n+k+1)| < 4 q^{k+1} |alpha(n+k)| for k >= N,
    plus the super-geometric envelope it implies; exact in rational mode."""
    q = coerce(q)
    cs = LittleQLegendre(q)
    N = ratio_threshold_index(q)
    x = 1 - q ** n
    top = n + N + k_max + 1
    values = _eval_sweep(cs, top, x)[0]
    entries: List[RatioBoundEntry] = []
    zeros = [j for j, v in enumerate(values) if v == 0]
    all_ok = True
    for k in range(N, k_max + 1):
        va, vb = values[n + k], values[n + k + 1]
        if va == 0:
            entries.append(RatioBoundEntry(k=k, ratio=None, ok=False))
            all_ok = False
            continue
        ratio = abs(vb / (va * q ** (k + 1)))
        ok = ratio < 4
        entries.append(RatioBoundEntry(k=k, ratio=ratio, ok=ok))
        all_ok = all_ok and ok
    env_ok = True
    worst = None
    bound = _ONE
    # |alpha(n+N+k)| <= 4^k q^{(2N+k+1)k/2}: build the bound multiplicatively
    for k in range(0, k_max + 1):
        margin = bound - abs(values[n + N + k])
        if worst is None or margin < worst:
            worst = margin
        if margin < 0:
            env_ok = False
        bound *= 4 * q ** (N + k + 1)
    return RatioBoundReport(
        n=n,
        threshold=N,
        entries=entries,
        zero_indices=zeros,
        envelope_ok=env_ok,
        envelope_worst_margin=worst,
        all_ratios_ok=all_ok,
    )


@dataclass
class PsiReport:
    psi: List[Scalar]                 # psi[0] unused, psi[n] for n >= 1
    bound_margins: List[Scalar]       # psi_n - gamma*(...) for n >= 1
    all_bounds_ok: bool
    product_check_max_err: Scalar     # |S~_n(rho) - prod psi_k| relative


def pollaczek_psi(
    bundle: TransformBundle,
    nu: Optional[Scalar] = None,
    N: int = 100,
    prec: Optional[int] = None,
) -> PsiReport:
    """The decay-comparison sequence psi_1 = rho, psi_{n+1} = (rho psi_n - t_n)/(s_n psi_n).

    Checks the lower bound psi_n >= gamma (2 lam n + 2 lam nu + 2 alpha + 1) /
    (2 lam n + 2 lam nu + 2 alpha - 2 lam + 1) and the product identity
    S~_n(rho) = prod_{k<=n} psi_k against an independent recurrence sweep.
    """
    prec = prec or bundle.prec
    if nu is not None and coerce(nu) != bundle.nu:
        raise DomainError("bundle was built for a different nu")
    al, lam, nu_ = bundle.alpha, bundle.lam, bundle.nu
    with working_precision(prec):
        rho = to_mpf(bundle.rho, prec)
        gamma = to_mpf(bundle.gamma, prec)
        # the bound is attained exactly at n=1 when nu=0; leave room for
        # the two different rounding paths
        floor = -(mpmath.mpf(2) ** (-(prec - 16)))
        psi: List[Scalar] = [_ZERO, rho]
        margins: List[Scalar] = []
        ok = True
        for n in range(1, N + 1):
            bound = gamma * (2 * lam * n + 2 * lam * nu_ + 2 * al + 1) / (
                2 * lam * n + 2 * lam * nu_ + 2 * al - 2 * lam + 1
            )
            margin = psi[n] - bound
            margins.append(margin)
            if margin < floor * bound:
                ok = False
            if n < N:
                if psi[n] <= 0:
                    ok = False
                    break
                psi.append((rho * psi[n] - bundle.t(n)) / (bundle.s(n) * psi[n]))

        # independent product check against the one-step-variant recurrence
        params = RandomWalkParams(bundle.a, bundle.b, nu_, tilde=True)
        cs = RandomWalk(params)
        check_top = min(N, 60)
        values = _eval_sweep(cs, check_top, rho)[0]
        prod = mpmath.mpf(1)
        max_err = mpmath.mpf(0)
        for n in range(1, check_top + 1):
            prod *= psi[n]
            err = abs(values[n] - prod) / abs(values[n])
            if err > max_err:
                max_err = err
    return PsiReport(psi=psi, bound_margins=margins, all_bounds_ok=ok, product_check_max_err=max_err)


@dataclass
class ChiTauReport:
    checked_to: int
    chain_identity_max_err: Scalar   # |chi_n(1-chi_{n-1}) - lambda_n/omega^2|
    chi_le_chi_tilde: bool
    chi_tilde_strictly_increasing: bool
    r_first: Scalar                  # r_n at n = checked_to // 2
    r_last: Scalar                   # r_n at n = checked_to
    cauchy_gap: Scalar               # |r_last - r_first|
    tau_estimate: Scalar


def chi_tau(
    a: Scalar,
    b: Scalar,
    nu: Scalar,
    N: int,
    prec: int = DEFAULT_PRECISION,
) -> ChiTauReport:
    """Parameter sequences chi~, chi of the shared chain sequence lambda_n/omega^2
    and the convergent ratio r_n = S_n(omega)/S~_n(omega).

    The tau estimate is r_N with the Cauchy gap |r_N - r_{N/2}| as its
    convergence evidence.
    """
    if N < 4:
        raise DomainError("N must be >= 4")
    a, b, nu = coerce(a), coerce(b), coerce(nu)
    with working_precision(prec):
        # deep sweeps in exact mode would drag ever-larger rationals along;
        # run the whole probe at fixed precision instead
        am, bm, num = to_mpf(a, prec), to_mpf(b, prec), to_mpf(nu, prec)
        p_tilde = RandomWalkParams(am, bm, num, tilde=True)
        p_plain = RandomWalkParams(am, bm, num, tilde=False)
        omega = to_mpf(p_tilde.omega(prec), prec)
        cs_t = RandomWalk(p_tilde)
        cs_p = RandomWalk(p_plain)
        inv_omega2 = 1 / (omega * omega)

        def chi_stream(cs):
            # chi_n = 1 - a_n^s S_{n+1}(omega) / (omega S_n(omega)), computed
            # alongside the recurrence sweep
            prev = mpmath.mpf(1)
            cur = omega  # S_1
            n = 1
            while True:
                an, _, cn = cs.triple(n)
                nxt = (omega * cur - cn * prev) / an
                yield 1 - an * nxt / (omega * cur)
                prev, cur = cur, nxt
                n += 1

        half = N // 2
        gen_t, gen_p = chi_stream(cs_t), chi_stream(cs_p)
        max_err = mpmath.mpf(0)
        chi_le = True
        strictly_incr = True
        prev_chi_t = None
        prev_chi_p = None
        r_half = None
        # r_n = S_n(omega)/S~_n(omega) = prod_{k<=n} chi~_k/chi_k for n >= 2
        log_r = mpmath.mpf(0)
        r_last = None
        for n in range(1, N + 1):
            ct = next(gen_t)
            cp = next(gen_p)
            if cp > ct + mpmath.mpf(2) ** (-(prec - 16)):
                chi_le = False
            if prev_chi_t is not None:
                if ct <= prev_chi_t:
                    strictly_incr = False
                lam_n = cs_p.c(n) * cs_p.a(n - 1)
                err = abs(cp * (1 - prev_chi_p) - lam_n * inv_omega2)
                if err > max_err:
                    max_err = err
            if n >= 2:
                log_r += mpmath.log(ct) - mpmath.log(cp)
            if n == half:
                r_half = mpmath.exp(log_r)
            prev_chi_t, prev_chi_p = ct, cp
        r_last = mpmath.exp(log_r)
        gap = abs(r_last - r_half)
    return ChiTauReport(
        checked_to=N,
        chain_identity_max_err=max_err,
        chi_le_chi_tilde=chi_le,
        chi_tilde_strictly_increasing=strictly_incr,
        r_first=r_half,
        r_last=r_last,
        cauchy_gap=gap,
        tau_estimate=r_last,
    )


@dataclass
class ClaimsReport:
    odd_derivative_ok: bool            # a^n |S'_{2n+1}(0)| <= 2n+1
    odd_derivative_worst_margin: Scalar
    even_derivative_zero: bool         # S'_{2n}(0) == 0 identically
    growth_ok: bool                    # S~_n(rho) >= gamma^n (2 lam n + ...)/(...)
    growth_worst_margin: Scalar
    case1_applicable: bool             # lam >= threshold for the quarter bound
    case1_ok: Optional[bool]
    case1_worst_margin: Optional[Scalar]


def pollaczek_claims_ab(
    alpha: Scalar,
    lam: Scalar,
    nu: Scalar,
    N_deriv: int = 200,
    N_growth: int = 500,
    N_case1: int = 1000,
    prec: int = DEFAULT_PRECISION,
) -> ClaimsReport:
    """Numeric checks of the decay/growth claims behind the derivative
    boundedness argument, plus the small-product regime test.

    Case-1 threshold: lam >= -alpha - nu - 1 + sqrt(4(nu+1)(2 alpha + nu + 1) + 1)/2
    makes c_n a_{n-1} <= 1/4 for all n.
    """
    alpha, lam, nu = coerce(alpha), coerce(lam), coerce(nu)
    bundle = transform_params(alpha, lam, nu, prec)
    with working_precision(prec):
        a = to_mpf(bundle.a, prec)
        am, bm, num = a, to_mpf(bundle.b, prec), to_mpf(nu, prec)
        rho = to_mpf(bundle.rho, prec)
        gamma = to_mpf(bundle.gamma, prec)
        # derivative claim on the plain variant at the origin
        cs_p = RandomWalk(RandomWalkParams(am, bm, num, tilde=False))
        values, derivs = _eval_sweep(cs_p, 2 * N_deriv + 1, to_mpf(0, prec), derivative=True)
        even_zero = all(derivs[2 * n] == 0 for n in range(N_deriv + 1))
        worst_odd = None
        odd_ok = True
        apow = mpmath.mpf(1)
        for n in range(N_deriv + 1):
            margin = (2 * n + 1) - apow * abs(derivs[2 * n + 1])
            if worst_odd is None or margin < worst_odd:
                worst_odd = margin
            if margin < 0:
                odd_ok = False
            apow *= a

        # growth claim on the one-step variant at rho
        cs_t = RandomWalk(RandomWalkParams(am, bm, num, tilde=True))
        tvalues = _eval_sweep(cs_t, N_growth, rho)[0]
        growth_ok = True
        worst_growth = None
        gpow = mpmath.mpf(1)
        denom0 = 2 * lam * nu + 2 * alpha + 1
        floor = -(mpmath.mpf(2) ** (-(prec - 16)))  # equality at n=1 when nu=0
        for n in range(1, N_growth + 1):
            gpow *= gamma
            bound = gpow * (2 * lam * n + 2 * lam * nu + 2 * alpha + 1) / denom0
            rel = (tvalues[n] - bound) / bound
            if worst_growth is None or rel < worst_growth:
                worst_growth = rel
            if rel < floor:
                growth_ok = False

    # quarter-bound regime, exact when the parameters are rational
    thresh_rad = 4 * (nu + 1) * (2 * alpha + nu + 1) + 1
    threshold = -alpha - nu - 1 + sqrt_scalar(thresh_rad, prec) / 2
    applicable = scalar_cmp(lam, threshold) >= 0
    case1_ok = None
    case1_margin = None
    if applicable:
        p = PollaczekParams(alpha, lam, nu)
        case1_ok = True
        for n in range(1, N_case1 + 1):
            margin = QUARTER - pollaczek_phi(n, p)
            if case1_margin is None or margin < case1_margin:
                case1_margin = margin
            if margin < 0:
                case1_ok = False
    return ClaimsReport(
        odd_derivative_ok=odd_ok,
        odd_derivative_worst_margin=worst_odd,
        even_derivative_zero=even_zero,
        growth_ok=growth_ok,
        growth_worst_margin=worst_growth,
        case1_applicable=applicable,
        case1_ok=case1_ok,
        case1_worst_margin=case1_margin,
    )
