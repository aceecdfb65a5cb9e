"""Pointwise evaluation, characters, the Fourier transform, and the
discrete orthogonality measure of the q-family.

Truncation indices are always caller-supplied and every truncated result
carries a rigorous tail bound; nothing is truncated silently.
"""
from __future__ import annotations

import mpmath

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .families import CoefficientSequence, LittleQLegendre, basis_coefficients
from .hypergroup import HSequence, LinearizationTable
from .scalars import (
    DEFAULT_PRECISION,
    DomainError,
    Scalar,
    coerce,
    ensure_precision,
    is_exact,
    scalar_cmp,
    scalar_str,
    sqrt_scalar,
    to_mpf,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def eval_poly(cs: CoefficientSequence, n: int, x: Scalar, form: str = "normalized") -> Scalar:
    """Evaluate the degree-n polynomial at x in the requested normalization.

    forms: normalized (P_n(1) = 1), orthonormal, monic, derivative (P_n').
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    x = coerce(x)
    if form == "normalized":
        return _eval_sweep(cs, n, x)[0][-1]
    if form == "derivative":
        return _eval_sweep(cs, n, x, derivative=True)[1][-1]
    if form == "orthonormal":
        table = LinearizationTable(cs)
        with ensure_precision(DEFAULT_PRECISION):
            return sqrt_scalar(table.haar(n)) * _eval_sweep(cs, n, x)[0][-1]
    if form == "monic":
        view = basis_coefficients(cs, "monic")
        if n == 0:
            return x ** 0
        prev, cur = x ** 0, x - view.shift(0)
        for j in range(1, n):
            prev, cur = cur, (x - view.shift(j)) * cur - view.lam(j) * prev
        return cur
    raise DomainError(f"unknown form {form!r}")


def _eval_sweep(
    cs: CoefficientSequence, n: int, x: Scalar, derivative: bool = False
) -> Tuple[List[Scalar], Optional[List[Scalar]]]:
    """Forward recurrence returning P_0..P_n at x (and P' values on request)."""
    a0, b0, _ = cs.triple(0)
    if is_exact(x) and not is_exact(a0):
        x = to_mpf(x, mpmath.mp.prec)  # float-mode family leads the arithmetic
    one = x ** 0  # follows the mode of x
    values = [one]
    derivs = [x * 0] if derivative else None
    if n == 0:
        return values, derivs
    p1 = (x - b0) / a0
    values.append(p1)
    if derivative:
        derivs.append(one / a0)
    for j in range(1, n):
        aj, bj, cj = cs.triple(j)
        nxt = ((p1 - bj) * values[j] - cj * values[j - 1]) / aj
        values.append(nxt)
        if derivative:
            dn = (values[j] / a0 + (p1 - bj) * derivs[j] - cj * derivs[j - 1]) / aj
            derivs.append(dn)
    return values, derivs


@dataclass
class Character:
    """Cached evaluations alpha_x(n) = P_n(x) up to a truncation index.

    The |values| <= 1 bound only holds for x in the spectrum; it is checked
    only when the caller asserts membership, and a failure is recorded as a
    witness rather than raised (membership itself is approximate at limit
    points).
    """

    x: Scalar
    K: int
    values: List[Scalar]
    derivs: Optional[List[Scalar]] = None
    bound_violation: Optional[Tuple[int, Scalar]] = None

    def __call__(self, n: int) -> Scalar:
        return self.values[n]

    def as_hsequence(self) -> HSequence:
        return HSequence({k: v for k, v in enumerate(self.values) if v != 0})

    def zero_indices(self) -> List[int]:
        return [k for k, v in enumerate(self.values) if v == 0]


def character(
    cs: CoefficientSequence,
    x: Scalar,
    K: int,
    derivative: bool = False,
    assert_in_spectrum: bool = False,
) -> Character:
    if K < 0:
        raise DomainError("K must be >= 0")
    x = coerce(x)
    values, derivs = _eval_sweep(cs, K, x, derivative=derivative)
    violation = None
    if assert_in_spectrum:
        for n, v in enumerate(values):
            if abs(v) > 1:
                violation = (n, v)
                break
    return Character(x=x, K=K, values=values, derivs=derivs, bound_violation=violation)


def fourier(table: LinearizationTable, f: HSequence, x: Scalar) -> Scalar:
    """The transform value sum_k f(k) P_k(x) h(k) at a single point."""
    if len(f) == 0:
        return _ZERO
    top = max(f.support)
    values, _ = _eval_sweep(table.cs, top, coerce(x))
    acc = _ZERO
    for k, v in f.items():
        acc += v * values[k] * table.haar(k)
    return acc


@dataclass
class DiscreteMeasure:
    """Finitely many atoms plus a declared bound on the truncated tail mass."""

    atoms: List[Tuple[Scalar, Scalar]]
    tail: Scalar

    def total_mass(self) -> Scalar:
        return sum(m for _, m in self.atoms)

    def integrate(self, fn) -> Scalar:
        return sum(fn(x) * m for x, m in self.atoms)


def q_measure(q: Scalar, K: int) -> DiscreteMeasure:
    """Atoms (1 - q^m, q^m (1-q)) for m <= K; geometric tail bound q^{K+1}."""
    q = coerce(q)
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0,1), got {scalar_str(q)}")
    atoms = []
    qm = q ** 0
    for _ in range(K + 1):
        atoms.append((1 - qm, qm * (1 - q)))
        qm *= q
    return DiscreteMeasure(atoms=atoms, tail=qm)


def integrate_poly_power(q: Scalar, n: int, power: int, K: int) -> Tuple[Scalar, Scalar]:
    """Truncated integral of p_n^power against the q-family measure.

    power must be 2 or 4; p_n is the orthonormal version, so the integrand
    is rational (h(n)^{power/2} times a P-power) and the sum is exact for
    rational q.  Returns (value, tail_bound) with the tail controlled by
    |P_n| <= 1 on the spectrum.
    """
    if power not in (2, 4):
        raise DomainError("power must be 2 or 4")
    q = coerce(q)
    cs = LittleQLegendre(q)
    table = LinearizationTable(cs)
    hn = table.haar(n)
    weight = hn if power == 2 else hn * hn
    acc = _ZERO
    qm = q ** 0
    for _ in range(K + 1):
        x = 1 - qm
        pn = _eval_sweep(cs, n, x)[0][-1]
        acc += weight * pn ** power * qm * (1 - q)
        qm *= q
    tail = weight * qm
    return acc, tail


def q_pochhammer(a: Scalar, q: Scalar, k: int) -> Scalar:
    """(a;q)_k = prod_{j=0}^{k-1} (1 - a q^j)."""
    out = _ONE
    term = coerce(a)
    q = coerce(q)
    for _ in range(k):
        out *= 1 - term
        term *= q
    return out


def q_hypergeometric_R(q: Scalar, n: int, x: Scalar) -> Scalar:
    """Terminating basic hypergeometric form of the q-family polynomial.

    Must agree exactly with the recurrence evaluation; the two routes are
    kept independent on purpose.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    q = coerce(q)
    x = coerce(x)
    z = q - q * x
    acc = _ZERO
    zk = _ONE
    for k in range(n + 1):
        num = q_pochhammer(q ** (-n), q, k) * q_pochhammer(q ** (n + 1), q, k)
        den = q_pochhammer(q, q, k) ** 2
        acc += num * zk / den
        zk *= z
    return acc


@dataclass
class SupportInterval:
    """Monotone-limit bracket for the support endpoints 2 sqrt(c(1-c))."""

    premise_ok: bool
    premise_reason: str
    c_at_N: Optional[Scalar]
    c_bracket: Optional[Tuple[Scalar, Scalar]]          # [c(N), 1/2]
    endpoint_bracket: Optional[Tuple[Scalar, Scalar]]   # endpoints at both bracket ends


def support_interval(cs: CoefficientSequence, N: int, prec: int = DEFAULT_PRECISION) -> SupportInterval:
    """Estimate the support interval from a nondecreasing c-sequence.

    Premise (checked on [0, N]): b == 0 and c nondecreasing on [1, N].
    The limit c is bracketed by [c(N), 1/2]; both bracket ends are mapped
    through 2 sqrt(c(1-c)).
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    for n in range(N + 1):
        if cs.b(n) != 0:
            return SupportInterval(False, f"b({n}) != 0", None, None, None)
    for n in range(2, N + 1):
        if cs.c(n) < cs.c(n - 1):
            return SupportInterval(False, f"c({n}) < c({n - 1})", None, None, None)
    cn = cs.c(N)
    if scalar_cmp(cn, Fraction(1, 2)) > 0:
        return SupportInterval(False, f"c({N}) > 1/2", None, None, None)
    half = Fraction(1, 2)
    with ensure_precision(prec):
        lo = 2 * sqrt_scalar(cn * (1 - cn), prec)
        hi = 2 * sqrt_scalar(half * (1 - half), prec)
    return SupportInterval(True, "b == 0, c nondecreasing", cn, (cn, half), (lo, hi))


@dataclass
class LimitSeriesValue:
    """Partial character-limit series value with a rigorous error budget."""

    value: Scalar
    tail_bound: Scalar
    terms: int
    product_cutoff: int
    gammas_decreasing: bool
    gamma0_minus_gamma1: Scalar


def character_limit_series(q: Scalar, terms: int) -> LimitSeriesValue:
    """Alternating series for the diagonal character limit of the q-family.

    Computes (q;q)_J * sum_{k<terms} (-1)^k gamma_k with
    gamma_k = q^{k(3k+1)/2} / (q;q)_k^3, entirely in exact arithmetic, and
    attaches the alternating-tail plus product-truncation error.
    """
    q = coerce(q)
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0,1), got {scalar_str(q)}")
    if terms < 1:
        raise DomainError("need at least one term")

    gammas = []
    poch = _ONE  # (q;q)_k
    qk = _ONE    # q^k
    power = _ONE  # q^{k(3k+1)/2}
    for k in range(terms + 1):
        gammas.append(power / poch ** 3)
        # advance to k+1: exponent increases by 3k+2
        power *= qk ** 3 * q * q
        qk *= q
        poch *= 1 - qk

    # decreasing from the cutoff onward certifies the alternating tail bound
    ratio = gammas[terms] / gammas[terms - 1]
    decreasing_at_cutoff = ratio < 1
    partial = _ZERO
    sign = 1
    for k in range(terms):
        partial += sign * gammas[k]
        sign = -sign

    # truncate the infinite product so its relative error is comparable
    target = gammas[terms]
    J = terms
    qJ1 = q ** (J + 1)
    while qJ1 / (1 - q) > target and J < 4096:
        J += 1
        qJ1 *= q
    prod = q_pochhammer(q, q, J)
    product_rel_err = qJ1 / (1 - q)

    value = prod * partial
    tail = prod * (gammas[terms] + abs(partial) * product_rel_err)
    if not decreasing_at_cutoff:
        # fall back to a crude geometric majorant so the bound stays valid
        tail = prod * (sum(gammas) + abs(partial) * product_rel_err)
    return LimitSeriesValue(
        value=value,
        tail_bound=tail,
        terms=terms,
        product_cutoff=J,
        gammas_decreasing=all(
            gammas[k + 1] < gammas[k] for k in range(len(gammas) - 1)
        ),
        gamma0_minus_gamma1=gammas[0] - gammas[1],
    )


@dataclass
class GrowthProfile:
    """Derivative magnitude sweep; the flag is a heuristic only and must
    never feed a pass/fail decision."""

    N: int
    max_abs: Scalar
    argmax: int
    window_max: Scalar          # max over n in (N/2, N]
    heuristic_bounded_looking: bool

    def as_json(self) -> str:
        import json

        return json.dumps(
            {
                "N": self.N,
                "max_abs": scalar_str(self.max_abs),
                "argmax": self.argmax,
                "window_max": scalar_str(self.window_max),
                "heuristic_bounded_looking": self.heuristic_bounded_looking,
            },
            indent=2,
        )


def derivative_growth(cs: CoefficientSequence, x: Scalar, N: int) -> GrowthProfile:
    """Sweep |P_n'(x)| for n <= N and report where the maximum sits.

    bounded-looking just means the global maximum was attained in the first
    half of the sweep; boundedness is not decidable from finite data.
    """
    x = coerce(x)
    if not (-1 <= x <= 1):
        raise DomainError("x must lie in [-1, 1]")
    _, derivs = _eval_sweep(cs, N, x, derivative=True)
    max_abs = derivs[0] * 0
    argmax = 0
    for n, d in enumerate(derivs):
        ad = abs(d)
        if scalar_cmp(ad, max_abs) > 0:
            max_abs, argmax = ad, n
    window_max = max_abs * 0
    for d in derivs[N // 2 + 1:]:
        if scalar_cmp(abs(d), window_max) > 0:
            window_max = abs(d)
    return GrowthProfile(
        N=N,
        max_abs=max_abs,
        argmax=argmax,
        window_max=window_max,
        heuristic_bounded_looking=argmax <= N // 2,
    )
