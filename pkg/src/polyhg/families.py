"""Recurrence coefficient families and their scalar auxiliary functions.

Families produce the (a_n, b_n, c_n) of the normalized three-term recurrence

    P_0 = 1,  P_1 = (x - b_0)/a_0,
    P_1 P_n = a_n P_{n+1} + b_n P_n + c_n P_{n-1}      (n >= 1)

with a_n + b_n + c_n = 1.  Everything is exact (Fraction) when the defining
parameters are rational; square roots switch to mpf at a caller-chosen
precision.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from .scalars import (
    DEFAULT_PRECISION,
    DomainError,
    InvariantViolation,
    Scalar,
    coerce,
    ensure_precision,
    is_exact,
    scalar_cmp,
    scalar_str,
    sqrt_scalar,
    sum_tolerance,
)

HALF = Fraction(1, 2)
_ZERO = Fraction(0)
_ONE = Fraction(1)


class CoefficientSequence:
    """Memoized (a_n, b_n, c_n) triples defining a hypergroup candidate.

    Extension is single-writer (guarded by a lock); an already materialized
    prefix is immutable and may be read concurrently.
    """

    def __init__(self, family: str, params: dict, validate: bool = True):
        self.family = family
        self.params = dict(params)
        self._a: list = []
        self._b: list = []
        self._c: list = []
        self._lock = threading.Lock()
        self._validate = validate

    # subclasses provide the n-th triple; lower indices are already built
    def _triple(self, n: int):
        raise NotImplementedError

    def _ensure(self, n: int) -> None:
        if n < len(self._a):
            return
        with self._lock:
            while len(self._a) <= n:
                m = len(self._a)
                a, b, c = self._triple(m)
                if self._validate:
                    self._check(m, a, b, c)
                self._a.append(a)
                self._b.append(b)
                self._c.append(c)

    def _check(self, n: int, a, b, c) -> None:
        if n == 0:
            ok = a > 0 and b < 1 and c == 0
        else:
            ok = 0 < a < 1 and 0 < c < 1 and 0 <= b < 1
        if not ok:
            raise InvariantViolation(
                f"{self.family}: coefficient triple out of range at n={n}: "
                f"a={scalar_str(a)}, b={scalar_str(b)}, c={scalar_str(c)}"
            )
        s = a + b + c
        if is_exact(s):
            if s != 1:
                raise InvariantViolation(
                    f"{self.family}: a+b+c != 1 at n={n} (got {scalar_str(s)})"
                )
        elif abs(s - 1) > sum_tolerance(mpmath.mp.prec):
            raise InvariantViolation(f"{self.family}: a+b+c drifted at n={n}")

    def a(self, n: int) -> Scalar:
        self._ensure(n)
        return self._a[n]

    def b(self, n: int) -> Scalar:
        self._ensure(n)
        return self._b[n]

    def c(self, n: int) -> Scalar:
        self._ensure(n)
        return self._c[n]

    def triple(self, n: int):
        self._ensure(n)
        return self._a[n], self._b[n], self._c[n]

    @property
    def is_rational(self) -> bool:
        probe = self.a(0), self.b(0), self.a(1), self.c(1)
        return all(is_exact(v) for v in probe)

    def describe(self) -> str:
        ps = ", ".join(f"{k}={scalar_str(v)}" for k, v in self.params.items())
        return f"{self.family}({ps})"


class LittleQLegendre(CoefficientSequence):
    """The q in (0,1) family orthogonal for atoms q^n(1-q) at 1-q^n."""

    def __init__(self, q: Scalar):
        q = coerce(q)
        if not (0 < q < 1):
            raise DomainError(f"q must lie in (0,1), got {scalar_str(q)}")
        super().__init__("qleg", {"q": q})
        self.q = q
        self._qpow = [q ** 0]  # q^n cache

    def _qn(self, n: int) -> Scalar:
        while len(self._qpow) <= n:
            self._qpow.append(self._qpow[-1] * self.q)
        return self._qpow[n]

    def _triple(self, n: int):
        q = self.q
        if n == 0:
            a0 = 1 / (q + 1)
            return a0, 1 - a0, _ZERO
        qn = self._qn(n)
        qn1 = qn * q
        q2n1 = qn * qn1
        a = qn * (1 + q) * (1 - qn1) / ((1 - q2n1) * (1 + qn1))
        c = qn * (1 + q) * (1 - qn) / ((1 - q2n1) * (1 + qn))
        return a, 1 - a - c, c


def little_q_legendre_coeffs(q: Scalar) -> LittleQLegendre:
    return LittleQLegendre(q)


@dataclass(frozen=True)
class PollaczekParams:
    """(alpha, lam, nu) with alpha > -1/2, lam >= 0, nu >= 0."""

    alpha: Scalar
    lam: Scalar
    nu: Scalar

    def __post_init__(self):
        object.__setattr__(self, "alpha", coerce(self.alpha))
        object.__setattr__(self, "lam", coerce(self.lam))
        object.__setattr__(self, "nu", coerce(self.nu))
        if not scalar_cmp(self.alpha, Fraction(-1, 2)) > 0:
            raise DomainError(f"alpha must exceed -1/2, got {scalar_str(self.alpha)}")
        if self.lam < 0:
            raise DomainError(f"lambda must be >= 0, got {scalar_str(self.lam)}")
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {scalar_str(self.nu)}")

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "lambda": self.lam, "nu": self.nu}


def pollaczek_phi(x: Scalar, p: PollaczekParams) -> Scalar:
    """The square-root-free coefficient bound generator on [1, oo)."""
    al, lam, nu = p.alpha, p.lam, p.nu
    x = coerce(x)
    num = (x + nu) * (x + nu + 2 * al)
    den = (2 * x + 2 * nu + 2 * al + 2 * lam + 1) * (2 * x + 2 * nu + 2 * al + 2 * lam - 1)
    return num / den


def pollaczek_phi_complement(x: Scalar, p: PollaczekParams) -> Scalar:
    """1 - phi(x) in its expanded form (used as an exact cross-check)."""
    al, lam, nu = p.alpha, p.lam, p.nu
    x = coerce(x)
    num = (
        (2 * al + 1) * (3 * x + 3 * nu + 2 * al + 4 * lam - 1)
        + 4 * lam * (2 * x + 2 * nu + lam - 1)
        + (3 * x + 3 * nu) * (x + nu - 1)
    )
    den = (2 * x + 2 * nu + 2 * al + 2 * lam + 1) * (2 * x + 2 * nu + 2 * al + 2 * lam - 1)
    return num / den


class AssocPollaczek(CoefficientSequence):
    """Three-parameter symmetric family: b == 0, c_n by forward recursion.

    c_n = phi(n)/(1 - c_{n-1}) with c_0 = 0; the associated-Laguerre ratio
    form is kept as an independent cross-check (`c_from_laguerre`).
    """

    def __init__(self, p: PollaczekParams):
        super().__init__("pollaczek", p.as_dict())
        self.p = p

    def _triple(self, n: int):
        if n == 0:
            return _ONE, _ZERO, _ZERO
        c_prev = self._c[n - 1]
        c = pollaczek_phi(n, self.p) / (1 - c_prev)
        if not (0 < c < 1):
            raise InvariantViolation(
                f"pollaczek c_{n} left (0,1): {scalar_str(c)} (implementation bug)"
            )
        return 1 - c, _ZERO, c

    def c_from_laguerre(self, n: int) -> Scalar:
        """c_n via the associated-Laguerre ratio at -2*lambda (cross-check route)."""
        if n < 1:
            return _ZERO
        al, lam, nu = self.p.alpha, self.p.lam, self.p.nu
        ratio = laguerre_ratio(n, -2 * lam, 2 * al, nu)  # L_{n-1}/L_n
        return (n + nu + 2 * al) / (2 * n + 2 * nu + 2 * al + 2 * lam + 1) * ratio


def assoc_pollaczek_coeffs(p: PollaczekParams) -> AssocPollaczek:
    return AssocPollaczek(p)


def laguerre_eval(n: int, x: Scalar, two_alpha: Scalar, nu: Scalar) -> Scalar:
    """Associated Laguerre value by forward recurrence; exact on rationals."""
    if n < 0:
        raise DomainError("n must be >= 0")
    x, two_alpha, nu = coerce(x), coerce(two_alpha), coerce(nu)
    if n == 0:
        return _ONE
    prev = _ONE
    cur = (-x + 2 * nu + two_alpha + 1) / (nu + 1)
    for k in range(1, n):
        nxt = ((-x + 2 * k + 2 * nu + two_alpha + 1) * cur - (k + nu + two_alpha) * prev) / (
            k + nu + 1
        )
        prev, cur = cur, nxt
    return cur


def laguerre_ratio(n: int, x: Scalar, two_alpha: Scalar, nu: Scalar) -> Scalar:
    """L_{n-1}/L_n for the associated Laguerre family.

    The ratio recursion keeps magnitudes O(1) where raw values grow
    super-exponentially; positivity of every L_k at x <= 0 keeps it
    division-safe there.
    """
    if n < 1:
        raise DomainError("ratio needs n >= 1")
    x, two_alpha, nu = coerce(x), coerce(two_alpha), coerce(nu)
    r = (nu + 1) / (-x + 2 * nu + two_alpha + 1)  # L_0/L_1
    for k in range(1, n):
        denom = (-x + 2 * k + 2 * nu + two_alpha + 1) - (k + nu + two_alpha) * r
        r = (k + nu + 1) / denom
    return r


@dataclass(frozen=True)
class RandomWalkParams:
    """(a, b, nu) with a > 1, b > 0, nu >= 0; tilde picks the one-step variant."""

    a: Scalar
    b: Scalar
    nu: Scalar
    tilde: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", coerce(self.a))
        object.__setattr__(self, "b", coerce(self.b))
        object.__setattr__(self, "nu", coerce(self.nu))
        if not self.a > 1:
            raise DomainError(f"a must exceed 1, got {scalar_str(self.a)}")
        if not self.b > 0:
            raise DomainError(f"b must be positive, got {scalar_str(self.b)}")
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {scalar_str(self.nu)}")

    def omega(self, prec: int = DEFAULT_PRECISION) -> Scalar:
        with ensure_precision(prec):
            return 2 * sqrt_scalar(self.a, prec) / (self.a + 1)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "nu": self.nu, "tilde": self.tilde}


class RandomWalk(CoefficientSequence):
    """Symmetric random-walk family; c_n < 1/(a+1) in both variants."""

    def __init__(self, p: RandomWalkParams):
        super().__init__("random-walk", p.as_dict())
        self.p = p

    def c_tilde(self, n: int) -> Scalar:
        if n == 0:
            return _ZERO
        a, b, nu = self.p.a, self.p.b, self.p.nu
        return (n + nu) / ((a + 1) * (n + nu) + b)

    def _triple(self, n: int):
        if n == 0:
            return _ONE, _ZERO, _ZERO
        if self.p.tilde or self.p.nu == 0:
            # at nu = 0 the two constructions coincide term by term
            c = self.c_tilde(n)
        else:
            a, b, nu = self.p.a, self.p.b, self.p.nu
            if n == 1:
                c = self.c_tilde(1) * (a * nu + b) / ((a + 1) * nu + b)
            else:
                c = self.c_tilde(n) * (1 - self.c_tilde(n - 1)) / (1 - self._c[n - 1])
        return 1 - c, _ZERO, c


def random_walk_coeffs(p: RandomWalkParams) -> RandomWalk:
    return RandomWalk(p)


class SyntheticFamily(CoefficientSequence):
    """Coefficient sequence from explicit callables (tests and probes)."""

    def __init__(self, fn: Callable[[int], tuple], name: str = "custom", validate: bool = True):
        super().__init__(name, {}, validate=validate)
        self._fn = fn

    def _triple(self, n: int):
        return self._fn(n)


# ---------------------------------------------------------------------------
# auxiliary scalar functions of the symmetric three-parameter family
# ---------------------------------------------------------------------------

def aux_eval(name: str, x: Scalar, p: PollaczekParams, prec: int = DEFAULT_PRECISION) -> Scalar:
    """Evaluate one of the named auxiliary functions at x.

    phi, phi_prime, eta, theta are rational (exact on rational inputs);
    iota and xi take square roots and return floats unless the radicand
    happens to be a perfect square.
    """
    al, lam, nu = p.alpha, p.lam, p.nu
    x = coerce(x)
    if name in ("phi", "phi_prime", "eta", "theta", "xi") and x < 1:
        raise DomainError(f"{name} needs x >= 1, got {scalar_str(x)}")
    if name == "iota" and x < 0:
        raise DomainError(f"iota needs x >= 0, got {scalar_str(x)}")

    if name == "phi":
        return pollaczek_phi(x, p)
    if name == "eta":
        return _eta(x, p)
    if name == "theta":
        s = 8 * lam * x + 4 * lam * nu  # = 8*lam*(x + nu/2)
        t = (s + (2 * al + 2 * lam) ** 2 - 1) ** 2
        return t - (1 - (2 * al - 2 * lam) ** 2) * (1 - (2 * al + 2 * lam) ** 2) - 16 * lam ** 2 * nu ** 2
    if name == "phi_prime":
        if lam == 0:
            num = (2 * al + 1) * (2 * al - 1) * (2 * x + 2 * nu + 2 * al)
            den = ((2 * x + 2 * nu + 2 * al + 1) ** 2) * ((2 * x + 2 * nu + 2 * al - 1) ** 2)
            return num / den
        den = 8 * lam * ((2 * x + 2 * nu + 2 * al + 2 * lam + 1) ** 2) * (
            (2 * x + 2 * nu + 2 * al + 2 * lam - 1) ** 2
        )
        return _eta(x, p) / den
    if name == "iota":
        with ensure_precision(prec):
            rad = 8 * lam * x + (2 * al + 2 * lam + 1) ** 2
            root = sqrt_scalar(rad, prec)
            return (1 - root / (2 * x + 2 * al + 2 * lam + 1)) / 2
    if name == "xi":
        phi = pollaczek_phi(x, p)
        if scalar_cmp(phi, Fraction(1, 4)) > 0:
            raise DomainError(
                f"xi needs phi(x) <= 1/4; phi({scalar_str(x)}) = {scalar_str(phi)}"
            )
        with ensure_precision(prec):
            root = sqrt_scalar(1 - 4 * phi, prec)
            return (1 - root) / 2
    raise DomainError(f"unknown auxiliary function {name!r}")


def _eta(x: Scalar, p: PollaczekParams) -> Scalar:
    al, lam, nu = p.alpha, p.lam, p.nu
    return (8 * lam * (x + nu) + (2 * al + 2 * lam) ** 2 - 1) ** 2 - (
        1 - (2 * al - 2 * lam) ** 2
    ) * (1 - (2 * al + 2 * lam) ** 2)


@dataclass
class CriticalPoints:
    """Potential extremum x_*, crossover x_**, and the phi = 1/4 cut x0."""

    x_star: Optional[Scalar]
    x_star_star: Optional[Scalar]
    x0: Optional[Scalar]


def critical_points(p: PollaczekParams, prec: int = DEFAULT_PRECISION) -> CriticalPoints:
    """Closed-form critical abscissas in the small-lambda regime.

    Requires 0 < lambda < -|alpha| + 1/2.  x0 solves phi = 1/4 on [1, x_*)
    by bisection to 2^-64 in x and is absent when x_* <= 1 or phi(1) <= 1/4.
    """
    al, lam, nu = p.alpha, p.lam, p.nu
    if not (lam > 0 and scalar_cmp(lam, -abs(al) + HALF) < 0):
        raise DomainError(
            "critical points require 0 < lambda < -|alpha| + 1/2, got "
            f"lambda={scalar_str(lam)}, alpha={scalar_str(al)}"
        )
    with ensure_precision(prec):
        disc = (1 - (2 * al - 2 * lam) ** 2) * (1 - (2 * al + 2 * lam) ** 2)
        base = 1 - (2 * al + 2 * lam) ** 2
        root = sqrt_scalar(disc, prec)
        x_star = -nu + (base + root) / (8 * lam)
        root2 = sqrt_scalar(disc + 16 * lam ** 2 * nu ** 2, prec)
        x_star_star = -nu / 2 + (base + root2) / (8 * lam)
    if scalar_cmp(x_star_star, x_star) < 0:
        raise InvariantViolation("x_** < x_* should be impossible")

    x0 = None
    quarter = Fraction(1, 4)
    if scalar_cmp(x_star, 1) > 0 and scalar_cmp(pollaczek_phi(1, p), quarter) > 0:
        # phi decreases to below 1/4 before x_* and stays below afterwards,
        # so the first integer with phi <= 1/4 gives an exact bracket.
        j = Fraction(2)
        while scalar_cmp(pollaczek_phi(j, p), quarter) > 0:
            j += 1
        lo, hi = j - 1, j
        tol = Fraction(1, 2 ** 64)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if scalar_cmp(pollaczek_phi(mid, p), quarter) > 0:
                lo = mid
            else:
                hi = mid
        x0 = (lo + hi) / 2
    return CriticalPoints(x_star, x_star_star, x0)


# ---------------------------------------------------------------------------
# the parameter transform tying the symmetric family to random walks
# ---------------------------------------------------------------------------

@dataclass
class TransformBundle:
    """Random-walk parameters and scalars derived from (alpha, lambda, nu)."""

    alpha: Scalar
    lam: Scalar
    nu: Scalar
    a: Scalar
    b: Scalar
    omega: Scalar
    rho: Scalar
    gamma: Scalar
    prec: int = DEFAULT_PRECISION

    def s(self, n: int) -> Scalar:
        al, lam, nu = self.alpha, self.lam, self.nu
        return ((2 * al + 2 * lam + 1) * (n + nu + 2 * al + 1)) / (
            (2 * al + 1) * (2 * n + 2 * nu + 2 * al + 2 * lam + 1)
        )

    def t(self, n: int) -> Scalar:
        return 1 - self.s(n)


def transform_params(
    alpha: Scalar, lam: Scalar, nu: Scalar = _ZERO, prec: int = DEFAULT_PRECISION
) -> TransformBundle:
    """Map (alpha, lambda) with 0 < lambda < alpha + 1/2 to the random-walk side."""
    alpha, lam, nu = coerce(alpha), coerce(lam), coerce(nu)
    if not alpha > Fraction(-1, 2):
        raise DomainError(f"alpha must exceed -1/2, got {scalar_str(alpha)}")
    if not (lam > 0 and scalar_cmp(lam, alpha + HALF) < 0):
        raise DomainError(
            f"need 0 < lambda < alpha + 1/2, got lambda={scalar_str(lam)}, "
            f"alpha={scalar_str(alpha)}"
        )
    if nu < 0:
        raise DomainError(f"nu must be >= 0, got {scalar_str(nu)}")
    with ensure_precision(prec):
        a = (2 * alpha + 2 * lam + 1) / (2 * alpha - 2 * lam + 1)
        b = (2 * alpha + 1) * a
        omega = 2 * sqrt_scalar(a, prec) / (a + 1)
        rho_rad = 1 - (2 * lam / (2 * alpha + 1)) ** 2
        rho = sqrt_scalar(rho_rad, prec)
        gamma = sqrt_scalar((2 * alpha - 2 * lam + 1) / (2 * alpha + 2 * lam + 1), prec)
    return TransformBundle(alpha, lam, nu, a, b, omega, rho, gamma, prec)


# ---------------------------------------------------------------------------
# derived coefficient views (monic / orthonormal)
# ---------------------------------------------------------------------------

class MonicView:
    """Jacobi data of the monic version: shift and product coefficient."""

    mode = "rational"

    def __init__(self, cs: CoefficientSequence):
        self.cs = cs

    def lam(self, n: int) -> Scalar:
        if n < 1:
            raise DomainError("monic product coefficient starts at n = 1")
        a0 = self.cs.a(0)
        if n == 1:
            return a0 * a0 * self.cs.c(1)
        return a0 * a0 * self.cs.c(n) * self.cs.a(n - 1)

    def shift(self, n: int) -> Scalar:
        if n == 0:
            return self.cs.b(0)
        return self.cs.a(0) * self.cs.b(n) + self.cs.b(0)


class OrthonormalView:
    """Jacobi data of the orthonormal version; off-diagonals take square roots.

    Construction from a rational family switches those entries to float
    mode at `prec` bits; the `mode` attribute signals which happened.
    """

    def __init__(self, cs: CoefficientSequence, prec: int = DEFAULT_PRECISION):
        self.cs = cs
        self.prec = prec
        probe = self.offdiag(0)
        self.mode = "rational" if is_exact(probe) else "float"

    def offdiag(self, n: int) -> Scalar:
        with ensure_precision(self.prec):
            a0 = self.cs.a(0)
            if n == 0:
                return a0 * sqrt_scalar(self.cs.c(1), self.prec)
            return a0 * sqrt_scalar(self.cs.c(n + 1) * self.cs.a(n), self.prec)

    def diag(self, n: int) -> Scalar:
        if n == 0:
            return self.cs.b(0)
        return self.cs.a(0) * self.cs.b(n) + self.cs.b(0)


def basis_coefficients(cs: CoefficientSequence, form: str, prec: int = DEFAULT_PRECISION):
    if form == "monic":
        return MonicView(cs)
    if form == "orthonormal":
        return OrthonormalView(cs, prec)
    raise DomainError(f"unknown basis form {form!r}")
