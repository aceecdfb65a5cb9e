"""Linearization coefficients, Haar weights, translation, convolution.

The table below expands products P_m P_n = sum_k g(m,n;k) P_k exactly by
induction on the smaller index:

    g(0,n;.) = unit at n
    g(1,n;.) = multiply-by-P_1 applied to the unit at n
    g(m+1,n;.) = [P_1 * g(m,n;.) - b_m g(m,n;.) - c_m g(m-1,n;.)] / a_m   (m >= 1)

where multiply-by-P_1 sends the unit at k >= 1 to (c_k, b_k, a_k) at
(k-1, k, k+1) and the unit at 0 to the unit at 1.  No quadrature, no
measure: the construction is exact in rational mode.
"""
from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .families import CoefficientSequence, LittleQLegendre
from .scalars import (
    DomainError,
    InvariantViolation,
    Scalar,
    coerce,
    is_exact,
    scalar_cmp,
    scalar_str,
)

_ZERO = Fraction(0)


class HSequence:
    """Finitely supported function on the nonnegative integers.

    Stored values are nonzero; everything off the support is zero.
    """

    __slots__ = ("_data",)

    def __init__(self, data: Dict[int, Scalar]):
        clean = {}
        for k, v in data.items():
            if k < 0:
                raise DomainError(f"negative index {k} in sequence support")
            if v != 0:
                clean[int(k)] = v
        self._data = clean

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, Scalar]]) -> "HSequence":
        return cls(dict(pairs))

    @classmethod
    def unit(cls, n: int, value: Scalar = Fraction(1)) -> "HSequence":
        return cls({n: value})

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._data))

    def __call__(self, n: int) -> Scalar:
        return self._data.get(n, _ZERO)

    def items(self):
        return sorted(self._data.items())

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if not isinstance(other, HSequence):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: "HSequence") -> "HSequence":
        data = dict(self._data)
        for k, v in other._data.items():
            data[k] = data.get(k, _ZERO) + v
        return HSequence(data)

    def __sub__(self, other: "HSequence") -> "HSequence":
        data = dict(self._data)
        for k, v in other._data.items():
            data[k] = data.get(k, _ZERO) - v
        return HSequence(data)

    def scale(self, factor: Scalar) -> "HSequence":
        if factor == 0:
            return HSequence({})
        return HSequence({k: v * factor for k, v in self._data.items()})

    def __repr__(self):
        body = ", ".join(f"{k}: {scalar_str(v)}" for k, v in self.items())
        return f"HSequence({{{body}}})"


@dataclass
class Norms:
    l1: Scalar
    l2sq: Scalar
    linf: Scalar


@dataclass
class PropertyPReport:
    """Result of a full nonnegativity scan of the linearization table."""

    scanned: int
    min_coefficient: Scalar
    min_witness: Tuple[int, int, int]
    first_violation: Optional[Tuple[int, int, int, Scalar]]
    max_sum_residual: Scalar
    edge_zero_witness: Optional[Tuple[int, int, int]]  # vanishing band edge, if any
    szwarc_premise: bool          # b == 0, c nondecreasing, c <= 1/2 on [1, N]
    szwarc_premise_reason: str
    small_product_premise: bool   # c_n a_{n-1} <= 1/4 on [1, N]
    small_product_note: str

    @property
    def holds(self) -> bool:
        return self.first_violation is None and self.edge_zero_witness is None


class LinearizationTable:
    """Memoized g(m,n;.) rows plus Haar weights for one coefficient family.

    Rows are keyed on (min(m,n), max(m,n)) and built in increasing first
    index so each lift reuses the previous one.  Already-built cells may be
    read concurrently; building takes the table lock.
    """

    def __init__(self, cs: CoefficientSequence, debug: bool = False):
        self.cs = cs
        self.debug = debug
        self._rows: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
        self._haar: List[Scalar] = [Fraction(1)]
        self._lock = threading.Lock()

    # -- rows ---------------------------------------------------------------

    def _apply_p1(self, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
        cs = self.cs
        out: Dict[int, Scalar] = {}
        for k, v in vec.items():
            if k == 0:
                out[1] = out.get(1, _ZERO) + v
                continue
            a, b, c = cs.triple(k)
            out[k - 1] = out.get(k - 1, _ZERO) + v * c
            if b != 0:
                out[k] = out.get(k, _ZERO) + v * b
            out[k + 1] = out.get(k + 1, _ZERO) + v * a
    # zero entries produced by cancellation are pruned by the caller
        return out

    def _build_row(self, m: int, n: int) -> Dict[int, Scalar]:
        # assumes m <= n and all rows (j, n) for j < m are present
        if m == 0:
            return {n: Fraction(1)}
        if m == 1:
            return self._apply_p1({n: Fraction(1)})
        prev = self._rows[(m - 2, n)]
        cur = self._rows[(m - 1, n)]
        am, bm, cm = self.cs.triple(m - 1)
        nxt = self._apply_p1(cur)
        if bm != 0:
            for k, v in cur.items():
                nxt[k] = nxt.get(k, _ZERO) - bm * v
        for k, v in prev.items():
            nxt[k] = nxt.get(k, _ZERO) - cm * v
        lo, hi = n - m, n + m
        out = {}
        for k, v in nxt.items():
            v = v / am
            if v != 0:
                if k < lo or k > hi:
                    raise InvariantViolation(
                        f"nonzero linearization mass outside [{lo},{hi}] at "
                        f"(m={m}, n={n}, k={k}): {scalar_str(v)}"
                    )
                out[k] = v
        return out

    def _ensure_row(self, m: int, n: int) -> Dict[int, Scalar]:
        key = (m, n)
        row = self._rows.get(key)
        if row is not None:
            return row
        with self._lock:
            for j in range(0, m + 1):
                if (j, n) not in self._rows:
                    self._rows[(j, n)] = self._build_row(j, n)
            return self._rows[key]

    def linearize(self, m: int, n: int) -> List[Scalar]:
        """The vector g(m,n;k) for k in [|m-n|, m+n]."""
        if m < 0 or n < 0:
            raise DomainError("indices must be nonnegative")
        m, n = min(m, n), max(m, n)
        row = self._ensure_row(m, n)
        return [row.get(k, _ZERO) for k in range(n - m, n + m + 1)]

    def g(self, m: int, n: int, k: int) -> Scalar:
        if m < 0 or n < 0 or k < 0:
            raise DomainError("indices must be nonnegative")
        mm, nn = min(m, n), max(m, n)
        if k < nn - mm or k > nn + mm:
            return _ZERO
        return self._ensure_row(mm, nn).get(k, _ZERO)

    def sum_row(self, m: int, n: int) -> Scalar:
        return sum(self._ensure_row(min(m, n), max(m, n)).values())

    # -- Haar weights ---------------------------------------------------------

    def haar(self, n: int) -> Scalar:
        """h(n) by the ratio recursion h(n+1) = (a_n / c_{n+1}) h(n), h(0) = 1.

        With debug enabled, each value is checked against 1/g(n,n;0).
        """
        if n < 0:
            raise DomainError("n must be >= 0")
        while len(self._haar) <= n:
            j = len(self._haar)
            if j == 1:
                self._haar.append(1 / self.cs.c(1))
            else:
                self._haar.append(self._haar[-1] * self.cs.a(j - 1) / self.cs.c(j))
        value = self._haar[n]
        if self.debug:
            product = value * self.g(n, n, 0)
            bad = product != 1 if is_exact(product) else abs(product - 1) > Fraction(1, 10 ** 30)
            if bad:
                raise InvariantViolation(
                    f"h({n}) * g({n},{n};0) != 1: {scalar_str(product)}"
                )
        return value

    def epsilon(self, n: int) -> HSequence:
        """The n-th convolution unit: delta_n / h(n)."""
        return HSequence({n: 1 / self.haar(n)})

    # -- hypergroup operations -------------------------------------------------

    def translate(self, f: HSequence, n: int) -> HSequence:
        """(T_n f)(m) = sum_k g(m,n;k) f(k)."""
        if len(f) == 0:
            return f
        lo = max(0, min(f.support) - n)
        hi = max(f.support) + n
        data = {}
        for m in range(lo, hi + 1):
            acc = _ZERO
            for k, v in f.items():
                acc += self.g(m, n, k) * v
            if acc != 0:
                data[m] = acc
        return HSequence(data)

    def convolve(self, f: HSequence, g: HSequence) -> HSequence:
        """(f * g)(n) = sum_k (T_n f)(k) g(k) h(k)."""
        if len(f) == 0 or len(g) == 0:
            return HSequence({})
        hi = max(f.support) + max(g.support)
        data = {}
        for n in range(0, hi + 1):
            tf = self.translate(f, n)
            acc = _ZERO
            for k, v in g.items():
                acc += tf(k) * v * self.haar(k)
            if acc != 0:
                data[n] = acc
        out = HSequence(data)
        if self.debug:
            nf, ng, no = self.norms(f), self.norms(g), self.norms(out)
            if no.l1 > nf.l1 * ng.l1 * (1 + Fraction(1, 10 ** 12)):
                raise InvariantViolation("convolution broke the l1 submultiplicativity bound")
        return out

    def norms(self, f: HSequence) -> Norms:
        l1 = _ZERO
        l2sq = _ZERO
        linf = _ZERO
        for k, v in f.items():
            av = abs(v)
            l1 += av * self.haar(k)
            l2sq += av * av * self.haar(k)
            if scalar_cmp(av, linf) > 0:
                linf = av
        return Norms(l1, l2sq, linf)

    # -- derivative expansions ---------------------------------------------------

    def monomial_coeffs(self, n: int) -> List[Scalar]:
        """Exact monomial coefficients of P_n (ascending powers)."""
        polys = getattr(self, "_monomials", None)
        if polys is None:
            polys = self._monomials = [[Fraction(1)]]
        while len(polys) <= n:
            j = len(polys)
            if j == 1:
                a0, b0, _ = self.cs.triple(0)
                polys.append([-b0 / a0, 1 / a0])
            else:
                # P_{j} = ((x - b_0)/a_0 - b_{j-1}) P_{j-1}/a_{j-1} - c_{j-1} P_{j-2}/a_{j-1}
                a0, b0, _ = self.cs.triple(0)
                aj, bj, cj = self.cs.triple(j - 1)
                p1 = polys[j - 1]
                p2 = polys[j - 2]
                out = [_ZERO] * (j + 1)
                for d, coef in enumerate(p1):
                    out[d + 1] += coef / a0
                    out[d] += coef * (-b0 / a0 - bj)
                for d, coef in enumerate(p2):
                    out[d] -= cj * coef
                polys.append([v / aj for v in out])
        return polys[n]

    def to_poly_basis(self, mono: List[Scalar]) -> List[Scalar]:
        """Convert ascending monomial coefficients to P-basis coefficients."""
        work = list(mono)
        while work and work[-1] == 0:
            work.pop()
        out = [_ZERO] * len(work)
        for d in range(len(work) - 1, -1, -1):
            lead = self.monomial_coeffs(d)[d]
            coef = work[d] / lead
            out[d] = coef
            if coef != 0:
                for i, v in enumerate(self.monomial_coeffs(d)):
                    work[i] -= coef * v
            work.pop()
        return out

    def kappa(self, n: int) -> HSequence:
        """Coefficients of the derivative expansion P_n' = sum_k kappa_n(k) P_k h(k).

        Exact for rational coefficient families; kappa_0 = 0 and kappa_n
        vanishes from index n on.  Rational coefficient bit-growth makes
        n beyond ~64 impractical in exact mode; use float families there.
        """
        if n == 0:
            return HSequence({})
        mono = self.monomial_coeffs(n)
        deriv = [d * mono[d] for d in range(1, len(mono))]
        coeffs = self.to_poly_basis(deriv)
        return HSequence({k: v / self.haar(k) for k, v in enumerate(coeffs) if v != 0})

    # -- scans and identities ----------------------------------------------------

    def property_p_check(self, N: int) -> PropertyPReport:
        """Scan all m <= n <= N for negative linearization coefficients."""
        if N < 1:
            raise DomainError("N must be >= 1")
        min_val = None
        min_wit = None
        first_violation = None
        edge_zero = None
        max_residual = _ZERO
        for n in range(N + 1):
            for m in range(n + 1):
                row = self._ensure_row(m, n)
                s = sum(row.values())
                residual = abs(s - 1)
                if scalar_cmp(residual, max_residual) > 0:
                    max_residual = residual
                if edge_zero is None:
                    for edge in (n - m, n + m):
                        if row.get(edge, _ZERO) == 0:
                            edge_zero = (m, n, edge)
                            break
                for k in sorted(row):
                    v = row[k]
                    if min_val is None or scalar_cmp(v, min_val) < 0:
                        min_val, min_wit = v, (m, n, k)
                    if v < 0 and first_violation is None:
                        first_violation = (m, n, k, v)
        szwarc, reason = self._szwarc_premise(N)
        small, note = self._small_product_premise(N)
        return PropertyPReport(
            scanned=N,
            min_coefficient=min_val,
            min_witness=min_wit,
            first_violation=first_violation,
            max_sum_residual=max_residual,
            edge_zero_witness=edge_zero,
            szwarc_premise=szwarc,
            szwarc_premise_reason=reason,
            small_product_premise=small,
            small_product_note=note,
        )

    def _szwarc_premise(self, N: int) -> Tuple[bool, str]:
        cs = self.cs
        for n in range(1, N + 1):
            if cs.b(n) != 0:
                return False, f"b({n}) != 0"
            if cs.c(n) > Fraction(1, 2):
                return False, f"c({n}) > 1/2"
            if n > 1 and cs.c(n) < cs.c(n - 1):
                return False, f"c({n}) < c({n - 1})"
        if cs.b(0) != 0:
            return False, "b(0) != 0"
        return True, "b == 0, c nondecreasing, c <= 1/2 on scanned range"

    def _small_product_premise(self, N: int) -> Tuple[bool, str]:
        cs = self.cs
        for n in range(1, N + 1):
            if cs.c(n) * cs.a(n - 1) > Fraction(1, 4):
                return False, f"c({n})*a({n - 1}) > 1/4"
        return (
            True,
            "c_n a_{n-1} <= 1/4 throughout: bounded point derivations exist "
            "at every interior spectral point",
        )

    # -- exports --------------------------------------------------------------

    def export_rows_csv(self, pairs: Iterable[Tuple[int, int]]) -> bytes:
        """CSV rows (m, n, k, g_num, g_den) exact or (m, n, k, g_decimal) float."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        rational = self.cs.is_rational
        if rational:
            writer.writerow(["m", "n", "k", "g_num", "g_den"])
        else:
            writer.writerow(["m", "n", "k", "g_decimal"])
        for m, n in pairs:
            mm, nn = min(m, n), max(m, n)
            row = self._ensure_row(mm, nn)
            for k in range(nn - mm, nn + mm + 1):
                v = row.get(k, _ZERO)
                if rational:
                    fv = v if isinstance(v, Fraction) else Fraction(v)
                    writer.writerow([m, n, k, fv.numerator, fv.denominator])
                else:
                    writer.writerow([m, n, k, scalar_str(v)])
        return buf.getvalue().encode()

    def export_haar_csv(self, N: int) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.cs.is_rational:
            writer.writerow(["n", "h_num", "h_den"])
            for n in range(N + 1):
                h = self.haar(n)
                fh = h if isinstance(h, Fraction) else Fraction(h)
                writer.writerow([n, fh.numerator, fh.denominator])
        else:
            writer.writerow(["n", "h_decimal"])
            for n in range(N + 1):
                writer.writerow([n, scalar_str(self.haar(n))])
        return buf.getvalue().encode()


@dataclass
class PartialSumIdentity:
    lhs: Scalar
    rhs: Scalar
    upper: Scalar  # h(n)/(1-q), the strict majorant

    @property
    def exact_equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def strict_margin(self) -> Scalar:
        return self.upper - self.lhs


def haar_partial_sum_identity(q: Scalar, n: int) -> PartialSumIdentity:
    """Partial Haar sums against their closed form for the q-family.

    lhs = sum_{k<=n} h(k);  rhs = (1-q^{n+1})^2 / ((1-q)(1-q^{2n+1})) * h(n).
    Also certifies the strict bound lhs < h(n)/(1-q).
    """
    q = coerce(q)
    table = LinearizationTable(LittleQLegendre(q))
    lhs = _ZERO
    for k in range(n + 1):
        lhs += table.haar(k)
    hn = table.haar(n)
    rhs = (1 - q ** (n + 1)) ** 2 / ((1 - q) * (1 - q ** (2 * n + 1))) * hn
    upper = hn / (1 - q)
    if not lhs < upper:
        raise InvariantViolation("partial Haar sum reached its strict majorant")
    return PartialSumIdentity(lhs, rhs, upper)
