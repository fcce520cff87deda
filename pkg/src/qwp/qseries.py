"""Exact q-series verification: identities, oracles, and the kernel trend.

Everything here is exact rational arithmetic except the final trend
check, which is the one deliberately numeric path (mpmath, configurable
precision).

Identity under test (even family), for integer k:

    sum_{m>=1} (-1)^{m-1} q^{m(m-1)/2} (1+q^m) q^{mk}/(1-q^m)^{2k}
        =  s_k(zeta_q(2), ..., zeta_q(2k))      (0 for k < 0, 1 for k = 0)

and its odd-family analogue over odd m with exponents (m^2-1)/4 and an
extra psi(q)^2 factor on the right, where psi(q) = sum q^{i(i+1)/2}.

Both sides are evaluated as partial sums together with exact tail
bounds; a verification passes when the two partial sums differ by at
most the combined budget.  All tail bounds trace back to the inequality
q^{-m/2} - q^{m/2} > m (1-q) for 0 < q < 1, plus plain geometric
comparison; right-side budgets use that every s_k has positive
coefficients, so s_k evaluated on upper bounds of its arguments bounds
s_k on the true values.

The F-polynomial oracle re-sums the kernel integral term by term in the
summation index m (with q = r^2 so half-integer powers stay rational)
for exactly the y-powers the polynomial possesses, independently of the
b-stream construction, again with an exact tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import mpmath as mp

from .kernels import Flavor, f_poly, schur_s
from .rings import GenFamily, RingElem, qzeta_odd_trunc, qzeta_trunc, rat_str

F = Fraction


class PrecisionError(RuntimeError):
    """A numeric or budgeted computation could not reach its target."""


@dataclass(frozen=True)
class TruncSpec:
    """Where to cut the series: all sums run to m (or index) <= n_terms."""

    q: Fraction
    n_terms: int

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise ValueError("q must lie in (0, 1)")
        if self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")


# -- truncated sums -----------------------------------------------------

def psi_trunc(q: Fraction, n_terms: int) -> Fraction:
    """First n_terms triangular-exponent terms: sum_{i<n} q^{i(i+1)/2}."""
    if not (0 < q < 1):
        raise ValueError("q must lie in (0, 1)")
    return sum((q ** (i * (i + 1) // 2) for i in range(n_terms)), F(0))


def ident_lhs_trunc(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Partial sum of the even-family identity left side."""
    total = F(0)
    for m in range(1, n_terms + 1):
        qm = q**m
        term = q ** (m * (m - 1) // 2) * (1 + qm) * (qm ** k / (1 - qm) ** (2 * k))
        total += -term if m % 2 == 0 else term
    return total


def ident_odd_lhs_trunc(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Partial sum of the odd-family identity left side (odd m only)."""
    total = F(0)
    for m in range(1, n_terms + 1, 2):
        qm = q**m
        term = (
            q ** ((m * m - 1) // 4)
            * (1 + qm)
            * (qm ** k / (1 - qm) ** (2 * k + 1))
        )
        total += -term if (m - 1) // 2 % 2 == 1 else term
    return total


# -- exact tail bounds ----------------------------------------------------

def qzeta_tail_bound(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Tail of the zeta_q(2k) series past n_terms."""
    return q ** ((n_terms + 1) * k) / ((1 - q) ** (2 * k) * (1 - q**k))


def qzeta_odd_tail_bound(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Tail of the odd zeta series past n_terms (next term has odd m > n_terms)."""
    m_next = n_terms + 1 if n_terms % 2 == 0 else n_terms + 2
    return q ** (m_next * k) / ((1 - q) ** (2 * k) * (1 - q ** (2 * k)))


def psi_tail_bound(q: Fraction, n_terms: int) -> Fraction:
    return q ** (n_terms * (n_terms + 1) // 2) / (1 - q ** (n_terms + 1))


def ident_lhs_tail_bound(k: int, q: Fraction, n_terms: int) -> Fraction:
    """|tail| of the even-family left side; needs n_terms >= |k| for k < 0."""
    n = n_terms
    if k >= 0:
        return 2 * q ** (n * (n + 1) // 2) / ((1 - q) ** (2 * k) * (1 - q ** (n + 1)))
    a = -k
    if n < a:
        raise ValueError(f"n_terms must be >= {a} for k = {k}")
    # |t_m| <= 2 q^{m(m-1)/2 - m a}; successive exponents grow by m - a >= 1
    lead = (n + 1) * n // 2 - (n + 1) * a
    return 2 * q**lead / (1 - q)


def ident_odd_lhs_tail_bound(k: int, q: Fraction, n_terms: int) -> Fraction:
    """|tail| of the odd-family left side; needs first omitted odd m >= 2|k| for k < 0."""
    m_next = n_terms + 1 if n_terms % 2 == 0 else n_terms + 2
    if k >= 0:
        return (
            2
            * q ** ((m_next * m_next - 1) // 4)
            / ((1 - q) ** (2 * k + 1) * (1 - q ** (m_next + 1)))
        )
    a = -k
    if m_next < 2 * a:
        raise ValueError(f"n_terms too small for k = {k}")
    # |t_m| <= 2 q^{(m^2-1)/4 - m a}; odd-step exponent growth m + 1 - 2a >= 1
    lead = (m_next * m_next - 1) // 4 - m_next * a
    return 2 * q**lead / (1 - q)


# -- identity verification -------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    kind: str  # "even" | "odd"
    k: int
    q: Fraction
    n_terms: int
    lhs: Fraction
    rhs: Fraction
    discrepancy: Fraction
    lhs_tail: Fraction
    rhs_budget: Fraction
    budget: Fraction
    passed: bool

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "q": rat_str(self.q),
            "n_terms": self.n_terms,
            "lhs": rat_str(self.lhs),
            "rhs": rat_str(self.rhs),
            "discrepancy": rat_str(self.discrepancy),
            "lhs_tail": rat_str(self.lhs_tail),
            "rhs_budget": rat_str(self.rhs_budget),
            "budget": rat_str(self.budget),
            "passed": self.passed,
        }


def verify_qident(k: int, spec: TruncSpec) -> IdentityReport:
    """Check the even-family identity at integer k against its budget."""
    q, n = spec.q, spec.n_terms
    lhs = ident_lhs_trunc(k, q, n)
    lhs_tail = ident_lhs_tail_bound(k, q, n)
    if k < 0:
        rhs = F(0)
        rhs_budget = F(0)
    elif k == 0:
        rhs = F(1)
        rhs_budget = F(0)
    else:
        low = [qzeta_trunc(j, q, n) for j in range(1, k + 1)]
        high = [low[j - 1] + qzeta_tail_bound(j, q, n) for j in range(1, k + 1)]
        rhs = schur_s(k, low)
        rhs_budget = schur_s(k, high) - rhs
    return _report("even", k, spec, lhs, rhs, lhs_tail, rhs_budget)


def verify_qident_odd(k: int, spec: TruncSpec) -> IdentityReport:
    """Check the odd-family identity at integer k against its budget."""
    q, n = spec.q, spec.n_terms
    lhs = ident_odd_lhs_trunc(k, q, n)
    lhs_tail = ident_odd_lhs_tail_bound(k, q, n)
    if k < 0:
        rhs = F(0)
        rhs_budget = F(0)
    else:
        psi = psi_trunc(q, n)
        psi_hi = psi + psi_tail_bound(q, n)
        if k == 0:
            s_low, s_high = F(1), F(1)
        else:
            low = [qzeta_odd_trunc(j, q, n) for j in range(1, k + 1)]
            high = [low[j - 1] + qzeta_odd_tail_bound(j, q, n) for j in range(1, k + 1)]
            s_low, s_high = schur_s(k, low), schur_s(k, high)
        rhs = psi**2 * s_low
        rhs_budget = psi_hi**2 * s_high - rhs
    return _report("odd", k, spec, lhs, rhs, lhs_tail, rhs_budget)


def _report(kind, k, spec, lhs, rhs, lhs_tail, rhs_budget) -> IdentityReport:
    budget = lhs_tail + rhs_budget
    disc = abs(lhs - rhs)
    return IdentityReport(
        kind=kind,
        k=k,
        q=spec.q,
        n_terms=spec.n_terms,
        lhs=lhs,
        rhs=rhs,
        discrepancy=disc,
        lhs_tail=lhs_tail,
        rhs_budget=rhs_budget,
        budget=budget,
        passed=disc <= budget,
    )


def verify_to_budget(
    kind: str, k: int, q: Fraction, target: Fraction, n_start: int = 8, n_cap: int = 2048
) -> IdentityReport:
    """Double n_terms until the combined budget meets the target."""
    if target <= 0:
        raise ValueError("budget target must be positive")
    check = {"even": verify_qident, "odd": verify_qident_odd}[kind]
    n = max(n_start, 2 * abs(k) + 2)
    while True:
        report = check(k, TruncSpec(q, n))
        if report.budget <= target:
            return report
        if n >= n_cap:
            raise PrecisionError(
                f"budget {rat_str(target)} unreachable at n_terms <= {n_cap}"
            )
        n *= 2


# -- the F-polynomial oracle ------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    tail_bound: Fraction


def f_oracle(
    flavor: Flavor, k: int, y: Fraction, r: Fraction, n_terms: int = 32
) -> OracleResult:
    """Term-by-term kernel-integral value of F_{2k+1}(y) at q = r^2.

    Sums the kernel series over the first n_terms values of the
    summation index for each y-power the polynomial owns (2n <= 2k+2
    even-family; 2n+1 <= 2k+1 odd-family), entirely independently of
    the b-stream path, and returns an exact error bound.  Only the
    genuinely q-deformed flavors have an oracle.
    """
    if not (0 < r < 1):
        raise ValueError("r must lie in (0, 1)")
    if k < 0:
        raise ValueError("moment index must be >= 0")
    q = r * r
    ay = abs(F(y))
    fact = factorial(2 * k + 1)
    if flavor is Flavor.Q_CLASSICAL:
        value = F(0)
        tail = F(0)
        for n in range(k + 2):
            scale = F(fact * 4 ** (k + 1 - n), factorial(2 * n))
            value += scale * ident_lhs_trunc(k + 1 - n, q, n_terms) * F(y) ** (2 * n)
            tail += scale * ident_lhs_tail_bound(k + 1 - n, q, n_terms) * ay ** (2 * n)
        return OracleResult(value, tail)
    if flavor is Flavor.Q_SUPER:
        psi_terms = max(n_terms, 16)
        psi = psi_trunc(q, psi_terms)
        psi_hi = psi + psi_tail_bound(q, psi_terms)
        series = F(0)
        series_tail = F(0)
        for n in range(k + 1):
            scale = F(fact * 4 ** (2 * k + 1 - 2 * n), factorial(2 * n + 1))
            series += scale * ident_odd_lhs_trunc(k - n, q, n_terms) * F(y) ** (2 * n + 1)
            series_tail += scale * ident_odd_lhs_tail_bound(k - n, q, n_terms) * ay ** (2 * n + 1)
        value = series / (4 * psi**2)
        psi_err = (F(1) / psi**2 - F(1) / psi_hi**2) / 4
        tail = series_tail / (4 * psi**2) + (abs(series) + series_tail) * psi_err
        return OracleResult(value, tail)
    raise ValueError("the oracle applies to the q flavors only")


def ring_eval_with_budget(elem: RingElem, q: Fraction, n_terms: int) -> tuple[Fraction, Fraction]:
    """Exact evaluation plus a bound on the truncation error.

    Each generator's true value sits between its partial sum and the
    partial sum plus its tail bound; monomial by monomial the error is
    at most |c| (prod upper - prod lower).
    """
    if elem.family is GenFamily.Q_ZETA:
        trunc, tail = qzeta_trunc, qzeta_tail_bound
    elif elem.family is GenFamily.Q_ZETA_ODD:
        trunc, tail = qzeta_odd_trunc, qzeta_odd_tail_bound
    else:
        raise ValueError("only q-family elements evaluate numerically")
    needed = sorted({k for mono in elem.terms for k, _ in mono})
    low = {k: trunc(k, q, n_terms) for k in needed}
    high = {k: low[k] + tail(k, q, n_terms) for k in needed}
    value = F(0)
    budget = F(0)
    for mono, coeff in elem.terms.items():
        lo = hi = F(1)
        for k, e in mono:
            lo *= low[k] ** e
            hi *= high[k] ** e
        value += coeff * lo
        budget += abs(coeff) * (hi - lo)
    return value, budget


def f_poly_eval(
    flavor: Flavor, k: int, y: Fraction, q: Fraction, n_terms: int
) -> tuple[Fraction, Fraction]:
    """Evaluate the constructed F-polynomial at y, with truncation budget."""
    value = F(0)
    budget = F(0)
    ay = abs(F(y))
    for e, coeff in f_poly(flavor, k).coeffs.items():
        v, b = ring_eval_with_budget(coeff, q, n_terms)
        value += v * F(y) ** e
        budget += b * ay**e
    return value, budget


@dataclass(frozen=True)
class OracleComparison:
    flavor: Flavor
    k: int
    y: Fraction
    r: Fraction
    n_terms: int
    zeta_terms: int
    oracle_value: Fraction
    poly_value: Fraction
    discrepancy: Fraction
    budget: Fraction
    passed: bool

    def to_json_obj(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "k": self.k,
            "y": rat_str(self.y),
            "r": rat_str(self.r),
            "q": rat_str(self.r * self.r),
            "n_terms": self.n_terms,
            "zeta_terms": self.zeta_terms,
            "oracle_value": rat_str(self.oracle_value),
            "poly_value": rat_str(self.poly_value),
            "discrepancy": rat_str(self.discrepancy),
            "budget": rat_str(self.budget),
            "passed": self.passed,
        }


def oracle_compare(
    flavor: Flavor,
    k: int,
    y: Fraction,
    r: Fraction,
    n_terms: int = 32,
    zeta_terms: int = 96,
) -> OracleComparison:
    """Constructed F-polynomial vs. the independent kernel oracle at q = r^2."""
    oracle = f_oracle(flavor, k, y, r, n_terms)
    poly_value, poly_budget = f_poly_eval(flavor, k, y, r * r, zeta_terms)
    disc = abs(oracle.value - poly_value)
    budget = oracle.tail_bound + poly_budget
    return OracleComparison(
        flavor=flavor,
        k=k,
        y=F(y),
        r=F(r),
        n_terms=n_terms,
        zeta_terms=zeta_terms,
        oracle_value=oracle.value,
        poly_value=poly_value,
        discrepancy=disc,
        budget=budget,
        passed=disc <= budget,
    )


# -- kernel limit trend (the one numeric path) -------------------------------

DEFAULT_TREND_RS: tuple[Fraction, ...] = (
    F(1, 2),
    F(3, 5),
    F(7, 10),
    F(4, 5),
    F(9, 10),
)

_MAX_TREND_TERMS = 100_000


@dataclass(frozen=True)
class TrendReport:
    flavor: Flavor
    x: Fraction
    y: Fraction
    dps: int
    rs: tuple[Fraction, ...]
    discrepancies: tuple[str, ...]
    strictly_decreasing: bool

    def to_json_obj(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "x": rat_str(self.x),
            "y": rat_str(self.y),
            "dps": self.dps,
            "points": [
                {"r": rat_str(r), "discrepancy": d}
                for r, d in zip(self.rs, self.discrepancies)
            ],
            "strictly_decreasing": self.strictly_decreasing,
        }


def kernel_limit_trend(
    x: Fraction,
    y: Fraction,
    rs: Sequence[Fraction] = DEFAULT_TREND_RS,
    flavor: Flavor = Flavor.Q_CLASSICAL,
    dps: int = 60,
) -> TrendReport:
    """Distance between the scaled q-kernel and its classical limit.

    Evaluates the pointwise kernel H_q (or the super one) at arguments
    scaled by 1/(1-q), q = r^2, and compares with the limit kernel at
    (x, y); the series converges absolutely only for x >= y >= 0, which
    is enforced.  As r -> 1 the discrepancies should fall; the report
    records whether they strictly decrease along rs.
    """
    if flavor not in (Flavor.Q_CLASSICAL, Flavor.Q_SUPER):
        raise ValueError("trend check applies to the q flavors")
    x, y = F(x), F(y)
    if not x >= y >= 0:
        raise ValueError("kernel series needs x >= y >= 0")
    if dps < 15:
        raise ValueError("dps too small to be meaningful")
    rs = tuple(F(r) for r in rs)
    if any(not (0 < r < 1) for r in rs):
        raise ValueError("each r must lie in (0, 1)")
    diffs: list[str] = []
    decreasing = True
    with mp.workdps(dps + 20):
        target = mp.mpf(10) ** (-(dps + 10))
        limit_val = _limit_kernel(flavor, x, y)
        prev = None
        for r in rs:
            q_val = _deformed_kernel(flavor, x, y, r, target)
            diff = abs(q_val - limit_val)
            if prev is not None and not diff < prev:
                decreasing = False
            prev = diff
            diffs.append(mp.nstr(diff, 30))
    return TrendReport(
        flavor=flavor,
        x=x,
        y=y,
        dps=dps,
        rs=rs,
        discrepancies=tuple(diffs),
        strictly_decreasing=decreasing,
    )


def _limit_kernel(flavor: Flavor, x: Fraction, y: Fraction):
    xf, yf = mp.mpf(x.numerator) / x.denominator, mp.mpf(y.numerator) / y.denominator
    if flavor is Flavor.Q_CLASSICAL:
        return 1 / (1 + mp.e ** ((xf + yf) / 2)) + 1 / (1 + mp.e ** ((xf - yf) / 2))
    return (1 / mp.cosh((xf - yf) / 4) - 1 / mp.cosh((xf + yf) / 4)) / (4 * mp.pi)


def _deformed_kernel(flavor: Flavor, x: Fraction, y: Fraction, r: Fraction, target):
    rf = mp.mpf(r.numerator) / r.denominator
    q = rf * rf
    eps = 1 - q
    X = (mp.mpf(x.numerator) / x.denominator) / eps
    Y = (mp.mpf(y.numerator) / y.denominator) / eps
    if flavor is Flavor.Q_CLASSICAL:
        total = mp.mpf(0)
        for m in range(1, _MAX_TREND_TERMS + 1):
            qm = q**m
            bracket = rf**m - rf ** (-m)  # q^{m/2} - q^{-m/2} < 0
            mag = q ** (m * (m - 1) // 2) * (1 + qm)
            term = mag * (mp.e ** ((X + Y) * bracket / 2) + mp.e ** ((X - Y) * bracket / 2)) / 2
            total += -term if m % 2 == 0 else term
            if mag < target:
                return total
        raise PrecisionError("classical kernel series did not converge")
    # super kernel, odd m, with the 1/(1-q) scaling of the limit statement
    psi = mp.mpf(0)
    i = 0
    while True:
        t = q ** (i * (i + 1) // 2)
        psi += t
        i += 1
        if t < target:
            break
        if i > _MAX_TREND_TERMS:
            raise PrecisionError("psi series did not converge")
    total = mp.mpf(0)
    for idx in range(_MAX_TREND_TERMS):
        m = 2 * idx + 1
        bracket = rf**m - rf ** (-m)
        mag = q ** ((m * m - 1) // 4) * (rf**m + rf ** (-m))
        term = mag * (mp.e ** ((X - Y) * bracket / 4) - mp.e ** ((X + Y) * bracket / 4))
        total += -term if idx % 2 == 1 else term
        if mag < target:
            return total / (8 * psi**2) / eps
    raise PrecisionError("super kernel series did not converge")
