"""Overflow-safe special functions used by every probability formula.

Provides:
  * log_factorial / log_binomial: ln(k!) and ln(n choose k) via lgamma.
  * HalfInteger: exact half-integer angular-momentum labels (stored as 2x).
  * wigner_small_d: the spin-j rotation matrix element d^j_{m',m}(beta)
    about the y axis, evaluated term by term in (log-magnitude, sign) form
    so that factorials never overflow and the alternating sum keeps digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HalfInteger",
    "log_factorial",
    "log_binomial",
    "wigner_small_d",
    "wigner_d_matrix",
]


@dataclass(frozen=True)
class HalfInteger:
    """Exact half-integer; stores twice the value so no float rounding enters
    index arithmetic (5/2 is twice_value=5, 3 is twice_value=6)."""

    twice_value: int

    @classmethod
    def of(cls, x: "HalfInteger | int | float") -> "HalfInteger":
        """Coerce an int, an exact multiple of 1/2, or a HalfInteger."""
        if isinstance(x, HalfInteger):
            return x
        if isinstance(x, (int, np.integer)):
            return cls(2 * int(x))
        twice = 2.0 * float(x)
        if twice != round(twice):
            raise ValueError(f"{x!r} is not an integer or half-integer")
        return cls(int(round(twice)))

    @property
    def value(self) -> float:
        return self.twice_value / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __float__(self) -> float:
        return self.value

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


def log_factorial(k: int) -> float:
    """ln(k!) for k >= 0."""
    if k != int(k) or k < 0:
        raise ValueError(f"factorial argument must be a non-negative integer, got {k!r}")
    return math.lgamma(int(k) + 1)


def log_binomial(n: int, k: int) -> float:
    """ln(n choose k) for 0 <= k <= n."""
    if not 0 <= k <= n:
        raise ValueError(f"binomial out of domain: n={n}, k={k}")
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


# --- double-double helpers -------------------------------------------------
#
# The rotation-element sum alternates in sign and can cancel seven or more
# digits at mid angles for j around 25, which caps a plain float64 term sum
# near 1e-9 absolute error. When the accumulated term magnitude signals
# that, the sum is redone with each term carried as an unevaluated pair of
# doubles (~31 significant digits) built from exact integer factorials.

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    hi = s + e
    return hi, e - (hi - s)


def _dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    hi = p + e
    return hi, e - (hi - p)


def _dd_div(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    q1 = x[0] / y[0]
    p, e = _two_prod(q1, y[0])
    r_hi, r_lo = _two_sum(x[0], -p)
    r_lo += x[1] - e - q1 * y[1]
    q2 = (r_hi + r_lo) / y[0]
    hi = q1 + q2
    return hi, q2 - (hi - q1)


def _dd_sqrt_int(a: int) -> tuple[float, float]:
    """sqrt of an exact non-negative integer as a double-double."""
    if a == 0:
        return 0.0, 0.0
    y = math.sqrt(a)
    # one Newton step: y' = y + (a - y^2) / (2y), residual formed exactly;
    # y^2 = p + e from the exact product, and p splits into its integer and
    # fractional float parts so the big cancellation a - p happens in
    # integer arithmetic
    p, e = _two_prod(y, y)
    ip = int(p)
    r = float(a - ip) - (p - float(ip)) - e
    return _two_sum(y, r / (2.0 * y))


def _dd_pow(base: float, exponent: int) -> tuple[float, float]:
    result = (1.0, 0.0)
    square = (base, 0.0)
    e = exponent
    while e:
        if e & 1:
            result = _dd_mul(result, square)
        square = _dd_mul(square, square)
        e >>= 1
    return result


# escalate when the float64 term sum may have lost more than ~1e-13
_ESCALATION_THRESHOLD = 1e-13
_FLOAT64_TERM_EPS = 2.5e-16


def _validate_indices(tj: int, tmp: int, tm: int) -> None:
    if abs(tm) > tj or abs(tmp) > tj:
        raise ValueError(
            f"rotation indices out of range: |m|, |m'| must not exceed j "
            f"(got 2j={tj}, 2m'={tmp}, 2m={tm})"
        )
    if (tj - tm) % 2 != 0 or (tj - tmp) % 2 != 0:
        raise ValueError(
            f"rotation indices have mismatched parity: j - m and j - m' must be "
            f"integers (got 2j={tj}, 2m'={tmp}, 2m={tm})"
        )


def wigner_small_d(
    j: HalfInteger | int | float,
    m_prime: HalfInteger | int | float,
    m: HalfInteger | int | float,
    beta: float,
) -> float:
    """Rotation matrix element d^j_{m',m}(beta) = <j m'| exp(-i beta J_y) |j m>.

    Each term of the alternating sum over k is assembled as a signed
    exponential of summed log-factorials and log-powers of cos(beta/2),
    sin(beta/2); the terms are then combined with exact compensated
    summation (math.fsum). k runs over exactly the range where all four
    factorial arguments are non-negative. Bases equal to zero contribute
    only through zero exponents (0^0 = 1).

    Satisfies d^j_{m',m}(beta) = d^j_{m,m'}(-beta).
    """
    tj = HalfInteger.of(j).twice_value
    tmp = HalfInteger.of(m_prime).twice_value
    tm = HalfInteger.of(m).twice_value
    if tj < 0:
        raise ValueError(f"j must be non-negative, got 2j={tj}")
    if not math.isfinite(beta):
        raise ValueError(f"rotation angle must be finite, got {beta!r}")
    _validate_indices(tj, tmp, tm)

    # All of these are exact integers once the parity invariant holds.
    j_plus_m = (tj + tm) // 2
    j_minus_m = (tj - tm) // 2
    j_plus_mp = (tj + tmp) // 2
    j_minus_mp = (tj - tmp) // 2
    m_minus_mp = (tm - tmp) // 2

    half = 0.5 * beta
    c = math.cos(half)
    s = math.sin(half)
    log_abs_c = math.log(abs(c)) if c != 0.0 else -math.inf
    log_abs_s = math.log(abs(s)) if s != 0.0 else -math.inf

    half_log_num = (
        0.5 * log_factorial(j_plus_m),
        0.5 * log_factorial(j_minus_m),
        0.5 * log_factorial(j_plus_mp),
        0.5 * log_factorial(j_minus_mp),
    )

    k_min = max(0, m_minus_mp)
    k_max = min(j_plus_m, j_minus_mp)
    terms = []
    gross = 0.0
    for k in range(k_min, k_max + 1):
        pow_c = tj - 2 * k + m_minus_mp  # exponent of cos(beta/2)
        pow_s = 2 * k - m_minus_mp  # exponent of sin(beta/2)
        if (c == 0.0 and pow_c > 0) or (s == 0.0 and pow_s > 0):
            continue
        # fsum keeps the numerator/denominator cancellation exact, e.g. the
        # identity rotation comes out as exp(0) = 1 with no residue
        log_mag = math.fsum(
            (
                *half_log_num,
                -log_factorial(j_plus_m - k),
                -log_factorial(k),
                -log_factorial(j_minus_mp - k),
                -log_factorial(k - m_minus_mp),
                pow_c * log_abs_c if pow_c > 0 else 0.0,
                pow_s * log_abs_s if pow_s > 0 else 0.0,
            )
        )
        sign = -1.0 if (k - m_minus_mp) % 2 else 1.0
        if c < 0.0 and pow_c % 2:
            sign = -sign
        if s < 0.0 and pow_s % 2:
            sign = -sign
        magnitude = math.exp(log_mag)
        gross += magnitude
        terms.append(sign * magnitude)
    result = math.fsum(terms)
    if gross * _FLOAT64_TERM_EPS > _ESCALATION_THRESHOLD and tj <= 170:
        # cancellation consumed too many float64 digits; redo the sum with
        # double-double terms built from exact integer factorials (tj <= 170
        # keeps each individual factorial inside the float64 range)
        result = _term_sum_dd(
            tj, j_plus_m, j_minus_mp, m_minus_mp, j_minus_m, j_plus_mp, c, s, k_min, k_max
        )
    return result


def _int_to_dd(a: int) -> tuple[float, float]:
    hi = float(a)
    return hi, float(a - int(hi))


def _term_sum_dd(
    tj: int,
    j_plus_m: int,
    j_minus_mp: int,
    m_minus_mp: int,
    j_minus_m: int,
    j_plus_mp: int,
    c: float,
    s: float,
    k_min: int,
    k_max: int,
) -> float:
    """Rotation-element sum with ~31-digit terms; same k range and sign
    conventions as the float64 pass. Only reached when both c and s are
    nonzero (a vanishing base leaves a single term and no cancellation)."""
    sqrt_num = (1.0, 0.0)
    for arg in (j_plus_m, j_minus_m, j_plus_mp, j_minus_mp):
        sqrt_num = _dd_mul(sqrt_num, _dd_sqrt_int(math.factorial(arg)))

    abs_c, abs_s = abs(c), abs(s)
    n_terms = k_max - k_min + 1
    # needed powers step by two; build each ladder with one multiply per rung
    c_sq = _dd_mul((abs_c, 0.0), (abs_c, 0.0))
    s_sq = _dd_mul((abs_s, 0.0), (abs_s, 0.0))
    c_pows = [_dd_pow(abs_c, tj + m_minus_mp - 2 * k_max)]  # ascending exponent
    s_pows = [_dd_pow(abs_s, 2 * k_min - m_minus_mp)]
    for _ in range(n_terms - 1):
        c_pows.append(_dd_mul(c_pows[-1], c_sq))
        s_pows.append(_dd_mul(s_pows[-1], s_sq))

    acc = (0.0, 0.0)
    for k in range(k_min, k_max + 1):
        denominator = (
            math.factorial(j_plus_m - k)
            * math.factorial(k)
            * math.factorial(j_minus_mp - k)
            * math.factorial(k - m_minus_mp)
        )
        term = _dd_div(sqrt_num, _int_to_dd(denominator))
        term = _dd_mul(term, c_pows[k_max - k])
        term = _dd_mul(term, s_pows[k - k_min])
        pow_c = tj - 2 * k + m_minus_mp
        pow_s = 2 * k - m_minus_mp
        negative = (k - m_minus_mp) % 2 == 1
        if c < 0.0 and pow_c % 2:
            negative = not negative
        if s < 0.0 and pow_s % 2:
            negative = not negative
        if negative:
            term = (-term[0], -term[1])
        acc = _dd_add(acc, term)
    return acc[0] + acc[1]


def wigner_d_matrix(j: HalfInteger | int | float, beta: float) -> np.ndarray:
    """Full (2j+1) x (2j+1) rotation matrix, rows/columns ordered by
    ascending m', m in {-j, ..., j}."""
    tj = HalfInteger.of(j).twice_value
    dim = tj + 1
    out = np.empty((dim, dim))
    for r in range(dim):
        tmp = 2 * r - tj
        for col in range(dim):
            tm = 2 * col - tj
            out[r, col] = wigner_small_d(
                HalfInteger(tj), HalfInteger(tmp), HalfInteger(tm), beta
            )
    return out
