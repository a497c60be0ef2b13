"""
The polynomial tower p_0 = x^2 - 2, p_n = p_{n-1}^2 - 2 and its twin
q_0 = x^2 - 2, q_n = q_{n-1}(x^2 - 2).

Polynomials are carried as ``EvenPoly``: only even powers are stored, so
``coeffs[k]`` is the coefficient of x^(2k). Exact generation uses dense
schoolbook squaring; numeric certification evaluates with mpmath at a
caller-chosen precision and reports residuals without asserting on them.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath

from .config import MAX_DEGREE_LOG2
from .errors import DomainError, ResourceGuardError
from .numeric import Exact, format_int, pow2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvenPoly:
    """
    Dense even polynomial with integer coefficients.

    coeffs[k] is the coefficient of x^(2k). Trailing zeros are stripped on
    construction (the zero polynomial is ``(0,)``). ``n`` records the tower
    index for generated members and does not take part in equality.
    """

    coeffs: Tuple[int, ...]
    n: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        values = [int(c) for c in self.coeffs]
        while len(values) > 1 and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values or [0]))

    @property
    def half_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return 2 * self.half_degree

    def coefficient(self, k: int) -> int:
        """Coefficient of x^(2k), zero outside the stored range."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial: exponent -> nonzero integer coefficient."""

    terms: Mapping[int, int]

    def __post_init__(self):
        clean = {int(e): int(c) for e, c in self.terms.items() if c != 0}
        odd = [e for e in clean if e % 2]
        if odd:
            raise DomainError(f"only even exponents are represented, got {sorted(odd)}")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))


def _check_degree(half_degree_log2: int, max_degree_log2: int, what: str = "degree"):
    # Degree of a tower member p_n is 2**(n+1); the guard is stated in log2.
    if half_degree_log2 + 1 > max_degree_log2:
        raise ResourceGuardError(
            f"{what} 2^{half_degree_log2 + 1}", pow2(half_degree_log2 + 1), pow2(max_degree_log2)
        )


def _check_n(n: int, max_degree_log2: int):
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    _check_degree(n, max_degree_log2)


def _square_minus_two(c: Sequence[int]) -> List[int]:
    # Schoolbook square on the x^2-indexed array, then subtract 2.
    size = len(c)
    out = [0] * (2 * size - 1)
    for i, ci in enumerate(c):
        if not ci:
            continue
        out[2 * i] += ci * ci
        twice = 2 * ci
        for j in range(i + 1, size):
            out[i + j] += twice * c[j]
    out[0] -= 2
    return out


@lru_cache(maxsize=None)
def _tower(n: int) -> Tuple[int, ...]:
    if n == 0:
        return (-2, 1)
    coeffs = tuple(_square_minus_two(_tower(n - 1)))
    logger.debug("squared p_%d -> p_%d (%d coefficients)", n - 1, n, len(coeffs))
    return coeffs


def gen_p(n: int, max_degree_log2: int = MAX_DEGREE_LOG2) -> EvenPoly:
    """
    Generate p_n by repeated squaring.

    Args:
        n: tower index, n >= 0
        max_degree_log2: degree guard, 2**(n+1) must not exceed 2**max_degree_log2

    Raises:
        DomainError: if n < 0
        ResourceGuardError: if the degree guard is exceeded
    """
    _check_n(n, max_degree_log2)
    return EvenPoly(_tower(n), n=n)


def _substitute(c: Sequence[int], a: int) -> List[int]:
    """
    Coefficients of p(x^2 + a) for the even polynomial p with coefficients c.

    p(y) = P(y^2), so Horner runs in z = (x^2 + a)^2 = x^4 + 2a x^2 + a^2,
    multiplying the accumulator by a three-term even polynomial each step.
    """
    z0, z1, z2 = a * a, 2 * a, 1
    acc = [c[-1]]
    for ck in reversed(c[:-1]):
        padded = acc + [0, 0]
        nxt = [z0 * v for v in padded]
        for idx, v in enumerate(acc):
            if v:
                nxt[idx + 1] += z1 * v
                nxt[idx + 2] += z2 * v
        nxt[0] += ck
        acc = nxt
    return acc


@lru_cache(maxsize=None)
def _composed_tower(n: int) -> Tuple[int, ...]:
    if n == 0:
        return (-2, 1)
    return tuple(_substitute(_composed_tower(n - 1), -2))


def gen_q(n: int, max_degree_log2: int = MAX_DEGREE_LOG2) -> EvenPoly:
    """Generate q_n by composition q_n(x) = q_{n-1}(x^2 - 2)."""
    _check_n(n, max_degree_log2)
    return EvenPoly(_composed_tower(n), n=n)


def compose_shift(p: EvenPoly, max_degree_log2: int = MAX_DEGREE_LOG2) -> EvenPoly:
    """Return p(x^2 + 2); the degree doubles."""
    if p.half_degree == 0:
        return EvenPoly(p.coeffs)
    new_degree = 2 * p.degree
    if new_degree > pow2(max_degree_log2):
        raise ResourceGuardError("degree", new_degree, pow2(max_degree_log2))
    return EvenPoly(_substitute(p.coeffs, 2))


def eval_exact(p: EvenPoly, x: Exact) -> Fraction:
    """Exact value of p at a rational x, Horner in x^2."""
    x2 = Fraction(x) ** 2
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x2 + c
    return acc


def sign_alternates(p: EvenPoly) -> bool:
    """True iff every coefficient is nonzero with sign (-1)^(K - k), K the half degree."""
    top = p.half_degree
    for k, c in enumerate(p.coeffs):
        if c == 0:
            return False
        if (c > 0) != ((top - k) % 2 == 0):
            return False
    return True


def laurent_substitution(p: EvenPoly) -> LaurentPoly:
    """
    Expand x^deg(p) * p(x + 1/x) exactly.

    Horner in w = (x + 1/x)^2 = x^2 + 2 + x^-2 on a dense array indexed by
    half-exponent with a running offset; zero terms are dropped at the end.
    """
    acc = [p.coeffs[-1]]
    for ck in reversed(p.coeffs[:-1]):
        acc = [
            lo + 2 * mid + hi
            for lo, mid, hi in zip(acc + [0, 0], [0] + acc + [0], [0, 0] + acc)
        ]
        acc[len(acc) // 2] += ck
    # acc[idx] carries x^(2(idx - K)); the x^(2K) factor shifts it to x^(2 idx).
    return LaurentPoly({2 * idx: c for idx, c in enumerate(acc)})


def cyclotomic_identity_check(n: int, max_degree_log2: int = MAX_DEGREE_LOG2) -> bool:
    """True iff x^(2^(n+1)) p_n(x + 1/x) == x^(2^(n+2)) + 1 exactly."""
    p = gen_p(n, max_degree_log2)
    expected = LaurentPoly({pow2(n + 2): 1, 0: 1})
    holds = laurent_substitution(p) == expected
    logger.debug("cyclotomic identity n=%d: %s", n, holds)
    return holds


# ---------------------------------------------------------------------------
# High-precision evaluation
# ---------------------------------------------------------------------------

def _require_precision(precision_bits: int):
    if precision_bits < 64:
        raise DomainError(f"precision_bits must be at least 64, got {precision_bits}")


def _horner_mp(coeffs: Sequence[int], x2, precision_bits: int):
    """
    Evaluate sum c_k * x2^k with enough guard bits that cancellation between
    large coefficients cannot eat into the requested precision.
    """
    top_bits = max(abs(c).bit_length() for c in coeffs)
    growth = max(1, int(mpmath.mag(x2))) if x2 else 1
    guard = top_bits + growth * len(coeffs) + 32
    with mpmath.workprec(precision_bits + guard):
        x2 = mpmath.mpf(x2)
        acc = mpmath.mpf(0)
        for c in reversed(coeffs):
            acc = acc * x2 + c
    with mpmath.workprec(precision_bits):
        return +acc


def eval_mp(p: EvenPoly, x, precision_bits: int):
    """Evaluate the dense coefficients of p at a real x."""
    _require_precision(precision_bits)
    with mpmath.workprec(precision_bits + 32):
        x2 = mpmath.mpf(x) ** 2
    return _horner_mp(p.coeffs, x2, precision_bits)


def eval_tower(n: int, x, precision_bits: int):
    """Evaluate p_n at x by iterated squaring, never expanding coefficients."""
    _require_precision(precision_bits)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    with mpmath.workprec(precision_bits + 2 * n + 32):
        value = mpmath.mpf(x) ** 2 - 2
        for _ in range(n):
            value = value * value - 2
    with mpmath.workprec(precision_bits):
        return +value


def _evaluate(n: int, x, precision_bits: int, method: str, max_degree_log2: int):
    if method == "dense":
        return eval_mp(gen_p(n, max_degree_log2), x, precision_bits)
    if method == "tower":
        return eval_tower(n, x, precision_bits)
    raise DomainError(f"unknown evaluation method {method!r}; expected 'dense' or 'tower'")


def trig_residual(
    n: int,
    theta,
    precision_bits: int,
    method: str = "dense",
    max_degree_log2: int = MAX_DEGREE_LOG2,
):
    """|p_n(2 cos theta) - 2 cos(2^(n+1) theta)| at the requested precision."""
    _require_precision(precision_bits)
    with mpmath.workprec(precision_bits):
        theta = mpmath.mpf(theta)
        x = 2 * mpmath.cos(theta)
        target = 2 * mpmath.cos(pow2(n + 1) * theta)
        value = _evaluate(n, x, precision_bits, method, max_degree_log2)
        return abs(value - target)


def root_residual(
    n: int,
    precision_bits: int,
    method: str = "dense",
    max_degree_log2: int = MAX_DEGREE_LOG2,
):
    """|p_n(2 cos(pi / 2^(n+2)))|; the point is a root of p_n over Q."""
    _require_precision(precision_bits)
    with mpmath.workprec(precision_bits):
        x = 2 * mpmath.cos(mpmath.pi / pow2(n + 2))
        return abs(_evaluate(n, x, precision_bits, method, max_degree_log2))


def residual_tolerance(precision_bits: int):
    """Default vanishing threshold 2^-(precision_bits / 2)."""
    with mpmath.workprec(precision_bits):
        return mpmath.ldexp(mpmath.mpf(1), -(precision_bits // 2))


@dataclass(frozen=True)
class CorollaryProbe:
    """
    Residuals of the candidate minimal polynomials of zeta - 1/zeta, zeta of order 2^e.

    ``residuals`` maps each candidate tower index to |p_index(x^2 + 2)| at
    x = zeta - 1/zeta (index -1 stands for the base case x^2 + 2 at e = 3).
    """

    e: int
    residuals: Dict[int, object]
    vanishing: Tuple[int, ...]
    expected_index: int
    stated_index: int

    @property
    def unique(self) -> bool:
        return len(self.vanishing) == 1

    @property
    def matches_expected(self) -> bool:
        return self.vanishing == (self.expected_index,)


def corollary_probe(
    e: int,
    precision_bits: int,
    tolerance=None,
    max_degree_log2: int = MAX_DEGREE_LOG2,
) -> CorollaryProbe:
    """
    Test both candidate indices e-3 and e-4 for the composed polynomial
    p_index(x^2 + 2) at x = zeta_{2^e} - zeta_{2^e}^-1 and report which vanishes.

    x is purely imaginary, so x^2 = -4 sin^2(2 pi / 2^e) is real and the
    even polynomial is evaluated directly in x^2.
    """
    _require_precision(precision_bits)
    if e < 3:
        raise DomainError(f"e must be at least 3, got {e}")
    tol = residual_tolerance(precision_bits) if tolerance is None else tolerance
    with mpmath.workprec(precision_bits + 32):
        x2 = -4 * mpmath.sin(2 * mpmath.pi / pow2(e)) ** 2
    residuals: Dict[int, object] = {}
    if e == 3:
        # Base case of the corollary over Q: x^2 - (0 - 2).
        residuals[-1] = abs(_horner_mp((2, 1), x2, precision_bits))
    for index in (e - 3, e - 4):
        if index < 0:
            continue
        composed = compose_shift(gen_p(index, max_degree_log2), max_degree_log2)
        residuals[index] = abs(_horner_mp(composed.coeffs, x2, precision_bits))
    vanishing = tuple(sorted(i for i, r in residuals.items() if r < tol))
    probe = CorollaryProbe(
        e=e,
        residuals=residuals,
        vanishing=vanishing,
        expected_index=e - 4 if e > 3 else -1,
        stated_index=e - 3,
    )
    if e > 3 and not probe.matches_expected:
        logger.warning("corollary probe e=%d: vanishing indices %s, expected (%d,)",
                       e, vanishing, e - 4)
    return probe


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def poly_to_json(p: EvenPoly) -> dict:
    return {"n": p.n, "coeffs": [format_int(c) for c in p.coeffs]}


def poly_from_json(data: Mapping) -> EvenPoly:
    return EvenPoly(tuple(int(c) for c in data["coeffs"]), n=data.get("n"))


def poly_to_csv_rows(p: EvenPoly) -> Iterable[Tuple[int, str]]:
    return [(k, format_int(c)) for k, c in enumerate(p.coeffs)]


def _monomial(power: int) -> str:
    if power == 0:
        return ""
    return "x" if power == 1 else f"x^{power}"


def poly_to_text(p: EvenPoly) -> str:
    """Terms in decreasing degree, e.g. "x^4 - 4x^2 + 2"."""
    parts: List[str] = []
    for k in range(p.half_degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = _monomial(2 * k)
        magnitude = abs(c)
        body = mono if magnitude == 1 and mono else f"{magnitude}{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"
