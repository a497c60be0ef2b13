"""
Coefficient rows c_{n,2k} of p_n computed without squaring polynomials.

Routes:
    coeffs_backsub          top-down solve of the upper-triangular binomial
                            system from x^(2^(n+1)) p_n(x + 1/x) = x^(2^(n+2)) + 1
    coeffs_level_recursion  row n from row n-1, optionally truncated at kmax
    closed_form_top / _low  closed forms for the top and bottom few entries
    coeff_from_invariants   sum_j a_{j,k} 2^(2jn) from an invariant table
    coeffs_square           the squaring route, for cross-checks
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Tuple

from .config import MAX_DEGREE_LOG2
from .errors import ConsistencyError, DomainError
from .numeric import as_integer, binomial, ceil_log2, format_int, pow2
from .polyseq import _check_n, gen_p

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoeffVector:
    """
    The row (c_{n,0}, c_{n,2}, ..., c_{n,2 kmax}) of p_n.

    The row is complete when kmax == 2**n, in which case values[-1] == 1.
    """

    n: int
    kmax: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"n must be nonnegative, got {self.n}")
        if not 0 <= self.kmax <= pow2(self.n):
            raise DomainError(f"kmax must lie in [0, 2^{self.n}], got {self.kmax}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != self.kmax + 1:
            raise DomainError(f"expected {self.kmax + 1} values, got {len(self.values)}")

    @property
    def complete(self) -> bool:
        return self.kmax == pow2(self.n)

    def is_prefix_of(self, other: "CoeffVector") -> bool:
        return self.n == other.n and other.values[: len(self.values)] == self.values


def coeffs_square(n: int, max_degree_log2: int = MAX_DEGREE_LOG2) -> CoeffVector:
    """Complete row read off the squared polynomial."""
    p = gen_p(n, max_degree_log2)
    return CoeffVector(n, pow2(n), p.coeffs)


def coeffs_backsub(n: int, max_degree_log2: int = MAX_DEGREE_LOG2) -> CoeffVector:
    """
    Back-substitution on the echelon binomial system.

    c_{n,2m} = 1 with m = 2**n, then for j = 1..m
        c_{n,2(m-j)} = -sum_{i=m-j+1}^{m} C(2i, j+i-m) c_{n,2i}
    The binomial is zero outside its range, so no bound bookkeeping is needed.
    """
    _check_n(n, max_degree_log2)
    m = pow2(n)
    c = [0] * (m + 1)
    c[m] = 1
    for j in range(1, m + 1):
        total = 0
        for i in range(m - j + 1, m + 1):
            total += binomial(2 * i, j + i - m) * c[i]
        c[m - j] = -total
    logger.debug("back-substitution finished for n=%d", n)
    return CoeffVector(n, m, c)


def _next_row(prev: List[int], level: int, kmax: int) -> List[int]:
    # prev holds c_{level-1, 2s} for s <= min(kmax, 2^(level-1)).
    half = pow2(level - 1)
    size = min(kmax, pow2(level)) + 1
    row = [0] * size
    row[0] = prev[0] * prev[0] - 2
    for k in range(1, size):
        acc = 0
        for s in range(max(0, k - half), min((k - 1) // 2, half - 1) + 1):
            acc += prev[s] * prev[k - s]
        row[k] = 2 * acc
        if k % 2 == 0:
            row[k] += prev[k // 2] ** 2
    return row


def coeffs_level_recursion(n: int, kmax: int) -> CoeffVector:
    """
    Row n built from row 0 by the level recursion

        c_{n,0}  = c_{n-1,0}^2 - 2
        c_{n,2k} = eps(k) c_{n-1,k}^2 + 2 sum_s c_{n-1,2s} c_{n-1,2(k-s)}

    with s from max(0, k - 2^(n-1)) to min(floor((k-1)/2), 2^(n-1) - 1).
    Entry k only reads entries <= k of the previous row, so every row can be
    cut at kmax; this keeps n around 40 cheap.

    Raises:
        DomainError: if n < 0, kmax < 0 or kmax > 2**n
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if kmax < 0 or kmax > pow2(n):
        raise DomainError(f"kmax must lie in [0, 2^{n}], got {kmax}")
    row = [-2, 1][: kmax + 1]
    for level in range(1, n + 1):
        row = _next_row(row, level, kmax)
    return CoeffVector(n, kmax, row)


def coeffs_level_rows(n_max: int, kmax: int) -> List[CoeffVector]:
    """Rows 0..n_max in one pass, each truncated at min(kmax, 2**n)."""
    if n_max < 0 or kmax < 0:
        raise DomainError("n_max and kmax must be nonnegative")
    row = [-2, 1][: kmax + 1]
    rows = [CoeffVector(0, len(row) - 1, row)]
    for level in range(1, n_max + 1):
        row = _next_row(row, level, kmax)
        rows.append(CoeffVector(level, len(row) - 1, row))
    return rows


_TOP_THRESHOLDS = {1: 0, 2: 1, 3: 2, 4: 3}


def closed_form_top(n: int, j: int) -> int:
    """
    Closed forms for c_{n,2(2^n - j)}, j = 1..4.

        j=1: -2^(n+1)
        j=2: 2^n (2^(n+1) - 3)                                      n >= 1
        j=3: 2^(n+1)(2^(n+1) - 3) - 2^n (2^(n+1) - 1)(2^(n+1) - 2) / 3   n >= 2
        j=4: 2^(n-1)(2^n - 3)(4 (2^(n+1) - 1)(2^(n+1) - 2) / 3 - (2^(2(n+1)) - 9))   n >= 3
    """
    if j not in _TOP_THRESHOLDS:
        raise DomainError(f"j must lie in 1..4, got {j}")
    if n < _TOP_THRESHOLDS[j]:
        raise DomainError(f"the closed form for j={j} needs n >= {_TOP_THRESHOLDS[j]}, got n={n}")
    t = pow2(n + 1)
    if j == 1:
        value = Fraction(-t)
    elif j == 2:
        value = Fraction(pow2(n) * (t - 3))
    elif j == 3:
        value = t * (t - 3) - Fraction(pow2(n) * (t - 1) * (t - 2), 3)
    else:
        value = Fraction(pow2(n - 1) * (pow2(n) - 3)) * (
            Fraction(4 * (t - 1) * (t - 2), 3) - (t * t - 9)
        )
    try:
        return as_integer(value, f"closed form c[{n},2(2^{n}-{j})]")
    except ArithmeticError as exc:
        raise ConsistencyError(str(exc)) from None


def closed_form_low(n: int, k: int) -> Fraction:
    """
    c_{n,2}, c_{n,4}, c_{n,6} as rational combinations of 2^(2n), 2^(4n), 2^(6n).
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    y = Fraction(pow2(2 * n))
    if k == 1:
        value = -y
    elif k == 2:
        value = -y / 12 + y**2 / 12
    elif k == 3:
        value = -y / 90 + y**2 / 72 - y**3 / 360
    else:
        raise DomainError(f"k must lie in 1..3, got {k}")
    if value.denominator != 1:
        raise ConsistencyError(f"closed form c[{n},{2 * k}] is not integral: {value}")
    return value


def c2_first_order(n: int) -> int:
    """c_{n,2} = 4 c_{n-1,2} with c_{1,2} = -4 (second-derivative argument)."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    value = -4
    for _ in range(2, n + 1):
        value *= 4
    return value


def c4_first_order(n: int) -> int:
    """c_{n,4} = 2^(4n-4) + 4 c_{n-1,4} with c_{1,4} = 1 (fourth-derivative argument)."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    value = 1
    for level in range(2, n + 1):
        value = pow2(4 * level - 4) + 4 * value
    return value


def coeff_from_invariants(n: int, k: int, table) -> int:
    """
    c_{n,2k} = sum_{j=1}^{k} a_{j,k} 2^(2jn), and 2 when k == 0.

    ``table`` is anything with ``kmax`` and ``column(k)`` (an InvariantTable).

    Raises:
        DomainError: n < 1, k > 2**n or k beyond the table
        ConsistencyError: the rational sum is not an integer
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 2
    if n < ceil_log2(k):
        raise DomainError(f"k={k} exceeds 2^{n}")
    if k > table.kmax:
        raise DomainError(f"k={k} is beyond the table (kmax={table.kmax})")
    total = Fraction(0)
    for j, a in enumerate(table.column(k), start=1):
        total += a * pow2(2 * j * n)
    if total.denominator != 1:
        raise ConsistencyError(
            f"invariant sum for c[{n},{2 * k}] is not integral ({total}); the table is wrong"
        )
    return total.numerator


def remark_item5_holds(row: CoeffVector) -> bool:
    """2 == -sum_{i=1}^{2^n} C(2i, i) c_{n,2i}, for a complete row with n >= 1."""
    if not row.complete:
        raise DomainError("the identity needs a complete row")
    if row.n < 1:
        raise DomainError("the identity holds for n >= 1")
    total = sum(binomial(2 * i, i) * c for i, c in enumerate(row.values) if i >= 1)
    return -total == 2


def vector_to_json(row: CoeffVector) -> dict:
    return {"n": row.n, "kmax": row.kmax, "values": [format_int(v) for v in row.values]}


def vector_from_json(data: Mapping) -> CoeffVector:
    return CoeffVector(int(data["n"]), int(data["kmax"]), tuple(int(v) for v in data["values"]))


def vector_to_csv_rows(row: CoeffVector) -> Iterable[Tuple[int, int, str]]:
    return [(row.n, k, format_int(v)) for k, v in enumerate(row.values)]
