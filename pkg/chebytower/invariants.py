"""
The n-independent invariants a_{j,k} with c_{n,2k} = sum_j a_{j,k} 2^(2jn).

Two independent constructions:
    invariants_recursive    column-by-column recursion through the weights
                            b_j and the auxiliary sums u, v, w
    invariants_vandermonde  exact two-phase divided-difference solve of the
                            Vandermonde system on the nodes 2^(2 l)
plus the diagonal recursion for a_{k,k} and the companion recursion for a_{2,k}.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .coeffs import coeffs_level_recursion
from .errors import ConsistencyError, DomainError
from .numeric import ceil_log2, epsilon, format_rational, is_exact, parse_rational, pow2

logger = logging.getLogger(__name__)

Entries = Mapping[Tuple[int, int], Fraction]
CoeffSource = Callable[[int], int]


@dataclass(frozen=True)
class InvariantTable:
    """
    Lower-triangular table of a_{j,k}, 1 <= j <= k <= kmax.

    ``entries`` is keyed by (j, k).
    """

    kmax: int
    entries: Entries

    def __post_init__(self):
        if self.kmax < 1:
            raise DomainError(f"kmax must be positive, got {self.kmax}")
        missing = [(j, k) for k in range(1, self.kmax + 1) for j in range(1, k + 1)
                   if (j, k) not in self.entries]
        if missing:
            raise DomainError(f"table is missing entries, first {missing[0]}")
        object.__setattr__(self, "entries", {key: Fraction(v) for key, v in self.entries.items()})

    def a(self, j: int, k: int) -> Fraction:
        return self.entries[(j, k)]

    def column(self, k: int) -> List[Fraction]:
        """[a_{1,k}, ..., a_{k,k}]."""
        return [self.entries[(j, k)] for j in range(1, k + 1)]

    def diagonal(self) -> List[Fraction]:
        return [self.entries[(k, k)] for k in range(1, self.kmax + 1)]


@dataclass(frozen=True)
class BPWorkspace:
    """
    Snapshot of the divided-difference solver.

    phase "nu" holds nu^(stage) (stage 1..k); phase "a" holds a^(stage)
    (stage k-1 down to 1).
    """

    k: int
    nu: Tuple[Fraction, ...]
    stage: int
    phase: str = "nu"


def eta(k: int) -> int:
    """ceil(log2 k): the smallest n with k <= 2^n."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    return ceil_log2(k)


def b_weight(j: int) -> Fraction:
    """b_j = 1 / (4 (4^(j-1) - 1)) for j >= 2."""
    if j < 2:
        raise DomainError(f"b_j is defined here for j >= 2, got j={j}")
    return Fraction(1, 4 * (pow2(2 * (j - 1)) - 1))


def _entry(table: Union[InvariantTable, Entries], j: int, k: int) -> Fraction:
    entries = table.entries if isinstance(table, InvariantTable) else table
    try:
        return entries[(j, k)]
    except KeyError:
        raise ConsistencyError(f"a[{j},{k}] is needed but not yet computed") from None


def u_term(j: int, k: int, table: Union[InvariantTable, Entries]) -> Fraction:
    """
    Cross terms of the square of column k/2:

        2 sum_{l=max(1, j-k/2)}^{min(floor((j-1)/2), k/2-1)} eps(k) a_{l,k/2} a_{j-l,k/2}

    when 3 <= j <= k-1, zero otherwise (and zero for odd k).
    """
    if not 3 <= j <= k - 1 or epsilon(k) == 0:
        return Fraction(0)
    half = k // 2
    total = Fraction(0)
    for l in range(max(1, j - half), min((j - 1) // 2, half - 1) + 1):
        total += _entry(table, l, half) * _entry(table, j - l, half)
    return 2 * total


def _v_lower(l_k: int, k: int) -> int:
    if l_k == 0:
        return 0
    if l_k == k:
        e = eta(k)
        return k - pow2(e - 1) if e >= 1 else k
    raise DomainError(f"l_k must be 0 or k={k}, got {l_k}")


def v_term(l_k: int, j: int, k: int, table: Union[InvariantTable, Entries]) -> Fraction:
    """
    Products of distinct earlier columns:

        sum_{s=u}^{floor((k-1)/2)} sum_{r=max(1, j-k+s)}^{min(j-1, s)} a_{r,s} a_{j-r,k-s}

    with u = 0 off resonance (l_k = 0) and u = k - 2^(eta_k - 1) at resonance
    (l_k = k). The s = 0 term is always empty.
    """
    total = Fraction(0)
    for s in range(_v_lower(l_k, k), (k - 1) // 2 + 1):
        for r in range(max(1, j - k + s), min(j - 1, s) + 1):
            total += _entry(table, r, s) * _entry(table, j - r, k - s)
    return total


def w_term(l_k: int, j: int, k: int, table: Union[InvariantTable, Entries]) -> Fraction:
    square = Fraction(0)
    if epsilon(k) and epsilon(j):
        square = _entry(table, j // 2, k // 2) ** 2
    return square + u_term(j, k, table) + 2 * v_term(l_k, j, k, table)


def invariants_recursive(kmax: int) -> InvariantTable:
    """
    Fill a_{j,k} column by column.

    a_{1,1} = -1; for k >= 2, a_{j,k} = b_j w_0(j,k) for j = k..2, then
    a_{1,k} = sum_{l=2}^{k} (2^(-2l) w_k(l,k) - a_{l,k}) 2^(2 eta_k (l-1)).
    """
    if kmax < 1:
        raise DomainError(f"kmax must be positive, got {kmax}")
    start = time.perf_counter()
    entries: Dict[Tuple[int, int], Fraction] = {(1, 1): Fraction(-1)}
    for k in range(2, kmax + 1):
        for j in range(k, 1, -1):
            entries[(j, k)] = b_weight(j) * w_term(0, j, k, entries)
        e = eta(k)
        first = Fraction(0)
        for l in range(2, k + 1):
            first += (w_term(k, l, k, entries) / pow2(2 * l) - entries[(l, k)]) * pow2(2 * e * (l - 1))
        entries[(1, k)] = first
        logger.debug("invariant column k=%d done", k)
    logger.info("recursive invariant table kmax=%d in %.3f s", kmax, time.perf_counter() - start)
    return InvariantTable(kmax, entries)


def _default_source(k: int) -> CoeffSource:
    def source(n: int) -> int:
        return coeffs_level_recursion(n, k).values[k]
    return source


def invariants_vandermonde_trace(k: int, coeff_source: Optional[CoeffSource] = None) -> List[BPWorkspace]:
    """
    Run the divided-difference solver and keep every intermediate vector.

    Rows use n = n0 .. n0+k-1 with n0 = max(1, eta_k) (the identity behind
    the system needs n >= 1). Node j is x_j = 2^(2 l_j), l_j = n0 + j - 1,
    and the right-hand side is nu^(1)_j = c_{l_j,2k} / x_j.

    Phase 1 (j downward, in place):
        nu_j <- (nu_j - nu_{j-1}) / (x_j - x_{j-i}),   j = k..i+1
    Phase 2 (j upward, in place):
        a_j <- a_j - x_i a_{j+1},                      j = i..k-1
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    source = coeff_source or _default_source(k)
    n0 = max(1, eta(k))
    nodes = [pow2(2 * (n0 + idx)) for idx in range(k)]
    nu: List[Fraction] = []
    for idx in range(k):
        c = source(n0 + idx)
        if not is_exact(c):
            raise ConsistencyError(
                f"coefficient source returned a non-exact value {c!r} for n={n0 + idx}"
            )
        nu.append(Fraction(c) / nodes[idx])
    trace = [BPWorkspace(k, tuple(nu), 1, "nu")]
    for i in range(1, k):
        for j in range(k, i, -1):
            nu[j - 1] = (nu[j - 1] - nu[j - 2]) / (nodes[j - 1] - nodes[j - 1 - i])
        trace.append(BPWorkspace(k, tuple(nu), i + 1, "nu"))
    a = nu
    for i in range(k - 1, 0, -1):
        for j in range(i, k):
            a[j - 1] = a[j - 1] - nodes[i - 1] * a[j]
        trace.append(BPWorkspace(k, tuple(a), i, "a"))
    return trace


def invariants_vandermonde(k: int, coeff_source: Optional[CoeffSource] = None) -> List[Fraction]:
    """Column k, [a_{1,k}, ..., a_{k,k}], from the divided-difference solver."""
    return list(invariants_vandermonde_trace(k, coeff_source)[-1].nu)


def invariants_vandermonde_table(kmax: int) -> InvariantTable:
    if kmax < 1:
        raise DomainError(f"kmax must be positive, got {kmax}")
    start = time.perf_counter()
    entries: Dict[Tuple[int, int], Fraction] = {}
    for k in range(1, kmax + 1):
        for j, value in enumerate(invariants_vandermonde(k), start=1):
            entries[(j, k)] = value
    logger.info("vandermonde invariant table kmax=%d in %.3f s", kmax, time.perf_counter() - start)
    return InvariantTable(kmax, entries)


def diagonal_recursive(kmax: int) -> List[Fraction]:
    """
    [a_{1,1}, ..., a_{kmax,kmax}] from

        a_{k,k} = b_k (eps(k) a_{k/2,k/2}^2 + sum_{s=1}^{floor((k-1)/2)} 2 a_{s,s} a_{k-s,k-s})
    """
    if kmax < 1:
        raise DomainError(f"kmax must be positive, got {kmax}")
    diag = [Fraction(0), Fraction(-1)]
    for k in range(2, kmax + 1):
        total = diag[k // 2] ** 2 if epsilon(k) else Fraction(0)
        for s in range(1, (k - 1) // 2 + 1):
            total += 2 * diag[s] * diag[k - s]
        diag.append(b_weight(k) * total)
    return diag[1:]


def second_row_recursive(table: InvariantTable) -> List[Fraction]:
    """
    [a_{2,2}, ..., a_{2,kmax}] recomputed from the first row of ``table``:

        a_{2,k} = b_2 (eps(k) a_{1,k/2}^2 + sum_{s=1}^{floor((k-1)/2)} 2 a_{1,s} a_{1,k-s})
    """
    row = []
    for k in range(2, table.kmax + 1):
        total = table.a(1, k // 2) ** 2 if epsilon(k) else Fraction(0)
        for s in range(1, (k - 1) // 2 + 1):
            total += 2 * table.a(1, s) * table.a(1, k - s)
        row.append(b_weight(2) * total)
    return row


def first_difference(left: InvariantTable, right: InvariantTable) -> Optional[Tuple[int, int]]:
    """First (j, k), in column order, where two tables differ; None if equal."""
    for k in range(1, min(left.kmax, right.kmax) + 1):
        for j in range(1, k + 1):
            if left.a(j, k) != right.a(j, k):
                return (j, k)
    if left.kmax != right.kmax:
        k = min(left.kmax, right.kmax) + 1
        return (1, k)
    return None


def sign_pattern_observation(table: InvariantTable) -> bool:
    """
    Whether sign(a_{j,k}) = (-1)^j over the whole table. Reported, not a claim.
    """
    holds = all(
        (table.a(j, k) > 0) == (j % 2 == 0) and table.a(j, k) != 0
        for k in range(1, table.kmax + 1)
        for j in range(1, k + 1)
    )
    if not holds:
        logger.warning("sign pattern (-1)^j does not hold up to kmax=%d", table.kmax)
    return holds


def table_to_json(table: InvariantTable) -> dict:
    return {
        "kmax": table.kmax,
        "a": [[format_rational(v) for v in table.column(k)] for k in range(1, table.kmax + 1)],
    }


def table_from_json(data: Mapping) -> InvariantTable:
    kmax = int(data["kmax"])
    columns: Sequence[Sequence[str]] = data["a"]
    if len(columns) != kmax:
        raise DomainError(f"expected {kmax} columns, got {len(columns)}")
    entries = {}
    for k, column in enumerate(columns, start=1):
        if len(column) != k:
            raise DomainError(f"column {k} has {len(column)} entries")
        for j, text in enumerate(column, start=1):
            entries[(j, k)] = parse_rational(text)
    return InvariantTable(kmax, entries)
