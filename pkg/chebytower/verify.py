"""
Cross-validation suite.

Every exact route is checked against every other one. The suite is laid out
as a dependency graph (see ``pipeline``): artifact nodes build polynomials and
invariant tables once, check nodes consume them. A check passes when its task
returns, fails when it raises, and is skipped when an artifact it needs could
not be built.
"""

import json
import logging
import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import mpmath
import networkx as nx

from .coeffs import (
    CoeffVector,
    c2_first_order,
    c4_first_order,
    closed_form_low,
    closed_form_top,
    coeff_from_invariants,
    coeffs_backsub,
    coeffs_level_recursion,
    remark_item5_holds,
)
from .config import ENUMERATION_GUARD, MAX_DEGREE_LOG2, PRECISION_BITS
from .errors import ConsistencyError, DomainError
from .invariants import (
    diagonal_recursive,
    first_difference,
    invariants_recursive,
    invariants_vandermonde_table,
    second_row_recursive,
    sign_pattern_observation,
)
from .numeric import ceil_log2, format_rational, pow2
from .pipeline import FAIL, PASS, SKIPPED, critical_chain, run_pipeline
from .polyseq import (
    _check_n,
    corollary_probe,
    cyclotomic_identity_check,
    gen_p,
    gen_q,
    residual_tolerance,
    root_residual,
    sign_alternates,
    trig_residual,
)
from .trees import catalan, count, weighted_catalan

logger = logging.getLogger(__name__)

# Largest e for the corollary probe; p_{e-3} composed has degree 2^(e-1).
COROLLARY_E_MAX = 8
THETA_COUNT = 16


@dataclass
class CheckRecord:
    name: str
    params: str
    status: str
    detail: str = ""
    elapsed_ms: int = 0

    def to_text(self) -> str:
        line = f"{self.name} {self.params}: {self.status}" if self.params else f"{self.name}: {self.status}"
        return f"{line} ({self.detail})" if self.detail else line


@dataclass
class VerificationReport:
    checks: List[CheckRecord] = field(default_factory=list)
    critical_chain: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(c.status == FAIL for c in self.checks)

    def counts(self) -> Dict[str, int]:
        tally = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            tally[c.status] += 1
        return tally

    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status == FAIL]

    def to_text(self) -> str:
        lines = [c.to_text() for c in self.checks]
        tally = self.counts()
        lines.append(
            f"{tally[PASS]} passed, {tally[FAIL]} failed, {tally[SKIPPED]} skipped"
        )
        if self.critical_chain:
            lines.append("slowest chain: " + " -> ".join(self.critical_chain))
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
            "critical_chain": self.critical_chain,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Check bodies. Each raises ConsistencyError on disagreement and may return a
# short detail string for the report.
# ---------------------------------------------------------------------------

def _expect(condition: bool, message: str):
    if not condition:
        raise ConsistencyError(message)


def _p_equals_q(n: int, p, max_degree_log2: int):
    _expect(gen_q(n, max_degree_log2) == p, f"q_{n} differs from p_{n}")


def _sign_alternation(n: int, p):
    _expect(sign_alternates(p), f"coefficients of p_{n} do not alternate strictly")


def _backsub_equals_square(n: int, p, max_degree_log2: int):
    row = coeffs_backsub(n, max_degree_log2)
    _expect(row.values == p.coeffs, f"back-substitution row {n} differs from p_{n}")


def _level_equals_square(n: int, p):
    row = coeffs_level_recursion(n, pow2(n))
    _expect(row.values == p.coeffs, f"level recursion row {n} differs from p_{n}")


def _level_prefix(n: int, kmax: int, p):
    row = coeffs_level_recursion(n, kmax)
    _expect(row.values == p.coeffs[: kmax + 1], f"truncated row {n} at kmax={kmax} is not a prefix")


def _remark_identity(n: int, p):
    row = CoeffVector(n, pow2(n), p.coeffs)
    _expect(remark_item5_holds(row), f"sum C(2i,i) c[{n},2i] != -2")


def _closed_forms(n: int, p) -> str:
    top = pow2(n)
    used = []
    for j in range(1, 5):
        if n >= {1: 0, 2: 1, 3: 2, 4: 3}[j] and j <= top:
            _expect(closed_form_top(n, j) == p.coeffs[top - j], f"top closed form j={j} at n={n}")
            used.append(f"top{j}")
    if n >= 1:
        for k in range(1, 4):
            if ceil_log2(k) <= n and k <= top:
                _expect(closed_form_low(n, k) == p.coeffs[k], f"low closed form k={k} at n={n}")
                used.append(f"low{k}")
        _expect(c2_first_order(n) == p.coeffs[1], f"c[{n},2] first-order route")
        _expect(c4_first_order(n) == p.coeffs[2], f"c[{n},4] first-order route")
        used.append("first-order")
    return ",".join(used)


def _invariant_sums(n: int, p, table) -> str:
    checked = 0
    for k in range(1, min(table.kmax, pow2(n)) + 1):
        if n < ceil_log2(k):
            continue
        value = coeff_from_invariants(n, k, table)
        _expect(value == p.coeffs[k], f"invariant sum c[{n},{2 * k}] = {value}, expected {p.coeffs[k]}")
        checked += 1
    return f"{checked} entries"


def _tables_agree(left, right):
    diff = first_difference(left, right)
    if diff is not None:
        j, k = diff
        raise ConsistencyError(
            f"tables differ at (j,k)=({j},{k}): {format_rational(left.a(j, k))} vs {format_rational(right.a(j, k))}"
        )


def _diagonal(table, guard: int) -> str:
    diag = diagonal_recursive(table.kmax)
    _expect(diag == table.diagonal(), "diagonal recursion disagrees with the table")
    for k in range(1, table.kmax + 1):
        _expect(count(k) == catalan(k - 1), f"|T_{k}| != Catalan({k - 1})")
        wc = weighted_catalan(k, "auto", guard)
        _expect(wc == diag[k - 1], f"weighted Catalan at k={k} is {format_rational(wc)}")
    return f"a[{table.kmax},{table.kmax}]={format_rational(diag[-1])}"


def _second_row(table):
    expected = [table.a(2, k) for k in range(2, table.kmax + 1)]
    _expect(second_row_recursive(table) == expected, "second row recursion disagrees with the table")


def _trig(n: int, thetas: Sequence, precision_bits: int, max_degree_log2: int) -> str:
    tol = residual_tolerance(precision_bits)
    worst = mpmath.mpf(0)
    for theta in thetas:
        for method in ("dense", "tower"):
            worst = max(worst, trig_residual(n, theta, precision_bits, method, max_degree_log2))
    _expect(worst < tol, f"trig residual {mpmath.nstr(worst, 5)} above {mpmath.nstr(tol, 5)}")
    return f"max {mpmath.nstr(worst, 3)}"


def _root(n: int, precision_bits: int, max_degree_log2: int) -> str:
    tol = residual_tolerance(precision_bits)
    residual = root_residual(n, precision_bits, "dense", max_degree_log2)
    _expect(residual < tol, f"root residual {mpmath.nstr(residual, 5)} above {mpmath.nstr(tol, 5)}")
    return mpmath.nstr(residual, 3)


def _corollary(e: int, precision_bits: int, max_degree_log2: int) -> str:
    probe = corollary_probe(e, precision_bits, max_degree_log2=max_degree_log2)
    _expect(probe.unique, f"vanishing indices {probe.vanishing} at e={e}")
    index = probe.vanishing[0]
    if e == 3:
        return "base case x^2 + 2 vanishes"
    if index != probe.stated_index:
        return f"index {index} vanishes, not {probe.stated_index}"
    return f"index {index} vanishes"


# ---------------------------------------------------------------------------
# Graph assembly
# ---------------------------------------------------------------------------

def _poly_node(n: int) -> str:
    return f"p_{n}"


def _add_check(G: nx.DiGraph, name: str, params: str, body: Callable, deps: Sequence[str] = ()):
    key = f"{name} {params}".strip()
    G.add_node(key, kind="check", name=name, params=params, task=body)
    for dep in deps:
        G.add_edge(dep, key)


def build_verification_graph(
    n_max: int,
    k_max: int,
    precision_bits: int = PRECISION_BITS,
    thetas: Optional[Sequence] = None,
    max_degree_log2: int = MAX_DEGREE_LOG2,
    enumeration_guard: int = ENUMERATION_GUARD,
) -> nx.DiGraph:
    """Artifact and check nodes with their dependencies."""
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    if k_max < 1:
        raise DomainError(f"k_max must be positive, got {k_max}")
    _check_n(n_max, max_degree_log2)
    thetas = list(thetas) if thetas is not None else default_thetas(THETA_COUNT)

    G = nx.DiGraph()
    for n in range(n_max + 1):
        G.add_node(_poly_node(n), kind="artifact", name="gen_p", params=f"n={n}",
                   task=lambda _, n=n: gen_p(n, max_degree_log2))
    G.add_node("table_recursive", kind="artifact", name="invariants_recursive",
               params=f"kmax={k_max}", task=lambda _: invariants_recursive(k_max))
    G.add_node("table_vandermonde", kind="artifact", name="invariants_vandermonde",
               params=f"kmax={k_max}", task=lambda _: invariants_vandermonde_table(k_max))

    for n in range(n_max + 1):
        pn = _poly_node(n)
        params = f"n={n}"

        def take(fn, n=n, pn=pn):
            return lambda inputs: fn(n, inputs[pn])

        _add_check(G, "p_equals_q", params,
                   take(lambda n, p: _p_equals_q(n, p, max_degree_log2)), [pn])
        _add_check(G, "cyclotomic_identity", params,
                   take(lambda n, p: _expect(cyclotomic_identity_check(n, max_degree_log2),
                                             f"Laurent identity fails at n={n}")), [pn])
        _add_check(G, "backsub_equals_square", params,
                   take(lambda n, p: _backsub_equals_square(n, p, max_degree_log2)), [pn])
        _add_check(G, "lemma_equals_square", params, take(_level_equals_square), [pn])
        kmax = min(k_max, pow2(n))
        _add_check(G, "lemma_prefix", f"n={n} kmax={kmax}",
                   take(lambda n, p, kmax=kmax: _level_prefix(n, kmax, p)), [pn])
        _add_check(G, "closed_forms", params, take(_closed_forms), [pn])
        _add_check(G, "root_residual", params,
                   lambda _, n=n: _root(n, precision_bits, max_degree_log2), [pn])
        _add_check(G, "trig_residual", params,
                   lambda _, n=n: _trig(n, thetas, precision_bits, max_degree_log2), [pn])
        if n >= 1:
            _add_check(G, "sign_alternation", params, take(_sign_alternation), [pn])
            _add_check(G, "remark_identity", params, take(_remark_identity), [pn])
            _add_check(G, "invariant_sum", params,
                       lambda inputs, n=n, pn=pn: _invariant_sums(n, inputs[pn], inputs["table_recursive"]),
                       [pn, "table_recursive"])

    tables = ["table_recursive", "table_vandermonde"]
    _add_check(G, "vandermonde_equals_recursive", f"kmax={k_max}",
               lambda inputs: _tables_agree(inputs[tables[0]], inputs[tables[1]]), tables)
    _add_check(G, "diagonal_equals_weighted_catalan", f"kmax={k_max}",
               lambda inputs: _diagonal(inputs["table_recursive"], enumeration_guard),
               ["table_recursive"])
    if k_max >= 2:
        _add_check(G, "second_row", f"kmax={k_max}",
                   lambda inputs: _second_row(inputs["table_recursive"]), ["table_recursive"])
    _add_check(G, "sign_pattern", f"kmax={k_max}",
               lambda inputs: "holds" if sign_pattern_observation(inputs["table_recursive"])
               else "does not hold (observation only)",
               ["table_recursive"])

    for e in range(3, min(n_max + 3, COROLLARY_E_MAX) + 1):
        _add_check(G, "corollary_probe", f"e={e}",
                   lambda _, e=e: _corollary(e, precision_bits, max_degree_log2),
                   [_poly_node(e - 3)])
    return G


def default_thetas(count: int, seed: int = 0) -> List:
    """Reproducible sample of angles in (0, pi)."""
    rng = random.Random(seed)
    return [mpmath.mpf(rng.uniform(1e-3, math.pi - 1e-3)) for _ in range(count)]


def _record(G: nx.DiGraph, key: str, node) -> CheckRecord:
    attrs = G.nodes[key]
    if node.status == PASS:
        detail = node.result if isinstance(node.result, str) else ""
    elif node.status == SKIPPED:
        detail = f"dependency failed: {node.error}" if node.error else "dependency failed"
    else:
        detail = str(node.error)
    return CheckRecord(attrs["name"], attrs["params"], node.status, detail,
                       int(round(node.elapsed * 1000)))


def verify(
    n_max: int,
    k_max: int,
    precision_bits: int = PRECISION_BITS,
    thetas: Optional[Sequence] = None,
    max_degree_log2: int = MAX_DEGREE_LOG2,
    enumeration_guard: int = ENUMERATION_GUARD,
) -> VerificationReport:
    """
    Run the whole suite and return the report.

    Checks come back sorted by name; checks sharing a name keep their build
    order. Failed artifacts are reported alongside the checks.
    """
    start = time.perf_counter()
    G = build_verification_graph(n_max, k_max, precision_bits, thetas,
                                 max_degree_log2, enumeration_guard)
    run = run_pipeline(G, rank=lambda v: G.nodes[v]["kind"] != "artifact")
    records = []
    for key in run.order:
        kind = G.nodes[key]["kind"]
        node = run.nodes[key]
        if kind == "check" or node.status == FAIL:
            records.append(_record(G, key, node))
    records.sort(key=lambda r: r.name)
    report = VerificationReport(records, [str(v) for v in critical_chain(run)])
    tally = report.counts()
    logger.info("verify n_max=%d k_max=%d: %d passed, %d failed, %d skipped in %.3f s",
                n_max, k_max, tally[PASS], tally[FAIL], tally[SKIPPED],
                time.perf_counter() - start)
    return report
