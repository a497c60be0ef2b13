"""
Labeled ordered trees T_k and the weighted Catalan numbers a_{k,k}.

A tree of T_k is a leaf labeled 1 (k = 1) or a root labeled k with two
ordered subtrees whose labels add up to k. Every leaf is labeled 1, so the
root label equals the number of leaves and |T_k| = Catalan(k - 1).

The weight of a tree is the product of b_v over its node labels, with
b_1 = -1 and b_v = 1 / (4 (4^(v-1) - 1)) for v >= 2; summed over T_k it
gives a_{k,k}.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .config import ENUMERATION_GUARD
from .errors import DomainError, ResourceGuardError
from .invariants import b_weight
from .numeric import binomial, format_int

logger = logging.getLogger(__name__)

LEAF_WEIGHT = Fraction(-1)


def node_weight(v: int) -> Fraction:
    """b_v, with b_1 = -1."""
    if v < 1:
        raise DomainError(f"labels are positive, got {v}")
    return LEAF_WEIGHT if v == 1 else b_weight(v)


@dataclass(frozen=True)
class OrderedTree:
    """
    Leaf (label 1, no children) or node (label = left.label + right.label).

    ``weight`` is filled in on construction from the children's weights, so
    shared subtrees are never re-weighed.
    """

    label: int
    left: Optional["OrderedTree"] = None
    right: Optional["OrderedTree"] = None
    weight: Fraction = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.left is None and self.right is None:
            if self.label != 1:
                raise DomainError(f"leaves are labeled 1, got {self.label}")
            object.__setattr__(self, "weight", LEAF_WEIGHT)
            return
        if self.left is None or self.right is None:
            raise DomainError("an internal node needs exactly two children")
        if self.left.label + self.right.label != self.label:
            raise DomainError(
                f"children labels {self.left.label}+{self.right.label} do not add up to {self.label}"
            )
        object.__setattr__(
            self, "weight", node_weight(self.label) * self.left.weight * self.right.weight
        )

    @property
    def is_leaf(self) -> bool:
        return self.left is None


LEAF = OrderedTree(1)


@dataclass(frozen=True)
class WeightMonomial:
    """prod_v b_v^delta_v, stored as sorted (v, delta_v) pairs."""

    exponents: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "WeightMonomial":
        return cls(tuple(sorted((int(v), int(d)) for v, d in counts.items() if d)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exponents)

    def value(self) -> Fraction:
        total = Fraction(1)
        for v, d in self.exponents:
            total *= node_weight(v) ** d
        return total

    def render(self) -> str:
        return " ".join(f"b{v}" if d == 1 else f"b{v}^{d}" for v, d in self.exponents)


def join(k: int, left: OrderedTree, right: OrderedTree) -> OrderedTree:
    """Hang two trees under a new root labeled k."""
    return OrderedTree(k, left, right)


def split_root(tree: OrderedTree) -> Tuple[OrderedTree, OrderedTree]:
    """Remove the root: (left subtree, right subtree)."""
    if tree.is_leaf:
        raise DomainError("a leaf has no root to split")
    return tree.left, tree.right


def catalan(m: int) -> int:
    return binomial(2 * m, m) // (m + 1)


def count(k: int) -> int:
    """|T_k| by the convolution c(k) = sum_{s=1}^{k-1} c(s) c(k-s), c(1) = 1."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    counts = [0, 1]
    for m in range(2, k + 1):
        counts.append(sum(counts[s] * counts[m - s] for s in range(1, m)))
    return counts[k]


def _check_guard(k: int, guard: int):
    size = count(k)
    if size > guard:
        raise ResourceGuardError(f"|T_{k}|", size, guard)


def enumerate_trees(k: int, guard: int = ENUMERATION_GUARD) -> List[OrderedTree]:
    """
    All trees of T_k, left-heavy splits first.

    Built bottom-up: T_m = [join(m, S, R) for s = m-1..1, S in T_s, R in T_(m-s)],
    so subtrees are shared between the lists.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    _check_guard(k, guard)
    memo: List[List[OrderedTree]] = [[], [LEAF]]
    for m in range(2, k + 1):
        level = []
        for s in range(m - 1, 0, -1):
            for left in memo[s]:
                for right in memo[m - s]:
                    level.append(OrderedTree(m, left, right))
        memo.append(level)
    logger.debug("enumerated %d trees of T_%d", len(memo[k]), k)
    return memo[k]


def weight(tree: OrderedTree) -> Fraction:
    """prod_{v in V_T} b_v^delta_{v,T}."""
    return tree.weight


def label_counts(tree: OrderedTree) -> Counter:
    """delta_{v,T} for every label v of the tree."""
    counts: Counter = Counter()
    stack = [tree]
    while stack:
        node = stack.pop()
        counts[node.label] += 1
        if not node.is_leaf:
            stack.append(node.left)
            stack.append(node.right)
    return counts


def monomial(tree: OrderedTree) -> WeightMonomial:
    return WeightMonomial.from_counts(label_counts(tree))


def weighted_catalan_dp(kmax: int) -> List[Fraction]:
    """
    [W(1), ..., W(kmax)] with W(1) = -1 and W(k) = b_k sum_{s=1}^{k-1} W(s) W(k-s).
    """
    if kmax < 1:
        raise DomainError(f"kmax must be positive, got {kmax}")
    sums = [Fraction(0), LEAF_WEIGHT]
    for k in range(2, kmax + 1):
        total = sum((sums[s] * sums[k - s] for s in range(1, k)), Fraction(0))
        sums.append(b_weight(k) * total)
    return sums[1:]


def weighted_catalan(k: int, method: str = "auto", guard: int = ENUMERATION_GUARD) -> Fraction:
    """
    sum_{T in T_k} weight(T).

    method "enumerate" lists the trees (subject to the guard), "dp" uses the
    convolution recursion, "auto" enumerates when the guard allows it.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    if method == "auto":
        method = "enumerate" if count(k) <= guard else "dp"
    if method == "enumerate":
        return sum((t.weight for t in enumerate_trees(k, guard)), Fraction(0))
    if method == "dp":
        return weighted_catalan_dp(k)[-1]
    raise DomainError(f"unknown method {method!r}; expected 'auto', 'enumerate' or 'dp'")


def grouped_weights(k: int, guard: int = ENUMERATION_GUARD) -> Dict[WeightMonomial, int]:
    """Trees of T_k grouped by weight monomial, in sorted monomial order."""
    groups: Counter = Counter(monomial(t) for t in enumerate_trees(k, guard))
    return {m: groups[m] for m in sorted(groups, key=lambda m: m.exponents)}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render(tree: OrderedTree) -> str:
    """Canonical text: "1" for a leaf, "k(left,right)" otherwise."""
    if tree.is_leaf:
        return "1"
    return f"{tree.label}({render(tree.left)},{render(tree.right)})"


def parse(text: str) -> OrderedTree:
    """Inverse of render."""
    text = text.replace(" ", "")
    tree, pos = _parse_at(text, 0)
    if pos != len(text):
        raise DomainError(f"trailing characters in tree text at {pos}: {text[pos:]!r}")
    return tree


def _parse_at(text: str, pos: int) -> Tuple[OrderedTree, int]:
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise DomainError(f"expected a label at position {start} in {text!r}")
    label = int(text[start:pos])
    if pos == len(text) or text[pos] != "(":
        return OrderedTree(label), pos
    left, pos = _parse_at(text, pos + 1)
    if pos >= len(text) or text[pos] != ",":
        raise DomainError(f"expected ',' at position {pos} in {text!r}")
    right, pos = _parse_at(text, pos + 1)
    if pos >= len(text) or text[pos] != ")":
        raise DomainError(f"expected ')' at position {pos} in {text!r}")
    return OrderedTree(label, left, right), pos + 1


def tree_to_json(tree: OrderedTree) -> dict:
    """Nested {"label": int, "children": [...]}, expanded in full."""
    if tree.is_leaf:
        return {"label": 1, "children": []}
    return {"label": tree.label, "children": [tree_to_json(tree.left), tree_to_json(tree.right)]}


def grouped_to_json(groups: Mapping[WeightMonomial, int]) -> List[dict]:
    return [
        {"monomial": {str(v): d for v, d in m.exponents}, "count": format_int(c)}
        for m, c in groups.items()
    ]
