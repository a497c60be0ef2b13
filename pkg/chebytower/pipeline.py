"""
Dependency graph runner for the verification suite.

Nodes of a ``networkx.DiGraph`` carry a ``task`` attribute: a callable that
receives a dict {predecessor: result} and returns its own result. Nodes are
executed in Kahn order; the sweep records for every node its elapsed time and
its finish time

    finish[v] = max_{(u->v)} finish[u] + elapsed[v]

together with the predecessor achieving the maximum, so the slowest chain of
dependencies can be traced back afterwards.

A task fails by raising a ChebytowerError or ArithmeticError; any other
exception is a bug in the task and propagates out of run_pipeline.
"""

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Optional

import networkx as nx

from .errors import ChebytowerError

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


def kahn_order(G: nx.DiGraph, rank: Optional[Callable[[Hashable], Any]] = None) -> List[Hashable]:
    """
    Topological order by Kahn's algorithm.

    Among nodes that are ready at the same time, the one with the smallest
    ``rank(node)`` goes first; equal ranks keep the graph's insertion order.
    Without ``rank``, ready nodes leave in insertion order.

    Raises:
        TypeError: If graph is not directed
        nx.NetworkXUnfeasible: If graph contains cycles
    """
    if not G.is_directed():
        raise TypeError(f"execution graph must be a DiGraph, got {type(G).__name__}")

    position = {v: i for i, v in enumerate(G)}
    if rank is None:
        rank = position.__getitem__
    waiting = dict(G.in_degree())
    ready = [(rank(v), position[v], v) for v, d in waiting.items() if d == 0]
    heapq.heapify(ready)

    order = []
    while ready:
        _, _, v = heapq.heappop(ready)
        order.append(v)
        for w in G.successors(v):
            waiting[w] -= 1
            if waiting[w] == 0:
                heapq.heappush(ready, (rank(w), position[w], w))

    if len(order) != len(G):
        stuck = sorted(str(v) for v, d in waiting.items() if d > 0)
        raise nx.NetworkXUnfeasible(f"dependency cycle among {', '.join(stuck[:5])}")
    return order


@dataclass
class NodeRun:
    status: str
    result: Any = None
    error: Optional[BaseException] = None
    elapsed: float = 0.0
    finish: float = 0.0
    backpred: Optional[Hashable] = None


@dataclass
class PipelineRun:
    order: List[Hashable]
    nodes: Dict[Hashable, NodeRun] = field(default_factory=dict)

    def status(self, node: Hashable) -> str:
        return self.nodes[node].status

    def result(self, node: Hashable) -> Any:
        return self.nodes[node].result


def _run_task(task: Callable[[Dict[Hashable, Any]], Any], inputs: Dict[Hashable, Any]) -> NodeRun:
    start = time.perf_counter()
    try:
        result = task(inputs)
    except (ChebytowerError, ArithmeticError) as exc:
        return NodeRun(FAIL, error=exc, elapsed=time.perf_counter() - start)
    return NodeRun(PASS, result=result, elapsed=time.perf_counter() - start)


def run_pipeline(
    G: nx.DiGraph,
    task_attr: str = "task",
    rank: Optional[Callable[[Hashable], Any]] = None,
) -> PipelineRun:
    """
    Forward sweep in Kahn order.

    A node runs only when every predecessor passed; otherwise it is marked
    skipped and its own successors are skipped in turn. A node without a task
    passes through with result None.
    """
    order = kahn_order(G, rank)
    run = PipelineRun(order)
    for v in order:
        preds = list(G.predecessors(v))
        failed = [u for u in preds if run.nodes[u].status != PASS]
        best = max(preds, key=lambda u: run.nodes[u].finish) if preds else None
        start_at = run.nodes[best].finish if best is not None else 0.0
        if failed:
            node = NodeRun(SKIPPED, error=run.nodes[failed[0]].error)
            logger.debug("skipping %s: dependency %s did not pass", v, failed[0])
        else:
            task = G.nodes[v].get(task_attr)
            if task is None:
                node = NodeRun(PASS)
            else:
                node = _run_task(task, {u: run.nodes[u].result for u in preds})
                if node.status == FAIL:
                    logger.debug("%s failed: %s", v, node.error)
        node.finish = start_at + node.elapsed
        node.backpred = best
        run.nodes[v] = node
    return run


def critical_chain(run: PipelineRun) -> List[Hashable]:
    """
    The dependency chain ending at the latest-finishing node, sources first.
    """
    if not run.nodes:
        return []
    latest = max(run.order, key=lambda v: (run.nodes[v].finish, -run.order.index(v)))
    chain = []
    current: Optional[Hashable] = latest
    while current is not None:
        chain.append(current)
        current = run.nodes[current].backpred
    chain.reverse()
    logger.info("slowest chain %s finishes at %.3f s", " -> ".join(map(str, chain)),
                run.nodes[latest].finish)
    return chain
