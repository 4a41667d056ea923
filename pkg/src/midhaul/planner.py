"""CU selection and CU-DU association.

The pipeline is: threshold the path set into a bipartite connectivity
graph, pick CUs greedily until every DU is covered, attach each DU to its
strongest selected CU, then align arrays, precode and score each CU's
group. :func:`plan_minimum_cus` wraps this in the outer loop that grows the
CU set until every link meets the rate target, or searches subsets
exhaustively.
"""

from dataclasses import dataclass, field, replace
from itertools import combinations
import math
import re

import numpy as np

from ._geometry import linear_to_db
from .arrays import ArrayConfig, align_cu, align_du
from .channel import synthesize_channel
from .exceptions import MidhaulError, PlanEvaluationError, UncoverableError
from .mimo import LinkMetrics, group_sinrs, link_rate, slnr_precoders, slnr_value, zf_precoders

__all__ = [
    "ConnectivityGraph",
    "AssociationPlan",
    "PlannerSettings",
    "build_connectivity",
    "greedy_order",
    "greedy_select",
    "associate",
    "evaluate_plan",
    "plan_minimum_cus",
    "plan_with_cu_count",
    "constraint_violations",
    "node_sort_key",
]


def node_sort_key(node_id):
    """Natural ordering so that CU2 sorts before CU10."""
    parts = re.split(r"(\d+)", node_id)
    return tuple(int(p) if p.isdigit() else p for p in parts)


@dataclass(frozen=True)
class PlannerSettings:
    """Evaluation policy. ``threshold_dbm`` gates graph edges."""

    cu_array: ArrayConfig = field(default_factory=ArrayConfig)
    du_array: ArrayConfig = field(default_factory=ArrayConfig)
    precoder: str = "slnr"
    threshold_dbm: float = -math.inf
    inter_cu_interference: bool = False

    def __post_init__(self):
        if self.precoder not in ("slnr", "zf"):
            raise ValueError(f"unknown precoder {self.precoder!r}; use 'slnr' or 'zf'")


@dataclass(frozen=True)
class ConnectivityGraph:
    """Bipartite CU-DU graph. ``edges`` maps (cu, du) to the best path power
    in dBm; ``paths`` holds every path of each connected pair."""

    cus: tuple
    dus: tuple
    edges: dict
    paths: dict

    def covered_by(self, cu):
        return {du for (c, du) in self.edges if c == cu}

    def strength(self, cu, du):
        return self.edges.get((cu, du), -math.inf)


@dataclass(frozen=True)
class AssociationPlan:
    """Selected CUs, DU->CU assignment and (after evaluation) link metrics.

    ``unserved`` lists DUs with no edge to any selected CU; they count as
    zero-rate links.
    """

    selected: tuple
    assignment: dict
    rate_target: float = 0.0
    links: dict = field(default_factory=dict)
    feasible: bool = False
    unserved: tuple = ()
    evaluated: bool = False

    @property
    def size(self):
        return len(self.selected)

    def served_by(self, cu):
        return [du for du, c in self.assignment.items() if c == cu]

    @property
    def bottlenecks(self):
        """DUs whose link misses the rate target, plus unserved DUs."""
        low = [du for du, m in self.links.items() if m.rate_bps < self.rate_target]
        return sorted(set(low) | set(self.unserved), key=node_sort_key)

    @property
    def satisfied_count(self):
        return sum(1 for m in self.links.values() if m.rate_bps >= self.rate_target)

    @property
    def min_rate(self):
        rates = [m.rate_bps for m in self.links.values()]
        if self.unserved:
            rates.append(0.0)
        return min(rates) if rates else 0.0

    def to_dict(self):
        return {
            "selected_cus": list(self.selected),
            "feasible": self.feasible,
            "rate_target_bps": self.rate_target,
            "assignment": dict(sorted(self.assignment.items(), key=lambda kv: node_sort_key(kv[0]))),
            "unserved": list(self.unserved),
            "bottlenecks": self.bottlenecks,
            "links": [
                {"cu_id": m.cu_id, "du_id": m.du_id, "slnr_db": m.slnr_db,
                 "sinr_db": m.sinr_db, "rate_bps": m.rate_bps}
                for _, m in sorted(self.links.items(), key=lambda kv: node_sort_key(kv[0]))
            ],
        }


def build_connectivity(scenario, threshold_dbm=-math.inf):
    """Edge (cu, du) iff some path between them reaches ``threshold_dbm``."""
    paths = scenario.paths_by_pair()
    edges = {}
    kept = {}
    for pair, plist in paths.items():
        best = max(p.rx_power for p in plist)
        if best >= threshold_dbm:
            edges[pair] = best
            kept[pair] = plist
    return ConnectivityGraph(
        tuple(sorted(scenario.cu_ids, key=node_sort_key)),
        tuple(sorted(scenario.du_ids, key=node_sort_key)),
        edges,
        kept,
    )


def _mw(dbm):
    return 10.0 ** (dbm / 10.0)


def greedy_order(graph):
    """Every CU, in greedy selection order.

    While DUs remain uncovered, the next CU is the one reaching the most of
    them (ties: larger summed linear power over those DUs, then lower id).
    After full coverage the ranking switches to how many DUs would move to
    the candidate because it beats their current best selected CU, then
    the summed power over those DUs, then total power, then id.
    """
    uncovered = set(graph.dus)
    chosen = []
    best = {du: -math.inf for du in graph.dus}
    remaining = list(graph.cus)
    while remaining:
        def key(cu):
            if uncovered:
                hit = [du for du in graph.covered_by(cu) if du in uncovered]
            else:
                hit = [du for du in graph.covered_by(cu) if graph.strength(cu, du) > best[du]]
            total = sum(_mw(graph.strength(cu, du)) for du in graph.covered_by(cu))
            return (-len(hit), -sum(_mw(graph.strength(cu, du)) for du in hit), -total,
                    node_sort_key(cu))

        cu = min(remaining, key=key)
        remaining.remove(cu)
        chosen.append(cu)
        for du in graph.covered_by(cu):
            uncovered.discard(du)
            best[du] = max(best[du], graph.strength(cu, du))
    return chosen


def greedy_select(graph):
    """Greedy set cover: the shortest prefix of :func:`greedy_order` that
    reaches every DU."""
    reachable = {du for (_, du) in graph.edges}
    missing = [du for du in graph.dus if du not in reachable]
    if missing:
        raise UncoverableError(missing)
    selected = []
    uncovered = set(graph.dus)
    for cu in greedy_order(graph):
        if not uncovered:
            break
        selected.append(cu)
        uncovered -= graph.covered_by(cu)
    return selected


def associate(selected, graph, rate_target=0.0):
    """Attach each DU to the selected CU with the strongest edge (ties: lower id)."""
    assignment = {}
    unserved = []
    ordered = sorted(selected, key=node_sort_key)
    for du in graph.dus:
        options = [cu for cu in ordered if (cu, du) in graph.edges]
        if not options:
            unserved.append(du)
            continue
        top = max(graph.strength(cu, du) for cu in options)
        assignment[du] = next(cu for cu in options if graph.strength(cu, du) == top)
    return AssociationPlan(tuple(selected), assignment, rate_target, unserved=tuple(unserved))


def _group_channels(cu, dus, scenario_pairs, settings, radio):
    du_states = {du: align_du(scenario_pairs[(cu, du)], settings.du_array) for du in dus}
    cu_state = align_cu({du: scenario_pairs[(cu, du)] for du in dus}, settings.cu_array)
    channels = [
        synthesize_channel(scenario_pairs[(cu, du)], du_states[du], cu_state,
                           radio.carrier_hz, radio.tx_power_dbm)
        for du in dus
    ]
    return du_states, cu_state, channels


def evaluate_plan(plan, scenario, settings=None):
    """Align, precode and score every selected CU's group.

    Power is split equally over a CU's DUs. SLNR precoders use the noise
    variance normalized by the per-DU power, so leakage and noise are
    weighed on the same scale as in the receive SINR. Returns a new plan
    with ``links`` and ``feasible`` filled in.
    """
    settings = settings or PlannerSettings()
    radio = scenario.radio
    if not plan.selected:
        return replace(plan, links={}, feasible=False, evaluated=True)
    pairs = scenario.paths_by_pair()
    noise = radio.noise_power_w
    total_p = radio.tx_power_w
    du_order = {du: k for k, du in enumerate(sorted(scenario.du_ids, key=node_sort_key))}

    groups = {}
    for cu in plan.selected:
        dus = sorted(plan.served_by(cu), key=du_order.get)
        if not dus:
            continue
        try:
            du_states, cu_state, channels = _group_channels(cu, dus, pairs, settings, radio)
            power = total_p / len(dus)
            if settings.precoder == "zf":
                precoders = zf_precoders(channels)
            else:
                precoders = slnr_precoders(channels, noise / power)
        except MidhaulError as exc:
            raise PlanEvaluationError(f"CU {cu} serving {', '.join(dus)}: {exc}") from exc
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise PlanEvaluationError(f"CU {cu} serving {', '.join(dus)}: {exc}") from exc
        groups[cu] = dict(dus=dus, du_states=du_states, cu_state=cu_state,
                          channels=channels, precoders=precoders, power=power)

    links = {}
    for cu, g in groups.items():
        external = None
        if settings.inter_cu_interference:
            external = []
            for du in g["dus"]:
                terms = []
                for other, og in groups.items():
                    if other == cu or (other, du) not in pairs:
                        continue
                    h = synthesize_channel(pairs[(other, du)], g["du_states"][du], og["cu_state"],
                                           radio.carrier_hz, radio.tx_power_dbm)
                    terms.extend((h, w, og["power"]) for w in og["precoders"])
                external.append(terms)
        powers = [g["power"]] * len(g["dus"])
        gammas = group_sinrs(g["channels"], g["precoders"], powers, noise, external)
        for i, du in enumerate(g["dus"]):
            links[du] = LinkMetrics(
                cu, du,
                slnr_value(g["channels"], i, g["precoders"][i], noise / g["power"]),
                linear_to_db(gammas[i]),
                link_rate(gammas[i], radio),
            )
    feasible = (not plan.unserved and len(links) == len(plan.assignment)
                and all(m.rate_bps >= plan.rate_target for m in links.values()))
    return replace(plan, links=links, feasible=feasible, evaluated=True)


def _better(a, b):
    """Best-effort ranking: more links at target, then fewer CUs."""
    if b is None:
        return True
    return (a.satisfied_count, -a.size) > (b.satisfied_count, -b.size)


def plan_with_cu_count(scenario, k, settings=None, rate_target=None):
    """Evaluate the first ``k`` CUs of the greedy order (DUs they cannot
    reach are left unserved)."""
    settings = settings or PlannerSettings()
    target = scenario.radio.rate_target_bps if rate_target is None else rate_target
    graph = build_connectivity(scenario, settings.threshold_dbm)
    order = greedy_order(graph)
    plan = associate(order[:k], graph, target)
    return evaluate_plan(plan, scenario, settings)


def plan_minimum_cus(scenario, settings=None, mode="greedy", rate_target=None):
    """Smallest CU set found whose links all meet the rate target.

    ``mode="greedy"`` evaluates greedy prefixes of growing length starting
    at the set-cover size; ``mode="exhaustive"`` tries every covering subset
    by size, then lexicographically. When nothing is feasible the best
    attempt (most links at target) is returned with ``feasible=False``.
    """
    settings = settings or PlannerSettings()
    target = scenario.radio.rate_target_bps if rate_target is None else rate_target
    graph = build_connectivity(scenario, settings.threshold_dbm)
    start = len(greedy_select(graph))
    best = None
    if mode == "greedy":
        order = greedy_order(graph)
        for k in range(start, len(order) + 1):
            plan = evaluate_plan(associate(order[:k], graph, target), scenario, settings)
            if plan.feasible:
                return plan
            if _better(plan, best):
                best = plan
    elif mode == "exhaustive":
        for size in range(1, len(graph.cus) + 1):
            for subset in combinations(graph.cus, size):
                plan = associate(list(subset), graph, target)
                if plan.unserved:
                    continue
                plan = evaluate_plan(plan, scenario, settings)
                if plan.feasible:
                    return plan
                if _better(plan, best):
                    best = plan
    else:
        raise ValueError(f"unknown planner mode {mode!r}; use 'greedy' or 'exhaustive'")
    return best


def constraint_violations(plan, cu_ids, du_ids):
    """Structural check of a plan against the CU-count problem's constraints.

    Builds the binary indicators X_i (CU selected) and u_ij (CU i carries DU
    j) and returns human-readable descriptions of every violated
    constraint. An empty list means the plan is valid.
    """
    x = {cu: int(cu in plan.selected) for cu in cu_ids}
    u = {(cu, du): int(plan.assignment.get(du) == cu) for cu in cu_ids for du in du_ids}
    problems = []
    for du in du_ids:
        s = sum(u[(cu, du)] for cu in cu_ids)
        if s != 1:
            problems.append(f"{du} carried by {s} CUs")
    for cu in cu_ids:
        for du in du_ids:
            if u[(cu, du)] and not x[cu]:
                problems.append(f"{du} assigned to unselected {cu}")
            if x[cu] and u[(cu, du)]:
                link = plan.links.get(du)
                rate = link.rate_bps if link is not None else 0.0
                if rate < plan.rate_target:
                    problems.append(f"{cu}->{du} rate {rate:.4g} below target")
    return problems
