"""Exact minimum number of additional UAVs on small instances.

Two independent routes: brute-force enumeration of every set partition of the
coverage subareas, and a dynamic program over cycle sizes. Under constant hop
energy a cycle's cost depends only on its size, so block order is ignored.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass

from .energy import EnergyProfile, energy_profile
from .planner import InfeasibleError, cycle_coverage_time, min_additional_uavs
from .scenario import Scenario

DEFAULT_MAX_N = 10
CAP_ENV = "UAVCOVER_ORACLE_CAP"


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimal_additional_uavs: int
    optimal_cycle_sizes: tuple[int, ...]  # sorted descending
    instances_enumerated: int

    def to_dict(self) -> dict:
        return {
            "optimal_additional_uavs": self.optimal_additional_uavs,
            "optimal_cycle_sizes": list(self.optimal_cycle_sizes),
            "instances_enumerated": self.instances_enumerated,
        }


def oracle_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_MAX_N


def size_costs(s: Scenario, n_max: int, profile: EnergyProfile | None = None) -> dict[int, int]:
    """k(n) for every feasible cycle size n <= n_max; infeasible sizes are absent."""
    profile = profile or energy_profile(s)
    costs = {}
    for n in range(1, n_max + 1):
        try:
            t_cov = cycle_coverage_time(profile, n)
        except InfeasibleError:
            continue
        costs[n] = min_additional_uavs(n, s.travel_time_s, s.charge_time_s, t_cov)
    return costs


def set_partitions(items: list):
    """Yield every set partition of ``items`` as a list of blocks (restricted growth strings)."""
    n = len(items)
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, max_label: int):
        if i == n:
            blocks: list[list] = [[] for _ in range(max_label + 1)]
            for item, lab in zip(items, labels):
                blocks[lab].append(item)
            yield blocks
            return
        for lab in range(max_label + 2):
            labels[i] = lab
            yield from rec(i + 1, max(max_label, lab))

    labels[0] = 0
    yield from rec(1, 0)


def optimal_by_partition(s: Scenario, max_n: int | None = None,
                         profile: EnergyProfile | None = None) -> OracleResult:
    max_n = oracle_cap() if max_n is None else max_n
    N = s.n_coverage
    if N > max_n:
        raise OracleRefused(f"N={N} exceeds the oracle cap of {max_n} (Bell({N}) partitions)")
    costs = size_costs(s, N, profile)
    best = None
    best_sizes: tuple[int, ...] = ()
    count = 0
    for blocks in set_partitions(s.coverage_subareas):
        count += 1
        total = 0
        for block in blocks:
            k = costs.get(len(block))
            if k is None:
                break
            total += k
        else:
            if best is None or total < best:
                best = total
                best_sizes = tuple(sorted((len(b) for b in blocks), reverse=True))
    if best is None:
        raise InfeasibleError("scenario unservable: no partition has only feasible cycles")
    return OracleResult(best, best_sizes, count)


def optimal_by_size_dp(s: Scenario, N: int | None = None,
                       profile: EnergyProfile | None = None) -> OracleResult:
    N = s.n_coverage if N is None else N
    costs = size_costs(s, N, profile)
    if not costs:
        raise InfeasibleError("unservable: no feasible cycle size")
    best: list[int | None] = [0] + [None] * N
    choice = [0] * (N + 1)
    for m in range(1, N + 1):
        for n, k in costs.items():
            if n <= m and best[m - n] is not None:
                cand = best[m - n] + k
                if best[m] is None or cand < best[m]:
                    best[m], choice[m] = cand, n
    if best[N] is None:
        raise InfeasibleError("unservable: sizes cannot compose N")
    sizes = Counter()
    m = N
    while m:
        sizes[choice[m]] += 1
        m -= choice[m]
    return OracleResult(best[N], tuple(sorted(sizes.elements(), reverse=True)), N * len(costs))
