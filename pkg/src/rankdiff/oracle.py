"""Brute-force reference implementations used to cross-check the metrics module.

Everything here is deliberately naive: explicit sorts, Python loops, and
math.fsum moments. This module must never import from rankdiff.metrics; its
value as a test oracle rests on sharing no ranking or moment code with the
engine it checks.
"""

from __future__ import annotations

import math
from typing import Sequence

from .model import GROUPS, K, MINORITY_GROUPS, CaseCube, Group, PopulationTable


def _naive_rank(values: Sequence[float], ids: Sequence[str]) -> list[int]:
    """Rank 1..M by descending value, ties by ascending id, via explicit sort."""
    order = sorted(range(len(values)), key=lambda i: (-values[i], ids[i]))
    ranks = [0] * len(values)
    for rank, i in enumerate(order, start=1):
        ranks[i] = rank
    return ranks


def _naive_ma7(series: Sequence[int]) -> list[float]:
    out = []
    for j in range(len(series)):
        window = series[max(0, j - 6) : j + 1]
        out.append(sum(window) / len(window))
    return out


def _naive_skewness(series: Sequence[float]) -> float | None:
    n = len(series)
    if n < 3:
        return None
    mean = math.fsum(series) / n
    m2 = math.fsum((v - mean) ** 2 for v in series) / n
    if m2 == 0.0:
        return None
    m3 = math.fsum((v - mean) ** 3 for v in series) / n
    return math.sqrt(n * (n - 1)) / (n - 2) * m3 / m2**1.5


def _naive_basis(counts: list[list[list[int]]], m: int, n: int, basis: str) -> list[list[list[float]]]:
    if basis == "raw_daily":
        return counts
    values = [[[0.0] * K for _ in range(n)] for _ in range(m)]
    for i in range(m):
        for k in range(K):
            series = [counts[i][j][k] for j in range(n)]
            if basis == "cumulative":
                running = 0
                for j in range(n):
                    running += series[j]
                    values[i][j][k] = running
            elif basis == "ma7":
                ma = _naive_ma7(series)
                for j in range(n):
                    values[i][j][k] = ma[j]
            else:
                raise ValueError(f"unknown basis {basis!r}")
    return values


def oracle_stats(
    cube: CaseCube,
    pops: PopulationTable,
    regime: tuple[float, float],
    basis: str = "raw_daily",
) -> dict:
    """Recompute every metrics output the slow way. Intended for small inputs.

    ``regime`` is a concrete (t_min, t_max] pair. Returns plain nested lists:
    pop_rank (M,K), case_rank and rd (M,N,K), ma7 (M,N,K), ma7_statewide and
    statewide_daily (N,K), ma7_statewide_scaled (N,K or None), persistence
    and skewness (M,K), relative_change and special (M, 3) for BAA/HL/OTH.
    """
    m, n = cube.n_municipalities, cube.n_days
    ids = cube.ids()
    counts = [[[int(cube.counts[i, j, k]) for k in range(K)] for j in range(n)] for i in range(m)]
    pop = [[int(pops.pops[i, k]) for k in range(K)] for i in range(m)]
    t_min, t_max = regime

    pop_rank = [[0] * K for _ in range(m)]
    for k in range(K):
        column = [pop[i][k] for i in range(m)]
        ranks = _naive_rank(column, ids)
        for i in range(m):
            pop_rank[i][k] = ranks[i]

    basis_values = _naive_basis(counts, m, n, basis)
    case_rank = [[[0] * K for _ in range(n)] for _ in range(m)]
    for j in range(n):
        for k in range(K):
            day = [basis_values[i][j][k] for i in range(m)]
            ranks = _naive_rank(day, ids)
            for i in range(m):
                case_rank[i][j][k] = ranks[i]

    rd = [
        [[pop_rank[i][k] - case_rank[i][j][k] for k in range(K)] for j in range(n)]
        for i in range(m)
    ]

    ma7 = [[[0.0] * K for _ in range(n)] for _ in range(m)]
    for i in range(m):
        for k in range(K):
            series = [counts[i][j][k] for j in range(n)]
            ma = _naive_ma7(series)
            for j in range(n):
                ma7[i][j][k] = ma[j]

    statewide_daily = [
        [sum(counts[i][j][k] for i in range(m)) for k in range(K)] for j in range(n)
    ]
    ma7_statewide = [[0.0] * K for _ in range(n)]
    for k in range(K):
        series = [statewide_daily[j][k] for j in range(n)]
        ma = _naive_ma7(series)
        for j in range(n):
            ma7_statewide[j][k] = ma[j]

    totals_by_group = [sum(pop[i][k] for i in range(m)) for k in range(K)]
    if all(t > 0 for t in totals_by_group):
        ma7_statewide_scaled = [
            [ma7_statewide[j][k] / totals_by_group[k] * 100.0 for k in range(K)]
            for j in range(n)
        ]
    else:
        ma7_statewide_scaled = None

    persistence = [[0.0] * K for _ in range(m)]
    skew: list[list[float | None]] = [[None] * K for _ in range(m)]
    for i in range(m):
        for k in range(K):
            series = [rd[i][j][k] for j in range(n)]
            inside = 0
            for v in series:
                if t_min < v <= t_max:
                    inside += 1
            persistence[i][k] = 100.0 * inside / n
            skew[i][k] = _naive_skewness(series)

    case_totals = [[sum(counts[i][j][k] for j in range(n)) for k in range(K)] for i in range(m)]
    w = GROUPS.index(Group.W)
    relative: list[list[float | None]] = [[None] * len(MINORITY_GROUPS) for _ in range(m)]
    special = [[""] * len(MINORITY_GROUPS) for _ in range(m)]
    for i in range(m):
        for kk, g in enumerate(MINORITY_GROUPS):
            k = GROUPS.index(g)
            cp, p = case_totals[i][k], pop[i][k]
            cw, pw = case_totals[i][w], pop[i][w]
            if p == 0 and cp == 0:
                special[i][kk] = "undefined_zero_zero"
            elif p == 0:
                special[i][kk] = "pop_zero_cases_nonzero"
            elif cp > p:
                special[i][kk] = "cases_exceed_pop"
            else:
                special[i][kk] = "normal"
            if p > 0 and pw > 0:
                x = cw / pw
                if x > 0.0:
                    relative[i][kk] = 100.0 * (cp / p - x) / x

    return {
        "pop_rank": pop_rank,
        "case_rank": case_rank,
        "rd": rd,
        "ma7": ma7,
        "ma7_statewide": ma7_statewide,
        "ma7_statewide_scaled": ma7_statewide_scaled,
        "statewide_daily": statewide_daily,
        "persistence": persistence,
        "skewness": skew,
        "relative_change": relative,
        "special": special,
    }
