"""Validity and achievability sweeps over seeded random instances."""

import functools
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.bounds import BoundQuery, kappa, mu, mu_H, mu_sub, nu, nu_H
from src.config import ORACLE_TOL, logger, _
from src.divergences.hypothesis_testing import hypothesis_testing
from src.divergences.registry import DivergenceRegistry
from src.divergences.renyi import RenyiDivergence, renyi
from src.divergences.smoothed import smoothed_renyi, smoothed_renyi_sub
from src.errors import InputError, InvalidQuery, NotSortedForThisD
from src.majorization import random_stochastic, relatively_majorizes, relmaj_lp_oracle
from src.prob_core import ProbVec, ext_sub, uniform
from src.smoothing import relative_flattest
from src.utils.helpers import format_csv_number, parse_number
from src.utils.worker_pool import SweepWorkerPool
from src.verify.families import family_kappa_gap, family_thm3_gap, family_thm4_gap
from src.verify.objective import maximize_three_block
from src.verify.oracles import dh_oracle, smooth_oracle
from src.verify.sampling import (
    concentration_for,
    instance_rng,
    random_ball_member,
    random_full_support,
    random_probvec,
)

# tolerance of the largest gated d not exceeding the evaluated d
FAMILY_GATES = {
    "thm3": ((10 ** 6, 1e-3),),
    "thm4": ((10 ** 5, 1.5e-2), (10 ** 8, 1e-3)),
    "steepest_uniform": ((10 ** 5, 1.5e-2), (10 ** 9, 1e-3)),
    "three_block_search": ((0, 5e-3),),
}

ORACLE_EPS = (0.05, 0.1, 0.3, 0.6)
ORACLE_ORDERS = (0.5, 1.0, 2.0, math.inf)
DH_ORACLE_TOL = 1e-10
DPI_SLACK = 1e-9
TREND_SLACK = 1e-12

CSV_COLUMNS = ("kind", "index", "bound", "family", "d", "eps", "alpha", "beta", "lhs", "rhs", "margin")


def _grid(values) -> List[float]:
    return [parse_number(v) for v in values]


@dataclass
class SweepConfig:
    seed: int = 0
    instances: int = 10 ** 4
    dims: List[int] = field(default_factory=lambda: list(range(2, 9)))
    eps_grid: List[float] = field(default_factory=lambda: [0.05, 0.1, 0.25, 0.5, 0.75])
    alpha_grid: List[float] = field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, math.inf])
    beta_grid: List[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.5, 2.0, 3.0, math.inf])
    oracle_tol: float = ORACLE_TOL
    slack: float = 1e-9
    family_dims: List[int] = field(default_factory=lambda: [10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6,
                                                            10 ** 8, 10 ** 9])
    search_grid: int = 50
    threads: Optional[int] = None

    def __post_init__(self):
        self.eps_grid = _grid(self.eps_grid)
        self.alpha_grid = _grid(self.alpha_grid)
        self.beta_grid = _grid(self.beta_grid)
        if self.instances < 1:
            raise InvalidQuery(f"instances must be at least 1, got {self.instances}")
        if any(d < 2 for d in self.dims):
            raise InvalidQuery(f"dimensions must be at least 2, got {self.dims}")
        if any(not 0 < e < 1 for e in self.eps_grid):
            raise InvalidQuery(f"eps values must lie in (0, 1), got {self.eps_grid}")
        if any(a < 0 for a in self.alpha_grid + self.beta_grid):
            raise InvalidQuery("orders must be non-negative")
        if any(d < 2 for d in self.family_dims):
            raise InvalidQuery(f"family dimensions must be at least 2, got {self.family_dims}")
        if self.oracle_tol <= 0 or self.slack < 0 or self.search_grid < 0:
            raise InvalidQuery("oracle_tol must be positive, slack and search_grid non-negative")
        if self.threads is not None and self.threads < 1:
            raise InvalidQuery(f"threads must be positive, got {self.threads}")

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise InputError(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**raw)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @property
    def has_instances(self) -> bool:
        return bool(self.dims and self.eps_grid and self.alpha_grid and self.beta_grid)


@dataclass(frozen=True)
class InstanceRecord:
    index: int
    bound: str
    d: int
    eps: float
    alpha: float
    beta: Optional[float]
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_row(self) -> Dict[str, Any]:
        return {"kind": "instance", "index": self.index, "bound": self.bound, "family": None,
                "d": self.d, "eps": self.eps, "alpha": self.alpha, "beta": self.beta,
                "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin}


@dataclass(frozen=True)
class AchievabilityRecord:
    bound: str
    family: str
    d: Optional[int]
    eps: float
    alpha: float
    beta: Optional[float]
    gap: float
    target: float

    @property
    def deviation(self) -> float:
        return abs(self.gap - self.target)

    @property
    def gate(self) -> Optional[float]:
        return gate_for(self.family, self.d)

    def to_row(self) -> Dict[str, Any]:
        return {"kind": "achievability", "index": None, "bound": self.bound, "family": self.family,
                "d": self.d, "eps": self.eps, "alpha": self.alpha, "beta": self.beta,
                "lhs": self.gap, "rhs": self.target, "margin": self.gap - self.target}


def gate_for(family: str, d: Optional[int]) -> Optional[float]:
    tol = None
    for threshold, value in FAMILY_GATES.get(family, ()):
        if (d or 0) >= threshold:
            tol = value
    return tol


@dataclass
class SweepReport:
    config: SweepConfig
    records: List[InstanceRecord]
    achievability: List[AchievabilityRecord]
    failed: int = 0
    wall_time: float = 0.0

    @property
    def max_violation(self) -> float:
        return max((r.margin for r in self.records), default=-math.inf)

    def _final_achievability(self) -> List[AchievabilityRecord]:
        last: Dict[Tuple[str, str], AchievabilityRecord] = {}
        for rec in self.achievability:
            last[(rec.bound, rec.family)] = rec
        return list(last.values())

    def trend_monotone(self) -> Dict[str, bool]:
        """Deviation is non-increasing in d after the first recorded d, per bound/family."""
        by_family: Dict[str, List[float]] = {}
        for rec in self.achievability:
            by_family.setdefault(f"{rec.bound}/{rec.family}", []).append(rec.deviation)
        return {key: all(b <= a + TREND_SLACK for a, b in zip(devs, devs[1:]))
                for key, devs in by_family.items()}

    def summary(self) -> Dict[str, Any]:
        margins: Dict[str, float] = {}
        for rec in self.records:
            margins[rec.bound] = max(margins.get(rec.bound, -math.inf), rec.margin)
        finals = []
        gates_ok = True
        for rec in self._final_achievability():
            gate = rec.gate
            ok = gate is None or rec.deviation <= gate
            gates_ok = gates_ok and ok
            finals.append({"bound": rec.bound, "family": rec.family, "d": rec.d, "gap": rec.gap,
                           "target": rec.target, "deviation": rec.deviation, "gate": gate, "passed": ok})
        max_violation = self.max_violation
        trends = self.trend_monotone()
        return {
            "instances": self.config.instances if self.config.has_instances else 0,
            "records": len(self.records),
            "failed": self.failed,
            "max_violation": max_violation,
            "violations": sum(1 for r in self.records if r.margin > self.config.slack),
            "max_margin_by_bound": margins,
            "achievability": finals,
            "trend_monotone": trends,
            "passed": (max_violation <= self.config.slack and gates_ok and self.failed == 0
                       and all(trends.values())),
        }

    def rows(self) -> List[Dict[str, Any]]:
        return [r.to_row() for r in self.records] + [a.to_row() for a in self.achievability]

    def to_dict(self) -> Dict[str, Any]:
        """JSON form; wall_time is left out so same-seed documents are identical."""
        return {"config": self.config.to_dict(), "summary": self.summary(), "rows": self.rows()}

    def to_csv_rows(self) -> List[List[str]]:
        out = [list(CSV_COLUMNS)]
        for row in self.rows():
            cells = []
            for col in CSV_COLUMNS:
                value = row[col]
                if value is None:
                    cells.append("")
                elif isinstance(value, float):
                    cells.append(format_csv_number(value))
                else:
                    cells.append(str(value))
            out.append(cells)
        return out


def _mu_check(p, q, u, eps, alpha, beta) -> Optional[Tuple[float, float]]:
    rhs = mu(BoundQuery.of(eps, alpha, beta)).value
    if math.isinf(rhs):
        return None
    return ext_sub(smoothed_renyi(p, u, eps, beta), renyi(p, u, alpha)), rhs


def _nu_check(p, q, u, eps, alpha, beta):
    rhs = nu(BoundQuery.of(eps, alpha, beta)).value
    if math.isinf(rhs):
        return None
    return ext_sub(renyi(p, u, alpha), smoothed_renyi(p, u, eps, beta)), rhs


def _mu_H_check(p, q, u, eps, alpha, beta):
    rhs = mu_H(eps, alpha).value
    if math.isinf(rhs):
        return None
    return ext_sub(hypothesis_testing(p, q, eps), renyi(p, q, alpha)), rhs


def _nu_H_check(p, q, u, eps, alpha, beta):
    rhs = nu_H(eps, alpha).value
    if math.isinf(rhs):
        return None
    return ext_sub(renyi(p, q, alpha), hypothesis_testing(p, q, eps)), rhs


def _mu_sub_check(p, q, u, eps, alpha, beta):
    if not ((1 < alpha < beta) or (0 < alpha < beta < 1)):
        return None
    rhs = mu_sub(BoundQuery.of(eps, alpha, beta)).value
    return ext_sub(smoothed_renyi_sub(p, eps, beta), renyi(p, u, alpha)), rhs


VALIDITY_CHECKS: Tuple[Tuple[str, Callable], ...] = (
    ("mu", _mu_check),
    ("nu", _nu_check),
    ("mu_H", _mu_H_check),
    ("nu_H", _nu_H_check),
    ("mu_sub", _mu_sub_check),
)


def _evaluate_instance(cfg: SweepConfig, index: int) -> List[InstanceRecord]:
    rng = instance_rng(cfg.seed, index)
    d = int(cfg.dims[rng.integers(len(cfg.dims))])
    eps = float(cfg.eps_grid[rng.integers(len(cfg.eps_grid))])
    alpha = float(cfg.alpha_grid[rng.integers(len(cfg.alpha_grid))])
    beta = float(cfg.beta_grid[rng.integers(len(cfg.beta_grid))])
    shape = concentration_for(index)
    p = random_probvec(rng, d, shape)
    q = random_full_support(rng, d, shape)
    u = uniform(d)
    records = []
    for bound, check in VALIDITY_CHECKS:
        result = check(p, q, u, eps, alpha, beta)
        if result is None:
            continue
        lhs, rhs = result
        records.append(InstanceRecord(index, bound, d, eps, alpha,
                                      beta if bound in ("mu", "nu", "mu_sub") else None, lhs, rhs))
    return records


ACHIEVABILITY_CASES = (
    ("mu_H", "thm3", 0.5, 2.0, None, family_thm3_gap, lambda: mu_H(0.5, 2.0).value),
    ("nu_H", "thm4", 0.25, 0.5, None, family_thm4_gap, lambda: nu_H(0.25, 0.5).value),
    ("kappa", "steepest_uniform", 0.5, 0.5, None, family_kappa_gap, lambda: kappa(0.5, 0.5).value),
)

SEARCH_CASES = (
    ("mu", "upper", 0.125, 2.0, math.inf),
    ("nu", "lower", 0.5, 0.5, 2.0),
)


def achievability_records(cfg: SweepConfig) -> List[AchievabilityRecord]:
    """Gaps of the closed-form families over cfg.family_dims, plus the three-block searches.

    The searches run only when the instance grid is non-empty.
    """
    out = []
    for bound, family, eps, alpha, beta, gap_fn, target_fn in ACHIEVABILITY_CASES:
        target = target_fn()
        for d in sorted(cfg.family_dims):
            try:
                gap = gap_fn(d, eps, alpha)
            except NotSortedForThisD:
                continue
            out.append(AchievabilityRecord(bound, family, d, eps, alpha, beta, gap, target))
    # no searches for an empty instance grid
    if cfg.search_grid and cfg.has_instances:
        for bound, side, eps, alpha, beta in SEARCH_CASES:
            value, _point = maximize_three_block(eps, alpha, beta, grid=cfg.search_grid, side=side)
            query = BoundQuery.of(eps, alpha, beta)
            target = (mu if bound == "mu" else nu)(query).value
            out.append(AchievabilityRecord(bound, "three_block_search", None, eps, alpha, beta, value, target))
    return out


def sweep_bounds(cfg: SweepConfig) -> SweepReport:
    """
    Check every applicable bound on seeded instances and record achievability gaps.

    Instances are spread over the worker pool; records come back in instance
    order, so the report depends only on cfg.

    Args:
        cfg: Sweep configuration

    Returns:
        The sweep report
    """
    start = time.perf_counter()
    records: List[InstanceRecord] = []
    failed = 0
    if cfg.has_instances:
        with SweepWorkerPool(functools.partial(_evaluate_instance, cfg), cfg.threads) as pool:
            results = pool.map(range(cfg.instances))
        for result in results:
            if result is None:
                failed += 1
                continue
            records.extend(result)
    achievability = achievability_records(cfg)
    report = SweepReport(cfg, records, achievability, failed, time.perf_counter() - start)
    logger.info(_("Sweep finished: {} records, max violation {}, {:.1f}s").format(
        len(records), report.max_violation, report.wall_time))
    return report


def oracle_instance(rng: np.random.Generator, index: int) -> Tuple[RenyiDivergence, ProbVec, ProbVec, float]:
    """The smoothing problem checked against the oracle at position index."""
    d = int(rng.integers(2, 5))
    shape = concentration_for(index)
    p = random_probvec(rng, d, shape)
    q = uniform(d) if index % 2 == 0 else random_full_support(rng, d, shape)
    eps = ORACLE_EPS[index % len(ORACLE_EPS)]
    div = RenyiDivergence(ORACLE_ORDERS[(index // len(ORACLE_EPS)) % len(ORACLE_ORDERS)])
    return div, p, q, eps


def oracle_crosscheck(n: int = 200, seed: int = 0, tol: float = ORACLE_TOL) -> Dict[str, Any]:
    """Closed-form smoothing against the brute-force oracle, and D_H against vertex enumeration."""
    cfg = SweepConfig(seed=seed, instances=max(1, n))
    worst_smooth = 0.0
    worst_dh = 0.0
    for i in range(n):
        rng = instance_rng(seed, i)
        div, p, q, eps = oracle_instance(rng, i)
        shape = concentration_for(i)
        closed = smoothed_renyi(p, q, eps, div.order)
        brute, _point = smooth_oracle(div, p, q, eps, cfg)
        if not (math.isinf(closed) and closed == brute):
            worst_smooth = max(worst_smooth, abs(closed - brute))
        dh_d = int(rng.integers(2, 11))
        p2, q2 = random_probvec(rng, dh_d, shape), random_full_support(rng, dh_d, shape)
        eps2 = float(rng.uniform(0.0, 0.95))
        worst_dh = max(worst_dh, abs(hypothesis_testing(p2, q2, eps2) - dh_oracle(p2, q2, eps2)))
    return {
        "checked": n,
        "max_smooth_deviation": worst_smooth,
        "max_dh_deviation": worst_dh,
        "passed": worst_smooth <= tol and worst_dh <= DH_ORACLE_TOL,
    }


def dh_crosscheck(n: int = 1000, seed: int = 0, max_dim: int = 10) -> Dict[str, Any]:
    worst = 0.0
    for i in range(n):
        rng = instance_rng(seed, i)
        d = int(rng.integers(2, max_dim + 1))
        shape = concentration_for(i)
        p, q = random_probvec(rng, d, shape), random_probvec(rng, d, shape)
        eps = float(rng.uniform(0.0, 0.95))
        closed, brute = hypothesis_testing(p, q, eps), dh_oracle(p, q, eps)
        if closed == brute:
            continue
        worst = max(worst, abs(closed - brute))
    return {"checked": n, "max_deviation": worst, "passed": worst <= DH_ORACLE_TOL}


def dpi_spot_check(registry: DivergenceRegistry, n: int = 200, seed: int = 0) -> Dict[str, Any]:
    """D(Wp || Wq) <= D(p || q) for random channels W and every registered divergence."""
    violations = []
    for i in range(n):
        rng = instance_rng(seed, i)
        d_in, d_out = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        p = random_probvec(rng, d_in, concentration_for(i))
        q = random_full_support(rng, d_in)
        channel = random_stochastic(d_out, d_in, rng)
        before = registry.evaluate_all(p, q)
        after = registry.evaluate_all(channel.apply(p), channel.apply(q))
        for name, value in before.items():
            if name not in after or math.isinf(value):
                continue
            if after[name] > value + DPI_SLACK:
                violations.append({"index": i, "divergence": name, "before": value, "after": after[name]})
    for v in violations:
        logger.warning(_("DPI violated by {} on instance {}").format(v["divergence"], v["index"]))
    return {"checked": n, "divergences": registry.count(), "violations": violations,
            "passed": not violations}


def relmaj_crosscheck(n: int = 200, seed: int = 0, max_dim: int = 4) -> Dict[str, Any]:
    """Hinge-curve test against LP feasibility on images under random channels and random pairs."""
    mismatches = []
    positives = 0
    for i in range(n):
        rng = instance_rng(seed, i)
        d = int(rng.integers(2, max_dim + 1))
        p1 = random_probvec(rng, d, concentration_for(i))
        q1 = random_full_support(rng, d)
        if i % 2 == 0:
            channel = random_stochastic(int(rng.integers(2, max_dim + 1)), d, rng)
            p2, q2 = channel.apply(p1), channel.apply(q1)
        else:
            d2 = int(rng.integers(2, max_dim + 1))
            p2, q2 = random_probvec(rng, d2), random_full_support(rng, d2)
        fast = relatively_majorizes((p1, q1), (p2, q2))
        slow = relmaj_lp_oracle((p1, q1), (p2, q2))
        positives += int(slow)
        if fast != slow:
            mismatches.append({"index": i, "hinge": fast, "lp": slow})
    return {"checked": n, "feasible": positives, "mismatches": mismatches, "passed": not mismatches}


def relative_minimality_check(n: int = 1000, seed: int = 0, samples: int = 100,
                              max_dim: int = 6) -> Dict[str, Any]:
    """Every member of the ball relatively majorizes the relative eps-clipped vector."""
    failures = []
    for i in range(n):
        rng = instance_rng(seed, i)
        d = int(rng.integers(2, max_dim + 1))
        p = random_probvec(rng, d, concentration_for(i))
        q = random_full_support(rng, d)
        eps = ORACLE_EPS[i % len(ORACLE_EPS)]
        clipped = relative_flattest(p, q, eps)
        for _s in range(samples):
            member = random_ball_member(rng, p, eps)
            if not relatively_majorizes((member, q), (clipped, q)):
                failures.append({"index": i, "member": member.tolist()})
                break
    return {"checked": n, "samples": samples, "failures": failures, "passed": not failures}
