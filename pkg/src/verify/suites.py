"""Named verification targets run by `divsmooth verify`."""

import math
from typing import Any, Callable, Dict, Optional

import numpy as np

from src.bounds import (
    BoundQuery,
    mu,
    mu_max_relative,
    mu_sub,
    mu_sub_collision,
    mu_sub_max_relative,
    mu_tilde,
    theta,
)
from src.config import logger, _
from src.divergences.hypothesis_testing import hypothesis_testing
from src.divergences.registry import default_registry
from src.divergences.renyi import renyi, renyi_entropy
from src.errors import DomainError, InputError, InsideBall
from src.majorization import majorizes
from src.prob_core import ky_fan, tv_distance, uniform
from src.smoothing import flattest
from src.verify.families import (
    family_app_e,
    family_three_block,
    family_thm1_infinite_gap,
    family_unbounded,
    random_app_e_member,
    representative_max,
    representative_min,
)
from src.verify.objective import three_block_objective
from src.verify.scans import app_e_sup, edge_lemma_scan, monotonicity_scans
from src.verify.sampling import instance_rng, random_sorted
from src.verify.sweep import (
    SweepConfig,
    achievability_records,
    dh_crosscheck,
    dpi_spot_check,
    gate_for,
    oracle_crosscheck,
    relative_minimality_check,
    relmaj_crosscheck,
)

IDENTITY_TOL = 1e-12
CONSISTENCY_TOL = 1e-10
CHECK_SLACK = 1e-9

Suite = Callable[[Optional[int], SweepConfig], Dict[str, Any]]


def _count(n: Optional[int], default: int) -> int:
    return default if n is None else n


def verify_oracle(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    return oracle_crosscheck(_count(n, 200), cfg.seed, cfg.oracle_tol)


def verify_dh(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    return dh_crosscheck(_count(n, 1000), cfg.seed)


def verify_relmaj(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    lp = relmaj_crosscheck(_count(n, 200), cfg.seed)
    minimality = relative_minimality_check(_count(n, 1000), cfg.seed)
    return {"lp_crosscheck": lp, "relative_minimality": minimality,
            "passed": lp["passed"] and minimality["passed"]}


def representative_check(n: int, seed: int) -> Dict[str, Any]:
    """Both representatives keep the clipped vector and sandwich p in majorization order."""
    checked, failures = 0, []
    for i in range(n):
        rng = instance_rng(seed, i)
        d = int(rng.integers(3, 9))
        p = random_sorted(rng, d, 0.3 if i % 2 else 1.0)
        eps = float(rng.choice([0.05, 0.1, 0.2, 0.3]))
        if tv_distance(p, uniform(d)) <= eps:
            continue
        checked += 1
        try:
            low, high = representative_min(p, eps), representative_max(p, eps)
        except InsideBall:
            continue
        except DomainError as e:
            failures.append({"index": i, "error": str(e)})
            continue
        if not (majorizes(high, p) and majorizes(p, low)):
            failures.append({"index": i, "error": "sandwich broken"})
    return {"checked": checked, "failures": failures, "passed": checked > 0 and not failures}


def unbounded_trend_check() -> Dict[str, Any]:
    trends = {}
    for alpha, beta in ((0.8, 0.5), (3.0, 2.0)):
        gaps = [renyi_entropy(family_unbounded(d, alpha, beta), beta)
                - renyi_entropy(family_unbounded(d, alpha, beta), alpha)
                for d in (10 ** 2, 10 ** 3, 10 ** 4)]
        trends[f"alpha={alpha:g},beta={beta:g}"] = {
            "gaps": gaps, "increasing": all(b > a for a, b in zip(gaps, gaps[1:]))}
    return {"trends": trends, "passed": all(t["increasing"] for t in trends.values())}


def app_e_check(seed: int, members: int = 100, d: int = 10, eps: float = 0.3) -> Dict[str, Any]:
    """The constructed vector is a member of its set and majorizes random members."""
    rng = np.random.default_rng(seed)
    failures = []
    cases = 0
    for ell in (1, 2, 3):
        for t in (0.25, 0.5, 1.0):
            lo = eps / (d - ell - t)
            hi = (1.0 - eps) / (ell + t)
            if t < 1:
                hi = min(hi, eps / (1.0 - t))
            if lo > hi:
                continue
            s = 0.5 * (lo + hi)
            q = family_app_e(d, t, s, ell, eps)
            cases += 1
            if abs(ky_fan(q, ell) - (1.0 - eps - s * t)) > CONSISTENCY_TOL or abs(q.entries[ell] - s) > CONSISTENCY_TOL:
                failures.append({"ell": ell, "t": t, "error": "not a member"})
                continue
            for _m in range(members):
                if not majorizes(q, random_app_e_member(rng, d, t, s, ell, eps)):
                    failures.append({"ell": ell, "t": t, "error": "not maximal"})
                    break
    alpha = eps / 2
    sup = app_e_sup(eps, alpha, d)
    sup_ok = sup <= math.log2(1.0 - eps) + CHECK_SLACK
    return {"cases": cases, "failures": failures, "sup": sup, "sup_bound": math.log2(1.0 - eps),
            "passed": not failures and sup_ok}


def edge_check(n: int, seed: int, grid_n: int = 10 ** 4) -> Dict[str, Any]:
    rng = np.random.default_rng(seed)
    results = {}
    for alpha, beta in ((1.5, 3.0), (0.3, 0.7)):
        ok = 0
        for _i in range(n):
            A, B, C, D = rng.uniform(0.1, 10.0, size=4)
            ok += edge_lemma_scan(A, B, C, D, alpha, beta, grid_n)
        results[f"alpha={alpha:g},beta={beta:g}"] = ok
    return {"checked": n, "endpoint_max": results, "passed": all(v == n for v in results.values())}


def verify_appendix(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    parts = {
        "representatives": representative_check(_count(n, 1000), cfg.seed),
        "monotonicity": {"passed": monotonicity_scans(cfg.seed)},
        "unbounded": unbounded_trend_check(),
        "maximal_element": app_e_check(cfg.seed),
        "edge": edge_check(_count(n, 1000), cfg.seed),
    }
    parts["passed"] = all(p["passed"] for p in parts.values())
    return parts


def identity_check(points: int = 10) -> Dict[str, Any]:
    """Special-case closed forms agree with the general expressions on a points x points grid."""
    worst = {"mu_beta_inf": 0.0, "mu_sub_beta_inf": 0.0, "mu_sub_beta_2": 0.0}
    for eps in np.linspace(0.02, 0.98, points):
        for alpha in np.linspace(1.05, 4.0, points):
            q = BoundQuery.of(float(eps), float(alpha), math.inf)
            worst["mu_beta_inf"] = max(worst["mu_beta_inf"],
                                       abs(mu(q).value - mu_max_relative(float(eps), float(alpha))))
            worst["mu_sub_beta_inf"] = max(worst["mu_sub_beta_inf"],
                                           abs(mu_sub(q).value - mu_sub_max_relative(float(eps), float(alpha))))
        for alpha in np.linspace(1.02, 1.98, points):
            q = BoundQuery.of(float(eps), float(alpha), 2.0)
            worst["mu_sub_beta_2"] = max(worst["mu_sub_beta_2"],
                                         abs(mu_sub(q).value - mu_sub_collision(float(eps), float(alpha))))
    return {"max_deviation": worst, "passed": all(v <= IDENTITY_TOL for v in worst.values())}


def three_block_consistency(n: int, seed: int) -> Dict[str, Any]:
    """The reduced objective equals H_alpha(x) - H_beta(clip(x)) on concrete three-block vectors."""
    rng = np.random.default_rng(seed)
    worst, checked = 0.0, 0
    for _i in range(n):
        d = int(rng.integers(6, 30))
        k = int(rng.integers(1, d // 3 + 1))
        m = int(rng.integers(k + 1, d))
        eps = float(rng.uniform(0.005, 0.05))
        alpha, beta = (1.5, 3.0) if rng.uniform() < 0.5 else (0.3, 0.7)
        # levels b < c < a with the right total, then check the constraints
        a_raw, c_raw, b_raw = np.sort(rng.uniform(0.2, 1.0, size=3))[::-1]
        scale = k * a_raw + (m - k) * c_raw + (d - m) * b_raw
        a, c, b = a_raw / scale, c_raw / scale, b_raw / scale
        try:
            x = family_three_block(d, eps, k, m, a, b, c)
        except DomainError:
            continue
        clipped, _params = flattest(x, eps)
        direct = renyi_entropy(x, alpha) - renyi_entropy(clipped, beta)
        reduced = three_block_objective(k * a, (d - m) * b, c / a, b / a, eps, alpha, beta)
        worst = max(worst, abs(direct - reduced))
        checked += 1
    return {"checked": checked, "max_deviation": worst, "passed": checked > 0 and worst <= CONSISTENCY_TOL}


def vertex_check(points: int = 10) -> Dict[str, Any]:
    """At u = v = 0 and p = (1 - theta) eps / theta the objective reproduces mu_tilde."""
    worst = 0.0
    for eps in np.linspace(0.05, 0.5, points):
        for alpha, beta in ((1.5, 3.0), (2.0, math.inf), (2.0, 5.0)):
            t = theta(alpha, beta)
            p = (1.0 - t) * eps / t
            if p > 1.0 - eps:
                continue
            value = three_block_objective(p, float(eps), 0.0, 0.0, float(eps), alpha, beta)
            target = mu_tilde(BoundQuery.of(float(eps), alpha, beta)).value
            worst = max(worst, abs(value - target))
    return {"max_deviation": worst, "passed": worst <= CONSISTENCY_TOL}


def verify_identities(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    parts = {
        "special_cases": identity_check(),
        "three_block": three_block_consistency(_count(n, 100), cfg.seed),
        "vertex": vertex_check(),
    }
    parts["passed"] = all(p["passed"] for p in parts.values())
    return parts


def verify_tightness(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    records = achievability_records(cfg)
    finals: Dict[str, Dict[str, Any]] = {}
    for rec in records:
        gate = gate_for(rec.family, rec.d)
        finals[f"{rec.bound}/{rec.family}"] = {
            "d": rec.d, "gap": rec.gap, "target": rec.target, "deviation": rec.deviation,
            "gate": gate, "passed": gate is None or rec.deviation <= gate}
    growth = [family_thm1_infinite_gap(d, 0.1, 0.5, 2.0, 0.5) for d in (10 ** 2, 10 ** 4, 10 ** 6)]
    eps = 0.25
    u = uniform(4)
    flat_identity = renyi(u, u, 0.5) - hypothesis_testing(u, u, eps)
    flat_ok = abs(flat_identity + math.log2(1.0 / (1.0 - eps))) <= IDENTITY_TOL
    return {
        "families": finals,
        "unbounded_mu": {"gaps": growth, "increasing": all(b > a for a, b in zip(growth, growth[1:]))},
        "flat_identity": flat_identity,
        "passed": all(f["passed"] for f in finals.values()) and flat_ok
        and all(b > a for a, b in zip(growth, growth[1:])),
    }


def verify_dpi(n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    return dpi_spot_check(default_registry(), _count(n, 200), cfg.seed)


VERIFY_TARGETS: Dict[str, Suite] = {
    "oracle": verify_oracle,
    "dh": verify_dh,
    "relmaj": verify_relmaj,
    "appendix": verify_appendix,
    "identities": verify_identities,
    "tightness": verify_tightness,
    "dpi": verify_dpi,
}


def run_target(target: str, n: Optional[int], cfg: SweepConfig) -> Dict[str, Any]:
    """Run one target, or every target for "all"."""
    if target == "all":
        results = {}
        for name, suite in VERIFY_TARGETS.items():
            logger.info(_("Running verification target: {}").format(name))
            results[name] = suite(n, cfg)
        results["passed"] = all(r["passed"] for r in results.values())
        return results
    suite = VERIFY_TARGETS.get(target)
    if suite is None:
        raise InputError(f"unknown verify target '{target}'")
    return suite(n, cfg)
