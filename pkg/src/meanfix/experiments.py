"""Runs one configured experiment per command and assembles its report."""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from meanfix.afps.engine import anchored_afps, default_start, km_iterate, product_diameter
from meanfix.afps.residuals import chain_consistency, gjp_chain_check, residual_family
from meanfix.config.config_setup import ExperimentConfig, LogsConfig
from meanfix.constants import NORM_TOL, SAMPLE_SLACK, SCHEMA_VERSION
from meanfix.examples.registry import exact_check_passed
from meanfix.exceptions import ConditionRefusedError
from meanfix.mappings.derived import build_j, iterate, t_alpha, tau_alpha
from meanfix.mappings.lipschitz import check_self_map, estimate_lipschitz, estimate_power_constants
from meanfix.mappings.multi_index import MultiIndex
from meanfix.mappings.sampler import PairSampler
from meanfix.models import ExampleVerification
from meanfix.spaces.vectors import ProductPoint, SeqVec
from meanfix.trace.event_traces import ExperimentTrace
from meanfix.trace.trace_writer import get_writer
from meanfix.utils import make_run_id
from meanfix.verification import conditions
from meanfix.verification.conditions import HALF_SQRT2, N3_CROSSOVER
from meanfix.verification.inequalities import check_mean_nonexpansive, find_expansion_witness

# slack for k_hat(T_alpha) and k_hat(tau_alpha) against 1, and for the naive bound
LIPSCHITZ_SLACK = 1e-6
ANCHORED_INNER_TOL = 1e-10

Outcome = Tuple[Dict[str, Any], Optional[pd.DataFrame]]


class MeanFixLab:
    def __init__(self, config: ExperimentConfig, logs: LogsConfig, command: str, progress: bool = False):
        self.config = config
        self.logs = logs
        self.command = command
        self.progress = progress
        self.spec = config.example_spec
        self.dim = config.resolved_dim(command)
        self.alpha = config.multi_index()
        self.T = self.spec.build(self.dim, config.resolved_p())
        self.run_id = make_run_id(command, config.example, config.seed)
        self.trace = ExperimentTrace(self.run_id, command, config.example, config.seed)
        logger.info(f"{command} on {config.example}: dim {self.dim}, alpha {self.alpha.tolist()}, "
                    f"p {self.alpha.p.p:g}, seed {config.seed}")

    def sampler(self) -> PairSampler:
        return PairSampler(self.T.domain, self.config.seed)

    def expects_mean_nonexpansive(self) -> Optional[bool]:
        """The known answer for this (alpha, p), if there is one."""
        if self.spec.ambient_p is None:
            # baselines are nonexpansive, hence mean nonexpansive for every multi-index
            return True
        if self.alpha == self.spec.default_multi_index():
            return self.spec.mean_nonexpansive
        return None

    def document(self, **results) -> Dict[str, Any]:
        return {"schema": SCHEMA_VERSION, "command": self.command, "seed": self.config.seed,
                "config": self.config.echo(), **results}

    def output_path(self) -> str:
        return self.config.out or f"{self.run_id}.{self.config.format}"

    def write(self, document: Dict[str, Any], table: Optional[pd.DataFrame] = None) -> str:
        path = self.output_path()
        get_writer(self.config.format).write(document, path, table)
        return path

    def finish(self):
        self.trace.persist_trace(self.logs)
        if self.trace.passed:
            logger.info(f"{self.run_id}: all {len(self.trace.events)} checks passed")
        else:
            logger.warning(f"{self.run_id}: failed checks {self.trace.failed}")

    # examples verify

    def verify_examples(self) -> Outcome:
        cfg, T, alpha = self.config, self.T, self.alpha
        report = ExampleVerification(example=cfg.example, witness_expected=self.spec.witness_threshold is not None,
                                     witness_threshold=self.spec.witness_threshold)

        for check in self.spec.reference(T):
            passed = exact_check_passed(check)
            report.exact_checks.append({**check._asdict(), "passed": passed})
            self.trace.trace_check_event(f"exact:{check.name}", passed, observed=check.observed,
                                         expected=check.expected)

        derived = [T, iterate(T, 2), t_alpha(T, alpha), tau_alpha(T, alpha)]
        for handle, child in zip(derived, self.sampler().spawn(len(derived))):
            result = check_self_map(handle, child, cfg.trials)
            report.self_map.append(result)
            self.trace.trace_check_event(f"self-map:{handle.label}", result.passed, escapes=result.escapes,
                                         worst_overshoot=result.worst_overshoot)

        report.mean_check = check_mean_nonexpansive(T, alpha, cfg.trials, seed=cfg.seed, workers=cfg.workers)
        expected = self.expects_mean_nonexpansive()
        found_clean = report.mean_check.verdict == "no-violation-found"
        self.trace.trace_check_event("mean-inequality", expected is None or found_clean == expected,
                                     verdict=report.mean_check.verdict, expected_clean=expected,
                                     n_violations=report.mean_check.n_violations,
                                     max_slack=report.mean_check.max_slack)

        report.witness = find_expansion_witness(T, cfg.trials, cfg.refine_steps, seed=cfg.seed, progress=self.progress)
        if report.witness_expected:
            witness_ok = report.witness is not None and report.witness.ratio >= report.witness_threshold
        else:
            witness_ok = report.witness is None
        self.trace.trace_check_event("expansion-witness", witness_ok,
                                     ratio=report.witness.ratio if report.witness else None,
                                     threshold=report.witness_threshold)

        report.failures = self.trace.failed
        document = self.document(example=cfg.example, passed=report.passed, report=report.model_dump(mode="json"))
        return document, None

    # afps run

    def run_afps(self) -> Outcome:
        cfg, T = self.config, self.T
        J = build_j(T, self.alpha)
        z0 = default_start(J, cfg.seed)
        standard = J.exponents == tuple(range(1, J.n + 1))
        k_list = estimate_power_constants(T, J.n, self.sampler(), cfg.trials, cfg.workers,
                                          top=J.n - 1 if standard else 1)
        chain_breaks: List[int] = []

        def check_chain(step: int, parts: np.ndarray):
            family = residual_family(T, J.alpha, ProductPoint(parts), J.exponents)
            if not chain_consistency(family, k_list):
                chain_breaks.append(step)

        if cfg.scheme == "km":
            trace = km_iterate(J, z0, cfg.lam, cfg.max_iter, cfg.resolved_tol(), seed=cfg.seed,
                               progress=self.progress, on_step=check_chain if standard else None)
        else:
            trace = anchored_afps(J, z0, cfg.eps, ANCHORED_INNER_TOL, seed=cfg.seed, progress=self.progress).trace
        point = ProductPoint(np.array(trace.final_point))
        report = residual_family(T, J.alpha, point, J.exponents, k_hat=k_list[1])

        if cfg.scheme == "km":
            self.trace.trace_check_event("km-converged", trace.converged, steps=trace.steps,
                                         final_residual=trace.final_residual, tol=cfg.resolved_tol())
            self.trace.trace_check_event("km-monotone", trace.monotone, increases=trace.residual_increases[:20])
        else:
            bound = cfg.eps * product_diameter(J) + ANCHORED_INNER_TOL + NORM_TOL
            self.trace.trace_check_event("anchored-bound", trace.final_residual <= bound,
                                         final_residual=trace.final_residual, bound=bound)
        self.trace.trace_check_event("residual-bounds", bool(report.bounds_ok), bound=report.bound)
        if standard:
            if cfg.scheme == "anchored":
                check_chain(trace.steps, point.array)
            if chain_breaks:
                logger.warning(f"Residual chain broke at {len(chain_breaks)} steps, first at {chain_breaks[0]}")
            self.trace.trace_check_event("chain-consistency", not chain_breaks, k_estimates=k_list,
                                         steps_checked=trace.steps + 1 if cfg.scheme == "km" else 1,
                                         failed_steps=chain_breaks[:20])

        chain = None
        if standard and J.n == 2 and self.expects_mean_nonexpansive() is not False:
            try:
                chain = gjp_chain_check(T, J.alpha, SeqVec(point.array[0]), report.r_tau)
                self.trace.trace_check_event("gjp-chain", chain.passed, bound=chain.bound, observed=chain.observed)
            except ConditionRefusedError as e:
                logger.warning(f"Chain check refused: {e}")

        summary = trace.model_dump(mode="json", exclude={"residuals"})
        summary.update(steps=trace.steps, final_residual=trace.final_residual)
        document = self.document(example=cfg.example, passed=self.trace.passed, trace=summary,
                                 residuals=report.model_dump(mode="json"),
                                 gjp_chain=chain.model_dump(mode="json") if chain else None,
                                 k_estimates=k_list)
        rows = [{"step": step, "metric": "residual", "value": r} for step, r in enumerate(trace.residuals)]
        rows += [{"step": trace.steps, "metric": name, "value": value}
                 for name, value in {**report.bounded_entries(), "r_T": report.r_T}.items()]
        return document, pd.DataFrame(rows, columns=["step", "metric", "value"])

    # conditions sweep

    def _conditions_for(self, n: int, p: float) -> List[str]:
        ids = [conditions.GJP_GENERAL, conditions.REMARK_GENERAL]
        if n == 2:
            ids.insert(0, conditions.GJP2)
        if n == 3 and p == 1.0:
            ids[:0] = [conditions.N3, conditions.GJP_N3_IMPROVED]
        return ids

    def sweep_conditions(self) -> Outcome:
        cfg = self.config
        n = cfg.n or self.alpha.n
        p = cfg.resolved_p()
        checkers = {
            conditions.GJP2: conditions.cond_gjp2,
            conditions.N3: conditions.cond_n3,
            conditions.GJP_N3_IMPROVED: conditions.cond_gjp_n3_improved,
            conditions.GJP_GENERAL: conditions.cond_gjp_general,
            conditions.REMARK_GENERAL: lambda a: conditions.cond_remark_general(
                a, conditions.mean_lipschitz_bounds(a, max(2, a.n - 1))),
        }
        ids = self._conditions_for(n, p)
        grid = conditions.simplex_grid(n, cfg.grid_step)
        alpha_cols = [f"alpha{j}" for j in range(1, n + 1)]
        rows = []
        for weights in tqdm(grid, desc=f"sweep n={n}", disable=not self.progress):
            alpha = MultiIndex(weights, p)
            base = dict(zip(alpha_cols, weights.tolist()), p=p)
            for cid in ids:
                result = checkers[cid](alpha)
                rows.append({**base, "condition_id": cid, "verdict": result.verdict, "lhs": result.lhs,
                             "rhs": result.rhs})
            if n == 3 and p == 1.0:
                cmp = conditions.compare_n3_bounds(weights[0])
                rows.append({**base, "condition_id": "n3-bound-comparison", "verdict": cmp.improved_smaller,
                             "lhs": cmp.improved, "rhs": cmp.quadratic})
        table = pd.DataFrame(rows, columns=alpha_cols + ["p", "condition_id", "verdict", "lhs", "rhs"])

        summary = {}
        for cid, group in table.groupby("condition_id", sort=False):
            holding = group[group["verdict"]]
            summary[cid] = {"points": int(len(group)), "true": int(len(holding)),
                            "min_alpha1_true": float(holding["alpha1"].min()) if len(holding) else None}
        self._sweep_checks(n, p, table)
        document = self.document(n=n, p=p, grid_step=cfg.grid_step, passed=self.trace.passed, summary=summary)
        return document, table

    def _sweep_checks(self, n: int, p: float, table: pd.DataFrame):
        if n == 2 and p == 1.0:
            grid = conditions.alpha1_grid(999)
            agree = all(conditions.cond_gjp_general(MultiIndex((a, 1.0 - a), 1.0)).verdict == (a >= 0.5)
                        for a in grid)
            self.trace.trace_check_event("gjp-general-reduces-to-half", agree, points=len(grid))
        if n == 3 and p == 1.0:
            n3 = table[table["condition_id"] == conditions.N3]
            large = n3[n3["alpha1"] >= HALF_SQRT2]
            self.trace.trace_check_event("n3-large-alpha1", bool(large["verdict"].all()), points=int(len(large)))
            cmp = table[table["condition_id"] == "n3-bound-comparison"]
            below = cmp[cmp["alpha1"] < N3_CROSSOVER]
            self.trace.trace_check_event("n3-improved-bound-smaller-below-crossover", bool(below["verdict"].all()),
                                         crossover=N3_CROSSOVER, points=int(len(below)))

    # lipschitz

    def lipschitz_report(self) -> Outcome:
        cfg, T, alpha = self.config, self.T, self.alpha
        maps = {"T": T, "T^2": iterate(T, 2), "T_alpha": t_alpha(T, alpha), "tau_alpha": tau_alpha(T, alpha)}
        estimates = {name: estimate_lipschitz(handle, child, cfg.trials, cfg.workers)
                     for (name, handle), child in zip(maps.items(), self.sampler().spawn(len(maps)))}
        k_tau = estimates["tau_alpha"].k_hat
        naive = conditions.naive_tau_bound(alpha) if alpha.n == 2 else None
        mean_bound = alpha[1] ** (-1.0 / alpha.p.p)
        flags = {
            "tau_alpha_nonexpansive_evidence": k_tau <= 1.0 + SAMPLE_SLACK,
            "t_alpha_nonexpansive_evidence": estimates["T_alpha"].k_hat <= 1.0 + SAMPLE_SLACK,
            "k_T_within_mean_bound": estimates["T"].k_hat <= mean_bound + LIPSCHITZ_SLACK,
            "tau_alpha_within_naive_bound": None if naive is None else k_tau <= naive + LIPSCHITZ_SLACK,
        }
        if self.expects_mean_nonexpansive():
            self.trace.trace_check_event("k(T) <= alpha_1^(-1/p)", flags["k_T_within_mean_bound"],
                                         k_hat=estimates["T"].k_hat, bound=mean_bound)
            # the power-mean inequality makes T_alpha nonexpansive whenever T is mean nonexpansive
            self.trace.trace_check_event("k(T_alpha) <= 1", flags["t_alpha_nonexpansive_evidence"],
                                         k_hat=estimates["T_alpha"].k_hat)
            if naive is not None:
                self.trace.trace_check_event("k(tau_alpha) <= naive bound", flags["tau_alpha_within_naive_bound"],
                                             k_hat=k_tau, bound=naive)
        if not flags["tau_alpha_nonexpansive_evidence"]:
            logger.warning(f"k_hat(tau_alpha) = {k_tau:.6g} exceeds 1 for {cfg.example}")
        document = self.document(example=cfg.example, passed=self.trace.passed, naive_tau_bound=naive,
                                 mean_lipschitz_bound=mean_bound, flags=flags,
                                 estimates={name: e.model_dump(mode="json") for name, e in estimates.items()})
        table = pd.DataFrame([{"map": name, "k_hat": e.k_hat, "pairs_sampled": e.pairs_sampled}
                              for name, e in estimates.items()], columns=["map", "k_hat", "pairs_sampled"])
        return document, table

    # witness

    def witness(self) -> Outcome:
        cfg, T = self.config, self.T
        plain = find_expansion_witness(T, cfg.trials, cfg.refine_steps, seed=cfg.seed, progress=self.progress)
        mean = find_expansion_witness(T, cfg.trials, cfg.refine_steps, seed=cfg.seed, alpha=self.alpha,
                                      progress=self.progress)
        threshold = self.spec.witness_threshold
        if threshold is not None:
            self.trace.trace_check_event("expansion-witness", plain is not None and plain.ratio >= threshold,
                                         ratio=plain.ratio if plain else None, threshold=threshold)
        else:
            self.trace.trace_check_event("no-expansion-witness", plain is None,
                                         ratio=plain.ratio if plain else None)
        document = self.document(example=cfg.example, passed=self.trace.passed,
                                 nonexpansive_witness=plain.model_dump(mode="json") if plain else None,
                                 mean_witness=mean.model_dump(mode="json") if mean else None)
        return document, None
