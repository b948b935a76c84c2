"""Experiment dispatch, exponent fits, and the certificate verification suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import heis, incidence, matgrp, setalg
from ..field import make_field, check_subfield_condition
from ..setalg import FSet
from .config import ExperimentConfig
from .families import FAMILIES, generate_set
from .rng import SplitMix64, derive_seed

# Proven lower-bound exponents, shown next to the fitted slopes for comparison only.
REFERENCE_EXPONENTS = {
    ("sl2_product", "RR_size"): 7 / 2 + 1 / 12,
    ("heis2_zero", "product_size"): 11 / 2 + 25 / 262,
    ("heis2_full", "product_size"): 11 / 2 + 23 / 90,
    ("heis1", "product_size"): 7 / 2,
}

COLUMNS = {
    "sl2_product": [
        "R_size", "RR_size", "RR_t0", "triples_nonzero", "nu_total_nonzero", "nu_total_zero_t", "T",
        "AAAA_nonzero", "containment_ok", "cs_ok", "cross_path_ok", "log_ratio",
    ],
    "heis2_zero": [
        "product_size", "N_direct", "N_fiber", "N_equal", "E_add", "AAAA", "cs_ok", "bilinear_ok",
        "regime_half", "regime_9_16", "log_ratio",
    ],
    "heis2_full": ["product_size", "AAAA_A_A", "AA_A_A", "thm4_ok", "regime_9_16", "log_ratio"],
    "heis1": [
        "product_size", "sumset", "productset", "AAAA", "certificate_rhs", "hh_ok", "ratio_hh_large",
        "ratio_hh_small", "ratio_subfield_free", "regime_large", "regime_small", "log_ratio",
    ],
    "energies": [
        "sumset", "productset", "E_add", "E_mul", "Q", "Q_brute", "Q_equal", "cs_add_ok", "cs_Q_ok",
        "shift_max", "shift_ratio", "shift_hyp_ratio", "ratio_set", "closure1", "closure2", "closure3",
        "subfield_ok",
    ],
    "incidence": [
        "points", "planes", "I", "k", "rudnev_bound", "rudnev_ratio", "rudnev_ok", "weighted_I", "Q",
        "q_match_ok", "sdz_I", "sdz_ratio", "sdz_within_unit",
    ],
    "inequalities": ["k", "lhs", "rhs", "pr_ok", "diff_lhs", "diff_rhs", "diff_ok"],
}

# verdict columns that must be true on every row
CERTIFICATES = {
    "sl2_product": ["containment_ok", "cs_ok", "cross_path_ok"],
    "heis2_zero": ["N_equal", "cs_ok", "bilinear_ok"],
    "heis2_full": ["thm4_ok"],
    "heis1": ["hh_ok"],
    "energies": ["Q_equal", "cs_add_ok", "cs_Q_ok"],
    "incidence": ["rudnev_ok", "q_match_ok"],
    "inequalities": ["pr_ok", "diff_ok"],
}

FIT_TARGETS = {
    "sl2_product": ["RR_size"],
    "heis2_zero": ["product_size"],
    "heis2_full": ["product_size"],
    "heis1": ["product_size"],
    "energies": ["sumset", "productset", "E_add"],
    "incidence": ["I"],
    "inequalities": [],
}

ECHO_COLUMNS = ["experiment", "p", "n", "family", "size", "trial", "set_seed", "sets"]


@dataclass
class TrialResult:
    experiment: str
    p: int
    n: int
    family: str
    size: int
    trial: int
    set_seed: int
    sets: list[FSet]
    values: dict

    def failed_certificates(self) -> list[str]:
        return [c for c in CERTIFICATES[self.experiment] if self.values.get(c) is False]

    def sets_repr(self) -> str:
        return "|".join(" ".join(str(a) for a in S) for S in self.sets)


@dataclass
class ExponentFit:
    experiment: str
    family: str
    quantity: str
    slope: float | None
    intercept: float | None
    samples: int
    residuals: list[float] = field(default_factory=list)
    reference: float | None = None


def _log_ratio(value: int, size: int):
    return math.log(value) / math.log(size) if size >= 2 and value > 0 else None


# -- per-experiment trial bodies ----------------------------------------------

def _trial_sl2(A: FSet, cfg: ExperimentConfig) -> dict:
    R = matgrp.build_R(A)
    prod = matgrp.product_set(R, R, cfg.budget("sl2_pairs"))
    nu = matgrp.nu_statistics(A)
    cont = matgrp.containment_certificate(A, prod=prod)
    cs = matgrp.cs_lower_bound_certificate(A, prod=prod, nu=nu)
    t0 = prod.count_zero_t()
    return {
        "R_size": len(R),
        "RR_size": len(prod),
        "RR_t0": t0,
        "triples_nonzero": nu.distinct_nonzero,
        "nu_total_nonzero": nu.nonzero_total,
        "nu_total_zero_t": nu.zero_t_total,
        "T": nu.T,
        "AAAA_nonzero": cont.detail["AA+AA\\0"],
        "containment_ok": cont.ok,
        "cs_ok": cs.ok,
        "cross_path_ok": len(prod) == nu.distinct_nonzero + t0,
        "log_ratio": _log_ratio(len(prod), len(A)),
    }


def _trial_heis2_zero(A: FSet, cfg: ExperimentConfig) -> dict:
    K = heis.HeisCube(A, A, None, 2)
    size = heis.cube_product_set(K, K, cfg.budget("cube_pairs")).size
    N = heis.collision_count_direct(A, cfg.budget("direct_tuples")).N
    N_fiber = heis.collision_count_fiber(A).N if len(A) <= cfg.budget("fiber_max_size") else None
    cs = heis.cs_certificate_heis(A, size=size, N=N)
    bil = heis.bilinear_image_certificate(A, size=size)
    AA = setalg.productset(A, A)
    m, p = len(A), A.ctx.p
    return {
        "product_size": size,
        "N_direct": N,
        "N_fiber": N_fiber,
        "N_equal": None if N_fiber is None else N == N_fiber,
        "E_add": setalg.additive_energy(A).value,
        "AAAA": len(setalg.sumset(AA, AA)),
        "cs_ok": cs.ok,
        "bilinear_ok": bil.ok,
        "regime_half": m * m <= p,
        "regime_9_16": m**16 <= p**9,
        "log_ratio": _log_ratio(size, m),
    }


def _trial_heis2_full(A: FSet, cfg: ExperimentConfig) -> dict:
    cert = heis.thm4_certificate(A, cfg.budget("cube_pairs"))
    AA = setalg.productset(A, A)
    m, p = len(A), A.ctx.p
    return {
        "product_size": cert.lhs,
        "AAAA_A_A": cert.detail["AA+AA+A+A"],
        "AA_A_A": len(setalg.sumset(AA, setalg.sumset(A, A))),
        "thm4_ok": cert.ok,
        "regime_9_16": m**16 <= p**9,
        "log_ratio": _log_ratio(cert.lhs, m),
    }


def _trial_heis1(A: FSet, cfg: ExperimentConfig) -> dict:
    q = heis.hh_degree1_quantities(A, cfg.budget("cube_pairs"))
    return {
        "product_size": q["size"],
        "sumset": q["sumset"],
        "productset": q["productset"],
        "AAAA": q["AA+AA"],
        "certificate_rhs": q["certificate_rhs"],
        "hh_ok": q["certificate_ok"],
        "ratio_hh_large": q["ratios"]["hh_large"],
        "ratio_hh_small": q["ratios"]["hh_small"],
        "ratio_subfield_free": q["ratios"]["subfield_free"],
        "regime_large": q["regime_large"],
        "regime_small": q["regime_small"],
        "log_ratio": _log_ratio(q["size"], len(A)),
    }


def _trial_energies(A: FSet, cfg: ExperimentConfig) -> dict:
    m = len(A)
    sA, pA = setalg.sumset(A, A), setalg.productset(A, A)
    e_add = setalg.additive_energy(A).value
    Q = setalg.lemma22_count(A).value
    Q_brute = None
    if m**8 <= cfg.budget("q_brute_tuples"):
        Q_brute = setalg.lemma22_count(A, "brute_force").value
    aa_aa = len(setalg.sumset(pA, pA))
    shift = setalg.max_shifted_intersection(A, A)
    out = {
        "sumset": len(sA),
        "productset": len(pA),
        "E_add": e_add,
        "E_mul": setalg.mult_energy(A, A).value,
        "Q": Q,
        "Q_brute": Q_brute,
        "Q_equal": None if Q_brute is None else Q == Q_brute,
        "cs_add_ok": e_add * len(sA) >= m**4,
        "cs_Q_ok": Q * aa_aa >= m**8,
        "shift_max": shift.max,
        "shift_ratio": shift.rhs_ratio,
        "shift_hyp_ratio": float(shift.hypothesis_ratio),
        "ratio_set": None,
        "closure1": None,
        "closure2": None,
        "closure3": None,
        "subfield_ok": check_subfield_condition(A).ok,
    }
    if m >= 2:
        probe = setalg.ratio_closure_probe(A, A)
        out.update(ratio_set=probe.ratio_size, closure1=probe.case1, closure2=probe.case2, closure3=probe.case3)
    return out


def _trial_incidence(A: FSet, cfg: ExperimentConfig) -> dict:
    cfgQ = incidence.q_configuration(A, A, A, A)
    rud = incidence.rudnev_bound_report(cfgQ.points, cfgQ.planes)
    wI = incidence.weighted_incidences(cfgQ)
    Q = setalg.lemma22_count(A).value
    out = {
        "points": len(cfgQ.points),
        "planes": len(cfgQ.planes),
        "I": rud.I,
        "k": rud.k,
        "rudnev_bound": rud.bound,
        "rudnev_ratio": rud.ratio,
        "rudnev_ok": rud.ok,
        "weighted_I": wI,
        "Q": Q,
        "q_match_ok": wI == Q,
        "sdz_I": None,
        "sdz_ratio": None,
        "sdz_within_unit": None,
    }
    if 0 not in A and len(A):
        # points A^{-1} x AA, lines b^{-1} Y - u X = x for b in A, u in AA
        ctx = A.ctx
        shift = setalg.max_shifted_intersection(A, A)
        x = shift.argmax if shift.argmax is not None else 1
        Ainv = setalg.inverse_set(A)
        AA = setalg.productset(A, A)
        lines = incidence.LineSet(ctx.p, [(ctx.neg(u), ctx.inv(b), x) for b in A for u in AA])
        rep = incidence.sdz_bound_report(Ainv, AA, lines)
        out.update(sdz_I=rep.I, sdz_ratio=rep.ratio, sdz_within_unit=rep.ok)
    return out


def _trial_inequalities(sets: list[FSet], cfg: ExperimentConfig) -> dict:
    X, Bs = sets[0], sets[1:]
    rep = setalg.pr_inequality_check(X, Bs)
    return {
        "k": len(Bs),
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "pr_ok": rep.lhs <= rep.rhs,
        "diff_lhs": rep.diff_lhs,
        "diff_rhs": rep.diff_rhs,
        "diff_ok": rep.diff_ok,
    }


_TRIALS = {
    "sl2_product": _trial_sl2,
    "heis2_zero": _trial_heis2_zero,
    "heis2_full": _trial_heis2_full,
    "heis1": _trial_heis1,
    "energies": _trial_energies,
    "incidence": _trial_incidence,
}


def _trial_sets(cfg: ExperimentConfig, family: str, size: int, set_seed: int) -> list[FSet]:
    ctx = make_field(cfg.p, cfg.n)
    if cfg.experiment != "inequalities":
        return [generate_set(family, size, set_seed, ctx, cfg.exclude_zero)]
    k_max = int(cfg.params.get("k_max", 4))
    k = 1 + SplitMix64(set_seed).below(k_max)
    return [generate_set(family, size, derive_seed(set_seed, j), ctx, cfg.exclude_zero) for j in range(k + 1)]


def run_trial(cfg: ExperimentConfig, family: str, size: int, trial: int) -> TrialResult:
    set_seed = derive_seed(cfg.seed, FAMILIES.index(family), size, trial)
    sets = _trial_sets(cfg, family, size, set_seed)
    try:
        if cfg.experiment == "inequalities":
            values = _trial_inequalities(sets, cfg)
        else:
            values = _TRIALS[cfg.experiment](sets[0], cfg)
    except Exception as e:
        where = f"[{cfg.experiment} family={family} size={size} trial={trial} set={list(sets[0])}]"
        raise type(e)(f"{e} {where}") from e
    return TrialResult(cfg.experiment, cfg.p, cfg.n, family, size, trial, set_seed, sets, values)


def fit_exponent(sizes, values) -> tuple[float, float, list[float]] | None:
    """Least-squares line through (log size, log value)."""
    pts = [(math.log(s), math.log(v)) for s, v in zip(sizes, values) if s >= 2 and v and v > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    x = np.array([a for a, _ in pts])
    y = np.array([b for _, b in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), [float(r) for r in resid]


def run_experiment(cfg: ExperimentConfig) -> tuple[list[TrialResult], list[ExponentFit]]:
    results = []
    for family in cfg.families:
        for size in sorted(cfg.sizes):
            for trial in range(cfg.trials):
                results.append(run_trial(cfg, family, size, trial))
    results.sort(key=lambda r: (cfg.families.index(r.family), r.size, r.trial))
    fits = []
    for family in cfg.families:
        rows = [r for r in results if r.family == family]
        for qty in FIT_TARGETS[cfg.experiment]:
            samples = [(r.size, r.values[qty]) for r in rows if r.size >= 2 and r.values.get(qty)]
            res = fit_exponent([s for s, _ in samples], [v for _, v in samples])
            ref = REFERENCE_EXPONENTS.get((cfg.experiment, qty))
            if res is None:
                fits.append(ExponentFit(cfg.experiment, family, qty, None, None, len(samples), [], ref))
            else:
                fits.append(ExponentFit(cfg.experiment, family, qty, res[0], res[1], len(samples), res[2], ref))
    return results, fits


# -- verification suite -------------------------------------------------------

def default_verify_configs(seed: int = 1) -> list[ExperimentConfig]:
    mk = lambda exp, sizes, **kw: ExperimentConfig(
        experiment=exp, p=kw.pop("p", 101), seed=seed, sizes=sizes,
        families=kw.pop("families", ("interval", "uniform_random", "geometric_progression")),
        trials=kw.pop("trials", 2), **kw,
    )
    return [
        mk("sl2_product", (1, 2, 3, 4, 5)),
        mk("heis2_zero", (1, 2, 3, 4)),
        mk("heis2_full", (1, 2, 3, 4)),
        mk("heis1", (2, 4, 6, 8)),
        mk("energies", (1, 2, 3, 4, 6)),
        mk("incidence", (2, 3, 4)),
        mk("inequalities", (3, 5, 10, 20), families=("uniform_random",), trials=5),
    ]


def _group_axiom_checks(seed: int, p: int = 101, rounds: int = 200) -> tuple[int, list[dict]]:
    ctx = make_field(p)
    rng = SplitMix64(seed)
    failures, checks = [], 0

    def rand_sl2():
        while True:
            a, b, c = rng.below(p), rng.below(p), rng.below(p)
            if a:
                return matgrp.MatSL2(ctx, (a, b, c, (1 + b * c) * pow(a, -1, p) % p))

    def rand_heis(n):
        return heis.HeisElem(ctx, tuple(rng.below(p) for _ in range(n)), tuple(rng.below(p) for _ in range(n)), rng.below(p))

    for _ in range(rounds):
        M, N, L = rand_sl2(), rand_sl2(), rand_sl2()
        I = matgrp.MatSL2.identity(ctx)
        for name, ok in [
            ("sl2_assoc", (M @ N) @ L == M @ (N @ L)),
            ("sl2_identity", M @ I == M and I @ M == M),
            ("sl2_inverse", M @ M.inverse() == I),
        ]:
            checks += 1
            if not ok:
                failures.append({"check": name, "input": [M.entries, N.entries, L.entries]})
        g, h, k = rand_heis(2), rand_heis(2), rand_heis(2)
        e = heis.HeisElem.identity(ctx, 2)
        matrix_ok = heis.HeisElem.from_matrix(ctx, g.to_matrix() @ h.to_matrix()) == g * h
        for name, ok in [
            ("heis_assoc", (g * h) * k == g * (h * k)),
            ("heis_identity", g * e == g and e * g == g),
            ("heis_inverse", g * g.inverse() == e),
            ("heis_matrix", matrix_ok),
        ]:
            checks += 1
            if not ok:
                failures.append({"check": name, "input": [repr(g), repr(h), repr(k)]})
    return checks, failures


@dataclass
class VerifySummary:
    checks: int
    failures: list[dict]
    configs: list[ExperimentConfig]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_suite(cfgs: ExperimentConfig | list[ExperimentConfig]) -> VerifySummary:
    """Run every certificate on the configured inputs; failures carry their reproducing input."""
    if isinstance(cfgs, ExperimentConfig):
        cfgs = [cfgs]
    checks, failures = 0, []
    for cfg in cfgs:
        results, _ = run_experiment(cfg)
        for r in results:
            for cert in CERTIFICATES[cfg.experiment]:
                if r.values.get(cert) is None:
                    continue
                checks += 1
                if r.values[cert] is not True:
                    failures.append({
                        "check": cert, "experiment": r.experiment, "p": r.p, "n": r.n,
                        "family": r.family, "size": r.size, "trial": r.trial,
                        "set_seed": r.set_seed, "sets": r.sets_repr(),
                    })
    n_ax, ax_fail = _group_axiom_checks(cfgs[0].seed if cfgs else 0)
    return VerifySummary(checks + n_ax, failures + ax_fail, list(cfgs))
