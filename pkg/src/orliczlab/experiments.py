"""Batch experiment drivers: bind a group, a Young function and a weight into
reproducible runs that emit CSV tables plus a JSON sidecar of config and
verdicts.

Hard contracts (proven inequalities) mark rows 'fail' and flip the process
exit code; soft contracts (heuristic or asymptotic claims) only warn.  Two
runs with the same config hash produce byte-identical CSV bodies.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .calculus import (apply_series, apply_spectral, approx_identity_table,
                       plateau, pointwise_product)
from .convalg import (NormTag, convolve, desk_bound, gelfand_sequence,
                      growth_profile, inequality_suite, norm_value,
                      radial_majorant_check, random_finsupp, u_exact,
                      spectral_radius)
from .groups import (ShellModel, ValidationError, build_cyclic_sum,
                     build_leptin_hulanicki, standardize)
from .norms import FinSuppFun, holder_sides, l1_norm, luxemburg_norm, \
    orlicz_norm
from .weights import (check_axioms, geometric_seq, grs_sequence,
                      lq_membership, nonsubadd_witness_ratios,
                      nonsubadditive_example, power_seq, radial_weight,
                      sharpen, sharpen_p, trivial_weight, variation,
                      wfq_weight)
from .young import from_config as young_from_config

EXPERIMENTS = ("thm1", "weights", "calculus", "suite")


@dataclass
class ReportRow:
    experiment: str
    param_hash: str
    name: str
    value: float
    bound: float | None
    verdict: str        # 'pass' | 'fail' | 'warn' | 'info'


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


# -- config validation --------------------------------------------------------

_TOP_KEYS = {"experiment", "id", "seed", "group", "young", "weight",
             "calculus", "element", "samples", "kmax", "tolerances",
             "levels", "q"}
_GROUP_KEYS = {"kind", "orders", "depth", "normalization", "lazy", "indices",
               "tail_index"}
_YOUNG_KEYS = {"kind", "p"}
_WEIGHT_KEYS = {"kind", "values", "base", "p", "q", "fseq", "ratio", "s"}
_CALC_KEYS = {"gamma", "plateau", "tol"}
_PLATEAU_KEYS = {"p", "q", "eps"}


def _reject_unknown(d, allowed, where):
    unknown = set(d) - allowed
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)} in {where}")


def validate_config(config):
    if not isinstance(config, dict):
        raise ValidationError("config must be a JSON object")
    _reject_unknown(config, _TOP_KEYS, "config")
    exp = config.get("experiment")
    if exp not in EXPERIMENTS:
        raise ValidationError(f"experiment must be one of {EXPERIMENTS}")
    if "id" not in config:
        raise ValidationError("config needs an 'id'")
    if "seed" not in config or not isinstance(config["seed"], int):
        raise ValidationError("an integer 'seed' is mandatory")
    if "group" in config:
        _reject_unknown(config["group"], _GROUP_KEYS, "group")
    if "young" in config:
        _reject_unknown(config["young"], _YOUNG_KEYS, "young")
    if "weight" in config:
        _reject_unknown(config["weight"], _WEIGHT_KEYS, "weight")
        if config["weight"].get("kind") == "sharpen_p" \
                and "base" in config["weight"]:
            _reject_unknown(config["weight"]["base"], _WEIGHT_KEYS,
                            "weight.base")
    if "calculus" in config:
        _reject_unknown(config["calculus"], _CALC_KEYS, "calculus")
        if "plateau" in config["calculus"]:
            _reject_unknown(config["calculus"]["plateau"], _PLATEAU_KEYS,
                            "calculus.plateau")
    return config


# -- builders -----------------------------------------------------------------


def build_group(spec):
    kind = spec.get("kind", "cyclic_sum")
    if kind == "cyclic_sum":
        return build_cyclic_sum(tuple(spec["orders"]), spec.get("depth"),
                                spec.get("normalization", "normalized"),
                                lazy=spec.get("lazy", False))
    if kind == "leptin_hulanicki":
        return build_leptin_hulanicki(spec.get("depth", 2),
                                      spec.get("normalization", "normalized"),
                                      lazy=spec.get("lazy", False))
    if kind == "shell":
        return ShellModel(tuple(spec["indices"]), spec.get("tail_index"))
    raise ValidationError(f"unknown group kind {kind!r}")


def build_weight(spec, model):
    kind = (spec or {"kind": "trivial"}).get("kind", "trivial")
    if kind == "trivial":
        return trivial_weight(model)
    if kind == "radial":
        return radial_weight(model, spec["values"])
    if kind == "sharpen":
        return sharpen(build_weight(spec.get("base"), model))
    if kind == "sharpen_p":
        return sharpen_p(build_weight(spec.get("base"), model),
                         spec.get("p", 1.0))
    if kind == "wfq":
        fs = spec.get("fseq", "geometric")
        seq = geometric_seq(spec.get("ratio", 0.5)) if fs == "geometric" \
            else power_seq(spec.get("s", 2.0))
        return wfq_weight(model, seq, spec.get("q", 1.0))
    if kind == "example_nonsubadd":
        return nonsubadditive_example(model)
    raise ValidationError(f"unknown weight kind {kind!r}")


def _self_adjoint_pair(chain, x):
    f = FinSuppFun.point_mass(chain, x) + FinSuppFun.point_mass(
        chain, chain.inv(x))
    return f * 0.5


# -- runners ------------------------------------------------------------------


def run_thm1(config):
    """Spectral-radius independence of the norm: Gelfand sequences in the
    plain L^1 norm and the weighted Orlicz norm (weight = the integrable
    sub-additive majorant of the configured base weight over a standard
    decomposition) against the exact radius of the regular representation."""
    h = config_hash(config)
    chain = build_group(config.get("group", {"kind": "cyclic_sum",
                                             "orders": [2, 2, 2, 2]}))
    if chain.levels < 2:
        raise ValidationError("Gelfand experiments need >= 2 levels")
    st = standardize(chain)
    base = build_weight(config.get("weight"), st)
    w1 = sharpen_p(base, 1.0)
    phi = young_from_config(config.get("young", {"kind": "p_power", "p": 2}))
    kmax = config.get("kmax", 12)
    tol_rel = config.get("tolerances", {}).get("tol_rel", 0.05)
    level = min(2, st.enumerated_levels)
    rng = np.random.default_rng(config["seed"])
    elements = []
    el = config.get("element", {"kind": "random_self_adjoint"})
    if el.get("kind") == "symmetric_generator":
        x = st.generators[el.get("index", 0)]
        elements.append(("generator", _self_adjoint_pair(st, x)))
    else:
        lvl = el.get("level", level)
        for s in range(config.get("samples", 5)):
            elements.append(
                (f"random{s}",
                 random_finsupp(st, lvl, rng, self_adjoint=True)))
    rows = []
    hard_fail = False
    tag_or = NormTag("orlicz", phi, w1)
    for name, f in elements:
        rep1 = gelfand_sequence(f, NormTag("l1"), kmax)
        repo = gelfand_sequence(f, tag_or, kmax)
        rows.append(ReportRow("thm1", h, f"{name}.exact_radius",
                              rep1.exact_radius, None, "info"))
        rows.append(ReportRow("thm1", h, f"{name}.l1_final",
                              rep1.values[-1], rep1.exact_radius, "info"))
        ok = repo.final_rel_error <= tol_rel
        hard_fail |= not ok
        rows.append(ReportRow("thm1", h, f"{name}.orlicz_final",
                              repo.values[-1], rep1.exact_radius * (
                                  1 + tol_rel),
                              "pass" if ok else "fail"))
        rows.append(ReportRow("thm1", h, f"{name}.orlicz_rel_error",
                              repo.final_rel_error, tol_rel,
                              "pass" if ok else "fail"))
    return rows, hard_fail


def run_weights(config):
    """Weight-construction report: shell values, domination chain, axiom
    checks, GRS sequences, L^q partial sums, and counterexample witnesses."""
    h = config_hash(config)
    chain = build_group(config.get("group", {"kind": "cyclic_sum",
                                             "orders": [2, 2, 2]}))
    omega = build_weight(config.get("weight"), chain)
    rows = []
    hard_fail = False

    def row(name, value, bound, verdict):
        nonlocal hard_fail
        if verdict == "fail":
            hard_fail = True
        rows.append(ReportRow("weights", h, name, value, bound, verdict))

    sharp = sharpen(omega)
    sharp_p = sharpen_p(omega, config.get("weight", {}).get("p", 1.0))
    levels = chain.levels if hasattr(chain, "levels") else 0
    for i in range(1, levels + 1):
        if sharp.is_radial:
            row(f"sharp.shell_{i}", sharp.shell_value(i), None, "info")
            row(f"sharp_p.shell_{i}", sharp_p.shell_value(i), None, "info")
    # domination omega <= sharp <= sharp_p on enumerated levels
    dom_ok = True
    for i in range(1, chain.enumerated_levels + 1):
        for x in chain.elements(i):
            if not (omega(x) <= sharp(x) + 1e-12
                    and sharp(x) <= sharp_p(x) + 1e-12):
                dom_ok = False
    row("domination_chain", 1.0 if dom_ok else 0.0, 1.0,
        "pass" if dom_ok else "fail")
    lvl = min(chain.enumerated_levels, chain.levels)
    ax = check_axioms(omega, lvl)
    row("axioms.submult_worst", ax.submult_worst, 1.0,
        "info" if omega.name == "nonsubadd" else (
            "pass" if ax.submultiplicative else "fail"))
    row("axioms.subadd_constant", ax.subadd_constant, None, "info")
    row("axioms.level_max", ax.level_max, None, "info")
    var = variation(omega, lvl)
    row("variation", var, None, "info")
    for gi, x in enumerate(getattr(chain, "generators", ())[:4]):
        g = grs_sequence(omega, x, config.get("samples", 1000))
        row(f"grs.final@gen{gi}", g.values[-1],
            g.certificate ** (1.0 / len(g.values)),
            "pass" if g.within_bounds else "fail")
    if omega.is_radial:
        q = config.get("q", 1.0)
        lq = lq_membership(omega, q, lvl)
        bound = lq.bound
        if bound is None:
            row("lq.partial_final", float(lq.partial_sums[-1]), None, "info")
        else:
            ok = bool(np.all(lq.partial_sums <= bound + 1e-12))
            row("lq.partial_final", float(lq.partial_sums[-1]), bound,
                "pass" if ok else "fail")
    if omega.name == "nonsubadd":
        nmax = min(5, len(chain.orders) // 4)
        r = nonsubadd_witness_ratios(chain, nmax)
        inc = bool(np.all(np.diff(r) > 0))
        for n, v in enumerate(r, start=1):
            row(f"witness.r{n}", float(v), None, "info")
        row("witness.increasing", 1.0 if inc else 0.0, 1.0,
            "pass" if inc else "fail")
    return rows, hard_fail


def run_calculus(config):
    """Functional-calculus report: plateau contract profile, dual-path
    deviation, homomorphism residuals, approximate-identity table, and the
    u(inf) growth profile against the desk bound."""
    h = config_hash(config)
    chain = build_group(config.get("group", {"kind": "cyclic_sum",
                                             "orders": [2, 2, 2, 2]}))
    calc = config.get("calculus", {})
    gamma = calc.get("gamma", 0.5)
    pl = calc.get("plateau", {"p": 0.5, "q": 2.0, "eps": 0.4})
    tol = calc.get("tol", 1e-6)
    phi = plateau(pl["p"], pl["q"], pl["eps"], gamma)
    rng = np.random.default_rng(config["seed"])
    rows = []
    hard_fail = False

    def row(name, value, bound, verdict):
        nonlocal hard_fail
        if verdict == "fail":
            hard_fail = True
        rows.append(ReportRow("calculus", h, name, value, bound, verdict))

    for key, val in phi.contract_profile.items():
        row(f"plateau.{key}", val, 1e-6, "pass" if val <= 1e-6 else "fail")
    level = min(2, chain.enumerated_levels)
    for s in range(config.get("samples", 5)):
        f = random_finsupp(chain, level, rng, self_adjoint=True)
        srs, bound, _ = apply_series(phi, f, tol)
        spc = apply_spectral(phi, f)
        dev = l1_norm(srs - spc)
        row(f"dualpath.dev{s}", dev, tol + 1e-8,
            "pass" if dev <= tol + 1e-8 else "fail")
    psi = plateau(max(pl["p"] - 0.3, 0.05),
                  min(pl["q"] + 0.3, 2 * math.pi - 0.05),
                  pl["eps"] * 0.7, gamma)
    f = random_finsupp(chain, level, rng, self_adjoint=True)
    lhs = apply_spectral(pointwise_product(phi, psi), f)
    rhs = convolve(apply_spectral(phi, f), apply_spectral(psi, f))
    dev = l1_norm(lhs - rhs)
    row("homomorphism.dev", dev, 1e-6, "pass" if dev <= 1e-6 else "fail")
    # approximate identity (needs phi(1) = 1)
    if abs(phi.value(1.0) - 1.0) <= 1e-8:
        g = random_finsupp(chain, level, rng, self_adjoint=True)
        tab = approx_identity_table(chain, phi, trivial_weight(chain),
                                    NormTag("l1"), g)
        for label, err in tab:
            row(f"approxid.{label}", err,
                1e-8 if label == "{e}" else None,
                ("pass" if err <= 1e-8 else "fail") if label == "{e}"
                else "info")
    prof = growth_profile(f, gamma, config.get("samples", 5) + 10)
    row("growth.fitted_constant", prof.fitted_constant, None, "info")
    row("growth.within_desk_bound",
        1.0 if prof.within_desk_bound else 0.0, 1.0,
        "pass" if prof.within_desk_bound else "fail")
    return rows, hard_fail


def run_suite(config):
    """Aggregated inequality harness; exit code reflects hard contracts."""
    h = config_hash(config)
    chain = build_group(config.get("group", {"kind": "cyclic_sum",
                                             "orders": [2, 2, 2]}))
    phi = young_from_config(config.get("young", {"kind": "p_power", "p": 2}))
    omega = sharpen_p(build_weight(config.get("weight"), chain), 1.0)
    samples = config.get("samples", 100)
    seed = config["seed"]
    rows = []
    hard_fail = False

    def row(name, value, bound, verdict):
        nonlocal hard_fail
        if verdict == "fail":
            hard_fail = True
        rows.append(ReportRow("suite", h, name, value, bound, verdict))

    for flavor in ("orlicz", "luxemburg"):
        rep = inequality_suite(chain, phi, omega, samples, seed,
                               flavor=flavor)
        row(f"{flavor}.max_r2_fitted", rep.max_r2, None,
            "info" if not rep.exploratory else "warn")
        row(f"{flavor}.max_r3", rep.max_r3, 1.0 + 1e-9,
            "pass" if rep.max_r3 <= 1 + 1e-9 else "fail")
        row(f"{flavor}.max_rL", rep.max_rl, 1.0 + 1e-9,
            "pass" if rep.max_rl <= 1 + 1e-9 else "fail")
        row(f"{flavor}.sandwich_max", rep.max_sandwich, 2.0 + 1e-9,
            "pass" if rep.max_sandwich <= 2 + 1e-9 else "fail")
        row(f"{flavor}.sandwich_min", rep.min_sandwich, 1.0 - 1e-9,
            "pass" if rep.min_sandwich >= 1 - 1e-9 else "fail")
    rng = np.random.default_rng(seed + 1)
    level = min(2, chain.enumerated_levels)
    worst_holder = 0.0
    for _ in range(samples):
        f = random_finsupp(chain, level, rng)
        g = random_finsupp(chain, level, rng)
        lhs, rhs = holder_sides(f, g, phi)
        worst_holder = max(worst_holder, lhs - rhs)
    row("holder.worst_margin", worst_holder, 1e-9,
        "pass" if worst_holder <= 1e-9 else "fail")
    worst_maj = -math.inf
    for _ in range(max(samples // 4, 1)):
        f = random_finsupp(chain, level, rng)
        n = int(rng.integers(1, 9))
        lhs, rhs = radial_majorant_check(f, omega, n)
        worst_maj = max(worst_maj, (lhs - rhs) / max(rhs, 1e-300))
    row("majorant.worst_rel_margin", worst_maj, 1e-9,
        "pass" if worst_maj <= 1e-9 else "fail")
    worst_rec = 0.0
    for _ in range(max(samples // 4, 1)):
        f = random_finsupp(chain, level, rng, self_adjoint=True)
        f = f * (1.0 / l1_norm(f))
        uf = u_exact(f, 1.0)
        for n in (2, 3, 4):
            lhs = u_exact(f, float(n))
            rhs = float(n) * uf
            for k in range(1, n):
                rhs = rhs + convolve(u_exact(f, float(k)), uf)
            worst_rec = max(worst_rec, l1_norm(lhs - rhs))
    row("urecursion.worst_residual", worst_rec, 1e-9,
        "pass" if worst_rec <= 1e-9 else "fail")
    return rows, hard_fail


RUNNERS = {"thm1": run_thm1, "weights": run_weights,
           "calculus": run_calculus, "suite": run_suite}


def run_experiment(config):
    validate_config(config)
    return RUNNERS[config["experiment"]](config)


# -- output -------------------------------------------------------------------


def rows_to_csv(rows, timestamp=None):
    lines = []
    if timestamp is not None:
        lines.append(f"# generated {timestamp}")
    lines.append("experiment,param_hash,name,value,bound,verdict")
    for r in rows:
        bound = "" if r.bound is None else format(r.bound, ".17g")
        lines.append(f"{r.experiment},{r.param_hash},{r.name},"
                     f"{format(r.value, '.17g')},{bound},{r.verdict}")
    return "\n".join(lines) + "\n"


def sidecar(config, rows, hard_fail):
    return {
        "config": config,
        "param_hash": config_hash(config),
        "version": __version__,
        "hard_fail": hard_fail,
        "verdicts": {r.name: r.verdict for r in rows},
    }
