"""Command-line front end: every analysis as a reproducible batch run.

Configs are JSON objects (or flags for the scalar fields); rationals travel
as "p/q" strings so nothing ever round-trips through a float.  Reports are
JSON with schema "witt-report/1", deterministic for a given config up to the
timing field.  A content-addressed cache (keyed by the canonical config)
reproduces previous reports verbatim; it is an optimization only.

Exit codes: 0 when the requested check passed / coverage or a certificate was
found / the modules are isomorphic; 1 when a check failed or evidence was not
found; 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .exactlinalg import SparseVector, format_rational, parse_rational
from .glmodules import (
    InjectiveOnTruncation,
    Nilpotent,
    basis_enumerate,
    classify_operator,
    explicit,
    exterior,
    nilsson,
    symmetric,
    verify_gl_bracket,
)
from .structure import (
    ClosureBudget,
    NoCertificate,
    Window,
    certify_reducible_fundamental,
    closure_reach,
    find_cyclic_budget,
    iso_criterion,
    verify_derham_intertwines,
)
from .wittaction import (
    FSpaceConfig,
    FVector,
    lattice_box,
    operator_box,
    replay_claim1,
    replay_claim2,
    verify_representation,
)

SCHEMA = "witt-report/1"
COMMANDS = (
    "verify-rep",
    "verify-gl",
    "classify",
    "closure",
    "cyclic",
    "certify-reducible",
    "iso-check",
    "replay-claims",
)
PASS_OUTCOMES = {"pass", "covered", "certificate", "isomorphic", "report"}
DEFAULT_CACHE_DIR = ".wittcache"
CACHE_ENV_VAR = "WITT_CACHE_DIR"


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# low-level field helpers


def _get_int(obj, path, key, *, required=False, default=None, minimum=None):
    if key not in obj or obj[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required integer missing")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def _get_rational(obj, path, key, *, required=False, default=None):
    if key not in obj or obj[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", 'required rational missing (use a "p/q" string)')
        return default
    value = obj[key]
    if isinstance(value, float):
        raise ConfigError(f"{path}.{key}", "floats are not accepted; use a \"p/q\" string")
    try:
        return parse_rational(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{path}.{key}", f"not a rational: {value!r} ({exc})")


def _get_lattice(obj, path, key, d, *, required=False):
    if key not in obj or obj[key] is None:
        if required:
            raise ConfigError(f"{path}.{key}", "required lattice vector missing")
        return None
    value = obj[key]
    if (
        not isinstance(value, (list, tuple))
        or len(value) != d
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in value)
    ):
        raise ConfigError(f"{path}.{key}", f"expected a list of {d} integers, got {value!r}")
    return tuple(value)


def _parse_alpha(obj, path, d):
    if "alpha" not in obj or obj["alpha"] is None:
        raise ConfigError(f"{path}.alpha", "required list of rational strings missing")
    value = obj["alpha"]
    if not isinstance(value, (list, tuple)) or len(value) != d:
        raise ConfigError(f"{path}.alpha", f"expected a list of {d} rationals, got {value!r}")
    return tuple(
        _get_rational({"x": v}, f"{path}.alpha[{i}]", "x", required=True)
        for i, v in enumerate(value)
    )


def _alpha_json(alpha):
    return [format_rational(a) for a in alpha]


# ---------------------------------------------------------------------------
# module and generator (de)serialization


def module_from_config(obj, d: int, path: str = "module"):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    variant = obj.get("variant")
    if variant not in ("exterior", "symmetric", "nilsson", "explicit"):
        raise ConfigError(
            f"{path}.variant",
            f"expected one of exterior|symmetric|nilsson|explicit, got {variant!r}",
        )
    b = _get_rational(obj, path, "b", required=True)
    try:
        if variant == "exterior":
            k = _get_int(obj, path, "k", required=True, minimum=0)
            return exterior(d, k, b)
        if variant == "symmetric":
            m = _get_int(obj, path, "m", required=True, minimum=0)
            return symmetric(d, m, b)
        if variant == "nilsson":
            beta = _get_rational(obj, path, "beta", required=True)
            return nilsson(d, beta, b)
        raw = obj.get("matrices")
        if not isinstance(raw, dict):
            raise ConfigError(
                f"{path}.matrices", 'expected an object keyed "i,j" with matrix values'
            )
        matrices = {}
        for key, mat in raw.items():
            try:
                i, j = (int(p) for p in key.split(","))
            except ValueError:
                raise ConfigError(f"{path}.matrices.{key}", 'keys must look like "1,2"')
            matrices[(i, j)] = mat
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                if (i, j) not in matrices:
                    raise ConfigError(f"{path}.matrices", f'missing matrix for "{i},{j}"')
        return explicit(d, b, matrices)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc))


def module_to_json(spec):
    out = {"variant": spec.variant, "b": format_rational(spec.b)}
    if spec.variant == "exterior":
        out["k"] = spec.k
    elif spec.variant == "symmetric":
        out["m"] = spec.m
    elif spec.variant == "nilsson":
        out["beta"] = format_rational(spec.beta)
    else:
        out["matrices"] = {
            f"{i},{j}": [[format_rational(x) for x in row] for row in spec.matrices[i - 1][j - 1]]
            for i in range(1, spec.d + 1)
            for j in range(1, spec.d + 1)
        }
    return out


def _key_from_json(obj, variant, path):
    if variant == "explicit":
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise ConfigError(path, f"explicit fiber keys are integers, got {obj!r}")
        return obj
    if not isinstance(obj, (list, tuple)) or not all(
        isinstance(c, int) and not isinstance(c, bool) for c in obj
    ):
        raise ConfigError(path, f"expected a list of integers, got {obj!r}")
    return tuple(obj)


def _key_to_json(key):
    return list(key) if isinstance(key, tuple) else key


def generator_from_config(obj, cfg: FSpaceConfig, path: str = "generator"):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    variant = cfg.module.variant
    if "components" not in obj:
        n = _get_lattice(obj, path, "n", cfg.d, required=True)
        key = _key_from_json(obj.get("key"), variant, f"{path}.key")
        return FVector.single(n, SparseVector.unit(key))
    comps = obj["components"]
    if not isinstance(comps, list) or not comps:
        raise ConfigError(f"{path}.components", "expected a non-empty list")
    total = FVector.zero()
    for idx, comp in enumerate(comps):
        cpath = f"{path}.components[{idx}]"
        if not isinstance(comp, dict):
            raise ConfigError(cpath, "expected an object")
        n = _get_lattice(comp, cpath, "n", cfg.d, required=True)
        terms = comp.get("v")
        if not isinstance(terms, list) or not terms:
            raise ConfigError(f"{cpath}.v", "expected a non-empty list of [key, coeff] pairs")
        entries = {}
        for t_idx, term in enumerate(terms):
            tpath = f"{cpath}.v[{t_idx}]"
            if not isinstance(term, list) or len(term) != 2:
                raise ConfigError(tpath, "expected a [key, coeff] pair")
            key = _key_from_json(term[0], variant, f"{tpath}[0]")
            coeff = _get_rational({"c": term[1]}, tpath, "c", required=True)
            entries[key] = entries.get(key, 0) + coeff
        total = total + FVector.single(n, SparseVector(entries))
    if total.is_zero():
        raise ConfigError(path, "generator is zero")
    return total


def generator_to_json(x: FVector):
    return {
        "components": [
            {
                "n": list(n),
                "v": [[_key_to_json(k), format_rational(c)] for k, c in v.sorted_items()],
            }
            for n, v in sorted(x.components.items())
        ]
    }


def _n_str(n) -> str:
    return ",".join(str(c) for c in n)


def _window_from_config(obj, path="window", *, required=True, need_d=False):
    if obj is None:
        if required:
            raise ConfigError(path, "required window object missing")
        return None
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    n = _get_int(obj, path, "N", required=True, minimum=0)
    dd = _get_int(obj, path, "D", minimum=0)
    if need_d and dd is None:
        raise ConfigError(f"{path}.D", "fiber degree bound D required for the nilsson fiber")
    return Window(n, dd)


def _budget_from_config(obj, path="budget"):
    if not isinstance(obj, dict):
        raise ConfigError(path, "required budget object missing")
    r = _get_int(obj, path, "R", required=True, minimum=1)
    t = _get_int(obj, path, "T", required=True, minimum=0)
    return ClosureBudget(r, t)


# ---------------------------------------------------------------------------
# per-command validation -> canonical config


def _space_config(raw, path=""):
    prefix = path or "config"
    d = _get_int(raw, prefix, "d", required=True, minimum=2)
    alpha = _parse_alpha(raw, prefix, d)
    module = module_from_config(raw.get("module"), d, f"{prefix}.module")
    return FSpaceConfig(d, alpha, module)


def _canon_space(cfg: FSpaceConfig):
    return {
        "d": cfg.d,
        "alpha": _alpha_json(cfg.alpha),
        "module": module_to_json(cfg.module),
    }


def canonicalize(command: str, raw: dict) -> dict:
    """Validate a raw config object and return its canonical form."""
    if not isinstance(raw, dict):
        raise ConfigError("config", "expected a JSON object")
    if command == "verify-rep":
        cfg = _space_config(raw)
        radius = _get_int(raw, "config", "radius", default=1, minimum=0)
        degree_radius = _get_int(raw, "config", "degree_radius", default=1, minimum=0)
        vb = _get_int(raw, "config", "v_degree_bound", minimum=0)
        if cfg.module.variant == "nilsson" and vb is None:
            raise ConfigError("config.v_degree_bound", "required for the nilsson fiber")
        out = _canon_space(cfg)
        out.update({"radius": radius, "degree_radius": degree_radius})
        if vb is not None:
            out["v_degree_bound"] = vb
        return out
    if command == "verify-gl":
        d = _get_int(raw, "config", "d", required=True, minimum=2)
        module = module_from_config(raw.get("module"), d, "config.module")
        bound = _get_int(raw, "config", "degree_bound", minimum=0)
        if module.variant == "nilsson" and bound is None:
            raise ConfigError("config.degree_bound", "required for the nilsson fiber")
        out = {"d": d, "module": module_to_json(module)}
        if bound is not None:
            out["degree_bound"] = bound
        return out
    if command == "classify":
        d = _get_int(raw, "config", "d", required=True, minimum=2)
        module = module_from_config(raw.get("module"), d, "config.module")
        trunc = _get_int(raw, "config", "truncation", minimum=0)
        if module.variant == "nilsson" and trunc is None:
            raise ConfigError("config.truncation", "required for the nilsson fiber")
        i = _get_int(raw, "config", "i", minimum=1)
        j = _get_int(raw, "config", "j", minimum=1)
        if (i is None) != (j is None):
            raise ConfigError("config.i", "i and j must be supplied together")
        expect = raw.get("expect")
        if expect not in (None, "nilpotent", "injective"):
            raise ConfigError("config.expect", "expected nilpotent|injective")
        out = {"d": d, "module": module_to_json(module)}
        if trunc is not None:
            out["truncation"] = trunc
        if i is not None:
            out.update({"i": i, "j": j})
        if expect is not None:
            out["expect"] = expect
        return out
    if command == "closure":
        cfg = _space_config(raw)
        generator = generator_from_config(raw.get("generator"), cfg)
        budget = _budget_from_config(raw.get("budget"))
        window = _window_from_config(raw.get("window"), required=False)
        out = _canon_space(cfg)
        out["generator"] = generator_to_json(generator)
        out["budget"] = {"R": budget.R, "T": budget.T}
        if window is not None:
            out["window"] = {"N": window.N} | ({"D": window.D} if window.D is not None else {})
        return out
    if command == "cyclic":
        cfg = _space_config(raw)
        generator = generator_from_config(raw.get("generator"), cfg)
        window = _window_from_config(
            raw.get("window"), need_d=cfg.module.variant == "nilsson"
        )
        budget = _budget_from_config(raw.get("budget"))
        out = _canon_space(cfg)
        out["generator"] = generator_to_json(generator)
        out["window"] = {"N": window.N} | ({"D": window.D} if window.D is not None else {})
        out["budget"] = {"R": budget.R, "T": budget.T}
        return out
    if command == "certify-reducible":
        d = _get_int(raw, "config", "d", required=True, minimum=2)
        k = _get_int(raw, "config", "k", required=True, minimum=1)
        if k > d:
            raise ConfigError("config.k", f"must satisfy 1 <= k <= d = {d}")
        b = _get_rational(raw, "config", "b", required=True)
        alpha = _parse_alpha(raw, "config", d)
        window = _window_from_config(raw.get("window"))
        radius = _get_int(raw, "config", "radius", default=1, minimum=1)
        return {
            "d": d,
            "k": k,
            "b": format_rational(b),
            "alpha": _alpha_json(alpha),
            "window": {"N": window.N},
            "radius": radius,
        }
    if command == "iso-check":
        left = raw.get("left")
        right = raw.get("right")
        if not isinstance(left, dict):
            raise ConfigError("config.left", "expected an object {d, alpha, module}")
        if not isinstance(right, dict):
            raise ConfigError("config.right", "expected an object {d, alpha, module}")
        cfg1 = _space_config(left, "config.left")
        cfg2 = _space_config(right, "config.right")
        if cfg1.d != cfg2.d:
            raise ConfigError("config.right.d", "both sides must share the same d")
        cap = _get_int(raw, "config", "explicit_dim_cap", default=8, minimum=1)
        return {
            "left": _canon_space(cfg1),
            "right": _canon_space(cfg2),
            "explicit_dim_cap": cap,
        }
    if command == "replay-claims":
        cfg = _space_config(raw)
        m_radius = _get_int(raw, "config", "m_radius", default=1, minimum=0)
        vb = _get_int(raw, "config", "v_degree_bound", minimum=0)
        if cfg.module.variant == "nilsson" and vb is None:
            vb = 2
        out = _canon_space(cfg)
        out["m_radius"] = m_radius
        if vb is not None:
            out["v_degree_bound"] = vb
        return out
    raise ConfigError("command", f"unknown command {command!r}")


# ---------------------------------------------------------------------------
# handlers (consume canonical configs)


def _cfg_from_canonical(config):
    d = config["d"]
    alpha = tuple(parse_rational(a) for a in config["alpha"])
    module = module_from_config(config["module"], d)
    return FSpaceConfig(d, alpha, module)


def _operator_json(op):
    return {"u": [format_rational(c) for c in op.u], "r": list(op.r)}


def run_verify_rep(config, threads=1):
    cfg = _cfg_from_canonical(config)
    ops = operator_box(cfg.d, config["radius"])
    degrees = lattice_box(cfg.d, config["degree_radius"])
    hit = verify_representation(
        cfg, ops, degrees, v_degree_bound=config.get("v_degree_bound"), threads=threads
    )
    details = {
        "operators": len(ops),
        "pairs": len(ops) * (len(ops) - 1) // 2,
        "degrees": len(degrees),
        "fiber_basis": len(basis_enumerate(cfg.module, config.get("v_degree_bound"))),
        "counterexample": None
        if hit is None
        else {
            "op_a": _operator_json(hit.op_a),
            "op_b": _operator_json(hit.op_b),
            "n": list(hit.n),
            "key": _key_to_json(hit.key),
        },
    }
    return ("pass" if hit is None else "fail"), details


def run_verify_gl(config, threads=1):
    module = module_from_config(config["module"], config["d"])
    hit = verify_gl_bracket(module, config.get("degree_bound"))
    details = {
        "counterexample": None
        if hit is None
        else {
            "i": hit[0],
            "j": hit[1],
            "k": hit[2],
            "l": hit[3],
            "key": _key_to_json(hit[4]),
        }
    }
    return ("pass" if hit is None else "fail"), details


def _classification_json(result):
    if isinstance(result, Nilpotent):
        return {"kind": "nilpotent", "index": result.index}
    return {"kind": "injective_on_truncation"}


def run_classify(config, threads=1):
    module = module_from_config(config["module"], config["d"])
    if "i" in config:
        pairs = [(config["i"], config["j"])]
    else:
        pairs = [
            (i, j)
            for i in range(1, module.d + 1)
            for j in range(1, module.d + 1)
            if i != j
        ]
    table = {}
    for i, j in pairs:
        result = classify_operator(module, i, j, config.get("truncation"))
        table[f"{i},{j}"] = _classification_json(result)
    details = {"classifications": table}
    expect = config.get("expect")
    if expect is None:
        return "report", details
    wanted = "nilpotent" if expect == "nilpotent" else "injective_on_truncation"
    ok = all(entry["kind"] == wanted for entry in table.values())
    details["expect"] = expect
    return ("pass" if ok else "fail"), details


def run_closure(config, threads=1):
    cfg = _cfg_from_canonical(config)
    generator = generator_from_config(config["generator"], cfg)
    budget = _budget_from_config(config["budget"])
    reach = closure_reach(cfg, [generator], budget)
    window = config.get("window")
    dims = reach.dims()
    if window is not None:
        bound = window["N"]
        dims = {n: r for n, r in dims.items() if max(abs(c) for c in n) <= bound}
    details = {
        "dims": {_n_str(n): r for n, r in dims.items()},
        "weights_reached": len(reach.weights()),
        "budget": dict(config["budget"]),
    }
    return "report", details


def _table_json(table):
    return {
        _n_str(n): {
            "achieved": row["achieved"],
            "required": row["required"],
            "covered": row["covered"],
        }
        for n, row in sorted(table.items())
    }


def run_cyclic(config, threads=1):
    cfg = _cfg_from_canonical(config)
    generator = generator_from_config(config["generator"], cfg)
    window = Window(config["window"]["N"], config["window"].get("D"))
    budget = _budget_from_config(config["budget"])
    report = find_cyclic_budget(cfg, generator, window, budget)
    details = {
        "budget": {"R": budget.R, "T": budget.T},
        "sufficient": list(report.sufficient) if report.sufficient else None,
        "table": _table_json(report.table),
    }
    return ("covered" if report.covered else "not_covered"), details


def run_certify_reducible(config, threads=1):
    alpha = tuple(parse_rational(a) for a in config["alpha"])
    window = Window(config["window"]["N"])
    result = certify_reducible_fundamental(
        config["d"], config["k"], config["b"], alpha, window, config["radius"]
    )
    intertwiner_hit = verify_derham_intertwines(
        config["d"], config["k"], alpha, window, config["radius"]
    )
    if isinstance(result, NoCertificate):
        details = {
            "reason": result.reason,
            "failing_site": None
            if result.failing_site is None
            else {
                "i": result.failing_site[0],
                "r": list(result.failing_site[1]),
                "n": list(result.failing_site[2]),
            },
            "image_ranks": None
            if result.image_ranks is None
            else {_n_str(n): r for n, r in sorted(result.image_ranks.items())},
            "intertwiner_check": "pass" if intertwiner_hit is None else "fail",
        }
        return "no_certificate", details
    details = {
        "full_rank": result.full_rank,
        "image_ranks": {_n_str(n): r for n, r in sorted(result.image_ranks.items())},
        "proper_weights": [_n_str(n) for n in result.proper_weights],
        "invariance_sites_checked": result.invariance_sites_checked,
        "intertwiner_check": "pass" if intertwiner_hit is None else "fail",
    }
    outcome = "certificate" if intertwiner_hit is None else "no_certificate"
    return outcome, details


def run_iso_check(config, threads=1):
    cfg1 = _cfg_from_canonical(config["left"])
    cfg2 = _cfg_from_canonical(config["right"])
    result = iso_criterion(cfg1, cfg2, config["explicit_dim_cap"])
    details = {
        "b_equal": result.b_equal,
        "alpha_shift_integral": result.alpha_shift_integral,
        "fibers_isomorphic": result.fibers_isomorphic,
        "reason": result.reason or None,
    }
    return ("isomorphic" if result.isomorphic else "not_isomorphic"), details


def run_replay_claims(config, threads=1):
    cfg = _cfg_from_canonical(config)
    box = lattice_box(cfg.d, config["m_radius"])
    keys = basis_enumerate(cfg.module, config.get("v_degree_bound"))
    claim1_sites = 0
    claim2_sites = 0
    failing = None
    for s in range(1, cfg.d + 1):
        for t in range(1, cfg.d + 1):
            if s == t:
                continue
            for m in box:
                for key in keys:
                    claim1_sites += 1
                    if not replay_claim1(cfg, s, t, m, SparseVector.unit(key)):
                        failing = {"claim": 1, "s": s, "t": t, "m": list(m), "key": _key_to_json(key)}
                        break
                if failing:
                    break
            if failing:
                break
        if failing:
            break
    if failing is None:
        for i in range(1, cfg.d + 1):
            for j in range(1, cfg.d + 1):
                for m in box:
                    for key in keys:
                        claim2_sites += 1
                        if not replay_claim2(cfg, i, j, m, SparseVector.unit(key)):
                            failing = {
                                "claim": 2,
                                "i": i,
                                "j": j,
                                "m": list(m),
                                "key": _key_to_json(key),
                            }
                            break
                    if failing:
                        break
                if failing:
                    break
            if failing:
                break
    details = {
        "claim1_sites": claim1_sites,
        "claim2_sites": claim2_sites,
        "failing_site": failing,
    }
    return ("pass" if failing is None else "fail"), details


HANDLERS = {
    "verify-rep": run_verify_rep,
    "verify-gl": run_verify_gl,
    "classify": run_classify,
    "closure": run_closure,
    "cyclic": run_cyclic,
    "certify-reducible": run_certify_reducible,
    "iso-check": run_iso_check,
    "replay-claims": run_replay_claims,
}


# ---------------------------------------------------------------------------
# cache


def cache_key(command: str, canonical: dict) -> str:
    payload = json.dumps(
        {"schema": SCHEMA, "tool_version": __version__, "command": command, "config": canonical},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def resolve_cache_dir(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_CACHE_DIR)


# ---------------------------------------------------------------------------
# argument parsing and the entry point


def _add_common_flags(sub):
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--out", help="write the report to this file instead of stdout")
    sub.add_argument("--threads", type=int, default=1, help="cap internal parallelism")
    sub.add_argument("--cache-dir", help=f"report cache directory (default {DEFAULT_CACHE_DIR}, env {CACHE_ENV_VAR})")


_FLAG_FIELDS: dict[str, list[tuple[str, list[str], type]]] = {
    "verify-rep": [
        ("d", ["d"], int),
        ("alpha", ["alpha"], "alpha"),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("radius", ["radius"], int),
        ("degree_radius", ["degree_radius"], int),
        ("v_degree_bound", ["v_degree_bound"], int),
    ],
    "verify-gl": [
        ("d", ["d"], int),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("degree_bound", ["degree_bound"], int),
    ],
    "classify": [
        ("d", ["d"], int),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("truncation", ["truncation"], int),
        ("i", ["i"], int),
        ("j", ["j"], int),
        ("expect", ["expect"], str),
    ],
    "closure": [
        ("d", ["d"], int),
        ("alpha", ["alpha"], "alpha"),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("generator_n", ["generator", "n"], "lattice"),
        ("generator_key", ["generator", "key"], "key"),
        ("R", ["budget", "R"], int),
        ("T", ["budget", "T"], int),
        ("N", ["window", "N"], int),
        ("D", ["window", "D"], int),
    ],
    "cyclic": [
        ("d", ["d"], int),
        ("alpha", ["alpha"], "alpha"),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("generator_n", ["generator", "n"], "lattice"),
        ("generator_key", ["generator", "key"], "key"),
        ("R", ["budget", "R"], int),
        ("T", ["budget", "T"], int),
        ("N", ["window", "N"], int),
        ("D", ["window", "D"], int),
    ],
    "certify-reducible": [
        ("d", ["d"], int),
        ("k", ["k"], int),
        ("b", ["b"], str),
        ("alpha", ["alpha"], "alpha"),
        ("N", ["window", "N"], int),
        ("radius", ["radius"], int),
    ],
    "iso-check": [
        ("explicit_dim_cap", ["explicit_dim_cap"], int),
    ],
    "replay-claims": [
        ("d", ["d"], int),
        ("alpha", ["alpha"], "alpha"),
        ("variant", ["module", "variant"], str),
        ("k", ["module", "k"], int),
        ("m", ["module", "m"], int),
        ("beta", ["module", "beta"], str),
        ("b", ["module", "b"], str),
        ("m_radius", ["m_radius"], int),
        ("v_degree_bound", ["v_degree_bound"], int),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wittmod",
        description="Exact checks and certificates for tensor modules over the Witt algebra",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = subs.add_parser(command)
        _add_common_flags(sub)
        for flag, _, kind in _FLAG_FIELDS[command]:
            name = "--" + flag.replace("_", "-")
            if kind is int:
                sub.add_argument(name, type=int, dest=f"field_{flag}")
            else:
                sub.add_argument(name, dest=f"field_{flag}")
    return parser


def _set_nested(cfg: dict, path: list[str], value):
    node = cfg
    for part in path[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(".".join(path), "flag conflicts with non-object config field")
    node[path[-1]] = value


def _coerce_flag(flag: str, kind, text):
    if kind is int or kind is str:
        return text
    if kind == "alpha":
        return [p.strip() for p in text.split(",")]
    if kind == "lattice":
        try:
            return [int(p) for p in text.split(",")]
        except ValueError:
            raise ConfigError(flag, f"expected comma-separated integers, got {text!r}")
    if kind == "key":
        try:
            parts = [int(p) for p in text.split(",")]
        except ValueError:
            raise ConfigError(flag, f"expected comma-separated integers, got {text!r}")
        return parts
    raise AssertionError(kind)


def gather_raw_config(args) -> dict:
    raw: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError("config", f"file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {args.config}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config", "top level of the config file must be an object")
    for flag, path, kind in _FLAG_FIELDS[args.command]:
        value = getattr(args, f"field_{flag}", None)
        if value is None:
            continue
        _set_nested(raw, path, _coerce_flag(flag, kind, value))
    # the single-basis-vector generator form needs a key and n together
    gen = raw.get("generator")
    if isinstance(gen, dict) and "key" in gen and "components" not in gen:
        module = raw.get("module")
        if isinstance(module, dict) and module.get("variant") == "explicit":
            key = gen["key"]
            if isinstance(key, list) and len(key) == 1:
                gen["key"] = key[0]
    return raw


def render_report(command: str, canonical: dict, outcome: str, details: dict, elapsed: float) -> bytes:
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": canonical,
        "outcome": outcome,
        "details": details,
        "timing_seconds": round(elapsed, 6),
    }
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()


def _emit(payload: bytes, out_path: str | None):
    if out_path:
        Path(out_path).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())


def exit_code_for(outcome: str) -> int:
    return 0 if outcome in PASS_OUTCOMES else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        raw = gather_raw_config(args)
        canonical = canonicalize(args.command, raw)
    except ConfigError as exc:
        print(f"config error at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    cache_dir = resolve_cache_dir(args.cache_dir)
    entry_path = cache_dir / f"{cache_key(args.command, canonical)}.json"
    if entry_path.is_file():
        payload = entry_path.read_bytes()
        try:
            outcome = json.loads(payload)["outcome"]
        except (json.JSONDecodeError, KeyError):
            outcome = None
        if outcome is not None:
            _emit(payload, args.out)
            return exit_code_for(outcome)
    threads = max(1, args.threads)
    started = time.perf_counter()
    try:
        outcome, details = HANDLERS[args.command](canonical, threads=threads)
    except ConfigError as exc:
        print(f"config error at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    payload = render_report(
        args.command, canonical, outcome, details, time.perf_counter() - started
    )
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        entry_path.write_bytes(payload)
    except OSError:
        pass  # cache is an optimization only
    _emit(payload, args.out)
    return exit_code_for(outcome)


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
