"""Command-line front end.

Subcommands: ``measure`` (single measure evaluation), ``monogamy``
(residual reports for one state or a random batch), ``fig1`` (W-state
negativity-residual curve data plus zero crossings) and ``audit``
(batch invariant suites over random states).

Exit codes: 0 success, 2 parse/validation failure, 3 unsupported
measure route, 4 invariant or theorem-regime violation.

Every flag can also be supplied through a JSON config file
(``--config``); explicit flags win.  Relative output paths resolve
against ``ENTMONO_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .convexroof import RoofConfig, roof_certificate_gap
from .exceptions import NumericalIntegrityError, UnsupportedRouteError
from .measures import (
    concurrence_pure,
    concurrence_two_qubit,
    cren,
    eof_pure,
    eof_two_qubit,
    negativity,
)
from .monogamy import (
    REPORT_CSV_HEADER,
    alpha_residual,
    hierarchical_residual,
    polygamy_check,
    report_to_csv_row,
    report_to_dict,
    tau_concurrence_ghz_closed_form,
    tau_concurrence_w_closed_form,
    tau_negativity_w_closed_form,
    tau_negativity_w_crossing,
)
from .states import (
    Bipartition,
    PureState,
    bell_state,
    ghz_state,
    random_mixed_state,
    random_pure_state,
    w_state,
)
from .stateio import load_state, state_to_json_dict

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_VIOLATION = 4

OUTPUT_DIR_ENV = "ENTMONO_OUTPUT_DIR"


# ---------------------------------------------------------------------------
# shared parsing helpers


def parse_state_spec(spec: str, renormalize: bool = False):
    """Builtin state specs: ghz:N, w:N, bell, file:<path>, random:N:<seed>."""
    spec = spec.strip()
    if spec == "bell":
        return bell_state()
    if spec.startswith("ghz:"):
        return ghz_state(int(spec[4:]))
    if spec.startswith("w:"):
        return w_state(int(spec[2:]))
    if spec.startswith("file:"):
        return load_state(spec[5:], renormalize=renormalize)
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"random spec must look like random:N:<seed>, got {spec!r}")
        n, seed = int(parts[1]), int(parts[2])
        return random_pure_state((2,) * n, seed)
    raise ValueError(f"unrecognized state spec {spec!r}")


def parse_cut_spec(spec: str, n_subsystems: int) -> Bipartition:
    """Cut syntax: digit-per-subsystem ("0|12") or comma lists ("0,1|2")."""
    if "|" not in spec:
        raise ValueError(f"cut spec needs a '|' separator, got {spec!r}")
    left, right = spec.split("|", 1)

    def side(text: str) -> tuple[int, ...]:
        text = text.strip()
        if not text:
            raise ValueError(f"empty side in cut spec {spec!r}")
        if "," in text:
            return tuple(int(tok) for tok in text.split(",") if tok.strip())
        return tuple(int(ch) for ch in text)

    cut = Bipartition(side(left), side(right))
    if cut.n_subsystems != n_subsystems:
        raise ValueError(
            f"cut {spec!r} covers {cut.n_subsystems} subsystems, state has {n_subsystems}"
        )
    return cut


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    return data


def _pick(args_value, config: dict, key: str, default):
    if args_value is not None:
        return args_value
    if key in config:
        return config[key]
    return default


def _roof_config(config: dict) -> RoofConfig | None:
    roof = config.get("roof")
    if roof is None:
        return None
    if not isinstance(roof, dict):
        raise ValueError('config key "roof" must be an object')
    allowed = {"ensemble_size", "restarts", "max_iterations", "tolerance", "seed"}
    unknown = set(roof) - allowed
    if unknown:
        raise ValueError(f"unknown roof config keys: {sorted(unknown)}")
    return RoofConfig(**roof)


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


# ---------------------------------------------------------------------------
# measure


def _measure_dispatch(state, cut: Bipartition, measure_id: str, roof_cfg):
    if measure_id == "negativity":
        return negativity(state, cut)
    if measure_id == "concurrence":
        if isinstance(state, PureState):
            return concurrence_pure(state, cut)
        if state.dims == (2, 2):
            return concurrence_two_qubit(state)
        raise UnsupportedRouteError(
            "mixed-state concurrence has an exact route only for two qubits"
        )
    if measure_id == "eof":
        if isinstance(state, PureState):
            return eof_pure(state, cut)
        if state.dims == (2, 2):
            return eof_two_qubit(state)
        raise UnsupportedRouteError("mixed-state EoF has an exact route only for two qubits")
    if measure_id == "cren":
        return cren(state, cut, roof_cfg)
    raise ValueError(f"unknown measure {measure_id!r}")


def cmd_measure(args) -> int:
    config = _load_config(args.config)
    state_spec = _pick(args.state, config, "state", None)
    if state_spec is None:
        raise ValueError("measure needs --state")
    measure_id = _pick(args.measure, config, "measure", None)
    if measure_id is None:
        raise ValueError("measure needs --measure")
    renormalize = bool(args.renormalize or config.get("renormalize", False))
    state = parse_state_spec(state_spec, renormalize=renormalize)
    cut_spec = _pick(args.cut, config, "cut", None)
    if cut_spec is None:
        if state.n_subsystems < 2:
            raise ValueError("state has a single subsystem; no cut exists")
        cut = Bipartition.of((0,), state.n_subsystems)
    else:
        cut = parse_cut_spec(cut_spec, state.n_subsystems)
    mv = _measure_dispatch(state, cut, measure_id, _roof_config(config))
    print(_fmt(mv.value))
    out = _pick(args.out, config, "out", None)
    if out:
        fmt = _pick(args.format, config, "format", "json")
        payload = {
            "measure": mv.measure_id,
            "cut": [list(cut.side_a), list(cut.side_b)],
            "value": mv.value,
            "exact": mv.exact,
        }
        path = _resolve_out(out)
        if fmt == "json":
            path.write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")
        elif fmt == "csv":
            path.write_text(
                "measure,cut,value,exact\n"
                f"{mv.measure_id},{cut.side_a}|{cut.side_b},{_fmt(mv.value)},{str(mv.exact).lower()}\n",
                encoding="utf-8",
            )
        else:
            raise ValueError(f"format must be csv or json, got {fmt!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# monogamy


def _monogamy_states(args, config) -> list:
    state_spec = _pick(args.state, config, "state", None)
    count = _pick(args.random, config, "random", None)
    if (state_spec is None) == (count is None):
        raise ValueError("monogamy needs exactly one of --state or --random")
    if state_spec is not None:
        renormalize = bool(args.renormalize or config.get("renormalize", False))
        return [parse_state_spec(state_spec, renormalize=renormalize)]
    count = int(count)
    if count < 1:
        raise ValueError("--random needs a positive sample count")
    n = int(_pick(args.n, config, "n", 3))
    seed = int(_pick(args.seed, config, "seed", 0))
    rng = np.random.default_rng(seed)
    return [random_pure_state((2,) * n, rng) for _ in range(count)]


def cmd_monogamy(args) -> int:
    config = _load_config(args.config)
    measure_id = _pick(args.measure, config, "measure", None)
    if measure_id is None:
        raise ValueError("monogamy needs --measure")
    alphas = _pick(args.alpha, config, "alpha", None)
    if alphas is None:
        raise ValueError("monogamy needs --alpha")
    if not isinstance(alphas, list):
        alphas = [alphas]
    alphas = [float(a) for a in alphas]
    k = _pick(args.k, config, "k", None)
    focus = int(_pick(args.focus, config, "focus", 0))
    tolerance = _pick(args.tolerance, config, "tolerance", None)
    roof_cfg = _roof_config(config)

    states = _monogamy_states(args, config)
    reports = []
    for state in states:
        if not isinstance(state, PureState):
            raise ValueError("monogamy residuals need pure states")
        for alpha in alphas:
            if k is not None:
                report = hierarchical_residual(
                    state,
                    measure_id,
                    alpha,
                    int(k),
                    focus=focus,
                    tolerance=tolerance,
                    roof_config=roof_cfg,
                )
            elif alpha <= 0.0:
                report = polygamy_check(state, measure_id, alpha, focus=focus, tolerance=tolerance)
            else:
                report = alpha_residual(state, measure_id, alpha, focus=focus, tolerance=tolerance)
            reports.append(report)

    violations = sum(1 for r in reports if r.verdict == "violation_of_theorem")
    fmt = _pick(args.format, config, "format", "csv")
    if fmt == "csv":
        lines = [REPORT_CSV_HEADER] + [report_to_csv_row(r) for r in reports]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = json.dumps([report_to_dict(r) for r in reports], sort_keys=True) + "\n"
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    out = _pick(args.out, config, "out", None)
    if out:
        _resolve_out(out).write_text(text, encoding="utf-8")
        print(f"{len(reports)} reports, {violations} violations")
    else:
        sys.stdout.write(text)
        print(f"# {len(reports)} reports, {violations} violations")
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------------------
# fig1


def cmd_fig1(args) -> int:
    config = _load_config(args.config)
    start = float(_pick(args.grid_start, config, "grid_start", 0.02))
    stop = float(_pick(args.grid_stop, config, "grid_stop", 1.98))
    step = float(_pick(args.grid_step, config, "grid_step", 0.02))
    if not (0.0 < start <= stop < 2.0) or step <= 0.0:
        raise ValueError("grid must satisfy 0 < start <= stop < 2 with positive step")
    out = _resolve_out(_pick(args.out, config, "out", "fig1.csv"))
    crossings_out = _pick(args.crossings_out, config, "crossings_out", None)
    crossings_path = (
        _resolve_out(crossings_out) if crossings_out else out.with_suffix(out.suffix + ".crossings.json")
    )
    spot_checks = int(_pick(args.spot_checks, config, "spot_checks", 10))
    seed = int(_pick(args.seed, config, "seed", 0))
    ns = (3, 4, 5)

    count = int(round((stop - start) / step)) + 1
    alphas = [start + step * i for i in range(count)]
    rows = [[tau_negativity_w_closed_form(n, a) for n in ns] for a in alphas]

    # built-in self-check: closed form vs direct computation on random rows
    rng = np.random.default_rng(seed)
    picked = rng.choice(count, size=min(spot_checks, count), replace=False)
    worst = 0.0
    for idx in sorted(int(i) for i in picked):
        for j, n in enumerate(ns):
            direct = alpha_residual(w_state(n), "negativity", alphas[idx]).residual
            worst = max(worst, abs(direct - rows[idx][j]))
    if worst > 1e-10:
        print(f"self-check failed: closed form deviates from direct computation by {worst:.3e}",
              file=sys.stderr)
        return EXIT_VIOLATION

    header = "alpha," + ",".join(f"n{n}" for n in ns)
    lines = [header]
    for a, row in zip(alphas, rows):
        lines.append(",".join([_fmt(a)] + [_fmt(v) for v in row]))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    crossings = {f"n{n}": tau_negativity_w_crossing(n) for n in ns}
    crossings_path.write_text(json.dumps(crossings, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out} ({count} rows; self-check max deviation {worst:.3e})")
    print(f"wrote {crossings_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# audit


def _worst_entry(index: int, state, value: float) -> dict:
    return {"sample_index": index, "value": value, "state": state_to_json_dict(state)}


def _suite_lemma1(samples: int, seed: int) -> dict:
    dims_cycle = [(2, 2, 2), (2, 2, 4), (2, 3, 3)]
    rng = np.random.default_rng(seed)
    max_dev = -1.0
    worst = None
    for i in range(samples):
        psi = random_pure_state(dims_cycle[i % len(dims_cycle)], rng)
        cut = Bipartition.of((0,), 3)
        dev = abs(negativity(psi, cut).value - concurrence_pure(psi, cut).value)
        if dev > max_dev:
            max_dev = dev
            worst = _worst_entry(i, psi, dev)
    return {"passed": max_dev <= 1e-10, "max_abs_difference": max_dev, "bound": 1e-10,
            "worst": worst}


def _suite_ordering(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    max_gap = -np.inf
    worst = None
    for i in range(samples):
        rho = random_mixed_state((2, 2), rank=(i % 4) + 1, seed=rng)
        gap = negativity(rho, Bipartition.of((0,), 2)).value - concurrence_two_qubit(rho).value
        if gap > max_gap:
            max_gap = gap
            worst = _worst_entry(i, rho, gap)
    return {"passed": max_gap <= 1e-9, "max_negativity_minus_concurrence": max_gap,
            "bound": 1e-9, "worst": worst}


_REGIME_ALPHAS = {
    "negativity": (2.0, 2.5, 3.0),
    "cren": (2.0, 2.5, 3.0),
    "concurrence": (2.0, 2.5, 3.0),
    "eof": (float(np.sqrt(2.0)), 1.5, 2.0),
}


def _suite_regime(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    min_residual = np.inf
    worst = None
    for i in range(samples):
        n = 3 if i % 2 == 0 else 4
        psi = random_pure_state((2,) * n, rng)
        for measure_id, alphas in _REGIME_ALPHAS.items():
            for alpha in alphas:
                res = alpha_residual(psi, measure_id, alpha).residual
                if res < min_residual:
                    min_residual = res
                    worst = _worst_entry(i, psi, res)
                    worst["measure"] = measure_id
                    worst["alpha"] = alpha
    return {"passed": min_residual >= -1e-9, "min_residual": min_residual, "bound": -1e-9,
            "worst": worst}


def _suite_polygamy(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    max_residual = -np.inf
    worst = None
    kept_total = 0
    for measure_id in ("negativity", "cren", "concurrence", "eof"):
        kept = 0
        attempts = 0
        while kept < samples and attempts < 1000 * samples:
            attempts += 1
            psi = random_pure_state((2, 2, 2), rng)
            report = polygamy_check(psi, measure_id, -1.0)
            if any(t.base <= 0.05 for t in report.rhs_terms):
                continue
            kept += 1
            for alpha in (-0.5, -1.0, -2.0):
                res = polygamy_check(psi, measure_id, alpha).residual
                if res > max_residual:
                    max_residual = res
                    worst = _worst_entry(kept, psi, res)
                    worst["measure"] = measure_id
                    worst["alpha"] = alpha
        kept_total += kept
    return {"passed": max_residual <= 1e-9, "max_residual": max_residual, "bound": 1e-9,
            "states_per_measure": samples, "states_total": kept_total, "worst": worst}


def _suite_closedforms(samples: int, seed: int) -> dict:
    # fixed one-per-(n, alpha) grid; `samples` does not scale this suite
    alphas = np.linspace(0.04, 1.96, 50)
    max_dev = -1.0
    worst_label = ""
    for n in (3, 4, 5, 6):
        psi = w_state(n)
        ghz = ghz_state(n)
        for alpha in alphas:
            dev_c = abs(
                alpha_residual(psi, "concurrence", float(alpha)).residual
                - tau_concurrence_w_closed_form(n, float(alpha))
            )
            dev_n = abs(
                alpha_residual(psi, "negativity", float(alpha)).residual
                - tau_negativity_w_closed_form(n, float(alpha))
            )
            dev_g = abs(
                alpha_residual(ghz, "concurrence", float(alpha)).residual
                - tau_concurrence_ghz_closed_form(n, float(alpha))
            )
            for dev, label in ((dev_c, "w_concurrence"), (dev_n, "w_negativity"),
                               (dev_g, "ghz_concurrence")):
                if dev > max_dev:
                    max_dev = dev
                    worst_label = f"{label} n={n} alpha={float(alpha):.12g}"
    return {"passed": max_dev <= 1e-10, "max_abs_difference": max_dev, "bound": 1e-10,
            "worst": {"case": worst_label, "value": max_dev}}


def _suite_roofgap(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    gaps = []
    worst = None
    for i in range(samples):
        rho = random_mixed_state((2, 2), rank=2 if i % 2 == 0 else 4, seed=rng)
        gap = roof_certificate_gap(rho)
        gaps.append(gap)
        if worst is None or gap > worst["value"]:
            worst = _worst_entry(i, rho, gap)
    gaps_arr = np.array(gaps)
    median = float(np.median(gaps_arr))
    passed = bool(
        np.all(gaps_arr >= -1e-9) and np.all(gaps_arr <= 1e-3) and median <= 1e-4
    )
    return {"passed": passed, "median_gap": median, "max_gap": float(gaps_arr.max()),
            "min_gap": float(gaps_arr.min()), "median_bound": 1e-4, "per_state_bound": 1e-3,
            "worst": worst}


_SUITES = {
    "lemma1": _suite_lemma1,
    "ordering": _suite_ordering,
    "regime": _suite_regime,
    "polygamy": _suite_polygamy,
    "closedforms": _suite_closedforms,
    "roofgap": _suite_roofgap,
}


def cmd_audit(args) -> int:
    config = _load_config(args.config)
    suite = _pick(args.suite, config, "suite", None)
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(_SUITES)}")
    samples = int(_pick(args.samples, config, "samples", 100))
    if samples < 1:
        raise ValueError("samples must be at least 1")
    seed = int(_pick(args.seed, config, "seed", 0))
    result = _SUITES[suite](samples, seed)
    summary = {"suite": suite, "samples": samples, "seed": seed, **result}
    text = json.dumps(summary, sort_keys=True, indent=2) + "\n"
    out = _pick(args.out, config, "out", None)
    if out:
        _resolve_out(out).write_text(text, encoding="utf-8")
        print(f"{suite}: {'pass' if result['passed'] else 'FAIL'}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if result["passed"] else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entmono",
        description="Entanglement measures and power-law monogamy checks on multiqubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file mirroring the flags (flags win)")
        p.add_argument("--out", help="output file path")
        p.add_argument("--seed", type=int, help="random seed")

    p_measure = sub.add_parser("measure", help="evaluate one measure on one state")
    p_measure.add_argument("--state", help="ghz:N | w:N | bell | file:<path> | random:N:<seed>")
    p_measure.add_argument("--measure", choices=["concurrence", "negativity", "cren", "eof"])
    p_measure.add_argument("--cut", help="bipartition, e.g. 0|12 or 0,1|2")
    p_measure.add_argument("--format", choices=["csv", "json"], help="output file format")
    p_measure.add_argument("--renormalize", action="store_true",
                           help="accept slightly non-normalized state files")
    add_common(p_measure)
    p_measure.set_defaults(func=cmd_measure)

    p_mono = sub.add_parser("monogamy", help="residual reports for a state or a random batch")
    p_mono.add_argument("--state", help="builtin state spec (see measure --state)")
    p_mono.add_argument("--random", type=int, help="number of Haar-random pure states")
    p_mono.add_argument("--n", type=int, help="qubit count for --random (default 3)")
    p_mono.add_argument("--measure", choices=["concurrence", "negativity", "cren", "eof"])
    p_mono.add_argument("--alpha", type=float, action="append",
                        help="exponent; repeatable for several values")
    p_mono.add_argument("--k", type=int, help="hierarchical split point (3..N); omit for pairwise")
    p_mono.add_argument("--focus", type=int, help="focus qubit index (default 0)")
    p_mono.add_argument("--tolerance", type=float, help="verdict tolerance (default 1e-9)")
    p_mono.add_argument("--format", choices=["csv", "json"], help="report format (default csv)")
    p_mono.add_argument("--renormalize", action="store_true")
    add_common(p_mono)
    p_mono.set_defaults(func=cmd_monogamy)

    p_fig1 = sub.add_parser("fig1", help="W-state negativity-residual curves and crossings")
    p_fig1.add_argument("--grid-start", type=float, dest="grid_start")
    p_fig1.add_argument("--grid-stop", type=float, dest="grid_stop")
    p_fig1.add_argument("--grid-step", type=float, dest="grid_step")
    p_fig1.add_argument("--crossings-out", dest="crossings_out",
                        help="sidecar JSON path (default <out>.crossings.json)")
    p_fig1.add_argument("--spot-checks", type=int, dest="spot_checks",
                        help="rows to verify against direct computation (default 10)")
    add_common(p_fig1)
    p_fig1.set_defaults(func=cmd_fig1)

    p_audit = sub.add_parser("audit", help="run an invariant suite over random states")
    p_audit.add_argument("--suite", choices=sorted(_SUITES))
    p_audit.add_argument("--samples", type=int, help="number of random states")
    add_common(p_audit)
    p_audit.set_defaults(func=cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UnsupportedRouteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except NumericalIntegrityError as exc:
        print(f"numerical integrity failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
