"""Batch experiment runner.

Loads a strict JSON config describing one equation instance, simulates it,
decomposes the solution, checks the selected theorem case, and writes
machine-readable reports: trace.csv (n, x, z, m-th difference of z),
decomposition.json and verdict.json.  Identical configs produce
byte-identical outputs (compensated sums, fixed evaluation order,
canonical JSON).

Exit codes: 0 all hypotheses and the conclusion certified; 1 config
error; 2 a hypothesis or the conclusion failed; 3 the simulation errored
(causality, divergence or singular recovery).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

from .catalog import CatalogRef, catalog_listing
from .decomp import DecompositionReport, SolutionDecomposition
from .errors import (
    AsymPolyError,
    CausalityError,
    ConfigError,
    DivergenceError,
    SingularRecoveryError,
)
from .hypotheses import HypothesisVerdict, theorem_dispatch
from .neutral_solver import (
    EquationSpec,
    SolutionTrace,
    simulate,
    start_index,
    x_start_index,
)
from .seqcore import OrderVerdict, Seq, Thresholds, delta

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_HYPOTHESIS = 2
EXIT_SIMULATION = 3

_SPEC_KEYS = {"m", "k", "c", "u", "a", "b", "f", "g", "sigma", "s", "q"}
_TOP_KEYS = {"spec", "seeds", "horizon", "case", "mode", "thresholds", "output"}
_THRESHOLD_KEYS = {f.name for f in fields(Thresholds)}


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"missing key(s) {sorted(missing)} in {where}")


def _ref_from_json(obj: Any, where: str) -> CatalogRef:
    if not isinstance(obj, dict):
        raise ConfigError(f"field {where}: expected an object with id/params")
    _require_keys(obj, {"id", "params"}, {"id"}, where)
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"field {where}: params must be an object")
    return CatalogRef(str(obj["id"]), dict(params))


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: equation spec, seeds, horizon, case and thresholds."""

    spec: EquationSpec
    x_seed: tuple[float, ...] | None
    z_seed: tuple[float, ...]
    horizon: int
    case_id: str
    mode: str = "plain"
    thresholds: Thresholds = Thresholds()
    output: str | None = None

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        _require_keys(raw, _TOP_KEYS, {"spec", "seeds", "horizon", "case"}, "config")
        spec_raw = raw["spec"]
        if not isinstance(spec_raw, dict):
            raise ConfigError("field spec: must be an object")
        _require_keys(spec_raw, _SPEC_KEYS, _SPEC_KEYS - {"q"}, "spec")
        q = spec_raw.get("q")
        if q is not None:
            if not isinstance(q, (int, float)) or float(q) != int(q):
                raise ConfigError(f"field q: must be an integer or null, got {q!r}")
            q = int(q)
        for name in ("m", "k"):
            v = spec_raw[name]
            if not isinstance(v, (int, float)) or float(v) != int(v):
                raise ConfigError(f"field {name}: must be an integer, got {v!r}")
        spec = EquationSpec(
            m=int(spec_raw["m"]),
            k=int(spec_raw["k"]),
            c=float(spec_raw["c"]),
            u=_ref_from_json(spec_raw["u"], "u"),
            a=_ref_from_json(spec_raw["a"], "a"),
            b=_ref_from_json(spec_raw["b"], "b"),
            f=_ref_from_json(spec_raw["f"], "f"),
            g=_ref_from_json(spec_raw["g"], "g"),
            sigma=_ref_from_json(spec_raw["sigma"], "sigma"),
            s=float(spec_raw["s"]),
            q=q,
        )
        seeds = raw["seeds"]
        if not isinstance(seeds, dict):
            raise ConfigError("field seeds: must be an object")
        _require_keys(seeds, {"x", "z"}, {"x", "z"}, "seeds")
        x_raw = seeds["x"]
        if x_raw is not None and not isinstance(x_raw, list):
            raise ConfigError("field seeds.x: must be a list or null")
        if not isinstance(seeds["z"], list):
            raise ConfigError("field seeds.z: must be a list")
        horizon = raw["horizon"]
        if not isinstance(horizon, (int, float)) or float(horizon) != int(horizon):
            raise ConfigError(f"field horizon: must be an integer, got {horizon!r}")
        case_id = raw["case"]
        if case_id not in ("a", "b", "c"):
            raise ConfigError(f"field case: must be a, b or c, got {case_id!r}")
        mode = raw.get("mode", "plain")
        if mode not in ("plain", "regular"):
            raise ConfigError(f"field mode: must be plain or regular, got {mode!r}")
        thr_raw = raw.get("thresholds", {})
        if not isinstance(thr_raw, dict):
            raise ConfigError("field thresholds: must be an object")
        _require_keys(thr_raw, _THRESHOLD_KEYS, set(), "thresholds")
        thresholds = Thresholds(**{k: float(v) for k, v in thr_raw.items()})
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("field output: must be a string path")
        return ExperimentConfig(
            spec=spec,
            x_seed=None if x_raw is None else tuple(float(v) for v in x_raw),
            z_seed=tuple(float(v) for v in seeds["z"]),
            horizon=int(horizon),
            case_id=case_id,
            mode=mode,
            thresholds=thresholds,
            output=output,
        )

    def to_json(self) -> str:
        payload = {
            "spec": {
                "m": self.spec.m,
                "k": self.spec.k,
                "c": self.spec.c,
                "u": self.spec.u.as_dict(),
                "a": self.spec.a.as_dict(),
                "b": self.spec.b.as_dict(),
                "f": self.spec.f.as_dict(),
                "g": self.spec.g.as_dict(),
                "sigma": self.spec.sigma.as_dict(),
                "s": self.spec.s,
                "q": self.spec.q,
            },
            "seeds": {
                "x": None if self.x_seed is None else list(self.x_seed),
                "z": list(self.z_seed),
            },
            "horizon": self.horizon,
            "case": self.case_id,
            "mode": self.mode,
            "thresholds": asdict(self.thresholds),
            "output": self.output,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def seed_windows(self) -> tuple[Seq | None, Seq]:
        n0 = start_index(self.spec)
        z_seed = Seq(n0, self.z_seed)
        if self.spec.k == 0:
            if self.x_seed is not None:
                raise ConfigError("field seeds.x: must be null when k = 0")
            return None, z_seed
        if self.x_seed is None:
            raise ConfigError(f"field seeds.x: required when k = {self.spec.k}")
        xs = x_start_index(self.spec) if self.spec.k < 0 else n0
        return Seq(xs, self.x_seed), z_seed


def _verdict_to_dict(v: OrderVerdict) -> dict:
    return {
        "kind": v.kind,
        "exponent": v.exponent,
        "metric": v.metric,
        "trend": v.trend,
        "bound": v.bound,
        "excluded_zero": v.excluded_zero,
    }


def _report_to_dict(r: DecompositionReport) -> dict:
    return {
        "psi": list(r.psi.coeffs),
        "s": r.s,
        "remainder_verdict": _verdict_to_dict(r.remainder_verdict),
        "remainder_window": [r.remainder.start, r.remainder.end],
        "decay_exponent": r.decay_exponent,
        "decay_r2": r.decay_r2,
        "regular_q": r.regular_q,
        "regular_checks": None
        if r.regular_checks is None
        else [_verdict_to_dict(c) for c in r.regular_checks],
        "regular_passed": r.regular_passed,
    }


def _decomposition_to_dict(d: SolutionDecomposition) -> dict:
    return {
        "z": _report_to_dict(d.z_report),
        "x": _report_to_dict(d.x_report),
        "psi_x_transferred": list(d.psi_x_transferred.coeffs),
    }


def _hypothesis_to_dict(v: HypothesisVerdict) -> dict:
    return {
        "case": v.case_id,
        "mode": v.mode,
        "passed": v.passed,
        "failed_check": v.failed_check,
        "checks": [
            {"name": c.name, "passed": c.passed, "metric": c.metric, "detail": c.detail}
            for c in v.checks
        ],
        "conclusion": {
            "passed": v.conclusion.passed,
            "s": v.conclusion.s,
            "remainder_kind": v.conclusion.remainder_kind,
            "metric": v.conclusion.metric,
            "regular_passed": v.conclusion.regular_passed,
        },
    }


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_float(v: float) -> str:
    return f"{v:.17g}"


def _trace_csv(trace: SolutionTrace, m: int) -> str:
    dz = delta(trace.z, m)
    lines = ["n,x,z,delta_m_z"]
    for n in range(trace.z.start, trace.z.end + 1):
        d = _format_float(dz.at(n)) if n <= dz.end else ""
        lines.append(
            f"{n},{_format_float(trace.x.at(n))},{_format_float(trace.z.at(n))},{d}"
        )
    return "\n".join(lines) + "\n"


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(config_path: str, horizon: int | None = None, out_dir: str | None = None) -> int:
    """Execute one experiment config; returns the process exit code."""
    path = Path(config_path)
    try:
        config = ExperimentConfig.from_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    N = config.horizon if horizon is None else horizon
    out = Path(out_dir or config.output or f"{path.stem}_out")
    try:
        x_seed, z_seed = config.seed_windows()
        trace = simulate(config.spec, x_seed, z_seed, N)
    except (CausalityError, DivergenceError, SingularRecoveryError) as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (AsymPolyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        verdict = theorem_dispatch(
            config.spec, trace, config.case_id, config.mode, thresholds=config.thresholds
        )
    except (AsymPolyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "trace.csv", _trace_csv(trace, config.spec.m))
    _atomic_write(
        out / "decomposition.json", _json_text(_decomposition_to_dict(verdict.decomposition))
    )
    _atomic_write(out / "verdict.json", _json_text(_hypothesis_to_dict(verdict)))
    status = "pass" if verdict.passed else f"fail ({verdict.failed_check})"
    print(f"{path.name}: {status}; reports in {out}")
    return EXIT_OK if verdict.passed else EXIT_HYPOTHESIS


def _fixtures_dir() -> Path:
    return Path(__file__).resolve().parent / "fixtures"


def selftest() -> int:
    """Run every shipped fixture, check its exit code, re-run for determinism."""
    fixtures = _fixtures_dir()
    manifest = json.loads((fixtures / "manifest.json").read_text(encoding="utf-8"))
    failures = 0
    with tempfile.TemporaryDirectory(prefix="asympoly-selftest-") as tmp:
        for entry in manifest["fixtures"]:
            name = entry["file"]
            expected = entry["expect_exit"]
            out1 = Path(tmp) / f"{name}.run1"
            out2 = Path(tmp) / f"{name}.run2"
            code1 = run(str(fixtures / name), out_dir=str(out1))
            code2 = run(str(fixtures / name), out_dir=str(out2))
            ok = code1 == expected and code2 == expected
            if ok and code1 in (EXIT_OK, EXIT_HYPOTHESIS):
                for artifact in ("trace.csv", "decomposition.json", "verdict.json"):
                    if (out1 / artifact).read_bytes() != (out2 / artifact).read_bytes():
                        ok = False
                        break
            print(f"selftest {name}: {'PASS' if ok else 'FAIL'} (exit {code1}, expected {expected})")
            if not ok:
                failures += 1
    print(f"selftest: {len(manifest['fixtures']) - failures}/{len(manifest['fixtures'])} fixtures ok")
    return 0 if failures == 0 else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="asympoly",
        description="Simulate neutral difference equations and certify "
        "asymptotically polynomial structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config", help="path to the experiment JSON config")
    p_run.add_argument("--horizon", type=int, default=None, help="override the config horizon")
    p_run.add_argument("--out", default=None, help="override the output directory")
    sub.add_parser("catalog", help="list all catalog identifiers")
    sub.add_parser("selftest", help="run the shipped fixture suite")
    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.horizon, args.out)
    if args.command == "catalog":
        print(catalog_listing(), end="")
        return 0
    return selftest()


if __name__ == "__main__":
    sys.exit(main())
