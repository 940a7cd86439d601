"""Batch front end: config parsing, experiment dispatch, report files.

Config files are flat ``key = value`` text; flags override file values;
unknown keys are rejected. Every run writes ``<out>/<experiment>.report``
(nested, for regression diffing) and/or ``<out>/<experiment>.rows`` (flat
comma-separated rows, for plotting), with reals at 15 significant digits.
Exit code: 0 all verdicts pass, 2 some verdict failed, 1 usage/config/IO error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .dynamics import ModelConfig, NonlinearitySpec
from .experiments import (
    ExperimentReport,
    degeneracy_experiment,
    entanglement_monitor,
    foliation_sweep,
    integrability_check,
    map_nonlinearity_check,
    signaling_experiment,
)
from .spacetime import Foliation, FoliationError, foliation_from_text, validate_foliation


class ConfigError(ValueError):
    """A config file or flag value that cannot be accepted as-is."""


EXPERIMENTS = ("integrability", "sweep", "signal", "degeneracy", "nonlinearity", "entanglement")

_EXPERIMENT_ALIASES = {
    "integrability": "integrability",
    "integrability_check": "integrability",
    "sweep": "sweep",
    "foliation_sweep": "sweep",
    "signal": "signal",
    "signaling": "signal",
    "signaling_experiment": "signal",
    "degeneracy": "degeneracy",
    "degeneracy_experiment": "degeneracy",
    "nonlinearity": "nonlinearity",
    "map_nonlinearity": "nonlinearity",
    "map_nonlinearity_check": "nonlinearity",
    "entanglement": "entanglement",
    "entanglement_monitor": "entanglement",
    "all": "all",
}

_KINDS = ("none", "local", "coefficient_nonlocal", "operator_nonlocal")
_FORMATS = ("rows", "structured", "both")


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as an integer") from None


def _parse_real(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as a real number") from None


def _parse_choice(key: str, raw: str, choices) -> str:
    if raw not in choices:
        raise ConfigError(f"config key {key!r}: {raw!r} is not one of {'|'.join(choices)}")
    return raw


def _parse_experiment(key: str, raw: str) -> str:
    if raw not in _EXPERIMENT_ALIASES:
        raise ConfigError(
            f"config key {key!r}: {raw!r} is not one of {'|'.join(EXPERIMENTS + ('all',))}"
        )
    return _EXPERIMENT_ALIASES[raw]


@dataclass
class RunConfig:
    """Fully-resolved run parameters; every field has a documented default."""

    experiment: str = "all"
    n_sites: int = 6
    horizon: int = 4
    omega: float = 1.0
    mu: float = 0.7
    link_coupling: float = 0.4
    lam: float = 0.5
    dt: float = 0.15
    kind: str = "local"
    base_operator: str = "x"
    source_site: int = 0
    partner_site: int = -1  # -1: resolve to n_sites - 1
    alice_site: int = 0
    bob_site: int = -1  # -1: resolve to n_sites - 1
    n_foliations: int = 50
    seed: int = 42
    exploration_budget: int = 2000
    out: str = "reports"
    format: str = "both"
    foliation_file: str = ""

    def resolved(self) -> "RunConfig":
        cfg = RunConfig(**{f.name: getattr(self, f.name) for f in fields(self)})
        if cfg.partner_site < 0:
            cfg.partner_site = cfg.n_sites - 1
        if cfg.bob_site < 0:
            cfg.bob_site = cfg.n_sites - 1
        return cfg

    def to_model_config(self) -> ModelConfig:
        cfg = self.resolved()
        nl = NonlinearitySpec(
            kind=cfg.kind,
            lam=cfg.lam,
            source_site=cfg.source_site if cfg.kind == "coefficient_nonlocal" else None,
            partner_site=cfg.partner_site if cfg.kind == "operator_nonlocal" else None,
        )
        try:
            return ModelConfig(
                n_sites=cfg.n_sites,
                horizon=cfg.horizon,
                omega=cfg.omega,
                mu=cfg.mu,
                link_coupling=cfg.link_coupling,
                dt=cfg.dt,
                base_operator=cfg.base_operator,
                nonlinearity=nl,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def echo_lines(self):
        cfg = self.resolved()
        return [
            ("experiment", cfg.experiment),
            ("n_sites", str(cfg.n_sites)),
            ("horizon", str(cfg.horizon)),
            ("omega", f"{cfg.omega:.15g}"),
            ("mu", f"{cfg.mu:.15g}"),
            ("link_coupling", f"{cfg.link_coupling:.15g}"),
            ("lambda", f"{cfg.lam:.15g}"),
            ("dt", f"{cfg.dt:.15g}"),
            ("kind", cfg.kind),
            ("base_operator", cfg.base_operator),
            ("source_site", str(cfg.source_site)),
            ("partner_site", str(cfg.partner_site)),
            ("alice_site", str(cfg.alice_site)),
            ("bob_site", str(cfg.bob_site)),
            ("n_foliations", str(cfg.n_foliations)),
            ("seed", str(cfg.seed)),
            ("exploration_budget", str(cfg.exploration_budget)),
            ("out", cfg.out),
            ("format", cfg.format),
            ("foliation_file", cfg.foliation_file),
        ]


_SETTERS = {
    "experiment": lambda c, k, v: setattr(c, "experiment", _parse_experiment(k, v)),
    "n_sites": lambda c, k, v: setattr(c, "n_sites", _check_range(k, _parse_int(k, v), 2, 14)),
    "horizon": lambda c, k, v: setattr(c, "horizon", _check_range(k, _parse_int(k, v), 1, 64)),
    "omega": lambda c, k, v: setattr(c, "omega", _parse_real(k, v)),
    "mu": lambda c, k, v: setattr(c, "mu", _parse_real(k, v)),
    "link_coupling": lambda c, k, v: setattr(c, "link_coupling", _parse_real(k, v)),
    "lambda": lambda c, k, v: setattr(c, "lam", _parse_real(k, v)),
    "dt": lambda c, k, v: setattr(c, "dt", _check_positive(k, _parse_real(k, v))),
    "kind": lambda c, k, v: setattr(c, "kind", _parse_choice(k, v, _KINDS)),
    "base_operator": lambda c, k, v: setattr(c, "base_operator", _parse_choice(k, v, ("x", "y", "z"))),
    "source_site": lambda c, k, v: setattr(c, "source_site", _check_range(k, _parse_int(k, v), 0, 13)),
    "partner_site": lambda c, k, v: setattr(c, "partner_site", _check_range(k, _parse_int(k, v), -1, 13)),
    "alice_site": lambda c, k, v: setattr(c, "alice_site", _check_range(k, _parse_int(k, v), 0, 13)),
    "bob_site": lambda c, k, v: setattr(c, "bob_site", _check_range(k, _parse_int(k, v), -1, 13)),
    "n_foliations": lambda c, k, v: setattr(c, "n_foliations", _check_range(k, _parse_int(k, v), 0, 100000)),
    "seed": lambda c, k, v: setattr(c, "seed", _parse_int(k, v)),
    "exploration_budget": lambda c, k, v: setattr(c, "exploration_budget", _check_range(k, _parse_int(k, v), 1, 10**9)),
    "out": lambda c, k, v: setattr(c, "out", v),
    "format": lambda c, k, v: setattr(c, "format", _parse_choice(k, v, _FORMATS)),
    "foliation_file": lambda c, k, v: setattr(c, "foliation_file", v),
}


def _check_range(key: str, value: int, lo: int, hi: int) -> int:
    if not lo <= value <= hi:
        raise ConfigError(f"config key {key!r}: {value} out of range [{lo}, {hi}]")
    return value


def _check_positive(key: str, value: float) -> float:
    if value <= 0:
        raise ConfigError(f"config key {key!r}: {value} must be > 0")
    return value


def _strip_quotes(raw: str) -> str:
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    return raw


def parse_kv_lines(text: str) -> dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = _strip_quotes(value)
    return out


def parse_config(path: str | None = None, overrides: dict[str, str] | None = None) -> RunConfig:
    """Resolve defaults, then the file, then flag overrides; fail-closed."""
    cfg = RunConfig()
    items: list[tuple[str, str]] = []
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
        items.extend(parse_kv_lines(text).items())
    if overrides:
        items.extend(overrides.items())
    for key, value in items:
        setter = _SETTERS.get(key)
        if setter is None:
            raise ConfigError(
                f"unknown config key {key!r}; valid keys: {', '.join(sorted(_SETTERS))}"
            )
        setter(cfg, key, value)
    return cfg.resolved()


# -- report rendering -----------------------------------------------------------


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.15g}"
    return str(value)


def render_rows(report: ExperimentReport) -> str:
    lines = [",".join(report.detail_header)]
    for row in report.details:
        lines.append(",".join(_fmt_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_structured(report: ExperimentReport) -> str:
    lines = [f"experiment: {report.name}", f"version: tslattice {__version__} (kernels: {BACKEND})"]
    lines.append("config:")
    lines.extend(f"  {k} = {v}" for k, v in report.config)
    lines.append("metrics:")
    lines.extend(f"  {k} = {v:.15g}" for k, v in report.metrics)
    lines.append("thresholds:")
    lines.extend(f"  {k} {op} {bound:.15g}" for k, op, bound in report.thresholds)
    lines.append(f"verdict: {report.verdict}")
    if report.foliation_text is not None:
        lines.append("foliation:")
        lines.extend(f"  {ln}" for ln in report.foliation_text.splitlines())
    lines.append("details:")
    lines.append("  " + ",".join(report.detail_header))
    lines.extend("  " + ",".join(_fmt_cell(v) for v in row) for row in report.details)
    return "\n".join(lines) + "\n"


def write_report(report: ExperimentReport, out_dir: Path, fmt: str) -> list[Path]:
    written = []
    if fmt in ("structured", "both"):
        p = out_dir / f"{report.name}.report"
        p.write_text(render_structured(report))
        written.append(p)
    if fmt in ("rows", "both"):
        p = out_dir / f"{report.name}.rows"
        p.write_text(render_rows(report))
        written.append(p)
    return written


# -- dispatch -------------------------------------------------------------------


def _load_replay(cfg: RunConfig) -> Foliation | None:
    if not cfg.foliation_file:
        return None
    try:
        text = Path(cfg.foliation_file).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read foliation file {cfg.foliation_file!r}: {exc}") from None
    fol = foliation_from_text(text)
    try:
        validate_foliation(fol, cfg.n_sites, cfg.horizon)
    except FoliationError as exc:
        raise ConfigError(f"foliation file {cfg.foliation_file!r}: {exc}") from None
    return fol


def run_experiment(name: str, cfg: RunConfig) -> ExperimentReport:
    model = cfg.to_model_config()
    replayed = _load_replay(cfg)
    if name == "integrability":
        return integrability_check(model, exploration_budget=cfg.exploration_budget)
    if name == "sweep":
        return foliation_sweep(
            model, n_foliations=cfg.n_foliations, seed=cfg.seed, extra_foliation=replayed
        )
    if name == "signal":
        return signaling_experiment(
            model, alice_site=cfg.alice_site, bob_site=cfg.bob_site, foliation=replayed
        )
    if name == "degeneracy":
        return degeneracy_experiment(model, foliation=replayed)
    if name == "nonlinearity":
        return map_nonlinearity_check(model, foliation=replayed)
    if name == "entanglement":
        return entanglement_monitor(model)
    raise ConfigError(f"unknown experiment {name!r}")


def run(cfg: RunConfig) -> int:
    """Run the selected experiments and write report files."""
    selected = list(EXPERIMENTS) if cfg.experiment == "all" else [cfg.experiment]
    try:
        out_dir = Path(cfg.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: cannot write to output directory {cfg.out!r}: {exc}", file=sys.stderr)
        return 1
    all_pass = True
    try:
        for name in selected:
            try:
                report = run_experiment(name, cfg)
            except ValueError as exc:
                print(f"error: {name}: {exc}", file=sys.stderr)
                return 1
            for path in write_report(report, out_dir, cfg.format):
                print(f"wrote {path}")
            print(f"{name}: verdict {report.verdict}")
            all_pass = all_pass and report.verdict == "pass"
    except OSError as exc:
        print(f"error: writing reports failed: {exc}", file=sys.stderr)
        return 1
    return 0 if all_pass else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tslattice",
        description="Foliation experiments for nonlinear hypersurface dynamics on a qubit chain.",
    )
    parser.add_argument(
        "experiment",
        nargs="?",
        choices=sorted(set(_EXPERIMENT_ALIASES)),
        help="experiment to run (default: the config file's selector, or 'all')",
    )
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="override the RNG seed")
    parser.add_argument("--out", help="output directory for report files")
    parser.add_argument("--format", choices=_FORMATS, help="report file format(s) to write")
    parser.add_argument("--foliation-file", help="replay a serialized foliation")
    args = parser.parse_args(argv)

    overrides: dict[str, str] = {}
    if args.experiment is not None:
        overrides["experiment"] = args.experiment
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.out is not None:
        overrides["out"] = args.out
    if args.format is not None:
        overrides["format"] = args.format
    if args.foliation_file is not None:
        overrides["foliation_file"] = args.foliation_file
    try:
        cfg = parse_config(args.config, overrides)
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
