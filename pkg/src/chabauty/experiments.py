"""Config-driven experiments: decay tables, figures and the brute/grid oracle sweep."""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from chabauty import figures
from chabauty import subgroups as sg
from chabauty.cloud import PointCloud
from chabauty.hausdorff import hausdorff_brute, hausdorff_grid
from chabauty.limits import Schedule, spec_from_json, spec_to_json, verify_convergence
from chabauty.metric import Space

log = logging.getLogger(__name__)

CONFIG_VERSION = 1
KINDS = ("decay", "figure", "oracle-sweep")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    out: Path
    spec: object = None
    n: list = field(default_factory=list)
    R: float = 10.0
    delta: float = 0.05
    schedule: Schedule = Schedule()
    method: str = "auto"
    seed: int = 0
    figure: dict = field(default_factory=dict)
    pairs: int = 200
    max_size: int = 500


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def parse_config(raw: dict, base_dir: Path | None = None) -> ExperimentConfig:
    _require(isinstance(raw, dict), "config must be a JSON object")
    _require(raw.get("version") == CONFIG_VERSION, f"config 'version' must be {CONFIG_VERSION}")
    kind = raw.get("kind")
    _require(kind in KINDS, f"config 'kind' must be one of {KINDS}, got {kind!r}")

    out = os.environ.get("CHAB_OUT") or raw.get("out") or "chab-out"
    out = Path(out)
    if base_dir is not None and not out.is_absolute() and not os.environ.get("CHAB_OUT"):
        out = base_dir / out
    cfg = ExperimentConfig(kind=kind, out=out, seed=int(raw.get("seed", 0)))

    if kind == "decay":
        _require("spec" in raw, "decay config needs a 'spec'")
        try:
            cfg.spec = spec_from_json(raw["spec"])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad spec: {exc}") from None
        n = raw.get("n")
        _require(isinstance(n, list) and n and all(isinstance(v, int) and v >= 1 for v in n),
                 "decay config needs 'n': a nonempty list of positive integers")
        cfg.n = n
        cfg.R = float(raw.get("R", cfg.R))
        cfg.delta = float(raw.get("delta", cfg.delta))
        _require(cfg.R > 0 and cfg.delta > 0, "'R' and 'delta' must be positive")
        sched = raw.get("schedule", {})
        cfg.schedule = Schedule(float(sched.get("a", 1.0)), float(sched.get("k", 1.0)))
        cfg.method = raw.get("method", "auto")
        _require(cfg.method in ("auto", "brute", "grid"), "'method' must be auto, brute or grid")
    elif kind == "figure":
        fig = raw.get("figure")
        _require(isinstance(fig, dict) and fig.get("kind") in figures.FIGURE_KINDS,
                 f"figure config needs 'figure.kind' in {figures.FIGURE_KINDS}")
        cfg.figure = fig
    else:
        cfg.pairs = int(raw.get("pairs", cfg.pairs))
        cfg.max_size = int(raw.get("max_size", cfg.max_size))
        _require(cfg.pairs >= 1 and cfg.max_size >= 1, "'pairs' and 'max_size' must be >= 1")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(raw, path.parent)


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


# --- figures -----------------------------------------------------------------


def render_figure(fig: dict) -> str:
    kind = fig["kind"]
    if kind == "line-points":
        return figures.line_points_svg(fig.get("r", [1.0, 0.1]), fig.get("R", figures.LINE_POINTS_RADIUS))
    if kind == "d-bouquet":
        return figures.d_bouquet_svg(int(fig.get("m_max", 4)))
    if kind == "pinching":
        return figures.pinching_svg(int(fig.get("p", 1)), int(fig.get("q", 2)), int(fig.get("m", 1)))
    if kind == "layer":
        return figures.layer_svg(int(fig.get("m", 1)), int(fig.get("q_max", 3)))
    if kind == "space":
        return figures.space_svg(int(fig.get("m_max", 3)), int(fig.get("q_max", 3)))
    if kind == "decay-curve":
        return figures.decay_curve_svg(fig["n"], fig["values"], fig.get("floor"), fig.get("title", ""))
    raise ConfigError(f"unknown figure kind {kind!r}")


# --- oracle sweep ------------------------------------------------------------


def random_cloud(space: Space, rng: np.random.Generator, max_size: int, near_infinity: bool = False) -> PointCloud:
    n = int(rng.integers(1, max_size + 1))
    if near_infinity:
        far = 8.0 if space is Space.CYLINDER else 50.0
        x = rng.choice([-1.0, 1.0], n) * rng.uniform(far, 6 * far, n)
    else:
        mode = rng.integers(3)
        if mode == 0:
            x = rng.uniform(-5, 5, n)
        elif mode == 1:
            x = rng.normal(0, 1, n)
        else:
            x = 3 * rng.standard_cauchy(n)
    theta = rng.uniform(0, 2 * math.pi, n)
    return PointCloud(space, x, theta, has_infinity=bool(rng.integers(2)))


def oracle_sweep(pairs: int = 200, seed: int = 0, max_size: int = 500, tol: float = 1e-12) -> dict:
    """Compare grid and brute Hausdorff values on random cloud pairs in both spaces.

    Every fourth pair has both clouds concentrated near infinity.
    """
    rng = np.random.default_rng(seed)
    report = {"pairs": pairs, "seed": seed, "max_size": max_size, "tol": tol, "spaces": {}}
    for space in Space:
        mismatches, worst = 0, 0.0
        for i in range(pairs):
            near = i % 4 == 3
            a = random_cloud(space, rng, max_size, near)
            b = random_cloud(space, rng, max_size, near)
            diff = abs(hausdorff_brute(a, b).value - hausdorff_grid(a, b).value)
            worst = max(worst, diff)
            if diff > tol:
                mismatches += 1
        report["spaces"][space.value] = {"mismatches": mismatches, "max_abs_diff": worst}
    report["mismatches"] = sum(s["mismatches"] for s in report["spaces"].values())
    return report


# --- run ---------------------------------------------------------------------


def _decay_results(cfg: ExperimentConfig, table) -> dict:
    return {
        "version": CONFIG_VERSION,
        "kind": "decay",
        "spec": spec_to_json(cfg.spec),
        "limit": {"subgroup": sg.to_json(table.limit.subgroup), "rule": table.limit.rule},
        "R": cfg.R,
        "delta": cfg.delta,
        "schedule": {"a": cfg.schedule.a, "k": cfg.schedule.k},
        "rows": [
            {
                "n": r.n,
                "subgroup": sg.to_json(r.subgroup),
                "result": r.result.to_json(),
                "cover_n": r.cover_n,
                "cover_limit": r.cover_limit,
            }
            for r in table.rows
        ],
        "decays": table.decays(),
        "status": "ok",
    }


def run(cfg: ExperimentConfig) -> int:
    out = cfg.out
    if cfg.kind == "decay":
        try:
            table = verify_convergence(cfg.spec, cfg.n, cfg.R, cfg.delta, cfg.schedule, cfg.method)
        except (ValueError, FloatingPointError, MemoryError) as exc:
            log.error("decay experiment failed: %s", exc)
            write_atomic(out / "results.json", dump_json({
                "version": CONFIG_VERSION, "kind": "decay", "status": "failed", "error": str(exc),
            }))
            return 3
        write_atomic(out / "results.json", dump_json(_decay_results(cfg, table)))
        write_atomic(out / "data.csv", table.to_csv())
        floor = table.rows[-1].floor if table.rows else None
        write_atomic(out / "figure.svg", figures.decay_curve_svg(
            [r.n for r in table.rows], table.values, floor, title=table.limit.rule))
        return 0

    if cfg.kind == "figure":
        try:
            svg = render_figure(cfg.figure)
        except (ValueError, KeyError, TypeError) as exc:
            log.error("figure failed: %s", exc)
            return 2
        write_atomic(out / "figure.svg", svg)
        write_atomic(out / "results.json", dump_json({
            "version": CONFIG_VERSION, "kind": "figure", "figure": cfg.figure, "status": "ok",
        }))
        return 0

    report = oracle_sweep(cfg.pairs, cfg.seed, cfg.max_size)
    report.update(version=CONFIG_VERSION, kind="oracle-sweep",
                  status="ok" if report["mismatches"] == 0 else "mismatch")
    write_atomic(out / "results.json", dump_json(report))
    lines = ["space,pairs,mismatches,max_abs_diff"]
    for name, s in report["spaces"].items():
        lines.append(f"{name},{cfg.pairs},{s['mismatches']},{s['max_abs_diff']:.17g}")
    write_atomic(out / "data.csv", "\n".join(lines) + "\n")
    return 0 if report["mismatches"] == 0 else 1
