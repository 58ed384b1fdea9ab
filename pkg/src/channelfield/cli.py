"""Command-line entry point.

Every subcommand reads one :class:`RunConfig` (from ``--config`` and/or
flags; flags win), writes its outputs into ``--out`` and stamps each report
with the config hash, the seed and the format version.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from ._rng import child_seeds, rng_from_seq
from ._validation import InvalidArgumentError, OutOfWindowError, check_alpha, check_epsilon, check_positive
from .chains import DEFAULT_N_MAX, detect_chain
from .flow import Curve, integrate_curve, ratio_stats, resume_curve
from .geometry import Rect
from .markov import exact_block_ratio, g_mass, lambdas_closed, q_tail, r_norm
from .mixing import empirical_mixing, mixing_ensemble, overlap_bound, overlap_mass_exact
from .mollify import SUPPORT, ConstantField, FieldEvaluator, MollifierSpec, v_at
from .pointfield import (
    FORMAT_VERSION,
    IntensityParams,
    expected_count,
    mu_dinv_rect,
    read_configuration,
    sample_configuration,
    write_configuration,
)
from .tessellation import TessellationView

SCHEMA_VERSION = 1
log = logging.getLogger("channelfield")


@dataclass
class RunConfig:
    """All parameters of one invocation; serializes losslessly to JSON."""

    alpha: float = 1.5
    window: list | None = None  # x0, y0, x1, y1
    epsilon: float = 1e-6
    seed: int = 0
    step: float = 1e-2
    t_end: float = 100.0
    n_max: int = DEFAULT_N_MAX
    quadrature_order: int = 32
    replicas: int = 1
    kernel_exponent: int | None = None
    smoke: bool = False
    out: str = "out"
    options: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        check_alpha(self.alpha)
        check_epsilon(self.epsilon)
        check_positive(float(self.step), "step")
        check_positive(float(self.t_end), "t_end")
        for name in ("n_max", "quadrature_order", "replicas"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer")
        if self.kernel_exponent not in (None, 1, 2):
            raise InvalidArgumentError("kernel_exponent must be 1 or 2")
        if self.window is not None:
            w = [float(v) for v in self.window]
            if len(w) != 4 or not (w[2] > w[0] and w[3] > w[1]):
                raise InvalidArgumentError("window must be x0,y0,x1,y1 with x1 > x0 and y1 > y0")
            self.window = w
        if self.schema_version != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported schema_version {self.schema_version}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def hash(self) -> str:
        """Digest of everything that affects results (the output directory does not)."""
        d = asdict(self)
        d.pop("out")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()

    def rect(self, default) -> Rect:
        w = self.window if self.window is not None else default
        return Rect(w[0], w[2], w[1], w[3])

    def stamp(self, command: str) -> dict:
        return {
            "command": command,
            "config_hash": self.hash(),
            "seed": self.seed,
            "format_version": FORMAT_VERSION,
            "schema_version": SCHEMA_VERSION,
            "package_version": __version__,
        }


def _g(v) -> str:
    return format(float(v), ".17g")


def _dump(obj) -> str:
    def default(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(type(o))

    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"


def _outdir(cfg: RunConfig) -> Path:
    d = Path(cfg.out)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {d}: {exc}") from exc
    return d


def _write(path: Path, text: str) -> Path:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _spec(cfg: RunConfig) -> MollifierSpec:
    return MollifierSpec(cfg.quadrature_order, cfg.options.get("quadrature", "composite"))


def _load_or_sample(cfg: RunConfig, default_window):
    path = cfg.options.get("input")
    if path:
        return read_configuration(path)
    return sample_configuration(cfg.rect(default_window), cfg.epsilon, IntensityParams(cfg.alpha), seed=cfg.seed)


# ----------------------------------------------------------------------------
# subcommands


def cmd_sample(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    window = cfg.rect([0.0, 0.0, 10.0, 10.0])
    params = IntensityParams(cfg.alpha)
    counts = []
    first = None
    for k, seq in enumerate(child_seeds(cfg.seed, cfg.replicas)):
        c = sample_configuration(window, cfg.epsilon, params, seed=cfg.seed, rng=rng_from_seq(seq))
        counts.append(len(c))
        if first is None:
            first = c
    write_configuration(first, out / "configuration.jsonl")
    counts = np.array(counts, dtype=float)
    se = float(counts.std(ddof=1) / math.sqrt(len(counts))) if len(counts) > 1 else None
    analytic = expected_count(window, first.pad, params)
    summary = {
        **cfg.stamp("sample"),
        "window": list(window.bounds),
        "count": int(len(first)),
        "replicas": cfg.replicas,
        "mean_count": float(counts.mean()),
        "se": se,
        "expected_count": analytic,
        "mu_dinv": mu_dinv_rect(window, params),
        "within_3se": None if se is None else bool(abs(counts.mean() - analytic) <= 3 * se),
        "pad": first.pad,
    }
    _write(out / "summary.json", _dump(summary))
    print(f"wrote {out / 'configuration.jsonl'} ({len(first)} points)")
    return 0


def cmd_field(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    config = _load_or_sample(cfg, [0.0, 0.0, 10.0, 10.0])
    view = TessellationView(config)
    W = config.window
    n = int(cfg.options.get("grid", 21))
    m = 2.0 * SUPPORT
    xs = np.linspace(W.x0 + m, W.x1, n)
    ys = np.linspace(W.y0 + m, W.y1, n)
    spec = _spec(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "x2", "v1", "v2", "sigma"])
    sig = np.asarray(config.sigma)
    for y in ys:
        for x in xs:
            v = v_at((x, y), view, spec)
            i = view.phi_index(x, y)
            w.writerow([_g(x), _g(y), _g(v[0]), _g(v[1]), int(sig[i]) if i >= 0 else 0])
    _write(out / "field.csv", buf.getvalue())
    _write(out / "field.json", _dump({**cfg.stamp("field"), "grid": n, "window": list(W.bounds)}))
    print(f"wrote {out / 'field.csv'}")
    return 0


def cmd_integrate(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    start = tuple(float(v) for v in cfg.options.get("start", (0.0, 0.0)))
    pad = 2.0
    if cfg.options.get("empty_field"):
        field_ = ConstantField(0.5)
    else:
        default = [start[0] - pad, start[1] - pad, start[0] + cfg.t_end + pad, start[1] + cfg.t_end + pad]
        config = _load_or_sample(cfg, default)
        W = config.window
        if not (W.x0 + SUPPORT <= start[0] <= W.x1 and W.y0 + SUPPORT <= start[1] <= W.y1):
            raise OutOfWindowError(
                f"start {start} is outside the safe region; the window needs at least {SUPPORT:.6g} "
                f"of padding below and left of the start and {cfg.t_end:g} above and right for t_end"
            )
        field_ = FieldEvaluator(TessellationView(config), _spec(cfg))
    resume = cfg.options.get("resume")
    if resume:
        prev = Curve.read_csv(resume, cfg.step)
        if tuple(prev.positions[0]) != start and "start" in cfg.options:
            log.warning("resuming from %s; --start is ignored", resume)
        curve = resume_curve(prev, cfg.t_end, field_)
    else:
        curve = integrate_curve(start, cfg.t_end, cfg.step, field_)
    curve.write_csv(out / "curve.csv")
    rs = ratio_stats(curve, origin=curve.start)
    report = {
        **cfg.stamp("integrate"),
        "start": list(curve.start),
        "t_end": float(curve.times[-1]),
        "step": cfg.step,
        "truncated": curve.truncated,
        "conservation_error": curve.conservation_error(),
        "ratio_stats": rs.to_dict(),
    }
    _write(out / "ratio_stats.json", _dump(report))
    print(f"wrote {out / 'curve.csv'}; conservation error {report['conservation_error']:.3g}"
          + (" (truncated at window edge)" if curve.truncated else ""))
    return 0


def cmd_chain(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    y = tuple(float(v) for v in cfg.options.get("y", (0.0, 0.0)))
    default = [y[0] - 2.0, y[1] - 3.0, y[0] + 60.0, y[1] + 60.0]
    config = _load_or_sample(cfg, default)
    view = TessellationView(config)
    rec = detect_chain(y, view, cfg.n_max)
    payload = {**cfg.stamp("chain"), "record": rec.to_dict()}
    _write(out / "chain.json", _dump(payload))
    print(f"terminal level {rec.terminal_level}" + (" (truncated)" if rec.truncated else ""))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import Sizes, run_all

    out = _outdir(cfg)
    sizes = Sizes.smoke_sizes() if cfg.smoke else Sizes()
    only = cfg.options.get("only")
    rep = run_all(
        sizes,
        seed=cfg.seed,
        alpha=cfg.alpha,
        only=only,
        kernel_exponent=cfg.kernel_exponent,
        meta=cfg.stamp("verify"),
        progress=lambda r: print(f"{r.line()} ({r.seconds:.1f}s)", flush=True),
    )
    _write(out / "verify.json", rep.to_json() + "\n")
    if rep.passed:
        print("all criteria passed")
        return 0
    print("failing criteria: " + ", ".join(rep.failing), file=sys.stderr)
    return 1


def cmd_mixing(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    n = max(cfg.replicas, 100)
    lags = cfg.options.get("lags", [0.0, 5.0, 10.0, 20.0, 40.0])
    ens = mixing_ensemble(n, seed=cfg.seed, alpha=cfg.alpha, max_lag=max(lags), epsilon=cfg.epsilon)
    rep = empirical_mixing(ens, lags=[(L, 0.0) for L in lags], null_seed=cfg.seed)
    rep.meta = cfg.stamp("mixing")
    rep.meta["overlap_exact"] = {str(L): overlap_mass_exact(1.0, L, cfg.alpha) for L in lags if L > 4.0}
    rep.write(out)
    print(f"wrote {out / 'mixing.json'} and {out / 'mixing.csv'}")
    return 0


def cmd_rates(cfg: RunConfig) -> int:
    out = _outdir(cfg)
    grid = cfg.options.get("zetas") or list(np.geomspace(1.0, 1e4, 17))
    z = np.asarray(grid, dtype=float)
    k = cfg.kernel_exponent or 2
    lam = lambdas_closed(z, cfg.alpha)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["zeta", "lambda0", "lambda1", "lambda2", "lambda3", "r_norm", "block_ratio", "q_tail_a2", "g_mass"])
    rn = r_norm(z, cfg.alpha)
    br = exact_block_ratio(z, cfg.alpha)
    q2 = q_tail(z, 2.0, cfg.alpha, k)
    gm = g_mass(z, 1, cfg.alpha)
    for i in range(len(z)):
        w.writerow([_g(z[i])] + [_g(lam[j, i]) for j in range(4)] + [_g(rn[i]), _g(br[i]), _g(q2[i]), _g(gm[i])])
    _write(out / "rates.csv", buf.getvalue())
    bounds = {str(L): overlap_bound(1.0, L, cfg.alpha) for L in (5.0, 10.0, 20.0, 40.0)}
    _write(out / "rates.json", _dump({**cfg.stamp("rates"), "kernel_exponent": k, "overlap_bound_N1": bounds}))
    print(f"wrote {out / 'rates.csv'}")
    return 0


COMMANDS = {
    "sample": cmd_sample,
    "field": cmd_field,
    "integrate": cmd_integrate,
    "chain": cmd_chain,
    "verify": cmd_verify,
    "mixing": cmd_mixing,
    "rates": cmd_rates,
}


# ----------------------------------------------------------------------------
# argument parsing


def _pair(text: str) -> list[float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers")
    return vals


def _window(text: str) -> list[float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("expected x0,y0,x1,y1")
    return vals


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", default=S, help="RunConfig JSON file; flags override its values")
    g.add_argument("--alpha", type=float, default=S)
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--window", type=_window, default=S, metavar="x0,y0,x1,y1")
    g.add_argument("--epsilon", type=float, default=S)
    g.add_argument("--step", type=float, default=S)
    g.add_argument("--t-end", dest="t_end", type=float, default=S)
    g.add_argument("--n-max", dest="n_max", type=int, default=S)
    g.add_argument("--replicas", type=int, default=S)
    g.add_argument("--quadrature-order", dest="quadrature_order", type=int, default=S)
    g.add_argument("--out", default=S, metavar="DIR")
    g.add_argument("--smoke", action="store_true", default=S)
    g.add_argument("--kernel-exponent", dest="kernel_exponent", type=int, choices=(1, 2), default=S)
    g.add_argument("-v", "--verbose", action="store_true", default=False)

    p = argparse.ArgumentParser(prog="channelfield", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="sample a configuration and summarize counts")
    f = sub.add_parser("field", parents=[common], help="evaluate the smoothed field on a grid")
    f.add_argument("--input", default=S, help="configuration JSON-lines file")
    f.add_argument("--grid", type=int, default=S, help="grid points per axis")
    i = sub.add_parser("integrate", parents=[common], help="integrate a curve")
    i.add_argument("--input", default=S)
    i.add_argument("--start", type=_pair, default=S, metavar="x1,x2")
    i.add_argument("--empty-field", dest="empty_field", action="store_true", default=S)
    i.add_argument("--resume", default=S, metavar="CURVE_CSV")
    c = sub.add_parser("chain", parents=[common], help="detect a chain from a start point")
    c.add_argument("--input", default=S)
    c.add_argument("--y", type=_pair, default=S, metavar="y1,y2")
    v = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    v.add_argument("--only", type=_ints, default=S, metavar="1,2,...")
    m = sub.add_parser("mixing", parents=[common], help="empirical mixing report")
    m.add_argument("--lags", type=_floats, default=S, metavar="L1,L2,...")
    r = sub.add_parser("rates", parents=[common], help="rate and kernel tables")
    r.add_argument("--zetas", type=_floats, default=S, metavar="z1,z2,...")
    return p


_OPTION_KEYS = ("input", "grid", "start", "empty_field", "resume", "y", "only", "lags", "zetas")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    args = vars(ns)
    base = {}
    if "config" in args:
        base = json.loads(Path(args["config"]).read_text())
    options = dict(base.get("options", {}))
    for key in _OPTION_KEYS:
        if key in args:
            options[key] = args[key]
    known = {f.name for f in fields(RunConfig)} - {"options"}
    for key in known:
        if key in args:
            base[key] = args[key]
    base["options"] = options
    return RunConfig.from_json(json.dumps(base))


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(ns)
        cfg_path = _outdir(cfg) / "run_config.json"
        _write(cfg_path, cfg.to_json() + "\n")
        t0 = time.perf_counter()
        code = COMMANDS[ns.command](cfg)
        log.info("%s finished in %.2fs", ns.command, time.perf_counter() - t0)
        return code
    except (InvalidArgumentError, OutOfWindowError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
