"""Command-line front door.

Subcommands
-----------
eval      multi-route polynomial evaluation with cross-route disagreement audit
density   spectral-density samples plus the normalization audit
ortho     Gram-matrix orthogonality audit
ode-check exact fourth-order (and factored) residual verification
bdp       spectral vs Monte Carlo transient probabilities
report    run the audits and render figures next to the delimited output

All tabular output is UTF-8 CSV (schema comment line first) or JSON, to
stdout or --out FILE.  Exit codes: 0 all audits pass, 2 validation or parse
failure, 3 numerical disagreement.  Identical configuration and seed give
byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import bdp as bdp_mod
from . import jacobi as jac
from . import laguerre as lag
from . import measure as meas
from . import ode4
from .errors import CorecOrthoError
from .recurrence import eval_sequence

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DISAGREEMENT = 3

LAGUERRE_PRESETS = {p.value: p for p in lag.CALPreset}
JACOBI_PRESETS = {p.value: p for p in jac.CAJPreset}


@dataclass
class RunConfig:
    family: str = "laguerre"
    alpha: float | None = None
    beta: float | None = None
    c: float | None = None
    mu: float | None = None
    preset: str | None = None
    n_max: int = 5
    x_grid: list = field(default_factory=list)
    t_grid: list = field(default_factory=list)
    m_states: list = field(default_factory=list)
    n_states: list = field(default_factory=list)
    trials: int = 100000
    seed: int = 12345
    tol: float = 1e-9
    out_format: str = "csv"
    out_path: str | None = None


def _parse_number(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    return float(text)


def _parse_list(text: str):
    return [float(v) for v in text.split(",") if v.strip() != ""]


def _parse_int_list(text: str):
    return [int(v) for v in text.split(",") if v.strip() != ""]


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(header, rows, config: RunConfig):
    if config.out_format == "json":
        payload = {"schema": 1,
                   "rows": [dict(zip(header, row)) for row in rows]}
        text = json.dumps(payload, sort_keys=True, default=_fmt, indent=1) + "\n"
    else:
        lines = ["#schema=1", ",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def resolve_params(config: RunConfig):
    """Build the parameter bundle, applying a preset constraint if given."""
    if config.family == "laguerre":
        if config.preset:
            kind = LAGUERRE_PRESETS[config.preset]
            params, _ = lag.cal_preset(kind, alpha=config.alpha, c=config.c,
                                       mu=config.mu)
            return params
        return lag.CALParams(config.alpha, config.c, config.mu or 0.0)
    if config.preset:
        kind = JACOBI_PRESETS[config.preset]
        params, _ = jac.caj_preset(kind, alpha=config.alpha, beta=config.beta,
                                   c=config.c, mu=config.mu)
        return params
    return jac.CAJParams(config.alpha, config.beta, config.c, config.mu or 0.0)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_eval(config: RunConfig):
    """Rows (n, x, value_recurrence, value_explicit, value_hyp,
    max_disagreement); exit 3 if any disagreement exceeds tol."""
    params = resolve_params(config)
    rows = []
    worst = 0.0
    for x in config.x_grid:
        if config.family == "laguerre":
            seq = eval_sequence(lag.cal_recurrence(params), config.n_max, x)
            routes = [(n, seq[n], lag.cal_explicit(params, n, x),
                       lag.cal_hyp(params, n, x)) for n in range(config.n_max + 1)]
        else:
            seq = eval_sequence(jac.caj_recurrence(params), config.n_max, x)
            routes = [(n, seq[n], jac.caj_explicit(params, n, x),
                       jac.caj_hyp(params, n, x)) for n in range(config.n_max + 1)]
        # disagreement is relative to the sequence magnitude at x, so a zero
        # crossing of one member does not inflate the quotient
        seq_scale = max(max(abs(v) for v in seq), 1e-30)
        for n, v_rec, v_exp, v_hyp in routes:
            scale = max(abs(v_rec), abs(v_exp), abs(v_hyp), seq_scale)
            dis = max(abs(v_rec - v_exp), abs(v_rec - v_hyp)) / scale
            worst = max(worst, dis)
            rows.append((n, x, v_rec, v_exp, v_hyp, dis))
    header = ("n", "x", "value_recurrence", "value_explicit", "value_hyp",
              "max_disagreement")
    write_rows(header, rows, config)
    return EXIT_OK if worst <= config.tol else EXIT_DISAGREEMENT


def cmd_density(config: RunConfig):
    """Density samples plus a trailing normalization audit row."""
    params = resolve_params(config)
    if config.family == "laguerre":
        density = lambda x: lag.cal_density(params, x)  # noqa: E731
        a, c = float(params.alpha), float(params.c)
        dom = meas.QuadratureDomain.half_line(a, a + 2 * c)
    else:
        density = lambda x: jac.caj_density(params, x)  # noqa: E731
        dom = jac.density_domain(params)
    rows = [("sample", x, density(x)) for x in config.x_grid]
    mass = meas.integrate(density, dom, tol=min(config.tol, 1e-6))
    rows.append(("normalization", "", mass))
    write_rows(("kind", "x", "value"), rows, config)
    ok = abs(mass - 1.0) <= max(config.tol, 1e-6)
    return EXIT_OK if ok else EXIT_DISAGREEMENT


def cmd_ortho(config: RunConfig):
    """Gram-matrix audit: off-diagonals below tol, Laguerre diagonal against
    the closed-form norms."""
    params = resolve_params(config)
    nsize = config.n_max + 1
    if config.family == "laguerre":
        rec = lag.cal_recurrence(params)
        density = lambda x: lag.cal_density(params, x)  # noqa: E731
        a, c = float(params.alpha), float(params.c)
        dom = meas.QuadratureDomain.half_line(a, a + 2 * c)
        norms = [float(lag.cal_norm(params, n)) for n in range(nsize)]
    else:
        rec = jac.caj_recurrence(params)
        density = lambda x: jac.caj_density(params, x)  # noqa: E731
        dom = jac.density_domain(params)
        norms = [jac.caj_norm(params, n) for n in range(nsize)]

    def evaluator(n, x):
        return eval_sequence(rec, n, x)[n]

    gram = meas.gram_matrix(evaluator, density, dom, nsize,
                            tol=min(config.tol, 1e-7))
    tol = max(config.tol, 1e-6)
    ok = True
    rows = []
    for i in range(nsize):
        for j in range(nsize):
            entry = float(gram[i, j])
            if i == j:
                passed = abs(entry - norms[i]) <= tol * max(1.0, abs(norms[i]))
            else:
                passed = abs(entry) <= tol
            ok = ok and passed
            rows.append((i, j, entry, norms[i] if i == j else 0.0, passed))
    write_rows(("i", "j", "integral", "expected", "pass"), rows, config)
    return EXIT_OK if ok else EXIT_DISAGREEMENT


def _ode_param_grid(family: str, params: dict):
    needed = ode4.load_tables()["families"][family]["parameters"] \
        if family in ode4.FAMILIES else \
        ode4.load_tables()["factored"][family]["parameters"]
    missing = [k for k in needed if params.get(k) is None]
    if missing:
        raise CorecOrthoError(f"{family} needs parameters {missing}")
    return {k: params[k] for k in needed}


def cmd_ode_check(config: RunConfig, families: list, params: dict,
                  tables_path: str | None = None):
    """One row per (family, n) with the exact residual-zero verdict."""
    from concurrent.futures import ThreadPoolExecutor

    jobs = []
    for family in families:
        sub = _ode_param_grid(family, params)
        for n in range(config.n_max + 1):
            jobs.append((family, sub, n))

    def run(job):
        family, sub, n = job
        if family in ode4.FAMILIES:
            ok = ode4.residual_is_zero(family, sub, n, tables_path=tables_path)
        else:
            fode = ode4.build_factored(family, sub, n, tables_path=tables_path)
            member = ode4.factored_member(family, sub, n)
            ok = ode4.apply_factored(fode, member).is_zero()
        return (family, n, ok)

    max_workers = int(os.environ.get("COREC_ORTHO_THREADS", "0")) or None
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    write_rows(("family", "n", "residual_is_zero"), rows, config)
    return EXIT_OK if all(r[2] for r in rows) else EXIT_DISAGREEMENT


def cmd_bdp(config: RunConfig):
    """Rows (m, n, t, p_spectral, p_mc, stderr, agree) plus cemetery deficit
    rows for absorbing processes; exit 3 when spectral and simulated values
    disagree beyond four standard errors."""
    params = resolve_params(config)
    rates = bdp_mod.make_rates(config.family, params)
    simulate = rates.kill0 >= 0
    rows = []
    ok = True
    for t in config.t_grid:
        for m in config.m_states:
            if simulate:
                dist, cemetery = bdp_mod.mc_distribution(
                    rates, m, t, config.trials, config.seed)
            for n in config.n_states:
                km = bdp_mod.km_transition(rates, m, n, t).probability
                if simulate:
                    p_mc = float(dist[n])
                    stderr = (max(p_mc * (1 - p_mc), 1e-12) / config.trials) ** 0.5
                    agree = abs(km - p_mc) <= 4 * stderr + 1e-9
                    ok = ok and agree
                    rows.append((m, n, t, km, p_mc, stderr, agree))
                else:
                    rows.append((m, n, t, km, "", "", True))
            if simulate and rates.kill0 > 0:
                rows.append((m, "cemetery", t, "", cemetery, "", True))
    write_rows(("m", "n", "t", "p_spectral", "p_mc", "stderr", "agree"), rows,
               config)
    return EXIT_OK if ok else EXIT_DISAGREEMENT


def cmd_report(config: RunConfig, outdir: str):
    """Run the eval/density/bdp audits, writing CSV plus rendered figures."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    os.makedirs(outdir, exist_ok=True)
    params = resolve_params(config)
    status = EXIT_OK

    # polynomial table + route disagreement figure
    cfg = RunConfig(**{**config.__dict__,
                       "out_path": os.path.join(outdir, "eval.csv"),
                       "out_format": "csv"})
    status = max(status, cmd_eval(cfg))
    xs = np.linspace(min(config.x_grid), max(config.x_grid), 200)
    fig, ax = plt.subplots(figsize=(6, 4))
    if config.family == "laguerre":
        rec = lag.cal_recurrence(params)
    else:
        rec = jac.caj_recurrence(params)
    for n in range(min(config.n_max, 5) + 1):
        ax.plot(xs, [eval_sequence(rec, n, x)[n] for x in xs], label=f"n={n}")
    ax.set_xlabel("x")
    ax.set_ylabel("polynomial value")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "polynomials.png"), dpi=120)
    plt.close(fig)

    # density curve
    cfg = RunConfig(**{**config.__dict__,
                       "out_path": os.path.join(outdir, "density.csv"),
                       "out_format": "csv"})
    status = max(status, cmd_density(cfg))
    if config.family == "laguerre":
        density = lambda x: lag.cal_density(params, x)  # noqa: E731
        grid = np.linspace(0.05, 12.0, 240)
    else:
        density = lambda x: jac.caj_density(params, x)  # noqa: E731
        grid = np.linspace(0.02, 0.98, 240)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid, [density(x) for x in grid])
    ax.set_xlabel("x")
    ax.set_ylabel("spectral density")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "density.png"), dpi=120)
    plt.close(fig)

    # transition probabilities
    if config.t_grid and config.m_states and config.n_states:
        cfg = RunConfig(**{**config.__dict__,
                           "out_path": os.path.join(outdir, "bdp.csv"),
                           "out_format": "csv"})
        status = max(status, cmd_bdp(cfg))
        rates = bdp_mod.make_rates(config.family, params)
        ts = np.linspace(0.0, max(config.t_grid), 25)
        fig, ax = plt.subplots(figsize=(6, 4))
        m = config.m_states[0]
        for n in config.n_states:
            ax.plot(ts, [bdp_mod.km_transition(rates, m, n, t, tol=1e-6).probability
                         for t in ts], label=f"p_{m}{n}(t)")
        ax.set_xlabel("t")
        ax.set_ylabel("transition probability")
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(os.path.join(outdir, "transitions.png"), dpi=120)
        plt.close(fig)
    return status


# --------------------------------------------------------------------------
# argument wiring
# --------------------------------------------------------------------------

def _add_family_args(sub):
    sub.add_argument("--family", choices=("laguerre", "jacobi"), required=True)
    sub.add_argument("--alpha", type=str)
    sub.add_argument("--beta", type=str)
    sub.add_argument("--c", type=str)
    sub.add_argument("--mu", type=str)
    sub.add_argument("--preset", type=str)
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument("--format", dest="out_format", choices=("csv", "json"),
                     default="csv")
    sub.add_argument("--out", dest="out_path", type=str)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="corec-ortho",
        description="co-recursive associated Laguerre/Jacobi toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="multi-route evaluation audit")
    _add_family_args(p_eval)
    p_eval.add_argument("--nmax", type=int, default=5)
    p_eval.add_argument("--x", type=str, required=True,
                        help="comma-separated evaluation points")

    p_dens = subs.add_parser("density", help="density samples + normalization")
    _add_family_args(p_dens)
    p_dens.add_argument("--x", type=str, required=True)

    p_orth = subs.add_parser("ortho", help="Gram matrix audit")
    _add_family_args(p_orth)
    p_orth.add_argument("--nmax", type=int, default=4)

    p_ode = subs.add_parser("ode-check", help="exact differential-operator audit")
    p_ode.add_argument("--family", type=str, default="all",
                       help="comma list of operator families, or 'all'")
    p_ode.add_argument("--alpha", type=str)
    p_ode.add_argument("--beta", type=str)
    p_ode.add_argument("--c", type=str)
    p_ode.add_argument("--mu", type=str)
    p_ode.add_argument("--nmax", type=int, default=6)
    p_ode.add_argument("--tables", type=str, default=None,
                       help="alternate coefficient-table file")
    p_ode.add_argument("--format", dest="out_format", choices=("csv", "json"),
                       default="csv")
    p_ode.add_argument("--out", dest="out_path", type=str)

    p_bdp = subs.add_parser("bdp", help="transient probabilities, two routes")
    _add_family_args(p_bdp)
    p_bdp.add_argument("--m", type=str, default="0,1,2")
    p_bdp.add_argument("--n", type=str, default="0,1,2")
    p_bdp.add_argument("--t", type=str, default="0.1,0.5")
    p_bdp.add_argument("--trials", type=int, default=100000)
    p_bdp.add_argument("--seed", type=int, default=12345)

    p_rep = subs.add_parser("report", help="audits + figures into a directory")
    _add_family_args(p_rep)
    p_rep.add_argument("--nmax", type=int, default=5)
    p_rep.add_argument("--x", type=str, default="0.25,0.5,0.75")
    p_rep.add_argument("--m", type=str, default="0")
    p_rep.add_argument("--n", type=str, default="0,1")
    p_rep.add_argument("--t", type=str, default="0.1,0.5")
    p_rep.add_argument("--trials", type=int, default=20000)
    p_rep.add_argument("--seed", type=int, default=12345)
    p_rep.add_argument("--outdir", type=str, required=True)
    return parser


def _config_from(args) -> RunConfig:
    cfg = RunConfig()
    cfg.family = getattr(args, "family", "laguerre")
    for name in ("alpha", "beta", "c", "mu"):
        raw = getattr(args, name, None)
        if raw is not None:
            setattr(cfg, name, float(_parse_number(raw)))
    cfg.preset = getattr(args, "preset", None)
    cfg.tol = getattr(args, "tol", 1e-9)
    cfg.out_format = getattr(args, "out_format", "csv")
    cfg.out_path = getattr(args, "out_path", None)
    cfg.n_max = getattr(args, "nmax", 5)
    if getattr(args, "x", None):
        cfg.x_grid = _parse_list(args.x)
    if getattr(args, "t", None):
        cfg.t_grid = _parse_list(args.t)
    if getattr(args, "m", None):
        cfg.m_states = _parse_int_list(args.m)
    if getattr(args, "n", None) and not isinstance(getattr(args, "n"), int):
        cfg.n_states = _parse_int_list(args.n)
    cfg.trials = getattr(args, "trials", 100000)
    cfg.seed = getattr(args, "seed", 12345)
    if not cfg.x_grid and not cfg.t_grid and args.command in ("eval", "density"):
        raise CorecOrthoError("empty evaluation grid")
    if cfg.tol <= 0:
        raise CorecOrthoError("tol must be positive")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        if args.command == "eval":
            return cmd_eval(cfg)
        if args.command == "density":
            return cmd_density(cfg)
        if args.command == "ortho":
            return cmd_ortho(cfg)
        if args.command == "ode-check":
            fams = list(ode4.FAMILIES) + list(ode4.FACTORED_KINDS) \
                if args.family == "all" else args.family.split(",")
            params = {}
            for name in ("alpha", "beta", "c", "mu"):
                raw = getattr(args, name, None)
                if raw is not None:
                    params[name] = Fraction(raw)  # accepts "1/3" and "0.25"
            return cmd_ode_check(cfg, fams, params, tables_path=args.tables)
        if args.command == "bdp":
            return cmd_bdp(cfg)
        if args.command == "report":
            return cmd_report(cfg, args.outdir)
        parser.error(f"unknown command {args.command}")
    except (CorecOrthoError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
