"""Command-line front end.

Subcommands: spectrum, evolve, entropy-scan, revival, heatmap, absorption,
grover2d.  A config file (flat key=value) may supply any parameter; explicit
flags override it.  All outputs are deterministic: identical configs produce
byte-identical CSV files.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O failure.
The environment variable QWALK_THREADS caps BLAS parallelism (0 = automatic).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .coin import CoinParameters, build_coin, hadamard
from .errors import AqwalkError, IOFailure
from .grover2d import (
    alternating_eigenvectors,
    apply_step_2d,
    cell_distribution,
    delta_state_2d,
    entropy_series_2d,
    localized_eigenvectors,
    orthogonalize_initial,
)
from .output import ExperimentConfig, load_config, write_csv, write_pgm
from .revivals import (
    entropy_series,
    matrix_power_heatmap,
    peak_count,
    refine_entropy_minimum,
    revival_times,
)
from .spectrum import full_spectrum, kernel_basis
from .walk1d import (
    WalkState1D,
    absorption_probability,
    apply_step,
    conditional_distribution,
    delta_state,
    evolve,
)


def parse_fractions(text: str) -> list[tuple[int, int]]:
    """Map fractions of the full revival time tau n^2 onto grid pairs (p, q).

    A token num/den denotes t ~= (num/den) tau n^2, which sits on the
    schedule grid t = tau n^2 p / (8 q) with p/q = 8 num/den in lowest terms.
    """
    pairs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ValueError(f"empty fraction in {text!r}")
        num_text, sep, den_text = token.partition("/")
        num = int(num_text)
        den = int(den_text) if sep else 1
        if num < 1 or den < 1:
            raise ValueError(f"fraction {token!r} must be positive")
        p, q = 8 * num, den
        g = math.gcd(p, q)
        pairs.append((p // g, q // g))
    if not pairs:
        raise ValueError("need at least one fraction")
    return pairs


def _coin_from(config: ExperimentConfig) -> CoinParameters:
    if (config.a is None) != (config.b is None):
        raise ValueError("give both coin amplitudes a and b, or neither")
    if config.a is not None:
        return build_coin(config.a, config.b)
    if config.coin == "hadamard":
        return hadamard()
    raise ValueError(f"unknown coin preset {config.coin!r}")


def _require_n(config: ExperimentConfig, minimum: int = 2) -> int:
    if config.n < minimum:
        raise ValueError(f"n must be >= {minimum}, got {config.n}")
    return config.n


def _initial_state(config: ExperimentConfig, n: int) -> WalkState1D:
    site = config.site if config.site else n // 2
    if config.component not in ("R", "L"):
        raise ValueError(f"component must be R or L, got {config.component!r}")
    return delta_state(n, site, config.component)


def _require_output(config: ExperimentConfig) -> str:
    if not config.output:
        raise ValueError(f"{config.command} needs --output")
    return config.output


def _run_spectrum(config: ExperimentConfig) -> int:
    n = _require_n(config)
    coin = _coin_from(config)
    path = _require_output(config)
    spectrum = full_spectrum(n, coin)
    rows = []
    for pt in spectrum.points:
        rows.append(
            (
                pt.k,
                pt.s,
                pt.theta.real,
                pt.theta.imag,
                pt.lam.real,
                pt.lam.imag,
                abs(pt.lam),
                pt.residual,
            )
        )
    for vec in kernel_basis(n, coin):
        stepped, _, _ = apply_step(WalkState1D(n, vec), coin)
        residual = float(np.linalg.norm(stepped.amplitudes))
        rows.append((0, 0, math.nan, math.nan, 0.0, 0.0, 0.0, residual))
    header = [
        "k",
        "s",
        "theta_re",
        "theta_im",
        "lambda_re",
        "lambda_im",
        "abs_lambda",
        "residual",
    ]
    write_csv(path, header, rows)
    print(f"wrote {len(rows)} eigenpair rows for n={n} to {path}")
    return 0


def _run_evolve(config: ExperimentConfig) -> int:
    n = _require_n(config)
    coin = _coin_from(config)
    path = _require_output(config)
    if config.t_max < 0:
        raise ValueError("t_max must be >= 0")
    if config.stride < 1:
        raise ValueError("stride must be >= 1")
    state = _initial_state(config, n)
    rows = [(0, state.norm_squared(), 0.0, 0.0, 0.0, 0.0)]
    left_total = right_total = 0.0
    for t in range(1, config.t_max + 1):
        state, left_inc, right_inc = apply_step(state, coin)
        left_total += left_inc
        right_total += right_inc
        if t % config.stride == 0:
            rows.append(
                (t, state.norm_squared(), left_inc, right_inc, left_total, right_total)
            )
    header = [
        "t",
        "survival",
        "left_increment",
        "right_increment",
        "left_total",
        "right_total",
    ]
    write_csv(path, header, rows)
    print(f"evolved n={n} for {config.t_max} steps, wrote {path}")
    return 0


def _run_entropy_scan(config: ExperimentConfig) -> int:
    n = _require_n(config)
    coin = _coin_from(config)
    path = _require_output(config)
    series = entropy_series(
        n, coin, _initial_state(config, n), t_max=config.t_max, stride=config.stride
    )
    rows = list(zip(series.times, series.survival, series.entropy))
    write_csv(path, ["t", "survival", "entropy"], rows)
    print(f"entropy scan n={n} to t={config.t_max}, wrote {path}")
    return 0


def _run_revival(config: ExperimentConfig) -> int:
    n = _require_n(config)
    coin = _coin_from(config)
    path = _require_output(config)
    if not config.fractions:
        raise ValueError("revival needs --fractions")
    pairs = parse_fractions(config.fractions)
    schedule = revival_times(n, coin, pairs)
    psi0 = _initial_state(config, n)
    rows = []
    for p, q, t_pred in schedule.entries:
        if config.refine:
            t_min, ent_min = refine_entropy_minimum(n, coin, psi0, t_pred, halfwidth=n)
            state, _ = evolve(psi0, coin, t_min)
            peaks = peak_count(conditional_distribution(state))
            rho = (t_min - t_pred) / n
            rows.append((p, q, t_pred, t_min, rho, ent_min, peaks))
        else:
            rows.append((p, q, t_pred, math.nan, math.nan, math.nan, math.nan))
    header = ["p", "q", "t_predicted", "t_refined", "rho", "entropy_at_min", "peak_count"]
    write_csv(path, header, rows)
    print(f"revival schedule n={n} fractions={config.fractions}, wrote {path}")
    return 0


def _run_heatmap(config: ExperimentConfig) -> int:
    n = _require_n(config)
    coin = _coin_from(config)
    if not (config.output or config.image):
        raise ValueError("heatmap needs --output and/or --image")
    if config.t < 0:
        raise ValueError("t must be >= 0")
    _, site = matrix_power_heatmap(n, coin, config.t, dense_cap=config.dense_cap)
    if config.image:
        write_pgm(site, config.image, log_scale=config.log_scale)
    if config.output:
        header = [f"site{j}" for j in range(1, n + 1)]
        write_csv(config.output, header, site)
    print(f"heat map n={n} t={config.t} done")
    return 0


def _run_absorption(config: ExperimentConfig) -> int:
    coin = _coin_from(config)
    path = _require_output(config)
    if config.max_interior < 1:
        raise ValueError("max_interior must be >= 1")
    rows = [
        (m, absorption_probability(m, coin))
        for m in range(1, config.max_interior + 1)
    ]
    write_csv(path, ["interior_size", "left_absorption"], rows)
    print(f"absorption sequence up to interior size {config.max_interior}, wrote {path}")
    return 0


def _run_grover2d(config: ExperimentConfig) -> int:
    if config.x < 4 or config.y < 4:
        raise ValueError("box sizes x and y must be >= 4")
    path = _require_output(config)
    if config.t_max < 0:
        raise ValueError("t_max must be >= 0")
    x, y = config.x, config.y
    cell = (
        config.cell_i if config.cell_i else (x + 1) // 2,
        config.cell_j if config.cell_j else (y + 1) // 2,
    )
    if config.direction not in ("E", "W", "N", "S"):
        raise ValueError(f"direction must be one of E/W/N/S, got {config.direction!r}")
    psi0 = delta_state_2d(x, y, cell, config.direction)
    if config.orthogonalize:
        vectors = localized_eigenvectors(x, y) + alternating_eigenvectors(x, y)
        psi0 = orthogonalize_initial(psi0, vectors)
    series = entropy_series_2d(x, y, psi0, t_max=config.t_max, stride=config.stride)
    rows = list(zip(series.times, series.survival, series.entropy))
    write_csv(path, ["t", "survival", "entropy"], rows)
    if config.image:
        state = psi0
        for _ in range(config.t_max):
            state, _ = apply_step_2d(state)
        write_pgm(cell_distribution(state), config.image, log_scale=config.log_scale)
    print(f"2D walk {x}x{y} to t={config.t_max}, wrote {path}")
    return 0


_RUNNERS = {
    "spectrum": _run_spectrum,
    "evolve": _run_evolve,
    "entropy-scan": _run_entropy_scan,
    "revival": _run_revival,
    "heatmap": _run_heatmap,
    "absorption": _run_absorption,
    "grover2d": _run_grover2d,
}


def run(config: ExperimentConfig) -> int:
    """Execute one configured command; deterministic outputs."""
    runner = _RUNNERS.get(config.command)
    if runner is None:
        raise ValueError(f"unknown command {config.command!r}")
    return runner(config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Absorbing discrete-time quantum walk laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file; flags override")
        p.add_argument("--coin", help="coin preset name (default hadamard)")
        p.add_argument("--a", type=complex, help="coin amplitude a")
        p.add_argument("--b", type=complex, help="coin amplitude b")
        p.add_argument("--output", help="CSV output path")

    p = sub.add_parser("spectrum", help="full eigensystem of the 1D operator")
    common(p)
    p.add_argument("--n", type=int)

    for name, help_text in (
        ("evolve", "time evolution with absorption accounting"),
        ("entropy-scan", "entropy of the conditional distribution over time"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--n", type=int)
        p.add_argument("--t-max", type=int, dest="t_max")
        p.add_argument("--stride", type=int)
        p.add_argument("--site", type=int, help="initial site, 1-based (default center)")
        p.add_argument("--component", choices=["R", "L"])

    p = sub.add_parser("revival", help="fractional revival schedule")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--fractions", help="comma list of fractions of tau n^2, e.g. 1/8,1/4")
    p.add_argument(
        "--refine",
        action="store_const",
        const=True,
        default=None,
        help="scan entropy around each prediction",
    )
    p.add_argument("--site", type=int)
    p.add_argument("--component", choices=["R", "L"])

    p = sub.add_parser("heatmap", help="squared magnitudes of the t-th operator power")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--dense-cap", type=int, dest="dense_cap")
    p.add_argument("--image", help="PGM output path")
    p.add_argument("--log", dest="log_scale", action="store_const", const=True, default=None)
    p.add_argument("--no-log", dest="log_scale", action="store_const", const=False)

    p = sub.add_parser("absorption", help="left-edge absorption vs interior size")
    common(p)
    p.add_argument("--max-interior", type=int, dest="max_interior")

    p = sub.add_parser("grover2d", help="2D absorbing Grover walk entropy scan")
    common(p)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--t-max", type=int, dest="t_max")
    p.add_argument("--stride", type=int)
    p.add_argument("--cell-i", type=int, dest="cell_i")
    p.add_argument("--cell-j", type=int, dest="cell_j")
    p.add_argument("--direction", choices=["E", "W", "N", "S"])
    p.add_argument(
        "--orthogonalize",
        action="store_const",
        const=True,
        default=None,
        help="remove the localized eigenspace from the initial state",
    )
    p.add_argument("--image", help="PGM of the final cell distribution")
    p.add_argument("--log", dest="log_scale", action="store_const", const=True, default=None)
    p.add_argument("--no-log", dest="log_scale", action="store_const", const=False)
    return parser


def _gather(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if getattr(args, "config", None) else ExperimentConfig()
    config.command = args.command
    for key in vars(config):
        if key == "command":
            continue
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    return config


def _apply_thread_cap() -> None:
    raw = os.environ.get("QWALK_THREADS", "").strip()
    if not raw:
        return
    limit = int(raw)
    if limit < 0:
        raise ValueError("QWALK_THREADS must be >= 0")
    if limit == 0:
        return
    import threadpoolctl

    global _THREAD_LIMITER
    _THREAD_LIMITER = threadpoolctl.threadpool_limits(limits=limit)


_THREAD_LIMITER = None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_thread_cap()
        return run(_gather(args))
    except IOFailure as exc:
        print(f"qwalk: I/O failure: {exc}", file=sys.stderr)
        return 4
    except AqwalkError as exc:
        print(f"qwalk: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"qwalk: invalid arguments: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
