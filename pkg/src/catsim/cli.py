"""``catsim`` command line: every experiment as a reproducible data file.

Exit codes: 0 success, 2 usage / invalid parameter, 3 numerical failure
(truncation, zero state, ...), 4 impossible measurement outcome.

Each run writes its data file(s) plus ``<out>.manifest.json`` recording the
command, the full parameter set, the tool version, the outputs and the wall
clock duration.  The data files are byte-identical for identical flags; the
manifest differs only in its ``duration_s`` field.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analytic
from .errors import (
    CatsimError,
    ImpossibleOutcomeError,
    InvalidArgumentError,
)
from .fock import (
    DEFAULT_TOLERANCE,
    make_cat,
    make_coherent,
    make_fock,
    make_squeezed_vacuum,
    make_vacuum,
)
from .phase_space import quadrature_pdf, wigner
from .protocols import (
    TWO_MODE_CUTOFF,
    ProtocolConfig,
    contour_fig3,
    extract_logical,
    noon_loss_experiment,
    run_cat_protocol,
    run_ecs_protocol,
    sweep_fig2,
)
from .selftest import run_selftest
from .serialize import dumps, load_state, save_json, state_to_dict, write_csv

log = logging.getLogger("catsim")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IMPOSSIBLE = 0, 2, 3, 4


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _range(lo: float, hi: float, steps: int, name: str):
    if steps < 2 or not hi > lo:
        raise InvalidArgumentError(f"malformed {name} range: [{lo}, {hi}] with {steps} steps")
    return lo, hi, steps


def _manifest(args, outputs, started) -> None:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    manifest = {
        "command": args.command,
        "parameters": params,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
        "duration_s": time.perf_counter() - started,
    }
    save_json(Path(str(outputs[0]) + ".manifest.json"), manifest)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_herald(args):
    cfg = ProtocolConfig(xi=args.xi, T=args.transmission, alpha=args.alpha,
                         eta_det=args.eta_det, cutoff=args.cutoff or 60,
                         tolerance=args.tolerance)
    res = run_cat_protocol(cfg)
    state = res.herald.state
    report = {
        "herald_probability": res.herald.probability,
        "fidelity": res.fidelity,
        "alpha_star": res.alpha_star,
        "fidelity_star": res.fidelity_star,
        "xi_T": cfg.xi_T,
        "fidelity_closed_form": analytic.fidelity_closed_form(cfg.alpha, cfg.xi_T),
        "state": state_to_dict(state) if hasattr(state, "amplitudes") else None,
    }
    out = save_json(args.out or "herald.json", report)
    return [out], f"fidelity={res.fidelity:.6f} p={res.herald.probability:.6g}"


def cmd_fig2(args):
    rng = _range(args.xi_min, args.xi_max, args.xi_steps, "xi")
    rows = sweep_fig2(args.alphas, rng, args.cutoff, args.tolerance)
    out = write_csv(args.out or "fig2.csv", "alpha,xi,fidelity",
                    ((r.alpha, r.xi, r.fidelity) for r in rows))
    return [out], f"{len(rows)} rows"


def cmd_fig3(args):
    xr = _range(args.xi_t_min, args.xi_t_max, args.xi_t_steps, "xi_T")
    ar = _range(args.alpha_min, args.alpha_max, args.alpha_steps, "alpha")
    res = contour_fig3(xr, ar, args.validate_every or None, args.tolerance)
    out = write_csv(args.out or "fig3.csv", "xi_T,alpha,fidelity",
                    ((r.xi_T, r.alpha, r.fidelity) for r in res.rows))
    msg = f"{len(res.rows)} points"
    if res.max_validation_error is not None:
        msg += f", simulator check max |dF| = {res.max_validation_error:.3e}"
    return [out], msg


def _ecs_config(args) -> ProtocolConfig:
    return ProtocolConfig(xi=args.xi, T=args.transmission, alpha=args.alpha,
                          cutoff=args.cutoff or TWO_MODE_CUTOFF, tolerance=args.tolerance)


def cmd_ecs(args):
    cfg = _ecs_config(args)
    res = run_ecs_protocol(cfg)
    report = {
        "xi_T": cfg.xi_T,
        "fidelity_vs_qudit_ecs": res.fidelity,
        "herald_probability": res.herald_probability,
        "herald_fidelities": list(res.herald_fidelities),
        "coefficients": {str(n): [c.real, c.imag] for n, c in res.coefficients.items()},
        "tau_exact": {str(n): analytic.tau_exact(n, cfg.xi, cfg.T) for n in res.coefficients},
        "tau_paper": {str(n): analytic.tau_paper(n, cfg.xi, cfg.T) for n in res.coefficients},
        "state": state_to_dict(res.state),
    }
    out = save_json(args.out or "ecs.json", report)
    return [out], f"fidelity={res.fidelity:.6f}"


def cmd_logical(args):
    res = run_ecs_protocol(_ecs_config(args))
    logical = extract_logical(res.state, args.herald_a)
    report = {
        "herald_a": args.herald_a,
        "probability": logical.probability,
        "support": [int(n) for n in np.nonzero(logical.state.amplitudes)[0]],
        "state": state_to_dict(logical.state),
    }
    out = save_json(args.out or "logical.json", report)
    return [out], f"support={report['support']} p={logical.probability:.6g}"


def cmd_noon(args):
    cfg = ProtocolConfig(xi=args.xi, T=args.transmission, alpha=args.alpha,
                         cutoff=TWO_MODE_CUTOFF, tolerance=args.tolerance)
    table = noon_loss_experiment(args.photons, args.eta, args.phases, cfg,
                                 cutoff=args.cutoff or 12)
    out = write_csv(args.out or "noon.csv", "state,theta,eta,trace_distance",
                    ((r.state, r.theta, r.eta, r.trace_distance) for r in table.rows))
    means = ", ".join(f"{k}={v:.4f}" for k, v in table.mean_photons.items())
    return [out], f"metric=trace_distance mean photons: {means}"


def _input_state(args):
    if args.state:
        try:
            state = load_state(args.state)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"cannot read state file {args.state}: {exc}") from exc
        if not hasattr(state, "cutoff"):
            raise InvalidArgumentError("phase-space commands need a single-mode state")
        return state
    raise InvalidArgumentError("--state FILE is required")


def cmd_wigner(args):
    state = _input_state(args)
    grid = np.linspace(-args.range, args.range, args.points)
    W = wigner(state, grid, grid)
    out = write_csv(args.out or "wigner.csv", "x,p,w",
                    ((x, p, W[i, j]) for i, x in enumerate(grid) for j, p in enumerate(grid)))
    i, j = np.unravel_index(int(np.argmin(W)), W.shape)
    step = grid[1] - grid[0]
    summary = {"min": float(W[i, j]), "argmin_x": float(grid[i]), "argmin_p": float(grid[j]),
               "integral": float(np.sum(W) * step * step)}
    return [out], dumps(summary, indent=0).replace("\n", " ")


def cmd_quadrature(args):
    state = _input_state(args)
    xs = np.linspace(-args.range, args.range, args.points)
    pdf = quadrature_pdf(state, args.phi, xs)
    out = write_csv(args.out or "quadrature.csv", "x,pdf", zip(xs, pdf))
    integral = float(np.sum(pdf) * (xs[1] - xs[0]))
    return [out], f"integral={integral:.6f}"


def cmd_state(args):
    c = args.cutoff or 60
    beta = complex(args.re, args.im)
    kind = args.kind
    if kind == "vacuum":
        s = make_vacuum(c)
    elif kind == "fock":
        s = make_fock(args.n, c)
    elif kind == "coherent":
        s = make_coherent(beta, c, args.tolerance)
    elif kind == "squeezed":
        s = make_squeezed_vacuum(args.xi, c, args.tolerance)
    else:
        s = make_cat(beta, "+" if kind == "cat-even" else "-", c, args.tolerance)
    out = save_json(args.out or "state.json", state_to_dict(s))
    return [out], f"{kind} cutoff={c}"


def cmd_selftest(args):
    results = run_selftest()
    report = {
        "passed": all(r.passed for r in results),
        "checks": [{"name": r.name, "max_error": r.max_error, "tolerance": r.tolerance,
                    "passed": r.passed} for r in results],
    }
    out = save_json(args.out or "selftest.json", report)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.max_error:.3e} "
              f"(tol {r.tolerance:.0e})")
    if not report["passed"]:
        raise _SelftestFailed(out)
    return [out], "all checks passed"


class _SelftestFailed(CatsimError):
    pass


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=None,
                        help="Fock cutoff (per mode for two-mode commands)")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                        help="largest acceptable truncated probability")
    common.add_argument("--out", default=None, help="output file")
    common.add_argument("--seed", type=int, default=0,
                        help="accepted for interface stability; nothing is random")

    parser = argparse.ArgumentParser(prog="catsim", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"catsim {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("herald", parents=[common], help="heralded odd cat from squeezed vacuum")
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--transmission", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.2)
    p.add_argument("--eta-det", type=float, default=1.0)
    p.set_defaults(func=cmd_herald)

    p = sub.add_parser("fig2", parents=[common], help="fidelity vs squeezing, ideal subtraction")
    p.add_argument("--alphas", type=_float_list, default=[1.2, 1.4, 1.6])
    p.add_argument("--xi-min", type=float, default=0.01)
    p.add_argument("--xi-max", type=float, default=1.2)
    p.add_argument("--xi-steps", type=int, default=200)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", parents=[common], help="closed-form fidelity over (xi_T, alpha)")
    p.add_argument("--xi-t-min", type=float, default=0.0)
    p.add_argument("--xi-t-max", type=float, default=0.9)
    p.add_argument("--xi-t-steps", type=int, default=181)
    p.add_argument("--alpha-min", type=float, default=0.1)
    p.add_argument("--alpha-max", type=float, default=3.0)
    p.add_argument("--alpha-steps", type=int, default=146)
    p.add_argument("--validate-every", type=int, default=0,
                   help="recompute every k-th lattice point with the simulator")
    p.set_defaults(func=cmd_fig3)

    for name, func, helptext in (("ecs", cmd_ecs, "two-cat entangled coherent state"),
                                 ("logical", cmd_logical, "logical codeword from the ECS")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--xi", type=float, required=True)
        p.add_argument("--transmission", type=float, required=True)
        p.add_argument("--alpha", type=float, default=1.2)
        if name == "logical":
            p.add_argument("--herald-a", type=int, choices=(2, 4), required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("noon", parents=[common], help="phase distinguishability under loss")
    p.add_argument("--photons", type=int, default=2)
    p.add_argument("--eta", type=_float_list, default=[1.0, 0.9, 0.8, 0.6])
    p.add_argument("--phases", type=_float_list, default=[np.pi / 4, np.pi / 2])
    p.add_argument("--xi", type=float, default=0.2552)
    p.add_argument("--transmission", type=float, default=0.9)
    p.add_argument("--alpha", type=float, default=1.2)
    p.set_defaults(func=cmd_noon)

    for name, func in (("wigner", cmd_wigner), ("quadrature", cmd_quadrature)):
        p = sub.add_parser(name, parents=[common], help=f"{name} data for a saved state")
        p.add_argument("--state", required=True, help="catsim-state-v1 file or report")
        p.add_argument("--range", type=float, default=5.0 if name == "wigner" else 6.0)
        p.add_argument("--points", type=int, default=101 if name == "wigner" else 601)
        if name == "quadrature":
            p.add_argument("--phi", type=float, default=0.0)
        p.set_defaults(func=func)

    p = sub.add_parser("state", parents=[common], help="write a named state to a file")
    p.add_argument("--kind", required=True,
                   choices=("vacuum", "fock", "coherent", "squeezed", "cat-even", "cat-odd"))
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--re", type=float, default=0.0)
    p.add_argument("--im", type=float, default=0.0)
    p.add_argument("--xi", type=float, default=0.0)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("selftest", parents=[common], help="run the oracle-equivalence checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.cutoff is not None and args.cutoff < 1:
        parser.error("--cutoff must be >= 1")
    if args.command in ("wigner", "quadrature") and args.points < 2:
        parser.error("--points must be >= 2")
    started = time.perf_counter()
    try:
        outputs, message = args.func(args)
    except InvalidArgumentError as exc:
        print(f"catsim {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ImpossibleOutcomeError as exc:
        print(f"catsim {args.command}: impossible outcome: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except CatsimError as exc:
        print(f"catsim {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _manifest(args, outputs, started)
    print(message)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
