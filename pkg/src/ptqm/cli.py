"""Command-line front end emitting machine-readable tables and SVG plots.

Subcommands: hamiltonian, spectrum, metric, pascal, scan, coriolis, evolve,
verify. Output is CSV (default) or JSON via --format, to stdout or --out;
scan can additionally render its curves to --svg. All output is bit-stable:
identical flags produce byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 argument or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, evolution, maps, metric, model, plotting, verify
from .errors import PtqmError

_META = {"model-version": __version__}


def _fmt(x) -> str:
    """17-significant-digit float formatting; '.' decimal separator."""
    return format(float(x), ".17g")


def _csv_lines(header: list[str], rows: list[list]) -> str:
    def cell(v) -> str:
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return _fmt(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write(text: str, out_path: str | None) -> None:
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def _emit(args, payload: dict, header: list[str], rows: list[list]) -> None:
    if args.format == "json":
        payload = dict(payload)
        payload["meta"] = _META
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _write(_csv_lines(header, rows), args.out)


def _matrix_rows(m: np.ndarray, record: str, width: int) -> list[list]:
    rows = []
    for i, row in enumerate(np.asarray(m), start=1):
        rows.append([record, i] + list(row) + [""] * (width - len(row)))
    return rows


def _matrix_payload(n, tau, matrix, eigenvalues, extra=None) -> tuple[dict, list, list]:
    width = matrix.shape[1]
    header = ["record", "i"] + [f"c{j}" for j in range(1, width + 1)]
    rows = _matrix_rows(matrix, "matrix", width)
    payload = {
        "n": n,
        "tau": tau,
        "matrix": [[float(v) for v in row] for row in matrix],
        "eigenvalues": None,
    }
    if eigenvalues is not None:
        rows.append(["eigenvalues", ""] + list(eigenvalues) + [""] * (width - len(eigenvalues)))
        payload["eigenvalues"] = [float(v) for v in eigenvalues]
    if extra:
        payload.update(extra)
        for key, value in extra.items():
            rows.append([key, "", value] + [""] * (width - 1))
    return payload, header, rows


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_hamiltonian(args) -> int:
    h = model.build_hamiltonian(args.n, args.tau)
    eig = model.energies(args.n, args.tau).levels if 0.0 <= args.tau <= 1.0 else None
    payload, header, rows = _matrix_payload(args.n, args.tau, h, eig)
    _emit(args, payload, header, rows)
    return 0


def _cmd_spectrum(args) -> int:
    levels = model.energies(args.n, args.tau).levels
    payload = {"n": args.n, "tau": args.tau, "eigenvalues": [float(v) for v in levels]}
    rows = [[k + 1, v] for k, v in enumerate(levels)]
    _emit(args, payload, ["k", "energy"], rows)
    return 0


def _cmd_metric(args) -> int:
    if args.g is not None and args.alpha is not None:
        raise PtqmError("--g and --alpha are mutually exclusive")
    if args.g is not None:
        if args.n != 3:
            raise PtqmError("--g selects the N=3 family; it requires --n 3")
        sample = metric.metric_n3_gfamily(args.tau, args.g)
        family = "g-family"
    elif args.alpha is not None:
        if args.n != 2:
            raise PtqmError("--alpha selects the N=2 family; it requires --n 2")
        sample = metric.metric_n2_alpha(args.tau, args.alpha)
        family = "alpha-family"
    else:
        sample = metric.minimal_metric(args.n, args.tau)
        family = "minimal"
    positive = bool(sample.eigenvalues[0] > 0.0)
    payload, header, rows = _matrix_payload(
        sample.n,
        sample.tau,
        sample.theta,
        sample.eigenvalues,
        extra={"family": family, "positive_definite": int(positive)},
    )
    _emit(args, payload, header, rows)
    return 0


def _cmd_pascal(args) -> int:
    table = metric.pascal_table(args.n)
    header = ["k"] + [f"c{j}" for j in range(1, args.n + 1)]
    rows = [[k + 1] + [int(v) for v in table.c[k]] for k in range(args.n)]
    payload = {"n": args.n, "table": [[int(v) for v in row] for row in table.c]}
    _emit(args, payload, header, rows)
    return 0


_SCAN_CLOSED_AT_ONE = {"metric-eigs", "defectiveness"}


def _scan_series(args, taus: np.ndarray) -> dict[str, np.ndarray]:
    n = args.n
    if args.what == "metric-eigs":
        if args.g is not None:
            if n != 3:
                raise PtqmError("--g selects the N=3 family; it requires --n 3")
            triples = np.array([metric.metric_n3_eigen_triple(t, args.g) for t in taus])
            return {f"theta_{k + 1}": triples[:, k] for k in range(3)}
        branches = np.array([metric.theta_factored(n, t) for t in taus])
        return {f"theta_{k + 1}": branches[:, k] for k in range(n)}
    if args.what == "anisotropy":
        return {"anisotropy": ((1.0 + taus) / (1.0 - taus)) ** (n - 1)}
    if args.what == "coriolis-norm":
        return {
            "coriolis_norm": np.array(
                [np.abs(maps.coriolis_spectral(n, t).sigma).max() for t in taus]
            )
        }
    return {
        "defectiveness": np.array([model.defectiveness_gauge(n, t) for t in taus])
    }


def _cmd_scan(args) -> int:
    if not args.tau_min < args.tau_max:
        raise PtqmError("need tau-min < tau-max")
    if args.tau_max > 1.0 or args.tau_min < 0.0:
        raise PtqmError("scan grid must stay inside [0, 1]")
    if args.tau_max >= 1.0 and args.what not in _SCAN_CLOSED_AT_ONE:
        raise PtqmError(f"tau = 1 is only reachable for closed-form scans, not {args.what}")
    taus = np.linspace(args.tau_min, args.tau_max, args.steps + 1)
    series = _scan_series(args, taus)
    header = ["tau"] + list(series)
    rows = [[t] + [series[name][i] for name in series] for i, t in enumerate(taus)]
    payload = {
        "n": args.n,
        "what": args.what,
        "taus": [float(t) for t in taus],
        "series": {name: [float(v) for v in vals] for name, vals in series.items()},
    }
    if args.g is not None:
        payload["g"] = args.g
    _emit(args, payload, header, rows)
    if args.svg:
        text = plotting.svg_line_plot(
            taus, series, title=f"{args.what} (N={args.n})", xlabel="tau",
            ylabel=args.what,
        )
        with open(args.svg, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_coriolis(args) -> int:
    term = maps.coriolis_spectral(args.n, args.tau)
    width = term.sigma.shape[1]
    header = ["record", "i"] + [f"c{j}" for j in range(1, width + 1)]
    rows = _matrix_rows(term.sigma.real, "matrix_re", width)
    rows += _matrix_rows(term.sigma.imag, "matrix_im", width)
    payload = {
        "n": args.n,
        "tau": args.tau,
        "matrix_re": [[float(v) for v in row] for row in term.sigma.real],
        "matrix_im": [[float(v) for v in row] for row in term.sigma.imag],
    }
    _emit(args, payload, header, rows)
    return 0


def _load_psi0(path: str, n: int) -> np.ndarray:
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip().replace(",", " ")
            if not line:
                continue
            parts = line.split()
            re = float(parts[0])
            im = float(parts[1]) if len(parts) > 1 else 0.0
            values.append(complex(re, im))
    if len(values) != n:
        raise PtqmError(f"--psi0 file must contain {n} components, got {len(values)}")
    return np.array(values)


def _cmd_evolve(args) -> int:
    config = evolution.EvolutionConfig(
        n=args.n, tau0=args.tau0, tau1=args.tau1, step=args.step,
        frame=evolution.Frame(args.frame),
    )
    if args.psi0:
        psi0 = _load_psi0(args.psi0, args.n)
    else:
        # tool convention: start from the lowest-level right eigenvector
        psi0 = model.biorthogonal_system(args.n, args.tau0).rights[:, 0].astype(complex)
    traj = evolution.evolve(config, psi0)
    header = ["tau"]
    for j in range(1, args.n + 1):
        header += [f"re_{j}", f"im_{j}"]
    header.append("phys_norm")
    rows = []
    for i, t in enumerate(traj.taus):
        row = [t]
        for j in range(args.n):
            row += [traj.states[i, j].real, traj.states[i, j].imag]
        row.append(traj.phys_norm[i])
        rows.append(row)
    payload = {
        "n": args.n,
        "frame": args.frame,
        "taus": [float(t) for t in traj.taus],
        "states_re": [[float(v) for v in row.real] for row in traj.states],
        "states_im": [[float(v) for v in row.imag] for row in traj.states],
        "phys_norm": [float(v) for v in traj.phys_norm],
    }
    _emit(args, payload, header, rows)
    return 0


def _cmd_verify(args) -> int:
    results = verify.run_checks(args.n_max)
    rows = [[r.name, "PASS" if r.ok else "FAIL", r.detail] for r in results]
    payload = {
        "n_max": args.n_max,
        "ok": all(r.ok for r in results),
        "checks": [
            {"name": r.name, "ok": r.ok, "detail": r.detail} for r in results
        ],
    }
    if args.format == "json":
        _emit(args, payload, [], [])
    else:
        text = "\n".join(
            f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}" for r in results
        )
        _write(text + "\n", args.out)
    return 0 if payload["ok"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptqm",
        description="Exactly solvable N-level PT-symmetric models: metrics, "
        "Dyson maps and evolution up to the exceptional point.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("csv", "json"), default="csv")
    shared.add_argument("--out", default=None, help="output path (default stdout)")
    shared.add_argument("--svg", default=None, help="SVG plot path (scan only)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", parents=[shared], help="dump H(tau)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(fn=_cmd_hamiltonian)

    p = sub.add_parser("spectrum", parents=[shared], help="closed-form levels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("metric", parents=[shared], help="metric matrix and spectrum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--g", type=float, default=None, help="N=3 family parameter")
    p.add_argument("--alpha", type=float, default=None, help="N=2 family angle")
    p.set_defaults(fn=_cmd_metric)

    p = sub.add_parser("pascal", parents=[shared], help="integer eigenvalue table")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_pascal)

    p = sub.add_parser("scan", parents=[shared], help="tabulate a diagnostic over tau")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--what",
        choices=("metric-eigs", "anisotropy", "coriolis-norm", "defectiveness"),
        required=True,
    )
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--g", type=float, default=None, help="N=3 family parameter")
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("coriolis", parents=[shared], help="Coriolis term Sigma(tau)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(fn=_cmd_coriolis)

    p = sub.add_parser("evolve", parents=[shared], help="integrate a trajectory")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--frame", choices=[f.value for f in evolution.Frame], required=True)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--tau1", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--psi0", default=None, help="initial state file (re [im] per line)")
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("verify", parents=[shared], help="run the invariant suite")
    p.add_argument("--n-max", type=int, default=7)
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.svg and args.command != "scan":
        parser.exit(2, "ptqm: error: --svg is only available for scan\n")
    try:
        return args.fn(args)
    except PtqmError as exc:
        sys.stderr.write(f"ptqm: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
