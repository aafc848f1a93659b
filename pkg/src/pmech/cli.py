"""Command-line harness: reproducible experiments with machine-readable output.

Subcommands
-----------
bracket     brackets of observables supplied inline or as JSON files, with
            an optional hbar scan and fitted convergence slope
oscillator  trajectory of df/dt = bracket(H, f) for the harmonic H, CSV
dw          covariant field march with residual report, CSV + JSON
coherent    vacuum / coherent-state norms under the channel inner product

Every report embeds the full configuration and the conventions version.
Failures print a machine-parsable JSON error object to stderr and exit
nonzero.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import conventions, dwfield, galilean, pbrackets
from .clifford import Signature
from .grids import Axis


class CommandError(Exception):
    """User-facing failure with a structured payload."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json_source(source: str, what: str) -> dict:
    """Parse inline JSON (starts with '{') or read a JSON file."""
    if source.lstrip().startswith("{"):
        text = source
        origin = "<inline>"
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise CommandError(f"cannot read {what}: {exc}", path=source)
        origin = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError(
            f"malformed {what}: {exc.msg}",
            path=origin,
            line=exc.lineno,
            column=exc.colno,
            context=text.splitlines()[exc.lineno - 1] if text.splitlines() else "",
        )


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise CommandError(f"expected comma-separated numbers, got {text!r}")


def _parse_signature(text: str) -> Signature:
    mapping = {"+": 1, "-": -1}
    try:
        return Signature([mapping[ch] for ch in text.strip()])
    except KeyError:
        raise CommandError(f"signature must be a string of '+'/'-', got {text!r}")


# ---------------------------------------------------------------------------
# bracket
# ---------------------------------------------------------------------------


def cmd_bracket(args) -> dict:
    a = pbrackets.CharacterSum.from_dict(_load_json_source(args.a, "observable a"))
    b = pbrackets.CharacterSum.from_dict(_load_json_source(args.b, "observable b"))
    result = pbrackets.pmech_bracket(a, b)
    report = {
        "schema": "bracket-report/1",
        "config": {"a": a.to_dict(), "b": b.to_dict()},
        "conventions": conventions.stamp(),
        "result": result.to_dict(),
    }
    if args.hbar_scan:
        hbars = _parse_floats(args.hbar_scan)
        scan = []
        for h in hbars:
            ah = pbrackets.CharacterSum(
                a.dimension, {(h, k[1], k[2]): c for k, c in a.atoms.items()}
            )
            bh = pbrackets.CharacterSum(
                b.dimension, {(h, k[1], k[2]): c for k, c in b.atoms.items()}
            )
            br = pbrackets.pmech_bracket(ah, bh)
            coeffs = {str((k[1], k[2])): [c.real, c.imag] for k, c in sorted(br.atoms.items())}
            scan.append({"hbar": h, "coefficients": coeffs})
        report["scan"] = {"points": scan}
        nonzero = [h for h in hbars if h != 0.0]
        if 0.0 in hbars and len(nonzero) >= 2:
            a0 = pbrackets.CharacterSum(
                a.dimension, {(0.0, k[1], k[2]): c for k, c in a.atoms.items()}
            )
            b0 = pbrackets.CharacterSum(
                b.dimension, {(0.0, k[1], k[2]): c for k, c in b.atoms.items()}
            )
            limit = pbrackets.pmech_bracket(a0, b0)
            errs = []
            for h in nonzero:
                ah = pbrackets.CharacterSum(
                    a.dimension, {(h, k[1], k[2]): c for k, c in a.atoms.items()}
                )
                bh = pbrackets.CharacterSum(
                    b.dimension, {(h, k[1], k[2]): c for k, c in b.atoms.items()}
                )
                br = pbrackets.pmech_bracket(ah, bh)
                err = 0.0
                for key, c in br.atoms.items():
                    ref = limit.atoms.get((0.0, key[1], key[2]), 0j)
                    err = max(err, abs(c - ref))
                errs.append(err)
            if all(e > 0 for e in errs):
                slope = np.polyfit(np.log(nonzero), np.log(errs), 1)[0]
                report["scan"]["limit_errors"] = dict(zip(map(str, nonzero), errs))
                report["scan"]["fitted_slope"] = float(slope)
    return report


# ---------------------------------------------------------------------------
# oscillator
# ---------------------------------------------------------------------------


def _monomial_label(key) -> str:
    dq, dp = key
    parts = []
    for j, d in enumerate(dq):
        if d:
            parts.append(f"q{j if len(dq) > 1 else ''}^{d}" if d > 1 else f"q{j if len(dq) > 1 else ''}")
    for j, d in enumerate(dp):
        if d:
            parts.append(f"p{j if len(dp) > 1 else ''}^{d}" if d > 1 else f"p{j if len(dp) > 1 else ''}")
    return "*".join(parts) if parts else "1"


def cmd_oscillator(args) -> dict:
    if args.dt <= 0:
        raise CommandError("dt must be positive")
    if args.t_end <= 0:
        raise CommandError("t-end must be positive")
    if args.backend == "moyal" and args.hbar == 0:
        raise CommandError("moyal backend needs nonzero --hbar")
    H = pbrackets.PolyObservable(
        1, {((2,), (0,)): 0.5, ((0,), (2,)): 0.5}
    )
    f0 = pbrackets.PolyObservable.coordinate(1, args.f0)
    trajectory = pbrackets.evolve(
        H, f0, args.t_end, args.dt, args.backend, hbar=args.hbar or None
    )
    labels = sorted({key for _, f in trajectory for key in f.monomials}, key=_monomial_label)
    header = ["t"] + [_monomial_label(k) for k in labels]
    rows = []
    stride = max(1, args.stride)
    for idx, (t, f) in enumerate(trajectory):
        if idx % stride and idx != len(trajectory) - 1:
            continue
        rows.append([f"{t:.12g}"] + [f"{f.monomials.get(k, 0j).real:.15g}" for k in labels])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    report = {
        "schema": "oscillator-report/1",
        "config": {
            "backend": args.backend,
            "hbar": args.hbar,
            "dt": args.dt,
            "t_end": args.t_end,
            "f0": args.f0,
            "stride": stride,
        },
        "conventions": conventions.stamp(),
        "columns": header,
        "samples": len(rows),
        "final": dict(zip(header, rows[-1])),
    }
    if args.out:
        report["csv"] = args.out
    return report


# ---------------------------------------------------------------------------
# dw
# ---------------------------------------------------------------------------


def cmd_dw(args) -> dict:
    if args.dt <= 0:
        raise CommandError("dt must be positive")
    sig = _parse_signature(args.signature)
    if sig.dim != 2:
        raise CommandError("dw command runs on 1+1 space-time (two-character signature)")
    potential = _parse_floats(args.potential)
    L = dwfield.LagrangianSpec(sig, potential)
    H = dwfield.legendre(L)
    generator = dwfield.rescaled_hamiltonian(H) if args.matched else H
    space = Axis.centered(math.pi, args.grid)
    steps = max(1, int(round(args.t_end / args.dt)))
    if args.preset == "plane-wave":
        init, _ = dwfield.plane_wave_state(generator, space, k=1.0, amplitude=1.0, dt=args.dt)
    elif args.preset == "zero":
        init = dwfield.FieldState.initial(
            space, np.zeros(space.num), np.zeros(space.num), args.dt
        )
    else:
        raise CommandError(f"unknown preset {args.preset!r}")
    try:
        state = dwfield.dw_integrate(generator, init, steps, args.dt)
    except ValueError as exc:
        raise CommandError(str(exc))
    report_state = dwfield.residual_check(state, H, sig) if steps >= 2 else None
    if args.out:
        state.to_csv(args.out)
    report = {
        "schema": "dw-report/1",
        "config": {
            "signature": args.signature,
            "potential": potential,
            "grid": args.grid,
            "dt": args.dt,
            "t_end": args.t_end,
            "preset": args.preset,
            "matched_generator": bool(args.matched),
        },
        "conventions": conventions.stamp(),
        "state": state.metadata(),
        "max_abs_q": float(np.max(np.abs(state.q))),
    }
    if report_state is not None:
        report["residuals"] = {
            "gradient_components": list(report_state.gradient_components),
            "hamilton_components": list(report_state.hamilton_components),
            "pairing_match": report_state.pairing_match,
            "divergence_residual": report_state.divergence_residual,
            "center_constant": report_state.center,
        }
    if args.out:
        report["csv"] = args.out
    return report


# ---------------------------------------------------------------------------
# coherent
# ---------------------------------------------------------------------------


def cmd_coherent(args) -> dict:
    h_values = _parse_floats(args.hbar)
    if any(v == 0 for v in h_values):
        raise CommandError("all channel constants must be nonzero")
    h = galilean.PlanckTuple(h_values)
    n = h.n
    sig = Signature([-1] * (n + 1))
    s_samples = 8
    axes, labels = galilean.group_grid_axes(h, s_samples, args.box_radius, args.grid)
    vac = galilean.sample_vacuum(h, axes, labels, sig)
    rng = np.random.default_rng(args.seed)
    norms = {"vacuum": galilean.state_norm(h, vac)}
    coherent_norms = []
    for _ in range(args.count):
        g = galilean.GalileanElement(
            rng.uniform(-0.3, 0.3, n + 1), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2, n + 1)
        )
        st = galilean.sample_coherent(h, g, axes, labels, sig)
        coherent_norms.append(galilean.state_norm(h, st))
    zero = galilean.CliffordGridFunction.zero(axes, labels, sig)
    norms["coherent"] = coherent_norms
    norms["zero_function"] = galilean.state_norm(h, zero)
    return {
        "schema": "coherent-report/1",
        "config": {
            "hbar": h_values,
            "grid": args.grid,
            "box_radius": args.box_radius,
            "count": args.count,
            "seed": args.seed,
        },
        "conventions": conventions.stamp(),
        "norms": norms,
    }


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmech", description="phase-space bracket and covariant field experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    br = sub.add_parser("bracket", help="bracket of two character-sum observables")
    br.add_argument("--a", required=True, help="JSON file or inline charsum/1 JSON")
    br.add_argument("--b", required=True, help="JSON file or inline charsum/1 JSON")
    br.add_argument("--hbar-scan", default=None, help="comma list of hbar values, e.g. 0.2,0.1,0")
    br.add_argument("--out", default=None)
    br.set_defaults(fn=cmd_bracket)

    osc = sub.add_parser("oscillator", help="harmonic-oscillator observable trajectory")
    osc.add_argument("--backend", choices=["poisson", "moyal"], default="poisson")
    osc.add_argument("--hbar", type=float, default=0.0)
    osc.add_argument("--dt", type=float, required=True)
    osc.add_argument("--t-end", type=float, required=True)
    osc.add_argument("--f0", choices=["q", "p"], default="q")
    osc.add_argument("--stride", type=int, default=1)
    osc.add_argument("--out", default=None, help="CSV path for the trajectory")
    osc.set_defaults(fn=cmd_oscillator)

    dw = sub.add_parser("dw", help="covariant field march with residual report")
    dw.add_argument("--signature", default="+-", help="metric signs, e.g. '+-' or '--'")
    dw.add_argument("--potential", default="0,0,0.5", help="coefficients of V(q) = sum c_k q^k")
    dw.add_argument("--grid", type=int, default=256)
    dw.add_argument("--dt", type=float, required=True)
    dw.add_argument("--t-end", type=float, required=True)
    dw.add_argument("--preset", choices=["plane-wave", "zero"], default="plane-wave")
    dw.add_argument("--matched", action="store_true",
                    help="march the divergence-matched generator instead of H")
    dw.add_argument("--out", default=None, help="CSV path for field snapshots")
    dw.set_defaults(fn=cmd_dw)

    coh = sub.add_parser("coherent", help="vacuum and coherent-state norms")
    coh.add_argument("--hbar", default="1.0", help="comma list h_0,..,h_n")
    coh.add_argument("--grid", type=int, default=48, help="samples per (x, y) axis")
    coh.add_argument("--box-radius", type=float, default=3.0)
    coh.add_argument("--count", type=int, default=3, help="number of random coherent states")
    coh.add_argument("--seed", type=int, default=0)
    coh.add_argument("--out", default=None)
    coh.set_defaults(fn=cmd_coherent)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.fn(args)
    except CommandError as exc:
        error = {"error": {"type": "usage", "message": str(exc), **exc.details}}
        print(json.dumps(error), file=sys.stderr)
        return 2
    except (ValueError, pbrackets.TruncationError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error), file=sys.stderr)
        return 1
    # for oscillator/dw, --out is the CSV path and the report goes to stdout
    report_path = args.out if args.command in ("bracket", "coherent") else None
    _emit(report, report_path)
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
