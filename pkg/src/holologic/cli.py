"""Command-line entry point: ``holologic <subcommand> ...``.

Exit status is 0 on success, 1 on domain or I/O errors (one-line diagnostic
on stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bargmann
from .bargmann import BargmannSpace, QuadratureGrid
from .exceptions import HoloError
from .gates import expectation, gate_from_label
from .holostate import HoloPoly, format_complex, format_poly, format_real
from .infotheory import ChannelEnsemble, entropy_report
from .systems import (
    PendulumParams,
    homogeneous_fixed_point,
    load_rd_config,
    pendulum_gate_table,
    perceptron_train,
    simulate_fhn,
    simulate_memristive,
    window_memristor,
)
from .upl import catalog_to_json, program_from_dict, run_upl, schedule_from_dict

log = logging.getLogger("holologic")


class CliError(Exception):
    """Domain failure that should exit with status 1."""


# output helpers -------------------------------------------------------------


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_real(v)
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, HoloPoly):
        return format_poly(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, HoloPoly):
        return v.to_dict()
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def emit(header, rows, fmt, out=None):
    """Write ``rows`` (sequences aligned with ``header``) as CSV or a JSON list of objects."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
        text = buf.getvalue()
    else:
        text = json.dumps([dict(zip(header, map(_jsonable, row))) for row in rows], indent=2) + "\n"
    _write(text, out)


def emit_json(obj, out=None):
    _write(json.dumps(_jsonable(obj), indent=2) + "\n", out)


def _write(text, out):
    if out:
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _load_json_arg(value, what):
    """Inline JSON if it looks like an object, otherwise a path to a JSON file."""
    text = value if value.lstrip().startswith(("{", "[")) else None
    if text is None:
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise CliError(f"cannot read {what} file {value!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON for {what}: {exc}") from None


# subcommands ----------------------------------------------------------------


def cmd_gates_table(args):
    f = HoloPoly.from_dict(_load_json_arg(args.state, "state"))
    space = BargmannSpace(f.dim, args.t)
    rows = []
    for label in [g for g in args.gates.split(",") if g.strip()]:
        L = gate_from_label(label)
        if L.dim != f.dim:
            raise CliError(f"gate {label} acts on {L.dim} variables, state has {f.dim}")
        rows.append((label.strip(), L(f), expectation(space, L, f, args.normalization)))
    if args.format == "csv":
        emit(["gate", "image", "expectation"], rows, "csv", args.out)
    else:
        emit_json(
            [
                {"gate": g, "image": img.to_dict(), "image_text": format_poly(img), "expectation": e}
                for g, img, e in rows
            ],
            args.out,
        )


def cmd_bargmann_check(args):
    scales = [float(s) for s in args.scales.split(",")]
    grid = QuadratureGrid(args.radial, args.angular)
    rows = bargmann.oracle_agreement_rows(args.max_degree, scales, grid=grid)
    table = [(name, e.real, e.imag, q.real, q.imag, err) for name, e, q, err in rows]
    emit(["test", "exact_re", "exact_im", "quad_re", "quad_im", "rel_err"], table, args.format, args.out)
    worst = max(r[-1] for r in table)
    if worst >= args.tol:
        raise CliError(f"oracle disagreement: max rel_err {worst:.3g} >= {args.tol:g}")


def cmd_info(args):
    data = _load_json_arg(args.ensemble, "ensemble")
    comps = [HoloPoly.from_dict(c) for c in data["components"]]
    sp = data.get("space", {})
    space = BargmannSpace(int(sp.get("dim", comps[0].dim)), float(sp.get("t", 1.0)))
    rep = entropy_report(ChannelEnsemble(space, comps), gate_from_label(args.gate))
    row = (rep.s_in, rep.s_out, rep.delta)
    if args.format == "csv":
        emit(["S_in", "S_out", "delta_S"], [row], "csv", args.out)
    else:
        emit_json({"S_in": row[0], "S_out": row[1], "delta_S": row[2]}, args.out)


def cmd_pendulum(args):
    p = PendulumParams(args.omega0, args.coupling, args.alpha, args.beta)
    if args.table:
        rows = [(r.gate, r.image, r.expectation) for r in pendulum_gate_table(p)]
        if args.format == "csv":
            emit(["gate", "image", "expectation"], rows, "csv", args.out)
        else:
            emit_json(
                {
                    "omega0": p.omega0,
                    "omega": p.omega,
                    "table": [
                        {"gate": g, "image": i.to_dict(), "image_text": format_poly(i), "expectation": e}
                        for g, i, e in rows
                    ],
                },
                args.out,
            )
    else:
        emit(["omega0", "omega"], [(p.omega0, p.omega)], args.format, args.out)


def _initial_fields(config, extra):
    kind = extra.get("init", "random")
    if kind == "random":
        rng = np.random.default_rng(int(extra.get("seed", 0)))
        amp = float(extra.get("amplitude", 0.1))
        return rng.uniform(-amp, amp, config.n), rng.uniform(-amp, amp, config.n)
    if kind == "flat":
        a0, b0 = float(extra.get("a0", 0.0)), float(extra.get("b0", 0.0))
        return np.full(config.n, a0), np.full(config.n, b0)
    if kind == "fixed":
        s = homogeneous_fixed_point(config.alpha)
        return np.full(config.n, s), np.full(config.n, s)
    raise CliError(f"unknown init {kind!r}; expected random, flat or fixed")


def cmd_fhn(args):
    try:
        config, extra = load_rd_config(args.config)
    except OSError as exc:
        raise CliError(f"cannot read config {args.config!r}: {exc.strerror}") from None
    a, b = simulate_fhn(config, *_initial_fields(config, extra))
    rows = [(i, float(ai), float(bi)) for i, (ai, bi) in enumerate(zip(a, b))]
    emit(["cell_index", "a", "b"], rows, args.format, args.out)


def cmd_memristor(args):
    f, g = window_memristor(args.r_on, args.r_off, args.mobility)

    def u(t):
        return args.amplitude * np.sin(2 * np.pi * args.frequency * t)

    tr = simulate_memristive(f, g, args.x0, u, args.dt, args.steps)
    rows = [
        (k, tr.t[k], tr.u[k], tr.x[k], tr.y[k], tr.S[k], tr.Q[k], tr.R[k])
        for k in range(len(tr.t))
    ]
    emit(["step", "t", "u", "x", "y", "S", "Q", "R"], rows, args.format, args.out)


def cmd_neuron_train(args):
    try:
        with open(args.data, newline="") as fh:
            table = list(csv.reader(fh))
    except OSError as exc:
        raise CliError(f"cannot read data file {args.data!r}: {exc.strerror}") from None
    if len(table) < 2:
        raise CliError("data file needs a header row and at least one sample")
    header, body = table[0], [r for r in table[1:] if r]
    tcol = header.index("target") if "target" in header else len(header) - 1
    samples = []
    for r in body:
        feats = [float(v) for i, v in enumerate(r) if i != tcol]
        samples.append((feats, int(float(r[tcol]))))
    res = perceptron_train(samples, args.epochs, args.learning_rate)
    out = {
        "weights": list(res.params.weights),
        "bias": res.params.bias,
        "activation": res.params.activation,
        "errors": res.errors,
    }
    if args.format == "csv":
        emit(["epoch", "errors"], list(enumerate(res.errors, 1)), "csv", args.out)
    else:
        emit_json(out, args.out)


def cmd_upl_run(args):
    program = program_from_dict(_load_json_arg(args.program, "program"))
    catalog = run_upl(program)
    if args.format == "json":
        _write(catalog_to_json(catalog) + "\n", args.out)
    else:
        rows = [(r.gate, r.step, r.input, r.output, r.expectation, r.classification) for r in catalog]
        emit(["gate", "step", "input", "output", "expectation", "classification"], rows, "csv", args.out)


def cmd_upl_layers(args):
    schedule = schedule_from_dict(_load_json_arg(args.schedule, "schedule"))
    trace = schedule.run()
    if args.format == "json":
        _write(trace.to_json() + "\n", args.trace)
    else:
        cols = ["index", "time_scale", "start_tick", "end_tick", "catalog_size", "inbox_size"]
        rows = [[e.to_dict()[c] for c in cols] for e in trace.entries]
        emit(cols, rows, "csv", args.trace)


# parser ---------------------------------------------------------------------


def _formats(default):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default=default, help=f"output format (default {default})")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holologic", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gates = sub.add_parser("gates", help="apply gates to a state")
    gsub = gates.add_subparsers(dest="action", required=True, metavar="ACTION")
    table = gsub.add_parser("table", parents=[_formats("csv")], help="images and expectations")
    table.add_argument("--state", required=True, help="HoloPoly JSON (inline or file path)")
    table.add_argument("--gates", default="X,Y,Z,H", help="comma-separated labels, e.g. X,Rx:0.5")
    table.add_argument("--t", type=float, default=1.0, help="Bargmann scale t")
    table.add_argument("--normalization", choices=("normalized", "sqrt"), default="normalized")
    table.add_argument("--out", help="output file (default stdout)")
    table.set_defaults(func=cmd_gates_table)

    bg = sub.add_parser("bargmann", help="Bargmann-space verification")
    bsub = bg.add_subparsers(dest="action", required=True, metavar="ACTION")
    check = bsub.add_parser("check", parents=[_formats("csv")], help="exact vs quadrature oracle")
    check.add_argument("--max-degree", type=int, default=6)
    check.add_argument("--scales", default="0.5,1,2", help="comma-separated t values")
    check.add_argument("--radial", type=int, default=128)
    check.add_argument("--angular", type=int, default=128)
    check.add_argument("--tol", type=float, default=1e-7, help="fail if any rel_err reaches this")
    check.add_argument("--out")
    check.set_defaults(func=cmd_bargmann_check)

    info = sub.add_parser("info", parents=[_formats("json")], help="entropy change of a gate on an ensemble")
    info.add_argument("--ensemble", required=True, help='{"space": {...}, "components": [HoloPoly, ...]}')
    info.add_argument("--gate", required=True)
    info.add_argument("--out")
    info.set_defaults(func=cmd_info)

    pend = sub.add_parser("pendulum", parents=[_formats("csv")], help="coupled pendulum frequencies and gate table")
    pend.add_argument("--omega0", type=float, default=1.0)
    pend.add_argument("--coupling", type=float, default=0.0, help="s/M")
    pend.add_argument("--alpha", type=float, default=1.0)
    pend.add_argument("--beta", type=float, default=1.0)
    pend.add_argument("--table", action="store_true", help="print the X/Y/Z/I/H gate table")
    pend.add_argument("--out")
    pend.set_defaults(func=cmd_pendulum)

    fhn = sub.add_parser("fhn", parents=[_formats("csv")], help="FitzHugh-Nagumo reaction-diffusion run")
    fhn.add_argument("--config", required=True, help="key = value file with RDConfig fields")
    fhn.add_argument("--out")
    fhn.set_defaults(func=cmd_fhn)

    mem = sub.add_parser("memristor", parents=[_formats("csv")], help="windowed memristor under sine drive")
    mem.add_argument("--steps", type=int, default=1000)
    mem.add_argument("--dt", type=float, default=1e-3)
    mem.add_argument("--x0", type=float, default=0.5)
    mem.add_argument("--amplitude", type=float, default=1.0)
    mem.add_argument("--frequency", type=float, default=1.0)
    mem.add_argument("--mobility", type=float, default=1.0)
    mem.add_argument("--r-on", type=float, default=100.0)
    mem.add_argument("--r-off", type=float, default=16e3)
    mem.add_argument("--out")
    mem.set_defaults(func=cmd_memristor)

    neuron = sub.add_parser("neuron", help="gate-driven neuron")
    nsub = neuron.add_subparsers(dest="action", required=True, metavar="ACTION")
    train = nsub.add_parser("train", parents=[_formats("json")], help="perceptron training from CSV")
    train.add_argument("--data", required=True, help="CSV with feature columns and a 'target' column")
    train.add_argument("--epochs", type=int, default=50)
    train.add_argument("--learning-rate", type=float, default=1.0)
    train.add_argument("--out")
    train.set_defaults(func=cmd_neuron_train)

    upl = sub.add_parser("upl", help="UPL programs and layer schedules")
    usub = upl.add_subparsers(dest="action", required=True, metavar="ACTION")
    run = usub.add_parser("run", parents=[_formats("json")], help="run a program, emit its pattern catalog")
    run.add_argument("--program", required=True)
    run.add_argument("--out")
    run.set_defaults(func=cmd_upl_run)
    layers = usub.add_parser("layers", parents=[_formats("json")], help="run a layer schedule, emit its trace")
    layers.add_argument("--schedule", required=True)
    layers.add_argument("--trace")
    layers.set_defaults(func=cmd_upl_layers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s"
    )
    try:
        args.func(args)
    except (CliError, HoloError, ValueError, KeyError, OSError, ArithmeticError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        print(f"holologic: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
