"""
Universal Programming Language pipeline and time-ordered layers.

A program is the triplet (computation space, subsystems, instruction list).
:func:`run_upl` executes the eight instructions:

1. resolve every subsystem's state at the current time step;
2. Segal-Bargmann transform real-line sources;
3. form the joint state as a product over disjoint variable blocks;
4. apply every gate in the sweep;
5. classify each produced pattern as classical or quantum;
6. compute normalized expectation values;
7. repeat over the requested time steps;
8. keep one record per distinct (gate, expectation value).

Layers run strictly in order of increasing time scale; each layer's catalog
is delivered to the next layer's inbox before that layer starts.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bargmann import BargmannSpace, sb_coefficients
from .exceptions import DimensionError, HoloError, UplError, ZeroStateError
from .gates import DiffOp, apply, expectation, gate_from_label, matrix_to_operator
from .holostate import HoloPoly, coefficient_matrix, tensor_product

CLASSICAL = "classical"
QUANTUM = "quantum"
EXPECTATION_DECIMALS = 10


def classify_state(f: HoloPoly, partition: Sequence[Sequence[int]] | None = None) -> str:
    """``'quantum'`` if ``f`` is entangled across ``partition`` or any factor is a superposition.

    ``partition`` lists the variable indices of each subsystem; ``None``
    treats all variables as one subsystem.
    """
    if f.is_zero():
        raise ZeroStateError("cannot classify the zero state")
    groups = [tuple(g) for g in partition] if partition else [tuple(range(f.dim))]
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(f.dim)):
        raise DimensionError(f"partition {groups} does not cover {f.dim} variables exactly once")
    for g in groups:
        rest = [i for i in range(f.dim) if i not in g]
        M, rows, _ = coefficient_matrix(f, (g, rest))
        s = np.linalg.svd(M, compute_uv=False)
        if len(s) > 1 and s[1] > 1e-10 * s[0]:
            return QUANTUM
        # rank one: the factor on g has one component per distinct row
        if len(rows) >= 2:
            return QUANTUM
    return CLASSICAL


@dataclass(frozen=True)
class Subsystem:
    """A named state source.

    Exactly one of ``state`` or ``samples`` is given. Either may be a single
    value, a sequence indexed by time step (cycled), or a callable of the
    step. ``samples`` are ``(x, f(x))`` pairs on the real line and are lifted
    with the Segal-Bargmann transform truncated at ``degree``.
    """

    name: str
    state: object = None
    samples: object = None
    degree: int = 4

    def __post_init__(self):
        if (self.state is None) == (self.samples is None):
            raise ValueError(f"subsystem {self.name!r} needs exactly one of state or samples")

    @property
    def is_real(self) -> bool:
        return self.samples is not None

    def source_at(self, step: int):
        src = self.state if self.state is not None else self.samples
        if isinstance(src, HoloPoly) or (self.is_real and _is_sample_pair(src)):
            return src
        if callable(src):
            return src(step)
        return src[step % len(src)]


def _is_sample_pair(src) -> bool:
    return (
        isinstance(src, tuple)
        and len(src) == 2
        and np.ndim(src[0]) == 1
        and np.ndim(src[1]) == 1
    )


@dataclass(frozen=True)
class UplProgram:
    space: BargmannSpace
    subsystems: tuple
    gates: tuple  # (label, DiffOp) pairs
    iterations: int = 1

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        gates = []
        for g in self.gates:
            if isinstance(g, str):
                gates.append((g, gate_from_label(g)))
            else:
                label, op = g
                gates.append((str(label), op))
        object.__setattr__(self, "gates", tuple(gates))
        if not self.subsystems:
            raise ValueError("a UPL program needs at least one subsystem")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")

    def partition(self, dims: Sequence[int]) -> list:
        bounds = list(itertools.accumulate(dims, initial=0))
        return [list(range(a, b)) for a, b in zip(bounds, bounds[1:])]


@dataclass(frozen=True)
class PatternRecord:
    gate: str
    step: int
    input: HoloPoly
    output: HoloPoly
    expectation: complex
    classification: str

    def to_dict(self) -> dict:
        return {
            "gate": self.gate,
            "step": self.step,
            "input": self.input.to_dict(),
            "output": self.output.to_dict(),
            "expectation": {"re": self.expectation.real, "im": self.expectation.imag},
            "classification": self.classification,
        }


def _key(label, value):
    re = round(value.real, EXPECTATION_DECIMALS) + 0.0
    im = round(value.imag, EXPECTATION_DECIMALS) + 0.0
    return (label, re, im)


def _joint_state(program: UplProgram, step: int):
    states = []
    for sub in program.subsystems:
        try:
            src = sub.source_at(step)  # L1
        except Exception as exc:
            raise UplError(1, f"subsystem {sub.name!r}: {exc}") from exc
        if sub.is_real:
            try:
                x, fx = src
                src = sb_coefficients(BargmannSpace(1, program.space.t), x, fx, sub.degree)  # L2
            except HoloError as exc:
                raise UplError(2, f"subsystem {sub.name!r}: {exc}") from exc
        if not isinstance(src, HoloPoly):
            raise UplError(1, f"subsystem {sub.name!r} did not resolve to a state")
        states.append(src)
    joint = tensor_product(states)  # L3
    if joint.dim != program.space.dim:
        raise UplError(
            3, f"joint state has {joint.dim} variables, computation space has {program.space.dim}"
        )
    if joint.is_zero():
        raise UplError(3, "joint state is zero")
    return joint, program.partition([s.dim for s in states])


def run_upl(program: UplProgram) -> list:
    """Execute the pipeline and return the deduplicated pattern catalog, sorted by gate label."""
    catalog = {}
    for step in range(program.iterations):  # L7
        joint, partition = _joint_state(program, step)
        for label, op in program.gates:
            if op.dim != joint.dim:
                raise UplError(4, f"gate {label!r} acts on {op.dim} variables, joint state has {joint.dim}")
            try:
                out = apply(op, joint)  # L4
            except HoloError as exc:
                raise UplError(4, f"gate {label!r}: {exc}") from exc
            kind = CLASSICAL if out.is_zero() else classify_state(out, partition)  # L5
            value = expectation(program.space, op, joint)  # L6
            key = _key(label, value)
            if key not in catalog:  # L8
                catalog[key] = PatternRecord(label, step, joint, out, value, kind)
    return [catalog[k] for k in sorted(catalog)]


def catalog_to_json(records: Sequence[PatternRecord]) -> str:
    return json.dumps({"patterns": [r.to_dict() for r in records]}, indent=2)


# program files --------------------------------------------------------------


def _complex_entry(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, dict):
        return complex(v.get("re", 0.0), v.get("im", 0.0))
    return complex(v)


def _gate_from_json(g):
    if isinstance(g, str):
        return (g, gate_from_label(g))
    if "matrix" in g:
        M = [[_complex_entry(v) for v in row] for row in g["matrix"]]
        return (g.get("label", "M"), matrix_to_operator(M))
    return (g["label"], gate_from_label(g["label"]))


def _subsystem_from_json(s):
    name = s.get("name", "")
    if "state" in s:
        return Subsystem(name, state=HoloPoly.from_dict(s["state"]))
    if "states" in s:
        return Subsystem(name, state=tuple(HoloPoly.from_dict(x) for x in s["states"]))
    if "samples" in s:
        smp = s["samples"]
        pairs = smp if isinstance(smp, list) else [smp]
        pairs = tuple((np.asarray(p["x"], float), np.asarray(p["f"], float)) for p in pairs)
        src = pairs[0] if len(pairs) == 1 else pairs
        return Subsystem(name, samples=src, degree=int(s.get("degree", 4)))
    raise ValueError(f"subsystem {name!r} needs 'state', 'states' or 'samples'")


def program_from_dict(data: dict) -> UplProgram:
    sp = data["space"]
    return UplProgram(
        space=BargmannSpace(int(sp["dim"]), float(sp.get("t", 1.0))),
        subsystems=tuple(_subsystem_from_json(s) for s in data["subsystems"]),
        gates=tuple(_gate_from_json(g) for g in data.get("gates", [])),
        iterations=int(data.get("iterations", 1)),
    )


# layers ---------------------------------------------------------------------


@dataclass(frozen=True)
class Layer:
    """Computation at one time scale.

    ``program`` is a :class:`UplProgram` or a callable that receives the
    upstream catalog (the inbox) and returns one.
    """

    index: int
    time_scale: float
    program: UplProgram | Callable


@dataclass(frozen=True)
class TraceEntry:
    index: int
    time_scale: float
    start_tick: int
    end_tick: int
    catalog_size: int
    inbox_size: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ExecutionTrace:
    entries: list = field(default_factory=list)
    catalogs: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"layers": [e.to_dict() for e in self.entries]}, indent=2)


class LayerSchedule:
    """Ordered layers with strictly increasing time scales."""

    def __init__(self, layers: Sequence[Layer]):
        self.layers = tuple(layers)
        if not self.layers:
            raise ValueError("a schedule needs at least one layer")
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if not nxt.time_scale > prev.time_scale:
                raise ValueError(
                    f"time scales must increase strictly: layer {nxt.index} has "
                    f"{nxt.time_scale} after {prev.time_scale}"
                )

    def run(self) -> ExecutionTrace:
        trace = ExecutionTrace()
        clock = itertools.count(1)
        inbox = ()
        for layer in self.layers:
            start = next(clock)
            program = layer.program(inbox) if callable(layer.program) else layer.program
            catalog = run_upl(program)
            end = next(clock)
            trace.entries.append(
                TraceEntry(layer.index, layer.time_scale, start, end, len(catalog), len(inbox))
            )
            trace.catalogs.append(catalog)
            inbox = tuple(catalog)
        for a, b in zip(trace.entries, trace.entries[1:]):
            assert a.end_tick < b.start_tick, "layer causality violated"
        return trace


def schedule_layers(layers: Sequence[Layer]) -> ExecutionTrace:
    return LayerSchedule(layers).run()


def schedule_from_dict(data: dict) -> LayerSchedule:
    layers = [
        Layer(int(entry.get("index", i + 1)), float(entry["time_scale"]), program_from_dict(entry["program"]))
        for i, entry in enumerate(data["layers"])
    ]
    return LayerSchedule(layers)
