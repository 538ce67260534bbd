"""Reading transition systems back from solver models."""

from __future__ import annotations

from typing import Mapping

from plts.architecture import Architecture
from plts.machine import TransitionSystem
from plts.synth.bounds import BoundFamily
from plts.synth.encode import delta_fun, label_fun


def decode_model(values: Mapping[str, int | bool], a: Architecture, bounds: BoundFamily
                 ) -> tuple[dict[str, TransitionSystem], list[str]]:
    """Per-process transition systems plus notes on defaulted points.

    Local state ``d`` of the encoding becomes state ``d - 1``.  Points the
    solver left undefined default to state 1 and to an absent output.
    """
    notes: list[str] = []
    systems = {}
    for p in a.processes:
        ins = tuple(sorted(a.inputs[p]))
        outs = tuple(sorted(a.outputs[p]))
        bp = bounds[p]
        delta, labels = [], []
        for d in range(1, bp + 1):
            row = []
            for c in range(1 << len(ins)):
                key = f"({delta_fun(p)} {d} {c})"
                v = values.get(key)
                if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= bp:
                    notes.append(f"{key} undefined, defaulted to 1")
                    v = 1
                row.append(v - 1)
            delta.append(row)
            lab = set()
            for o in outs:
                key = f"({label_fun(p, o)} {d})"
                v = values.get(key)
                if not isinstance(v, bool):
                    notes.append(f"{key} undefined, defaulted to false")
                    v = False
                if v:
                    lab.add(o)
            labels.append(lab)
        systems[p] = TransitionSystem(ins, outs, delta, labels, 0)
    return systems, notes


def encode_points(systems: Mapping[str, TransitionSystem]) -> dict[str, int | bool]:
    """Inverse of :func:`decode_model` on the defined points."""
    values: dict[str, int | bool] = {}
    for p, ts in systems.items():
        for s in ts.states:
            for c, t in enumerate(ts.delta[s]):
                values[f"({delta_fun(p)} {s + 1} {c})"] = t + 1
            for o in ts.outputs:
                values[f"({label_fun(p, o)} {s + 1})"] = o in ts.labels[s]
    return values
