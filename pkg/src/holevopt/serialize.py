"""JSON fixtures for channels and ensembles, and deterministic CSV output.

Complex entries are stored as [re, im] pairs so fixtures round-trip exactly.
CSV files use a header row, UTF-8, "\\n" line endings, and floats printed
with 12 significant digits.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .channel import KrausChannel
from .errors import ValidationError
from .states import Ensemble


def format_float(x) -> str:
    return format(float(x), ".12g")


def format_value(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format_float(x)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(x) for x in row])


def save_json(obj, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


def load_json(path):
    with Path(path).open("r", encoding="utf-8") as f:
        return json.load(f)


def matrix_to_pairs(a) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_pairs(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def channel_to_dict(ch: KrausChannel) -> dict:
    return {
        "type": "kraus_channel",
        "input_dim": ch.input_dim,
        "output_dim": ch.output_dim,
        "kraus_rank": ch.kraus_rank,
        "operators": [matrix_to_pairs(op) for op in ch.operators],
    }


def channel_from_dict(d: dict) -> KrausChannel:
    if d.get("type") != "kraus_channel":
        raise ValidationError(f"not a channel fixture: type={d.get('type')!r}")
    ops = np.stack([matrix_from_pairs(op) for op in d["operators"]])
    ch = KrausChannel(ops)
    if (ch.input_dim, ch.output_dim, ch.kraus_rank) != (
        d["input_dim"],
        d["output_dim"],
        d["kraus_rank"],
    ):
        raise ValidationError("channel fixture dims disagree with its operators")
    return ch


def ensemble_to_dict(e: Ensemble) -> dict:
    return {
        "type": "ensemble",
        "dim": e.dim,
        "num_states": e.num_states,
        "probabilities": [float(p) for p in e.probabilities],
        "states": [matrix_to_pairs(x) for x in e.states],
    }


def ensemble_from_dict(d: dict) -> Ensemble:
    if d.get("type") != "ensemble":
        raise ValidationError(f"not an ensemble fixture: type={d.get('type')!r}")
    states = tuple(matrix_from_pairs(x) for x in d["states"])
    e = Ensemble(np.array(d["probabilities"], dtype=float), states)
    if (e.dim, e.num_states) != (d["dim"], d["num_states"]):
        raise ValidationError("ensemble fixture dims disagree with its states")
    return e


def save_channel(ch: KrausChannel, path) -> None:
    save_json(channel_to_dict(ch), path)


def load_channel(path) -> KrausChannel:
    return channel_from_dict(load_json(path))


def save_ensemble(e: Ensemble, path) -> None:
    save_json(ensemble_to_dict(e), path)


def load_ensemble(path) -> Ensemble:
    return ensemble_from_dict(load_json(path))
