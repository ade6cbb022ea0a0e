"""JSON strategy documents and CSV exports.

Floats are written with Python's shortest round-trip repr, so reading a
document back reproduces every coefficient bit for bit.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .analytic import compose_with_target
from .errors import DomainError
from .game import GameRule, GameSpec, TargetModel
from .strategies import (
    ClosedFormPir2,
    DiscreteStrategy,
    MappedStrategy,
    PointMass,
    SeriesStrategy,
    StrategyCdf,
    Uniform,
)

SCHEMA_VERSION = 1
DEFAULT_RESOLUTION = 512


class DocumentError(DomainError):
    """A strategy document or table could not be parsed."""


def _params(F: StrategyCdf) -> dict:
    if isinstance(F, ClosedFormPir2):
        return {}
    if isinstance(F, Uniform):
        return {"lo": F.lo, "hi": F.hi}
    if isinstance(F, PointMass):
        return {"x": F.lo}
    if isinstance(F, SeriesStrategy):
        return {
            "coefficients": F.coefficients.tolist(),
            "center": F.center,
            "scale": F.scale,
            "offset": F.offset,
            "lo": F.lo,
            "hi": F.hi,
        }
    if isinstance(F, DiscreteStrategy):
        return {"probabilities": F.probs.tolist(), "grid": F.grid.tolist()}
    raise DocumentError(f"cannot serialize {type(F).__name__}")


def _build(kind: str, params: dict) -> StrategyCdf:
    if kind == "closed_form_pir2":
        return ClosedFormPir2()
    if kind == "uniform":
        return Uniform(float(params["lo"]), float(params["hi"]))
    if kind == "point_mass":
        return PointMass(float(params["x"]))
    if kind == "series":
        return SeriesStrategy(
            [float(c) for c in params["coefficients"]],
            float(params["lo"]),
            float(params["hi"]),
            center=float(params.get("center", 0.0)),
            scale=float(params.get("scale", 1.0)),
            offset=float(params.get("offset", 0.0)),
        )
    if kind == "discrete":
        return DiscreteStrategy(params["probabilities"], params.get("grid"))
    raise DocumentError(f"unknown representation {kind!r}")


def sample_points(F: StrategyCdf, resolution: int = DEFAULT_RESOLUTION) -> list[list[float]]:
    """``(x, F(x))`` rows from lo to hi.

    Strategies with atoms get a leading ``(lo, F(lo-))`` row so the table
    starts at probability 0.
    """
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    xs = np.linspace(F.lo, F.hi, resolution) if F.hi > F.lo else np.array([F.lo])
    rows = [[float(x), float(F.cdf(x))] for x in xs]
    if len(F.atoms()[0]):
        rows.insert(0, [float(F.lo), 0.0])
    return rows


def strategy_document(F: StrategyCdf, game: GameSpec, resolution: int = DEFAULT_RESOLUTION, **extra) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "game": {"rule": game.rule.value, "players": game.players},
    }
    if isinstance(F, MappedStrategy):
        if not isinstance(F.forward.__self__, TargetModel):
            raise DocumentError("only strategies composed with a target table can be serialized")
        target = F.forward.__self__
        doc["representation"] = "composed"
        doc["base"] = {"representation": F.base.kind, "parameters": _params(F.base)}
        doc["target"] = [list(k) for k in target.knots]
    else:
        doc["representation"] = F.kind
        doc["parameters"] = _params(F)
    doc["support"] = [F.lo, F.hi]
    doc.update(extra)
    doc["samples"] = sample_points(F, resolution)
    return doc


def read_document(doc: dict) -> tuple[StrategyCdf, GameSpec, TargetModel]:
    """Strategy, game and target model described by a parsed document."""
    try:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")
        game = GameSpec(int(doc["game"]["players"]), GameRule.parse(doc["game"]["rule"]))
        kind = doc["representation"]
        if kind == "composed":
            base = _build(doc["base"]["representation"], doc["base"]["parameters"])
            target = TargetModel(tuple(tuple(map(float, row)) for row in doc["target"]))
            return compose_with_target(base, target), game, target
        return _build(kind, doc["parameters"]), game, TargetModel.uniform()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed strategy document: {exc}") from exc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc


def samples_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "F"])
    writer.writerows([repr(x), repr(f)] for x, f in rows)
    return buf.getvalue()


def trajectory_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iter", "i", "p_i", "v_i"])
    writer.writerows([it, i, repr(p), repr(v)] for it, i, p, v in rows)
    return buf.getvalue()


def read_target_table(text: str) -> TargetModel:
    """Two-column ``x,G`` CSV (header optional) as a target model."""
    rows = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].strip().startswith("#"):
            continue
        try:
            x, g = (float(v) for v in row[:2])
        except ValueError:
            if rows:
                raise DocumentError(f"bad target table row {row!r}") from None
            continue  # header
        rows.append((x, g))
    if len(rows) < 2:
        raise DocumentError("target table needs at least two rows")
    try:
        return TargetModel(tuple(rows))
    except DomainError as exc:
        raise DocumentError(str(exc)) from exc
