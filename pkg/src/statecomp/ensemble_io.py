"""Reading ensembles from JSON documents.

Layout::

    {
      "dim": 2,
      "priors": [0.5, 0.5],
      "pure": true,
      "states": [[[1, 0], [0, 0]], [[0.6, 0], [0, 0.8]]]
    }

Pure states are vectors of ``dim`` entries.  Mixed states (``pure`` absent
or false) are matrices, either as ``dim`` rows of ``dim`` entries or as a
flat row-major list of ``dim * dim`` entries.  An entry is a ``[re, im]``
pair or a plain real number.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .ensemble import Ensemble, MixedEnsemble, PureEnsemble
from .errors import ValidationError


class EnsembleFileError(ValidationError):
    """Malformed ensemble document; the message names the offending field."""


def _entry(x: Any, where: str) -> complex:
    if isinstance(x, bool):
        raise EnsembleFileError(f"{where}: expected a number or [re, im], got {x!r}")
    if isinstance(x, (int, float)):
        return complex(x, 0.0)
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise EnsembleFileError(f"{where}: expected a number or [re, im], got {x!r}")


def _vector(x: Any, dim: int, where: str) -> np.ndarray:
    if not isinstance(x, list) or len(x) != dim:
        raise EnsembleFileError(f"{where}: expected a list of {dim} entries")
    return np.array([_entry(v, f"{where}[{k}]") for k, v in enumerate(x)])


def _matrix(x: Any, dim: int, where: str) -> np.ndarray:
    if not isinstance(x, list):
        raise EnsembleFileError(f"{where}: expected a matrix")
    flat = len(x) == dim * dim and (dim > 1 or not (isinstance(x[0], list) and len(x[0]) == 1))
    if flat:
        return _vector(x, dim * dim, where).reshape(dim, dim)
    if len(x) != dim:
        raise EnsembleFileError(f"{where}: expected {dim} rows or {dim * dim} row-major entries")
    return np.array([_vector(row, dim, f"{where}[{r}]") for r, row in enumerate(x)])


def parse_ensemble(doc: Any) -> Ensemble:
    if not isinstance(doc, dict):
        raise EnsembleFileError("top level: expected an object")
    for key in ("dim", "priors", "states"):
        if key not in doc:
            raise EnsembleFileError(f"missing field '{key}'")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise EnsembleFileError(f"dim: expected a positive integer, got {dim!r}")
    priors = doc["priors"]
    if not isinstance(priors, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in priors):
        raise EnsembleFileError("priors: expected a list of numbers")
    states = doc["states"]
    if not isinstance(states, list):
        raise EnsembleFileError("states: expected a list")
    if len(states) != len(priors):
        raise EnsembleFileError(f"states: {len(states)} states but {len(priors)} priors")
    pure = doc.get("pure", False)
    if not isinstance(pure, bool):
        raise EnsembleFileError("pure: expected true or false")
    try:
        if pure:
            vecs = [_vector(s, dim, f"states[{i}]") for i, s in enumerate(states)]
            return PureEnsemble(vecs, priors)
        mats = [_matrix(s, dim, f"states[{i}]") for i, s in enumerate(states)]
        return MixedEnsemble(mats, priors)
    except EnsembleFileError:
        raise
    except ValidationError as exc:
        raise EnsembleFileError(f"states/priors: {exc}") from exc


def loads(text: str) -> Ensemble:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EnsembleFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_ensemble(doc)


def load(path) -> Ensemble:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise EnsembleFileError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def _pairs(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def dumps(ens: Ensemble) -> str:
    if isinstance(ens, PureEnsemble):
        states = [_pairs(v) for v in ens.states]
    else:
        states = [[_pairs(row) for row in m] for m in ens.states]
    doc = {"dim": ens.dim, "priors": [float(p) for p in ens.priors],
           "pure": isinstance(ens, PureEnsemble), "states": states}
    return json.dumps(doc, indent=2)
