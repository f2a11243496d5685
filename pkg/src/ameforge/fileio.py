"""Readers and writers for state, matrix, code and grid files."""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .codes import Code, format_word, parse_word
from .errors import DomainError
from .multiunitary import IndexedMatrix
from .state import PureState


def state_to_json(state: PureState) -> dict[str, Any]:
    """JSON-ready dict with terms sorted by big-endian ket index."""
    return {
        "num_parties": state.num_parties,
        "local_dim": state.local_dim,
        "terms": [
            {"ket": [int(s) for s in ket], "re": float(a.real), "im": float(a.imag)}
            for ket, a in zip(state.kets, state.amplitudes)
        ],
    }


def state_from_json(data: dict[str, Any]) -> PureState:
    try:
        n, d = int(data["num_parties"]), int(data["local_dim"])
        terms = [(tuple(t["ket"]), complex(float(t["re"]), float(t["im"]))) for t in data["terms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed state file: {exc}") from exc
    return PureState.from_terms(n, d, terms)


def matrix_to_json(m: IndexedMatrix) -> dict[str, Any]:
    return {
        "local_dim": m.local_dim,
        "half_order": m.half_order,
        "rows": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in m.entries],
    }


def matrix_from_json(data: dict[str, Any]) -> IndexedMatrix:
    try:
        d, k = int(data["local_dim"]), int(data["half_order"])
        rows = [[complex(float(z["re"]), float(z["im"])) for z in row] for row in data["rows"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix file: {exc}") from exc
    if len({len(r) for r in rows}) > 1:
        raise DomainError("matrix rows have different lengths")
    return IndexedMatrix(d, k, np.array(rows, dtype=complex))


def dump_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=1) + "\n"


def parse_json(text: str) -> dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("expected a JSON object")
    return data


def load_object(text: str) -> PureState | IndexedMatrix:
    """Parse either file format, telling them apart by their keys."""
    data = parse_json(text)
    if "rows" in data:
        return matrix_from_json(data)
    return state_from_json(data)


def code_to_text(code: Code) -> str:
    return "".join(format_word(w, code.alphabet) + "\n" for w in code.words)


def code_from_text(text: str, alphabet: int | None = None) -> Code:
    """One word per line; '#' starts a comment.  The alphabet defaults to max letter + 1."""
    words = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                words.append(parse_word(line))
            except ValueError as exc:
                raise DomainError(f"bad code word {line!r}") from exc
    if not words:
        raise DomainError("no code words found")
    if alphabet is None:
        alphabet = max(max(w) for w in words) + 1
    return Code.from_words(words, alphabet)


def grid_to_text(grid: np.ndarray) -> str:
    return "".join(" ".join(str(int(x)) for x in row) + "\n" for row in np.asarray(grid))


def grid_from_text(text: str) -> np.ndarray:
    """Whitespace-separated symbols, or unseparated digits, one row per line."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split() if (" " in line or "\t" in line) else list(line)
        try:
            rows.append([int(p) for p in parts])
        except ValueError as exc:
            raise DomainError(f"bad grid row {line!r}") from exc
    if not rows or len({len(r) for r in rows}) > 1:
        raise DomainError("grid rows are missing or of unequal length")
    return np.array(rows, dtype=np.int64)
