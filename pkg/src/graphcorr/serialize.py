"""JSON formats for words, elements and matrices used by the CLI.

A module element over a finite graph is a JSON object keyed by edge id
with ``[re, im]`` pairs, or a bare edge id as shorthand for its indicator;
circle elements carry per-component sample arrays.  A word is

    {"coeff": [re, im], "left": [element, ...],
     "middle": vertex-function-or-null, "right": [element, ...]}

and an algebra element is ``{"words": [word, ...]}`` (a bare word is also
accepted).
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import FormatError
from .modules import (element_from_dict, element_to_dict,
                      vertex_function_from_dict, vertex_function_to_dict)
from .toeplitz import ToeplitzElement, Word, word


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}") from None


def word_from_dict(graph, data: dict) -> Word:
    try:
        coeff = complex(*data.get("coeff", [1.0, 0.0]))
        left = tuple(element_from_dict(graph, x) for x in data.get("left", []))
        mid = data.get("middle")
        middle = None if mid is None else vertex_function_from_dict(graph, mid)
        right = tuple(element_from_dict(graph, y)
                      for y in data.get("right", []))
    except (TypeError, KeyError) as exc:
        raise FormatError(f"bad word JSON: {exc!r}") from None
    return word(coeff, left, middle, right)


def word_to_dict(w: Word) -> dict:
    return {"coeff": [w.coeff.real, w.coeff.imag],
            "left": [element_to_dict(x) for x in w.left],
            "middle": None if w.middle is None
            else vertex_function_to_dict(w.middle),
            "right": [element_to_dict(y) for y in w.right]}


def element_from_json(graph, data) -> ToeplitzElement:
    if isinstance(data, dict) and "words" in data:
        words = [word_from_dict(graph, w) for w in data["words"]]
    elif isinstance(data, dict):
        words = [word_from_dict(graph, data)]
    else:
        raise FormatError("element JSON must be an object")
    return ToeplitzElement(graph, words)


def element_to_json(elem: ToeplitzElement) -> dict:
    return {"words": [word_to_dict(w) for w in elem.words]}


def matrix_from_json(data) -> np.ndarray:
    try:
        rows = []
        for row in data:
            rows.append([complex(c[0], c[1]) if isinstance(c, (list, tuple))
                         else complex(c) for c in row])
        return np.array(rows, dtype=np.complex128)
    except (TypeError, IndexError) as exc:
        raise FormatError(f"bad matrix JSON: {exc!r}") from None


def digest_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()[:16]
