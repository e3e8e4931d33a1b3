"""Text and JSON readers/writers for k-graphs, digraphs and graph families.

Text format::

    # comment
    kgraph k=2 n=4
    0 1
    1 2

``digraph m=<m> n=<n>`` works the same way with ordered tuples, and
``family k=<k> n=<n> colors=<l>`` is followed by ``color <j>`` blocks.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .core import Digraph, KGraph
from .errors import InputError


def _tokens(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _header_fields(words, expected):
    fields = {}
    for w in words[1:]:
        if "=" not in w:
            raise InputError(f"malformed header field {w!r}")
        key, val = w.split("=", 1)
        try:
            fields[key] = int(val)
        except ValueError:
            raise InputError(f"header field {key} must be an integer") from None
    missing = [k for k in expected if k not in fields]
    if missing:
        raise InputError(f"header missing {', '.join(missing)}")
    return fields


def _ints(words):
    try:
        return tuple(int(w) for w in words)
    except ValueError:
        raise InputError(f"non-integer vertex in {' '.join(words)!r}") from None


def parse_text(text):
    """Parse a kgraph, digraph or family from its text form."""
    lines = list(_tokens(text))
    if not lines:
        raise InputError("empty input")
    kind = lines[0][0]
    if kind == "kgraph":
        h = _header_fields(lines[0], ("k", "n"))
        edges = [_ints(w) for w in lines[1:]]
        return KGraph(h["k"], h["n"], frozenset(edges))
    if kind == "digraph":
        h = _header_fields(lines[0], ("m", "n"))
        edges = [_ints(w) for w in lines[1:]]
        if len(set(edges)) != len(edges):
            raise InputError("duplicate digraph edge")
        return Digraph(h["m"], h["n"], frozenset(edges))
    if kind == "family":
        from .homlift import GraphFamily

        h = _header_fields(lines[0], ("k", "n", "colors"))
        blocks, current = [], None
        for words in lines[1:]:
            if words[0] == "color":
                current = []
                blocks.append(current)
            elif current is None:
                raise InputError("edge before first 'color' line")
            else:
                current.append(_ints(words))
        if len(blocks) != h["colors"]:
            raise InputError(f"expected {h['colors']} color blocks, got {len(blocks)}")
        return GraphFamily(tuple(KGraph(h["k"], h["n"], frozenset(b)) for b in blocks))
    raise InputError(f"unknown header {kind!r}")


def to_text(obj):
    from .homlift import GraphFamily

    if isinstance(obj, KGraph):
        head = f"kgraph k={obj.k} n={obj.n}"
        body = [" ".join(map(str, e)) for e in obj.sorted_edges()]
    elif isinstance(obj, Digraph):
        head = f"digraph m={obj.m} n={obj.n}"
        body = [" ".join(map(str, e)) for e in obj.sorted_edges()]
    elif isinstance(obj, GraphFamily):
        g0 = obj.graphs[0]
        head = f"family k={g0.k} n={g0.n} colors={len(obj.graphs)}"
        body = []
        for j, g in enumerate(obj.graphs, start=1):
            body.append(f"color {j}")
            body.extend(" ".join(map(str, e)) for e in g.sorted_edges())
    else:
        raise InputError(f"cannot serialise {type(obj).__name__}")
    return "\n".join([head] + body) + "\n"


def to_json_obj(obj):
    from .homlift import GraphFamily

    if isinstance(obj, KGraph):
        return {"type": "kgraph", "k": obj.k, "n": obj.n,
                "edges": [list(e) for e in obj.sorted_edges()]}
    if isinstance(obj, Digraph):
        return {"type": "digraph", "m": obj.m, "n": obj.n,
                "edges": [list(e) for e in obj.sorted_edges()]}
    if isinstance(obj, GraphFamily):
        g0 = obj.graphs[0]
        return {"type": "family", "k": g0.k, "n": g0.n,
                "colors": [[list(e) for e in g.sorted_edges()] for g in obj.graphs]}
    raise InputError(f"cannot serialise {type(obj).__name__}")


def from_json_obj(data):
    from .homlift import GraphFamily

    try:
        kind = data["type"]
        if kind == "kgraph":
            return KGraph(int(data["k"]), int(data["n"]),
                          frozenset(tuple(e) for e in data["edges"]))
        if kind == "digraph":
            return Digraph(int(data["m"]), int(data["n"]),
                           frozenset(tuple(e) for e in data["edges"]))
        if kind == "family":
            k, n = int(data["k"]), int(data["n"])
            return GraphFamily(tuple(KGraph(k, n, frozenset(tuple(e) for e in c))
                                     for c in data["colors"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed JSON instance: {exc}") from None
    raise InputError(f"unknown type {data.get('type')!r}")


def dumps(data):
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def pretty(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def read_instance(path):
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            return from_json_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in {path}: {exc}") from None
    return parse_text(text)


def write_instance(obj, path, fmt="text"):
    text = pretty(to_json_obj(obj)) if fmt == "json" else to_text(obj)
    Path(path).write_text(text)


def instance_hash(obj):
    """sha256 of the canonical JSON form."""
    return hashlib.sha256(dumps(to_json_obj(obj)).encode()).hexdigest()


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None
