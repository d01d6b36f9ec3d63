"""JSON-lines formats for graphs, complexes and chains.

Every file starts with a header object carrying ``"format"``; exact rationals
are written as "p/q" strings so that values survive a round trip unchanged.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .complexes import Chain, SComplex
from .graphs import SimpGraph
from .paircomplex import CombComplex2


class FormatError(ValueError):
    pass


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise FormatError("floating-point coefficients are not accepted; use 'p/q'")
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {s!r}") from None


def _read_lines(path):
    with open(path) as fh:
        rows = []
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: {exc.msg}") from None
    if not rows or "format" not in rows[0]:
        raise FormatError(f"{path}: missing header line")
    return rows[0], rows[1:]


def _write_lines(path, header, rows):
    with open(path, "w") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


# graphs


def write_graph(path, G: SimpGraph, heights=None, horoball_of=None):
    header = {"format": "relhyp-graph", "n": G.n, "boundary": sorted(G.boundary)}
    rows = []
    for v in range(G.n):
        row = {"v": v, "label": str(G.labels[v])}
        if heights is not None:
            row["h"] = heights[v]
        if horoball_of is not None and horoball_of[v] is not None:
            row["horoball"] = str(horoball_of[v])
        rows.append(row)
    rows.extend({"e": [u, v]} for u, v in G.edges())
    _write_lines(path, header, rows)


def read_graph(path) -> SimpGraph:
    header, rows = _read_lines(path)
    if header["format"] != "relhyp-graph":
        raise FormatError(f"{path}: not a graph file")
    n = int(header["n"])
    labels = list(range(n))
    heights = [0] * n
    has_h = False
    edges = []
    for row in rows:
        if "v" in row:
            v = row["v"]
            if not 0 <= v < n:
                raise FormatError(f"vertex id {v} out of range")
            labels[v] = row.get("label", v)
            if "h" in row:
                heights[v] = int(row["h"])
                has_h = True
        elif "e" in row:
            u, v = row["e"]
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"edge {row['e']} out of range")
            edges.append((u, v))
        else:
            raise FormatError(f"unrecognised row {row!r}")
    G = SimpGraph(labels, edges, header.get("boundary", []))
    if has_h:
        G.heights = heights
    return G


# complexes


def write_complex(path, K):
    if isinstance(K, SComplex):
        header = {"format": "relhyp-complex", "kappa": K.kappa, "d_max": K.d_max}
        rows = []
        if K.heights is not None:
            rows.extend({"v": s[0], "h": K.heights[s[0]]} for s in K.simplices(0))
        for k in range(K.dim + 1):
            rows.extend({"s": list(s)} for s in K.simplices(k))
        _write_lines(path, header, rows)
        return
    header = {"format": "relhyp-cellcomplex", "vertices": len(K.vertex_labels)}
    rows = [{"v": v, "label": str(lab)} for v, lab in enumerate(K.vertex_labels)]
    rows.extend({"edge": n, "tail": t, "head": h, "label": str(lab)} for n, (t, h, lab) in enumerate(K.edges))
    rows.extend({"face": n, "loop": [[e[1], s] for e, s in loop], "label": str(lab)}
                for n, (loop, lab) in enumerate(K.faces))
    _write_lines(path, header, rows)


def read_complex(path):
    header, rows = _read_lines(path)
    fmt = header["format"]
    if fmt == "relhyp-complex":
        layers = {}
        heights = {}
        for row in rows:
            if "s" in row:
                s = tuple(int(v) for v in row["s"])
                layers.setdefault(len(s) - 1, []).append(s)
            elif "v" in row:
                heights[int(row["v"])] = int(row["h"])
            else:
                raise FormatError(f"unrecognised row {row!r}")
        top = max(layers, default=-1)
        K = SComplex([layers.get(k, []) for k in range(top + 1)], kappa=header.get("kappa"),
                     d_max=header.get("d_max"))
        if heights:
            n = max(heights) + 1
            K.heights = [heights.get(v, 0) for v in range(n)]
        if not K.is_face_closed():
            raise FormatError(f"{path}: simplices are not closed under faces")
        return K
    if fmt == "relhyp-cellcomplex":
        K = CombComplex2()
        n = int(header["vertices"])
        for v in range(n):
            K.add_vertex(("v", v))
        for row in sorted((r for r in rows if "edge" in r), key=lambda r: r["edge"]):
            t, h = int(row["tail"]), int(row["head"])
            if not (0 <= t < n and 0 <= h < n):
                raise FormatError(f"edge {row['edge']} has endpoints out of range")
            K.add_edge(t, h, ("edge", row["edge"]))
        for row in sorted((r for r in rows if "face" in r), key=lambda r: r["face"]):
            loop = [(("e", int(e)), int(s)) for e, s in row["loop"]]
            K.add_face(loop, ("face", row["face"]))
            if not K.loop_is_closed(("f", len(K.faces) - 1)):
                raise FormatError(f"face {row['face']} has an open boundary loop")
        return K
    raise FormatError(f"{path}: unknown format {fmt!r}")


# chains


def _encode_key(key):
    if isinstance(key, tuple) and key and isinstance(key[0], str):
        return [key[0], key[1]]
    if isinstance(key, int):
        return [key]
    return list(key)


def _decode_key(raw, cellular):
    if cellular:
        if isinstance(raw, list) and len(raw) == 2 and isinstance(raw[0], str):
            return (raw[0], int(raw[1]))
        if isinstance(raw, list) and len(raw) == 1:
            return int(raw[0])
        raise FormatError(f"bad cell key {raw!r}")
    return tuple(int(v) for v in raw)


def chain_to_json(c: Chain) -> dict:
    terms = sorted(([_encode_key(k), frac_str(v)] for k, v in c.items()), key=lambda t: [(0, x) if isinstance(x, int) else (1, str(x)) for x in t[0]])
    return {"k": c.k, "terms": terms}


def chain_from_json(data, cellular=False) -> Chain:
    try:
        k = int(data["k"])
        terms = data["terms"]
    except (KeyError, TypeError, ValueError):
        raise FormatError("chain needs 'k' and 'terms'") from None
    out = Chain(k)
    for raw, val in terms:
        key = _decode_key(raw, cellular)
        if not cellular:
            from .complexes import _sort_sign

            key, sign = _sort_sign(key)
            out._add(key, sign * parse_frac(val))
        else:
            out._add(key, parse_frac(val))
    return out


def write_chain(path, c: Chain):
    with open(path, "w") as fh:
        json.dump(chain_to_json(c), fh, sort_keys=True)
        fh.write("\n")


def read_chain(path, cellular=False) -> Chain:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc.msg}") from None
    return chain_from_json(data, cellular)
