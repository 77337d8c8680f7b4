"""Lookup into the shipped twist atlas data file.

The data file carries one record per twist (rank, projective coordinates,
differential term list, name, dual, deformation arrows) plus the deformation
graph between the named square-zero supercharges.
"""

from __future__ import annotations

import json
from importlib import resources

from .scalars import Scalar, parse_scalar
from .susy import INFINITY, KWPoint, RankType

DIFF_SYMBOLS = {
    "dbar": "∂̄",
    "partial": "∂",
    "d_z1": "∂_{z₁}",
    "d_z2": "∂_{z₂}",
    "dbar_z1": "∂̄_{z₁}",
    "dbar_z2": "∂̄_{z₂}",
    "d_eps": "∂_ε",
}

_CACHE = None


def load_atlas() -> dict:
    global _CACHE
    if _CACHE is None:
        text = resources.files("twistbv").joinpath("data/atlas.json").read_text()
        _CACHE = json.loads(text)
    return _CACHE


def parse_coordinate(text):
    """Atlas coordinate field -> Scalar, INFINITY, symbolic name, or None."""
    if text is None:
        return None
    if text == "infinity":
        return INFINITY
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError):
        return text  # symbolic family parameter such as "t"


def row_point(row):
    """KWPoint of a numeric atlas row, or None for families / rankless rows."""
    wp = parse_coordinate(row["w_plus"])
    wm = parse_coordinate(row["w_minus"])
    if wp is None or wm is None or isinstance(wp, str) or isinstance(wm, str):
        return None
    return KWPoint(wp, wm)


def alias_point(name) -> KWPoint:
    """Coordinates of a named twist, resolving antipodal aliases."""
    atlas = load_atlas()
    for row in atlas["twists"]:
        if row["kw_name"] == name or row["id"] == name:
            p = row_point(row)
            if p is None:
                raise KeyError("twist %r has no fixed coordinates" % name)
            return p
    alias = atlas["aliases"].get(name)
    if alias is None:
        raise KeyError("unknown twist name %r" % name)
    return KWPoint(parse_coordinate(alias["w_plus"]),
                   parse_coordinate(alias["w_minus"]))


def differential_text(terms) -> str:
    parts = []
    for coeff, primitive in terms:
        sym = DIFF_SYMBOLS[primitive]
        if coeff == "1":
            piece = sym
        elif coeff == "-1":
            piece = "-" + sym
        elif any(op in coeff for op in "+-") and not coeff.startswith("-"):
            piece = "(%s)%s" % (coeff, sym)
        else:
            piece = coeff + sym
        parts.append(piece)
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " − " + piece[1:]
        else:
            out += " + " + piece
    return out


def _decorate(row):
    out = dict(row)
    out["differential_text"] = differential_text(row["differential"])
    return out


def twist_atlas_lookup(key):
    """Atlas row for a twist label, KWPoint, RankType, or graph node id.

    String keys match ids and names, or the combined form
    '(p,q) at (w+,w-)'.  Ambiguous rank keys raise with the candidates.
    """
    atlas = load_atlas()
    rows = atlas["twists"]
    if isinstance(key, str):
        key = key.strip()
        for row in rows:
            if key in (row["id"], row["kw_name"]):
                return _decorate(row)
        for node in atlas["deformation_graph"]:
            if node["id"] == key:
                return _decorate(node)
        combo = _parse_combo(key)
        if combo is not None:
            rank_pair, point = combo
            for row in rows:
                if tuple(row["rank"]) == rank_pair and row_point(row) == point:
                    return _decorate(row)
        raise KeyError("unknown atlas key %r" % key)
    if isinstance(key, KWPoint):
        for row in rows:
            if row_point(row) == key:
                return _decorate(row)
        raise KeyError("no atlas row at %r" % key)
    if isinstance(key, RankType) or (isinstance(key, tuple) and len(key) == 2):
        pq = (key.p, key.q) if isinstance(key, RankType) else tuple(key)
        hits = [row for row in rows if tuple(row["rank"]) == pq]
        if len(hits) == 1:
            return _decorate(hits[0])
        if not hits:
            raise KeyError("no atlas row of rank %r" % (pq,))
        raise KeyError("rank %r is ambiguous; candidates: %s"
                       % (pq, ", ".join(r["id"] for r in hits)))
    raise KeyError("unsupported atlas key %r" % (key,))


def _parse_combo(text):
    """Parse '(p,q) at (w+,w-)' into ((p, q), KWPoint)."""
    if " at " not in text:
        return None
    rank_part, point_part = text.split(" at ", 1)
    rank_part = rank_part.strip().strip("()")
    point_part = point_part.strip().strip("()")
    try:
        p, q = (int(x) for x in rank_part.split(","))
        wp_text, wm_text = (x.strip() for x in point_part.split(","))
    except ValueError:
        return None
    def coord(t):
        return INFINITY if t in ("infinity", "inf") else parse_scalar(t)
    return (p, q), KWPoint(coord(wp_text), coord(wm_text))
