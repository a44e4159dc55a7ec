"""Text notation for abstract cluster pictures.

``(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0`` -- each ``*`` is a root, each
parenthesised group a proper cluster.  The outermost subscript is the
absolute depth of the top cluster; every inner subscript is a relative
depth.  ``v(c_f)`` is not part of the text and travels alongside it.
"""

from __future__ import annotations

import json
import re

from .cluster import ClusterPicture
from .errors import InputError
from .exact import fmt, norm, parse_p_expr, eval_p_expr, parse_rational, check_prime


class NotationError(InputError):
    def __init__(self, msg, text, pos):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:([()*])|_\s*([+-]?\d+(?:/\d+)?)|(\S))")


def _tokens(text):
    pos = 0
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            break
        pos = m.end()
        if m.group(1):
            yield m.group(1), None, m.start(1)
        elif m.group(2):
            yield "_", m.group(2), m.start(2)
        else:
            bad = m.group(3)
            what = "expected a rational depth after '_'" if bad == "_" else f"unexpected {bad!r}"
            raise NotationError(what, text, m.start(3))
    yield "end", None, len(text.rstrip())


class _Retry(Exception):
    pass


def _quick_tokens(text):
    """Token list without positions; None if any character is unexpected."""
    toks = []
    for sym, num, bad in _TOKEN.findall(text):
        if bad:
            return None
        toks.append((sym, None, 0) if sym else ("_", num, 0))
    toks.append(("end", None, 0))
    return toks


def _parse(text):
    """Recursive descent over the token stream; returns the nested tree."""
    toks = _quick_tokens(text)
    if toks is not None:
        try:
            return _parse_tokens(text, toks, quick=True)
        except _Retry:
            pass
    return _parse_tokens(text, list(_tokens(text)), quick=False)


def _parse_tokens(text, toks, quick):
    i = 0

    def fail(msg, k):
        if quick:  # redo with positions for the message
            raise _Retry
        raise NotationError(msg, text, toks[min(k, len(toks) - 1)][2])

    def cluster(top):
        nonlocal i
        i += 1  # '('
        items = []
        while True:
            kind = toks[i][0]
            if kind == ")":
                i += 1
                break
            if kind == "*":
                items.append(None)
                i += 1
            elif kind == "(":
                items.append(cluster(False))
            elif kind == "end":
                fail("unterminated cluster", i)
            else:
                fail("unexpected subscript", i)
        if len(items) < 2:
            fail("a cluster needs at least two items", i - 1)
        if toks[i][0] != "_":
            fail("expected '_' and a depth after ')'", i)
        depth = parse_rational(toks[i][1])
        if not top and depth <= 0:
            fail(f"relative depth must be positive, got {fmt(depth)}", i)
        i += 1
        return (depth, items)

    if toks[0][0] != "(":
        fail("expected '(' opening the top cluster", 0)
    tree = cluster(True)
    if toks[i][0] != "end":
        fail("trailing characters", i)
    return tree


def parse_picture(text: str, vcf=0) -> ClusterPicture:
    """Parse notation text into an abstract picture (roots numbered left to right)."""
    return ClusterPicture.from_nested(_parse(text), vcf=norm(vcf), relative=True)


def print_picture(P: ClusterPicture) -> str:
    """Canonical text: children by size desc, then relative depth desc, then text."""
    return P.canonical_text()


# --- JSON ----------------------------------------------------------------------


def picture_to_tree(P: ClusterPicture, node=None) -> dict:
    """Expanded tree form; depths follow the text convention (top absolute)."""
    node = P.top if node is None else node
    sub = P.d_R if node == P.top else P.rel_depth(node)
    children = [picture_to_tree(P, c) if P[c].is_proper else "*"
                for c in P.canonical_children(node)]
    return {"depth": fmt(sub), "children": children}


def _tree_to_nested(obj):
    if obj == "*" or obj is None:
        return None
    if not isinstance(obj, dict) or "children" not in obj or "depth" not in obj:
        raise InputError(f"bad tree node: {obj!r}")
    depth = norm(str(obj["depth"]))
    if len(obj["children"]) < 2:
        raise InputError("a cluster needs at least two children")
    return (depth, [_tree_to_nested(c) for c in obj["children"]])


def picture_to_json(P: ClusterPicture, tree: bool = False) -> dict:
    out = {"vcf": fmt(P.vcf), "picture": print_picture(P)}
    if tree:
        out["tree"] = picture_to_tree(P)
    return out


def picture_from_json(obj: dict, vcf=None) -> ClusterPicture:
    """Accepts ``{"vcf", "picture"}`` or ``{"vcf", "tree"}`` (or a bare tree)."""
    if not isinstance(obj, dict):
        raise InputError("picture JSON must be an object")
    v = norm(str(obj.get("vcf", 0))) if vcf is None else norm(vcf)
    if "picture" in obj:
        return parse_picture(obj["picture"], v)
    tree = obj.get("tree", obj if "children" in obj else None)
    if tree is None:
        raise InputError("picture JSON needs a 'picture' or 'tree' field")
    nested = _tree_to_nested(tree)
    if nested is None:
        raise InputError("top-level item must be a cluster")
    return ClusterPicture.from_nested(nested, vcf=v, relative=True)


def roots_from_json(obj: dict, p=None):
    """Decode ``{"p", "leading_coeff", "roots"}`` to ``(roots, c_f, p)``."""
    try:
        raw_p = int(obj["p"]) if p is None else p
        exprs = list(obj["roots"])
    except KeyError as exc:
        raise InputError(f"roots JSON is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad roots JSON: {exc}") from None
    prime = check_prime(raw_p)
    lead = obj.get("leading_coeff", "1")
    roots = [eval_p_expr(parse_p_expr(str(e)), prime) for e in exprs]
    c_f = eval_p_expr(parse_p_expr(str(lead)), prime)
    return roots, c_f, prime


def roots_to_json(roots, c_f, p) -> dict:
    return {"p": p, "leading_coeff": fmt(c_f), "roots": [fmt(r) for r in roots]}


def load_input(text: str, p=None, vcf=None):
    """Decode CLI input: roots JSON, picture JSON, or bare notation text.

    Returns ``("roots", (roots, c_f, p))`` or ``("picture", ClusterPicture)``.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        if "roots" in obj:
            return "roots", roots_from_json(obj, p)
        return "picture", picture_from_json(obj, vcf)
    return "picture", parse_picture(stripped, 0 if vcf is None else vcf)
