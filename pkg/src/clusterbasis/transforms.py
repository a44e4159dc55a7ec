"""Cluster-picture manipulations and equation changes, each with the change
in 8·v(λ) it should cause.

Picture-level transforms (deepen, add-root, redistribute, scale-leading)
return abstract pictures.  ``rescale`` and ``shift`` act on root values and
rebuild the picture from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cluster import ClusterPicture, build_picture_from_roots
from .errors import InputError
from .exact import Q, fmt, norm, parse_rational
from .lambda_formula import top_weight


KINDS = ("deepen", "add-root", "redistribute", "scale-leading", "rescale", "shift")


@dataclass(frozen=True)
class TransformSpec:
    kind: str
    params: tuple = ()

    def __str__(self):
        if not self.params:
            return self.kind
        if self.kind == "rescale":
            return f"rescale:{self.params[0]},{self.params[1]}"
        if self.kind == "redistribute":
            path = "/".join(map(str, self.params[0])) or "R"
            return f"redistribute:{path}:{self.params[1]}"
        return f"{self.kind}:{fmt(self.params[0])}"


def _int(text, what):
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{what} must be an integer, got {text!r}") from None


def parse_op(text: str) -> TransformSpec:
    """Parse ``deepen:t``, ``add-root``, ``redistribute:<path>:t``,
    ``scale-leading:m``, ``rescale:t,s`` or ``shift:z``."""
    kind, _, rest = text.partition(":")
    if kind == "deepen":
        return TransformSpec(kind, (_int(rest, "t"),))
    if kind == "add-root":
        if rest:
            raise InputError("add-root takes no parameters")
        return TransformSpec(kind)
    if kind == "redistribute":
        path, _, t = rest.rpartition(":")
        if not path:
            raise InputError("redistribute needs <cluster-path>:t")
        steps = () if path == "R" else tuple(_int(x, "path step") for x in path.split("/"))
        return TransformSpec(kind, (steps, _int(t, "t")))
    if kind == "scale-leading":
        return TransformSpec(kind, (_int(rest, "m"),))
    if kind == "rescale":
        t, _, s = rest.partition(",")
        return TransformSpec(kind, (_int(t, "t"), _int(s, "s")))
    if kind == "shift":
        return TransformSpec(kind, (parse_rational(rest),))
    raise InputError(f"unknown transform {kind!r}; expected one of {', '.join(KINDS)}")


# --- picture-level -------------------------------------------------------------


def deepen(P: ClusterPicture, t: int) -> ClusterPicture:
    """Raise every depth by ``t``; relative depths and v(c_f) stay."""
    return P.deepened(t)


def add_root(P: ClusterPicture) -> ClusterPicture:
    """Attach one more root directly to the top cluster (|R| odd, d_R integral)."""
    if P.n % 2 == 0:
        raise InputError("add-root needs an odd number of roots")
    if Fraction(P.d_R).denominator != 1:
        raise InputError("add-root needs an integral top depth")
    d, items = P.to_nested()
    return ClusterPicture.from_nested((d, items + [P.n]), vcf=P.vcf, prime=P.prime)


def _with_rel(item, delta, out):
    """Append ``item`` with its relative depth changed by ``delta``; a cluster
    reaching relative depth 0 is dissolved into ``out``."""
    if isinstance(item, int):
        out.append(item)
        return
    rel, items = item
    rel += delta
    if rel > 0:
        out.append((rel, items))
    elif rel == 0:
        out.extend(items)
    else:
        raise InputError("transform would make a relative depth negative")


def redistribute(P: ClusterPicture, S: int, t: int) -> ClusterPicture:
    """Lower S (and everything inside it) by ``t`` and raise R∖S by ``t``.

    R∖S is created with relative depth 0 when it is not already a cluster.
    A cluster whose relative depth drops to 0 is removed and its children
    move up to the parent.
    """
    if S == P.top:
        raise InputError("cannot redistribute the top cluster")
    if P.parent(S) != P.top:
        raise InputError("redistribute needs a child of the top cluster")
    if not P[S].is_proper:
        raise InputError("redistribute needs a proper cluster")
    if P.n % 2:
        raise InputError("redistribute needs an even number of roots")
    d_R, items = P.to_nested()
    new_items, others = [], []
    for c, item in zip(P.children(P.top), items):
        if c == S:
            _with_rel(item, -t, new_items)
        else:
            others.append(item)
    if len(others) == 1:
        _with_rel(others[0], t, new_items)
    else:
        _with_rel((0, others), t, new_items)
    return ClusterPicture.from_nested((d_R, new_items), vcf=P.vcf, prime=P.prime)


def scale_leading(P: ClusterPicture, m: int) -> ClusterPicture:
    """Multiply c_f by π^(2m)."""
    return P.replace(vcf=P.vcf + 2 * m)


# --- equation-level ------------------------------------------------------------


def _require_roots(P):
    if P.roots is None or P.prime is None:
        raise InputError("this transform needs root values and a prime")


def _rebuild(roots, vcf, p):
    Q_ = build_picture_from_roots(roots, 1, p, min_roots=2)
    return Q_.replace(vcf=vcf)


def rescale_equation(P: ClusterPicture, t: int, s: int) -> ClusterPicture:
    """Substitute x = π^t x', y = π^s y': roots become r/π^t."""
    _require_roots(P)
    p = P.prime
    scale = Fraction(p) ** t
    roots = [norm(Fraction(r) / scale) for r in P.roots]
    return _rebuild(roots, P.vcf + t * P.n - 2 * s, p)


def shift(P: ClusterPicture, z) -> ClusterPicture:
    """Replace each root r by r + z; root differences are untouched."""
    _require_roots(P)
    z = norm(z)
    return _rebuild([norm(r + z) for r in P.roots], P.vcf, P.prime)


# --- predictions -----------------------------------------------------------------


def predicted_lambda8_change(P: ClusterPicture, spec: TransformSpec) -> Q:
    """Expected lambda8(result) - lambda8(P)."""
    n, g = P.n, P.genus
    k = spec.kind
    if k == "deepen":
        return spec.params[0] * top_weight(n, g)
    if k == "add-root":
        return norm(2 * P.d_R * (n - 1))
    if k == "redistribute":
        S = P.find_path(spec.params[0]) if isinstance(spec.params[0], tuple) else spec.params[0]
        return spec.params[1] * (n - 2) * (n - 2 * P.size(S))
    if k == "scale-leading":
        return 8 * g * spec.params[0]
    if k == "rescale":
        t, s = spec.params
        return 4 * g * (t * n - 2 * s) - t * top_weight(n, g)
    if k == "shift":
        return 0
    raise InputError(f"unknown transform {k!r}")


def apply(P: ClusterPicture, spec: TransformSpec) -> ClusterPicture:
    k = spec.kind
    if k == "deepen":
        return deepen(P, spec.params[0])
    if k == "add-root":
        return add_root(P)
    if k == "redistribute":
        target, t = spec.params
        S = P.find_path(target) if isinstance(target, tuple) else target
        return redistribute(P, S, t)
    if k == "scale-leading":
        return scale_leading(P, spec.params[0])
    if k == "rescale":
        return rescale_equation(P, *spec.params)
    if k == "shift":
        return shift(P, spec.params[0])
    raise InputError(f"unknown transform {k!r}")
