"""Valuation of λ_C, discriminant valuations and the hyperelliptic discriminant.

``λ_C`` is only defined up to a unit, so everything here is a valuation.
p is always odd, hence the factor ``2^(4g)`` in Δ never contributes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cluster import ClusterPicture
from .errors import InputError, ValidationError
from .exact import Q, check_prime, fmt, norm, val_p


@dataclass(frozen=True)
class LambdaResult:
    eight_v_lambda: Q
    v_lambda: Q
    integral: bool

    def as_dict(self):
        return {"eight_v_lambda": fmt(self.eight_v_lambda), "v_lambda": fmt(self.v_lambda),
                "integral": self.integral}


@dataclass(frozen=True)
class DiscResult:
    v_disc: Q
    hyperdisc_order: Q

    def as_dict(self):
        return {"v_disc": fmt(self.v_disc), "hyperdisc_order": fmt(self.hyperdisc_order)}


def _require_genus(P: ClusterPicture):
    if P.genus < 2:
        raise InputError(f"genus < 2 unsupported ({P.n} roots)")


def top_weight(n: int, g: int) -> int:
    """Coefficient of d_R: (|R|-2)|R| for even |R|, (|R|-1)^2 for odd."""
    return (n - 2) * n if n == 2 * g + 2 else (n - 1) ** 2


def cluster_weight(size: int) -> int:
    return (size - 2) * size if size % 2 == 0 else (size - 1) ** 2


def _inner_sum(P: ClusterPicture):
    total = 0
    for c in P.clusters:
        if c != P.top:
            total += P.rel_depth(c) * cluster_weight(P.size(c))
    return total


def lambda8(P: ClusterPicture) -> Q:
    """8·v(λ_C) from the cluster picture."""
    _require_genus(P)
    g = P.genus
    return norm(4 * g * P.vcf + _inner_sum(P) + P.d_R * top_weight(P.n, g))


def lambda_result(P: ClusterPicture) -> LambdaResult:
    l8 = lambda8(P)
    v = norm(Fraction(l8) / 8)
    return LambdaResult(l8, v, Fraction(v).denominator == 1)


def kausz_lambda8(P: ClusterPicture) -> Q:
    """The reduced sum over non-top clusters, valid when v(c_f) = 0, d_R = 0
    and |R| = 2g+2.

    For root-backed pictures the roots must also be integral with at least
    three distinct residues mod p.
    """
    _require_genus(P)
    if P.vcf != 0:
        raise ValidationError("reduced formula needs v(c_f) = 0")
    if P.d_R != 0:
        raise ValidationError("reduced formula needs d_R = 0")
    if P.n != 2 * P.genus + 2:
        raise ValidationError("reduced formula needs an even number of roots")
    if P.roots is not None and P.prime is not None:
        p = P.prime
        if any(val_p(r, p) < 0 for r in P.roots):
            raise ValidationError("reduced formula needs integral roots")
        residues = {Fraction(r).numerator * pow(Fraction(r).denominator, -1, p) % p
                    for r in P.roots}
        if len(residues) < 3:
            raise ValidationError("reduced formula needs at least three distinct residues")
    return norm(_inner_sum(P))


def disc_valuation_from_picture(P: ClusterPicture) -> Q:
    """v(Δ) = (4g+2)v(c_f) + d_R|R|(|R|-1) + Σ δ_S|S|(|S|-1)."""
    _require_genus(P)
    total = (4 * P.genus + 2) * P.vcf + P.d_R * P.n * (P.n - 1)
    for c in P.clusters:
        if c != P.top:
            s = P.size(c)
            total += P.rel_depth(c) * s * (s - 1)
    return norm(total)


def disc_valuation_from_roots(roots, c_f, p: int) -> Q:
    """v(Δ) directly from pairwise root differences."""
    p = check_prime(p)
    roots = [norm(r) for r in roots]
    if len(set(roots)) != len(roots):
        raise InputError("inseparable polynomial: duplicate roots")
    g = (len(roots) - 1) // 2
    vc = val_p(c_f, p)
    if g < 2:
        raise InputError("genus < 2 unsupported")
    pairs = sum(val_p(roots[i] - roots[j], p)
                for i in range(len(roots)) for j in range(i + 1, len(roots)))
    return norm((4 * g + 2) * vc + 2 * pairs)


def hyperdisc_order(P: ClusterPicture) -> Q:
    """ord(Λ) = g·v(Δ) - (8g+4)·v(λ_C)."""
    g = P.genus
    return norm(g * disc_valuation_from_picture(P) - Fraction(8 * g + 4, 8) * lambda8(P))


def disc_result(P: ClusterPicture) -> DiscResult:
    return DiscResult(disc_valuation_from_picture(P), hyperdisc_order(P))
