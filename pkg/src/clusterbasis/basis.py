"""Greedy choice of clusters s_0..s_{g-1} and the integral differentials μ_i."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .cluster import ClusterPicture, validate_integrality
from .errors import InputError, ValidationError
from .exact import Q, fmt, half, is_integral, norm


@dataclass(frozen=True)
class BasisStep:
    index: int
    cluster: int
    exponent: Q
    centre: object


@dataclass
class BasisResult:
    steps: list
    differentials: list  # (exponent, (centre of s_0, ..., centre of s_{i-1}))
    warnings: list = field(default_factory=list)
    trace: list = field(default_factory=list)  # per step: {cluster: objective}
    ties: int = 0  # steps where incomparable maximisers had to be broken

    @property
    def exponents(self) -> list:
        return [s.exponent for s in self.steps]

    @property
    def clusters(self) -> list:
        return [s.cluster for s in self.steps]

    def mu_text(self) -> list:
        return [format_differential(e, cs) for e, cs in self.differentials]


def format_differential(exponent, centres: Sequence) -> str:
    parts = []
    if exponent != 0:
        parts.append(f"p^{fmt(exponent)}" if exponent != 1 else "p")
    for z in centres:
        if isinstance(z, str):
            parts.append(f"(x-{z})")
        elif z < 0:
            parts.append(f"(x+{fmt(-z)})")
        else:
            parts.append(f"(x-{fmt(z)})")
    parts.append("dx/2y")
    return " * ".join(parts)


def _default_choice(P: ClusterPicture, candidates: list) -> int:
    return min(candidates, key=lambda c: (-P.size(c), min(P[c].leaves)))


def basis_sequence(P: ClusterPicture,
                   tie_break: Optional[Callable[[list], int]] = None,
                   check: bool = True, trace: bool = False) -> BasisResult:
    """Choose s_i maximising ν_S/2 - Σ_{j<i} d_{s_j∧S} - d_S over proper S.

    Among maximisers only those not contained in another maximiser are
    eligible.  Remaining ties go to ``tie_break`` if given, else to the
    larger cluster, then to the one holding the lowest root index.
    """
    g = P.genus
    if g < 2:
        raise InputError(f"genus < 2 unsupported ({P.n} roots)")
    if P.d_R < 0 or P.vcf < 0:
        raise ValidationError("non-integral equation: negative depth or v(c_f)")
    clusters, nodes = P.clusters, P.nodes
    # twice the objective keeps integer inputs in int arithmetic
    obj2 = {c: P.nu(c) - 2 * P.depth(c) for c in clusters}
    steps, diffs, trace_rows = [], [], []
    centres = []
    ties = 0
    for i in range(g):
        best = max(obj2.values())
        maximisers = [c for c in clusters if obj2[c] == best]
        if len(maximisers) > 1:
            maximisers = [c for c in maximisers
                          if not any(o != c and nodes[c].leaves <= nodes[o].leaves
                                     for o in maximisers)]
        if len(maximisers) == 1:
            s = maximisers[0]
        else:
            ties += 1
            s = (tie_break or (lambda ms: _default_choice(P, ms)))(maximisers)
        if trace:
            trace_rows.append({c: half(v) for c, v in obj2.items()})
        e = half(best)
        steps.append(BasisStep(i, s, e, P.centre(s)))
        diffs.append((e, tuple(centres)))
        centres.append(P.centre(s))
        for c in clusters:
            obj2[c] -= 2 * nodes[P.meet(s, c)].depth
    warnings = []
    for st in steps:
        if not is_integral(st.exponent):
            warnings.append(f"e_{st.index} = {fmt(st.exponent)} is not an integer")
    if check:
        warnings.extend(validate_integrality(P).problems)
    return BasisResult(steps, diffs, warnings, trace_rows, ties)


def gamma_counts(P: ClusterPicture, result: BasisResult) -> dict:
    """γ(S) = #{i : s_i ⊆ S} for every proper cluster S."""
    return {c: sum(1 for s in result.clusters if P.contains(c, s)) for c in P.clusters}


def gamma_expected(P: ClusterPicture, node: int) -> int:
    return (P.size(node) - 1) // 2


def step_objective(P: ClusterPicture, node: int, i: int, result: BasisResult) -> Q:
    """ν_S/2 - Σ_{j<i} d_{s_j∧S} - d_S."""
    total = P.nu(node) - 2 * P.depth(node)
    for s in result.clusters[:i]:
        total -= 2 * P.nodes[P.meet(s, node)].depth
    return half(total)


def vanishing_bound(P: ClusterPicture, node: int, i: int, result: BasisResult) -> Q:
    """Step-i objective for a principal cluster; e_i is at least this value."""
    if not P.is_principal(node):
        raise InputError("vanishing bound is defined for principal clusters only")
    if not 0 <= i < P.genus:
        raise InputError(f"step index {i} out of range")
    bound = step_objective(P, node, i, result)
    if result.exponents[i] < bound:
        raise ValidationError(
            f"e_{i} = {fmt(result.exponents[i])} is below the bound {fmt(bound)}")
    return bound
