"""Enumerate small abstract cluster pictures and cross-check every identity
that ties the λ formula, the greedy basis and the transforms together.

All comparisons are exact.  A failure is recorded as data, never raised.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterator, Optional, Sequence

from .basis import basis_sequence, gamma_counts, gamma_expected
from .cluster import ClusterPicture
from .errors import InputError, ValidationError
from .exact import fmt, half
from .lambda_formula import kausz_lambda8, lambda8
from .notation import parse_picture, print_picture
from . import transforms as tf

DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class EnumSpec:
    max_roots: int = 8
    rel_depths: tuple = (1, 2, 3)
    d_R_set: tuple = (0, 1)
    vcf_set: tuple = (0, 2)
    seed: Optional[int] = None
    sample: Optional[int] = None
    cap: int = DEFAULT_CAP
    min_roots: int = 5


@dataclass(frozen=True)
class Failure:
    picture: str
    identity: str
    expected: str
    got: str

    def as_dict(self):
        return {"picture": self.picture, "identity": self.identity,
                "expected": self.expected, "got": self.got}


@dataclass
class CheckReport:
    pictures_checked: int = 0
    failures: list = field(default_factory=list)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "CheckReport"):
        self.pictures_checked += other.pictures_checked
        self.failures.extend(other.failures)

    def finish(self) -> "CheckReport":
        self.failures.sort(key=lambda f: (f.picture, f.identity))
        return self

    def as_dict(self):
        return {"pictures_checked": self.pictures_checked, "sampled": self.sampled,
                "ok": self.ok, "failures": [f.as_dict() for f in self.failures]}


# --- enumeration -----------------------------------------------------------------


def _partitions(k: int, largest: int):
    """Partitions of k into parts <= largest, parts non-increasing."""
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _contents(k: int, depths: tuple) -> tuple:
    """Distinct child multisets of a cluster with k roots (None = a root)."""
    pools = {1: (None,)}
    for m in range(2, k):
        pools[m] = tuple((d, c) for c in _contents(m, depths) for d in depths)
    out = []
    for part in _partitions(k, k - 1):
        counts = sorted(Counter(part).items(), reverse=True)
        choices = [combinations_with_replacement(pools[m], c) for m, c in counts]
        for combo in product(*choices):
            out.append(tuple(it for group in combo for it in group))
    return tuple(out)


def shapes(n: int, rel_depths: Sequence[int] = (1,)) -> tuple:
    """All decorated child multisets for a top cluster with n roots."""
    return _contents(n, tuple(sorted(set(rel_depths))))


def _grid(spec: EnumSpec):
    if spec.max_roots < 5:
        raise InputError("max_roots must be at least 5")
    if any(d <= 0 for d in spec.rel_depths):
        raise InputError("relative depths must be positive")
    blocks = []
    for n in range(max(spec.min_roots, 2), spec.max_roots + 1):
        blocks.append(shapes(n, spec.rel_depths))
    return blocks, tuple(spec.d_R_set), tuple(spec.vcf_set)


def count_pictures(spec: EnumSpec) -> int:
    blocks, drs, vcfs = _grid(spec)
    return sum(len(b) for b in blocks) * len(drs) * len(vcfs)


def _locate(blocks, drs, vcfs, idx):
    per = len(drs) * len(vcfs)
    for b in blocks:
        if idx < len(b) * per:
            return b[idx // per], drs[(idx % per) // len(vcfs)], vcfs[idx % len(vcfs)]
        idx -= len(b) * per
    raise IndexError(idx)


def _picture_at(blocks, drs, vcfs, idx):
    content, d_R, vcf = _locate(blocks, drs, vcfs, idx)
    return ClusterPicture.from_nested((d_R, content), vcf=vcf)


def _pictures(blocks, drs, vcfs, idxs):
    """Pictures at ``idxs``; grid neighbours of one shape share a single build."""
    base_content = base = None
    for i in idxs:
        content, d_R, vcf = _locate(blocks, drs, vcfs, i)
        if content is not base_content:
            base_content = content
            base = ClusterPicture.from_nested((0, content))
        P = tf.deepen(base, d_R) if d_R else base
        yield P.replace(vcf=vcf) if vcf else P


def enumerate_pictures(spec: EnumSpec) -> Iterator[ClusterPicture]:
    """Every picture on the grid, or a uniform sample when it exceeds the cap."""
    blocks, drs, vcfs = _grid(spec)
    total = sum(len(b) for b in blocks) * len(drs) * len(vcfs)
    k = spec.sample if spec.sample is not None else (spec.cap if total > spec.cap else None)
    if k is not None and k < total:
        idxs = sorted(random.Random(spec.seed).sample(range(total), k))
    else:
        idxs = range(total)
    yield from _pictures(blocks, drs, vcfs, idxs)


def is_sampled(spec: EnumSpec) -> bool:
    total = count_pictures(spec)
    k = spec.sample if spec.sample is not None else (spec.cap if total > spec.cap else None)
    return k is not None and k < total


# --- identities --------------------------------------------------------------------


def cross_validate(P: ClusterPicture, rng: Optional[random.Random] = None) -> list:
    """Run every identity on P and its transforms; returns a list of Failures."""
    text = print_picture(P)
    fails = []

    def expect(name, expected, got):
        if expected != got:
            fails.append(Failure(text, name, _s(expected), _s(got)))

    for c in P.clusters:
        expect("nu-remark", P.nu_direct(c), P.nu(c))

    # notation round trip
    again = parse_picture(text, P.vcf)
    expect("parse-print", P.structure(), again.structure())
    expect("print-idempotent", text, print_picture(again))

    if P.genus < 2:
        return fails
    l8 = lambda8(P)
    # the basis is only defined for integral equations
    if P.d_R >= 0 and P.vcf >= 0:
        _basis_checks(P, text, l8, expect, fails, rng)

    # λ-correction laws
    def law(spec, target=None):
        Q = tf.apply(P, spec)
        want, got = tf.predicted_lambda8_change(P, spec), lambda8(Q) - l8
        if want != got:
            if target is not None:
                spec = tf.TransformSpec(spec.kind, (P.path(target), spec.params[1]))
            fails.append(Failure(text, f"lambda-change[{spec}]", _s(want), _s(got)))

    law(tf.TransformSpec("deepen", (1,)))
    if P.n % 2 and Fraction(P.d_R).denominator == 1:
        law(tf.TransformSpec("add-root"))
    if P.n % 2 == 0:
        for S in P.children(P.top):
            if not P[S].is_proper:
                continue
            top_t = math.floor(P.rel_depth(S))  # largest integer t keeping δ_S >= 0
            for t in sorted({1, top_t} if top_t >= 1 else ()):
                law(tf.TransformSpec("redistribute", (S, t)), S)
    law(tf.TransformSpec("scale-leading", (1,)))

    if P.vcf == 0 and P.d_R == 0 and P.n % 2 == 0:
        try:
            expect("kausz", l8, kausz_lambda8(P))
        except ValidationError:
            pass  # root-backed picture outside the reduced formula's domain
    return fails


def _basis_checks(P, text, l8, expect, fails, rng):
    res = basis_sequence(P, check=False)
    e = res.exponents
    expect("sum-e", l8, 8 * sum(e))
    gam = gamma_counts(P, res)
    for c in P.clusters:
        if gam[c] != gamma_expected(P, c):
            expect(f"gamma[{P.path_label(c)}]", gamma_expected(P, c), gam[c])
    # doubled objectives, updated step by step
    obj2 = {c: P.nu(c) - 2 * P.depth(c) for c in P.clusters}
    for i, s in enumerate(res.clusters):
        top = 2 * e[i]
        for c, v in obj2.items():
            if v > top:
                fails.append(Failure(text, f"maximality[{i}]", f"<= {fmt(e[i])}", fmt(half(v))))
        if obj2[s] != top:
            expect(f"attained[{i}]", top, obj2[s])
        for c in obj2:
            obj2[c] -= 2 * P.depth(P.meet(s, c))
    if any(e[i] < e[i + 1] for i in range(len(e) - 1)):
        fails.append(Failure(text, "monotone-e", "non-increasing", " ".join(map(fmt, e))))

    if res.ties:
        rng = rng or random.Random(0)
        alt = basis_sequence(P, tie_break=rng.choice, check=False)
        expect("random-tie-sum-e", sum(e), sum(alt.exponents))
        expect("random-tie-gamma", gam, gamma_counts(P, alt))


def _s(x):
    if isinstance(x, (int, Fraction)):
        return fmt(x)
    return str(x)


def _check_chunk(args):
    spec, idxs = args
    blocks, drs, vcfs = _grid(spec)
    rep = CheckReport()
    rng = random.Random(spec.seed or 0)
    for P in _pictures(blocks, drs, vcfs, idxs):
        rep.pictures_checked += 1
        rep.failures.extend(cross_validate(P, rng))
    return rep


def run_check(spec: EnumSpec, jobs: int = 1) -> CheckReport:
    """Cross-validate every picture produced by ``enumerate_pictures(spec)``."""
    blocks, drs, vcfs = _grid(spec)
    total = sum(len(b) for b in blocks) * len(drs) * len(vcfs)
    sampled = is_sampled(spec)
    if sampled:
        k = spec.sample if spec.sample is not None else spec.cap
        idxs = sorted(random.Random(spec.seed).sample(range(total), k))
    else:
        idxs = list(range(total))
    report = CheckReport(sampled=sampled)
    if jobs <= 1:
        report.merge(_check_chunk((spec, idxs)))
    else:
        from concurrent.futures import ProcessPoolExecutor

        size = max(1, len(idxs) // (jobs * 8))
        chunks = [(spec, idxs[i:i + size]) for i in range(0, len(idxs), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_check_chunk, chunks):
                report.merge(part)
    return report.finish()
