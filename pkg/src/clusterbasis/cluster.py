"""Cluster pictures: the tree of p-adic root clusters with depths.

Node ids are plain ints.  Roots (singleton clusters) occupy ids
``0 .. n-1`` so that a root's id equals its input index; proper clusters
follow in preorder, the top cluster ``R`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InputError
from .exact import Q, check_prime, fmt, norm, val_p


class ClusterNode(NamedTuple):
    id: int
    parent: Optional[int]
    children: tuple
    leaves: frozenset
    depth: Optional[Q]  # None for singletons

    @property
    def size(self) -> int:
        return len(self.leaves)

    @property
    def is_proper(self) -> bool:
        return len(self.leaves) >= 2


class ClusterPicture:
    """Immutable cluster picture of a (possibly abstract) set of roots.

    Build one with :meth:`from_nested` or :func:`build_picture_from_roots`.
    Equality compares the tree shape, depths and ``vcf``; root values and
    the prime are ignored.
    """

    __slots__ = (
        "nodes", "top", "vcf", "prime", "roots", "n", "genus", "clusters",
        "_level", "_nu", "_rel", "_canon", "_labels",
    )

    def __init__(self, nodes: Sequence[ClusterNode], top: int, vcf=0,
                 prime: Optional[int] = None, roots: Optional[Sequence] = None,
                 _trusted: bool = False):
        self.nodes = tuple(nodes)
        self.top = top
        self.vcf = norm(vcf)
        self.prime = check_prime(prime) if prime is not None else None
        self.n = len(self.nodes[top].leaves)
        self.roots = tuple(norm(r) for r in roots) if roots is not None else None
        if self.roots is not None and len(self.roots) != self.n:
            raise InputError("number of root values does not match the picture")
        self.genus = (self.n - 1) // 2
        self.clusters = tuple(range(self.n, len(self.nodes)))
        if not _trusted:
            self._check()
        nodes = self.nodes
        level = [0] * len(nodes)
        nu, rel = {}, {}
        vcf = self.vcf
        for c in self.clusters:  # preorder: parents first
            nd = nodes[c]
            par = nd.parent
            if par is None:
                nu[c] = vcf + nd.depth * len(nd.leaves)
            else:
                level[c] = level[par] + 1
                r = rel[c] = nd.depth - nodes[par].depth
                nu[c] = nu[par] + r * len(nd.leaves)
        for i in range(self.n):
            par = nodes[i].parent
            if par is not None:
                level[i] = level[par] + 1
        self._level = level
        if not all(type(v) is int for v in nu.values()):
            nu = {c: norm(v) for c, v in nu.items()}
            rel = {c: norm(v) for c, v in rel.items()}
        self._nu = nu
        self._rel = rel
        self._canon = None
        self._labels = {}

    def _check(self):
        if self.n < 2:
            raise InputError("a cluster picture needs at least two roots")
        if self.top != self.n:
            raise InputError("the top cluster must directly follow the roots")
        if self.nodes[self.top].parent is not None:
            raise InputError("top cluster has a parent")
        if sorted(self.nodes[self.top].leaves) != list(range(self.n)):
            raise InputError("root indices must be 0..n-1")
        nodes = self.nodes
        for k, nd in enumerate(nodes):
            if nd.id != k:
                raise InputError("node ids must match their positions")
            if k < self.n:
                if len(nd.leaves) != 1 or k not in nd.leaves or nd.children:
                    raise InputError(f"node {k} should be a root")
                continue
            if len(nd.children) < 2:
                raise InputError("every proper cluster needs at least two children")
            if k != self.top and (nd.parent is None or nd.parent >= k):
                raise InputError("clusters must be listed parents first")
            kids = [nodes[c] for c in nd.children]
            if (sum(len(ch.leaves) for ch in kids) != len(nd.leaves)
                    or frozenset().union(*(ch.leaves for ch in kids)) != nd.leaves):
                raise InputError("children do not partition their parent's roots")
            for ch in kids:
                if ch.parent != k:
                    raise InputError("inconsistent parent links")
                if ch.depth is not None and not ch.depth > nd.depth:
                    raise InputError(
                        f"child depth {fmt(ch.depth)} must exceed parent depth {fmt(nd.depth)}")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_nested(cls, tree, vcf=0, relative: bool = True,
                    prime: Optional[int] = None, roots=None) -> "ClusterPicture":
        """Build from ``(depth, [item, ...])`` where an item is a root or a
        nested cluster tuple.

        A root is an int (its index) or ``None`` (numbered left to right).
        The top depth is absolute; nested depths are relative to the parent
        when ``relative`` is true, absolute otherwise.
        """
        depths, parents, kids = [], [], []  # per proper cluster, preorder
        leaf_parent = {}
        auto = 0

        def walk(node, parent_slot, parent_depth):
            nonlocal auto
            depth, items = node
            if type(depth) is not int:
                depth = norm(depth)
            if parent_slot is not None:
                if relative:
                    if depth <= 0:
                        raise InputError(f"relative depth must be positive, got {fmt(depth)}")
                    depth = parent_depth + depth
                elif depth <= parent_depth:
                    raise InputError(
                        f"child depth {fmt(depth)} must exceed parent depth {fmt(parent_depth)}")
            if len(items) < 2:
                raise InputError("every proper cluster needs at least two children")
            slot = len(depths)
            depths.append(depth)
            parents.append(parent_slot)
            mine = []
            kids.append(mine)
            for it in items:
                if it is None or type(it) is int:
                    idx = auto if it is None else it
                    auto += 1
                    if idx in leaf_parent:
                        raise InputError(f"root index {idx} used twice")
                    leaf_parent[idx] = slot
                    mine.append(idx)
                else:
                    mine.append(~walk(it, slot, depth))
            return slot

        walk(tree, None, None)
        n = len(leaf_parent)
        if max(leaf_parent) != n - 1 or min(leaf_parent) != 0:
            raise InputError("root indices must be 0..n-1")
        m = len(depths)
        leaves = [None] * m
        for k in range(m - 1, -1, -1):  # children come after their parent
            acc = set()
            for x in kids[k]:
                if x >= 0:
                    acc.add(x)
                else:
                    acc |= leaves[~x]
            leaves[k] = frozenset(acc)
        mk = tuple.__new__
        nodes = [mk(ClusterNode, (i, n + leaf_parent[i], (), frozenset((i,)), None))
                 for i in range(n)]
        for k in range(m):
            p = parents[k]
            nodes.append(mk(ClusterNode, (n + k, None if p is None else n + p,
                                          tuple(x if x >= 0 else n + ~x for x in kids[k]),
                                          leaves[k], depths[k])))
        return cls(nodes, n, vcf=vcf, prime=prime, roots=roots, _trusted=True)

    def to_nested(self, node: Optional[int] = None, relative: bool = True):
        """Inverse of :meth:`from_nested` (roots as their indices)."""
        node = self.top if node is None else node
        nd = self.nodes[node]
        if node == self.top or not relative:
            d = nd.depth
        else:
            d = self.rel_depth(node)
        items = [c if c < self.n else self.to_nested(c, relative) for c in nd.children]
        return (d, items)

    def replace(self, **kw) -> "ClusterPicture":
        """Copy with some of ``vcf``, ``prime``, ``roots`` changed."""
        args = dict(vcf=self.vcf, prime=self.prime, roots=self.roots)
        args.update(kw)
        if set(kw) == {"vcf"}:
            vcf = norm(kw["vcf"])
            return self._derived(self.nodes, vcf, vcf - self.vcf)
        return ClusterPicture(self.nodes, self.top, _trusted=True, **args)

    def _derived(self, nodes, vcf, dnu) -> "ClusterPicture":
        """Same tree shape and relative depths; every ν shifts by ``dnu``."""
        Q_ = object.__new__(ClusterPicture)
        Q_.nodes, Q_.top, Q_.vcf, Q_.prime, Q_.roots = nodes, self.top, vcf, self.prime, self.roots
        Q_.n, Q_.genus, Q_.clusters = self.n, self.genus, self.clusters
        Q_._level, Q_._rel = self._level, self._rel
        Q_._nu = {c: v + dnu for c, v in self._nu.items()} if dnu else self._nu
        if dnu and type(dnu) is not int:
            Q_._nu = {c: norm(v) for c, v in Q_._nu.items()}
        Q_._canon = None
        Q_._labels = {}
        return Q_

    def deepened(self, t) -> "ClusterPicture":
        """Every depth raised by ``t`` (root values are dropped)."""
        t = norm(t)
        nodes = tuple(nd if nd.depth is None else nd._replace(depth=norm(nd.depth + t))
                      for nd in self.nodes)
        Q_ = self._derived(nodes, self.vcf, t * self.n)
        Q_.roots = None
        return Q_

    # -- queries --------------------------------------------------------------

    def __getitem__(self, node: int) -> ClusterNode:
        return self.nodes[node]

    def size(self, node: int) -> int:
        return len(self.nodes[node].leaves)

    def depth(self, node: int) -> Q:
        d = self.nodes[node].depth
        if d is None:
            raise InputError("roots have no depth")
        return d

    @property
    def d_R(self) -> Q:
        return self.nodes[self.top].depth

    def children(self, node: int) -> tuple:
        return self.nodes[node].children

    def parent(self, node: int) -> Optional[int]:
        return self.nodes[node].parent

    def contains(self, outer: int, inner: int) -> bool:
        """``inner ⊆ outer`` as sets of roots."""
        return self.nodes[inner].leaves <= self.nodes[outer].leaves

    def rel_depth(self, node: int) -> Q:
        """Relative depth: own depth minus the parent's."""
        try:
            return self._rel[node]
        except KeyError:
            pass
        if node == self.top:
            raise InputError("relative depth is undefined for the top cluster")
        raise InputError("relative depth is undefined for a root")

    def meet(self, a: int, b: int) -> int:
        """Smallest cluster containing both nodes (lowest common ancestor)."""
        level, nodes = self._level, self.nodes
        while level[a] > level[b]:
            a = nodes[a].parent
        while level[b] > level[a]:
            b = nodes[b].parent
        while a != b:
            a, b = nodes[a].parent, nodes[b].parent
        return a

    def nu(self, node: int) -> Q:
        """ν_S via depths and relative depths along the path to the top."""
        try:
            return self._nu[node]
        except KeyError:
            raise InputError("ν is defined for proper clusters only") from None

    def nu_direct(self, node: int) -> Q:
        """ν_S = v(c_f) + Σ_r d_{r∧S}, summed root by root."""
        if not self.nodes[node].is_proper:
            raise InputError("ν is defined for proper clusters only")
        total = self.vcf
        for r in range(self.n):
            total += self.nodes[self.meet(r, node)].depth
        return norm(total)

    def is_principal(self, node: int) -> bool:
        nd = self.nodes[node]
        if nd.size < 3:
            return False
        if node == self.top and self.n % 2 == 0 and len(nd.children) == 2:
            return False
        return all(self.nodes[c].size != 2 * self.genus for c in nd.children)

    def centre(self, node: int):
        """A centre of the cluster: its lowest-index root value, or a label."""
        leaves = self.nodes[node].leaves
        if self.roots is not None:
            return self.roots[min(leaves)]
        if len(leaves) == 1:
            return f"r{next(iter(leaves))}"
        return f"z({self.path_label(node)})"

    # -- canonical form -------------------------------------------------------

    def _canonical(self):
        if self._canon is None:
            text, order = {}, {}

            nodes, rels = self.nodes, self._rel

            def visit(node, sub):
                kids = []
                for c in nodes[node].children:
                    ch = nodes[c]
                    if ch.depth is not None:
                        rel = rels[c]
                        kids.append((-len(ch.leaves), -rel, visit(c, rel), c))
                    else:
                        kids.append((-1, 0, "*", c))
                kids.sort(key=lambda k: k[:3])
                order[node] = tuple(k[3] for k in kids)
                s = "(" + " ".join(k[2] for k in kids) + ")_" + (str(sub) if type(sub) is int else fmt(sub))
                text[node] = s
                return s

            visit(self.top, self.d_R)
            self._canon = (text, order)
        return self._canon

    def canonical_text(self, node: Optional[int] = None) -> str:
        """Canonical notation; a subtree's outer subscript is its relative depth
        (absolute for the top)."""
        node = self.top if node is None else node
        if not self.nodes[node].is_proper:
            return "*"
        return self._canonical()[0][node]

    def subtree_text(self, node: int) -> str:
        """Canonical text of the subtree as a standalone picture (absolute top depth)."""
        if node == self.top or not self.nodes[node].is_proper:
            return self.canonical_text(node)
        inner = self.canonical_text(node)
        return inner[: inner.rindex("_") + 1] + fmt(self.nodes[node].depth)

    def canonical_children(self, node: int) -> tuple:
        return self._canonical()[1].get(node, ())

    def path(self, node: int) -> tuple:
        """Child-index path from the top in canonical order."""
        steps = []
        while self.nodes[node].parent is not None:
            par = self.nodes[node].parent
            steps.append(self.canonical_children(par).index(node))
            node = par
        return tuple(reversed(steps))

    def path_label(self, node: int) -> str:
        label = self._labels.get(node)
        if label is None:
            p = self.path(node)
            label = self._labels[node] = "R" if not p else "/".join(map(str, p))
        return label

    def find_path(self, path: Iterable[int]) -> int:
        node = self.top
        for k in path:
            kids = self.canonical_children(node)
            if not 0 <= k < len(kids):
                raise InputError(f"cluster path step {k} out of range")
            node = kids[k]
        return node

    def structure(self, node: Optional[int] = None):
        """Order-independent structural key built from absolute depths."""
        node = self.top if node is None else node
        nd = self.nodes[node]
        if not nd.is_proper:
            return ()
        return (nd.depth, tuple(sorted(self.structure(c) for c in nd.children)))

    def __eq__(self, other):
        if not isinstance(other, ClusterPicture):
            return NotImplemented
        return self.vcf == other.vcf and self.structure() == other.structure()

    def __hash__(self):
        return hash((self.vcf, repr(self.structure())))

    def __repr__(self):
        return f"ClusterPicture({self.canonical_text()!r}, vcf={fmt(self.vcf)})"


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def build_picture_from_roots(roots: Sequence, c_f, p: int,
                             min_roots: int = 5) -> ClusterPicture:
    """Cluster picture of ``c_f * prod(x - r)`` over Q_p from exact root values.

    Clusters are found by merging roots with union-find at each distinct
    pairwise valuation, largest first.
    """
    p = check_prime(p)
    roots = [norm(r) for r in roots]
    c_f = norm(c_f)
    if c_f == 0:
        raise InputError("leading coefficient must be nonzero")
    if len(set(roots)) != len(roots):
        raise InputError("inseparable polynomial: duplicate roots")
    n = len(roots)
    if n < min_roots:
        raise InputError("genus < 2 unsupported" if min_roots >= 5 else "too few roots")
    by_val = {}
    for i in range(n):
        for j in range(i + 1, n):
            by_val.setdefault(val_p(roots[i] - roots[j], p), []).append((i, j))
    uf = _UnionFind(n)
    node_of = {i: i for i in range(n)}  # block representative -> current subtree
    for d in sorted(by_val, reverse=True):
        before = {i: uf.find(i) for i in range(n)}
        for i, j in by_val[d]:
            uf.union(i, j)
        merged = {}
        for rep in set(before.values()):
            merged.setdefault(uf.find(rep), []).append(rep)
        new_node_of = {}
        for new_rep, old_reps in merged.items():
            if len(old_reps) == 1:
                new_node_of[new_rep] = node_of[old_reps[0]]
            else:
                kids = [node_of[r] for r in sorted(old_reps, key=lambda r: min(_block(before, r)))]
                new_node_of[new_rep] = (d, kids)
        node_of = new_node_of
    (tree,) = node_of.values()
    return ClusterPicture.from_nested(tree, vcf=val_p(c_f, p), relative=False,
                                      prime=p, roots=roots)


def _block(before, rep):
    return [i for i, r in before.items() if r == rep]


@dataclass
class IntegralityReport:
    depths_integral: bool
    nu_even_principal: bool
    integral_equation: bool
    lambda_integral: Optional[bool]
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {
            "depths_integral": self.depths_integral,
            "nu_even_principal": self.nu_even_principal,
            "integral_equation": self.integral_equation,
            "lambda_integral": self.lambda_integral,
            "ok": self.ok,
            "problems": list(self.problems),
        }


def validate_integrality(P: ClusterPicture) -> IntegralityReport:
    """Necessary conditions for a semistable integral equation; never raises."""
    from .lambda_formula import lambda8

    problems = []
    bad_depth = [c for c in P.clusters if Fraction(P.depth(c)).denominator != 1]
    for c in bad_depth:
        problems.append(f"depth {fmt(P.depth(c))} of {P.path_label(c)} is not an integer")
    bad_nu = [c for c in P.clusters
              if P.is_principal(c) and (Fraction(P.nu(c)).denominator != 1 or P.nu(c) % 2)]
    for c in bad_nu:
        problems.append(f"ν = {fmt(P.nu(c))} of principal cluster {P.path_label(c)} is not even")
    integral = P.d_R >= 0 and P.vcf >= 0
    if not integral:
        problems.append("negative top depth or v(c_f): equation is not integral")
    lam_ok = None
    if P.genus >= 2:
        l8 = lambda8(P)
        lam_ok = Fraction(l8).denominator == 1 and l8 % 8 == 0
        if not lam_ok:
            problems.append(f"8·v(λ) = {fmt(l8)} is not divisible by 8")
    return IntegralityReport(not bad_depth, not bad_nu, integral, lam_ok, problems)
