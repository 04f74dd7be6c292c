"""Kaďourek's membership test for the inverse-semigroup variety generated by B21.

For D-classes ``Y <= X`` of a finite combinatorial inverse semigroup the
projection relation ``pi(X, Y)`` and the common-upper-bound relation
``rho(X, Y)`` live on the idempotents of ``Y``.  A filter ``K`` (upward-closed
set of D-classes above ``Y``) yields the equivalence ``tau(K, Y)`` generated
by ``pi`` over classes in ``K`` and ``rho`` over the remaining classes.
Membership holds iff every obstruction ``e <= g``, ``f !<= g``
(``e, f`` in ``E(Y)``, ``g`` in ``E(X)``) is separated by some filter avoiding ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .algebra import InverseSemigroup
from .green import GreenStructure, green, idempotent_leq, nontrivial_h_class

PROSE = "prose"
DISPLAY = "display"

Pair = tuple[int, int]


class NotCombinatorialError(ValueError):
    pass


def up_set(G: GreenStructure, Y: int) -> frozenset[int]:
    return frozenset(int(X) for X in np.flatnonzero(G.d_leq[Y]))


def projection_pi(S: InverseSemigroup, G: GreenStructure, g: int, e: int, h: int) -> int:
    """``h`` projected along ``g -> e``: ``a^-1 e a`` for the unique ``a`` in
    ``D_g`` with ``a a^-1 = g`` and ``a^-1 a = h``."""
    if not idempotent_leq(S, e, g):
        raise ValueError(f"{S.labels[e]} is not below {S.labels[g]}")
    X = G.d[g]
    if G.d[h] != X:
        raise ValueError("g and h lie in different D-classes")
    mul, inv = S.mul, S.inv
    cands = [a for a in G.d_classes[X] if mul[a, inv[a]] == g and mul[inv[a], a] == h]
    if len(cands) != 1:
        raise NotCombinatorialError(
            f"expected exactly one a with aa^-1={S.labels[g]}, a^-1a={S.labels[h]}; "
            f"found {len(cands)}")
    a = cands[0]
    return int(mul[mul[inv[a], e], a])


def _sym(pairs: Iterable[Pair]) -> frozenset[Pair]:
    out = set()
    for a, b in pairs:
        out.add((a, b))
        out.add((b, a))
    return frozenset(out)


def pi_relation(S: InverseSemigroup, G: GreenStructure, X: int, Y: int) -> frozenset[Pair]:
    EX, EY = G.idempotents_in(X), G.idempotents_in(Y)
    pairs = set()
    for g in EX:
        for e in EY:
            if not idempotent_leq(S, e, g):
                continue
            images = [projection_pi(S, G, g, e, h) for h in EX]
            pairs.update((p, q) for p in images for q in images)
    return _sym(pairs)


def rho_relation(S: InverseSemigroup, G: GreenStructure, X: int, Y: int,
                 reading: str = PROSE) -> frozenset[Pair]:
    """Pairs of idempotents sharing an upper bound.

    ``reading="prose"``: ``f1, f2`` in ``E(Y)`` below a common ``g`` in ``E(X)``.
    ``reading="display"``: ``f1, f2`` in ``E(X)`` below a common ``g`` in ``E(Y)``
    (the literal set-builder form, kept for experiments).
    """
    if reading == PROSE:
        lower, upper = G.idempotents_in(Y), G.idempotents_in(X)
    elif reading == DISPLAY:
        lower, upper = G.idempotents_in(X), G.idempotents_in(Y)
    else:
        raise ValueError(f"unknown reading {reading!r}")
    pairs = set()
    for g in upper:
        below = [f for f in lower if idempotent_leq(S, f, g)]
        pairs.update((p, q) for p in below for q in below)
    return _sym(pairs)


class Relations:
    """Cached pi/rho relations of one inverse semigroup."""

    def __init__(self, S: InverseSemigroup, G: GreenStructure | None = None, reading=PROSE):
        self.S = S
        self.G = G or green(S)
        self.reading = reading
        self._pi: dict = {}
        self._rho: dict = {}

    def pi(self, X, Y):
        if (X, Y) not in self._pi:
            self._pi[X, Y] = pi_relation(self.S, self.G, X, Y)
        return self._pi[X, Y]

    def rho(self, X, Y):
        if (X, Y) not in self._rho:
            self._rho[X, Y] = rho_relation(self.S, self.G, X, Y, self.reading)
        return self._rho[X, Y]


@dataclass(frozen=True)
class Partition:
    """An equivalence on ``E(Y)`` as blocks, each sorted, blocks ordered by least member."""

    blocks: tuple[tuple[int, ...], ...]

    def same(self, a: int, b: int) -> bool:
        return any(a in blk and b in blk for blk in self.blocks)

    def block_of(self, a: int) -> tuple[int, ...]:
        for blk in self.blocks:
            if a in blk:
                return blk
        raise KeyError(a)

    def labelled(self, S) -> list[list[str]]:
        return [[S.labels[i] for i in blk] for blk in self.blocks]


def _check_equivalence(points, pairs, part: Partition) -> None:
    pts = set(points)
    covered = [p for blk in part.blocks for p in blk]
    if sorted(covered) != sorted(pts):
        raise AssertionError("tau blocks do not partition E(Y)")
    if len(covered) != len(set(covered)):
        raise AssertionError("tau blocks overlap")
    for a, b in pairs:
        if a in pts and b in pts and not part.same(a, b):
            raise AssertionError("tau does not contain its generating pairs")


def tau(rel: Relations, K: Iterable[int], Y: int) -> Partition:
    """The equivalence on ``E(Y)`` generated by pi over ``K`` and rho over ``[Y) - K``."""
    G = rel.G
    K = frozenset(K)
    above = up_set(G, Y)
    if not K <= above:
        raise ValueError("filter must lie inside the up-set of Y")
    points = G.idempotents_in(Y)
    ds = DisjointSet(points)
    gens = set()
    for X in sorted(above):
        gens |= rel.pi(X, Y) if X in K else rel.rho(X, Y)
    for a, b in gens:
        # the display reading of rho can produce pairs outside E(Y)
        if a in ds and b in ds:
            ds.merge(a, b)
    part = Partition(tuple(sorted(tuple(sorted(s)) for s in ds.subsets())))
    _check_equivalence(points, gens, part)
    return part


def is_filter(G: GreenStructure, K: Iterable[int]) -> bool:
    K = set(K)
    return all(up_set(G, Z) <= K for Z in K)


def enumerate_filters(G: GreenStructure, Y: int) -> list[frozenset[int]]:
    """All filters inside ``[Y)``, by increasing size then sorted members."""
    above = sorted(up_set(G, Y))
    found = set()

    # every filter is the up-closure of its antichain of minimal members
    def grow(start, antichain, closure):
        found.add(closure)
        for i in range(start, len(above)):
            Z = above[i]
            if Z in closure or any(G.d_leq[Z, A] for A in antichain):
                continue
            grow(i + 1, antichain + [Z], closure | up_set(G, Z))

    grow(0, [], frozenset())
    return sorted(found, key=lambda K: (len(K), sorted(K)))


@dataclass(frozen=True)
class Obligation:
    X: int
    Y: int
    e: int
    f: int
    g: int


@dataclass(frozen=True)
class Separation:
    obligation: Obligation
    filter: frozenset[int]
    partition: Partition


@dataclass
class StarResult:
    holds: bool
    separations: list[Separation] = field(default_factory=list)
    failure: Obligation | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def obligations(S: InverseSemigroup, G: GreenStructure) -> Iterator[Obligation]:
    """Every ``(X, Y, e, f, g)`` with ``e <= g`` and ``f !<= g``; classes ``Y`` with
    fewer than two idempotents are skipped."""
    for Y in range(G.num_d_classes):
        EY = G.idempotents_in(Y)
        if len(EY) < 2:
            continue
        for X in sorted(up_set(G, Y)):
            for g in G.idempotents_in(X):
                below = [idempotent_leq(S, f, g) for f in EY]
                for e, e_below in zip(EY, below):
                    if not e_below:
                        continue
                    for f, f_below in zip(EY, below):
                        if not f_below:
                            yield Obligation(X, Y, e, f, g)


def star_condition(S: InverseSemigroup, G: GreenStructure | None = None,
                   reading: str = PROSE) -> StarResult:
    """Search a separating filter for every obstruction; stop at the first failure."""
    G = G or green(S)
    if nontrivial_h_class(S, G) is not None:
        raise NotCombinatorialError("semigroup has a nontrivial subgroup")
    rel = Relations(S, G, reading)
    filters: dict[int, list[frozenset[int]]] = {}
    taus: dict = {}
    separations = []
    for ob in obligations(S, G):
        if ob.Y not in filters:
            filters[ob.Y] = enumerate_filters(G, ob.Y)
        for K in filters[ob.Y]:
            if ob.X in K:
                continue
            key = (K, ob.Y)
            if key not in taus:
                taus[key] = tau(rel, K, ob.Y)
            part = taus[key]
            if not part.same(ob.e, ob.f):
                separations.append(Separation(ob, K, part))
                break
        else:
            return StarResult(False, separations, ob, "no filter avoiding X separates e from f")
    return StarResult(True, separations)


def recheck(S: InverseSemigroup, result: StarResult, G: GreenStructure | None = None,
            reading: str = PROSE) -> None:
    """Independently re-verify a result's evidence; raises ``AssertionError``."""
    G = G or green(S)
    rel = Relations(S, G, reading)
    for sep in result.separations:
        ob, K = sep.obligation, sep.filter
        assert idempotent_leq(S, ob.e, ob.g) and not idempotent_leq(S, ob.f, ob.g)
        assert ob.X not in K and is_filter(G, K) and K <= up_set(G, ob.Y)
        part = tau(rel, K, ob.Y)
        assert part == sep.partition
        assert not part.same(ob.e, ob.f)
    if not result.holds:
        ob = result.failure
        assert idempotent_leq(S, ob.e, ob.g) and not idempotent_leq(S, ob.f, ob.g)
        for K in enumerate_filters(G, ob.Y):
            if ob.X not in K:
                assert tau(rel, K, ob.Y).same(ob.e, ob.f)


@dataclass
class Membership:
    member: bool
    reason: str
    star: StarResult | None = None
    subgroup: list[int] | None = None

    def __bool__(self):
        return self.member


def in_var_b21(S: InverseSemigroup, G: GreenStructure | None = None,
               reading: str = PROSE) -> Membership:
    """Whether a finite inverse semigroup lies in the inverse-semigroup variety of B21."""
    G = G or green(S)
    H = nontrivial_h_class(S, G)
    if H is not None:
        return Membership(False, "nontrivial subgroup (x^2 = x^3 fails)", subgroup=H)
    star = star_condition(S, G, reading)
    return Membership(star.holds, "condition (*) holds" if star.holds else star.reason, star)


def describe_obligation(S, G, ob: Obligation) -> str:
    return (f"X=D{ob.X} Y=D{ob.Y} e={S.labels[ob.e]} f={S.labels[ob.f]} g={S.labels[ob.g]}")
