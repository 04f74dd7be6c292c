"""Named algebras: endomorphism semirings of chains, A21, the Brandt monoid and B21."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .algebra import (
    AiSemiring,
    InverseSemigroup,
    Semigroup,
    Violation,
    closure_from_maps,
    direct_product,
    is_isomorphic,
    permute,
    rees_quotient,
    subalgebra_generated,
    verify_ai_semiring,
)
from .green import nat_addition
from .pinj import PartialInjection, identity_map


@dataclass(frozen=True)
class MonotoneMap:
    """An order-preserving self-map of the chain ``0 < 1 < ... < m-1``."""

    values: tuple[int, ...]

    def __post_init__(self):
        m = len(self.values)
        if any(not 0 <= v < m for v in self.values):
            raise ValueError(f"values {self.values} leave the chain of size {m}")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"values {self.values} are not nondecreasing")

    @property
    def m(self) -> int:
        return len(self.values)

    def __mul__(self, other: "MonotoneMap") -> "MonotoneMap":
        # left-to-right: x(fg) = (xf)g
        return MonotoneMap(tuple(other.values[v] for v in self.values))

    def __add__(self, other: "MonotoneMap") -> "MonotoneMap":
        return MonotoneMap(tuple(map(max, self.values, other.values)))

    def meet(self, other: "MonotoneMap") -> "MonotoneMap":
        return MonotoneMap(tuple(map(min, self.values, other.values)))

    def reversed(self) -> "MonotoneMap":
        """Conjugate by the order reversal ``x -> m-1-x``."""
        top = self.m - 1
        return MonotoneMap(tuple(top - self.values[top - x] for x in range(self.m)))

    def rank(self) -> int:
        return len(set(self.values))

    def __str__(self):
        return "(" + ",".join(map(str, self.values)) + ")"


def monotone_maps(m: int) -> list[MonotoneMap]:
    """All monotone self-maps of the m-chain in lexicographic order."""
    return [MonotoneMap(v) for v in combinations_with_replacement(range(m), m)]


def _semiring_of_maps(maps, labels=None) -> AiSemiring:
    index = {f: i for i, f in enumerate(maps)}
    n = len(maps)
    mul = np.array([[index[f * g] for g in maps] for f in maps], dtype=np.intp).reshape(n, n)
    add = np.array([[index[f + g] for g in maps] for f in maps], dtype=np.intp).reshape(n, n)
    return AiSemiring(labels=labels or [str(f) for f in maps], mul=mul, add=add,
                      payload=tuple(maps))


def end_chain(m: int) -> AiSemiring:
    """End(C_m): monotone maps under point-wise max and composition."""
    if m < 1:
        raise ValueError("chain size must be positive")
    return _semiring_of_maps(monotone_maps(m))


def end0_chain(m: int) -> AiSemiring:
    """The subsemiring of End(C_m) fixing the bottom element 0."""
    if m < 1:
        raise ValueError("chain size must be positive")
    return _semiring_of_maps([f for f in monotone_maps(m) if f.values[0] == 0])


A21_MAPS = {
    "1": (0, 1, 2),
    "ea": (1, 1, 2),
    "ae": (0, 2, 2),
    "a": (1, 2, 2),
    "e": (0, 0, 2),
    "0": (2, 2, 2),
}


def a21() -> AiSemiring:
    """A21 as the maps of the 3-chain fixing 2."""
    maps = [MonotoneMap(v) for v in A21_MAPS.values()]
    return _semiring_of_maps(maps, labels=list(A21_MAPS))


BRANDT_LABELS = ("1", "c", "d", "cd", "dc", "0")


def brandt_monoid() -> InverseSemigroup:
    """B21 as partial injections of {0, 1}: c = {0→1}, d = {1→0}, identity adjoined."""
    c = PartialInjection.from_dict(2, {0: 1})
    d = PartialInjection.from_dict(2, {1: 0})
    S = closure_from_maps([identity_map(2), c, d], with_inverses=True)
    named = {
        "1": identity_map(2),
        "c": c,
        "d": d,
        "cd": c * d,
        "dc": d * c,
        "0": c * c,
    }
    order = [S.id_of(named[s]) for s in BRANDT_LABELS]
    S = permute(S, order, labels=BRANDT_LABELS)
    return S.replace(generators=[1, 2])


def b21() -> AiSemiring:
    return nat_addition(brandt_monoid())


def meet_addition(R: AiSemiring) -> AiSemiring:
    """Replace the point-wise max of an End(C_m)-style semiring by the point-wise min."""
    if R.payload is None or not all(isinstance(f, MonotoneMap) for f in R.payload):
        raise TypeError("meet_addition needs a semiring of monotone maps")
    index = R.payload_index
    add = [[index[f.meet(g)] for g in R.payload] for f in R.payload]
    return AiSemiring(labels=R.labels, mul=R.mul, add=add, generators=R.generators,
                      payload=R.payload)


def lattice_violation(join: np.ndarray, meet: np.ndarray) -> Violation | None:
    """Check that two tables form a distributive lattice."""
    n = join.shape[0]
    ids = np.arange(n)
    for name, t in (("join", join), ("meet", meet)):
        if (t[ids, ids] != ids).any():
            return Violation(f"{name} idempotency", (int(np.flatnonzero(t[ids, ids] != ids)[0]),))
        if (t != t.T).any():
            return Violation(f"{name} commutativity", tuple(map(int, np.argwhere(t != t.T)[0])))
        for a in range(n):
            bad = np.argwhere(t[t[a]] != t[a][t])
            if len(bad):
                return Violation(f"{name} associativity", (a, *map(int, bad[0])))
    # absorption: a v (a ^ b) = a, a ^ (a v b) = a
    for name, outer, inner in (("join absorption", join, meet), ("meet absorption", meet, join)):
        bad = np.argwhere(outer[ids[:, None], inner] != ids[:, None])
        if len(bad):
            return Violation(name, tuple(map(int, bad[0])))
    for a in range(n):
        # a ^ (b v c) = (a ^ b) v (a ^ c)
        bad = np.argwhere(meet[a][join] != join[np.ix_(meet[a], meet[a])])
        if len(bad):
            return Violation("distributivity", (a, *map(int, bad[0])))
    return None


def order_reversal(m: int) -> dict[int, int]:
    """Id map End(C_m) -> End(C_m) conjugating by ``x -> m-1-x``."""
    R = end_chain(m)
    return {i: R.id_of(f.reversed()) for i, f in enumerate(R.payload)}


def combined_lattice_check(m: int) -> Violation | None:
    """(End(C_m), max, min) is a distributive lattice, and order reversal maps
    (End(C_m), min, .) isomorphically onto (End(C_m), max, .)."""
    R = end_chain(m)
    M = meet_addition(R)
    v = lattice_violation(R.add, M.add)
    if v is not None:
        return v
    phi = order_reversal(m)
    perm = np.array([phi[i] for i in range(R.size)])
    if sorted(perm.tolist()) != list(range(R.size)):
        return Violation("order reversal is a bijection", ())
    for name, src, dst in (("mul", M.mul, R.mul), ("min -> max", M.add, R.add)):
        bad = np.argwhere(perm[src] != dst[np.ix_(perm, perm)])
        if len(bad):
            return Violation(f"order reversal preserves {name}", tuple(map(int, bad[0])))
    return None


# ----------------------------------------------------------------------------
# B21 divides A21 x A21


@dataclass
class DivisionChain:
    """Every stage of the explicit division of A21 x A21 onto B21."""

    square: AiSemiring
    B: AiSemiring
    N: list[int]
    B_mod_N: AiSemiring
    upper_ideal: list[int]
    quotient: AiSemiring
    isomorphism: dict[int, int] | None


UPPER_IDEAL = ("0", "(1,a)", "(a,1)", "(ae,a)", "(a,ae)", "(ea,a)", "(a,ea)", "(a,a)")


def b21_division_chain() -> DivisionChain:
    """Generate B from (1,1), (e,a), (a,e) in A21 x A21, collapse the pairs
    with a zero coordinate, collapse the eight-element upper ideal, and
    compare the result with B21."""
    A = a21()
    sq = direct_product(A, A)
    seeds = [sq.index(s) for s in ("(1,1)", "(e,a)", "(a,e)")]
    B, _ = subalgebra_generated(sq, seeds)
    zero = A.index("0")
    N = [i for i, (x, y) in enumerate(B.payload) if x == zero or y == zero]
    BN = rees_quotient(B, N)
    upper = [BN.index(s) for s in UPPER_IDEAL]
    Q = rees_quotient(BN, upper)
    return DivisionChain(square=sq, B=B, N=N, B_mod_N=BN, upper_ideal=upper, quotient=Q,
                         isomorphism=is_isomorphic(Q, b21()))


def additions_on(S: Semigroup, limit: int | None = None) -> list[np.ndarray]:
    """Every semilattice addition making ``S`` an ai-semiring.

    Backtracking over the addition table with propagation of the forced
    values ``s a + s b = s (a + b)`` and ``a s + b s = (a + b) s``.
    """
    n = S.size
    mul = S.mul
    results: list[np.ndarray] = []
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]

    def assign(table, a, b, v):
        stack = [(a, b, v)]
        while stack:
            a, b, v = stack.pop()
            if a == b:
                if v != a:
                    return False
                continue
            cur = table[a, b]
            if cur >= 0:
                if cur != v:
                    return False
                continue
            table[a, b] = table[b, a] = v
            for s in range(n):
                stack.append((mul[s, a], mul[s, b], mul[s, v]))
                stack.append((mul[a, s], mul[b, s], mul[v, s]))
        return True

    def consistent(table):
        for a in range(n):
            for b in range(n):
                ab = table[a, b]
                if ab < 0:
                    continue
                for c in range(n):
                    bc = table[b, c]
                    if bc < 0 or table[ab, c] < 0 or table[a, bc] < 0:
                        continue
                    if table[ab, c] != table[a, bc]:
                        return False
        return True

    def search(k, table):
        if limit is not None and len(results) >= limit:
            return
        while k < len(pairs) and table[pairs[k]] >= 0:
            k += 1
        if k == len(pairs):
            R = AiSemiring(labels=S.labels, mul=S.mul, add=table)
            if verify_ai_semiring(R) is None:
                results.append(table.copy())
            return
        a, b = pairs[k]
        for v in range(n):
            t = table.copy()
            if assign(t, a, b, v) and consistent(t):
                search(k + 1, t)

    table = np.full((n, n), -1, dtype=np.intp)
    table[np.arange(n), np.arange(n)] = np.arange(n)
    search(0, table)
    return results
