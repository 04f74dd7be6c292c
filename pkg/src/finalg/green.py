"""Green's relations, idempotent order and the natural order of inverse semigroups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .algebra import AiSemiring, InverseSemigroup, Semigroup, verify_ai_semiring


def _classes_from_keys(keys) -> np.ndarray:
    """Number equal keys consecutively in order of first appearance."""
    ids: dict = {}
    return np.array([ids.setdefault(k, len(ids)) for k in keys], dtype=np.intp)


@dataclass(frozen=True, eq=False)
class GreenStructure:
    """R, L, H, D partitions (class id per element) plus the D-class poset.

    ``d_leq[Y, X]`` is true when D-class ``Y`` lies below ``X``.
    """

    r: np.ndarray
    l: np.ndarray
    h: np.ndarray
    d: np.ndarray
    idempotents: tuple[int, ...]
    d_classes: tuple[tuple[int, ...], ...]
    d_leq: np.ndarray

    @property
    def num_d_classes(self) -> int:
        return len(self.d_classes)

    def d_class_of(self, s: int) -> int:
        return int(self.d[s])

    def idempotents_in(self, X: int) -> tuple[int, ...]:
        return tuple(e for e in self.idempotents if self.d[e] == X)

    def r_classes_in(self, X: int) -> list[list[int]]:
        return _group([s for s in self.d_classes[X]], self.r)

    def l_classes_in(self, X: int) -> list[list[int]]:
        return _group([s for s in self.d_classes[X]], self.l)

    def h_classes(self) -> list[list[int]]:
        return _group(range(len(self.h)), self.h)


def _group(elements, labels) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for s in elements:
        out.setdefault(int(labels[s]), []).append(int(s))
    return list(out.values())


def principal_ideals(S: Semigroup):
    """Boolean membership matrices of ``sS^1``, ``S^1s`` and ``S^1sS^1`` (row ``s``)."""
    n = S.size
    mul = S.mul
    ids = np.arange(n)
    right = np.zeros((n, n), dtype=bool)
    left = np.zeros((n, n), dtype=bool)
    right[ids[:, None], mul] = True
    left[ids[:, None], mul.T] = True
    right[ids, ids] = True
    left[ids, ids] = True
    # S^1 s S^1 is the union of the right ideals of everything in S^1 s
    two = (left.astype(np.int32) @ right.astype(np.int32)) > 0
    return right, left, two


def green(S: Semigroup) -> GreenStructure:
    """Green's relations of a finite semigroup.

    The identity of ``S^1`` is virtual: principal ideals include ``s`` itself
    instead of adjoining an element.  D is the join of R and L; the D-class
    order is inclusion of principal two-sided ideals, which for inverse
    semigroups coincides with comparing idempotents.
    """
    right, left, two = principal_ideals(S)
    r = _classes_from_keys(row.tobytes() for row in right)
    l = _classes_from_keys(row.tobytes() for row in left)
    h = _classes_from_keys(zip(r.tolist(), l.tolist()))

    ds = DisjointSet(range(S.size))
    for cls in (r, l):
        first: dict[int, int] = {}
        for s, c in enumerate(cls.tolist()):
            if c in first:
                ds.merge(first[c], s)
            else:
                first[c] = s
    d = _classes_from_keys(min(ds.subset(s)) for s in range(S.size))
    classes = tuple(tuple(int(s) for s in np.flatnonzero(d == X)) for X in range(d.max() + 1))
    reps = [c[0] for c in classes]
    J = two[reps]
    # Y <= X  iff  J(Y) is contained in J(X)
    d_leq = ~(J[:, None, :] & ~J[None, :, :]).any(axis=2)
    return GreenStructure(r=r, l=l, h=h, d=d, idempotents=S.idempotents,
                          d_classes=classes, d_leq=d_leq)


def is_combinatorial(S: Semigroup, G: GreenStructure | None = None) -> bool:
    G = G or green(S)
    return len(set(G.h.tolist())) == S.size


def nontrivial_h_class(S: Semigroup, G: GreenStructure | None = None) -> list[int] | None:
    G = G or green(S)
    for cls in G.h_classes():
        if len(cls) > 1:
            return cls
    return None


def idempotent_leq(S: Semigroup, e: int, f: int) -> bool:
    return S.mul[e, f] == e and S.mul[f, e] == e


def natural_leq(S: InverseSemigroup, s: int, t: int) -> bool:
    return int(S.mul[S.mul[s, S.inv[s]], t]) == s


def natural_order_matrix(S: InverseSemigroup) -> np.ndarray:
    """``M[s, t]`` is true iff ``s <= t`` in the natural partial order."""
    ids = np.arange(S.size)
    proj = S.mul[ids, S.inv]  # s s^-1
    return S.mul[proj] == ids[:, None]


def aperiodicity_index(S: Semigroup, limit: int | None = None) -> int | None:
    """Least ``p`` with ``x^p = x^(p+1)`` for every ``x``, if one exists up to ``limit``."""
    limit = limit or S.size
    ids = np.arange(S.size)
    powers = ids.copy()  # x^p
    for p in range(1, limit + 1):
        nxt = S.mul[powers, ids]
        if np.array_equal(nxt, powers):
            return p
        powers = nxt
    return None


def nat_addition(S: InverseSemigroup) -> AiSemiring:
    """The ai-semiring with ``s + t = (s t^-1)^p s``, the natural-order meet."""
    p = aperiodicity_index(S)
    if p is None:
        raise ValueError("no p <= |S| with x^p = x^(p+1); natural order need not be a meet-semilattice")
    mul, inv = S.mul, S.inv
    n = S.size
    st = mul[:, inv]  # st[s, t] = s t^-1
    base = st.copy()
    for _ in range(p - 1):
        base = mul[base, st]
    add = mul[base, np.arange(n)[:, None]]
    R = AiSemiring(labels=S.labels, mul=S.mul, add=add, generators=S.generators,
                   payload=S.payload, words=S.words)
    v = verify_ai_semiring(R)
    if v is not None:
        raise AssertionError(f"nat-addition is not an ai-semiring: {v}")
    _check_meet(S, add)
    return R


def _check_meet(S: InverseSemigroup, add: np.ndarray) -> None:
    N = natural_order_matrix(S)
    for s in range(S.size):
        u = add[s]  # s + t for every t
        ts = np.arange(S.size)
        if not (N[u, s].all() and N[u, ts].all()):
            raise AssertionError(f"s + t is not a lower bound for s = {S.labels[s]}")
        lower = N[:, s][:, None] & N[:, ts]  # lower[w, t]: w below s and t
        if (lower & ~N[:, u]).any():
            raise AssertionError(f"s + t is not the greatest lower bound for s = {S.labels[s]}")


def render_eggbox(S: Semigroup, G: GreenStructure | None = None) -> str:
    """Egg-box diagrams of every D-class, top classes first, plus the Hasse cover list."""
    G = G or green(S)
    order = sorted(range(G.num_d_classes), key=lambda X: (-int(G.d_leq[:, X].sum()), X))
    lines = []
    for X in order:
        rows = G.r_classes_in(X)
        cols = G.l_classes_in(X)
        col_of = {s: j for j, c in enumerate(cols) for s in c}
        cells = [[[] for _ in cols] for _ in rows]
        for i, row in enumerate(rows):
            for s in row:
                mark = "*" if S.is_idempotent(s) else ""
                cells[i][col_of[s]].append(mark + S.labels[s])
        text = [[" ".join(c) for c in row] for row in cells]
        width = max(len(t) for row in text for t in row)
        lines.append(f"D{X}: {len(G.d_classes[X])} elements, "
                     f"{len(rows)}x{len(cols)}, {len(G.idempotents_in(X))} idempotents")
        for row in text:
            lines.append("  | " + " | ".join(t.ljust(width) for t in row) + " |")
    lines.append("covers (upper > lower):")
    for X in order:
        for Y in range(G.num_d_classes):
            if X != Y and G.d_leq[Y, X] and not any(
                Z not in (X, Y) and G.d_leq[Y, Z] and G.d_leq[Z, X]
                for Z in range(G.num_d_classes)
            ):
                lines.append(f"  D{X} > D{Y}")
    return "\n".join(lines)
