"""The inverse semigroups S_n of partial injections on ``{0, ..., 3n+2}``.

S_n is generated (as an inverse semigroup) by ``chi = {n→2n+1, n+1→2n+2}``
and ``chi_i = {i-1→i, n+1+i→n+i, 2n+1+i→2n+2+i}`` for ``i = 1..n``.
T_n(k) is S_n with the D-class B_k removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    InverseSemigroup,
    Violation,
    closure_from_maps,
    restrict,
    verify_inverse,
)
from .green import GreenStructure, green
from .pinj import (
    PartialInjection,
    compose,
    empty_map,
    invert,
    partial_identity,
    rank,
)
from .terms import vn_pair


def degree(n: int) -> int:
    return 3 * n + 3


def _check_n(n):
    if n < 2:
        raise ValueError("n must be at least 2")


def chi(n: int) -> PartialInjection:
    _check_n(n)
    return PartialInjection.from_dict(degree(n), {n: 2 * n + 1, n + 1: 2 * n + 2})


def chi_i(n: int, i: int) -> PartialInjection:
    _check_n(n)
    if not 1 <= i <= n:
        raise ValueError(f"i must lie in 1..{n}")
    return PartialInjection.from_dict(
        degree(n), {i - 1: i, n + 1 + i: n + i, 2 * n + 1 + i: 2 * n + 2 + i})


def zeta(n: int, i: int, j: int) -> PartialInjection:
    return PartialInjection.from_dict(degree(n), {i: j, 2 * n + 2 + i: 2 * n + 2 + j})


def eta(n: int, l: int, r: int) -> PartialInjection:
    return PartialInjection.from_dict(degree(n), {l: r})


def sn_generators(n: int) -> list[PartialInjection]:
    """``[chi, chi_1, ..., chi_n]``."""
    return [chi(n)] + [chi_i(n, i) for i in range(1, n + 1)]


@dataclass(frozen=True, eq=False)
class SnSemigroup:
    n: int
    S: InverseSemigroup
    blocks: dict[str, tuple[int, ...]]
    chi: int
    chis: tuple[int, ...]  # chis[i-1] is chi_i

    def block_of(self, s: int) -> str:
        for name, ids in self.blocks.items():
            if s in ids:
                return name
        raise KeyError(s)

    def id(self, f: PartialInjection) -> int:
        return self.S.id_of(f)

    def eta(self, l: int, r: int | None = None) -> int:
        return self.S.id_of(eta(self.n, l, l if r is None else r))

    def zeta(self, i: int, j: int | None = None) -> int:
        return self.S.id_of(zeta(self.n, i, i if j is None else j))

    def block_names(self) -> list[str]:
        return list(self.blocks)


def _name_elements(n: int, elems) -> list[str]:
    names = {}
    x = chi(n)
    xi = invert(x)
    names[x] = "chi"
    names[xi] = "chi^-1"
    names[compose(x, xi)] = "chi chi^-1"
    names[compose(xi, x)] = "chi^-1 chi"
    for i in range(1, n + 1):
        c = chi_i(n, i)
        ci = invert(c)
        names[c] = f"chi_{i}"
        names[ci] = f"chi_{i}^-1"
        names[compose(c, ci)] = f"chi_{i} chi_{i}^-1"
        names[compose(ci, c)] = f"chi_{i}^-1 chi_{i}"
    for i in range(n + 1):
        for j in range(n + 1):
            names.setdefault(zeta(n, i, j), f"zeta_{i},{j}")
    for l in range(degree(n)):
        for r in range(degree(n)):
            names[eta(n, l, r)] = f"eta_{l},{r}"
    names[empty_map(degree(n))] = "0"
    return [names.get(f, str(f)) for f in elems]


@lru_cache(maxsize=None)
def build_sn(n: int, max_size: int = 1_000_000) -> SnSemigroup:
    """Close the generators under composition and inversion and label the D-blocks."""
    _check_n(n)
    gens = sn_generators(n)
    S = closure_from_maps(gens, with_inverses=True, max_size=max_size)
    S = S.replace(labels=_name_elements(n, S.payload))
    idx = S.payload_index

    def quad(f):
        fi = invert(f)
        return tuple(sorted(idx[g] for g in (f, fi, compose(f, fi), compose(fi, f))))

    blocks: dict[str, tuple[int, ...]] = {}
    for i in range(1, n + 1):
        blocks[f"B{i}"] = quad(chi_i(n, i))
    blocks["E"] = quad(chi(n))
    ranks = [rank(f) for f in S.payload]
    blocks["C"] = tuple(s for s in range(S.size) if ranks[s] == 2 and s not in blocks["E"])
    blocks["D"] = tuple(s for s in range(S.size) if ranks[s] == 1)
    blocks["0"] = tuple(s for s in range(S.size) if ranks[s] == 0)

    covered = sorted(s for ids in blocks.values() for s in ids)
    if covered != list(range(S.size)):
        raise AssertionError("the labelled blocks do not partition S_n")
    rank3 = sorted(s for i in range(1, n + 1) for s in blocks[f"B{i}"])
    if rank3 != [s for s in range(S.size) if ranks[s] == 3]:
        raise AssertionError("the blocks B_i are not exactly the rank-3 elements")
    return SnSemigroup(n=n, S=S, blocks=blocks, chi=idx[chi(n)],
                       chis=tuple(idx[chi_i(n, i)] for i in range(1, n + 1)))


def expected_size(n: int) -> int:
    """4n + (n+1)^2 + (3n+3)^2 + 4 + 1."""
    return 4 * n + (n + 1) ** 2 + (3 * n + 3) ** 2 + 5


@dataclass(frozen=True, eq=False)
class TnSemigroup:
    n: int
    k: int
    S: InverseSemigroup
    blocks: dict[str, tuple[int, ...]]
    inclusion: np.ndarray
    sn: SnSemigroup

    def id(self, f: PartialInjection) -> int:
        return self.S.id_of(f)

    def eta(self, l: int) -> int:
        return self.S.id_of(eta(self.n, l, l))


@lru_cache(maxsize=None)
def tn(n: int, k: int) -> TnSemigroup:
    """S_n minus B_k, as an inverse subsemigroup."""
    sn = build_sn(n)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    removed = set(sn.blocks[f"B{k}"])
    keep = [s for s in range(sn.S.size) if s not in removed]
    T, inclusion = restrict(sn.S, keep)
    pos = {int(s): i for i, s in enumerate(inclusion)}
    blocks = {name: tuple(pos[s] for s in ids) for name, ids in sn.blocks.items() if name != f"B{k}"}
    v = verify_inverse(T)
    if v is not None:
        raise AssertionError(f"T_{n}({k}) is not an inverse semigroup: {v}")
    return TnSemigroup(n=n, k=k, S=T, blocks=blocks, inclusion=inclusion, sn=sn)


def verify_formulas(n: int) -> Violation | None:
    """Compare the closed-form products of generators with actual composition."""
    N = degree(n)
    x = chi(n)
    zero = empty_map(N)

    def pm(d):
        return PartialInjection.from_dict(N, d)

    cases = []
    for i in range(1, n + 1):
        ci = chi_i(n, i)
        for j in range(1, n + 1):
            cj = chi_i(n, j)
            if i == j - 1:
                want = pm({i - 1: i + 1, 2 * n + 1 + i: 2 * n + 3 + i})
            elif i == j + 1:
                want = pm({n + 1 + i: n - 1 + i})
            else:
                want = zero
            cases.append((f"chi_{i} chi_{j}", compose(ci, cj), want))
            want = partial_identity(N, {i - 1, n + 1 + i, 2 * n + 1 + i}) if i == j else zero
            cases.append((f"chi_{i} chi_{j}^-1", compose(ci, invert(cj)), want))
            want = partial_identity(N, {i, n + i, 2 * n + 2 + i}) if i == j else zero
            cases.append((f"chi_{i}^-1 chi_{j}", compose(invert(ci), cj), want))
        if i == 1:
            want_l, want_r = pm({n + 1: 2 * n + 3}), pm({n + 2: 2 * n + 2})
        elif i == n:
            want_l, want_r = pm({n: 2 * n}), pm({n - 1: 2 * n + 1})
        else:
            want_l = want_r = zero
        cases.append((f"chi chi_{i}", compose(x, ci), want_l))
        cases.append((f"chi_{i} chi", compose(ci, x), want_r))
        cases.append((f"chi chi_{i}^-1", compose(x, invert(ci)), zero))
        cases.append((f"chi_{i}^-1 chi", compose(invert(ci), x), zero))
    for name, got, want in cases:
        if got != want:
            return Violation(f"{name}: expected {want}, got {got}", ())
    return None


def expected_d_order(sn_blocks, n: int, without: str | None = None) -> set[tuple[str, str]]:
    """Pairs ``(lower, upper)`` of the D-class order of S_n (or T_n(k))."""
    names = [b for b in sn_blocks if b != without]
    covers = [(f"B{i}", "C") for i in range(1, n + 1)] + [("C", "D"), ("E", "D"), ("D", "0")]
    covers = [(u, l) for u, l in covers if u in names and l in names]
    leq = {(b, b) for b in names}
    leq |= {(l, u) for u, l in covers}
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return leq


def block_classes(G: GreenStructure, blocks: dict[str, tuple[int, ...]]) -> dict[str, int]:
    """D-class id of each labelled block; raises if a block is not a whole D-class."""
    out = {}
    for name, ids in blocks.items():
        X = int(G.d[ids[0]])
        if tuple(sorted(G.d_classes[X])) != tuple(sorted(ids)):
            raise AssertionError(f"block {name} is not a D-class")
        out[name] = X
    return out


def dclass_shape_check(n: int) -> Violation | None:
    sn = build_sn(n)
    G = green(sn.S)
    try:
        cls = block_classes(G, sn.blocks)
    except AssertionError as e:
        return Violation(str(e), ())
    if len(cls) != G.num_d_classes:
        return Violation("D-classes outside the labelled blocks", ())
    want = expected_d_order(sn.blocks, n)
    got = {(a, b) for a in cls for b in cls if G.d_leq[cls[a], cls[b]]}
    if got != want:
        return Violation(f"D-order differs: missing {sorted(want - got)}, extra {sorted(got - want)}", ())
    counts = {name: len(G.idempotents_in(X)) for name, X in cls.items()}
    want_counts = {**{f"B{i}": 2 for i in range(1, n + 1)}, "E": 2, "C": n + 1,
                   "D": 3 * n + 3, "0": 1}
    if counts != want_counts:
        return Violation(f"idempotent counts {counts} differ from {want_counts}", ())
    return None


# ----------------------------------------------------------------------------
# the substitution separating v_n from v_n'


def phi_n(n: int) -> dict[str, PartialInjection]:
    _check_n(n)
    x = chi(n)
    out = {}
    for i in range(1, 2 * n + 1):
        if i <= n:
            out[f"x{i}"] = chi_i(n, i)
        elif i == n + 1:
            out[f"x{i}"] = x
        else:
            out[f"x{i}"] = compose(invert(x), x)
    return out


def fold_word(word, assignment: dict[str, PartialInjection]) -> PartialInjection:
    f = assignment[word[0]]
    for x in word[1:]:
        f = compose(f, assignment[x])
    return f


@dataclass(frozen=True)
class VnSeparation:
    n: int
    value_v: PartialInjection
    value_v_prime: PartialInjection
    table_agrees: bool

    @property
    def holds(self) -> bool:
        return (self.value_v(0) == 3 * self.n + 2
                and self.value_v_prime == empty_map(degree(self.n))
                and self.table_agrees)


def verify_vn_separation(n: int) -> VnSeparation:
    """Evaluate v_n and v_n' under phi_n by folding maps, cross-checked against the table."""
    v, v2 = vn_pair(n)
    phi = phi_n(n)
    fv, fv2 = fold_word(v, phi), fold_word(v2, phi)
    sn = build_sn(n)
    ids = {x: sn.id(f) for x, f in phi.items()}
    tv = sn.S.product(*(ids[x] for x in v))
    tv2 = sn.S.product(*(ids[x] for x in v2))
    agrees = sn.S.payload[tv] == fv and sn.S.payload[tv2] == fv2
    return VnSeparation(n, fv, fv2, agrees)


# ----------------------------------------------------------------------------
# reference data for the filters separating idempotents of D in T_n(k)


def _span(a: int, b: int) -> list[int]:
    return list(range(a, b + 1))


def _bs_except(n: int, skip) -> tuple[str, ...]:
    return tuple(f"B{i}" for i in range(1, n + 1) if i not in skip)


def _two_classes(n: int, first) -> tuple[tuple[int, ...], ...]:
    first = tuple(sorted(set(first)))
    rest = tuple(i for i in range(degree(n)) if i not in first)
    return tuple(sorted((first, rest)))


@dataclass(frozen=True)
class TauReference:
    """A filter of T_n(k) over D and the expected tau on eta indices."""

    filter: tuple[str, ...]
    classes: tuple[tuple[int, ...], ...]
    params: dict


def tau_references(n: int, k: int) -> list[TauReference]:
    out = []
    for m in range(1, k):
        if m + 1 < k:
            c1 = (_span(0, m - 1) + _span(m + 1, k - 1) + [n + m + 1]
                  + _span(n + k + 1, 2 * n + m + 1) + _span(2 * n + m + 3, 2 * n + k + 1))
            out.append(TauReference(_bs_except(n, {m, m + 1, k}), _two_classes(n, c1), {"m": m}))
        c1 = _span(0, m - 1) + _span(n + m + 1, 2 * n + m + 1)
        out.append(TauReference(_bs_except(n, {m, k}), _two_classes(n, c1), {"m": m}))
        if m > 1:
            c1 = (_span(0, m - 2) + _span(m, k - 1) + [n + m]
                  + _span(n + k + 1, 2 * n + m) + _span(2 * n + m + 2, 2 * n + k + 1))
            out.append(TauReference(_bs_except(n, {m - 1, m, k}), _two_classes(n, c1), {"m": m}))
    c1 = _span(0, k - 1) + _span(n + 1, n + k) + _span(2 * n + 2, 2 * n + k + 1)
    out.append(TauReference(("E",), _two_classes(n, c1), {}))
    out.append(TauReference(_bs_except(n, {k}) + ("C",), _two_classes(n, _span(0, n + k)), {}))
    return out


@dataclass(frozen=True)
class SeparationClaim:
    """Filter ``filter`` avoids ``X`` and separates eta_s from eta_t for s in ``s``, t in ``t``."""

    X: str
    s: tuple[int, ...]
    t: tuple[int, ...]
    filter: tuple[str, ...]
    note: str = ""


def separation_claims(n: int, k: int, literal: bool = False) -> list[SeparationClaim]:
    """Explicit separating filters for obstructions over D in T_n(k).

    With ``literal=True`` the source sets are taken as first stated; three
    of them are too wide (see ``LITERAL_CLAIM_EXCEPTIONS``).
    """
    out = []

    def add(X, s, t, filt, note=""):
        t = tuple(x for x in t if x not in s)
        if s and t:
            out.append(SeparationClaim(X, tuple(s), t, tuple(filt), note))

    for m in range(1, k):
        X = f"B{m}"
        up = [m - 1, n + 1 + m, 2 * n + 1 + m]  # domain of chi_m chi_m^-1
        down = [m, n + m, 2 * n + 2 + m]  # domain of chi_m^-1 chi_m
        right = _span(k, n) + _span(n + k + 1, 2 * n + 1) + _span(2 * n + k + 2, 3 * n + 2)
        if m + 1 < k:
            add(X, up, _span(n + m + 2, n + k), _bs_except(n, {m, m + 1, k}))
            add(X, down, _span(m + 1, k - 1) + _span(2 * n + m + 3, 2 * n + k + 1),
                _bs_except(n, {m, m + 1, k}))
        add(X, up, _span(m, k - 1) + _span(n + 1, n + m) + _span(2 * n + m + 2, 2 * n + k + 1),
            _bs_except(n, {m, k}))
        add(X, down, _span(0, m - 1) + _span(n + m + 1, n + k) + _span(2 * n + 2, 2 * n + m + 1),
            _bs_except(n, {m, k}))
        if m > 1:
            add(X, up, _span(0, m - 2) + _span(2 * n + 2, 2 * n + m), _bs_except(n, {m - 1, m, k}))
            add(X, down, _span(n + 1, n + m - 1), _bs_except(n, {m - 1, m, k}))
        add(X, up, right, ("E",))
        add(X, down, right, ("E",))

    for m in range(1, n + 1):
        filt = ("E",) if m == k else _bs_except(n, {k})
        add("C", [m - 1, 2 * n + m + 1], [n + m + 1], filt)
        add("C", [n + m + 1], [m - 1, 2 * n + m + 1], filt)
    s = [k - 1, n + k + 1, 2 * n + k + 1]
    add("C", s, _span(k, n) + _span(n + 1, n + k) + _span(2 * n + k + 2, 3 * n + 2),
        _bs_except(n, {k}))
    if k < n:
        add("C", s if literal else [n + k + 1], _span(n + k + 2, 2 * n + 1),
            _bs_except(n, {k, k + 1}), "outer points need another filter")
    if k > 1:
        add("C", s if literal else [k - 1, 2 * n + k + 1], _span(0, k - 2) + _span(2 * n + 2, 2 * n + k),
            _bs_except(n, {k - 1, k}), "middle point needs another filter")

    for a in range(0, n + 3):
        if not literal and ((k == 1 and a == n + 2) or (k == n and a == 0)):
            continue
        add("D", [a], [a + 2 * n], _bs_except(n, {k}) + ("C",))

    s = [n, n + 1]
    add("E", s, _span(0, k - 1) + _span(n + k + 1, 2 * n + k + 1), _bs_except(n, {k}))
    add("E", s, [3 * n + 2], _bs_except(n, {k}) + ("C",))
    if k > 1:
        add("E", s, _span(n + 2, n + k), _bs_except(n, {1, k}))
    if k < n:
        add("E", s, _span(k, n - 1) + _span(2 * n + k + 2, 3 * n + 1), _bs_except(n, {k, n}))
    return out


def literal_claim_exceptions(n: int, k: int) -> set[tuple[str, int, int]]:
    """The (X, s, t) pairs where the literal claims fail, by closed form."""
    out = set()
    if k < n:
        out |= {("C", s, t) for s in (k - 1, 2 * n + k + 1) for t in _span(n + k + 2, 2 * n + 1)}
    if k > 1:
        out |= {("C", n + k + 1, t) for t in _span(0, k - 2) + _span(2 * n + 2, 2 * n + k)}
    if k == 1:
        out.add(("D", n + 2, 3 * n + 2))
    if k == n:
        out.add(("D", 0, 2 * n))
    return out


def relation_references(n: int) -> dict[tuple[str, str, str], list[tuple]]:
    """Expected pi/rho relations of S_n, modulo the diagonal.

    Each entry lists groups of idempotents ``("eta", l)`` or ``("zeta", i)``;
    points are related iff they share a group.
    """

    def groups(*gs):
        return [tuple(g) for g in gs]

    out = {}
    for i in range(1, n + 1):
        B = f"B{i}"
        out["pi", B, "C"] = groups([("zeta", i - 1), ("zeta", i)])
        out["rho", B, "C"] = []
        out["pi", B, "D"] = groups([("eta", i - 1), ("eta", i)],
                                   [("eta", n + i), ("eta", n + 1 + i)],
                                   [("eta", 2 * n + 1 + i), ("eta", 2 * n + 2 + i)])
        out["rho", B, "D"] = groups([("eta", i - 1), ("eta", n + 1 + i), ("eta", 2 * n + 1 + i)],
                                    [("eta", i), ("eta", n + i), ("eta", 2 * n + 2 + i)])
    out["pi", "C", "D"] = groups([("eta", j) for j in range(n + 1)],
                                 [("eta", j) for j in range(2 * n + 2, 3 * n + 3)])
    out["rho", "C", "D"] = groups(*[[("eta", j), ("eta", 2 * n + 2 + j)] for j in range(n + 1)])
    out["pi", "E", "D"] = groups([("eta", n), ("eta", 2 * n + 1)], [("eta", n + 1), ("eta", 2 * n + 2)])
    out["rho", "E", "D"] = groups([("eta", n), ("eta", n + 1)], [("eta", 2 * n + 1), ("eta", 2 * n + 2)])
    for A in build_sn(n).blocks:
        out["rho", A, A] = []
    return out


def check_relation_references(n: int) -> list[str]:
    """Mismatches between computed pi/rho on S_n and ``relation_references`` (modulo the diagonal)."""
    from .kadourek import Relations

    sn = build_sn(n)
    G = green(sn.S)
    cls = block_classes(G, sn.blocks)
    rel = Relations(sn.S, G)
    bad = []
    for (kind, X, Y), gs in relation_references(n).items():
        got = (rel.pi if kind == "pi" else rel.rho)(cls[X], cls[Y])
        want = set()
        for g in gs:
            ids = [sn.eta(i) if t == "eta" else sn.zeta(i) for t, i in g]
            want |= {(a, b) for a in ids for b in ids}
        diag = {(e, e) for e in G.idempotents_in(cls[Y])}
        if set(got) | diag != want | diag:
            bad.append(f"{kind}({X},{Y})")
    return bad


def _tn_context(n: int, k: int):
    from .kadourek import Relations

    T = tn(n, k)
    G = green(T.S)
    cls = block_classes(G, T.blocks)
    return T, G, cls, Relations(T.S, G)


def check_tau_references(n: int, k: int) -> list[str]:
    from .kadourek import is_filter, tau

    T, G, cls, rel = _tn_context(n, k)
    Y = cls["D"]
    point = {T.eta(l): l for l in range(degree(n))}
    bad = []
    for ref in tau_references(n, k):
        K = [cls[b] for b in ref.filter]
        if not is_filter(G, K):
            bad.append(f"{ref.filter} is not a filter")
            continue
        part = tau(rel, K, Y)
        got = tuple(sorted(tuple(sorted(point[e] for e in blk)) for blk in part.blocks))
        if got != ref.classes:
            bad.append(f"tau over {','.join(ref.filter)} {ref.params}")
    return bad


def check_separation_claims(n: int, k: int, literal: bool = False) -> set[tuple[str, int, int]]:
    """(X, s, t) triples where a claimed filter contains X or fails to separate."""
    from .kadourek import is_filter, tau

    T, G, cls, rel = _tn_context(n, k)
    Y = cls["D"]
    failed = set()
    cache = {}
    for c in separation_claims(n, k, literal):
        K = frozenset(cls[b] for b in c.filter)
        if K not in cache:
            if not is_filter(G, K):
                raise AssertionError(f"{c.filter} is not a filter")
            cache[K] = tau(rel, K, Y)
        part = cache[K]
        for s in c.s:
            for t in c.t:
                if cls[c.X] in K or part.same(T.eta(s), T.eta(t)):
                    failed.add((c.X, s, t))
    return failed


@dataclass
class TnMembership:
    n: int
    members: dict[int, bool]
    sn_member: bool
    tau_mismatches: list[str]
    relation_mismatches: list[str]
    claim_failures: dict[int, set]

    @property
    def holds(self) -> bool:
        return (all(self.members.values()) and not self.sn_member and not self.tau_mismatches
                and not self.relation_mismatches and not any(self.claim_failures.values()))


def verify_tn_membership(n: int) -> TnMembership:
    """Every T_n(k) passes the membership test, S_n fails it, and the reference
    partitions, relations and separating filters agree with computation."""
    from .kadourek import in_var_b21

    members, taus, claims = {}, [], {}
    for k in range(1, n + 1):
        members[k] = in_var_b21(tn(n, k).S).member
        taus += [f"k={k}: {m}" for m in check_tau_references(n, k)]
        claims[k] = check_separation_claims(n, k)
    return TnMembership(n=n, members=members, sn_member=in_var_b21(build_sn(n).S).member,
                        tau_mismatches=taus, relation_mismatches=check_relation_references(n),
                        claim_failures=claims)
