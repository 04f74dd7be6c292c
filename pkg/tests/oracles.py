"""Slow, table-free reference implementations used to cross-check the library."""

from itertools import chain, combinations, product


def dict_compose(f: dict, g: dict) -> frozenset:
    return frozenset((x, g[y]) for x, y in f.items() if y in g)


def dict_invert(f) -> frozenset:
    return frozenset((y, x) for x, y in f)


def set_closure(gens: list[dict], with_inverses=True) -> set[frozenset]:
    """Closure of partial injections kept as frozensets of pairs."""
    seeds = {frozenset(g.items()) for g in gens}
    if with_inverses:
        seeds |= {dict_invert(g) for g in list(seeds)}
    found = set(seeds)
    frontier = set(seeds)
    while frontier:
        new = set()
        for f in frontier:
            for g in list(found):
                for h in (dict_compose(dict(f), dict(g)), dict_compose(dict(g), dict(f))):
                    if h not in found:
                        new.add(h)
        found |= new
        frontier = new
    return found


def sn_generator_dicts(n: int) -> list[dict]:
    gens = [{n: 2 * n + 1, n + 1: 2 * n + 2}]
    for i in range(1, n + 1):
        gens.append({i - 1: i, n + 1 + i: n + i, 2 * n + 1 + i: 2 * n + 2 + i})
    return gens


def two_sided_ideals(mul) -> list[frozenset]:
    """S^1 s S^1 for every s, by explicit products."""
    n = len(mul)
    out = []
    for s in range(n):
        left = {s} | {mul[a][s] for a in range(n)}
        both = set(left) | {mul[a][b] for a in left for b in range(n)}
        out.append(frozenset(both))
    return out


def brute_filters(up: list, leq) -> list[frozenset]:
    """Every subset of ``up`` closed upwards; ``leq(a, b)`` means a <= b."""
    out = []
    for K in chain.from_iterable(combinations(up, r) for r in range(len(up) + 1)):
        Ks = set(K)
        if all(b in Ks for a in Ks for b in up if leq(a, b)):
            out.append(frozenset(K))
    return out


def naive_identity(mul, lhs_word, rhs_word):
    """First counterexample (lexicographic over first-occurrence variables) or None."""
    names = list(dict.fromkeys(list(lhs_word) + list(rhs_word)))
    n = len(mul)

    def ev(w, env):
        r = env[w[0]]
        for x in w[1:]:
            r = mul[r][env[x]]
        return r

    for values in product(range(n), repeat=len(names)):
        env = dict(zip(names, values))
        if ev(lhs_word, env) != ev(rhs_word, env):
            return env
    return None


def naive_jumps(w) -> set:
    out = set()
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            G = set(w[i + 1:j])
            if w[i] not in G and w[j] not in G:
                out.add((w[i], tuple(sorted(G)), w[j]))
    return out


def union_closure(points, pairs) -> set[frozenset]:
    """Equivalence classes generated by ``pairs`` via repeated merging."""
    classes = [{p} for p in points]
    for a, b in pairs:
        ca = next((c for c in classes if a in c), None)
        cb = next((c for c in classes if b in c), None)
        if ca is None or cb is None or ca is cb:
            continue
        ca |= cb
        classes.remove(cb)
    return {frozenset(c) for c in classes}
