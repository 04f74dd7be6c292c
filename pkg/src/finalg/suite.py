"""The reproduction suite: named checks, each returning a verdict and detail."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from . import catalog
from .algebra import Semigroup, additive_reduct, is_ideal, multiplicative_reduct, verify
from .green import green, is_combinatorial, nat_addition
from .kadourek import recheck, star_condition
from .pinj import UNDEFINED, PartialInjection, compose, invert
from .snfam import (
    build_sn,
    dclass_shape_check,
    expected_size,
    tn,
    verify_formulas,
    verify_tn_membership,
    verify_vn_separation,
)
from .terms import (
    TIMES_ONLY,
    Identity,
    a21_satisfies,
    all_words,
    check_identity,
    parse_identity,
    vn_identity,
    vn_pair,
    word_to_term,
)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    claim: str
    status: str
    detail: str = ""
    elapsed: float = 0.0

    def canonical(self) -> dict:
        return {"name": self.name, "claim": self.claim, "status": self.status, "detail": self.detail}


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.checks if c.status != SKIPPED)

    def canonical(self) -> dict:
        return {"verdict": PASS if self.passed else FAIL,
                "checks": [c.canonical() for c in self.checks]}

    def to_json(self, timing: bool = True) -> str:
        doc = self.canonical()
        if timing:
            for c, d in zip(self.checks, doc["checks"]):
                d["elapsed"] = round(c.elapsed, 3)
        return json.dumps(doc, indent=2, ensure_ascii=False)

    def to_text(self, timing: bool = True) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = []
        for c in self.checks:
            t = f"  ({c.elapsed:.2f}s)" if timing else ""
            lines.append(f"{c.status.upper():7} {c.name.ljust(width)}{t}  {c.claim}")
            if c.detail:
                lines.extend("          " + d for d in c.detail.splitlines())
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Check:
    name: str
    claim: str
    fn: Callable[[], tuple[bool, str]]


@dataclass
class Settings:
    n_max: int = 3
    budget: int = 10**8
    max_size: int = 1_000_000


# ----------------------------------------------------------------------------
# individual checks; each returns (ok, detail)


def catalog_sizes() -> tuple[bool, str]:
    sizes = [catalog.end_chain(m).size for m in (1, 2, 3, 4)]
    R = catalog.end_chain(3)
    G = green(multiplicative_reduct(R))
    d_sizes = sorted(len(c) for c in G.d_classes)
    # D-classes of End(C_m) are exactly the rank classes
    ranks_ok = all(len({f.rank() for f in (R.payload[s] for s in c)}) == 1 for c in G.d_classes)
    e0 = catalog.end0_chain(3).size
    ok = sizes == [1, 3, 10, 35] and d_sizes == [1, 3, 6] and ranks_ok and e0 == 6
    return ok, f"|End(C_m)| m=1..4: {sizes}; End(C_3) D-class sizes {d_sizes}; |End0(C_3)| = {e0}"


def default_axiom_algebras(n_max: int = 3, max_size: int = 1_000_000) -> list[tuple[str, Semigroup]]:
    out = [(f"end-chain:{m}", catalog.end_chain(m)) for m in (1, 2, 3, 4)]
    out += [("end0-chain:3", catalog.end0_chain(3)), ("a21", catalog.a21()), ("b21", catalog.b21())]
    out += [(f"nat(sn:{n})", nat_addition(build_sn(n, max_size).S)) for n in range(2, n_max + 1)]
    return out


def axiom_suites(algebras: list[tuple[str, Semigroup]] | None = None) -> tuple[bool, str]:
    algebras = algebras if algebras is not None else default_axiom_algebras()
    bad = []
    for name, A in algebras:
        v = verify(A)
        if v is not None:
            bad.append(f"{name}: {v.law} fails at {', '.join(A.labels[i] for i in v.witness)}")
    return not bad, "\n".join(bad) or f"{len(algebras)} algebras satisfy their axioms"


def identity_contrasts() -> tuple[bool, str]:
    A, E0 = catalog.a21(), catalog.end0_chain(3)
    sq = parse_identity("x + x*x = x*x")
    ab = parse_identity("x + x*x = x")
    res = [check_identity(A, sq), check_identity(E0, sq), check_identity(E0, ab), check_identity(A, ab)]
    ok = res[0].holds and not res[1].holds and res[2].holds and not res[3].holds
    detail = (f"x+x^2=x^2: a21 {res[0].describe(A)}; end0-chain:3 {res[1].describe(E0)}\n"
              f"x+x^2=x: end0-chain:3 {res[2].describe(E0)}; a21 {res[3].describe(A)}")
    return ok, detail


def brandt_divides_a21_square() -> tuple[bool, str]:
    ch = catalog.b21_division_chain()
    outside = ch.B.size - len(ch.N)
    ideal_ok = all(is_ideal(R, ch.upper_ideal)
                   for R in (multiplicative_reduct(ch.B_mod_N), additive_reduct(ch.B_mod_N)))
    ok = outside == 12 and ch.B_mod_N.size == 13 and ideal_ok and ch.isomorphism is not None
    return ok, (f"|B| = {ch.B.size}, {outside} pairs outside N, |B/N| = {ch.B_mod_N.size}, "
                f"8-element set ideal in both reducts: {ideal_ok}, quotient ~ b21: {ch.isomorphism is not None}")


def sn_construction(n: int, max_size: int = 1_000_000) -> tuple[bool, str]:
    sn = build_sn(n, max_size)
    problems = []
    if sn.S.size != expected_size(n):
        problems.append(f"size {sn.S.size} != {expected_size(n)}")
    for name, v in (("formulas", verify_formulas(n)), ("D-classes", dclass_shape_check(n))):
        if v is not None:
            problems.append(f"{name}: {v.law}")
    if not is_combinatorial(sn.S):
        problems.append("not combinatorial")
    return not problems, "\n".join(problems) or f"|S_{n}| = {sn.S.size}; formulas and D-poset agree"


def sn_aperiodic(n: int, budget: int = 10**8) -> tuple[bool, str]:
    S = build_sn(n).S
    r = check_identity(S, parse_identity("x*x = x*x*x"), budget=budget)
    return r.holds, f"x^2=x^3 on S_{n}: {r.describe(S)}"


def vn_separation(n: int) -> tuple[bool, str]:
    r = verify_vn_separation(n)
    image = r.value_v(0)
    return r.holds, (f"v_{n}: 0 -> {image if image != UNDEFINED else 'undefined'}; "
                     f"v_{n}' = {r.value_v_prime}; table evaluation agrees: {r.table_agrees}")


def tn_membership(n: int) -> tuple[bool, str]:
    r = verify_tn_membership(n)
    for k in range(1, n + 1):
        T = tn(n, k).S
        res = star_condition(T)
        recheck(T, res)
    S = build_sn(n).S
    recheck(S, star_condition(S))
    lines = [f"T_{n}(k) members: {r.members}; S_{n} member: {r.sn_member}"]
    lines += [f"tau mismatch {m}" for m in r.tau_mismatches]
    lines += [f"relation mismatch {m}" for m in r.relation_mismatches]
    lines += [f"k={k}: claimed filter fails for {sorted(f)}" for k, f in r.claim_failures.items() if f]
    return r.holds, "\n".join(lines)


def end_chain_vn(budget: int = 10**8) -> tuple[bool, str]:
    R = multiplicative_reduct(catalog.end_chain(3))
    r = check_identity(R, vn_identity(2), budget=budget)
    a21_ok = {n: a21_satisfies(*vn_pair(n)) for n in (2, 3, 4)}
    A = multiplicative_reduct(catalog.a21())
    disagree = []
    words = all_words(["x", "y"], 5)
    for i, w in enumerate(words):
        for w2 in words[i:]:
            ident = Identity(word_to_term(w), word_to_term(w2), TIMES_ONLY)
            if a21_satisfies(w, w2) != check_identity(A, ident).holds:
                disagree.append(f"{''.join(w)} = {''.join(w2)}")
    ok = r.holds and r.checked == 10**4 and all(a21_ok.values()) and not disagree
    detail = (f"End(C_3) v_2=v_2': {r.describe(R)}; A21 satisfies v_n=v_n' for n=2,3,4: "
              f"{a21_ok}; jump criterion disagreements: {len(disagree)} of "
              f"{len(words) * (len(words) + 1) // 2} pairs")
    if disagree:
        detail += "\n" + "\n".join(disagree[:5])
    return ok, detail


def lattice_remark() -> tuple[bool, str]:
    bad = [(m, v) for m in (2, 3) if (v := catalog.combined_lattice_check(m)) is not None]
    return not bad, "; ".join(f"m={m}: {v.law}" for m, v in bad) or "m=2,3: distributive lattice; min and max additions conjugate"


def random_pinj_laws(cases: int = 10**4, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(cases):
        deg = int(rng.integers(1, 8))
        f, g, h = (_random_pinj(rng, deg) for _ in range(3))
        fi = invert(f)
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            bad += 1
        if compose(compose(f, fi), f) != f or compose(compose(fi, f), fi) != fi:
            bad += 1
        if invert(compose(f, g)) != compose(invert(g), fi):
            bad += 1
    return bad == 0, f"{cases} random cases, {bad} violations"


def _random_pinj(rng, deg):
    perm = rng.permutation(deg)
    keep = rng.random(deg) < 0.7
    return PartialInjection(tuple(int(p) if k else UNDEFINED for p, k in zip(perm, keep)))


def serialization_roundtrip() -> tuple[bool, str]:
    from .algebra import dumps, loads

    names = ["a21", "b21", "brandt", "end-chain:3", "sn:2"]
    bad = []
    for name in names:
        A = resolve(name)
        B = loads(dumps(A))
        same = (type(A) is type(B) and A.labels == B.labels
                and all(np.array_equal(A.op(o), B.op(o)) for o in A.binary_ops))
        if not same:
            bad.append(name)
    return not bad, f"round-trip failures: {bad}" if bad else f"{len(names)} algebras round-trip"


# ----------------------------------------------------------------------------
# catalog names


def resolve(name: str, max_size: int = 1_000_000) -> Semigroup:
    """Catalog name to algebra: end-chain:m, end0-chain:m, a21, b21, brandt, sn:n, tn:n:k."""
    head, *args = name.split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise KeyError(f"bad catalog name {name!r}") from None
    table = {
        ("end-chain", 1): lambda: catalog.end_chain(*nums),
        ("end0-chain", 1): lambda: catalog.end0_chain(*nums),
        ("a21", 0): catalog.a21,
        ("b21", 0): catalog.b21,
        ("brandt", 0): catalog.brandt_monoid,
        ("sn", 1): lambda: build_sn(nums[0], max_size).S,
        ("tn", 2): lambda: tn(*nums).S,
    }
    key = (head, len(nums))
    if key not in table:
        raise KeyError(f"unknown catalog name {name!r}")
    return table[key]()


CATALOG_NAMES = ("end-chain:m", "end0-chain:m", "a21", "b21", "brandt", "sn:n", "tn:n:k")


# ----------------------------------------------------------------------------
# the suite


def suite_checks(settings: Settings | None = None) -> list[Check]:
    s = settings or Settings()
    ns = range(2, s.n_max + 1)
    checks = [
        Check("catalog-sizes", "End(C_m) has 1, 3, 10, 35 elements; End(C_3) D-classes have sizes 1, 6, 3",
              catalog_sizes),
        Check("axiom-suites", "catalog algebras and nat-addition on S_n satisfy the ai-semiring axioms",
              partial(_axioms_default, s.n_max, s.max_size)),
        Check("identity-contrasts", "x+x^2=x^2 separates A21 from End0(C_3), x+x^2=x the other way",
              identity_contrasts),
        Check("brandt-divides-a21-square", "B21 is a quotient of a subsemiring of A21 x A21",
              brandt_divides_a21_square),
    ]
    checks += [Check(f"sn-construction:{n}", f"S_{n} has {expected_size(n)} elements with the stated products and D-poset",
                     partial(sn_construction, n, s.max_size)) for n in ns]
    checks += [Check(f"sn-aperiodic:{n}", f"S_{n} satisfies x^2=x^3", partial(sn_aperiodic, n, s.budget))
               for n in ns]
    checks += [Check(f"vn-separation:{n}", f"phi_{n} sends v_{n} to a map 0 -> {3 * n + 2} and v_{n}' to 0",
                     partial(vn_separation, n)) for n in ns]
    checks += [Check(f"tn-membership:{n}", f"every T_{n}(k) lies in the variety of B21, S_{n} does not",
                     partial(tn_membership, n)) for n in ns]
    checks += [
        Check("end-chain-vn", "End(C_3) satisfies v_2=v_2'; jump criterion agrees with exhaustion on A21",
              partial(end_chain_vn, s.budget)),
        Check("lattice-remark", "max and min on End(C_m) form a distributive lattice; the two semirings are isomorphic",
              lattice_remark),
        Check("random-pinj-laws", "partial injections compose associatively with unique inverses",
              random_pinj_laws),
        Check("serialization-roundtrip", "algebra files round-trip exactly", serialization_roundtrip),
    ]
    return checks


def _axioms_default(n_max, max_size):
    return axiom_suites(default_axiom_algebras(n_max, max_size))


def run_check(check: Check) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = check.fn()
        status = PASS if ok else FAIL
    except Exception as e:  # a crashing check is a failed check
        status, detail = FAIL, f"{type(e).__name__}: {e}"
    return CheckResult(check.name, check.claim, status, detail, time.perf_counter() - t)


def run_checks(checks: list[Check], only: list[str] | None = None, jobs: int = 1) -> VerificationReport:
    """Run checks in declaration order; ``only`` keeps names equal to or prefixed by an entry."""

    def wanted(c):
        return only is None or any(c.name == o or c.name.startswith(o + ":") for o in only)

    selected = [c for c in checks if wanted(c)]
    if jobs > 1 and len(selected) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            done = list(ex.map(run_check, selected))
    else:
        done = [run_check(c) for c in selected]
    results = iter(done)
    return VerificationReport([next(results) if wanted(c) else CheckResult(c.name, c.claim, SKIPPED)
                               for c in checks])


def run_suite(settings: Settings | None = None, only: list[str] | None = None, jobs: int = 1) -> VerificationReport:
    return run_checks(suite_checks(settings), only, jobs)
