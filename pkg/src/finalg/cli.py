"""Command-line entry point: ``finalg <command> ...``.

Exit codes: 0 pass (or Satisfied / member), 1 a check failed (or a
counterexample / non-member), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .algebra import InverseSemigroup, dumps, load, restrict
from .green import green, render_eggbox
from .kadourek import (
    DISPLAY,
    PROSE,
    NotCombinatorialError,
    describe_obligation,
    enumerate_filters,
    in_var_b21,
)
from .snfam import block_classes, build_sn, expected_size
from .suite import CATALOG_NAMES, Settings, resolve, run_checks, suite_checks
from .terms import (
    BudgetExceeded,
    TermSyntaxError,
    UnsupportedSignature,
    check_identity,
    parse_identity,
    vn_pair,
)

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_algebra(spec: str, args):
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            return load(path)
        except OSError as e:
            raise UsageError(f"cannot read {spec}: {e}") from None
    try:
        return resolve(spec, args.max_size)
    except (KeyError, ValueError) as e:
        raise UsageError(f"{e.args[0]}; known names: {', '.join(CATALOG_NAMES)}") from None


def _emit(args, text: str, doc: dict):
    if args.format == "machine":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(text)


def expand_macros(text: str) -> str:
    """Replace ``vN`` and ``vN'`` by the words of the v_n family."""

    def sub(m):
        v, v2 = vn_pair(int(m.group(1)))
        return "(" + "*".join(v2 if m.group(2) else v) + ")"

    return re.sub(r"\bv(\d+)(')?", sub, text)


def cmd_build(args) -> int:
    A = _load_algebra(args.name, args)
    text = dumps(A)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {A.kind} with {A.size} elements to {args.out}", file=sys.stderr)
    else:
        print(text)
    return OK


def cmd_check_identity(args) -> int:
    A = _load_algebra(args.algebra, args)
    text = expand_macros(args.identity)
    try:
        ident = parse_identity(text)
        r = check_identity(A, ident, budget=args.budget)
    except TermSyntaxError as e:
        raise UsageError(f"cannot parse identity: {e}") from None
    except UnsupportedSignature as e:
        raise UsageError(str(e)) from None
    except BudgetExceeded as e:
        raise UsageError(f"{e}; raise --budget") from None
    doc = {"identity": str(ident), "verdict": "satisfied" if r.holds else "counterexample",
           "checked": r.checked}
    if not r.holds:
        doc["counterexample"] = {x: A.labels[v] for x, v in r.counterexample.items()}
        doc["values"] = [A.labels[v] for v in r.values]
    _emit(args, r.describe(A), doc)
    return OK if r.holds else FAILED


def cmd_green(args) -> int:
    A = _load_algebra(args.algebra, args)
    G = green(A)
    doc = {
        "size": A.size,
        "d_classes": [[A.labels[s] for s in c] for c in G.d_classes],
        "idempotents": [A.labels[e] for e in G.idempotents],
        "d_order": [[X, Y] for X in range(G.num_d_classes) for Y in range(G.num_d_classes)
                    if X != Y and G.d_leq[Y, X]],
    }
    _emit(args, render_eggbox(A, G), doc)
    return OK


def cmd_kadourek(args) -> int:
    S = _load_algebra(args.algebra, args)
    if not isinstance(S, InverseSemigroup):
        raise UsageError(f"{args.algebra} is not an inverse semigroup")
    if args.drop_dclass:
        G = green(S)
        drop = set()
        for label in args.drop_dclass:
            try:
                drop.update(G.d_classes[G.d[S.index(label)]])
            except (KeyError, ValueError):
                raise UsageError(f"no element labelled {label!r}") from None
        try:
            S, _ = restrict(S, [s for s in range(S.size) if s not in drop])
        except Exception as e:
            raise UsageError(f"removing those D-classes does not leave a subsemigroup: {e}") from None
    G = green(S)
    try:
        m = in_var_b21(S, G, reading=args.reading)
    except NotCombinatorialError as e:
        raise UsageError(str(e)) from None
    lines = [f"{'member' if m.member else 'not a member'}: {m.reason}"]
    doc = {"size": S.size, "member": m.member, "reason": m.reason}
    if m.subgroup:
        doc["subgroup"] = [S.labels[s] for s in m.subgroup]
        lines.append("subgroup: " + ", ".join(doc["subgroup"]))
    if m.star is not None:
        doc["separated"] = len(m.star.separations)
        lines.append(f"obstructions separated: {len(m.star.separations)}")
        if m.star.failure is not None:
            ob = m.star.failure
            doc["failure"] = {"X": [S.labels[s] for s in G.d_classes[ob.X]][:1],
                              "Y": [S.labels[s] for s in G.d_classes[ob.Y]][:1],
                              "e": S.labels[ob.e], "f": S.labels[ob.f], "g": S.labels[ob.g],
                              "filters_tried": len(_filters_avoiding(G, ob))}
            lines.append("unseparated: " + describe_obligation(S, G, ob))
    _emit(args, "\n".join(lines), doc)
    return OK if m.member else FAILED


def _filters_avoiding(G, ob):
    return [K for K in enumerate_filters(G, ob.Y) if ob.X not in K]


def cmd_sn(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("--n must be at least 2")
    if not (args.report or args.verify):
        args.report = True
    status = OK
    texts, doc = [], {"n": n}
    if args.report:
        sn = build_sn(n, args.max_size)
        G = green(sn.S)
        cls = block_classes(G, sn.blocks)
        names = list(cls)
        covers = [(a, b) for a in names for b in names if a != b and G.d_leq[cls[b], cls[a]]
                  and not any(c not in (a, b) and G.d_leq[cls[b], cls[c]] and G.d_leq[cls[c], cls[a]]
                              for c in names)]
        blocks = {b: {"size": len(sn.blocks[b]), "idempotents": len(G.idempotents_in(cls[b]))}
                  for b in names}
        doc.update(size=sn.S.size, expected_size=expected_size(n), blocks=blocks,
                   covers=[list(c) for c in covers])
        texts.append(f"|S_{n}| = {sn.S.size} (4n + (n+1)^2 + (3n+3)^2 + 5 = {expected_size(n)})")
        texts += [f"  {b}: {v['size']} elements, {v['idempotents']} idempotents" for b, v in blocks.items()]
        texts.append("D-order covers: " + ", ".join(f"{a} > {b}" for a, b in covers))
    if args.verify:
        checks = [c for c in suite_checks(Settings(n_max=n, budget=args.budget, max_size=args.max_size))
                  if c.name.endswith(f":{n}")]
        report = run_checks(checks, jobs=args.jobs)
        doc["verification"] = report.canonical()
        texts.append(report.to_text())
        status = OK if report.passed else FAILED
    _emit(args, "\n".join(texts), doc)
    return status


def cmd_verify_suite(args) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    checks = suite_checks(Settings(n_max=args.n_max, budget=args.budget, max_size=args.max_size))
    if args.list:
        for c in checks:
            print(f"{c.name}  {c.claim}")
        return OK
    if args.only:
        known = {c.name for c in checks} | {c.name.split(":")[0] for c in checks}
        unknown = [o for o in args.only if o not in known]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    report = run_checks(checks, args.only, args.jobs)
    if args.format == "machine":
        print(report.to_json(timing=not args.no_timing))
    else:
        print(report.to_text(timing=not args.no_timing))
    return OK if report.passed else FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finalg", description="Finite semigroup and ai-semiring workbench.")
    p.add_argument("--format", choices=["text", "machine"], default="text")
    p.add_argument("--budget", type=int, default=10**8, help="max assignments per identity check")
    p.add_argument("--max-size", type=int, default=1_000_000, help="closure size cap")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for the suite")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a catalog algebra as JSON")
    b.add_argument("name", help="one of " + ", ".join(CATALOG_NAMES))
    b.add_argument("-o", "--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check-identity", help="test an identity by exhaustion")
    c.add_argument("algebra", help="catalog name or algebra file")
    c.add_argument("identity", help="e.g. 'x + x*x = x*x'; vN and vN' expand to the v_n words")
    c.set_defaults(func=cmd_check_identity)

    g = sub.add_parser("green", help="egg-box diagrams and the D-class order")
    g.add_argument("algebra")
    g.set_defaults(func=cmd_green)

    k = sub.add_parser("kadourek", help="membership in the inverse-semigroup variety of B21")
    k.add_argument("algebra")
    k.add_argument("--drop-dclass", action="append", metavar="LABEL",
                   help="remove the D-class of this element first (repeatable)")
    k.add_argument("--reading", choices=[PROSE, DISPLAY], default=PROSE)
    k.set_defaults(func=cmd_kadourek)

    s = sub.add_parser("sn", help="the semigroups S_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--report", action="store_true", help="sizes, D-order, idempotent counts")
    s.add_argument("--verify", action="store_true", help="run every check for this n")
    s.set_defaults(func=cmd_sn)

    v = sub.add_parser("verify-paper", help="run the reproduction suite")
    v.add_argument("--n-max", type=int, default=3)
    v.add_argument("--only", action="append", metavar="CHECK")
    v.add_argument("--list", action="store_true", help="list check names and exit")
    v.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    v.set_defaults(func=cmd_verify_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    if args.budget < 1 or args.max_size < 1 or args.jobs < 1:
        print("error: --budget, --max-size and --jobs must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
