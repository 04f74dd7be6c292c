"""Terms, identities, exhaustive identity checking, and word combinatorics.

Grammar (whitespace insignificant)::

    identity := term "=" term
    term     := product ("+" product)*
    product  := power (["*"] power)*        juxtaposition multiplies
    power    := atom ("^" ("-1" | INT))*
    atom     := VAR | "(" term ")"
    VAR      := [a-z][a-z0-9]*

``t^k`` expands to ``k`` copies of ``t`` multiplied left-associatively.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .algebra import AiSemiring, InverseSemigroup, Semigroup

PLUS_TIMES = "plus-times"
TIMES_INVERSE = "times-inverse"
TIMES_ONLY = "times-only"
SIGNATURES = (PLUS_TIMES, TIMES_INVERSE, TIMES_ONLY)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{_wrap(self.left, Add)}*{_wrap(self.right, (Add, Mul))}"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{self.left} + {_wrap(self.right, Add)}"


@dataclass(frozen=True)
class Inv:
    child: "Term"

    def __str__(self):
        return f"{_wrap(self.child, (Add, Mul, Inv))}^-1"


Term = Union[Var, Mul, Add, Inv]
Word = tuple[str, ...]


def _wrap(t, kinds):
    return f"({t})" if isinstance(t, kinds) else str(t)


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    signature: str = PLUS_TIMES

    def __post_init__(self):
        check_signature(self.lhs, self.signature)
        check_signature(self.rhs, self.signature)

    def variables(self) -> list[str]:
        """Variables in order of first occurrence, left side first."""
        return list(dict.fromkeys(_vars_in_order(self.lhs) + _vars_in_order(self.rhs)))

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


class TermSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedSignature(TypeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


# ----------------------------------------------------------------------------
# structure


def alphabet(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Inv):
        return alphabet(t.child)
    return alphabet(t.left) | alphabet(t.right)


def _vars_in_order(t: Term) -> list[str]:
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, Inv):
        return _vars_in_order(t.child)
    return _vars_in_order(t.left) + _vars_in_order(t.right)


def signature_of(t: Term) -> str:
    """The smallest signature containing ``t``."""
    kinds = _node_kinds(t)
    if Add in kinds and Inv in kinds:
        raise UnsupportedSignature("term mixes + and ^-1")
    if Add in kinds:
        return PLUS_TIMES
    if Inv in kinds:
        return TIMES_INVERSE
    return TIMES_ONLY


def _node_kinds(t: Term) -> set:
    if isinstance(t, Var):
        return set()
    if isinstance(t, Inv):
        return {Inv} | _node_kinds(t.child)
    return {type(t)} | _node_kinds(t.left) | _node_kinds(t.right)


def check_signature(t: Term, signature: str) -> None:
    if signature not in SIGNATURES:
        raise ValueError(f"unknown signature {signature!r}")
    kinds = _node_kinds(t)
    if Add in kinds and signature != PLUS_TIMES:
        raise UnsupportedSignature(f"'+' is not allowed in a {signature} term")
    if Inv in kinds and signature != TIMES_INVERSE:
        raise UnsupportedSignature(f"'^-1' is not allowed in a {signature} term")


def word_to_term(w: Sequence[str]) -> Term:
    if not w:
        raise ValueError("words are nonempty")
    t: Term = Var(w[0])
    for x in w[1:]:
        t = Mul(t, Var(x))
    return t


def term_to_word(t: Term) -> Word:
    if isinstance(t, Var):
        return (t.name,)
    if isinstance(t, Mul):
        return term_to_word(t.left) + term_to_word(t.right)
    raise UnsupportedSignature("only products of variables flatten to words")


def power(t: Term, k: int) -> Term:
    if k < 1:
        raise ValueError("exponent must be positive")
    out = t
    for _ in range(k - 1):
        out = Mul(out, t)
    return out


# ----------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<var>[a-z][a-z0-9]*)|(?P<int>-?\d+)|(?P<op>[+*^()=]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise TermSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def term(self):
        t = self.product()
        while self.peek()[1] == "+":
            self.take()
            t = Add(t, self.product())
        return t

    def product(self):
        t = self.power()
        while True:
            kind, value, _ = self.peek()
            if value == "*":
                self.take()
                t = Mul(t, self.power())
            elif kind == "var" or value == "(":
                t = Mul(t, self.power())
            else:
                return t

    def power(self):
        t = self.atom()
        while self.peek()[1] == "^":
            self.take()
            kind, value, pos = self.take()
            if kind != "int":
                raise TermSyntaxError("expected an exponent", pos)
            k = int(value)
            if k == -1:
                t = Inv(t)
            elif k >= 1:
                t = power(t, k)
            else:
                raise TermSyntaxError(f"unsupported exponent {k}", pos)
        return t

    def atom(self):
        kind, value, pos = self.take()
        if kind == "var":
            return Var(value)
        if value == "(":
            t = self.term()
            self.take(")")
            return t
        raise TermSyntaxError(f"unexpected {value or 'end of input'!r}", pos)

    def finish(self):
        kind, value, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {value!r}", pos)


def parse_term(text: str, signature: str | None = None) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    if signature is not None:
        check_signature(t, signature)
    return t


def parse_word(text: str) -> Word:
    return term_to_word(parse_term(text, TIMES_ONLY))


def parse_identity(text: str, signature: str | None = None) -> Identity:
    if text.count("=") != 1:
        raise TermSyntaxError("an identity needs exactly one '='", text.find("=") if "=" in text else len(text))
    left, right = text.split("=")
    try:
        lhs = parse_term(left)
    except TermSyntaxError as e:
        raise TermSyntaxError(str(e).rsplit(" at position", 1)[0], e.position) from None
    try:
        rhs = parse_term(right)
    except TermSyntaxError as e:
        raise TermSyntaxError(str(e).rsplit(" at position", 1)[0], e.position + len(left) + 1) from None
    if signature is None:
        sigs = {signature_of(lhs), signature_of(rhs)} - {TIMES_ONLY}
        if len(sigs) > 1:
            raise UnsupportedSignature("identity mixes + and ^-1")
        signature = sigs.pop() if sigs else TIMES_ONLY
    return Identity(lhs, rhs, signature)


# ----------------------------------------------------------------------------
# evaluation


def _supports(A: Semigroup, t: Term) -> None:
    kinds = _node_kinds(t)
    if Add in kinds and not isinstance(A, AiSemiring):
        raise UnsupportedSignature(f"a {A.kind} has no addition")
    if Inv in kinds and not isinstance(A, InverseSemigroup):
        raise UnsupportedSignature(f"a {A.kind} has no inversion")


def _fold(t: Term, env: Mapping, A: Semigroup):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise KeyError(f"variable {t.name} is unbound") from None
    if isinstance(t, Mul):
        return A.mul[_fold(t.left, env, A), _fold(t.right, env, A)]
    if isinstance(t, Add):
        return A.add[_fold(t.left, env, A), _fold(t.right, env, A)]
    return A.inv[_fold(t.child, env, A)]


def eval_term(t: Term, assignment: Mapping[str, int], A: Semigroup):
    """Value of ``t`` under ``assignment`` (variable -> element id).

    Assignment values may also be integer arrays of a common shape, in which
    case the term is evaluated element-wise over all of them at once.
    """
    _supports(A, t)
    out = _fold(t, assignment, A)
    return int(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class IdentityResult:
    holds: bool
    checked: int
    counterexample: dict[str, int] | None = None
    values: tuple[int, int] | None = None

    def __bool__(self):
        return self.holds

    def describe(self, A: Semigroup) -> str:
        if self.holds:
            return f"Satisfied ({self.checked} assignments)"
        shown = ", ".join(f"{x}={A.labels[v]}" for x, v in self.counterexample.items())
        l, r = self.values
        return f"Counterexample: {shown}  (lhs={A.labels[l]}, rhs={A.labels[r]})"


DEFAULT_BUDGET = 10**8
CHUNK = 1 << 18


def check_identity(A: Semigroup, identity: Identity, budget: int = DEFAULT_BUDGET,
                   variables: Sequence[str] | None = None) -> IdentityResult:
    """Exhaustively test ``identity`` in ``A``.

    Assignments are enumerated lexicographically by element id, the first
    variable (in order of first occurrence) being most significant; the
    first failing assignment is returned.  At most ``budget`` assignments are
    examined: ``BudgetExceeded`` is raised only when that runs out before a
    verdict.
    """
    _supports(A, identity.lhs)
    _supports(A, identity.rhs)
    names = list(variables) if variables is not None else identity.variables()
    k = len(names)
    n = A.size
    total = n ** k
    limit = min(total, budget)
    for start in range(0, limit, CHUNK):
        idx = np.arange(start, min(start + CHUNK, limit), dtype=np.int64)
        env = {}
        rest = idx
        for pos in range(k - 1, -1, -1):
            rest, digit = np.divmod(rest, n)
            env[names[pos]] = digit.astype(np.intp)
        lhs = np.broadcast_to(_fold(identity.lhs, env, A), idx.shape)
        rhs = np.broadcast_to(_fold(identity.rhs, env, A), idx.shape)
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            b = bad[0]
            witness = {x: int(env[x][b]) for x in names}
            return IdentityResult(False, int(start + b + 1), witness, (int(lhs[b]), int(rhs[b])))
    if limit < total:
        raise BudgetExceeded(f"{n}^{k} = {total} assignments exceeds the budget of {budget}")
    return IdentityResult(True, total)


# ----------------------------------------------------------------------------
# the v_n family and rewriting


def vn_pair(n: int) -> tuple[Word, Word]:
    """``(U V Ū V U, U V Ū V U V Ū V U)`` with ``U = x1..xn``, ``V = x(n+1)..x(2n)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    U = tuple(f"x{i}" for i in range(1, n + 1))
    V = tuple(f"x{i}" for i in range(n + 1, 2 * n + 1))
    Ubar = U[::-1]
    block = U + V + Ubar + V
    return block + U, block + block + U


def vn_identity(n: int) -> Identity:
    v, w = vn_pair(n)
    return Identity(word_to_term(v), word_to_term(w), TIMES_ONLY)


def rewrite_plus_to_inv(t: Term, p: int = 2) -> Term:
    """Replace every ``u + v`` by ``(u v^-1)^p u``."""
    if p < 1:
        raise ValueError("p must be positive")
    if isinstance(t, Var):
        return t
    if isinstance(t, Inv):
        raise UnsupportedSignature("input must be a plus-times term")
    left = rewrite_plus_to_inv(t.left, p)
    right = rewrite_plus_to_inv(t.right, p)
    if isinstance(t, Mul):
        return Mul(left, right)
    return Mul(power(Mul(left, Inv(right)), p), left)


def rewrite_identity(identity: Identity, p: int = 2) -> Identity:
    return Identity(rewrite_plus_to_inv(identity.lhs, p), rewrite_plus_to_inv(identity.rhs, p),
                    TIMES_INVERSE if identity.signature == PLUS_TIMES else identity.signature)


# ----------------------------------------------------------------------------
# jumps and the word-identity criterion for A21


@dataclass(frozen=True, order=True)
class Jump:
    x: str
    between: tuple[str, ...]
    y: str

    def __post_init__(self):
        if self.x in self.between or self.y in self.between:
            raise ValueError("jump endpoints must not occur in between")

    def __str__(self):
        return f"({self.x}, {{{', '.join(self.between)}}}, {self.y})"


def first_occurrence_word(w: Sequence[str]) -> Word:
    return tuple(dict.fromkeys(w))


def last_occurrence_word(w: Sequence[str]) -> Word:
    return tuple(reversed(dict.fromkeys(reversed(w))))


def jumps_of(w: Sequence[str]) -> list[Jump]:
    """All jumps of ``w`` as a sorted list."""
    found = set()
    for i, x in enumerate(w):
        between: set[str] = set()
        for j in range(i + 1, len(w)):
            y = w[j]
            if x in between:
                break
            if y not in between:
                found.add((x, tuple(sorted(between)), y))
            between.add(y)
    return sorted(Jump(x, g, y) for x, g, y in found)


def a21_satisfies(w: Sequence[str], w2: Sequence[str]) -> bool:
    """Whether the word identity ``w = w2`` holds in the monoid A21, decided
    by comparing first/last occurrence words and jump sets."""
    return (first_occurrence_word(w) == first_occurrence_word(w2)
            and last_occurrence_word(w) == last_occurrence_word(w2)
            and jumps_of(w) == jumps_of(w2))


def all_words(letters: Iterable[str], max_length: int) -> list[Word]:
    letters = list(letters)
    out: list[Word] = [()]
    words: list[Word] = []
    for _ in range(max_length):
        out = [w + (x,) for w in out for x in letters]
        words += out
    return words
