"""Words in the Cuntz-Krieger generators and their canonical normal form.

A word is a sequence of letters s_i or s_i*.  The single oriented rewrite
rule s_i* s_j -> delta_ij sum_k A_ik s_k s_k* pushes every starred letter to
the right; the measure counting, for each starred letter, the unstarred
letters to its right drops by exactly one per step, so rewriting terminates,
and since redexes never overlap the result is strategy-independent.

Monomials s_J s_K* sharing a complete set of common followers are linearly
dependent: summing s_{Jr} s_{Kr}* over every r with A_{j_last, r} =
A_{k_last, r} = 1 gives s_J s_K* back.  A final contraction pass folds such
complete equal-coefficient families onto the shorter monomial, which makes
the normal form canonical (the unit is kept as the empty monomial and is
never expanded into sum_i s_i s_i*).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import scalars
from .errors import DimensionError, DomainError, ResourceLimitError
from .intervals import Q
from .matrix01 import ZeroOneMatrix
from .scalars import Rat, Scalar

TERM_CAP = 10**5


@dataclass(frozen=True)
class Letter:
    index: int
    starred: bool = False

    def __post_init__(self):
        if self.index < 1:
            raise DomainError("generator indices start at 1")


@dataclass(frozen=True)
class Monomial:
    J: tuple
    K: tuple

    def __post_init__(self):
        object.__setattr__(self, "J", tuple(int(j) for j in self.J))
        object.__setattr__(self, "K", tuple(int(k) for k in self.K))

    @property
    def is_unit(self) -> bool:
        return not self.J and not self.K

    def letters(self) -> tuple:
        return (tuple(Letter(j) for j in self.J)
                + tuple(Letter(k, True) for k in reversed(self.K)))

    def adjoint(self) -> "Monomial":
        return Monomial(self.K, self.J)

    def sort_key(self):
        return (len(self.J) + len(self.K), len(self.J), self.J, self.K)


UNIT = Monomial((), ())


@dataclass(frozen=True)
class NormalForm:
    terms: tuple  # tuple[(Monomial, Scalar)], sorted, no zero coefficients

    @staticmethod
    def from_dict(d: dict) -> "NormalForm":
        items = []
        for mono, coeff in d.items():
            c = scalars._as_scalar(coeff)
            if isinstance(c, Rat) and c.value == 0:
                continue
            items.append((mono, c))
        items.sort(key=lambda t: t[0].sort_key())
        return NormalForm(tuple(items))

    def as_dict(self) -> dict:
        return {m: c for m, c in self.terms}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def scaled(self, factor) -> "NormalForm":
        factor = scalars._as_scalar(factor)
        if isinstance(factor, Rat) and factor.value == 0:
            return NormalForm(())
        return NormalForm(tuple((m, scalars.mul(c, factor)) for m, c in self.terms))


ZERO_FORM = NormalForm(())
UNIT_FORM = NormalForm(((UNIT, scalars.ONE),))


# ---------------------------------------------------------------------------
# admissibility and the zero test


def _check_indices(matrix: ZeroOneMatrix, seq):
    for j in seq:
        if not 1 <= j <= matrix.n:
            raise DomainError(f"letter index {j} outside 1..{matrix.n}")


def is_admissible(matrix: ZeroOneMatrix, word) -> bool:
    """True iff every consecutive index pair is allowed by the matrix, so
    the product of unstarred generators along the word is nonzero."""
    seq = tuple(int(j) for j in word)
    _check_indices(matrix, seq)
    return all(matrix.entry(seq[t], seq[t + 1]) for t in range(len(seq) - 1))


def followers(matrix: ZeroOneMatrix, J, K) -> frozenset:
    """Letters r for which both Jr and Kr stay admissible; the unit's
    followers are all letters."""
    out = frozenset(range(1, matrix.n + 1))
    if J:
        out &= matrix.row_set(J[-1])
    if K:
        out &= matrix.row_set(K[-1])
    return out


def monomial_is_zero(matrix: ZeroOneMatrix, mono: Monomial) -> bool:
    if not is_admissible(matrix, mono.J) or not is_admissible(matrix, mono.K):
        return True
    if mono.is_unit:
        return False
    return not followers(matrix, mono.J, mono.K)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"s(\d+)(\*?)$")


def parse_word(text: str) -> tuple:
    """Parse the CLI word syntax `s1 s2* s1` into a Letter sequence."""
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise DomainError(f"cannot parse letter {tok!r} (expected like s1 or s2*)")
        letters.append(Letter(int(m.group(1)), m.group(2) == "*"))
    return tuple(letters)


def format_word(letters) -> str:
    return " ".join(f"s{l.index}{'*' if l.starred else ''}" for l in letters)


# ---------------------------------------------------------------------------
# rewriting


def _letters_of(word) -> list:
    out = []
    for l in word:
        if isinstance(l, Letter):
            out.append((l.index, l.starred))
        else:
            idx, starred = l
            out.append((int(idx), bool(starred)))
    return out


def _term_is_dead(matrix: ZeroOneMatrix, letters) -> bool:
    # adjacent unstarred s_i s_j with A_ij = 0, or starred s_i* s_j* with
    # A_ji = 0, kill the whole term
    for t in range(len(letters) - 1):
        (i, si), (j, sj) = letters[t], letters[t + 1]
        if not si and not sj and not matrix.entry(i, j):
            return True
        if si and sj and not matrix.entry(j, i):
            return True
    return False


def _find_redex(letters, strategy: str):
    rng = range(len(letters) - 1)
    if strategy == "rightmost":
        rng = reversed(rng)
    for t in rng:
        if letters[t][1] and not letters[t + 1][1]:
            return t
    return None


def _measure(letters) -> int:
    unstarred_right = 0
    total = 0
    for idx, starred in reversed(letters):
        if starred:
            total += unstarred_right
        else:
            unstarred_right += 1
    return total


def _split_normal(letters) -> Monomial:
    # no redex: unstarred prefix then starred suffix
    m = len(letters)
    cut = next((t for t, (_, starred) in enumerate(letters) if starred), m)
    J = tuple(idx for idx, _ in letters[:cut])
    K = tuple(idx for idx, _ in reversed(letters[cut:]))
    return Monomial(J, K)


def rewrite(matrix: ZeroOneMatrix, word, strategy: str = "leftmost",
            term_cap: int = TERM_CAP, trace: list | None = None) -> dict:
    """Run the rewrite to a redex-free linear combination.

    Returns a dict Monomial -> Fraction.  When `trace` is a list, the
    measure of every term picked for a step is appended before rewriting it.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise DomainError(f"unknown strategy {strategy!r}")
    start = _letters_of(word)
    for idx, _ in start:
        if not 1 <= idx <= matrix.n:
            raise DomainError(f"letter index {idx} outside 1..{matrix.n}")
    result: dict = {}
    if _term_is_dead(matrix, start):
        return result
    stack = [(Q(1), start)]
    while stack:
        if len(stack) > term_cap:
            raise ResourceLimitError(f"rewrite exceeded {term_cap} pending terms")
        coeff, letters = stack.pop()
        t = _find_redex(letters, strategy)
        if t is None:
            mono = _split_normal(letters)
            if not monomial_is_zero(matrix, mono):
                acc = result.get(mono, Q(0)) + coeff
                if acc:
                    result[mono] = acc
                else:
                    result.pop(mono, None)
            continue
        i = letters[t][0]
        j = letters[t + 1][0]
        if i != j:
            continue  # orthogonal ranges: the term is 0
        before = _measure(letters) if trace is not None else 0
        for k in matrix.row_set(i):
            child = letters[:t] + [(k, False), (k, True)] + letters[t + 2:]
            if trace is not None:
                trace.append((before, _measure(child)))
            if not _term_is_dead(matrix, child):
                stack.append((coeff, child))
    return result


def _contract(matrix: ZeroOneMatrix, combo: dict) -> dict:
    """Fold complete equal-coefficient follower families onto their parent.

    The empty parent is skipped so the unit never absorbs sum_i s_i s_i*.
    """
    combo = dict(combo)
    changed = True
    while changed:
        changed = False
        parents = {}
        for mono in combo:
            if mono.J and mono.K and mono.J[-1] == mono.K[-1]:
                parent = Monomial(mono.J[:-1], mono.K[:-1])
                parents.setdefault(parent, set()).add(mono.J[-1])
        for parent, seen in sorted(parents.items(),
                                   key=lambda kv: kv[0].sort_key(), reverse=True):
            if parent.is_unit:
                continue
            fam = followers(matrix, parent.J, parent.K)
            if not fam or not fam <= seen:
                continue
            children = [Monomial(parent.J + (r,), parent.K + (r,)) for r in fam]
            if any(c not in combo for c in children):
                continue
            c0 = combo[children[0]]
            if any(combo[c] != c0 for c in children[1:]):
                continue
            for c in children:
                del combo[c]
            acc = combo.get(parent, Q(0)) + c0
            if acc:
                combo[parent] = acc
            else:
                combo.pop(parent, None)
            changed = True
            break
    return combo


def normalize(matrix: ZeroOneMatrix, word, strategy: str = "leftmost",
              contract: bool = True, term_cap: int = TERM_CAP) -> NormalForm:
    """Normal form of a word: rewrite to the monomial span, then contract."""
    combo = rewrite(matrix, word, strategy, term_cap)
    if contract:
        combo = _contract(matrix, combo)
    return NormalForm.from_dict(combo)


def rewrite_trace(matrix: ZeroOneMatrix, word, strategy: str = "leftmost") -> list:
    """(parent measure, child measure) pairs for every rewrite step; each
    child's measure is exactly one less than its parent's."""
    trace: list = []
    rewrite(matrix, word, strategy, trace=trace)
    return trace


# ---------------------------------------------------------------------------
# algebra operations on normal forms


def as_normal_form(matrix: ZeroOneMatrix, x) -> NormalForm:
    if isinstance(x, NormalForm):
        for mono, _ in x.terms:
            if any(j > matrix.n for j in mono.J + mono.K):
                raise DimensionError("normal form uses letters beyond the matrix size")
        return x
    if isinstance(x, Monomial):
        if any(j > matrix.n for j in x.J + x.K):
            raise DimensionError("monomial uses letters beyond the matrix size")
        if monomial_is_zero(matrix, x):
            return ZERO_FORM
        return NormalForm(((x, scalars.ONE),))
    if isinstance(x, str):
        return normalize(matrix, parse_word(x))
    return normalize(matrix, x)


def multiply(matrix: ZeroOneMatrix, x, y, term_cap: int = TERM_CAP) -> NormalForm:
    """Bilinear product of normal forms over the same matrix."""
    xf = as_normal_form(matrix, x)
    yf = as_normal_form(matrix, y)
    combo: dict = {}
    for mx, cx in xf.terms:
        for my, cy in yf.terms:
            word = mx.letters() + my.letters()
            part = rewrite(matrix, word, term_cap=term_cap)
            if not part:
                continue
            factor = scalars.mul(cx, cy)
            for mono, q in part.items():
                prev = combo.get(mono)
                contrib = scalars.mul(factor, Rat(q))
                combo[mono] = contrib if prev is None else scalars.add(prev, contrib)
    cleaned = {}
    rational = {}
    for mono, c in combo.items():
        if isinstance(c, Rat):
            if c.value == 0:
                continue
            rational[mono] = c.value
        else:
            cleaned[mono] = c
    contracted = _contract(matrix, rational)
    for mono, q in contracted.items():
        cleaned[mono] = Rat(q)
    return NormalForm.from_dict(cleaned)


def adjoint(x: NormalForm) -> NormalForm:
    return NormalForm.from_dict({m.adjoint(): c for m, c in x.terms})


def scale(x: NormalForm, factor) -> NormalForm:
    return x.scaled(factor)


def add_forms(x: NormalForm, y: NormalForm) -> NormalForm:
    combo = dict(x.terms)
    for mono, c in y.terms:
        prev = combo.get(mono)
        combo[mono] = c if prev is None else scalars.add(prev, c)
    out = {}
    for mono, c in combo.items():
        if isinstance(c, Rat) and c.value == 0:
            continue
        out[mono] = c
    return NormalForm.from_dict(out)


def unit_sum_form(matrix: ZeroOneMatrix) -> NormalForm:
    """sum_i s_i s_i* as a normal form (equal to the unit as an operator)."""
    return NormalForm.from_dict(
        {Monomial((i,), (i,)): scalars.ONE for i in range(1, matrix.n + 1)})


def enumerate_admissible(matrix: ZeroOneMatrix, max_len: int, cap: int = 10**5):
    """All admissible index words with length <= max_len, shortest first."""
    out = [()]
    frontier = [()]
    letters = range(1, matrix.n + 1)
    for _ in range(max_len):
        nxt = []
        for word in frontier:
            allowed = matrix.row_set(word[-1]) if word else letters
            for j in allowed:
                nxt.append(word + (j,))
                if len(out) + len(nxt) > cap:
                    raise ResourceLimitError(
                        f"admissible word enumeration exceeded {cap} entries")
        out.extend(nxt)
        frontier = nxt
    return out


# ---------------------------------------------------------------------------
# JSON


def normal_form_to_json(x: NormalForm) -> list:
    return [
        {"J": list(m.J), "K": list(m.K), "coeff": scalars.scalar_to_json(c)}
        for m, c in x.terms
    ]


def normal_form_from_json(obj) -> NormalForm:
    if not isinstance(obj, list):
        raise DomainError("normal form JSON must be a list of terms")
    combo = {}
    for entry in obj:
        mono = Monomial(tuple(entry["J"]), tuple(entry["K"]))
        c = scalars.scalar_from_json(entry.get("coeff", 1))
        prev = combo.get(mono)
        combo[mono] = c if prev is None else scalars.add(prev, c)
    return NormalForm.from_dict(combo)
