"""Finite words, boundary points, cylinder sets, and exact simple functions.

The carrier of everything in this package is the rooted n-regular tree:
its vertices are finite words over {1, ..., n} (the empty word is the
root, printed "e"), and its boundary consists of the infinite words.
The full compactified space (vertices plus boundary) is called the tree
mode here; the space of infinite words alone is the boundary mode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InputError, ModeMismatchError
from .scalars import Scalar

MAX_ALPHABET = 9  # words print as digit strings, so letters stay single digits


def _check_alphabet(n: int) -> None:
    if not isinstance(n, int) or not 2 <= n <= MAX_ALPHABET:
        raise InputError(f"alphabet size must be an integer in 2..{MAX_ALPHABET}, got {n!r}")


@dataclass(frozen=True, slots=True)
class FiniteWord:
    """A vertex of the rooted n-regular tree: a finite word over {1, ..., n}."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self):
        _check_alphabet(self.n)
        for a in self.letters:
            if not isinstance(a, int) or not 1 <= a <= self.n:
                raise InputError(f"letter {a!r} out of range 1..{self.n}")

    @classmethod
    def empty(cls, n: int) -> "FiniteWord":
        return cls(n, ())

    @classmethod
    def from_string(cls, n: int, text: str) -> "FiniteWord":
        if text == "e":
            return cls(n, ())
        if not text or not text.isdigit():
            raise InputError(f"bad word {text!r}: expected 'e' or digits 1..{n}")
        return cls(n, tuple(int(ch) for ch in text))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(str(a) for a in self.letters) if self.letters else "e"

    def __repr__(self) -> str:
        return f"FiniteWord({self.n}, {self})"

    def is_empty(self) -> bool:
        return not self.letters

    def child(self, j: int) -> "FiniteWord":
        return FiniteWord(self.n, self.letters + (j,))

    def children(self) -> Iterator["FiniteWord"]:
        for j in range(1, self.n + 1):
            yield self.child(j)

    def concat(self, other: "FiniteWord | tuple[int, ...]") -> "FiniteWord":
        tail = other.letters if isinstance(other, FiniteWord) else tuple(other)
        return FiniteWord(self.n, self.letters + tail)

    def is_prefix_of(self, other: "FiniteWord") -> bool:
        return other.letters[: len(self.letters)] == self.letters

    def strict_prefix_of(self, other: "FiniteWord") -> bool:
        return len(self.letters) < len(other.letters) and self.is_prefix_of(other)

    def tail_after(self, prefix: "FiniteWord") -> tuple[int, ...]:
        if not prefix.is_prefix_of(self):
            raise DomainError(f"{prefix} is not a prefix of {self}")
        return self.letters[len(prefix.letters):]

    def parent(self) -> "FiniteWord":
        if not self.letters:
            raise DomainError("the root has no parent")
        return FiniteWord(self.n, self.letters[:-1])

    def prefixes(self, proper: bool = False) -> Iterator["FiniteWord"]:
        end = len(self.letters) if not proper else len(self.letters) - 1
        for k in range(end + 1):
            yield FiniteWord(self.n, self.letters[:k])

    @property
    def shortlex(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.letters), self.letters)


def all_words(n: int, max_len: int) -> Iterator[FiniteWord]:
    """All words of length <= max_len in shortlex order."""
    for k in range(max_len + 1):
        for letters in itertools.product(range(1, n + 1), repeat=k):
            yield FiniteWord(n, letters)


def _primitive_root(cycle: tuple[int, ...]) -> tuple[int, ...]:
    length = len(cycle)
    for d in range(1, length + 1):
        if length % d == 0 and cycle[:d] * (length // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True, slots=True)
class BoundaryPoint:
    """A point of the boundary path space: a finite word or an eventually
    periodic infinite word prefix; cycle; cycle; ...

    Infinite points are kept canonical: the cycle is primitive and the
    prefix does not end with the cycle's last letter after rotation, so
    structural equality coincides with equality of points.
    """

    n: int
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]  # empty means a finite point

    def __post_init__(self):
        _check_alphabet(self.n)
        for a in self.prefix + self.cycle:
            if not isinstance(a, int) or not 1 <= a <= self.n:
                raise InputError(f"letter {a!r} out of range 1..{self.n}")

    @classmethod
    def finite(cls, word: FiniteWord) -> "BoundaryPoint":
        return cls(word.n, word.letters, ())

    @classmethod
    def periodic(cls, prefix: FiniteWord, cycle: FiniteWord) -> "BoundaryPoint":
        if cycle.is_empty():
            raise InputError("the cycle of an infinite point must be nonempty")
        if prefix.n != cycle.n:
            raise ModeMismatchError("prefix and cycle use different alphabets")
        return cls._canonical(prefix.n, prefix.letters, cycle.letters)

    @classmethod
    def _canonical(cls, n: int, prefix: tuple[int, ...], cycle: tuple[int, ...]) -> "BoundaryPoint":
        cycle = _primitive_root(cycle)
        prefix = list(prefix)
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = (cycle[-1],) + cycle[:-1]
        return cls(n, tuple(prefix), cycle)

    def is_finite(self) -> bool:
        return not self.cycle

    def as_word(self) -> FiniteWord:
        if not self.is_finite():
            raise DomainError("not a finite point")
        return FiniteWord(self.n, self.prefix)

    def letter_at(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        if not self.cycle:
            raise IndexError("finite point is shorter than requested index")
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def starts_with(self, word: FiniteWord) -> bool:
        k = len(word.letters)
        if self.is_finite() and k > len(self.prefix):
            return False
        return all(self.letter_at(i) == word.letters[i] for i in range(k))

    def drop(self, k: int) -> "BoundaryPoint":
        """Remove the first k letters."""
        if self.is_finite():
            if k > len(self.prefix):
                raise DomainError("cannot drop past the end of a finite point")
            return BoundaryPoint(self.n, self.prefix[k:], ())
        if k <= len(self.prefix):
            return BoundaryPoint._canonical(self.n, self.prefix[k:], self.cycle)
        extra = (k - len(self.prefix)) % len(self.cycle)
        rotated = self.cycle[extra:] + self.cycle[:extra]
        return BoundaryPoint._canonical(self.n, (), rotated)

    def prepend(self, word: FiniteWord) -> "BoundaryPoint":
        if self.is_finite():
            return BoundaryPoint(self.n, word.letters + self.prefix, ())
        return BoundaryPoint._canonical(self.n, word.letters + self.prefix, self.cycle)

    def __str__(self) -> str:
        head = "".join(str(a) for a in self.prefix) or ("e" if not self.cycle else "")
        if self.is_finite():
            return head or "e"
        body = "".join(str(a) for a in self.cycle)
        return (head or "e") + f"({body})"

    def __repr__(self) -> str:
        return f"BoundaryPoint({self.n}, {self})"


class SetKind(Enum):
    CYL = "Z"       # full cylinder Z(w): w itself plus all finite and infinite extensions
    POINT = "P"     # the singleton {w}
    CYL_INF = "Zinf"  # infinite extensions only


class Mode(Enum):
    """Which boundary path space a function lives on."""

    TREE = "tree"          # vertices plus boundary (cylinders and singletons)
    BOUNDARY = "boundary"  # infinite words only (infinite cylinders)

    def allows(self, kind: SetKind) -> bool:
        if self is Mode.TREE:
            return kind in (SetKind.CYL, SetKind.POINT)
        return kind is SetKind.CYL_INF


@dataclass(frozen=True, slots=True)
class BasicSet:
    """A clopen basic set: Z(w), the singleton {w}, or Zinf(w)."""

    kind: SetKind
    word: FiniteWord

    @classmethod
    def cyl(cls, word: FiniteWord) -> "BasicSet":
        return cls(SetKind.CYL, word)

    @classmethod
    def point(cls, word: FiniteWord) -> "BasicSet":
        return cls(SetKind.POINT, word)

    @classmethod
    def cyl_inf(cls, word: FiniteWord) -> "BasicSet":
        return cls(SetKind.CYL_INF, word)

    @property
    def n(self) -> int:
        return self.word.n

    def contains_word(self, w: FiniteWord) -> bool:
        if self.kind is SetKind.CYL:
            return self.word.is_prefix_of(w)
        if self.kind is SetKind.POINT:
            return self.word == w
        return False

    def contains_point(self, x: BoundaryPoint) -> bool:
        if x.is_finite():
            if self.kind is SetKind.CYL_INF:
                return False
            return self.contains_word(x.as_word())
        if self.kind is SetKind.POINT:
            return False
        return x.starts_with(self.word)

    def contains_set(self, other: "BasicSet") -> bool:
        if self.kind is SetKind.CYL:
            if other.kind is SetKind.CYL_INF:
                return False
            return self.word.is_prefix_of(other.word)
        if self.kind is SetKind.POINT:
            return other.kind is SetKind.POINT and other.word == self.word
        return other.kind is SetKind.CYL_INF and self.word.is_prefix_of(other.word)

    def intersects(self, other: "BasicSet") -> bool:
        a, b = self, other
        if a.kind is SetKind.POINT and b.kind is SetKind.POINT:
            return a.word == b.word
        if a.kind is SetKind.POINT:
            return b.contains_word(a.word)
        if b.kind is SetKind.POINT:
            return a.contains_word(b.word)
        # two cylinders of any flavour meet iff the words are comparable
        return a.word.is_prefix_of(b.word) or b.word.is_prefix_of(a.word)

    def boundary_measure(self) -> Fraction:
        """Uniform boundary mass: cylinders n^-|w|, singletons 0."""
        if self.kind is SetKind.POINT:
            return Fraction(0)
        return Fraction(1, self.n ** len(self.word))

    def sort_key(self):
        order = {SetKind.POINT: 0, SetKind.CYL: 1, SetKind.CYL_INF: 1}
        return (self.word.shortlex, order[self.kind])

    def __str__(self) -> str:
        return f"{self.kind.value}({self.word})"

    def __repr__(self) -> str:
        return f"BasicSet[{self}]"


# ---------------------------------------------------------------------------
# Refinement of families of basic sets
# ---------------------------------------------------------------------------


def check_pairwise_disjoint(sets: Sequence[BasicSet]) -> None:
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a.intersects(b):
                raise InputError(f"sets {a} and {b} are not disjoint")


def atomize(n: int, mode: Mode, sets: Iterable[BasicSet]) -> list[BasicSet]:
    """A partition of the whole space into basic sets, refining every given set.

    Splits the tree only where a given word forces it, so the result is the
    coarsest such partition.
    """
    split_at: set[tuple[int, ...]] = set()
    for s in sets:
        if not s.word.n == n:
            raise ModeMismatchError("alphabet mismatch in atomize")
        letters = s.word.letters
        for k in range(len(letters)):
            split_at.add(letters[:k])
        if s.kind is SetKind.POINT:
            split_at.add(letters)

    out: list[BasicSet] = []

    def rec(prefix: tuple[int, ...]) -> None:
        if prefix in split_at:
            if mode is Mode.TREE:
                out.append(BasicSet.point(FiniteWord(n, prefix)))
            for j in range(1, n + 1):
                rec(prefix + (j,))
        else:
            w = FiniteWord(n, prefix)
            out.append(BasicSet.cyl(w) if mode is Mode.TREE else BasicSet.cyl_inf(w))

    rec(())
    return out


def refine_common(A: Sequence[BasicSet], B: Sequence[BasicSet]) -> list[BasicSet]:
    """A disjoint family refining both A and B and covering their unions.

    Every piece lies in at most one member of A and of B, and the pieces
    below any member tile it exactly.
    """
    if not A and not B:
        return []
    allsets = list(A) + list(B)
    n = allsets[0].n
    mode = Mode.BOUNDARY if allsets[0].kind is SetKind.CYL_INF else Mode.TREE
    for s in allsets:
        if not mode.allows(s.kind):
            raise ModeMismatchError(f"{s} does not belong to mode {mode.value}")
    check_pairwise_disjoint(list(A))
    check_pairwise_disjoint(list(B))
    pieces = [
        atom for atom in atomize(n, mode, allsets)
        if any(s.contains_set(atom) for s in allsets)
    ]
    return sorted(pieces, key=BasicSet.sort_key)


# ---------------------------------------------------------------------------
# Complete partitions (Kraft equality)
# ---------------------------------------------------------------------------


def kraft_sum(words: Sequence[FiniteWord], n: int) -> Fraction:
    return sum((Fraction(1, n ** len(w)) for w in words), Fraction(0))


def is_prefix_free(words: Sequence[FiniteWord]) -> bool:
    for i, a in enumerate(words):
        for b in words[i + 1:]:
            if a.is_prefix_of(b) or b.is_prefix_of(a):
                return False
    return True


def is_complete_prefix_code(words: Sequence[FiniteWord], n: int) -> bool:
    """True iff the cylinders over the words tile the space of infinite words."""
    for w in words:
        if w.n != n:
            raise InputError(f"word {w} is not over the {n}-letter alphabet")
    if len(set(words)) != len(words):
        return False
    return is_prefix_free(words) and kraft_sum(words, n) == 1


def missing_words(code: Sequence[FiniteWord], n: int) -> list[FiniteWord]:
    """Finite words having no code word as a prefix, for a complete code.

    For a complete prefix code these are exactly the proper prefixes of
    the code words; returned in shortlex order.
    """
    out = {p for w in code for p in w.prefixes(proper=True)}
    return sorted(out, key=lambda w: w.shortlex)


def is_complete_partition(cyls: Sequence[FiniteWord], pts: Sequence[FiniteWord], n: int) -> bool:
    """Do the cylinders Z(cyls) plus the singletons pts tile the whole tree space?"""
    for w in list(cyls) + list(pts):
        if w.n != n:
            raise InputError(f"word {w} is not over the {n}-letter alphabet")
    if not is_complete_prefix_code(list(cyls), n):
        return False
    if len(set(pts)) != len(pts):
        return False
    return sorted(pts, key=lambda w: w.shortlex) == missing_words(list(cyls), n)


# ---------------------------------------------------------------------------
# Simple functions
# ---------------------------------------------------------------------------


class SimpleFunction:
    """An exact simple function: a finite combination of basic indicator sets.

    Terms are kept in a canonical form: supports are pairwise disjoint,
    sibling cylinders with a matching coefficient are merged into their
    parent, and terms are listed in shortlex order.  Equal canonical forms
    mean equal functions.
    """

    __slots__ = ("mode", "n", "terms")

    def __init__(self, mode: Mode, n: int, terms: Sequence[tuple[BasicSet, Scalar]],
                 *, _canonical: bool = False):
        _check_alphabet(n)
        if not _canonical:
            for s, _ in terms:
                if s.n != n:
                    raise ModeMismatchError(f"set {s} is not over the {n}-letter alphabet")
                if not mode.allows(s.kind):
                    raise ModeMismatchError(f"set {s} not allowed in mode {mode.value}")
            check_pairwise_disjoint([s for s, _ in terms])
            terms = _merge_pieces(mode, n, {s: Scalar.coerce(c) for s, c in terms})
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, name, value):
        raise AttributeError("SimpleFunction is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, mode: Mode, n: int) -> "SimpleFunction":
        return cls(mode, n, ())

    @classmethod
    def indicator(cls, s: BasicSet, coeff: Scalar | int = 1) -> "SimpleFunction":
        mode = Mode.BOUNDARY if s.kind is SetKind.CYL_INF else Mode.TREE
        return cls(mode, s.n, [(s, Scalar.coerce(coeff))])

    @classmethod
    def constant(cls, mode: Mode, n: int, coeff: Scalar | int = 1) -> "SimpleFunction":
        root = FiniteWord.empty(n)
        s = BasicSet.cyl(root) if mode is Mode.TREE else BasicSet.cyl_inf(root)
        return cls(mode, n, [(s, Scalar.coerce(coeff))])

    @classmethod
    def from_pieces(cls, mode: Mode, n: int,
                    pieces: Iterable[tuple[BasicSet, Scalar]]) -> "SimpleFunction":
        """Build from disjoint pieces, accumulating repeated sets."""
        acc: dict[BasicSet, Scalar] = {}
        for s, c in pieces:
            acc[s] = acc.get(s, Scalar.zero()) + c
        return cls(mode, n, _merge_pieces(mode, n, acc), _canonical=True)

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[BasicSet]:
        return [s for s, _ in self.terms]

    def eval(self, x: BoundaryPoint | FiniteWord) -> Scalar:
        if isinstance(x, FiniteWord):
            x = BoundaryPoint.finite(x)
        if x.n != self.n:
            raise ModeMismatchError("point alphabet does not match the function")
        if self.mode is Mode.BOUNDARY and x.is_finite():
            raise DomainError("finite points do not belong to the boundary mode")
        for s, c in self.terms:
            if s.contains_point(x):
                return c
        return Scalar.zero()

    def sup_norm(self, t_value: Fraction | None = None) -> Fraction:
        """Sup of |f|; coefficients are evaluated at t_value if given."""
        best = Fraction(0)
        for _, c in self.terms:
            v = abs(c.substitute(t_value)) if t_value is not None else abs(c.as_fraction())
            best = max(best, v)
        return best

    # -- algebra ---------------------------------------------------------------

    def _combine(self, other: "SimpleFunction", op: str) -> "SimpleFunction":
        if not isinstance(other, SimpleFunction):
            return NotImplemented
        if self.mode is not other.mode or self.n != other.n:
            raise ModeMismatchError("cannot combine functions of different modes")
        atoms = atomize(self.n, self.mode, self.support() + other.support())
        pieces = []
        for atom in atoms:
            a = self._coeff_on(atom)
            b = other._coeff_on(atom)
            c = a + b if op == "add" else a * b
            if c:
                pieces.append((atom, c))
        return SimpleFunction.from_pieces(self.mode, self.n, pieces)

    def _coeff_on(self, atom: BasicSet) -> Scalar:
        for s, c in self.terms:
            if s.contains_set(atom):
                return c
        return Scalar.zero()

    def __add__(self, other):
        return self._combine(other, "add")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return self._combine(other, "mul")

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar | int | Fraction) -> "SimpleFunction":
        c = Scalar.coerce(c)
        if not c:
            return SimpleFunction.zero(self.mode, self.n)
        return SimpleFunction.from_pieces(self.mode, self.n,
                                          ((s, c * v) for s, v in self.terms))

    def map_coeffs(self, fn) -> "SimpleFunction":
        return SimpleFunction.from_pieces(self.mode, self.n,
                                          ((s, fn(v)) for s, v in self.terms))

    def restrict_to_boundary(self) -> "SimpleFunction":
        """Forget the vertex part: Z(w) becomes Zinf(w), singletons vanish."""
        if self.mode is Mode.BOUNDARY:
            return self
        pieces = [(BasicSet.cyl_inf(s.word), c)
                  for s, c in self.terms if s.kind is SetKind.CYL]
        return SimpleFunction.from_pieces(Mode.BOUNDARY, self.n, pieces)

    # -- comparison / ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimpleFunction):
            return NotImplemented
        return (self.mode, self.n, self.terms) == (other.mode, other.n, other.terms)

    def __hash__(self) -> int:
        return hash((self.mode, self.n, self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.terms:
            if c == Scalar.one():
                parts.append(str(s))
            else:
                cs = str(c)
                if any(ch in cs[1:] for ch in "+-"):
                    cs = f"({cs})"
                parts.append(f"{cs}*{s}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SimpleFunction<{self.mode.value},{self.n}>({self})"


def _merge_pieces(mode: Mode, n: int,
                  pieces: dict[BasicSet, Scalar]) -> list[tuple[BasicSet, Scalar]]:
    """Canonicalize a disjoint piece map: merge full sibling families, sort."""
    acc = {s: c for s, c in pieces.items() if c}
    cyl_kind = SetKind.CYL if mode is Mode.TREE else SetKind.CYL_INF
    changed = True
    while changed:
        changed = False
        by_parent: dict[tuple[int, ...], list[BasicSet]] = {}
        for s in acc:
            if s.kind is cyl_kind and len(s.word) > 0:
                by_parent.setdefault(s.word.letters[:-1], []).append(s)
        for parent_letters, sibs in by_parent.items():
            if len(sibs) != n:
                continue
            coeffs = {acc[s] for s in sibs}
            if len(coeffs) != 1:
                continue
            coeff = coeffs.pop()
            parent = FiniteWord(n, parent_letters)
            if mode is Mode.TREE:
                pt = BasicSet.point(parent)
                if acc.get(pt) != coeff:
                    continue
                del acc[pt]
            for s in sibs:
                del acc[s]
            acc[BasicSet(cyl_kind, parent)] = coeff
            changed = True
            break  # the dict changed; restart the scan
    return sorted(acc.items(), key=lambda item: item[0].sort_key())


# -- module-level operation names ------------------------------------------------


def simple_combine(f: SimpleFunction, g: SimpleFunction, op: str) -> SimpleFunction:
    if op not in ("add", "mul"):
        raise InputError(f"op must be 'add' or 'mul', got {op!r}")
    return f + g if op == "add" else f * g


def simple_eval(f: SimpleFunction, x: BoundaryPoint | FiniteWord) -> Scalar:
    return f.eval(x)


def restrict_to_boundary(f: SimpleFunction) -> SimpleFunction:
    return f.restrict_to_boundary()
