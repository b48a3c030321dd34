"""Symbolic dense *-subalgebras of the isometry algebras on words.

Elements are finite sums of monomials T_mu T_nu^* (S_mu S_nu^* when the
range projections sum to one) over Laurent-polynomial scalars.  In the
Toeplitz flavours the monomials are linearly independent, so the term map
is a normal form; in the Cuntz flavour equality is decided by expanding
right legs to a common length within each gauge degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, InputError, ModeMismatchError
from .scalars import Scalar
from .words import FiniteWord
from .groups import GammaTable, VnTable

Monomial = tuple[tuple[int, ...], tuple[int, ...]]  # (mu, nu) letter tuples


class ModeKind(Enum):
    TOEPLITZ = "toeplitz"
    CUNTZ = "cuntz"
    INFINITE = "infinite"  # finite-letter span inside the infinite-isometry algebra


@dataclass(frozen=True, slots=True)
class AlgebraMode:
    kind: ModeKind
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InputError("algebra alphabet must have at least 2 letters")

    @classmethod
    def toeplitz(cls, n: int) -> "AlgebraMode":
        return cls(ModeKind.TOEPLITZ, n)

    @classmethod
    def cuntz(cls, n: int) -> "AlgebraMode":
        return cls(ModeKind.CUNTZ, n)

    @classmethod
    def infinite(cls, n: int) -> "AlgebraMode":
        return cls(ModeKind.INFINITE, n)

    @property
    def letter(self) -> str:
        return "S" if self.kind is ModeKind.CUNTZ else "T"

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})"


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial | None:
    """(T_mu T_nu^*)(T_al T_be^*) via T_i^* T_j = delta_ij."""
    mu, nu = m1
    al, be = m2
    if al[: len(nu)] == nu:
        return (mu + al[len(nu):], be)
    if nu[: len(al)] == al:
        return (mu, be + nu[len(al):])
    return None


def _mono_degree(m: Monomial) -> int:
    return len(m[0]) - len(m[1])


class AlgebraElement:
    """A finite sum of monomials in normal form."""

    __slots__ = ("mode", "terms")

    def __init__(self, mode: AlgebraMode, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                c = Scalar.coerce(c)
                if not c:
                    continue
                for a in m[0] + m[1]:
                    if not 1 <= a <= mode.n:
                        raise InputError(f"letter {a} out of range 1..{mode.n}")
                clean[m] = c
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, mode: AlgebraMode) -> "AlgebraElement":
        return cls(mode)

    @classmethod
    def one(cls, mode: AlgebraMode) -> "AlgebraElement":
        return cls(mode, {((), ()): Scalar.one()})

    @classmethod
    def monomial(cls, mode: AlgebraMode, mu: FiniteWord | tuple[int, ...],
                 nu: FiniteWord | tuple[int, ...], coeff: Scalar | int = 1) -> "AlgebraElement":
        mu = mu.letters if isinstance(mu, FiniteWord) else tuple(mu)
        nu = nu.letters if isinstance(nu, FiniteWord) else tuple(nu)
        return cls(mode, {(mu, nu): Scalar.coerce(coeff)})

    @classmethod
    def generator(cls, mode: AlgebraMode, i: int) -> "AlgebraElement":
        return cls.monomial(mode, (i,), ())

    @classmethod
    def vacuum_projection(cls, mode: AlgebraMode) -> "AlgebraElement":
        """e_n = 1 - sum_i T_i T_i^*, expanded into monomials."""
        if mode.kind is ModeKind.CUNTZ:
            raise DomainError("the defect projection vanishes when ranges sum to one")
        terms: dict[Monomial, Scalar] = {((), ()): Scalar.one()}
        for i in range(1, mode.n + 1):
            terms[((i,), (i,))] = Scalar.rational(-1)
        return cls(mode, terms)

    # -- ring structure -------------------------------------------------------

    def _require_same_mode(self, other: "AlgebraElement") -> None:
        if self.mode != other.mode:
            raise ModeMismatchError(f"mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same_mode(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Scalar.zero()) + c
        return AlgebraElement(self.mode, terms)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.mode, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._require_same_mode(other)
        terms: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                if m is not None:
                    terms[m] = terms.get(m, Scalar.zero()) + c1 * c2
        return AlgebraElement(self.mode, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar | int) -> "AlgebraElement":
        c = Scalar.coerce(c)
        return AlgebraElement(self.mode, {m: c * v for m, v in self.terms.items()})

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.mode, {(nu, mu): c for (mu, nu), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    # -- equality -----------------------------------------------------------

    def _expanded_by_degree(self) -> dict[int, dict[Monomial, Scalar]]:
        """Cuntz normalization: within each degree, push every right leg to
        the maximal length using S_mu S_nu^* = sum_j S_muj S_nuj^*."""
        by_degree: dict[int, dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            by_degree.setdefault(_mono_degree(m), {})[m] = c
        out: dict[int, dict[Monomial, Scalar]] = {}
        for k, terms in by_degree.items():
            depth = max(len(nu) for _, nu in terms)
            flat: dict[Monomial, Scalar] = {}
            for (mu, nu), c in terms.items():
                for tail in itertools.product(range(1, self.mode.n + 1),
                                              repeat=depth - len(nu)):
                    key = (mu + tail, nu + tail)
                    flat[key] = flat.get(key, Scalar.zero()) + c
            out[k] = {m: c for m, c in flat.items() if c}
        return {k: v for k, v in out.items() if v}

    def equals(self, other: "AlgebraElement") -> bool:
        self._require_same_mode(other)
        if self.mode.kind is not ModeKind.CUNTZ:
            return self.terms == other.terms
        return (self - other)._expanded_by_degree() == {}

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.mode != other.mode:
            return False
        return self.equals(other)

    def __hash__(self):
        raise TypeError("AlgebraElement is unhashable (Cuntz-mode equality is relational)")

    # -- gauge grading ---------------------------------------------------------

    def grade_decompose(self) -> dict[int, "AlgebraElement"]:
        parts: dict[int, dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            parts.setdefault(_mono_degree(m), {})[m] = c
        return {k: AlgebraElement(self.mode, v) for k, v in sorted(parts.items())}

    def gauge_scale(self) -> "AlgebraElement":
        """Scale the degree-k part by t^k (the gauge flow at imaginary time)."""
        return AlgebraElement(self.mode,
                              {m: c.shift(_mono_degree(m)) for m, c in self.terms.items()})

    # -- formatting ---------------------------------------------------------

    def _mono_str(self, m: Monomial) -> str:
        mu, nu = m
        letter = self.mode.letter
        parts = []
        if mu:
            parts.append(f"{letter}[{''.join(map(str, mu))}]")
        if nu:
            parts.append(f"{letter}*[{''.join(map(str, nu))}]")
        return "".join(parts) if parts else "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda m: (len(m[0]), len(m[1]), m[0], m[1]))
        parts = []
        for m in keys:
            c = self.terms[m]
            body = self._mono_str(m)
            if c == Scalar.one():
                parts.append(body)
            else:
                cs = str(c)
                if any(ch in cs[1:] for ch in "+-"):
                    cs = f"({cs})"
                parts.append(f"{cs}*{body}" if body != "1" else cs)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AlgebraElement<{self.mode}>({self})"


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def alg_adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint()


def alg_equals(a: AlgebraElement, b: AlgebraElement) -> bool:
    return a.equals(b)


def grade_decompose(a: AlgebraElement) -> dict[int, AlgebraElement]:
    return a.grade_decompose()


def gauge_scale(a: AlgebraElement) -> AlgebraElement:
    return a.gauge_scale()


def is_unitary(a: AlgebraElement) -> bool:
    one = AlgebraElement.one(a.mode)
    return (a * a.adjoint()).equals(one) and (a.adjoint() * a).equals(one)


def from_group_element(g: VnTable | GammaTable,
                       mode: AlgebraMode | None = None) -> AlgebraElement:
    """The unitary attached to a table: sum of one monomial per cylinder row
    plus one defect-compressed monomial per singleton row."""
    if isinstance(g, VnTable):
        mode = mode or AlgebraMode.cuntz(g.n)
        if mode.kind is not ModeKind.CUNTZ or mode.n != g.n:
            raise ModeMismatchError("a V_n table maps into the Cuntz flavour over n letters")
        out = AlgebraElement.zero(mode)
        for src, dst in g.rows:
            out = out + AlgebraElement.monomial(mode, dst, src)
        return out
    mode = mode or AlgebraMode.toeplitz(g.n)
    if mode.kind is ModeKind.CUNTZ:
        raise ModeMismatchError("a Gamma table needs a Toeplitz-flavour mode")
    if mode.n < g.n:
        raise ModeMismatchError("mode alphabet too small for the table")
    out = AlgebraElement.zero(mode)
    for src, dst in g.cyl_rows:
        out = out + AlgebraElement.monomial(mode, dst, src)
    for src, dst in g.pt_rows:
        # T_dst e_n T_src^* expanded, with e_n over the table's alphabet
        out = out + AlgebraElement.monomial(mode, dst, src)
        for j in range(1, g.n + 1):
            out = out - AlgebraElement.monomial(mode, dst.letters + (j,), src.letters + (j,))
    return out


def fock_apply(a: AlgebraElement, basis: FiniteWord) -> dict[FiniteWord, Scalar]:
    """Apply to a standard basis vector of the word space representation."""
    if a.mode.kind is not ModeKind.TOEPLITZ:
        raise ModeMismatchError("the word-space representation needs the Toeplitz flavour")
    if basis.n != a.mode.n:
        raise ModeMismatchError("basis word alphabet mismatch")
    out: dict[FiniteWord, Scalar] = {}
    w = basis.letters
    for (mu, nu), c in a.terms.items():
        if w[: len(nu)] == nu:
            target = FiniteWord(a.mode.n, mu + w[len(nu):])
            total = out.get(target, Scalar.zero()) + c
            if total:
                out[target] = total
            elif target in out:
                del out[target]
    return out


class Functional(Enum):
    TOEPLITZ_KMS = "toeplitz-kms"  # diagonal weight t^|mu| on the Toeplitz flavour
    CUNTZ_KMS = "cuntz-kms"        # diagonal weight n^-|mu| at t = 1/n
    GROUND = "ground"              # vacuum expectation


def phi_functional(a: AlgebraElement, which: Functional) -> Scalar:
    """The distinguished equilibrium/ground functionals, evaluated exactly."""
    kind = a.mode.kind
    n = a.mode.n
    if which is Functional.TOEPLITZ_KMS:
        if kind is not ModeKind.TOEPLITZ:
            raise ModeMismatchError("this functional lives on the Toeplitz flavour")
        total = Scalar.zero()
        for (mu, nu), c in a.terms.items():
            if mu == nu:
                total = total + c.shift(len(mu))
        return total
    if which is Functional.CUNTZ_KMS:
        if kind is not ModeKind.CUNTZ:
            raise ModeMismatchError("this functional lives on the Cuntz flavour")
        from fractions import Fraction
        total = Scalar.zero()
        for (mu, nu), c in a.terms.items():
            if mu == nu:
                total = total + Scalar.rational(
                    c.substitute(Fraction(1, n)) * Fraction(1, n ** len(mu)))
        return total
    if which is Functional.GROUND:
        if kind is ModeKind.CUNTZ:
            raise ModeMismatchError("the ground functional lives on the Toeplitz flavours")
        return a.terms.get(((), ()), Scalar.zero())
    raise InputError(f"unknown functional {which!r}")


def kms_monomial_identity(mode: AlgebraMode, m1: Monomial, m2: Monomial) -> bool:
    """Check phi(ab) = t^deg(a) phi(ba) for two bare monomials.

    Uses the same product rule as alg_mul but avoids element overhead so
    exhaustive sweeps stay fast.  In the Cuntz flavour t is specialized
    to 1/n.
    """
    from fractions import Fraction

    n = mode.n
    k = _mono_degree(m1)

    def phi_t(m: Monomial | None) -> tuple[int, int] | None:
        # returns (exponent multiplicity encoded as t-power) or None for 0
        if m is None or m[0] != m[1]:
            return None
        return (len(m[0]), 1)

    ab = _mono_mul(m1, m2)
    ba = _mono_mul(m2, m1)
    if mode.kind is ModeKind.CUNTZ:
        q = Fraction(1, n)
        lhs = q ** len(ab[0]) if ab is not None and ab[0] == ab[1] else Fraction(0)
        rhs = q ** len(ba[0]) if ba is not None and ba[0] == ba[1] else Fraction(0)
        return lhs == q**k * rhs
    lhs = phi_t(ab)
    rhs = phi_t(ba)
    if lhs is None and rhs is None:
        return True
    if (lhs is None) != (rhs is None):
        return False
    return lhs[0] == rhs[0] + k


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class AlgebraMatrix:
    """A small square matrix of algebra elements sharing one mode."""

    __slots__ = ("mode", "entries")

    MAX_SIZE = 4

    def __init__(self, entries: Sequence[Sequence[AlgebraElement]]):
        size = len(entries)
        if not 1 <= size <= self.MAX_SIZE:
            raise InputError(f"matrix size must be 1..{self.MAX_SIZE}")
        if any(len(row) != size for row in entries):
            raise InputError("matrix must be square")
        modes = {e.mode for row in entries for e in row}
        if len(modes) != 1:
            raise ModeMismatchError("matrix entries must share one mode")
        self.mode = modes.pop()
        self.entries = tuple(tuple(row) for row in entries)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "AlgebraMatrix") -> "AlgebraMatrix":
        if self.size != other.size or self.mode != other.mode:
            raise ModeMismatchError("matrix size or mode mismatch")
        size = self.size
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                acc = AlgebraElement.zero(self.mode)
                for k in range(size):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return AlgebraMatrix(rows)

    def equals(self, other: "AlgebraMatrix") -> bool:
        if self.size != other.size or self.mode != other.mode:
            raise ModeMismatchError("matrix size or mode mismatch")
        return all(a.equals(b)
                   for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    @classmethod
    def identity(cls, mode: AlgebraMode, size: int) -> "AlgebraMatrix":
        one = AlgebraElement.one(mode)
        zero = AlgebraElement.zero(mode)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])


def matrix_check(A: AlgebraMatrix, B: AlgebraMatrix, C: AlgebraMatrix,
                 expected: AlgebraMatrix) -> bool:
    """Does the triple product equal the expected matrix entrywise?"""
    return (A @ B @ C).equals(expected)
