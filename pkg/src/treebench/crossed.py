"""Algebraic crossed products: simple functions twisted by table groups.

An element is a finite sum  sum_g f_g . lambda_g  with canonical tables as
group keys and canonical simple functions as coefficients, multiplied by
the convolution rule  (f lambda_g)(f' lambda_h) = f . (g.f') . lambda_{gh}.
The length cocycle of the tables grades every element into homogeneous
components, which is what the gauge flow scales.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import DomainError, InputError, ModeMismatchError
from .scalars import Scalar
from .words import BasicSet, FiniteWord, Mode, SetKind, SimpleFunction, atomize
from .groups import (
    GammaTable,
    Table,
    VnTable,
    act,
    act_on_function,
    compose,
    inverse,
    kernel_permutation,
)


class GroupKind(Enum):
    VN = "vn"          # boundary-mode functions acted on by V_n tables
    GAMMA = "gamma"    # tree-mode functions acted on by Gamma tables


@dataclass(frozen=True, slots=True)
class CPMode:
    kind: GroupKind
    n: int

    @classmethod
    def over_vn(cls, n: int) -> "CPMode":
        return cls(GroupKind.VN, n)

    @classmethod
    def over_gamma(cls, n: int) -> "CPMode":
        return cls(GroupKind.GAMMA, n)

    @property
    def function_mode(self) -> Mode:
        return Mode.BOUNDARY if self.kind is GroupKind.VN else Mode.TREE

    def identity_table(self) -> Table:
        return (VnTable.identity(self.n) if self.kind is GroupKind.VN
                else GammaTable.identity(self.n))

    def check_table(self, g: Table) -> None:
        want = VnTable if self.kind is GroupKind.VN else GammaTable
        if not isinstance(g, want) or g.n != self.n:
            raise ModeMismatchError(f"table {g} does not belong to {self}")

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})"


class CPElement:
    """A finite sum of  function . lambda_table  terms in normal form."""

    __slots__ = ("mode", "terms")

    def __init__(self, mode: CPMode, terms: Mapping[Table, SimpleFunction] | None = None):
        clean: dict[Table, SimpleFunction] = {}
        if terms:
            for g, f in terms.items():
                mode.check_table(g)
                if f.mode is not mode.function_mode or f.n != mode.n:
                    raise ModeMismatchError(f"function {f} does not belong to {mode}")
                if not f.is_zero():
                    clean[g] = f
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CPElement is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, mode: CPMode) -> "CPElement":
        return cls(mode)

    @classmethod
    def one(cls, mode: CPMode) -> "CPElement":
        return cls.from_function(mode, SimpleFunction.constant(mode.function_mode, mode.n))

    @classmethod
    def from_function(cls, mode: CPMode, f: SimpleFunction) -> "CPElement":
        return cls(mode, {mode.identity_table(): f})

    @classmethod
    def lambda_of(cls, g: Table) -> "CPElement":
        mode = CPMode.over_vn(g.n) if isinstance(g, VnTable) else CPMode.over_gamma(g.n)
        return cls(mode, {g: SimpleFunction.constant(mode.function_mode, mode.n)})

    @classmethod
    def term(cls, f: SimpleFunction, g: Table) -> "CPElement":
        mode = CPMode.over_vn(g.n) if isinstance(g, VnTable) else CPMode.over_gamma(g.n)
        return cls(mode, {g: f})

    # -- linear structure ---------------------------------------------------

    def _require_same_mode(self, other: "CPElement") -> None:
        if self.mode != other.mode:
            raise ModeMismatchError(f"mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other: "CPElement") -> "CPElement":
        self._require_same_mode(other)
        terms = dict(self.terms)
        for g, f in other.terms.items():
            terms[g] = terms[g] + f if g in terms else f
        return CPElement(self.mode, terms)

    def __neg__(self) -> "CPElement":
        return CPElement(self.mode, {g: -f for g, f in self.terms.items()})

    def __sub__(self, other: "CPElement") -> "CPElement":
        return self + (-other)

    def scale(self, c: Scalar | int) -> "CPElement":
        return CPElement(self.mode, {g: f.scale(c) for g, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._require_same_mode(other)
        terms: dict[Table, SimpleFunction] = {}
        for g, f in self.terms.items():
            for h, f2 in other.terms.items():
                product = f * act_on_function(g, f2)
                if product.is_zero():
                    continue
                gh = compose(g, h)
                terms[gh] = terms[gh] + product if gh in terms else product
        return CPElement(self.mode, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def adjoint(self) -> "CPElement":
        terms: dict[Table, SimpleFunction] = {}
        for g, f in self.terms.items():
            ginv = inverse(g)
            moved = act_on_function(ginv, f)
            terms[ginv] = terms[ginv] + moved if ginv in terms else moved
        return CPElement(self.mode, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, CPElement):
            return NotImplemented
        return self.mode == other.mode and self.terms == other.terms

    def __hash__(self):
        return hash((self.mode, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[Table, SimpleFunction]]:
        return sorted(self.terms.items(), key=lambda item: str(item[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for g, f in self.sorted_terms():
            if len(f.terms) == 1:
                fs = str(f)
            else:
                fs = f"({f})"
            parts.append(f"{fs} * L[{g}]")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CPElement<{self.mode}>({self})"


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def cp_mul(x: CPElement, y: CPElement) -> CPElement:
    return x * y


def cp_adjoint(x: CPElement) -> CPElement:
    return x.adjoint()


class Expectation(Enum):
    TO_FUNCTIONS = "functions"     # keep the identity-table term
    TO_S_GROUP = "sgroup"          # keep terms whose table is a vertex permutation


def cp_expectation(x: CPElement, which: Expectation) -> CPElement:
    if which is Expectation.TO_FUNCTIONS:
        e = x.mode.identity_table()
        return CPElement(x.mode, {g: f for g, f in x.terms.items() if g == e})
    if x.mode.kind is not GroupKind.GAMMA:
        raise ModeMismatchError("the permutation-part expectation needs the Gamma flavour")
    return CPElement(x.mode, {g: f for g, f in x.terms.items()
                              if kernel_permutation(g) is not None})


def _degree_regions(g: Table) -> list[tuple[BasicSet, int]]:
    """The destination-side partition of the space, labelled by the length
    cocycle of the row producing each piece."""
    if isinstance(g, VnTable):
        return [(BasicSet.cyl_inf(d), len(d) - len(s)) for s, d in g.rows]
    out: list[tuple[BasicSet, int]] = []
    out.extend((BasicSet.cyl(d), len(d) - len(s)) for s, d in g.cyl_rows)
    out.extend((BasicSet.point(d), len(d) - len(s)) for s, d in g.pt_rows)
    return out


def homogeneous_decompose(x: CPElement) -> dict[int, CPElement]:
    """Split along the cocycle: the part of each f_g supported where g's germ
    changes length by k goes to component k."""
    parts: dict[int, dict[Table, SimpleFunction]] = {}
    fmode = x.mode.function_mode
    for g, f in x.terms.items():
        regions = _degree_regions(g)
        atoms = atomize(x.mode.n, fmode, [s for s, _ in regions] + f.support())
        pieces_by_degree: dict[int, list] = {}
        for atom in atoms:
            c = f._coeff_on(atom)
            if not c:
                continue
            degree = next(k for s, k in regions if s.contains_set(atom))
            pieces_by_degree.setdefault(degree, []).append((atom, c))
        for degree, pieces in pieces_by_degree.items():
            part = SimpleFunction.from_pieces(fmode, x.mode.n, pieces)
            parts.setdefault(degree, {})[g] = part
    return {k: CPElement(x.mode, v) for k, v in sorted(parts.items())}


def gauge_scale_cp(x: CPElement) -> CPElement:
    """The gauge flow at imaginary time: scale the degree-k part by t^k."""
    total = CPElement.zero(x.mode)
    for k, part in homogeneous_decompose(x).items():
        total = total + part.scale(Scalar.t_power(k))
    return total
