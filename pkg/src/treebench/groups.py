"""Prefix-replacement tables: the Higman-Thompson group V_n and its
Toeplitz extension by finite permutations of the tree's vertices.

A VnTable lists rows src -> dst between two complete prefix codes and acts
on infinite words by prefix rewriting.  A GammaTable additionally carries
singleton rows pairing the finitely many vertices missed by the cylinder
rows, so it acts on the whole compactified tree.  The quotient map that
forgets the singleton rows realizes the exact sequence

    1 -> finite permutations of vertices -> Gamma_n -> V_n -> 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Literal, Sequence

from .errors import DomainError, InputError, ModeMismatchError
from .words import (
    BasicSet,
    BoundaryPoint,
    FiniteWord,
    Mode,
    SetKind,
    SimpleFunction,
    is_complete_partition,
    is_complete_prefix_code,
    missing_words,
)

Row = tuple[FiniteWord, FiniteWord]


def _shortlex_rows(rows: Iterable[Row]) -> tuple[Row, ...]:
    return tuple(sorted(rows, key=lambda r: r[0].shortlex))


def _merge_vn_rows(n: int, rows: Sequence[Row]) -> tuple[Row, ...]:
    """Merge every family of n sibling rows (wj -> uj) into (w -> u)."""
    table = {src: dst for src, dst in rows}
    changed = True
    while changed:
        changed = False
        parents: dict[tuple[int, ...], list[FiniteWord]] = {}
        for src in table:
            if len(src) > 0:
                parents.setdefault(src.letters[:-1], []).append(src)
        for parent_letters, sibs in parents.items():
            if len(sibs) != n:
                continue
            parent = FiniteWord(n, parent_letters)
            dsts = [table[parent.child(j)] for j in range(1, n + 1)]
            if any(len(d) == 0 or d.letters[-1] != j + 1 for j, d in enumerate(dsts)):
                continue
            dst_parents = {d.letters[:-1] for d in dsts}
            if len(dst_parents) != 1:
                continue
            for j in range(1, n + 1):
                del table[parent.child(j)]
            table[parent] = FiniteWord(n, dst_parents.pop())
            changed = True
            break
    return _shortlex_rows(table.items())


@dataclass(frozen=True, slots=True)
class VnTable:
    """A prefix-exchange table: a bijection of the space of infinite words."""

    n: int
    rows: tuple[Row, ...]

    @classmethod
    def from_rows(cls, n: int, rows: Iterable[Row]) -> "VnTable":
        rows = tuple(rows)
        srcs = [r[0] for r in rows]
        dsts = [r[1] for r in rows]
        if not is_complete_prefix_code(srcs, n):
            raise InputError(
                f"source words do not tile the boundary (Kraft sum "
                f"{_kraft_str(srcs, n)}): {[str(w) for w in srcs]}")
        if not is_complete_prefix_code(dsts, n):
            raise InputError(
                f"destination words do not tile the boundary (Kraft sum "
                f"{_kraft_str(dsts, n)}): {[str(w) for w in dsts]}")
        return cls(n, _merge_vn_rows(n, rows))

    @classmethod
    def identity(cls, n: int) -> "VnTable":
        e = FiniteWord.empty(n)
        return cls(n, ((e, e),))

    def is_identity(self) -> bool:
        return self == VnTable.identity(self.n)

    def src_words(self) -> list[FiniteWord]:
        return [r[0] for r in self.rows]

    def dst_words(self) -> list[FiniteWord]:
        return [r[1] for r in self.rows]

    def __str__(self) -> str:
        body = ", ".join(f"{s}->{d}" for s, d in self.rows)
        return f"V{self.n}[{body}]"


@dataclass(frozen=True, slots=True)
class GammaTable:
    """A table with cylinder rows and singleton rows: a homeomorphism of the
    whole compactified tree, i.e. an element of the Toeplitz full group."""

    n: int
    cyl_rows: tuple[Row, ...]
    pt_rows: tuple[Row, ...]

    @classmethod
    def from_rows(cls, n: int, cyl_rows: Iterable[Row], pt_rows: Iterable[Row]) -> "GammaTable":
        cyl_rows = tuple(cyl_rows)
        pt_rows = tuple(pt_rows)
        cs, cd = [r[0] for r in cyl_rows], [r[1] for r in cyl_rows]
        ps, pd = [r[0] for r in pt_rows], [r[1] for r in pt_rows]
        if not is_complete_partition(cs, ps, n):
            raise InputError(
                f"source rows do not partition the space (cylinder Kraft sum "
                f"{_kraft_str(cs, n)}; points {[str(w) for w in ps]})")
        if not is_complete_partition(cd, pd, n):
            raise InputError(
                f"destination rows do not partition the space (cylinder Kraft sum "
                f"{_kraft_str(cd, n)}; points {[str(w) for w in pd]})")
        return cls(n, *_merge_gamma_rows(n, cyl_rows, pt_rows))

    @classmethod
    def identity(cls, n: int) -> "GammaTable":
        e = FiniteWord.empty(n)
        return cls(n, ((e, e),), ())

    def is_identity(self) -> bool:
        return self == GammaTable.identity(self.n)

    def pt_map(self) -> dict[FiniteWord, FiniteWord]:
        return dict(self.pt_rows)

    def __str__(self) -> str:
        cyl = ", ".join(f"Z({s})->Z({d})" for s, d in self.cyl_rows)
        if not self.pt_rows:
            return f"G{self.n}[{cyl}]"
        pts = ", ".join(f"{s}->{d}" for s, d in self.pt_rows)
        return f"G{self.n}[{cyl}; {pts}]"


Table = VnTable | GammaTable


def _kraft_str(words: Sequence[FiniteWord], n: int) -> str:
    total = sum((Fraction(1, n ** len(w)) for w in words), Fraction(0))
    return str(total)


def _merge_gamma_rows(n: int, cyl_rows: Sequence[Row],
                      pt_rows: Sequence[Row]) -> tuple[tuple[Row, ...], tuple[Row, ...]]:
    """Merge n sibling cylinder rows plus the matching singleton row."""
    cyl = {src: dst for src, dst in cyl_rows}
    pts = {src: dst for src, dst in pt_rows}
    changed = True
    while changed:
        changed = False
        parents: dict[tuple[int, ...], int] = {}
        for src in cyl:
            if len(src) > 0:
                parents[src.letters[:-1]] = parents.get(src.letters[:-1], 0) + 1
        for parent_letters, count in parents.items():
            if count != n:
                continue
            parent = FiniteWord(n, parent_letters)
            if parent not in pts:
                continue
            dsts = [cyl.get(parent.child(j)) for j in range(1, n + 1)]
            if any(d is None or len(d) == 0 or d.letters[-1] != j + 1
                   for j, d in enumerate(dsts)):
                continue
            dst_parents = {d.letters[:-1] for d in dsts}
            if len(dst_parents) != 1:
                continue
            dst_parent = FiniteWord(n, dst_parents.pop())
            if pts[parent] != dst_parent:
                continue
            for j in range(1, n + 1):
                del cyl[parent.child(j)]
            del pts[parent]
            cyl[parent] = dst_parent
            changed = True
            break
    return _shortlex_rows(cyl.items()), _shortlex_rows(pts.items())


def normalize(g: Table) -> Table:
    """Recanonicalize a table (idempotent; from_rows already normalizes)."""
    if isinstance(g, VnTable):
        return VnTable.from_rows(g.n, g.rows)
    return GammaTable.from_rows(g.n, g.cyl_rows, g.pt_rows)


# ---------------------------------------------------------------------------
# Routing: how a table carves up a cylinder
# ---------------------------------------------------------------------------


def _route_gamma(g: GammaTable, w: FiniteWord) -> Iterator[tuple[str, tuple[int, ...], FiniteWord]]:
    """Split Z(w) along g's source partition.

    Yields ("cyl", s, d) for pieces Z(w+s) sent onto Z(d), and ("pt", s, d)
    for vertices {w+s} sent to {d}.
    """
    for a, b in g.cyl_rows:
        if a.is_prefix_of(w):
            yield "cyl", (), b.concat(w.tail_after(a))
            return
    pts = g.pt_map()
    stack: list[FiniteWord] = [w]
    while stack:
        u = stack.pop()
        row = _covering_cyl_row(g, u)
        if row is not None:
            a, b = row
            yield "cyl", u.tail_after(w), b.concat(u.tail_after(a))
        else:
            # u is a proper prefix of the source code, hence a singleton row
            yield "pt", u.tail_after(w), pts[u]
            stack.extend(reversed(list(u.children())))


def _covering_cyl_row(g: GammaTable, w: FiniteWord) -> Row | None:
    for a, b in g.cyl_rows:
        if a.is_prefix_of(w):
            return (a, b)
    return None


def _route_vn(g: VnTable, w: FiniteWord) -> Iterator[tuple[tuple[int, ...], FiniteWord]]:
    """Split the infinite cylinder over w along g's source code."""
    for a, b in g.rows:
        if a.is_prefix_of(w):
            yield (), b.concat(w.tail_after(a))
            return
    for j in range(1, g.n + 1):
        for s, d in _route_vn(g, w.child(j)):
            yield (j,) + s, d


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------


def act(g: Table, x: FiniteWord | BoundaryPoint):
    """Apply the table to a vertex or boundary point; same kind comes back."""
    if isinstance(x, FiniteWord):
        if isinstance(g, VnTable):
            raise DomainError("a V_n table acts on infinite points only")
        if x.n != g.n:
            raise ModeMismatchError("alphabet mismatch in act")
        pts = g.pt_map()
        if x in pts:
            return pts[x]
        row = _covering_cyl_row(g, x)
        if row is None:
            raise InputError(f"invalid table: no row covers {x}")
        a, b = row
        return b.concat(x.tail_after(a))
    if not isinstance(x, BoundaryPoint):
        raise InputError(f"cannot act on {x!r}")
    if x.n != g.n:
        raise ModeMismatchError("alphabet mismatch in act")
    if x.is_finite():
        if isinstance(g, VnTable):
            raise DomainError("a V_n table acts on infinite points only")
        return BoundaryPoint.finite(act(g, x.as_word()))
    rows = g.rows if isinstance(g, VnTable) else g.cyl_rows
    for a, b in rows:
        if x.starts_with(a):
            return x.drop(len(a)).prepend(b)
    raise InputError("invalid table: no row covers the point")


def compose(g: Table, h: Table) -> Table:
    """The table of g after h."""
    if type(g) is not type(h) or g.n != h.n:
        raise ModeMismatchError("can only compose tables of the same kind and alphabet")
    return _compose_cached(g, h)


@lru_cache(maxsize=1 << 14)
def _compose_cached(g: Table, h: Table) -> Table:
    if isinstance(g, VnTable):
        rows = []
        for a, b in h.rows:
            for s, d in _route_vn(g, b):
                rows.append((a.concat(s), d))
        return VnTable.from_rows(g.n, rows)
    cyl_rows: list[Row] = []
    pt_rows: list[Row] = []
    for a, b in h.cyl_rows:
        for kind, s, d in _route_gamma(g, b):
            if kind == "cyl":
                cyl_rows.append((a.concat(s), d))
            else:
                pt_rows.append((a.concat(s), d))
    for v, w in h.pt_rows:
        pt_rows.append((v, act(g, w)))
    return GammaTable.from_rows(g.n, cyl_rows, pt_rows)


def inverse(g: Table) -> Table:
    if isinstance(g, VnTable):
        return VnTable.from_rows(g.n, [(d, s) for s, d in g.rows])
    return GammaTable.from_rows(g.n,
                                [(d, s) for s, d in g.cyl_rows],
                                [(d, s) for s, d in g.pt_rows])


def conjugate(g: Table, by: Table) -> Table:
    """by^-1 . g . by"""
    return compose(compose(inverse(by), g), by)


def commutator(g: Table, h: Table) -> Table:
    return compose(compose(g, h), compose(inverse(g), inverse(h)))


def act_on_function(g: Table, f: SimpleFunction) -> SimpleFunction:
    """Pushforward: the composite of f with the inverse homeomorphism."""
    if f.n != g.n:
        raise ModeMismatchError("alphabet mismatch in act_on_function")
    if isinstance(g, VnTable):
        if f.mode is not Mode.BOUNDARY:
            raise ModeMismatchError("V_n acts on boundary-mode functions")
        pieces = []
        for s, c in f.terms:
            for tail, d in _route_vn(g, s.word):
                pieces.append((BasicSet.cyl_inf(d), c))
        return SimpleFunction.from_pieces(Mode.BOUNDARY, f.n, pieces)
    if f.mode is not Mode.TREE:
        raise ModeMismatchError("Gamma tables act on tree-mode functions")
    pieces = []
    for s, c in f.terms:
        if s.kind is SetKind.POINT:
            pieces.append((BasicSet.point(act(g, s.word)), c))
        else:
            for kind, tail, d in _route_gamma(g, s.word):
                piece = BasicSet.cyl(d) if kind == "cyl" else BasicSet.point(d)
                pieces.append((piece, c))
    return SimpleFunction.from_pieces(Mode.TREE, f.n, pieces)


# ---------------------------------------------------------------------------
# The exact sequence: projection, kernel, lift
# ---------------------------------------------------------------------------


def pi_project(g: GammaTable) -> VnTable:
    """Forget the singleton rows; the quotient map onto V_n."""
    return VnTable.from_rows(g.n, g.cyl_rows)


@dataclass(frozen=True, slots=True)
class FinitePermutation:
    """A finitely supported permutation of the tree's vertices."""

    n: int
    pairs: tuple[Row, ...]  # (w, image) with w != image, sorted shortlex

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[FiniteWord, FiniteWord]) -> "FinitePermutation":
        moved = {w: v for w, v in mapping.items() if w != v}
        if set(moved) != set(moved.values()):
            raise InputError("not a permutation: support and image differ")
        return cls(n, _shortlex_rows(moved.items()))

    @classmethod
    def identity(cls, n: int) -> "FinitePermutation":
        return cls(n, ())

    @classmethod
    def transposition(cls, a: FiniteWord, b: FiniteWord) -> "FinitePermutation":
        if a == b:
            return cls.identity(a.n)
        return cls.from_mapping(a.n, {a: b, b: a})

    def apply(self, w: FiniteWord) -> FiniteWord:
        return dict(self.pairs).get(w, w)

    def support(self) -> list[FiniteWord]:
        return [w for w, _ in self.pairs]

    def is_identity(self) -> bool:
        return not self.pairs

    def compose(self, other: "FinitePermutation") -> "FinitePermutation":
        words = set(self.support()) | set(other.support())
        return FinitePermutation.from_mapping(
            self.n, {w: self.apply(other.apply(w)) for w in words})

    def inverse(self) -> "FinitePermutation":
        return FinitePermutation(self.n, _shortlex_rows((v, w) for w, v in self.pairs))

    def cycles(self) -> list[tuple[FiniteWord, ...]]:
        mapping = dict(self.pairs)
        seen: set[FiniteWord] = set()
        out = []
        for start in self.support():
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            w = mapping[start]
            while w != start:
                cyc.append(w)
                seen.add(w)
                w = mapping[w]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> list[int]:
        return sorted((len(c) for c in self.cycles()), reverse=True)

    def parity(self) -> int:
        """Sign as an element of Z/2: 0 even, 1 odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def as_gamma_table(self) -> GammaTable:
        if self.is_identity():
            return GammaTable.identity(self.n)
        depth = max(len(w) for w in self.support())
        cyl_rows = [(w, w) for w in all_words_of_length(self.n, depth + 1)]
        mapping = dict(self.pairs)
        pt_rows = [(w, mapping.get(w, w)) for w in _words_up_to(self.n, depth)]
        return GammaTable.from_rows(self.n, cyl_rows, pt_rows)

    def __str__(self) -> str:
        cycles = " ".join("(" + " ".join(str(w) for w in c) + ")" for c in self.cycles())
        return cycles if cycles else "()"


def all_words_of_length(n: int, k: int) -> list[FiniteWord]:
    out = [FiniteWord.empty(n)]
    for _ in range(k):
        out = [w.child(j) for w in out for j in range(1, n + 1)]
    return out


def _words_up_to(n: int, k: int) -> list[FiniteWord]:
    out: list[FiniteWord] = []
    layer = [FiniteWord.empty(n)]
    for _ in range(k + 1):
        out.extend(layer)
        layer = [w.child(j) for w in layer for j in range(1, n + 1)]
    return out


def kernel_permutation(g: GammaTable) -> FinitePermutation | None:
    """The finite vertex permutation underlying g, if g projects to the identity."""
    if any(s != d for s, d in g.cyl_rows):
        return None
    return FinitePermutation.from_mapping(g.n, dict(g.pt_rows))


def fredholm_count(v: VnTable) -> int:
    """Number of vertices missed by the source code (= by the destination code)."""
    src_missing = missing_words(v.src_words(), v.n)
    dst_missing = missing_words(v.dst_words(), v.n)
    assert len(src_missing) == len(dst_missing), "missing-word counts must agree"
    return len(src_missing)


def lift(v: VnTable) -> GammaTable:
    """The canonical section of the quotient map: pair the missed vertices
    of both sides in shortlex order."""
    src_missing = missing_words(v.src_words(), v.n)
    dst_missing = missing_words(v.dst_words(), v.n)
    return GammaTable.from_rows(v.n, v.rows, list(zip(src_missing, dst_missing)))


# ---------------------------------------------------------------------------
# Abelianization
# ---------------------------------------------------------------------------


def leaf_parity(rows: Sequence[Row]) -> int:
    """Parity of the permutation matching source and destination leaves in
    planar (left-to-right, i.e. lexicographic) order.

    For an odd alphabet this is invariant under row subdivision, hence a
    class function of the table; shortlex ordering would not be.
    """
    srcs = sorted((r[0] for r in rows), key=lambda w: w.letters)
    dsts = sorted((r[1] for r in rows), key=lambda w: w.letters)
    src_pos = {w: i for i, w in enumerate(srcs)}
    dst_pos = {w: i for i, w in enumerate(dsts)}
    perm = [0] * len(rows)
    for s, d in rows:
        perm[src_pos[s]] = dst_pos[d]
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) % 2
    return parity


def sign_vn(v: VnTable) -> int:
    """The Z/2 abelianization class of a V_n table (always 0 for even n)."""
    if v.n % 2 == 0:
        return 0
    return leaf_parity(v.rows)


def alpha_embed(g: GammaTable) -> VnTable:
    """Embed the Toeplitz group over n letters into V_{2n+1}: cylinder rows
    pass through unchanged and each singleton row fans out over the n+1
    fresh letters."""
    n = g.n
    big = 2 * n + 1
    if big > 9:
        raise InputError(f"alpha embedding needs alphabet {big} > 9; use n <= 4")

    def widen(w: FiniteWord) -> FiniteWord:
        return FiniteWord(big, w.letters)

    rows = [(widen(s), widen(d)) for s, d in g.cyl_rows]
    for s, d in g.pt_rows:
        for j in range(n + 1, big + 1):
            rows.append((widen(s).child(j), widen(d).child(j)))
    return VnTable.from_rows(big, rows)


def abelianize_gamma(g: GammaTable) -> int:
    """The Z/2 abelianization class, computed through the odd-alphabet embedding."""
    return sign_vn(alpha_embed(g))


ClosureClass = Literal["Trivial", "SPrime", "S", "GammaPrime", "Gamma"]


def classify_normal_closure(g: GammaTable) -> ClosureClass:
    """Which normal subgroup the element generates: nothing, the alternating
    or full finite-permutation subgroup, the commutator subgroup, or
    everything."""
    if g.is_identity():
        return "Trivial"
    perm = kernel_permutation(g)
    if perm is not None:
        return "SPrime" if perm.parity() == 0 else "S"
    return "GammaPrime" if abelianize_gamma(g) == 0 else "Gamma"


# ---------------------------------------------------------------------------
# Commuting factorization and fixed structure
# ---------------------------------------------------------------------------


def _subdivide_to_depth(g: GammaTable, depth: int) -> tuple[list[Row], list[Row]]:
    """Expand cylinder rows until every row word has length >= depth.

    Expanding (a -> b) into its n children turns the pair (a, b) itself into
    a new singleton row.
    """
    cyl = list(g.cyl_rows)
    pts = list(g.pt_rows)
    i = 0
    while i < len(cyl):
        a, b = cyl[i]
        if len(a) < depth or len(b) < depth:
            cyl.pop(i)
            cyl.extend((a.child(j), b.child(j)) for j in range(1, g.n + 1))
            pts.append((a, b))
        else:
            i += 1
    return cyl, pts


def factor_commuting(h: FinitePermutation, g: GammaTable) -> tuple[GammaTable, FinitePermutation]:
    """Split g = c . k with k a finite permutation and c commuting with h.

    c keeps g's cylinder behaviour after subdividing below h's support,
    fixes the support pointwise, and pairs the remaining missed vertices
    in shortlex order.
    """
    if h.n != g.n:
        raise ModeMismatchError("alphabet mismatch in factor_commuting")
    support = set(h.support())
    depth = 1 + max((len(w) for w in support), default=0)
    cyl, pts = _subdivide_to_depth(g, depth)
    src_pts = {s for s, _ in pts}
    dst_pts = {d for _, d in pts}
    if not support <= src_pts or not support <= dst_pts:
        raise InputError("subdivision failed to expose the support")
    rest_src = sorted(src_pts - support, key=lambda w: w.shortlex)
    rest_dst = sorted(dst_pts - support, key=lambda w: w.shortlex)
    new_pts = [(w, w) for w in support] + list(zip(rest_src, rest_dst))
    c = GammaTable.from_rows(g.n, cyl, new_pts)
    k_table = compose(inverse(c), g)
    k = kernel_permutation(k_table)
    assert k is not None, "correction term must be a finite permutation"
    return c, k


@dataclass(frozen=True, slots=True)
class FixedStructure:
    """Where a table acts as the identity: maximal identity cylinders plus
    the fixed vertices outside them."""

    identity_cylinders: tuple[FiniteWord, ...]
    fixed_singletons: tuple[FiniteWord, ...]


def fixed_structure(g: GammaTable) -> FixedStructure:
    cyls = sorted((s for s, d in g.cyl_rows if s == d), key=lambda w: w.shortlex)
    pts = sorted((s for s, d in g.pt_rows if s == d), key=lambda w: w.shortlex)
    return FixedStructure(tuple(cyls), tuple(pts))


def fixes_word(g: GammaTable, w: FiniteWord) -> bool:
    return act(g, w) == w


def stabilizer_transposition(mu: FiniteWord, n: int | None = None) -> GammaTable:
    """The transposition of the root with the vertex mu, as a table."""
    n = mu.n if n is None else n
    if mu.n != n:
        raise ModeMismatchError("alphabet mismatch in stabilizer_transposition")
    if mu.is_empty():
        return GammaTable.identity(n)
    return FinitePermutation.transposition(FiniteWord.empty(n), mu).as_gamma_table()


def cocycle_degree(g: Table, x: FiniteWord | BoundaryPoint) -> int:
    """Length change |dst| - |src| of the row applying at x."""
    if isinstance(x, FiniteWord):
        if isinstance(g, VnTable):
            raise DomainError("a V_n table acts on infinite points only")
        if x in g.pt_map():
            s = x
            d = g.pt_map()[x]
            return len(d) - len(s)
        row = _covering_cyl_row(g, x)
        if row is None:
            raise InputError("invalid table")
        return len(row[1]) - len(row[0])
    if x.is_finite():
        return cocycle_degree(g, x.as_word())
    rows = g.rows if isinstance(g, VnTable) else g.cyl_rows
    for a, b in rows:
        if x.starts_with(a):
            return len(b) - len(a)
    raise InputError("invalid table")


# ---------------------------------------------------------------------------
# Seeded random elements
# ---------------------------------------------------------------------------


def _random_code(rng: random.Random, n: int, depth: int, splits: int) -> list[FiniteWord]:
    leaves = [FiniteWord.empty(n)]
    for _ in range(splits):
        candidates = [w for w in leaves if len(w) < depth]
        if not candidates:
            break
        w = rng.choice(candidates)
        leaves.remove(w)
        leaves.extend(w.children())
    return leaves


def random_element(n: int, depth: int, seed: int) -> GammaTable:
    """A deterministic pseudorandom valid table of bounded depth."""
    if depth > 6:
        raise InputError("random_element depth is capped at 6")
    rng = random.Random(1_000_003 * seed + 101 * n + depth)
    max_splits = (n**depth - 1) // (n - 1)
    splits = rng.randint(0, min(2 * depth + 1, max_splits))
    src = _random_code(rng, n, depth, splits)
    dst = _random_code(rng, n, depth, splits)
    while len(dst) != len(src):  # same split count, so only early exhaustion differs
        splits = (len(src) - 1) // (n - 1)
        dst = _random_code(rng, n, depth, splits)
    dst_shuffled = list(dst)
    rng.shuffle(dst_shuffled)
    cyl_rows = list(zip(src, dst_shuffled))
    src_missing = missing_words(src, n)
    dst_missing = missing_words(dst, n)
    dst_missing_shuffled = list(dst_missing)
    rng.shuffle(dst_missing_shuffled)
    pt_rows = list(zip(src_missing, dst_missing_shuffled))
    return GammaTable.from_rows(n, cyl_rows, pt_rows)


def random_vn_element(n: int, depth: int, seed: int) -> VnTable:
    return pi_project(random_element(n, depth, seed))


def random_permutation(n: int, depth: int, seed: int) -> FinitePermutation:
    """A deterministic pseudorandom finite permutation of vertices."""
    rng = random.Random(777_000_001 * seed + 13 * n + depth)
    pool = _words_up_to(n, depth)
    k = rng.randint(0, min(5, len(pool)))
    chosen = rng.sample(pool, k)
    images = list(chosen)
    rng.shuffle(images)
    return FinitePermutation.from_mapping(n, dict(zip(chosen, images)))
