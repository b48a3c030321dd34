"""Text grammar for every element kind the workbench handles.

Words are digit strings ("e" is the root).  Boundary points are "w" or
"w(c)".  Basic sets are Z(w), P(w), Zinf(w).  Simple functions are sums
of coeff*set terms with Laurent coefficients.  Tables look like
"V2[1->2, 2->1]" and "G2[Z(1)->Z(2), Z(2)->Z(1); e->e]".  Crossed-product
elements are sums of "f * L[table]".  State specs are compact key=value
strings such as "gamma-sup:n=2,t=1/3,trace=canonical,L=16".
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError, ParseError
from .scalars import Scalar
from .words import BasicSet, BoundaryPoint, FiniteWord, Mode, SetKind, SimpleFunction
from .groups import GammaTable, Table, VnTable
from .crossed import CPElement, CPMode
from .algebra import AlgebraElement, AlgebraMatrix, AlgebraMode, ModeKind
from .states import (
    DEFAULT_TRUNCATION_DEPTH,
    GammaCritical,
    GammaGround,
    GammaSupercritical,
    StateSpec,
    TraceSpec,
    VnKMS,
)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 1) -> str:
        self.skip_ws()
        return self.text[self.pos:self.pos + k]

    def looking_at(self, token: str) -> bool:
        return self.peek(len(token)) == token

    def take(self, token: str) -> bool:
        if self.looking_at(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.take(token):
            raise ParseError("unexpected input", self.pos, repr(token))

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect_end(self) -> None:
        if not self.at_end():
            raise ParseError("trailing input", self.pos, "end of input")

    def error(self, expected: str) -> ParseError:
        return ParseError("unexpected input", self.pos, expected)

    # -- leaf tokens ----------------------------------------------------------

    def word(self, n: int) -> FiniteWord:
        self.skip_ws()
        if self.take("e"):
            return FiniteWord.empty(n)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("a word ('e' or digits)")
        try:
            return FiniteWord.from_string(n, self.text[start:self.pos])
        except InputError as ex:
            raise ParseError(str(ex), start) from ex

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("an integer")
        return int(self.text[start:self.pos])

    def scalar_atom(self) -> Scalar:
        """One signed Laurent monomial: 3/2, t^2, -2t, 1."""
        self.skip_ws()
        m = Scalar._TERM_RE.match(self.text, self.pos)
        if m is None or (m.group("rat") is None and m.group("t") is None):
            raise self.error("a Laurent term")
        coeff = Fraction(m.group("rat")) if m.group("rat") else Fraction(1)
        if m.group("sign") == "-":
            coeff = -coeff
        exp = (int(m.group("exp")) if m.group("exp") else 1) if m.group("t") else 0
        self.pos = m.end()
        return Scalar.t_power(exp, coeff)


def parse_word(text: str, n: int) -> FiniteWord:
    sc = _Scanner(text)
    w = sc.word(n)
    sc.expect_end()
    return w


def parse_boundary_point(text: str, n: int) -> BoundaryPoint:
    sc = _Scanner(text)
    prefix = sc.word(n)
    if sc.take("("):
        cycle = sc.word(n)
        sc.expect(")")
        sc.expect_end()
        return BoundaryPoint.periodic(prefix, cycle)
    sc.expect_end()
    return BoundaryPoint.finite(prefix)


def _basic_set(sc: _Scanner, n: int) -> BasicSet:
    for token, kind in (("Zinf", SetKind.CYL_INF), ("Z", SetKind.CYL), ("P", SetKind.POINT)):
        if sc.take(token):
            sc.expect("(")
            w = sc.word(n)
            sc.expect(")")
            return BasicSet(kind, w)
    raise sc.error("a basic set Z(w), P(w) or Zinf(w)")


def parse_basic_set(text: str, n: int) -> BasicSet:
    sc = _Scanner(text)
    s = _basic_set(sc, n)
    sc.expect_end()
    return s


# -- simple functions --------------------------------------------------------
#
# Functions parse into a tiny AST first because the mode (tree or boundary)
# may only become clear later, e.g. from the table of a crossed-product term.


class _SFSum:
    def __init__(self, parts):
        self.parts = parts


class _SFProd:
    def __init__(self, factors):
        self.factors = factors


class _SFSet:
    def __init__(self, s: BasicSet):
        self.set = s


class _SFConst:
    def __init__(self, c: Scalar):
        self.const = c


def _sf_expr(sc: _Scanner, n: int):
    parts = [_sf_term(sc, n)]
    while True:
        if sc.take("+"):
            parts.append(_sf_term(sc, n))
        elif sc.looking_at("-"):
            parts.append(_sf_term(sc, n))  # the sign belongs to the next atom
        else:
            break
    return _SFSum(parts)


def _sf_term(sc: _Scanner, n: int):
    factors = [_sf_factor(sc, n)]
    while sc.take("*"):
        factors.append(_sf_factor(sc, n))
    return _SFProd(factors)


def _sf_factor(sc: _Scanner, n: int):
    if sc.looking_at("("):
        sc.expect("(")
        inner = _sf_expr(sc, n)
        sc.expect(")")
        return inner
    if sc.looking_at("Z") or sc.looking_at("P"):
        return _SFSet(_basic_set(sc, n))
    return _SFConst(sc.scalar_atom())


def _sf_mode(node) -> Mode | None:
    if isinstance(node, _SFSet):
        return Mode.BOUNDARY if node.set.kind is SetKind.CYL_INF else Mode.TREE
    if isinstance(node, (_SFSum, _SFProd)):
        found = None
        for child in (node.parts if isinstance(node, _SFSum) else node.factors):
            m = _sf_mode(child)
            if m is None:
                continue
            if found is None:
                found = m
            elif found is not m:
                raise ParseError("mixed tree-mode and boundary-mode sets in one function")
        return found
    return None


def _sf_build(node, mode: Mode, n: int) -> SimpleFunction:
    if isinstance(node, _SFConst):
        return SimpleFunction.constant(mode, n, node.const)
    if isinstance(node, _SFSet):
        return SimpleFunction.indicator(node.set)
    if isinstance(node, _SFProd):
        out = SimpleFunction.constant(mode, n)
        for child in node.factors:
            out = out * _sf_build(child, mode, n)
        return out
    out = SimpleFunction.zero(mode, n)
    for child in node.parts:
        out = out + _sf_build(child, mode, n)
    return out


def parse_simple_function(text: str, n: int, mode: Mode | None = None) -> SimpleFunction:
    sc = _Scanner(text)
    node = _sf_expr(sc, n)
    sc.expect_end()
    inferred = _sf_mode(node)
    if mode is None:
        mode = inferred or Mode.TREE
    elif inferred is not None and inferred is not mode:
        raise ParseError(f"function uses {inferred.value}-mode sets, expected {mode.value}")
    return _sf_build(node, mode, n)


# -- tables -------------------------------------------------------------------


def _table(sc: _Scanner) -> Table:
    sc.skip_ws()
    if sc.take("V"):
        kind = "V"
    elif sc.take("G"):
        kind = "G"
    else:
        raise sc.error("a table starting with 'V' or 'G'")
    n = sc.integer()
    sc.expect("[")
    if sc.take("identity"):
        sc.expect("]")
        return VnTable.identity(n) if kind == "V" else GammaTable.identity(n)
    if kind == "V":
        rows = []
        while True:
            src = sc.word(n)
            sc.expect("->")
            dst = sc.word(n)
            rows.append((src, dst))
            if not sc.take(","):
                break
        sc.expect("]")
        try:
            return VnTable.from_rows(n, rows)
        except InputError as ex:
            raise ParseError(str(ex), sc.pos) from ex
    cyl_rows = []
    pt_rows = []
    if not sc.looking_at(";") and not sc.looking_at("]"):
        while True:
            sc.expect("Z")
            sc.expect("(")
            src = sc.word(n)
            sc.expect(")")
            sc.expect("->")
            sc.expect("Z")
            sc.expect("(")
            dst = sc.word(n)
            sc.expect(")")
            cyl_rows.append((src, dst))
            if not sc.take(","):
                break
    if sc.take(";"):
        while True:
            src = sc.word(n)
            sc.expect("->")
            dst = sc.word(n)
            pt_rows.append((src, dst))
            if not sc.take(","):
                break
    sc.expect("]")
    try:
        return GammaTable.from_rows(n, cyl_rows, pt_rows)
    except InputError as ex:
        raise ParseError(str(ex), sc.pos) from ex


def parse_table(text: str) -> Table:
    sc = _Scanner(text)
    t = _table(sc)
    sc.expect_end()
    return t


def parse_vn_table(text: str) -> VnTable:
    t = parse_table(text)
    if not isinstance(t, VnTable):
        raise ParseError("expected a V table")
    return t


def parse_gamma_table(text: str) -> GammaTable:
    t = parse_table(text)
    if not isinstance(t, GammaTable):
        raise ParseError("expected a G table")
    return t


# -- crossed-product elements ---------------------------------------------------


def parse_cp_element(text: str) -> CPElement:
    sc = _Scanner(text)
    out: CPElement | None = None
    while True:
        n_hint = _peek_table_alphabet(sc)
        factors = []
        while not sc.looking_at("L["):
            factors.append(_sf_factor(sc, n_hint))
            sc.expect("*")
        sc.expect("L")
        sc.expect("[")
        g = _table(sc)
        sc.expect("]")
        mode = CPMode.over_vn(g.n) if isinstance(g, VnTable) else CPMode.over_gamma(g.n)
        fnode = _SFProd(factors) if factors else _SFConst(Scalar.one())
        inferred = _sf_mode(fnode)
        if inferred is not None and inferred is not mode.function_mode:
            raise ParseError(
                f"{inferred.value}-mode function attached to a {mode.kind.value} table",
                sc.pos)
        f = _sf_build(fnode, mode.function_mode, mode.n)
        term = CPElement(mode, {g: f})
        out = term if out is None else out + term
        if not sc.take("+"):
            break
    sc.expect_end()
    return out


def _peek_table_alphabet(sc: _Scanner) -> int:
    """Alphabet size of the upcoming L[...] table in the current term."""
    text = sc.text
    depth = 0
    i = sc.pos
    while i < len(text) - 1:
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch == "L" and text[i + 1] == "[":
            j = i + 2
            while j < len(text) and text[j].isspace():
                j += 1
            if j < len(text) and text[j] in "VG":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k > j + 1:
                    return int(text[j + 1:k])
            raise ParseError("malformed table after L[", i)
        elif depth == 0 and ch == "+":
            break
        i += 1
    raise ParseError("crossed-product term has no L[...] factor", sc.pos)


# -- algebra elements -----------------------------------------------------------


def parse_algebra_element(text: str, n: int,
                          mode: AlgebraMode | None = None) -> AlgebraElement:
    if mode is None:
        has_s = "S[" in text or "S*[" in text
        has_t = "T[" in text or "T*[" in text or "E" in text
        if has_s and has_t:
            raise ParseError("element mixes S and T generators")
        mode = AlgebraMode.cuntz(n) if has_s else AlgebraMode.toeplitz(n)
    letter = mode.letter
    sc = _Scanner(text)

    def factor() -> AlgebraElement:
        if sc.take("("):
            inner = expr()
            sc.expect(")")
            return inner
        if sc.take("E"):
            if mode.kind is ModeKind.CUNTZ:
                raise ParseError("E (the defect projection) vanishes in the Cuntz flavour",
                                 sc.pos)
            return AlgebraElement.vacuum_projection(mode)
        if sc.take(f"{letter}*"):
            sc.expect("[")
            w = sc.word(mode.n)
            sc.expect("]")
            return AlgebraElement.monomial(mode, (), w)
        if sc.take(letter):
            sc.expect("[")
            w = sc.word(mode.n)
            sc.expect("]")
            return AlgebraElement.monomial(mode, w, ())
        return AlgebraElement.one(mode).scale(sc.scalar_atom())

    def term() -> AlgebraElement:
        out = factor()
        while True:
            if sc.take("*"):
                out = out * factor()
                continue
            nxt = sc.peek(1)
            if nxt in ("E", letter, "(") or nxt.isdigit() or nxt == "t":
                out = out * factor()
                continue
            return out

    def expr() -> AlgebraElement:
        out = term()
        while True:
            if sc.take("+"):
                out = out + term()
            elif sc.looking_at("-"):
                out = out + term()  # the sign belongs to the next atom
            else:
                return out

    result = expr()
    sc.expect_end()
    return result


def parse_algebra_matrix(text: str, n: int,
                         mode: AlgebraMode | None = None) -> AlgebraMatrix:
    """Matrices are JSON arrays of element strings."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise ParseError(f"bad matrix JSON: {ex}") from ex
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise ParseError("matrix JSON must be an array of arrays of strings")
    if mode is None:
        joined = " ".join(str(e) for row in data for e in row)
        has_s = "S[" in joined or "S*[" in joined
        mode = AlgebraMode.cuntz(n) if has_s else AlgebraMode.toeplitz(n)
    entries = [[parse_algebra_element(str(e), n, mode) for e in row] for row in data]
    return AlgebraMatrix(entries)


# -- traces and state specs -------------------------------------------------------


def parse_trace(text: str) -> TraceSpec:
    text = text.strip()
    if text == "canonical":
        return TraceSpec.make_canonical()
    if text == "trivial":
        return TraceSpec.trivial()
    if text == "sign":
        return TraceSpec.sign()
    if text.startswith("thoma[") and text.endswith("]"):
        body = text[len("thoma["):-1]
        parts = body.split(";")
        if len(parts) != 2 or not parts[0].startswith("a=") or not parts[1].startswith("b="):
            raise ParseError(f"bad character spec {text!r}", expected="thoma[a=...;b=...]")

        def values(chunk: str) -> list[Fraction]:
            chunk = chunk[2:].strip()
            if not chunk:
                return []
            try:
                return [Fraction(v) for v in chunk.split(",")]
            except ValueError as ex:
                raise ParseError(f"bad rational in {text!r}") from ex

        try:
            return TraceSpec.thoma(values(parts[0]), values(parts[1]))
        except InputError as ex:
            raise ParseError(str(ex)) from ex
    raise ParseError(f"unknown trace {text!r}",
                     expected="canonical, trivial, sign or thoma[a=...;b=...]")


def parse_state_spec(text: str) -> StateSpec:
    text = text.strip()
    if ":" not in text:
        raise ParseError(f"bad state spec {text!r}", expected="name:key=value,...")
    name, _, body = text.partition(":")
    fields: dict[str, str] = {}
    depth = 0
    current = ""
    chunks: list[str] = []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            chunks.append(current)
            current = ""
        else:
            current += ch
    if current:
        chunks.append(current)
    for chunk in chunks:
        if "=" not in chunk:
            raise ParseError(f"bad field {chunk!r} in state spec", expected="key=value")
        key, _, value = chunk.partition("=")
        fields[key.strip()] = value.strip()
    try:
        n = int(fields.pop("n"))
    except KeyError:
        raise ParseError("state spec needs n=...") from None
    try:
        if name == "vn-kms":
            _reject_extras(fields)
            return VnKMS(n)
        if name == "gamma-sup":
            trace = parse_trace(fields.pop("trace", "canonical"))
            t_text = fields.pop("t", "sym")
            t = None if t_text in ("sym", "symbolic") else Fraction(t_text)
            depth = int(fields.pop("L", DEFAULT_TRUNCATION_DEPTH))
            _reject_extras(fields)
            return GammaSupercritical(n, trace, t, depth)
        if name == "gamma-crit":
            trace = parse_trace(fields.pop("trace", "canonical"))
            _reject_extras(fields)
            return GammaCritical(n, trace)
        if name == "gamma-ground":
            value = fields.pop("state", None)
            if value is None:
                value = fields.pop("trace", "canonical")
            _reject_extras(fields)
            return GammaGround(n, parse_trace(value))
    except (InputError, ValueError) as ex:
        raise ParseError(str(ex)) from ex
    raise ParseError(f"unknown state spec {name!r}",
                     expected="vn-kms, gamma-sup, gamma-crit or gamma-ground")


def _reject_extras(fields: dict) -> None:
    if fields:
        raise ParseError(f"unknown state-spec fields {sorted(fields)}")


# -- generic entry point ----------------------------------------------------------


def parse_element(text: str, n: int = 2, mode: AlgebraMode | None = None):
    """Best-effort typed parse: state specs, crossed-product elements, tables,
    algebra elements, simple functions, boundary points, words."""
    stripped = text.strip()
    for prefix in ("vn-kms:", "gamma-sup:", "gamma-crit:", "gamma-ground:"):
        if stripped.startswith(prefix):
            return parse_state_spec(stripped)
    if "L[" in stripped:
        return parse_cp_element(stripped)
    if stripped[:1] in ("V", "G") and "[" in stripped:
        return parse_table(stripped)
    if any(tok in stripped for tok in ("T[", "T*[", "S[", "S*[", "E")):
        return parse_algebra_element(stripped, n, mode)
    if any(tok in stripped for tok in ("Z(", "P(")):
        return parse_simple_function(stripped, n)
    if "(" in stripped:
        return parse_boundary_point(stripped, n)
    try:
        return parse_word(stripped, n)
    except ParseError:
        return parse_simple_function(stripped, n)
