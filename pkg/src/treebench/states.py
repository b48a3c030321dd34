"""Quasi-invariant measures, traces, and the KMS/ground states of the
crossed products.

Above the critical temperature the equilibrium state is atomic on the
vertices with weights (1-nt)t^|mu| (t = e^-beta); at the critical value
t = 1/n it factors through the boundary restriction and a trace of the
finite-permutation subgroup; ground states see only the root vertex and
a state of its stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InputError, ModeMismatchError, NeedsRationalT
from .scalars import Scalar
from .words import (
    BasicSet,
    FiniteWord,
    Mode,
    SetKind,
    SimpleFunction,
)
from .groups import (
    FinitePermutation,
    GammaTable,
    Table,
    VnTable,
    act,
    compose,
    conjugate,
    fixed_structure,
    inverse,
    kernel_permutation,
    random_permutation,
    stabilizer_transposition,
)
from .crossed import CPElement, CPMode, GroupKind, gauge_scale_cp, homogeneous_decompose

DEFAULT_TRUNCATION_DEPTH = 16


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TraceSpec:
    """A trace: the canonical one, or a character of the finite-permutation
    subgroup given by its two decreasing parameter sequences."""

    canonical: bool
    alphas: tuple[Fraction, ...] = ()
    betas: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.canonical:
            if self.alphas or self.betas:
                raise InputError("the canonical trace takes no parameters")
            return
        for seq, name in ((self.alphas, "alpha"), (self.betas, "beta")):
            if any(v < 0 for v in seq):
                raise InputError(f"{name} parameters must be nonnegative")
            if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
                raise InputError(f"{name} parameters must be decreasing")
        if sum(self.alphas) + sum(self.betas) > 1:
            raise InputError("character parameters must sum to at most 1")

    @classmethod
    def make_canonical(cls) -> "TraceSpec":
        return cls(canonical=True)

    @classmethod
    def thoma(cls, alphas: Sequence[Fraction | int | str],
              betas: Sequence[Fraction | int | str]) -> "TraceSpec":
        return cls(canonical=False,
                   alphas=tuple(Fraction(a) for a in alphas),
                   betas=tuple(Fraction(b) for b in betas))

    @classmethod
    def trivial(cls) -> "TraceSpec":
        return cls.thoma([1], [])

    @classmethod
    def sign(cls) -> "TraceSpec":
        return cls.thoma([], [1])

    def __str__(self) -> str:
        if self.canonical:
            return "canonical"
        a = ",".join(str(v) for v in self.alphas)
        b = ",".join(str(v) for v in self.betas)
        return f"thoma[a={a};b={b}]"


def thoma_eval(trace: TraceSpec, cycle_type: Sequence[int]) -> Scalar:
    """The character value on a permutation with the given cycle lengths."""
    if trace.canonical:
        return Scalar.one() if not cycle_type else Scalar.zero()
    total = Fraction(1)
    for k in cycle_type:
        if k < 2:
            raise InputError("cycle lengths must be at least 2")
        term = sum((a**k for a in trace.alphas), Fraction(0))
        term += (-1) ** (k + 1) * sum((b**k for b in trace.betas), Fraction(0))
        total *= term
    return Scalar.rational(total)


def trace_eval(trace: TraceSpec, g: GammaTable) -> Scalar:
    """Evaluate the trace on a group unitary.

    The canonical trace is defined on the whole group; a character is only
    defined on the finite-permutation subgroup.
    """
    if trace.canonical:
        return Scalar.one() if g.is_identity() else Scalar.zero()
    perm = kernel_permutation(g)
    if perm is None:
        raise DomainError(
            "a character trace is only defined on the finite-permutation subgroup")
    return thoma_eval(trace, perm.cycle_type())


# ---------------------------------------------------------------------------
# State specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class EvalResult:
    value: Scalar
    error_bound: Fraction = Fraction(0)
    exact: bool = True

    def __post_init__(self):
        if (self.error_bound == 0) != self.exact:
            raise InputError("error_bound must vanish exactly when the value is exact")

    def as_dict(self) -> dict:
        return {"value": str(self.value), "error_bound": str(self.error_bound),
                "exact": self.exact}

    def __str__(self) -> str:
        if self.exact:
            return f"{self.value} (exact)"
        return f"{self.value} (error <= {self.error_bound})"


@dataclass(frozen=True, slots=True)
class VnKMS:
    """The unique equilibrium state of the boundary crossed product, at the
    critical inverse temperature log n: uniform measure after the
    conditional expectation."""

    n: int

    @property
    def cp_mode(self) -> CPMode:
        return CPMode.over_vn(self.n)

    def __str__(self) -> str:
        return f"vn-kms:n={self.n}"


@dataclass(frozen=True, slots=True)
class GammaSupercritical:
    """Equilibrium above the critical temperature: atomic measure with
    weights (1-nt)t^|mu| against a trace of the root stabilizer.

    t may be a rational in (0, 1/n) or None for the formal variable.
    """

    n: int
    trace: TraceSpec = field(default_factory=TraceSpec.make_canonical)
    t: Fraction | None = None
    truncation_depth: int = DEFAULT_TRUNCATION_DEPTH

    def __post_init__(self):
        if self.t is not None:
            t = Fraction(self.t)
            if not 0 < t < Fraction(1, self.n):
                raise InputError(
                    f"the atomic equilibrium measure exists only for 0 < t < 1/{self.n}; "
                    f"got t = {t} (the total weight (1-nt)*sum (nt)^k fails to be 1)")
            object.__setattr__(self, "t", t)
        if self.truncation_depth < 0:
            raise InputError("truncation depth must be nonnegative")
        if not self.trace.canonical:
            _verify_trace_property(self.trace, self.n)

    @property
    def cp_mode(self) -> CPMode:
        return CPMode.over_gamma(self.n)

    def __str__(self) -> str:
        t = "sym" if self.t is None else str(self.t)
        return (f"gamma-sup:n={self.n},t={t},trace={self.trace},"
                f"L={self.truncation_depth}")


@dataclass(frozen=True, slots=True)
class GammaCritical:
    """Equilibrium at the critical temperature log n: boundary measure
    tensored with a trace of the finite-permutation subgroup."""

    n: int
    trace: TraceSpec = field(default_factory=TraceSpec.make_canonical)

    @property
    def cp_mode(self) -> CPMode:
        return CPMode.over_gamma(self.n)

    def __str__(self) -> str:
        return f"gamma-crit:n={self.n},trace={self.trace}"


@dataclass(frozen=True, slots=True)
class GammaGround:
    """Zero-temperature limit: evaluation at the root vertex against a state
    of the root stabilizer."""

    n: int
    trace: TraceSpec = field(default_factory=TraceSpec.make_canonical)

    @property
    def cp_mode(self) -> CPMode:
        return CPMode.over_gamma(self.n)

    def __str__(self) -> str:
        return f"gamma-ground:n={self.n},state={self.trace}"


StateSpec = VnKMS | GammaSupercritical | GammaCritical | GammaGround


def _verify_trace_property(trace: TraceSpec, n: int, samples: int = 8) -> None:
    """Spot-check tau(gh) = tau(hg) on random permutation pairs before use."""
    for seed in range(samples):
        g = random_permutation(n, 2, seed)
        h = random_permutation(n, 2, seed + samples)
        lhs = thoma_eval(trace, g.compose(h).cycle_type())
        rhs = thoma_eval(trace, h.compose(g).cycle_type())
        if lhs != rhs:
            raise InputError("the supplied functional is not tracial")


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


def _atomic_measure_of_set(s: BasicSet, n: int) -> Scalar:
    """Closed form of the supercritical atomic measure on a basic set."""
    if s.kind is SetKind.POINT:
        # (1 - nt) t^|w|
        return (Scalar.one() - Scalar.t_power(1, n)) * Scalar.t_power(len(s.word))
    if s.kind is SetKind.CYL:
        return Scalar.t_power(len(s.word))
    raise ModeMismatchError("the atomic measure lives on the tree mode")


def _boundary_measure(f: SimpleFunction) -> Scalar:
    total = Scalar.zero()
    for s, c in f.restrict_to_boundary().terms:
        total = total + c * Scalar.rational(Fraction(1, f.n ** len(s.word)))
    return total


def measure_eval(spec: StateSpec, f: SimpleFunction) -> EvalResult:
    """Integrate a simple function against the measure attached to the spec."""
    if isinstance(spec, VnKMS):
        if f.mode is not Mode.BOUNDARY or f.n != spec.n:
            raise ModeMismatchError("expected a boundary-mode function")
        return EvalResult(_substitute_critical(_boundary_measure(f), spec.n))
    if isinstance(spec, GammaCritical):
        if f.mode is not Mode.TREE or f.n != spec.n:
            raise ModeMismatchError("expected a tree-mode function")
        return EvalResult(_substitute_critical(_boundary_measure(f), spec.n))
    if isinstance(spec, GammaSupercritical):
        if f.mode is not Mode.TREE or f.n != spec.n:
            raise ModeMismatchError("expected a tree-mode function")
        total = Scalar.zero()
        for s, c in f.terms:
            total = total + c * _atomic_measure_of_set(s, spec.n)
        if spec.t is not None:
            total = total.subs_scalar(spec.t)
        return EvalResult(total)
    raise ModeMismatchError("ground specs do not carry a measure")


def _substitute_critical(value: Scalar, n: int) -> Scalar:
    return value.subs_scalar(Fraction(1, n))


# ---------------------------------------------------------------------------
# State evaluation
# ---------------------------------------------------------------------------


def _conjugate_into_stabilizer(g: GammaTable, mu: FiniteWord) -> GammaTable:
    g_mu = stabilizer_transposition(mu)
    return conjugate(g, g_mu)  # g_mu is an involution, so this is g_mu g g_mu


def _conjugated_cycle_type(perm: FinitePermutation, mu: FiniteWord) -> list[int]:
    """Cycle type of the conjugate of a vertex permutation by (root mu)."""
    root = FiniteWord.empty(perm.n)

    def swap(w: FiniteWord) -> FiniteWord:
        if w == mu:
            return root
        if w == root:
            return mu
        return w

    mapping = {swap(w): swap(v) for w, v in perm.pairs}
    return FinitePermutation.from_mapping(perm.n, mapping).cycle_type()


def _supercritical_term(spec: GammaSupercritical, g: GammaTable,
                        f: SimpleFunction) -> EvalResult:
    """One f.lambda_g term of the supercritical state."""
    n = spec.n
    if g.is_identity():
        # tau(lambda_e) = 1 for every trace, so the term is the plain integral
        return measure_eval(spec, f)
    if spec.trace.canonical:
        return EvalResult(Scalar.zero())  # conjugates of g stay nontrivial
    fs = fixed_structure(g)
    if not fs.identity_cylinders and not fs.fixed_singletons:
        return EvalResult(Scalar.zero())
    perm = kernel_permutation(g)
    if perm is None:
        raise DomainError(
            "a character trace is only defined on the finite-permutation subgroup, "
            f"but {g} has fixed vertices outside it")
    weight = Scalar.one() - Scalar.t_power(1, n)
    total = Scalar.zero()
    for v in fs.fixed_singletons:
        tau = thoma_eval(spec.trace, _conjugated_cycle_type(perm, v))
        total = total + weight * Scalar.t_power(len(v)) * f.eval(v) * tau
    error = Fraction(0)
    exact = True
    if fs.identity_cylinders:
        if spec.t is None:
            raise NeedsRationalT(
                "summing over identity cylinders needs a rational t; "
                "supply t in the state spec")
        L = spec.truncation_depth
        for eta in fs.identity_cylinders:
            stack = [eta]
            while stack:
                mu = stack.pop()
                if len(mu) > L:
                    continue
                tau = thoma_eval(spec.trace, _conjugated_cycle_type(perm, mu))
                total = total + weight * Scalar.t_power(len(mu)) * f.eval(mu) * tau
                stack.extend(mu.children())
        exact = False
        error = f.sup_norm(spec.t) * (n * spec.t) ** (L + 1)
    if spec.t is not None:
        total = total.subs_scalar(spec.t)
    return EvalResult(total, error, exact)


def eval_state(spec: StateSpec, x: CPElement) -> EvalResult:
    """The exact (or rigorously bounded) value of the state on an element."""
    if x.mode != spec.cp_mode:
        raise ModeMismatchError(f"element mode {x.mode} does not match {spec}")
    value = Scalar.zero()
    error = Fraction(0)
    exact = True

    if isinstance(spec, VnKMS):
        e = x.mode.identity_table()
        f = x.terms.get(e)
        if f is not None:
            value = measure_eval(spec, f).value
        return EvalResult(value)

    if isinstance(spec, GammaSupercritical):
        for g, f in x.terms.items():
            r = _supercritical_term(spec, g, f)
            value = value + r.value
            error += r.error_bound
            exact = exact and r.exact
        return EvalResult(value, error, exact)

    if isinstance(spec, GammaCritical):
        for g, f in x.terms.items():
            perm = kernel_permutation(g)
            if perm is None:
                continue
            tau = thoma_eval(spec.trace, perm.cycle_type())
            if not tau:
                continue
            value = value + _boundary_measure(f) * tau
        return EvalResult(_substitute_critical(value, spec.n))

    if isinstance(spec, GammaGround):
        root = FiniteWord.empty(spec.n)
        for g, f in x.terms.items():
            if act(g, root) != root:
                continue
            f_at_root = f.eval(root)
            if not f_at_root:
                continue
            value = value + f_at_root * trace_eval(spec.trace, g)
        return EvalResult(value)

    raise InputError(f"unknown state spec {spec!r}")


# ---------------------------------------------------------------------------
# Condition checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class KMSReport:
    equal: bool
    lhs: EvalResult
    rhs: EvalResult

    def as_dict(self) -> dict:
        return {"equal": self.equal, "lhs": self.lhs.as_dict(), "rhs": self.rhs.as_dict()}

    def __str__(self) -> str:
        verdict = "equal" if self.equal else "DIFFER"
        return f"{verdict}: lhs = {self.lhs}, rhs = {self.rhs}"


def check_kms_condition(spec: StateSpec, a: CPElement, b: CPElement) -> KMSReport:
    """Compare psi(ab) with psi(b . gauge(a)) under the given state."""
    if isinstance(spec, GammaGround):
        raise DomainError("the equilibrium identity is not the ground-state condition")
    lhs = eval_state(spec, a * b)
    rhs = eval_state(spec, b * gauge_scale_cp(a))
    if lhs.exact and rhs.exact:
        equal = lhs.value == rhs.value
    else:
        diff = abs((lhs.value - rhs.value).as_fraction())
        equal = diff <= lhs.error_bound + rhs.error_bound
    return KMSReport(equal, lhs, rhs)


def check_ground_condition(spec: GammaGround, a_k: CPElement, b: CPElement) -> tuple[bool, EvalResult]:
    """The assertable ground-state condition: negative-degree elements are
    annihilated on the right."""
    if not isinstance(spec, GammaGround):
        raise ModeMismatchError("ground condition needs a ground spec")
    degrees = [k for k, part in homogeneous_decompose(a_k).items() if not part.is_zero()]
    if len(degrees) > 1:
        raise DomainError(f"element is not homogeneous: degrees {degrees}")
    value = eval_state(spec, b * a_k)
    if degrees and degrees[0] < 0:
        return (value.exact and not value.value, value)
    return (True, value)


def check_trace_invariance(trace: TraceSpec, g: GammaTable, h: GammaTable) -> bool:
    """Traces of the permutation subgroup do not see conjugation by the
    ambient group."""
    if kernel_permutation(h) is None:
        raise DomainError("h must be a finite permutation of vertices")
    return trace_eval(trace, conjugate(h, g)) == trace_eval(trace, h)
