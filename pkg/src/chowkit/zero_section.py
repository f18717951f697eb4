"""The boundary zero-section class and its invariant-basis expansions.

The distinguished degree-g class ``xi * T1^(g-1) / (g-1)!`` — the class of
the zero section inside the boundary family — equals an explicit
combination of invariant classes.  This module holds the two rational
coefficient families of that combination (``alpha`` for the shifted basis,
``eta`` for the plain basis), assembles the combinations, and machine-checks
the identity together with the auxiliary identities used to derive it:

* the triangularity statement that makes the alpha system solvable,
* the closed form of the boundary-free alpha coefficients,
* the hypergeometric inner-sum proportionality behind that closed form,
* the invariance properties that characterize the class in the first place.

Each check returns a :class:`VerificationReport` carrying the exact residual.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import bernoulli, double_factorial, factorial
from .poly import INVARIANT_VARS, Polynomial, RING_VARS, format_polynomial
from .ring import (
    P,
    RingContext,
    T1,
    T2,
    degree_triples,
    extra_shift_invariant,
    invariant_basis_element,
    invariant_generators,
    involution,
    make_context,
    q_class,
    restrict_infty,
    restrict_zero,
    shift,
)

__all__ = [
    "CoefficientTable",
    "VerificationReport",
    "alpha",
    "alpha_b0_closed_form",
    "assemble_main_rhs",
    "boundary_zero_section",
    "coefficient_table",
    "eta",
    "inner_sum_constant",
    "maple_inner_sum",
    "verify_all",
    "verify_eta_alpha",
    "verify_invariance",
    "verify_main",
    "verify_triangular",
]


# -------------------------------------------------------------- coefficients


def _validate_triple(a: int, b: int, c: int) -> None:
    if a < 0 or b < 0 or c < 0:
        raise ValueError(f"coefficient indices must be nonnegative, got {(a, b, c)}")


def alpha(a: int, b: int, c: int) -> Fraction:
    """Coefficient of the shifted-basis monomial with exponents ``(a, b, c)``."""
    _validate_triple(a, b, c)
    sign = (-1) ** (b + c + 1)
    two_part = Fraction(1, 2 ** (b + c)) - Fraction(2, 8 ** (b + c))
    numerator = sign * two_part * double_factorial(2 * a + 2 * b + 2 * c - 1) * bernoulli(2 * b + 2 * c)
    denominator = (
        double_factorial(2 * a + 2 * c - 1)
        * double_factorial(2 * b + 2 * c - 1)
        * factorial(a)
        * factorial(b)
        * factorial(c)
    )
    return numerator / denominator


def alpha_b0_closed_form(a: int, c: int) -> Fraction:
    """Closed form of ``alpha(a, 0, c)``:
    ``(-1)^c * (2^(1-2c) - 1) * B_{2c} / (a! * (2c)!)``."""
    _validate_triple(a, 0, c)
    two_part = Fraction(2, 4 ** c) - 1
    return (-1) ** c * two_part * bernoulli(2 * c) / (factorial(a) * factorial(2 * c))


def eta(a: int, b: int, c: int) -> Fraction:
    """Coefficient of the plain-basis monomial with exponents ``(a, b, c)``."""
    _validate_triple(a, b, c)
    outer = Fraction(
        (-1) ** (b + c) * double_factorial(2 * c + 2 * b - 1),
        8 ** (b + c) * factorial(a) * factorial(c),
    )
    total = Fraction(0)
    for x in range(b + 1):
        numerator = (2 - 4 ** (c + x)) * bernoulli(2 * c + 2 * x)
        denominator = (
            double_factorial(2 * c + 2 * b - 2 * x - 1)
            * double_factorial(2 * c + 2 * x - 1)
            * factorial(b - x)
            * factorial(x)
        )
        total += numerator / denominator
    return outer * total


@dataclass(frozen=True)
class CoefficientTable:
    """Both coefficient families for one genus, keyed by ``(a, b, c)`` with
    ``a + b + 2c = genus``, in canonical triple order."""

    genus: int
    alpha: dict[tuple[int, int, int], Fraction]
    eta: dict[tuple[int, int, int], Fraction]

    def triples(self) -> list[tuple[int, int, int]]:
        return list(self.alpha)


@lru_cache(maxsize=None)
def coefficient_table(genus: int) -> CoefficientTable:
    if genus < 1:
        raise ValueError(f"genus must be a positive integer, got {genus}")
    triples = degree_triples(genus)
    return CoefficientTable(
        genus=genus,
        alpha={t: alpha(*t) for t in triples},
        eta={t: eta(*t) for t in triples},
    )


# -------------------------------------------------------------- inner sum


def maple_inner_sum(g: int, h: int, l: int) -> Fraction:
    """The alternating inner sum
    ``sum_{c=l}^{h} (-1)^c 4^c (2g-2c)! / ((g-c)! (c-l)! (g-h-c)! (h-c)!)``
    (defined for ``0 <= l <= h <= g`` with ``g - h >= h``)."""
    if not (0 <= l <= h <= g and g - h >= h):
        raise ValueError(f"need 0 <= l <= h <= g and g - h >= h, got g={g}, h={h}, l={l}")
    total = Fraction(0)
    for c in range(l, h + 1):
        total += Fraction(
            (-1) ** c * 4 ** c * factorial(2 * g - 2 * c),
            factorial(g - c) * factorial(c - l) * factorial(g - h - c) * factorial(h - c),
        )
    return total


def inner_sum_constant(g: int, h: int) -> Fraction:
    """The common value of ``maple_inner_sum(g, h, l)`` divided by
    ``(-1)^l 4^l l! / ((g-l-h)! (h-l)! (2l)!)``, checked over every ``l``.

    Raises ``ArithmeticError`` if the ratio is not independent of ``l``.
    """
    ratios = []
    for l in range(h + 1):
        reference = Fraction(
            (-1) ** l * 4 ** l * factorial(l),
            factorial(g - l - h) * factorial(h - l) * factorial(2 * l),
        )
        ratios.append(maple_inner_sum(g, h, l) / reference)
    if any(r != ratios[0] for r in ratios):
        raise ArithmeticError(f"inner-sum ratio depends on l for g={g}, h={h}: {ratios}")
    return ratios[0]


# -------------------------------------------------------------- assembly


def boundary_zero_section(ctx: RingContext) -> Polynomial:
    """The class ``xi * T1^(g-1) / (g-1)!`` of the zero section in the
    boundary family at the context's genus."""
    g = ctx.genus
    exps = (1, g - 1, 0, 0)
    return Polynomial.monomial(RING_VARS, exps, Fraction(1, factorial(g - 1)))


def assemble_main_rhs(ctx: RingContext, basis: str = "alpha") -> Polynomial:
    """The invariant-basis combination predicted to equal the zero-section
    class, as a raw (unreduced) polynomial in the canonical variables."""
    table = coefficient_table(ctx.genus)
    coeffs = table.alpha if basis == "alpha" else table.eta if basis == "eta" else None
    if coeffs is None:
        raise ValueError(f"unknown basis {basis!r}; expected 'alpha' or 'eta'")
    total = Polynomial.zero(RING_VARS)
    for triple, value in coeffs.items():
        total = total + value * invariant_basis_element(triple, basis)
    return total


# -------------------------------------------------------------- reports


@dataclass
class VerificationReport:
    """Outcome of one exact verification.

    ``residual`` is the reduced difference between the two sides (the zero
    polynomial exactly when the identity holds).  ``seconds`` is wall-clock
    time; it is kept out of all serialized output so that runs are
    byte-for-byte reproducible.
    """

    name: str
    genus: int
    holds: bool
    residual: Polynomial
    kernel_dimension: int | None = None
    seconds: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        payload: dict = {
            "name": self.name,
            "genus": self.genus,
            "holds": self.holds,
            "residual": format_polynomial(self.residual),
        }
        if self.kernel_dimension is not None:
            payload["kernel_dimension"] = self.kernel_dimension
        if include_timing:
            payload["seconds"] = self.seconds
        return payload

    def summary(self) -> str:
        verdict = "holds" if self.holds else f"FAILS, residual {format_polynomial(self.residual)}"
        return f"{self.name} (genus {self.genus}): {verdict}"


def _report(name: str, genus: int, residual: Polynomial, started: float) -> VerificationReport:
    return VerificationReport(
        name=name,
        genus=genus,
        holds=residual.is_zero(),
        residual=residual,
        seconds=time.perf_counter() - started,
    )


# -------------------------------------------------------------- verifiers


def verify_main(genus: int, cache_dir=None) -> VerificationReport:
    """Check the main identity: the assembled alpha combination reduces to
    the zero-section class in the quotient ring."""
    started = time.perf_counter()
    ctx = make_context(genus, cache_dir)
    residual = ctx.normal_form(assemble_main_rhs(ctx, "alpha") - boundary_zero_section(ctx))
    return _report("main_identity", genus, residual, started)


def verify_eta_alpha(genus: int) -> VerificationReport:
    """Check that the eta family is the expansion of the alpha family: in the
    free polynomial ring on the invariant variables,
    ``sum alpha * (Theta - D/8)^a D^b (Delta - 2 Theta D)^c`` equals
    ``sum eta * Theta^a D^b Delta^c`` identically."""
    started = time.perf_counter()
    theta = Polynomial.variable(INVARIANT_VARS, "Theta")
    boundary = Polynomial.variable(INVARIANT_VARS, "D")
    gluing = Polynomial.variable(INVARIANT_VARS, "Delta")
    table = coefficient_table(genus)
    lhs = Polynomial.zero(INVARIANT_VARS)
    for (a, b, c), value in table.alpha.items():
        lhs = lhs + value * ((theta - boundary / 8) ** a * boundary ** b * (gluing - 2 * theta * boundary) ** c)
    rhs = Polynomial.zero(INVARIANT_VARS)
    for (a, b, c), value in table.eta.items():
        rhs = rhs + value * (theta ** a * boundary ** b * gluing ** c)
    return _report("eta_alpha_expansion", genus, lhs - rhs, started)


def verify_triangular(genus: int, cache_dir=None) -> VerificationReport:
    """Check the triangularity identity: substituting ``T1`` for the shifted
    polarization, ``-2*T2`` for the boundary and ``4*T1*T2 - P^2`` for the
    xi-free invariant into the alpha combination lands in the ideal."""
    started = time.perf_counter()
    ctx = make_context(genus, cache_dir)
    table = coefficient_table(genus)
    total = Polynomial.zero(RING_VARS)
    for (a, b, c), value in table.alpha.items():
        total = total + value * (T1 ** a * (-2 * T2) ** b * (4 * T1 * T2 - P * P) ** c)
    return _report("triangular_identity", genus, ctx.normal_form(total), started)


def _invariance_checks(ctx: RingContext) -> list[tuple[str, Polynomial, bool]]:
    """(label, class, check_involution) triples for the invariance suite."""
    gens = invariant_generators()
    return [
        ("theta", gens.theta, True),
        ("boundary", gens.boundary, True),
        ("gluing", gens.gluing, True),
        ("q", q_class(), True),
        ("extra", extra_shift_invariant(), False),
        ("zero_section", boundary_zero_section(ctx), True),
    ]


def verify_invariance(genus: int, cache_dir=None) -> list[VerificationReport]:
    """Check shift invariance for the distinguished classes, and involution
    invariance for those that have it.

    The extra shift-invariant class is checked for shift invariance only:
    its involution image differs from it by a class of degree below the
    ideal's generating degree, so it is genuinely not involution-invariant
    once the genus exceeds 2.
    """
    ctx = make_context(genus, cache_dir)
    reports = []
    for label, cls, check_involution in _invariance_checks(ctx):
        started = time.perf_counter()
        residual = ctx.normal_form(shift(restrict_infty(cls), 1) - restrict_zero(cls))
        reports.append(_report(f"shift_invariance[{label}]", genus, residual, started))
        if check_involution:
            started = time.perf_counter()
            residual = ctx.normal_form(involution(cls) - cls)
            reports.append(_report(f"involution_invariance[{label}]", genus, residual, started))
    return reports


def verify_all(genus: int, cache_dir=None) -> list[VerificationReport]:
    """Every verification at one genus, in deterministic order."""
    return [
        verify_main(genus, cache_dir),
        verify_eta_alpha(genus),
        verify_triangular(genus, cache_dir),
        *verify_invariance(genus, cache_dir),
    ]
