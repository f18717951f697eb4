"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a mapping from exponent tuples to nonzero ``Fraction``
coefficients, relative to a fixed ordered tuple of variable names.  Two
variable sets are used throughout the package:

* ``RING_VARS = ("xi", "T1", "P", "T2")`` — generators of the boundary Chow
  subring: ``xi`` is the zero-section class of the compactifying projective
  bundle, ``T1`` and ``T2`` the two theta divisors, ``P`` the Poincare class.
* ``INVARIANT_VARS = ("Theta", "D", "Delta")`` — the polarization, boundary
  and gluing-locus classes treated as free variables.

Instances are immutable values: every operation returns a new polynomial, so
objects can be shared freely (including between threads).

Term order
----------
The canonical monomial order is graded lexicographic with variable precedence
given by position in the variable tuple (earlier = higher, so for
``RING_VARS``: ``xi > T1 > P > T2``).  Display and JSON list terms in
descending order (leading term first); quotient-ring reduction in
:mod:`chowkit.ring` scans monomials in ascending order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "INVARIANT_VARS",
    "RING_VARS",
    "Polynomial",
    "Scalar",
    "d_grade",
    "d_graded_piece",
    "format_polynomial",
    "graded_lex_key",
    "polynomial_from_json",
]

Exponents = tuple[int, ...]
Vars = tuple[str, ...]
Scalar = Union[Fraction, int]

RING_VARS: Vars = ("xi", "T1", "P", "T2")
INVARIANT_VARS: Vars = ("Theta", "D", "Delta")


def graded_lex_key(exps: Exponents) -> tuple[int, Exponents]:
    """Sort key realizing the canonical graded lexicographic order."""
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial over ``Fraction``."""

    __slots__ = ("vars", "_terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exponents, Scalar] | None = None):
        object.__setattr__(self, "vars", tuple(variables))
        nvars = len(self.vars)
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} does not match {nvars} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            value = Fraction(coeff)
            if value:
                clean[exps] = value
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Polynomial is immutable")

    # ---------------------------------------------------------------- constructors

    @classmethod
    def zero(cls, variables: Vars) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Vars, value: Scalar) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): Fraction(value)})

    @classmethod
    def variable(cls, variables: Vars, name: str) -> "Polynomial":
        if name not in variables:
            raise ValueError(f"unknown variable {name!r} for variable set {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Vars, exps: Exponents, coeff: Scalar = 1) -> "Polynomial":
        return cls(variables, {tuple(exps): Fraction(coeff)})

    # ---------------------------------------------------------------- inspection

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        """The underlying term mapping.  Treat as read-only."""
        return self._terms

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending canonical order (leading term first)."""
        return sorted(self._terms.items(), key=lambda item: graded_lex_key(item[0]), reverse=True)

    def coefficient(self, exps: Exponents) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.sorted_terms())

    def total_degree(self) -> int:
        """Largest total degree among terms (0 for the zero polynomial)."""
        return max((sum(e) for e in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self._terms}
        return len(degrees) <= 1

    def degree_in(self, name: str) -> int:
        idx = self._var_index(name)
        return max((e[idx] for e in self._terms), default=0)

    def _var_index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r} for variable set {self.vars}") from None

    # ---------------------------------------------------------------- comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    # ---------------------------------------------------------------- arithmetic

    def _coerce(self, other: object) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise ValueError(f"variable set mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        return None

    def __add__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in rhs._terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return Polynomial(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other: object) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            factor = Fraction(other)
            return Polynomial(self.vars, {e: c * factor for e, c in self._terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in rhs._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, Fraction(0)) + c1 * c2
        return Polynomial(self.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial power needs a nonnegative integer, got {exponent!r}")
        result = Polynomial.constant(self.vars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    # ---------------------------------------------------------------- structure

    def graded_piece(self, k: int) -> "Polynomial":
        """Sum of the terms of total degree exactly ``k``."""
        return Polynomial(self.vars, {e: c for e, c in self._terms.items() if sum(e) == k})

    def graded_pieces(self) -> dict[int, "Polynomial"]:
        out: dict[int, dict[Exponents, Fraction]] = {}
        for exps, coeff in self._terms.items():
            out.setdefault(sum(exps), {})[exps] = coeff
        return {k: Polynomial(self.vars, t) for k, t in sorted(out.items())}

    def substitute(self, images: Mapping[str, "Polynomial | Scalar"]) -> "Polynomial":
        """Simultaneous substitution; variables not listed map to themselves.

        All polynomial images must share one variable set, which becomes the
        variable set of the result (unlisted variables must exist there).
        Scalar images are allowed and are coerced to constants.
        """
        for name in images:
            self._var_index(name)
        target = self.vars
        for value in images.values():
            if isinstance(value, Polynomial):
                target = value.vars
                break
        table: dict[str, Polynomial] = {}
        for name in self.vars:
            value = images.get(name)
            if value is None:
                table[name] = Polynomial.variable(target, name)
            elif isinstance(value, Polynomial):
                if value.vars != target:
                    raise ValueError(f"substitution images use mixed variable sets: {value.vars} vs {target}")
                table[name] = value
            else:
                table[name] = Polynomial.constant(target, value)
        result = Polynomial.zero(target)
        for exps, coeff in self._terms.items():
            term = Polynomial.constant(target, coeff)
            for name, power in zip(self.vars, exps):
                if power:
                    term = term * table[name] ** power
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a rational point; every variable must be assigned."""
        missing = [v for v in self.vars if v not in values]
        if missing:
            raise ValueError(f"missing values for variables {missing}")
        point = [Fraction(values[v]) for v in self.vars]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            product = coeff
            for base, power in zip(point, exps):
                if power:
                    product *= base**power
            total += product
        return total


# -------------------------------------------------------------------- d-grading


def d_grade(exps: Exponents) -> int:
    """Secondary grade of a ``RING_VARS`` monomial: exponent of T1 minus
    exponent of T2 (the xi exponent must be zero)."""
    if len(exps) != len(RING_VARS):
        raise ValueError(f"d-grading is defined on {RING_VARS} exponents, got {exps}")
    if exps[0]:
        raise ValueError("d-grading is defined on xi-free monomials only")
    return exps[1] - exps[3]


def d_graded_piece(p: Polynomial, l: int) -> Polynomial:
    """Sum of the terms of ``p`` with secondary grade exactly ``l``.

    ``p`` must be a xi-free polynomial over ``RING_VARS``.
    """
    if p.vars != RING_VARS:
        raise ValueError(f"d-grading needs variables {RING_VARS}, got {p.vars}")
    return Polynomial(p.vars, {e: c for e, c in p.terms.items() if d_grade(e) == l})


# -------------------------------------------------------------------- formatting

_LATEX_NAMES = {"xi": r"\xi", "Theta": r"\Theta", "Delta": r"\Delta"}


def _coeff_text(value: Fraction) -> str:
    return str(value)


def _coeff_latex(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    sign = "-" if value < 0 else ""
    return rf"{sign}\frac{{{abs(value.numerator)}}}{{{value.denominator}}}"


def _term_pieces(exps: Exponents, variables: Vars, latex: bool) -> list[str]:
    pieces = []
    for name, power in zip(variables, exps):
        if not power:
            continue
        shown = _LATEX_NAMES.get(name, name) if latex else name
        if power == 1:
            pieces.append(shown)
        elif latex:
            pieces.append(f"{shown}^{{{power}}}")
        else:
            pieces.append(f"{shown}^{power}")
    return pieces


def _format_text(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for position, (exps, coeff) in enumerate(p.sorted_terms()):
        magnitude = abs(coeff)
        pieces = _term_pieces(exps, p.vars, latex=False)
        # A leading negative unit coefficient is kept explicit when the first
        # variable carries an exponent: unary minus binds before '^' in the
        # expression grammar, so "-T1^2" would re-parse as (-T1)^2.
        if not pieces:
            body = _coeff_text(magnitude)
        elif magnitude == 1 and not (position == 0 and coeff < 0 and "^" in pieces[0]):
            body = "*".join(pieces)
        else:
            body = "*".join([_coeff_text(magnitude), *pieces])
        if position == 0:
            chunks.append(f"-{body}" if coeff < 0 else body)
        else:
            chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(chunks)


def _format_latex(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for position, (exps, coeff) in enumerate(p.sorted_terms()):
        magnitude = abs(coeff)
        pieces = _term_pieces(exps, p.vars, latex=True)
        if not pieces:
            body = _coeff_latex(magnitude)
        elif magnitude == 1:
            body = " ".join(pieces)
        else:
            body = " ".join([_coeff_latex(magnitude), *pieces])
        if position == 0:
            chunks.append(f"-{body}" if coeff < 0 else body)
        else:
            chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(chunks)


def _json_dict(p: Polynomial) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [{"coeff": str(c), "exps": list(e)} for e, c in p.sorted_terms()],
    }


def format_polynomial(p: Polynomial, mode: str = "text") -> str:
    """Render ``p`` as ``"text"`` (grammar-compatible), ``"latex"`` or ``"json"``.

    The text form round-trips through :func:`chowkit.parsing.parse`; the JSON
    form round-trips through :func:`polynomial_from_json`.  Terms are listed
    in descending canonical order in every mode.
    """
    if mode == "text":
        return _format_text(p)
    if mode == "latex":
        return _format_latex(p)
    if mode == "json":
        import json

        return json.dumps(_json_dict(p))
    raise ValueError(f"unknown format mode {mode!r}")


def polynomial_from_json(data: "str | dict") -> Polynomial:
    """Rebuild a polynomial from its JSON form (a string or parsed dict)."""
    if isinstance(data, str):
        import json

        data = json.loads(data)
    variables = tuple(data["vars"])
    terms: dict[Exponents, Fraction] = {}
    for entry in data["terms"]:
        exps = tuple(int(e) for e in entry["exps"])
        terms[exps] = terms.get(exps, Fraction(0)) + Fraction(entry["coeff"])
    return Polynomial(variables, terms)
