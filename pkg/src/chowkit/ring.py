"""The boundary Chow subring as an exact quotient ring.

For genus ``g`` the ring is ``R~ = R[xi] / (xi^2 - xi*P)`` where
``R = Q[T1, P, T2] / I_g`` and the ideal ``I_g`` is generated by the 2g+1
coefficients of the auxiliary expansion ``(T1 + n*P + n^2*T2)^g`` in the
formal variable ``n``.  The coefficient of ``n^(g-l)`` is homogeneous of
total degree ``g`` and of secondary (d-)grade ``l``, for ``l = g .. -g``.

A :class:`RingContext` carries the relations together with per-degree
reduced row echelon data for the ideal, computed on demand and optionally
persisted to disk.  Reduction columns are ordered by *ascending* graded
lexicographic order, so echelon pivots eliminate the smallest monomials and
the surviving canonical basis consists of the largest ones; in the top
degree ``2g-2`` the survivor is the ``T1*T2``-balanced monomial, which is
what the pushforward normalization expects.

Geometric operations that do not depend on the genus — the shift
automorphisms, the inversion involution, the two boundary restrictions and
the distinguished invariant classes — live at module level.
"""

from __future__ import annotations

import os
import pickle
import threading
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .arith import factorial
from .linalg import rref, solve
from .poly import Polynomial, RING_VARS, Scalar, d_grade, graded_lex_key

__all__ = [
    "InvariantGenerators",
    "NotInSpanError",
    "RingContext",
    "XI",
    "T1",
    "P",
    "T2",
    "degree_triples",
    "extra_shift_invariant",
    "half_shift",
    "invariant_basis_element",
    "invariant_generators",
    "involution",
    "make_context",
    "q_class",
    "restrict_infty",
    "restrict_zero",
    "shift",
]

Exponents = tuple[int, ...]

XI = Polynomial.variable(RING_VARS, "xi")
T1 = Polynomial.variable(RING_VARS, "T1")
P = Polynomial.variable(RING_VARS, "P")
T2 = Polynomial.variable(RING_VARS, "T2")


class NotInSpanError(ValueError):
    """Raised when a class is not a combination of the requested basis."""


# ----------------------------------------------------------------- genus-free ops


def _require_ring_vars(p: Polynomial) -> None:
    if p.vars != RING_VARS:
        raise ValueError(f"expected a polynomial over {RING_VARS}, got {p.vars}")


def _require_xi_free(p: Polynomial) -> None:
    if p.degree_in("xi"):
        raise ValueError("operation is defined on xi-free polynomials only")


def shift(p: Polynomial, n: int) -> Polynomial:
    """Pullback along the n-th shift automorphism of the family:
    ``T1 -> T1 + n*P + n^2*T2``, ``P -> P + 2*n*T2``, ``T2 -> T2``."""
    _require_ring_vars(p)
    _require_xi_free(p)
    if not isinstance(n, int):
        raise ValueError(f"shift amount must be an integer, got {n!r}")
    return p.substitute({"T1": T1 + n * P + (n * n) * T2, "P": P + (2 * n) * T2})


def half_shift(p: Polynomial) -> Polynomial:
    """Formal shift by one half: ``T1 -> T1 + P/2 + T2/4``, ``P -> P + T2``.

    Composing it with itself gives ``shift(p, 1)``.
    """
    _require_ring_vars(p)
    _require_xi_free(p)
    return p.substitute({"T1": T1 + P / 2 + T2 / 4, "P": P + T2})


def involution(p: Polynomial) -> Polynomial:
    """Pullback along fiberwise inversion: ``xi -> xi - P``, ``P -> -P``."""
    _require_ring_vars(p)
    return p.substitute({"xi": XI - P, "P": -P})


def restrict_zero(p: Polynomial) -> Polynomial:
    """Restriction to the zero section of the compactifying bundle: ``xi -> P``."""
    _require_ring_vars(p)
    return p.substitute({"xi": P})


def restrict_infty(p: Polynomial) -> Polynomial:
    """Restriction to the infinity section: ``xi -> 0``."""
    _require_ring_vars(p)
    return p.substitute({"xi": 0})


class InvariantGenerators(NamedTuple):
    theta: Polynomial
    boundary: Polynomial
    gluing: Polynomial


def invariant_generators() -> InvariantGenerators:
    """The three distinguished shift- and inversion-invariant classes.

    ``theta`` is the polarization class ``xi + T1 - P/2``, ``boundary`` the
    boundary divisor ``-2*T2`` and ``gluing`` the class of the gluing locus
    ``-4*xi*T2 - P^2 + 2*P*T2``.
    """
    theta = XI + T1 - P / 2
    boundary = -2 * T2
    gluing = -4 * XI * T2 - P * P + 2 * P * T2
    return InvariantGenerators(theta, boundary, gluing)


def q_class() -> Polynomial:
    """The xi-free invariant ``gluing - 2*theta*boundary`` (equals ``4*T1*T2 - P^2``)."""
    gens = invariant_generators()
    return gens.gluing - 2 * gens.theta * gens.boundary


def extra_shift_invariant() -> Polynomial:
    """A shift-invariant class outside the subring generated by theta,
    boundary and gluing: ``xi*(6*P*T2 + 12*T2^2) + P^3 - 4*P*T2^2``."""
    return XI * (6 * P * T2 + 12 * T2 * T2) + P ** 3 - 4 * P * T2 * T2


def degree_triples(k: int) -> list[tuple[int, int, int]]:
    """Exponent triples ``(a, b, c)`` with ``a + b + 2c = k`` in canonical
    order (c ascending, then b ascending)."""
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return [(k - b - 2 * c, b, c) for c in range(k // 2 + 1) for b in range(k - 2 * c + 1)]


def invariant_basis_element(triple: tuple[int, int, int], basis: str = "alpha") -> Polynomial:
    """The canonical-variable polynomial attached to ``(a, b, c)``.

    ``"alpha"`` basis: ``(theta - boundary/8)^a * boundary^b * (gluing - 2*theta*boundary)^c``;
    ``"eta"`` basis: ``theta^a * boundary^b * gluing^c``.
    """
    a, b, c = triple
    theta, boundary, gluing = invariant_generators()
    if basis == "alpha":
        return (theta - boundary / 8) ** a * boundary ** b * q_class() ** c
    if basis == "eta":
        return theta ** a * boundary ** b * gluing ** c
    raise ValueError(f"unknown basis {basis!r}; expected 'alpha' or 'eta'")


# ----------------------------------------------------------------- ring context


def _monomials(k: int) -> list[Exponents]:
    """xi-free monomials of total degree ``k``, ascending graded-lex."""
    return [(0, a, b, k - a - b) for a in range(k + 1) for b in range(k - a + 1)]


class _DegreeData:
    """Echelon data for the ideal in one total degree."""

    __slots__ = ("degree", "monomials", "index", "rows", "pivots", "nonpivots")

    def __init__(self, degree: int, rows: Sequence[Sequence[Fraction]], pivots: Sequence[int]):
        self.degree = degree
        self.monomials = _monomials(degree)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)
        pivot_set = set(self.pivots)
        self.nonpivots = tuple(i for i in range(len(self.monomials)) if i not in pivot_set)


class RingContext:
    """Exact model of the boundary Chow ring at one genus.

    Construct via :func:`make_context`.  All methods are thread-safe; the
    per-degree echelon data is computed once under a lock and shared.
    """

    def __init__(self, genus: int, cache_dir: "str | os.PathLike | None" = None):
        if not isinstance(genus, int) or genus < 1:
            raise ValueError(f"genus must be a positive integer, got {genus!r}")
        self.genus = genus
        self.relation_grades = tuple(range(genus, -genus - 1, -1))
        self._relations_by_grade = self._build_relations()
        self.relations = tuple(self._relations_by_grade[l] for l in self.relation_grades)
        self._degrees: dict[int, _DegreeData] = {}
        self._lock = threading.Lock()
        self._cache_file: Path | None = None
        if cache_dir is not None:
            directory = Path(cache_dir)
            self._cache_file = directory / f"chowkit-echelon-v1-g{genus}.pickle"
            self._load_cache()

    # ------------------------------------------------------------- relations

    def _build_relations(self) -> dict[int, Polynomial]:
        g = self.genus
        buckets: dict[int, dict[Exponents, Fraction]] = {l: {} for l in self.relation_grades}
        for i in range(g + 1):
            for j in range(g - i + 1):
                k = g - i - j
                coeff = Fraction(factorial(g), factorial(i) * factorial(j) * factorial(k))
                # T1^i P^j T2^k contributes to the coefficient of n^(j+2k),
                # i.e. to the relation of d-grade l = i - k.
                buckets[i - k][(0, i, j, k)] = coeff
        return {l: Polynomial(RING_VARS, terms) for l, terms in buckets.items()}

    def relation(self, l: int) -> Polynomial:
        """The defining relation of d-grade ``l`` (``-g <= l <= g``)."""
        try:
            return self._relations_by_grade[l]
        except KeyError:
            raise ValueError(f"d-grade must satisfy -{self.genus} <= l <= {self.genus}, got {l}") from None

    # ------------------------------------------------------------- echelon data

    def _degree_data(self, k: int) -> _DegreeData:
        with self._lock:
            data = self._degrees.get(k)
            if data is None:
                data = self._build_degree(k)
                self._degrees[k] = data
                self._save_cache()
            return data

    def _build_degree(self, k: int) -> _DegreeData:
        mons = _monomials(k)
        if k < self.genus:
            return _DegreeData(k, [], [])
        index = {m: i for i, m in enumerate(mons)}
        raw: list[list[Fraction]] = []
        for rel in self.relations:
            for m in _monomials(k - self.genus):
                row = [Fraction(0)] * len(mons)
                for e, c in rel.terms.items():
                    row[index[(0, e[1] + m[1], e[2] + m[2], e[3] + m[3])]] = c
                raw.append(row)
        rows, pivots = rref(raw)
        return _DegreeData(k, rows, pivots)

    def _load_cache(self) -> None:
        if self._cache_file is None or not self._cache_file.exists():
            return
        try:
            with open(self._cache_file, "rb") as handle:
                payload = pickle.load(handle)
            if payload.get("version") != 1 or payload.get("genus") != self.genus:
                return
            for k, (rows, pivots) in payload["degrees"].items():
                self._degrees[int(k)] = _DegreeData(int(k), rows, pivots)
        except Exception:
            # The cache is purely an accelerator; a corrupt or foreign file
            # must never break the computation.
            self._degrees = {}

    def _save_cache(self) -> None:
        if self._cache_file is None:
            return
        payload = {
            "version": 1,
            "genus": self.genus,
            "degrees": {k: (d.rows, d.pivots) for k, d in self._degrees.items()},
        }
        try:
            self._cache_file.parent.mkdir(parents=True, exist_ok=True)
            scratch = self._cache_file.with_suffix(".tmp")
            with open(scratch, "wb") as handle:
                pickle.dump(payload, handle)
            os.replace(scratch, self._cache_file)
        except OSError:
            pass

    # ------------------------------------------------------------- reduction

    def _reduce_component(self, terms: Mapping[Exponents, Fraction]) -> dict[Exponents, Fraction]:
        """Reduce a xi-free term mapping degree by degree."""
        by_degree: dict[int, dict[Exponents, Fraction]] = {}
        for exps, coeff in terms.items():
            by_degree.setdefault(sum(exps), {})[exps] = coeff
        out: dict[Exponents, Fraction] = {}
        for k, piece in by_degree.items():
            data = self._degree_data(k)
            vector = [Fraction(0)] * len(data.monomials)
            for exps, coeff in piece.items():
                vector[data.index[exps]] = coeff
            for row, pivot in zip(data.rows, data.pivots):
                c = vector[pivot]
                if c:
                    for j in range(pivot, len(vector)):
                        vector[j] -= c * row[j]
            for i, value in enumerate(vector):
                if value:
                    out[data.monomials[i]] = value
        return out

    def normal_form(self, p: Polynomial) -> Polynomial:
        """Canonical representative of ``p`` in the quotient ring.

        Higher xi powers are folded first via ``xi^2 = xi*P``; the xi-free
        part and the xi-linear part are then reduced separately against the
        echelon bases, one total degree at a time.
        """
        _require_ring_vars(p)
        components: tuple[dict[Exponents, Fraction], dict[Exponents, Fraction]] = ({}, {})
        for (x, a, b, c), coeff in p.terms.items():
            if x == 0:
                bucket, key = components[0], (0, a, b, c)
            else:
                bucket, key = components[1], (0, a, b + x - 1, c)
            bucket[key] = bucket.get(key, Fraction(0)) + coeff
        out: dict[Exponents, Fraction] = {}
        for xi_power, bucket in enumerate(components):
            for (zero, a, b, c), coeff in self._reduce_component(bucket).items():
                out[(xi_power, a, b, c)] = coeff
        return Polynomial(RING_VARS, out)

    def is_zero(self, p: Polynomial) -> bool:
        """Exact ideal-membership test in the quotient ring."""
        return self.normal_form(p).is_zero()

    # ------------------------------------------------------------- structure

    def basis(self, k: int) -> tuple[Exponents, ...]:
        """Canonical monomial basis of the xi-free graded piece of degree ``k``
        (ascending graded-lex order)."""
        if k < 0:
            raise ValueError(f"degree must be nonnegative, got {k}")
        data = self._degree_data(k)
        return tuple(data.monomials[i] for i in data.nonpivots)

    def dim_graded(self, k: int, l: int | None = None) -> int:
        """Dimension of the xi-free graded piece of degree ``k``; with ``l``
        given, of its d-grade-``l`` subspace."""
        basis = self.basis(k)
        if l is None:
            return len(basis)
        return sum(1 for m in basis if d_grade(m) == l)

    def socle_pushforward(self, p: Polynomial) -> Fraction:
        """Pushforward of a top-degree class to the base, as an exact rational.

        ``p`` must be xi-free and homogeneous of degree ``2g - 2`` (the zero
        polynomial is allowed).  After reduction every surviving monomial has
        the balanced shape ``T1^(g-1-a) * P^(2a) * T2^(g-1-a)``, whose
        pushforward is ``(-1)^a * (g-1)! * (2a)! * (g-1-a)! / a!``.
        """
        _require_ring_vars(p)
        _require_xi_free(p)
        if p.is_zero():
            return Fraction(0)
        top = 2 * self.genus - 2
        if not p.is_homogeneous() or p.total_degree() != top:
            raise ValueError(f"socle pushforward needs a homogeneous class of degree {top}")
        g = self.genus
        total = Fraction(0)
        for (_, x, y, z), coeff in self._reduce_component(p.terms).items():
            if y % 2 or x != z or x + y + z != top:
                raise ArithmeticError(f"unexpected survivor monomial {(x, y, z)} in top degree")
            a = y // 2
            total += coeff * ((-1) ** a * factorial(g - 1) * factorial(2 * a) * factorial(g - 1 - a) // factorial(a))
        return total

    def pairing_matrix(self, k: int) -> list[list[Fraction]]:
        """Multiplication pairing between degrees ``g-1-k`` and ``g-1+k``,
        evaluated through the socle pushforward."""
        if not 0 <= k <= self.genus - 1:
            raise ValueError(f"pairing offset must satisfy 0 <= k <= {self.genus - 1}, got {k}")
        lower = self.basis(self.genus - 1 - k)
        upper = self.basis(self.genus - 1 + k)
        matrix = []
        for m1 in lower:
            row = []
            for m2 in upper:
                product = tuple(a + b for a, b in zip(m1, m2))
                row.append(self.socle_pushforward(Polynomial.monomial(RING_VARS, product)))
            matrix.append(row)
        return matrix

    # ------------------------------------------------------------- invariance

    def is_shift_invariant(self, p: Polynomial) -> bool:
        """Whether ``p`` glues to a class invariant under the shift action:
        the infinity restriction, shifted once, must agree with the zero
        restriction in the quotient ring."""
        _require_ring_vars(p)
        return self.is_zero(shift(restrict_infty(p), 1) - restrict_zero(p))

    def is_j_invariant(self, p: Polynomial) -> bool:
        """Whether ``p`` is fixed by the fiberwise inversion involution."""
        _require_ring_vars(p)
        return self.is_zero(involution(p) - p)

    # ------------------------------------------------------------- coordinates

    def _coordinates(self, k: int) -> list[tuple[int, Exponents]]:
        """Coordinate slots of the full quotient (with xi) in degree ``k``:
        the xi-free canonical basis in degree ``k`` followed by xi times the
        canonical basis in degree ``k - 1``."""
        slots = [(0, m) for m in self.basis(k)]
        if k >= 1:
            slots.extend((1, m) for m in self.basis(k - 1))
        return slots

    def _vectorize(self, nf: Polynomial, slots: Sequence[tuple[int, Exponents]]) -> list[Fraction]:
        position = {slot: i for i, slot in enumerate(slots)}
        vector = [Fraction(0)] * len(slots)
        for (x, a, b, c), coeff in nf.terms.items():
            vector[position[(x, (0, a, b, c))]] = coeff
        return vector

    def express_in_invariants(
        self,
        p: Polynomial,
        degree: int | None = None,
        basis: str = "alpha",
    ) -> tuple[dict[tuple[int, int, int], Fraction], int]:
        """Write ``p`` as a combination of invariant basis elements of one
        degree.

        The candidate monomials are ``invariant_basis_element((a, b, c))``
        over all ``a + b + 2c = degree``.  Returns ``(coefficients, kernel)``
        where ``coefficients`` is the particular solution with free unknowns
        set to zero (keyed by triple, in canonical order) and ``kernel`` is
        the dimension of the solution space of the homogeneous system —
        solutions are generally *not* unique.  Raises :class:`NotInSpanError`
        if ``p`` is not such a combination in the quotient ring.
        """
        _require_ring_vars(p)
        if degree is None:
            if p.is_zero():
                raise ValueError("the zero class needs an explicit degree")
            degree = p.total_degree()
        if any(sum(e) != degree for e in p.terms):
            raise ValueError(f"expected a homogeneous class of degree {degree}")
        triples = degree_triples(degree)
        slots = self._coordinates(degree)
        columns = [self._vectorize(self.normal_form(invariant_basis_element(t, basis)), slots) for t in triples]
        target = self._vectorize(self.normal_form(p), slots)
        rows = [[col[i] for col in columns] for i in range(len(slots))]
        solution, kernel = solve(rows, target, len(triples))
        if solution is None:
            raise NotInSpanError(
                f"class is not in the span of the degree-{degree} {basis!r} basis elements"
            )
        return {t: solution[i] for i, t in enumerate(triples)}, kernel


def make_context(genus: int, cache_dir: "str | os.PathLike | None" = None) -> RingContext:
    """Create the exact ring model for one genus.

    ``cache_dir`` (or the ``CHOWKIT_CACHE_DIR`` environment variable, honored
    by the command line interface) enables persistence of the per-degree
    echelon data between runs; the files are versioned and safe to delete.
    """
    return RingContext(genus, cache_dir)
