"""Exact Z2-graded linear algebra: spaces, homogeneous maps, sparse brackets.

Everything is computed over the rationals with :class:`fractions.Fraction`,
so every identity check in this package is an exact yes/no question with no
tolerances.  Basis elements carry a parity (0 = even, 1 = odd); all sign
bookkeeping uses the Koszul convention, where transposing two odd symbols
introduces a factor -1.

All container types here are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]

EVEN = 0
ODD = 1

ZERO = Fraction(0)
ONE = Fraction(1)

__all__ = [
    "EVEN",
    "ODD",
    "Scalar",
    "Vector",
    "Matrix",
    "BihomError",
    "DimensionError",
    "ParityError",
    "PreconditionError",
    "TheoremContradictionError",
    "SuperSpace",
    "GradedMap",
    "LinearForm",
    "StructureTensor2",
    "StructureTensor3",
    "WedgePair",
    "as_scalar",
    "basis_vector",
    "commute",
    "ksign",
    "parity_components",
    "signed_slot_expansion",
    "vec_add",
    "vec_eq",
    "vec_is_zero",
    "vec_parity",
    "vec_scale",
    "vec_sub",
    "zero_vector",
]


class BihomError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(BihomError):
    """Objects defined over different spaces, or shapes that do not match."""


class ParityError(BihomError):
    """A grading invariant is violated (bad parity value, non-homogeneous data)."""


class PreconditionError(BihomError):
    """A documented precondition of an operation failed.

    Carries the failing reports or witness data in ``details`` so callers can
    surface actionable diagnostics.
    """

    def __init__(self, message: str, details: object = None):
        super().__init__(message)
        self.details = details


class TheoremContradictionError(BihomError):
    """An internally cross-checked equivalence came out inconsistent.

    This never fires on correct input; it exists so the test suite would
    detect a defect in one of the paired computations instead of silently
    trusting either side.
    """


def as_scalar(value: object) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact scalar")


def ksign(exponent: int) -> int:
    """(-1)**exponent for integer exponents, evaluated mod 2."""
    return -1 if exponent & 1 else 1


# ---------------------------------------------------------------------------
# plain vector helpers (tuples of Fractions)
# ---------------------------------------------------------------------------

def zero_vector(dim: int) -> Vector:
    return (ZERO,) * dim


def basis_vector(dim: int, index: int) -> Vector:
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dimension {dim}")
    return tuple(ONE if i == index else ZERO for i in range(dim))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: Fraction | int, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def vec_is_zero(v: Vector) -> bool:
    return all(a == 0 for a in v)


def vec_eq(u: Vector, v: Vector) -> bool:
    return len(u) == len(v) and all(a == b for a, b in zip(u, v))


@dataclass(frozen=True)
class SuperSpace:
    """A finite-dimensional Z2-graded vector space, given by basis parities.

    ``parities[i]`` is the parity of the basis element ``e_{i+1}`` (indices are
    0-based internally; serialized documents use 1-based indices).
    """

    parities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.parities) < 1:
            raise DimensionError("a graded space needs at least one basis element")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise ParityError(f"parities must be 0 or 1, got {self.parities}")
        object.__setattr__(self, "parities", tuple(int(p) for p in self.parities))

    @property
    def dim(self) -> int:
        return len(self.parities)

    def parity(self, index: int) -> int:
        return self.parities[index]

    def basis(self) -> list[Vector]:
        return [basis_vector(self.dim, i) for i in range(self.dim)]

    def indices(self) -> range:
        return range(self.dim)

    def check_vector(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.dim:
            raise DimensionError(f"vector of length {len(v)} in a dim-{self.dim} space")
        return tuple(as_scalar(c) for c in v)


def vec_parity(space: SuperSpace, v: Vector) -> int | None:
    """Parity of a homogeneous vector, or None for mixed support.

    The zero vector is homogeneous of every parity; it reports EVEN.
    """
    seen: set[int] = {space.parity(i) for i, c in enumerate(v) if c != 0}
    if not seen:
        return EVEN
    if len(seen) == 1:
        return seen.pop()
    return None


def _freeze_matrix(space: SuperSpace, rows: Iterable[Iterable[object]]) -> Matrix:
    frozen = tuple(tuple(as_scalar(c) for c in row) for row in rows)
    if len(frozen) != space.dim or any(len(r) != space.dim for r in frozen):
        raise DimensionError(f"expected a {space.dim}x{space.dim} matrix")
    return frozen


@dataclass(frozen=True)
class GradedMap:
    """A homogeneous linear endomorphism stored as a dense exact matrix.

    ``matrix[k][i]`` is the coefficient of ``e_k`` in the image of ``e_i``
    (columns are images of basis elements).  A map of parity ``p`` may only
    send a basis element of parity ``q`` into components of parity ``q + p``.
    """

    space: SuperSpace
    matrix: Matrix
    parity: int = EVEN

    def __post_init__(self) -> None:
        if self.parity not in (EVEN, ODD):
            raise ParityError(f"map parity must be 0 or 1, got {self.parity}")
        object.__setattr__(self, "matrix", _freeze_matrix(self.space, self.matrix))
        for k in self.space.indices():
            for i in self.space.indices():
                if self.matrix[k][i] != 0:
                    expected = (self.space.parity(i) + self.parity) % 2
                    if self.space.parity(k) != expected:
                        raise ParityError(
                            f"entry ({k},{i}) violates the grading of a parity-{self.parity} map"
                        )

    @classmethod
    def identity(cls, space: SuperSpace) -> "GradedMap":
        rows = [[ONE if k == i else ZERO for i in space.indices()] for k in space.indices()]
        return cls(space, tuple(tuple(r) for r in rows), EVEN)

    @classmethod
    def zero(cls, space: SuperSpace, parity: int = EVEN) -> "GradedMap":
        return cls(space, ((ZERO,) * space.dim,) * space.dim, parity)

    @classmethod
    def diagonal(cls, space: SuperSpace, entries: Sequence[object]) -> "GradedMap":
        diag = [as_scalar(c) for c in entries]
        if len(diag) != space.dim:
            raise DimensionError("diagonal length does not match the space dimension")
        rows = [
            [diag[k] if k == i else ZERO for i in space.indices()] for k in space.indices()
        ]
        return cls(space, tuple(tuple(r) for r in rows), EVEN)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        vv = self.space.check_vector(v)
        return tuple(
            sum((self.matrix[k][i] * vv[i] for i in self.space.indices()), ZERO)
            for k in self.space.indices()
        )

    def column(self, i: int) -> Vector:
        """Image of the basis element e_i."""
        if not 0 <= i < self.space.dim:
            raise DimensionError(f"basis index {i} out of range")
        return tuple(self.matrix[k][i] for k in self.space.indices())

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (matrix product self @ other)."""
        if self.space != other.space:
            raise DimensionError("composition of maps on different spaces")
        n = self.space.dim
        rows = [
            [
                sum((self.matrix[k][m] * other.matrix[m][i] for m in range(n)), ZERO)
                for i in range(n)
            ]
            for k in range(n)
        ]
        return GradedMap(self.space, tuple(tuple(r) for r in rows), (self.parity + other.parity) % 2)

    def power(self, exponent: int) -> "GradedMap":
        if exponent < 0:
            raise ValueError("negative powers are not defined here; use inverse() first")
        result = GradedMap.identity(self.space)
        for _ in range(exponent):
            result = result.compose(self)
        return result

    def scale(self, c: Fraction | int) -> "GradedMap":
        cc = as_scalar(c)
        rows = tuple(tuple(cc * a for a in row) for row in self.matrix)
        return GradedMap(self.space, rows, self.parity)

    def add(self, other: "GradedMap") -> "GradedMap":
        if self.space != other.space:
            raise DimensionError("sum of maps on different spaces")
        if self.parity != other.parity:
            raise ParityError("sum of maps of different parities is not homogeneous")
        rows = tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.matrix, other.matrix)
        )
        return GradedMap(self.space, rows, self.parity)

    def sub(self, other: "GradedMap") -> "GradedMap":
        return self.add(other.scale(-1))

    def commutes_with(self, other: "GradedMap") -> bool:
        return commute(self, other)

    def is_identity(self) -> bool:
        return self == GradedMap.identity(self.space)

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in row) for row in self.matrix)

    def inverse(self) -> "GradedMap":
        """Exact inverse; raises PreconditionError when singular."""
        from .linalg import invert_matrix

        inv = invert_matrix(self.matrix)
        if inv is None:
            raise PreconditionError("map is singular and has no inverse")
        if self.parity != EVEN:
            # An invertible odd map would swap the graded components; its
            # inverse is odd as well, which the constructor checks.
            return GradedMap(self.space, inv, ODD)
        return GradedMap(self.space, inv, EVEN)


def commute(m1: GradedMap, m2: GradedMap) -> bool:
    """True iff the two maps commute as matrices (m1 m2 = m2 m1)."""
    if m1.space != m2.space:
        raise DimensionError("maps on different spaces never commute")
    return m1.compose(m2).matrix == m2.compose(m1).matrix


def parity_components(space: SuperSpace, rows: Iterable[Iterable[object]]) -> tuple[GradedMap, GradedMap]:
    """Split an arbitrary square matrix into its (even, odd) homogeneous parts.

    Identity checks that depend on a Koszul sign are only defined for
    homogeneous maps, so mixed matrices must be decomposed first.
    """
    matrix = _freeze_matrix(space, rows)
    even_rows = []
    odd_rows = []
    for k in space.indices():
        even_rows.append(
            tuple(
                matrix[k][i] if (space.parity(k) - space.parity(i)) % 2 == EVEN else ZERO
                for i in space.indices()
            )
        )
        odd_rows.append(
            tuple(
                matrix[k][i] if (space.parity(k) - space.parity(i)) % 2 == ODD else ZERO
                for i in space.indices()
            )
        )
    return (
        GradedMap(space, tuple(even_rows), EVEN),
        GradedMap(space, tuple(odd_rows), ODD),
    )


@dataclass(frozen=True)
class LinearForm:
    """A linear form on a graded space, zero on every odd basis element."""

    space: SuperSpace
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", self.space.check_vector(self.coefficients))
        for i, c in enumerate(self.coefficients):
            if c != 0 and self.space.parity(i) == ODD:
                raise ParityError(
                    f"linear form has a nonzero coefficient at odd basis index {i}"
                )

    @classmethod
    def zero(cls, space: SuperSpace) -> "LinearForm":
        return cls(space, zero_vector(space.dim))

    def apply(self, v: Sequence[Fraction]) -> Fraction:
        vv = self.space.check_vector(v)
        return sum((c * x for c, x in zip(self.coefficients, vv)), ZERO)

    def of_basis(self, i: int) -> Fraction:
        return self.coefficients[i]

    def compose(self, m: GradedMap) -> "LinearForm":
        """The form v -> self(m(v)).  Requires an even map to stay graded."""
        if m.space != self.space:
            raise DimensionError("form and map live on different spaces")
        if m.parity != EVEN:
            raise ParityError("composing with an odd map does not preserve the grading")
        return LinearForm(self.space, tuple(self.apply(m.column(i)) for i in self.space.indices()))

    def scale(self, c: Fraction | int) -> "LinearForm":
        return LinearForm(self.space, vec_scale(as_scalar(c), self.coefficients))

    def is_zero(self) -> bool:
        return vec_is_zero(self.coefficients)


def _canonical_entries(
    space: SuperSpace, arity: int, entries: Mapping[tuple[int, ...], object]
) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Validate, drop zeros and sort sparse structure-constant entries."""
    out: dict[tuple[int, ...], Fraction] = {}
    for key, raw in entries.items():
        if len(key) != arity + 1:
            raise DimensionError(
                f"entry key {key} should have {arity} argument indices plus one output index"
            )
        if any(not 0 <= t < space.dim for t in key):
            raise DimensionError(f"entry key {key} out of range for dim {space.dim}")
        c = as_scalar(raw)
        if c == 0:
            continue
        *args, k = key
        if space.parity(k) != sum(space.parity(a) for a in args) % 2:
            raise ParityError(
                f"structure constant at {tuple(key)} violates parity additivity"
            )
        out[tuple(int(t) for t in key)] = out.get(tuple(key), ZERO) + c
    return tuple(sorted((k, c) for k, c in out.items() if c != 0))


@dataclass(frozen=True)
class StructureTensor2:
    """A bilinear bracket given by sparse structure constants.

    An entry ``(i, j, k) -> c`` contributes ``c * e_k`` to ``[e_i, e_j]``.
    The bracket is even: every entry must satisfy parity additivity.
    """

    space: SuperSpace
    entries: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", _canonical_entries(self.space, 2, dict(self.entries))
        )

    @classmethod
    def from_dict(cls, space: SuperSpace, entries: Mapping[tuple[int, ...], object]) -> "StructureTensor2":
        return cls(space, tuple(dict(entries).items()))  # type: ignore[arg-type]

    @classmethod
    def zero(cls, space: SuperSpace) -> "StructureTensor2":
        return cls(space, ())

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[e_i, e_j] as a coefficient vector."""
        dim = self.space.dim
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionError(f"basis indices ({i},{j}) out of range for dim {dim}")
        out = [ZERO] * dim
        for (a, b, k), c in self.entries:
            if a == i and b == j:
                out[k] += c
        return tuple(out)

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        """Bilinear extension of the basis bracket."""
        uu = self.space.check_vector(u)
        vv = self.space.check_vector(v)
        out = [ZERO] * self.space.dim
        for (a, b, k), c in self.entries:
            coeff = uu[a] * vv[b]
            if coeff != 0:
                out[k] += c * coeff
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.entries

    def as_dict(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(self.entries)


@dataclass(frozen=True)
class StructureTensor3:
    """A trilinear bracket given by sparse structure constants.

    An entry ``(i, j, l, k) -> c`` contributes ``c * e_k`` to ``[e_i, e_j, e_l]``.
    """

    space: SuperSpace
    entries: tuple[tuple[tuple[int, int, int, int], Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", _canonical_entries(self.space, 3, dict(self.entries))
        )

    @classmethod
    def from_dict(cls, space: SuperSpace, entries: Mapping[tuple[int, ...], object]) -> "StructureTensor3":
        return cls(space, tuple(dict(entries).items()))  # type: ignore[arg-type]

    @classmethod
    def zero(cls, space: SuperSpace) -> "StructureTensor3":
        return cls(space, ())

    def bracket_basis(self, i: int, j: int, l: int) -> Vector:
        dim = self.space.dim
        if not (0 <= i < dim and 0 <= j < dim and 0 <= l < dim):
            raise DimensionError(f"basis indices ({i},{j},{l}) out of range for dim {dim}")
        out = [ZERO] * dim
        for (a, b, c_, k), c in self.entries:
            if a == i and b == j and c_ == l:
                out[k] += c
        return tuple(out)

    def bracket(
        self, u: Sequence[Fraction], v: Sequence[Fraction], w: Sequence[Fraction]
    ) -> Vector:
        uu = self.space.check_vector(u)
        vv = self.space.check_vector(v)
        ww = self.space.check_vector(w)
        out = [ZERO] * self.space.dim
        for (a, b, c_, k), c in self.entries:
            coeff = uu[a] * vv[b] * ww[c_]
            if coeff != 0:
                out[k] += c * coeff
        return tuple(out)

    def partial_matrix(self, slot: int, u: Sequence[Fraction], v: Sequence[Fraction]) -> Matrix:
        """Matrix of the linear map obtained by fixing two arguments.

        ``slot`` names the free argument position (0, 1 or 2); ``u`` and ``v``
        fill the remaining positions in order.  Column ``m`` of the result is
        the bracket with ``e_m`` in the free slot.
        """
        uu = self.space.check_vector(u)
        vv = self.space.check_vector(v)
        dim = self.space.dim
        rows = [[ZERO] * dim for _ in range(dim)]
        for (a, b, c_, k), c in self.entries:
            if slot == 0:
                coeff, free = c * uu[b] * vv[c_], a
            elif slot == 1:
                coeff, free = c * uu[a] * vv[c_], b
            elif slot == 2:
                coeff, free = c * uu[a] * vv[b], c_
            else:
                raise DimensionError(f"slot must be 0, 1 or 2, got {slot}")
            if coeff != 0:
                rows[k][free] += coeff
        return tuple(tuple(r) for r in rows)

    def is_zero(self) -> bool:
        return not self.entries

    def as_dict(self) -> dict[tuple[int, int, int, int], Fraction]:
        return dict(self.entries)

    def scale(self, c: Fraction | int) -> "StructureTensor3":
        cc = as_scalar(c)
        return StructureTensor3(self.space, tuple((k, cc * v) for k, v in self.entries))

    def add(self, other: "StructureTensor3") -> "StructureTensor3":
        if self.space != other.space:
            raise DimensionError("sum of tensors on different spaces")
        merged = dict(self.entries)
        for k, v in other.entries:
            merged[k] = merged.get(k, ZERO) + v
        return StructureTensor3(self.space, tuple(merged.items()))


@dataclass(frozen=True)
class WedgePair:
    """An ordered pair of homogeneous vectors standing for x1 ^ x2.

    Trilinear expressions evaluated against a WedgePair feed the two
    components into fixed argument slots; for skew tensors this makes the
    evaluation antisymmetric under the swap x1 <-> x2 up to the Koszul sign
    (-1)^{|x1||x2|}.
    """

    space: SuperSpace
    first: Vector
    second: Vector
    parity_first: int = field(init=False)
    parity_second: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "first", self.space.check_vector(self.first))
        object.__setattr__(self, "second", self.space.check_vector(self.second))
        p1 = vec_parity(self.space, self.first)
        p2 = vec_parity(self.space, self.second)
        if p1 is None or p2 is None:
            raise ParityError("wedge components must be homogeneous")
        object.__setattr__(self, "parity_first", p1)
        object.__setattr__(self, "parity_second", p2)

    @classmethod
    def from_basis(cls, space: SuperSpace, i: int, j: int) -> "WedgePair":
        return cls(space, basis_vector(space.dim, i), basis_vector(space.dim, j))

    @property
    def parity(self) -> int:
        return (self.parity_first + self.parity_second) % 2

    def swapped(self) -> "WedgePair":
        return WedgePair(self.space, self.second, self.first)


def signed_slot_expansion(
    scalars: tuple[Fraction, Fraction, Fraction],
    pair_values: tuple[Vector, Vector, Vector],
    parities: tuple[int, int, int],
) -> Vector:
    """The three-term Koszul-signed expansion used by every scalar-times-bracket sum.

    Given scalars (t_x, t_y, t_z) attached to the slots of a triple with
    parities (p_x, p_y, p_z), and the bracket values (B_yz, B_xz, B_xy) of the
    complementary pairs, returns

        t_x * B_yz  -  (-1)^{p_x p_y} t_y * B_xz  +  (-1)^{p_z (p_x + p_y)} t_z * B_xy.

    This single sign convention defines the induced ternary bracket and the
    cyclic sums appearing in the derivation and Rota-Baxter transfer criteria.
    """
    tx, ty, tz = scalars
    byz, bxz, bxy = pair_values
    px, py, pz = parities
    out = vec_scale(tx, byz)
    out = vec_sub(out, vec_scale(ksign(px * py) * ty, bxz))
    out = vec_add(out, vec_scale(ksign(pz * (px + py)) * tz, bxy))
    return out


def all_pairs(space: SuperSpace) -> Iterable[tuple[int, int]]:
    return itertools.product(space.indices(), repeat=2)  # type: ignore[return-value]


def all_triples(space: SuperSpace) -> Iterable[tuple[int, int, int]]:
    return itertools.product(space.indices(), repeat=3)  # type: ignore[return-value]
