"""Second-order deformations, the wedge composition, and Nijenhuis operators.

A quadratic family b_t = b + t w1 + t^2 w2 of ternary brackets is a valid
deformation exactly when each coefficient tensor commutes with the cubes of
the structure maps and the degree-l composition sums

    sum_{i+j=l} w_i o w_j = 0        (l = 1, 2, 3, 4;  w_0 = ambient bracket)

vanish, where the composition of two trilinear maps is evaluated on a pair of
wedges and one extra argument:

    (w_i o w_j)(X, Y, z) = w_i(w_j(X, .) * Y, b^2(z))
                         - w_i(b~^2(X), w_j(b~(Y), a(z)))
                         + (-1)^{|X||Y|} w_i(b~^2(Y), w_j(b~(X), a(z)))

with b~ applying beta to each wedge factor and the starred insertion

    w_j(X, .) * Y = w_j(b~(X), a(y1)) ^ b^2(y2)
                  + (-1)^{|y1||X|} b^2(y1) ^ w_j(b~(X), a(y2)).

Degree-l sums are checked on all raw index tuples rather than on a wedge
basis; this is convention-free, and for skew tensors it is equivalent.

Nijenhuis operators are even maps N whose deformed brackets telescope:
[Nx, Ny, Nz] equals N applied to the second N-bracket, equivalently the
alternating subset sum of N-powers.  They generate trivial deformations
(w1, w2) = (first N-bracket, second N-bracket).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebras import (
    BiHomLieSuperalgebra,
    ThreeBiHomLieSuperalgebra,
    VerificationReport,
    Violation,
)
from .core import (
    EVEN,
    ZERO,
    GradedMap,
    LinearForm,
    ParityError,
    PreconditionError,
    StructureTensor3,
    TheoremContradictionError,
    Vector,
    WedgePair,
    all_pairs,
    all_triples,
    ksign,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
)

__all__ = [
    "DeformationPair",
    "omega_compose",
    "check_deformation",
    "check_2cocycle",
    "make_n_bracket_1",
    "make_n_bracket_2",
    "is_nijenhuis_2",
    "is_nijenhuis_3",
    "check_nijenhuis_transfer",
    "check_nijenhuis_rb_compatibility",
    "check_derivation_nijenhuis_rb_equivalence",
    "build_trivial_deformation",
]


@dataclass(frozen=True)
class DeformationPair:
    """Coefficient tensors (w1, w2) of a quadratic bracket family."""

    omega1: StructureTensor3
    omega2: StructureTensor3

    def __post_init__(self) -> None:
        if self.omega1.space != self.omega2.space:
            raise ParityError("deformation tensors live on different spaces")


def _require_even_commuting(N: GradedMap, A) -> None:
    if N.parity != EVEN:
        raise ParityError("operator must be even")
    for name, m in (("alpha", A.alpha), ("beta", A.beta)):
        if not N.commutes_with(m):
            raise PreconditionError(f"operator does not commute with {name}")


# ---------------------------------------------------------------------------
# wedge composition
# ---------------------------------------------------------------------------

def omega_compose(
    A: ThreeBiHomLieSuperalgebra,
    wi: StructureTensor3,
    wj: StructureTensor3,
    X: WedgePair,
    Y: WedgePair,
    z: int,
) -> Vector:
    """Evaluate (w_i o w_j)(X, Y, e_z) exactly.

    The structure maps are taken from ``A``; ``wi`` and ``wj`` may be any
    tensors on the same space (in particular the ambient bracket itself).
    """
    if X.space != A.space or Y.space != A.space:
        raise ParityError("wedge arguments live on a different space")
    beta = A.beta
    beta2 = beta.compose(beta)
    az = A.alpha.column(z)
    bx1, bx2 = beta.apply(X.first), beta.apply(X.second)
    by1, by2 = beta.apply(Y.first), beta.apply(Y.second)
    b2x1, b2x2 = beta2.apply(X.first), beta2.apply(X.second)
    b2y1, b2y2 = beta2.apply(Y.first), beta2.apply(Y.second)
    pX = X.parity
    pY = Y.parity

    inner_y1 = wj.bracket(bx1, bx2, A.alpha.apply(Y.first))
    inner_y2 = wj.bracket(bx1, bx2, A.alpha.apply(Y.second))
    star1 = wi.bracket(inner_y1, b2y2, beta2.column(z))
    star2 = wi.bracket(b2y1, inner_y2, beta2.column(z))
    term1 = vec_add(star1, vec_scale(ksign(Y.parity_first * pX), star2))

    term2 = wi.bracket(b2x1, b2x2, wj.bracket(by1, by2, az))
    term3 = wi.bracket(b2y1, b2y2, wj.bracket(bx1, bx2, az))
    out = vec_sub(term1, term2)
    out = vec_add(out, vec_scale(ksign(pX * pY), term3))
    return out


class _CompositionTables:
    """Precomputed partial evaluations for fast degree-l sums on raw tuples."""

    def __init__(self, A: ThreeBiHomLieSuperalgebra, omegas: dict[int, StructureTensor3]):
        space = A.space
        idx = list(space.indices())
        beta2 = A.beta.compose(A.beta)
        acol = [A.alpha.column(i) for i in idx]
        bcol = [A.beta.column(i) for i in idx]
        b2col = [beta2.column(i) for i in idx]
        self.space = space
        self.P = space.parities
        self.idx = idx
        # inner[w][a][b][c] = w(beta e_a, beta e_b, alpha e_c)
        self.inner = {
            n: [[[w.bracket(bcol[a], bcol[b], acol[c]) for c in idx] for b in idx] for a in idx]
            for n, w in omegas.items()
        }
        # slot matrices for the outer tensor: free first, second, or third slot
        self.first = {
            n: [[w.partial_matrix(0, b2col[d], b2col[m]) for m in idx] for d in idx]
            for n, w in omegas.items()
        }
        self.second = {
            n: [[w.partial_matrix(1, b2col[c], b2col[m]) for m in idx] for c in idx]
            for n, w in omegas.items()
        }
        self.third = {
            n: [[w.partial_matrix(2, b2col[a], b2col[b]) for b in idx] for a in idx]
            for n, w in omegas.items()
        }

    def _matvec(self, m, v: Vector) -> Vector:
        return tuple(
            sum((m[k][t] * v[t] for t in self.idx if v[t] != 0), ZERO) for k in self.idx
        )

    def compose_at(self, ni: int, nj: int, a: int, b: int, c: int, d: int, m: int) -> Vector:
        """(w_{ni} o w_{nj})(e_a ^ e_b, e_c ^ e_d, e_m) via the tables."""
        P = self.P
        pX = P[a] + P[b]
        pY = P[c] + P[d]
        inner_j = self.inner[nj]
        out = self._matvec(self.first[ni][d][m], inner_j[a][b][c])
        out = vec_add(
            out,
            vec_scale(ksign(P[c] * pX), self._matvec(self.second[ni][c][m], inner_j[a][b][d])),
        )
        out = vec_sub(out, self._matvec(self.third[ni][a][b], inner_j[c][d][m]))
        out = vec_add(
            out, vec_scale(ksign(pX * pY), self._matvec(self.third[ni][c][d], inner_j[a][b][m]))
        )
        return out


def _compat_violations(A, w: StructureTensor3, tag: str):
    acol = [A.alpha.column(i) for i in A.space.indices()]
    bcol = [A.beta.column(i) for i in A.space.indices()]
    for i, j, l in all_triples(A.space):
        v = w.bracket_basis(i, j, l)
        yield (i, j, l), f"alpha-compat-{tag}", vec_sub(
            w.bracket(acol[i], acol[j], acol[l]), A.alpha.apply(v)
        )
        yield (i, j, l), f"beta-compat-{tag}", vec_sub(
            w.bracket(bcol[i], bcol[j], bcol[l]), A.beta.apply(v)
        )


def _twisted_skew_violations(A, w: StructureTensor3, tag: str):
    P = A.space.parities
    acol = [A.alpha.column(i) for i in A.space.indices()]
    bcol = [A.beta.column(i) for i in A.space.indices()]
    for i, j, k in all_triples(A.space):
        base = w.bracket(bcol[i], bcol[j], acol[k])
        yield (i, j, k), f"swap-12-{tag}", vec_add(
            base, vec_scale(ksign(P[i] * P[j]), w.bracket(bcol[j], bcol[i], acol[k]))
        )
        yield (i, j, k), f"swap-23-{tag}", vec_add(
            base, vec_scale(ksign(P[j] * P[k]), w.bracket(bcol[i], bcol[k], acol[j]))
        )


def check_deformation(
    A: ThreeBiHomLieSuperalgebra, d: DeformationPair, fail_fast: bool = False
) -> VerificationReport:
    """Full validity check for a quadratic deformation pair.

    Sub-rules, in order: twisted skew-symmetry of each coefficient tensor
    (same convention as the ambient bracket), compatibility with the cubed
    structure maps, and the degree-l composition sums for l = 1..4 over all
    raw basis tuples.
    """
    if d.omega1.space != A.space:
        raise ParityError("deformation pair lives on a different space")
    violations: list[Violation] = []
    total = 0

    def feed(gen) -> bool:
        nonlocal total
        for where, rule, res in gen:
            total += 1
            if not vec_is_zero(res):
                violations.append(Violation(tuple(where), tuple(res), rule))
                if fail_fast:
                    return True
        return False

    stopped = feed(_twisted_skew_violations(A, d.omega1, "omega1"))
    stopped = stopped or feed(_twisted_skew_violations(A, d.omega2, "omega2"))
    stopped = stopped or feed(_compat_violations(A, d.omega1, "omega1"))
    stopped = stopped or feed(_compat_violations(A, d.omega2, "omega2"))
    if not stopped:
        omegas = {0: A.bracket, 1: d.omega1, 2: d.omega2}
        tables = _CompositionTables(A, omegas)
        pairs_for = {
            l: [(i, l - i) for i in range(3) if 0 <= l - i <= 2] for l in (1, 2, 3, 4)
        }
        idx = list(A.space.indices())
        for l in (1, 2, 3, 4):
            for a, b, c, dd, m in itertools.product(idx, repeat=5):
                total += 1
                acc = None
                for ni, nj in pairs_for[l]:
                    term = tables.compose_at(ni, nj, a, b, c, dd, m)
                    acc = term if acc is None else vec_add(acc, term)
                if not vec_is_zero(acc):
                    violations.append(
                        Violation((a, b, c, dd, m), tuple(acc), f"series-degree-{l}")
                    )
                    if fail_fast:
                        break
            else:
                continue
            break
    return VerificationReport("second-order-deformation", total, tuple(violations))


def check_2cocycle(A: ThreeBiHomLieSuperalgebra, w1: StructureTensor3) -> VerificationReport:
    """The degree-1 composition sum alone: w0 o w1 + w1 o w0 = 0 on raw tuples."""
    if w1.space != A.space:
        raise ParityError("cocycle candidate lives on a different space")
    tables = _CompositionTables(A, {0: A.bracket, 1: w1})
    idx = list(A.space.indices())
    violations = []
    total = 0
    for a, b, c, d, m in itertools.product(idx, repeat=5):
        total += 1
        res = vec_add(
            tables.compose_at(0, 1, a, b, c, d, m), tables.compose_at(1, 0, a, b, c, d, m)
        )
        if not vec_is_zero(res):
            violations.append(Violation((a, b, c, d, m), tuple(res), "degree-1-sum"))
    return VerificationReport("two-cocycle", total, tuple(violations))


# ---------------------------------------------------------------------------
# N-brackets and Nijenhuis operators
# ---------------------------------------------------------------------------

def make_n_bracket_1(A: ThreeBiHomLieSuperalgebra, N: GradedMap) -> StructureTensor3:
    """First deformed bracket: insert N once in each slot, subtract N of the bracket."""
    _require_even_commuting(N, A)
    e = A.space.basis()
    Nc = [N.column(i) for i in A.space.indices()]
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    for i, j, l in all_triples(A.space):
        w = A.bracket.bracket(Nc[i], e[j], e[l])
        w = vec_add(w, A.bracket.bracket(e[i], Nc[j], e[l]))
        w = vec_add(w, A.bracket.bracket(e[i], e[j], Nc[l]))
        w = vec_sub(w, N.apply(A.bracket.bracket_basis(i, j, l)))
        for k, c in enumerate(w):
            if c != 0:
                entries[(i, j, l, k)] = c
    return StructureTensor3.from_dict(A.space, entries)


def make_n_bracket_2(A: ThreeBiHomLieSuperalgebra, N: GradedMap) -> StructureTensor3:
    """Second deformed bracket: pairwise N insertions minus N of the first bracket."""
    _require_even_commuting(N, A)
    nb1 = make_n_bracket_1(A, N)
    e = A.space.basis()
    Nc = [N.column(i) for i in A.space.indices()]
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    for i, j, l in all_triples(A.space):
        w = A.bracket.bracket(Nc[i], Nc[j], e[l])
        w = vec_add(w, A.bracket.bracket(Nc[i], e[j], Nc[l]))
        w = vec_add(w, A.bracket.bracket(e[i], Nc[j], Nc[l]))
        w = vec_sub(w, N.apply(nb1.bracket_basis(i, j, l)))
        for k, c in enumerate(w):
            if c != 0:
                entries[(i, j, l, k)] = c
    return StructureTensor3.from_dict(A.space, entries)


def _subset_form(A: ThreeBiHomLieSuperalgebra, N: GradedMap, i: int, j: int, l: int) -> Vector:
    """Alternating subset sum: over nonempty I, (-1)^{|I|-1} N^{|I|} [args].

    Slots in I keep their basis argument; slots outside I receive N.
    """
    e = A.space.basis()
    Nc = [N.column(t) for t in A.space.indices()]
    powers = {1: N, 2: N.compose(N), 3: N.compose(N).compose(N)}
    acc = None
    for size in (1, 2, 3):
        for subset in itertools.combinations(range(3), size):
            args = [
                e[idx] if slot in subset else Nc[idx]
                for slot, idx in enumerate((i, j, l))
            ]
            term = powers[size].apply(A.bracket.bracket(*args))
            term = vec_scale(ksign(size - 1), term)
            acc = term if acc is None else vec_add(acc, term)
    return acc


def is_nijenhuis_3(A: ThreeBiHomLieSuperalgebra, N: GradedMap) -> VerificationReport:
    """Ternary Nijenhuis check, with both displayed forms compared per triple.

    The inductive form N(second N-bracket) and the alternating subset form are
    computed independently; they agree identically, and a mismatch would
    indicate an implementation defect, reported as an internal-consistency
    violation.
    """
    _require_even_commuting(N, A)
    nb2 = make_n_bracket_2(A, N)
    Nc = [N.column(t) for t in A.space.indices()]
    violations = []
    total = 0
    for i, j, l in all_triples(A.space):
        total += 1
        lhs = A.bracket.bracket(Nc[i], Nc[j], Nc[l])
        inductive = N.apply(nb2.bracket_basis(i, j, l))
        subset = _subset_form(A, N, i, j, l)
        if not vec_is_zero(vec_sub(inductive, subset)):
            violations.append(
                Violation((i, j, l), vec_sub(inductive, subset), "form-consistency")
            )
            continue
        res = vec_sub(lhs, inductive)
        if not vec_is_zero(res):
            violations.append(Violation((i, j, l), res, "nijenhuis"))
    return VerificationReport(
        "ternary-nijenhuis",
        total,
        tuple(violations),
        ("inductive and subset forms are cross-checked on every triple",),
    )


def is_nijenhuis_2(A: BiHomLieSuperalgebra, N: GradedMap, fail_fast: bool = False) -> VerificationReport:
    """Binary Nijenhuis check: [Nx, Ny] = N([Nx, y] + [x, Ny] - N[x, y])."""
    _require_even_commuting(N, A)
    e = A.space.basis()
    Nc = [N.column(t) for t in A.space.indices()]
    br = A.bracket.bracket
    violations = []
    total = 0
    for i, j in all_pairs(A.space):
        total += 1
        inner = vec_add(br(Nc[i], e[j]), br(e[i], Nc[j]))
        inner = vec_sub(inner, N.apply(A.bracket.bracket_basis(i, j)))
        res = vec_sub(br(Nc[i], Nc[j]), N.apply(inner))
        if not vec_is_zero(res):
            violations.append(Violation((i, j), res, "nijenhuis"))
            if fail_fast:
                break
    return VerificationReport("binary-nijenhuis", total, tuple(violations))


def check_nijenhuis_transfer(
    A: BiHomLieSuperalgebra, tau: LinearForm, N: GradedMap
) -> bool:
    """A binary Nijenhuis operator stays Nijenhuis on the induced ternary algebra.

    Preconditions are verified; a failure of the conclusion would contradict
    the supporting theory and raises :class:`TheoremContradictionError`.
    """
    from .tau import check_tau_conditions, induce_tau

    base = is_nijenhuis_2(A, N)
    if not base.passed:
        raise PreconditionError("operator is not binary Nijenhuis", details=base)
    witness = check_tau_conditions(A, tau)
    if not witness.satisfied:
        raise PreconditionError("form fails the induction conditions", details=witness)
    rep = is_nijenhuis_3(induce_tau(A, tau), N)
    if not rep.passed:
        raise TheoremContradictionError(
            f"binary Nijenhuis operator failed on the induced algebra: {rep.summary()}"
        )
    return True


def check_nijenhuis_rb_compatibility(
    A: ThreeBiHomLieSuperalgebra, N: GradedMap, R
) -> bool:
    """A Nijenhuis operator commuting with a weighted Baxter operator survives
    the subset-induced bracket."""
    from .core import commute
    from .rota_baxter import RotaBaxterOperator, is_rb3, make_rb_bracket

    if not isinstance(R, RotaBaxterOperator):
        raise PreconditionError("expected a weighted operator")
    base_n = is_nijenhuis_3(A, N)
    if not base_n.passed:
        raise PreconditionError("operator is not ternary Nijenhuis", details=base_n)
    base_r = is_rb3(A, R)
    if not base_r.passed:
        raise PreconditionError("operator fails the ternary weighted identity", details=base_r)
    if not commute(N, R.map):
        raise PreconditionError("the two operators do not commute")
    rep = is_nijenhuis_3(make_rb_bracket(A, R), N)
    if not rep.passed:
        raise TheoremContradictionError(
            f"Nijenhuis operator failed on the induced bracket: {rep.summary()}"
        )
    return True


def check_derivation_nijenhuis_rb_equivalence(
    A: ThreeBiHomLieSuperalgebra, N: GradedMap
) -> bool:
    """For an even derivation N: Nijenhuis iff weight-0 Baxter operator.

    Computes both predicates independently; disagreement raises
    :class:`TheoremContradictionError`, otherwise the common value is returned.
    """
    from .rota_baxter import RotaBaxterOperator, is_rb3
    from .derivations import is_derivation_3

    base = is_derivation_3(A, N, 0, 0)
    if not base.passed:
        raise PreconditionError("operator is not an even derivation", details=base)
    nij = is_nijenhuis_3(A, N).passed
    rb0 = is_rb3(A, RotaBaxterOperator(N, Fraction(0))).passed
    if nij != rb0:
        raise TheoremContradictionError(
            f"Nijenhuis check ({nij}) disagrees with the weight-0 check ({rb0})"
        )
    return nij


def build_trivial_deformation(
    A: ThreeBiHomLieSuperalgebra, N: GradedMap
) -> DeformationPair:
    """The deformation pair absorbed by id + t N for a Nijenhuis operator N.

    Returns (first N-bracket, second N-bracket) and verifies the telescoping
    condition N(w2) = [Nx, Ny, Nz] exactly; its failure would mean N was not
    Nijenhuis after all.
    """
    base = is_nijenhuis_3(A, N)
    if not base.passed:
        raise PreconditionError("operator is not ternary Nijenhuis", details=base)
    w1 = make_n_bracket_1(A, N)
    w2 = make_n_bracket_2(A, N)
    Nc = [N.column(t) for t in A.space.indices()]
    for i, j, l in all_triples(A.space):
        lhs = N.apply(w2.bracket_basis(i, j, l))
        rhs = A.bracket.bracket(Nc[i], Nc[j], Nc[l])
        if not vec_is_zero(vec_sub(lhs, rhs)):
            raise PreconditionError(
                "telescoping condition failed; the operator is not Nijenhuis"
            )
    return DeformationPair(w1, w2)
