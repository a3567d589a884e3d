"""Twisted derivations, quasiderivations, and their exact solution spaces.

A map D of parity |D| is an (s, r)-derivation of a ternary bracket when it
commutes with both structure maps and satisfies, with M = alpha^s beta^r,

    D([x, y, z]) = [D(x), M(y), M(z)]
                 + (-1)^{|x||D|} [M(x), D(y), M(z)]
                 + (-1)^{|D|(|x|+|y|)} [M(x), M(y), D(z)].

The two-slot analogue for binary brackets drops the last insertion.  All of
these conditions are linear in the entries of D, so each derivation space is
the kernel of an exactly assembled constraint matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import (
    BiHomLieSuperalgebra,
    ThreeBiHomLieSuperalgebra,
    VerificationReport,
    Violation,
)
from .core import (
    EVEN,
    ODD,
    ZERO,
    DimensionError,
    GradedMap,
    LinearForm,
    ParityError,
    PreconditionError,
    TheoremContradictionError,
    Vector,
    all_pairs,
    all_triples,
    ksign,
    signed_slot_expansion,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
)
from .linalg import kernel_basis, solve_linear

__all__ = [
    "DerivationQuery",
    "DerivationSpace",
    "twist_power",
    "is_derivation_2",
    "is_derivation_3",
    "solve_derivation_space",
    "solve_derivation_space_2",
    "supercommutator",
    "is_quasiderivation_2",
    "is_quasiderivation_3",
    "check_derivation_transfer",
    "check_quasiderivation_transfer",
]


@dataclass(frozen=True)
class DerivationQuery:
    """Which twisted derivation space to solve for: powers (s, r) and a parity."""

    s: int
    r: int
    parity: int = EVEN

    def __post_init__(self) -> None:
        if self.s < 0 or self.r < 0:
            raise ValueError("twist powers must be non-negative")
        if self.parity not in (EVEN, ODD):
            raise ParityError("query parity must be 0 or 1")


@dataclass(frozen=True)
class DerivationSpace:
    """An exact basis of one twisted derivation space."""

    query: DerivationQuery
    basis: tuple[GradedMap, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def twist_power(alpha: GradedMap, beta: GradedMap, s: int, r: int) -> GradedMap:
    """The composite alpha^s beta^r (an even map when alpha and beta are even)."""
    return alpha.power(s).compose(beta.power(r))


def _commutation_violations(D: GradedMap, maps: dict[str, GradedMap]):
    for name, m in maps.items():
        delta = D.compose(m).sub(m.compose(D))
        for i in m.space.indices():
            col = delta.column(i)
            if not vec_is_zero(col):
                yield Violation((i,), col, f"commutes-with-{name}")


def _require_homogeneous(D: GradedMap) -> None:
    # GradedMap is homogeneous by construction; this guards parity values only.
    if D.parity not in (EVEN, ODD):
        raise ParityError("derivation candidate must be homogeneous")


def is_derivation_2(
    A: BiHomLieSuperalgebra, D: GradedMap, s: int, r: int, fail_fast: bool = False
) -> VerificationReport:
    """Check the two-slot twisted Leibniz rule plus commutation with the twists."""
    _require_homogeneous(D)
    M = twist_power(A.alpha, A.beta, s, r)
    P = A.space.parities
    q = D.parity
    violations = list(_commutation_violations(D, {"alpha": A.alpha, "beta": A.beta}))
    total = 2 * A.space.dim
    if not (fail_fast and violations):
        for i, j in all_pairs(A.space):
            total += 1
            res = D.apply(A.bracket.bracket_basis(i, j))
            res = vec_sub(res, A.bracket.bracket(D.column(i), M.column(j)))
            res = vec_sub(
                res, vec_scale(ksign(P[i] * q), A.bracket.bracket(M.column(i), D.column(j)))
            )
            if not vec_is_zero(res):
                violations.append(Violation((i, j), res, "leibniz"))
                if fail_fast:
                    break
    return VerificationReport("binary-twisted-derivation", total, tuple(violations))


def is_derivation_3(
    A: ThreeBiHomLieSuperalgebra, D: GradedMap, s: int, r: int, fail_fast: bool = False
) -> VerificationReport:
    """Check the three-slot twisted Leibniz rule plus commutation with the twists."""
    _require_homogeneous(D)
    M = twist_power(A.alpha, A.beta, s, r)
    P = A.space.parities
    q = D.parity
    violations = list(_commutation_violations(D, {"alpha": A.alpha, "beta": A.beta}))
    total = 2 * A.space.dim
    if not (fail_fast and violations):
        Dcol = [D.column(i) for i in A.space.indices()]
        Mcol = [M.column(i) for i in A.space.indices()]
        for i, j, l in all_triples(A.space):
            total += 1
            res = D.apply(A.bracket.bracket_basis(i, j, l))
            res = vec_sub(res, A.bracket.bracket(Dcol[i], Mcol[j], Mcol[l]))
            res = vec_sub(
                res, vec_scale(ksign(P[i] * q), A.bracket.bracket(Mcol[i], Dcol[j], Mcol[l]))
            )
            res = vec_sub(
                res,
                vec_scale(ksign(q * (P[i] + P[j])), A.bracket.bracket(Mcol[i], Mcol[j], Dcol[l])),
            )
            if not vec_is_zero(res):
                violations.append(Violation((i, j, l), res, "leibniz"))
                if fail_fast:
                    break
    return VerificationReport("ternary-twisted-derivation", total, tuple(violations))


def _allowed_slots(space, parity: int) -> list[tuple[int, int]]:
    """Matrix positions (k, i) a parity-homogeneous map may populate."""
    return [
        (k, i)
        for k in space.indices()
        for i in space.indices()
        if space.parity(k) == (space.parity(i) + parity) % 2
    ]


def _slots_to_map(space, parity: int, slots: list[tuple[int, int]], values: Vector) -> GradedMap:
    rows = [[ZERO] * space.dim for _ in range(space.dim)]
    for (k, i), v in zip(slots, values):
        rows[k][i] = v
    return GradedMap(space, tuple(tuple(r) for r in rows), parity)


def _commutation_rows(space, m: GradedMap, slots, index_of) -> list[list]:
    """Rows expressing (D m - m D)[k][i] = 0 over the unknown slots of D."""
    rows = []
    for k in space.indices():
        for i in space.indices():
            row = [ZERO] * len(slots)
            touched = False
            for t in space.indices():
                pos = index_of.get((k, t))
                if pos is not None and m.matrix[t][i] != 0:
                    row[pos] += m.matrix[t][i]
                    touched = True
                pos = index_of.get((t, i))
                if pos is not None and m.matrix[k][t] != 0:
                    row[pos] -= m.matrix[k][t]
                    touched = True
            if touched:
                rows.append(row)
    return rows


def _leibniz_rows_3(A, M, parity, slots, index_of) -> list[list]:
    """Rows of the three-slot Leibniz constraint, one per (triple, component)."""
    P = A.space.parities
    q = parity
    Mcol = [M.column(i) for i in A.space.indices()]
    rows = []
    for i, j, l in all_triples(A.space):
        bval = A.bracket.bracket_basis(i, j, l)
        left1 = A.bracket.partial_matrix(0, Mcol[j], Mcol[l])
        left2 = A.bracket.partial_matrix(1, Mcol[i], Mcol[l])
        left3 = A.bracket.partial_matrix(2, Mcol[i], Mcol[j])
        s2 = ksign(P[i] * q)
        s3 = ksign(q * (P[i] + P[j]))
        for k in A.space.indices():
            row = [ZERO] * len(slots)
            touched = False
            for m in A.space.indices():
                pos = index_of.get((k, m))
                if pos is not None and bval[m] != 0:
                    row[pos] += bval[m]
                    touched = True
                if left1[k][m] != 0:
                    pos = index_of.get((m, i))
                    if pos is not None:
                        row[pos] -= left1[k][m]
                        touched = True
                if left2[k][m] != 0:
                    pos = index_of.get((m, j))
                    if pos is not None:
                        row[pos] -= s2 * left2[k][m]
                        touched = True
                if left3[k][m] != 0:
                    pos = index_of.get((m, l))
                    if pos is not None:
                        row[pos] -= s3 * left3[k][m]
                        touched = True
            if touched:
                rows.append(row)
    return rows


def _leibniz_rows_2(A, M, parity, slots, index_of) -> list[list]:
    P = A.space.parities
    q = parity
    Mcol = [M.column(i) for i in A.space.indices()]
    rows = []
    basis = A.space.basis()
    for i, j in all_pairs(A.space):
        bval = A.bracket.bracket_basis(i, j)
        # left1[k][m] = [e_m, M e_j]_k ; left2[k][m] = [M e_i, e_m]_k
        cols1 = [A.bracket.bracket(em, Mcol[j]) for em in basis]
        cols2 = [A.bracket.bracket(Mcol[i], em) for em in basis]
        left1 = [[cols1[m][k] for m in A.space.indices()] for k in A.space.indices()]
        left2 = [[cols2[m][k] for m in A.space.indices()] for k in A.space.indices()]
        s2 = ksign(P[i] * q)
        for k in A.space.indices():
            row = [ZERO] * len(slots)
            touched = False
            for m in A.space.indices():
                pos = index_of.get((k, m))
                if pos is not None and bval[m] != 0:
                    row[pos] += bval[m]
                    touched = True
                if left1[k][m] != 0:
                    pos = index_of.get((m, i))
                    if pos is not None:
                        row[pos] -= left1[k][m]
                        touched = True
                if left2[k][m] != 0:
                    pos = index_of.get((m, j))
                    if pos is not None:
                        row[pos] -= s2 * left2[k][m]
                        touched = True
            if touched:
                rows.append(row)
    return rows


def solve_derivation_space(
    A: ThreeBiHomLieSuperalgebra, query: DerivationQuery
) -> DerivationSpace:
    """Exact basis of the (s, r)-derivation space of the given parity.

    Assembles the commutation and Leibniz constraints as one linear system
    over the parity-allowed matrix entries and returns its kernel, reshaped to
    maps.  Every returned basis element is re-verified against
    :func:`is_derivation_3`.
    """
    slots = _allowed_slots(A.space, query.parity)
    index_of = {slot: n for n, slot in enumerate(slots)}
    M = twist_power(A.alpha, A.beta, query.s, query.r)
    rows = _commutation_rows(A.space, A.alpha, slots, index_of)
    rows += _commutation_rows(A.space, A.beta, slots, index_of)
    rows += _leibniz_rows_3(A, M, query.parity, slots, index_of)
    basis_vectors = kernel_basis(rows, len(slots))
    basis = tuple(_slots_to_map(A.space, query.parity, slots, v) for v in basis_vectors)
    for D in basis:
        rep = is_derivation_3(A, D, query.s, query.r)
        if not rep.passed:
            raise TheoremContradictionError(
                f"solver produced a non-derivation: {rep.summary()}"
            )
    return DerivationSpace(query, basis)


def solve_derivation_space_2(
    A: BiHomLieSuperalgebra, query: DerivationQuery
) -> DerivationSpace:
    """Binary-bracket analogue of :func:`solve_derivation_space`."""
    slots = _allowed_slots(A.space, query.parity)
    index_of = {slot: n for n, slot in enumerate(slots)}
    M = twist_power(A.alpha, A.beta, query.s, query.r)
    rows = _commutation_rows(A.space, A.alpha, slots, index_of)
    rows += _commutation_rows(A.space, A.beta, slots, index_of)
    rows += _leibniz_rows_2(A, M, query.parity, slots, index_of)
    basis_vectors = kernel_basis(rows, len(slots))
    basis = tuple(_slots_to_map(A.space, query.parity, slots, v) for v in basis_vectors)
    for D in basis:
        rep = is_derivation_2(A, D, query.s, query.r)
        if not rep.passed:
            raise TheoremContradictionError(
                f"solver produced a non-derivation: {rep.summary()}"
            )
    return DerivationSpace(query, basis)


def supercommutator(D: GradedMap, D2: GradedMap) -> GradedMap:
    """[D, D2] = D D2 - (-1)^{|D||D2|} D2 D; parity adds mod 2."""
    if D.space != D2.space:
        raise DimensionError("supercommutator of maps on different spaces")
    sign = ksign(D.parity * D2.parity)
    return D.compose(D2).sub(D2.compose(D).scale(sign))


def _quasiderivation_witness(space, parity, alpha, beta, rhs_rows, rhs_vals):
    slots = _allowed_slots(space, parity)
    index_of = {slot: n for n, slot in enumerate(slots)}
    rows = _commutation_rows(space, alpha, slots, index_of)
    rows += _commutation_rows(space, beta, slots, index_of)
    rhs = [ZERO] * len(rows)
    for lhs_coeffs, value in zip(rhs_rows, rhs_vals):
        row = [ZERO] * len(slots)
        for (k, m), coeff in lhs_coeffs.items():
            pos = index_of.get((k, m))
            # Entries at forbidden-parity positions are identically zero for a
            # homogeneous unknown, so their coefficients drop out of the row.
            if pos is not None:
                row[pos] += coeff
        rows.append(row)
        rhs.append(value)
    solution = solve_linear(rows, rhs, len(slots))
    if solution is None:
        return None
    return _slots_to_map(space, parity, slots, solution)


def is_quasiderivation_3(
    A: ThreeBiHomLieSuperalgebra, D: GradedMap, s: int, r: int
) -> tuple[bool, GradedMap | None]:
    """Decide whether D is an (s, r)-quasiderivation; return a companion map.

    D must commute with the structure maps.  The companion D' (also commuting
    with the structure maps, same parity as D) must satisfy

        D'([x, y, z]) = [D(x), M(y), M(z)] + signed insertions of D in the
                        remaining slots,

    which is an affine linear system in the entries of D'.  Returns
    (True, witness) with the deterministic minimal-support solution, or
    (False, None) when the system is inconsistent.  The witness is re-verified
    by substitution before being returned.
    """
    comm = list(_commutation_violations(D, {"alpha": A.alpha, "beta": A.beta}))
    if comm:
        raise PreconditionError(
            "candidate does not commute with the structure maps", details=comm
        )
    M = twist_power(A.alpha, A.beta, s, r)
    P = A.space.parities
    q = D.parity
    rhs_rows = []
    rhs_vals = []
    targets = {}
    for i, j, l in all_triples(A.space):
        target = A.bracket.bracket(D.column(i), M.column(j), M.column(l))
        target = vec_add(
            target,
            vec_scale(ksign(P[i] * q), A.bracket.bracket(M.column(i), D.column(j), M.column(l))),
        )
        target = vec_add(
            target,
            vec_scale(
                ksign(q * (P[i] + P[j])),
                A.bracket.bracket(M.column(i), M.column(j), D.column(l)),
            ),
        )
        targets[(i, j, l)] = target
        bval = A.bracket.bracket_basis(i, j, l)
        for k in A.space.indices():
            coeffs = {(k, m): bval[m] for m in A.space.indices() if bval[m] != 0}
            rhs_rows.append(coeffs)
            rhs_vals.append(target[k])
    witness = _quasiderivation_witness(A.space, q, A.alpha, A.beta, rhs_rows, rhs_vals)
    if witness is None:
        return False, None
    for (i, j, l), target in targets.items():
        got = witness.apply(A.bracket.bracket_basis(i, j, l))
        if not vec_is_zero(vec_sub(got, target)):
            raise TheoremContradictionError("quasiderivation witness failed substitution")
    return True, witness


def is_quasiderivation_2(
    A: BiHomLieSuperalgebra, D: GradedMap, s: int, r: int
) -> tuple[bool, GradedMap | None]:
    """Two-slot analogue of :func:`is_quasiderivation_3`."""
    comm = list(_commutation_violations(D, {"alpha": A.alpha, "beta": A.beta}))
    if comm:
        raise PreconditionError(
            "candidate does not commute with the structure maps", details=comm
        )
    M = twist_power(A.alpha, A.beta, s, r)
    P = A.space.parities
    q = D.parity
    rhs_rows = []
    rhs_vals = []
    targets = {}
    for i, j in all_pairs(A.space):
        target = A.bracket.bracket(D.column(i), M.column(j))
        target = vec_add(
            target,
            vec_scale(ksign(P[i] * q), A.bracket.bracket(M.column(i), D.column(j))),
        )
        targets[(i, j)] = target
        bval = A.bracket.bracket_basis(i, j)
        for k in A.space.indices():
            coeffs = {(k, m): bval[m] for m in A.space.indices() if bval[m] != 0}
            rhs_rows.append(coeffs)
            rhs_vals.append(target[k])
    witness = _quasiderivation_witness(A.space, q, A.alpha, A.beta, rhs_rows, rhs_vals)
    if witness is None:
        return False, None
    for (i, j), target in targets.items():
        got = witness.apply(A.bracket.bracket_basis(i, j))
        if not vec_is_zero(vec_sub(got, target)):
            raise TheoremContradictionError("quasiderivation witness failed substitution")
    return True, witness


def _transfer_conditions(
    A: BiHomLieSuperalgebra, tau: LinearForm, D: GradedMap, s: int, r: int
) -> VerificationReport:
    """The two conditions under which a binary derivation survives induction.

    Per basis triple, the Koszul-signed three-term sum of tau(D(slot)) times
    the bracket of the remaining pair must vanish; additionally tau must be
    invariant under alpha^s beta^r.
    """
    M = twist_power(A.alpha, A.beta, s, r)
    P = A.space.parities
    tD = [tau.apply(D.column(i)) for i in A.space.indices()]
    violations = []
    total = 0
    for i in A.space.indices():
        total += 1
        d = tau.apply(M.column(i)) - tau.of_basis(i)
        if d != 0:
            violations.append(Violation((i,), (d,), "form-invariance"))
    for i, j, l in all_triples(A.space):
        total += 1
        w = signed_slot_expansion(
            (tD[i], tD[j], tD[l]),
            (
                A.bracket.bracket_basis(j, l),
                A.bracket.bracket_basis(i, l),
                A.bracket.bracket_basis(i, j),
            ),
            (P[i], P[j], P[l]),
        )
        if not vec_is_zero(w):
            violations.append(Violation((i, j, l), w, "signed-cyclic-sum"))
    return VerificationReport("derivation-transfer-conditions", total, tuple(violations))


def check_derivation_transfer(
    A: BiHomLieSuperalgebra, tau: LinearForm, D: GradedMap, s: int, r: int
) -> tuple[bool, VerificationReport]:
    """Transfer of a binary (s, r)-derivation to the induced ternary algebra.

    Preconditions: D is a binary (s, r)-derivation of A and tau satisfies the
    induction conditions.  When the two transfer conditions hold, D is
    asserted (by exhaustive re-verification) to be an (s, r)-derivation of the
    induced algebra; a failure there would contradict the supporting theory
    and raises :class:`TheoremContradictionError`.
    """
    from .tau import check_tau_conditions, induce_tau

    base = is_derivation_2(A, D, s, r)
    if not base.passed:
        raise PreconditionError("map is not a binary twisted derivation", details=base)
    witness = check_tau_conditions(A, tau)
    if not witness.satisfied:
        raise PreconditionError("form fails the induction conditions", details=witness)
    conditions = _transfer_conditions(A, tau, D, s, r)
    if not conditions.passed:
        return False, conditions
    induced = induce_tau(A, tau)
    rep = is_derivation_3(induced, D, s, r)
    if not rep.passed:
        raise TheoremContradictionError(
            f"transfer conditions held but induced check failed: {rep.summary()}"
        )
    return True, conditions


def check_quasiderivation_transfer(
    A: BiHomLieSuperalgebra, tau: LinearForm, D: GradedMap, s: int, r: int
) -> tuple[bool, VerificationReport]:
    """Quasiderivation analogue of :func:`check_derivation_transfer`.

    The conclusion (D is a quasiderivation of the induced algebra) is checked
    empirically by running the exact solver rather than assumed; the report
    notes record this.
    """
    from .tau import check_tau_conditions, induce_tau

    ok, _ = is_quasiderivation_2(A, D, s, r)
    if not ok:
        raise PreconditionError("map is not a binary twisted quasiderivation")
    witness = check_tau_conditions(A, tau)
    if not witness.satisfied:
        raise PreconditionError("form fails the induction conditions", details=witness)
    conditions = _transfer_conditions(A, tau, D, s, r)
    note = (
        "conclusion verified empirically by solving for a companion map on the "
        "induced algebra",
    )
    conditions = VerificationReport(
        conditions.identity, conditions.total, conditions.violations, note
    )
    if not conditions.passed:
        return False, conditions
    induced = induce_tau(A, tau)
    ok3, _ = is_quasiderivation_3(induced, D, s, r)
    if not ok3:
        raise TheoremContradictionError(
            "transfer conditions held but no companion map exists on the induced algebra"
        )
    return True, conditions
