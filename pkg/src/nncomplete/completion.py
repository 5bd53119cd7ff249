"""Rank-1 completion, 3x3 nonnegative rank-2 completion, and the
classification of partial matrices with a single missing entry.

Also houses the degree-6 boundary polynomial for the 4x4 one-missing-entry
geometry and the zero-to-negative factor perturbation used to build
instances that lose their size-3 nonnegative factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import ExactMatrix, det, matmul, rank
from .partial import PartialMatrix, Pattern, support_graph, zero_line_property, \
    cycle_property, zero_entries_line_consistent, _multiplicative_potentials


@dataclass
class CompletionOutcome:
    """Result of a completion query.

    kind is one of:
      "none"     -- no completion with the requested properties exists;
      "unique"   -- exactly one, given in ``matrix``;
      "infinite" -- infinitely many, ``matrix`` holds a canonical one and
                    ``description`` says where the freedom lives;
      "some"     -- a completion is given but uniqueness is not analysed
                    (used by constructive routines).
    """

    kind: str
    matrix: ExactMatrix | None = None
    description: str | None = None

    def has_completion(self) -> bool:
        return self.kind != "none"


def rank1_complete(m: PartialMatrix, require_nonnegative: bool = False) -> CompletionOutcome:
    """Decide and construct rank-at-most-1 completions.

    A completion exists iff every observed zero has its observed row or
    its observed column entirely zero (1x1 minors zero-consistency) and
    the cycle property holds; it is unique iff the nonzero support graph
    is connected.  The canonical completion roots every potential
    component at 1 and zeroes rows/columns whose observed entries are all
    zero.  With require_nonnegative the entry-wise absolute value is
    returned, which is again a completion because observed entries are
    nonnegative.
    """
    if require_nonnegative and not m.is_nonnegative():
        raise ValueError("nonnegative completion requested but an observed entry is negative")

    if not zero_entries_line_consistent(m) or not cycle_property(m):
        return CompletionOutcome("none")

    u, v = _rank1_factors(m)
    if require_nonnegative:
        u = [abs(x) for x in u]
        v = [abs(x) for x in v]
    completion = ExactMatrix([[ui * vj for vj in v] for ui in u])
    assert m.agrees_with(completion)

    graph = support_graph(m)
    if graph.nonzero_is_connected():
        return CompletionOutcome("unique", completion)
    free = len(graph.components(nonzero_only=True)) - 1
    return CompletionOutcome(
        "infinite",
        completion,
        f"{free} free relative scaling(s) between components of the nonzero support graph",
    )


def _rank1_factors(m: PartialMatrix):
    """Vectors u, v with u v^T completing m, assuming 1x1 minors
    zero-consistency and the cycle property hold.

    Rows/columns with a nonzero observed entry take their multiplicative
    potential; observed-but-all-zero lines take 0 (forced for every zero
    that is not already killed from the other side, and canonical
    otherwise); fully unobserved lines take 1 (canonical root)."""
    graph = support_graph(m)
    row_pot, col_pot, consistent = _multiplicative_potentials(m, graph)
    assert consistent
    nz_rows = {i for (i, j) in graph.nonzero_edges}
    nz_cols = {j for (i, j) in graph.nonzero_edges}
    observed_rows = {i for (i, j) in m.pattern.observed}
    observed_cols = {j for (i, j) in m.pattern.observed}
    u = []
    for i in range(1, m.p + 1):
        if i in nz_rows:
            u.append(row_pot[i])
        elif i in observed_rows:
            u.append(Fraction(0))
        else:
            u.append(Fraction(1))
    v = []
    for j in range(1, m.q + 1):
        if j in nz_cols:
            v.append(col_pot[j])
        elif j in observed_cols:
            v.append(Fraction(0))
        else:
            v.append(Fraction(1))
    return u, v


def extend_by_sparse_row(m: PartialMatrix, completed_rest: ExactMatrix, i: int) -> ExactMatrix:
    """Re-attach row i (which has at most one observed entry) to a
    nonnegative completion of the remaining rows without raising the rank.

    An absent or zero entry yields a zero row; a nonzero entry m_ij is
    matched by scaling a row k with m_kj != 0.
    """
    if completed_rest.shape != (m.p - 1, m.q):
        raise ValueError("completed_rest must cover all rows but row i")
    observed = [(j, m.entry(i, j)) for j in range(1, m.q + 1) if m.is_observed(i, j)]
    if len(observed) > 1:
        raise ValueError(f"row {i} has more than one observed entry")
    other_rows = [r for r in range(1, m.p + 1) if r != i]
    if not observed or observed[0][1] == 0:
        new_row = [Fraction(0)] * m.q
    else:
        j, mij = observed[0]
        k = next(
            (r for r in other_rows if m.is_observed(r, j) and m.entry(r, j) != 0),
            None,
        )
        if k is None:
            raise ValueError(f"no other row with a nonzero observed entry in column {j}")
        source = completed_rest.row(other_rows.index(k) + 1)
        scale = mij / source[j - 1]
        new_row = [scale * x for x in source]
    rows = completed_rest.to_lists()
    rows.insert(i - 1, new_row)
    return ExactMatrix(rows)


def nn_rank2_pattern_equivalence(pattern: Pattern) -> bool:
    """For a 3x3 pattern: does every nonnegative partial matrix with this
    pattern that has a rank-<=2 completion also have a nonnegative
    rank-<=2 completion?

    Fails exactly when the missing set is nonempty and its entries occupy
    pairwise distinct rows and columns.
    """
    if (pattern.p, pattern.q) != (3, 3):
        raise ValueError("pattern must be 3x3")
    missing = pattern.missing
    if not missing:
        return True
    rows = [i for (i, j) in missing]
    cols = [j for (i, j) in missing]
    diagonal_like = len(set(rows)) == len(missing) and len(set(cols)) == len(missing)
    return not diagonal_like


def nn_rank2_complete_3x3(m: PartialMatrix) -> CompletionOutcome:
    """Construct a nonnegative rank-<=2 completion of a 3x3 nonnegative
    partial matrix, following the case analysis behind the pattern
    characterization.

    Covered cases: fully observed; a row or column with at most one
    observed entry (deleted, completed, re-attached).  Other patterns raise
    an "unsupported pattern" error rather than risking a wrong answer.
    """
    if (m.p, m.q) != (3, 3):
        raise ValueError("matrix must be 3x3")
    if not m.is_nonnegative():
        raise ValueError("observed entries must be nonnegative")
    if not nn_rank2_pattern_equivalence(m.pattern):
        raise ValueError("pattern with diagonal-like missing set is not supported")

    if m.pattern.is_full():
        full = m.to_full_matrix()
        if rank(full) <= 2:
            return CompletionOutcome("unique", full)
        return CompletionOutcome("none")

    for transpose in (False, True):
        work = m.transpose() if transpose else m
        out = _complete_via_sparse_line(work)
        if out is not None:
            if out.kind != "none" and transpose:
                out = CompletionOutcome(out.kind, out.matrix.transpose(), out.description)
            return out
    raise ValueError("unsupported pattern: no row or column with at most one observed entry")


def _complete_via_sparse_line(m: PartialMatrix) -> CompletionOutcome | None:
    """Try the sparse-row reduction; None means no row of m qualifies."""
    for i in range(1, m.p + 1):
        observed = [(j, m.entry(i, j)) for j in range(1, m.q + 1) if m.is_observed(i, j)]
        if len(observed) > 1:
            continue
        rest_rows = [r for r in range(1, m.p + 1) if r != i]
        rest = PartialMatrix(
            Pattern(
                m.p - 1,
                m.q,
                frozenset(
                    (rest_rows.index(r) + 1, j) for (r, j) in m.pattern.observed if r != i
                ),
            ),
            {
                (rest_rows.index(r) + 1, j): val
                for (r, j), val in m.values.items()
                if r != i
            },
        )
        if observed and observed[0][1] != 0:
            j = observed[0][0]
            col_rest = [m.entry(r, j) for r in rest_rows if m.is_observed(r, j)]
            observed_in_col = sum(1 for r in rest_rows if m.is_observed(r, j))
            if any(x != 0 for x in col_rest):
                # scale another row: any nonnegative fill of the 2x3 rest works
                completed_rest = rest.complete_with(
                    {pos: Fraction(0) for pos in rest.pattern.missing}
                )
                return CompletionOutcome("some", extend_by_sparse_row(m, completed_rest, i))
            if observed_in_col < m.p - 1:
                continue  # column undetermined; try another line
            # all other entries of column j are observed zeros: the rest
            # must have a rank-<=1 completion for any rank-<=2 completion
            # of m to exist at all
            rest_outcome = rank1_complete(rest, require_nonnegative=True)
            if rest_outcome.kind == "none":
                return CompletionOutcome("none")
            rows = rest_outcome.matrix.to_lists()
            new_row = [Fraction(0)] * m.q
            new_row[j - 1] = observed[0][1]
            rows.insert(i - 1, new_row)
            return CompletionOutcome("some", ExactMatrix(rows))
        completed_rest = rest.complete_with({pos: Fraction(0) for pos in rest.pattern.missing})
        return CompletionOutcome("some", extend_by_sparse_row(m, completed_rest, i))
    return None


def classify_one_missing(m: PartialMatrix, hole: tuple, r: int) -> CompletionOutcome:
    """Trichotomy for rank-<=r completions with exactly one missing entry.

    Infinitely many completions iff deleting the hole's row or column drops
    the rank to <= r-1; a unique completion iff the row-deleted,
    column-deleted, and both-deleted submatrices all have rank exactly r
    (value solved from the vanishing (r+1)x(r+1) minor); no completion
    otherwise.
    """
    i, j = hole
    if r > min(m.p, m.q):
        raise ValueError(f"rank bound {r} exceeds matrix dimensions")
    if r < 1:
        raise ValueError("rank bound must be >= 1")
    if m.pattern.missing != frozenset({(i, j)}):
        raise ValueError(f"pattern must be missing exactly the entry {hole}")

    rows_wo = [x for x in range(1, m.p + 1) if x != i]
    cols_wo = [y for y in range(1, m.q + 1) if y != j]
    all_rows = list(range(1, m.p + 1))
    all_cols = list(range(1, m.q + 1))
    row_deleted = m.observed_submatrix(rows_wo, all_cols)
    col_deleted = m.observed_submatrix(all_rows, cols_wo)
    both_deleted = m.observed_submatrix(rows_wo, cols_wo)

    if rank(row_deleted) <= r - 1 or rank(col_deleted) <= r - 1:
        canonical = m.complete_with({(i, j): Fraction(0)})
        return CompletionOutcome("infinite", canonical, "the missing entry may take any value")

    if rank(both_deleted) == r and rank(row_deleted) == r and rank(col_deleted) == r:
        K, L = _nonzero_r_minor(both_deleted, r)
        # translate back to indices of the full matrix
        K_full = [rows_wo[k - 1] for k in K]
        L_full = [cols_wo[l - 1] for l in L]
        value = _solve_vanishing_minor(m, (i, j), sorted(K_full + [i]), sorted(L_full + [j]))
        completion = m.complete_with({(i, j): value})
        assert rank(completion) == r
        return CompletionOutcome("unique", completion)

    return CompletionOutcome("none")


def _nonzero_r_minor(m: ExactMatrix, r: int):
    """1-based index sets (K, L) of some nonsingular r x r submatrix."""
    from itertools import combinations

    for K in combinations(range(1, m.p + 1), r):
        for L in combinations(range(1, m.q + 1), r):
            if det(m.submatrix(K, L)) != 0:
                return list(K), list(L)
    raise ValueError(f"matrix has no nonsingular {r}x{r} submatrix")


def _solve_vanishing_minor(m: PartialMatrix, hole, rows, cols) -> Fraction:
    """The hole value making det of the selected submatrix vanish.

    The determinant is linear in the hole entry with nonzero leading
    coefficient (the complementary minor).
    """
    d0 = det(m.complete_with({hole: Fraction(0)}).submatrix(rows, cols))
    d1 = det(m.complete_with({hole: Fraction(1)}).submatrix(rows, cols))
    c1 = d1 - d0
    assert c1 != 0
    return -d0 / c1


def in_singular_image(m: PartialMatrix, hole: tuple, r: int) -> bool:
    """Whether the one-missing-entry instance lies in the image of the
    singular locus of the forget-one-entry projection: deleting the hole's
    row or column already drops the rank below r."""
    i, j = hole
    if m.pattern.missing != frozenset({(i, j)}):
        raise ValueError(f"pattern must be missing exactly the entry {hole}")
    rows_wo = [x for x in range(1, m.p + 1) if x != i]
    cols_wo = [y for y in range(1, m.q + 1) if y != j]
    row_deleted = m.observed_submatrix(rows_wo, list(range(1, m.q + 1)))
    col_deleted = m.observed_submatrix(list(range(1, m.p + 1)), cols_wo)
    return rank(row_deleted) <= r - 1 or rank(col_deleted) <= r - 1


# term list: (sign, [(i,j) factors]); degree six, 24 monomials
_SEXTIC_TERMS = [
    (+1, [(1, 4), (2, 3), (3, 2), (3, 3), (4, 1), (4, 2)]),
    (-1, [(1, 4), (2, 2), (3, 3), (3, 3), (4, 1), (4, 2)]),
    (+1, [(1, 2), (2, 4), (3, 3), (3, 3), (4, 1), (4, 2)]),
    (-1, [(1, 3), (2, 3), (3, 2), (3, 4), (4, 1), (4, 2)]),
    (+1, [(1, 3), (2, 2), (3, 3), (3, 4), (4, 1), (4, 2)]),
    (-1, [(1, 2), (2, 3), (3, 3), (3, 4), (4, 1), (4, 2)]),
    (-1, [(1, 4), (2, 3), (3, 1), (3, 3), (4, 2), (4, 2)]),
    (+1, [(1, 3), (2, 3), (3, 1), (3, 4), (4, 2), (4, 2)]),
    (-1, [(1, 4), (2, 3), (3, 2), (3, 2), (4, 1), (4, 3)]),
    (+1, [(1, 4), (2, 2), (3, 2), (3, 3), (4, 1), (4, 3)]),
    (-1, [(1, 2), (2, 4), (3, 2), (3, 3), (4, 1), (4, 3)]),
    (+1, [(1, 2), (2, 3), (3, 2), (3, 4), (4, 1), (4, 3)]),
    (+1, [(1, 4), (2, 3), (3, 1), (3, 2), (4, 2), (4, 3)]),
    (+1, [(1, 4), (2, 2), (3, 1), (3, 3), (4, 2), (4, 3)]),
    (-1, [(1, 2), (2, 4), (3, 1), (3, 3), (4, 2), (4, 3)]),
    (-1, [(1, 3), (2, 2), (3, 1), (3, 4), (4, 2), (4, 3)]),
    (-1, [(1, 4), (2, 2), (3, 1), (3, 2), (4, 3), (4, 3)]),
    (+1, [(1, 2), (2, 4), (3, 1), (3, 2), (4, 3), (4, 3)]),
    (+1, [(1, 3), (2, 3), (3, 2), (3, 2), (4, 1), (4, 4)]),
    (-1, [(1, 3), (2, 2), (3, 2), (3, 3), (4, 1), (4, 4)]),
    (-1, [(1, 3), (2, 3), (3, 1), (3, 2), (4, 2), (4, 4)]),
    (+1, [(1, 2), (2, 3), (3, 1), (3, 3), (4, 2), (4, 4)]),
    (+1, [(1, 3), (2, 2), (3, 1), (3, 2), (4, 3), (4, 4)]),
    (-1, [(1, 2), (2, 3), (3, 1), (3, 2), (4, 3), (4, 4)]),
]


def eval_boundary_sextic(m) -> Fraction:
    """Exact value of the degree-6, 24-term boundary polynomial in the
    entries m_12 .. m_44 of a 4x4 matrix (the (1,1) entry never occurs).

    Vanishes on every product A.B where A is 4x3 with zeros at
    (1,1),(2,2),(3,3),(4,3) and B is 3x4 with zeros at (1,1),(2,2),(3,3).
    """
    if isinstance(m, PartialMatrix):
        if (m.p, m.q) != (4, 4):
            raise ValueError("matrix must be 4x4")
        need = {(i, j) for i in range(1, 5) for j in range(1, 5)} - {(1, 1)}
        if not need <= m.pattern.observed:
            raise ValueError("entries m_12 .. m_44 must all be observed")
        get = m.entry
    elif isinstance(m, ExactMatrix):
        if m.shape != (4, 4):
            raise ValueError("matrix must be 4x4")
        get = m.entry
    else:
        raise TypeError("expected ExactMatrix or PartialMatrix")
    total = Fraction(0)
    for sign, factors in _SEXTIC_TERMS:
        prod = Fraction(sign)
        for (i, j) in factors:
            prod *= get(i, j)
        total += prod
    return total


@dataclass(frozen=True)
class PerturbationSpec:
    """Replace an exact zero of one factor with a negative epsilon."""

    side: str  # "left" or "right"
    position: tuple
    epsilon: Fraction

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if Fraction(self.epsilon) >= 0:
            raise ValueError("epsilon must be negative")


def perturb_unique_nmf(a: ExactMatrix, b: ExactMatrix, spec: PerturbationSpec) -> ExactMatrix:
    """Product of the factors after replacing one zero entry of a (or b)
    with spec.epsilon.

    For factorizations that are unique up to scaling and permutation, the
    product loses its size-r nonnegative factorization for epsilon close
    enough to zero; closeness is certified downstream, not here.
    """
    if not matmul(a, b).is_nonnegative():
        raise ValueError("product of the unperturbed factors must be nonnegative")
    target = a if spec.side == "left" else b
    i, j = spec.position
    if target.entry(i, j) != 0:
        raise ValueError(f"entry {spec.position} of the {spec.side} factor is not zero")
    perturbed = target.with_entry(i, j, Fraction(spec.epsilon))
    if spec.side == "left":
        return matmul(perturbed, b)
    return matmul(a, perturbed)
