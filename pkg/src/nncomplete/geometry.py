"""Exact planar geometry for nonnegative rank certificates.

A rank-3 factorization M = A.B of a nonnegative matrix yields nested
convex bodies: the polygon P spanned by the sliced columns of B inside the
polygon Q cut out by the rows of A.  M has nonnegative rank at most 3
exactly when a triangle fits between them; the search below enumerates
anchored candidates (a vertex of the triangle at a vertex of Q, or a side
containing an edge of P), which is sufficient.

All coordinates are Fractions and every predicate is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import ExactMatrix, det, inverse, matmul, rank, solve_linear

Point = tuple  # (Fraction, Fraction)


class UnboundedRegionError(ValueError):
    """The intersection of half-planes has a nontrivial recession cone."""


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def orient(a: Point, b: Point, c: Point) -> Fraction:
    """Twice the signed area of (a, b, c); > 0 iff counterclockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass(frozen=True)
class HalfPlane:
    """The set c0 + cx*x + cy*y >= 0."""

    c0: Fraction
    cx: Fraction
    cy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c0", Fraction(self.c0))
        object.__setattr__(self, "cx", Fraction(self.cx))
        object.__setattr__(self, "cy", Fraction(self.cy))
        if self.cx == 0 and self.cy == 0:
            raise ValueError("half-plane normal must be nonzero")

    def value(self, p: Point) -> Fraction:
        return self.c0 + self.cx * p[0] + self.cy * p[1]

    def contains(self, p: Point) -> bool:
        return self.value(p) >= 0

    @classmethod
    def through(cls, a: Point, b: Point) -> "HalfPlane":
        """Half-plane whose boundary is the line a->b, left side included."""
        if a == b:
            raise ValueError("points must be distinct")
        cx = a[1] - b[1]
        cy = b[0] - a[0]
        return cls(-(cx * a[0] + cy * a[1]), cx, cy)


def convex_hull(points) -> list:
    """Counterclockwise hull with strictly convex vertices.

    Collinear input collapses to the two extreme points; coincident input
    to a single point.
    """
    pts = sorted(set((Fraction(x), Fraction(y)) for (x, y) in points))
    if not pts:
        raise ValueError("need at least one point")
    if len(pts) == 1:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


class Polygon2:
    """Convex polygon with counterclockwise, strictly convex vertex list.

    Degenerate cases are allowed: a single point or a segment (two
    vertices).
    """

    def __init__(self, vertices):
        vs = [(Fraction(x), Fraction(y)) for (x, y) in vertices]
        if not vs:
            raise ValueError("polygon needs at least one vertex")
        n = len(vs)
        if n >= 3:
            for i in range(n):
                if orient(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) <= 0:
                    raise ValueError("vertices must be strictly convex and counterclockwise")
        elif n == 2 and vs[0] == vs[1]:
            raise ValueError("duplicate vertices")
        self.vertices = vs

    @classmethod
    def from_points(cls, points) -> "Polygon2":
        return cls(convex_hull(points))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def is_degenerate(self) -> bool:
        return self.n < 3

    def edges(self):
        n = self.n
        if n == 1:
            return []
        if n == 2:
            return [(self.vertices[0], self.vertices[1])]
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def facets(self) -> list:
        """Inward half-planes, one per edge, in edge order."""
        if self.is_degenerate():
            raise ValueError("degenerate polygon has no facet description")
        return [HalfPlane.through(a, b) for (a, b) in self.edges()]

    def contains_point(self, p: Point) -> bool:
        p = (Fraction(p[0]), Fraction(p[1]))
        if self.n == 1:
            return p == self.vertices[0]
        if self.n == 2:
            a, b = self.vertices
            if orient(a, b, p) != 0:
                return False
            d = (b[0] - a[0], b[1] - a[1])
            s = (p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]
            return 0 <= s <= d[0] * d[0] + d[1] * d[1]
        n = self.n
        return all(
            orient(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0 for i in range(n)
        )

    def bounding_box(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def __eq__(self, other):
        return isinstance(other, Polygon2) and set(self.vertices) == set(other.vertices)

    def __repr__(self):
        return f"Polygon2({self.vertices!r})"


def contains(outer: Polygon2, inner: Polygon2) -> bool:
    """Exact test that every vertex of inner lies in outer."""
    return all(outer.contains_point(v) for v in inner.vertices)


def polygon_from_halfplanes(halfplanes) -> Polygon2:
    """Bounded intersection of half-planes as a polygon.

    Raises UnboundedRegionError when the recession cone is nontrivial and
    ValueError when the intersection is empty.
    """
    hps = list(halfplanes)
    if not hps:
        raise UnboundedRegionError("no constraints")
    # nontrivial recession direction: d != 0 with all normals . d >= 0;
    # if one exists, some extreme candidate (a rotated normal) works
    candidates = []
    for hp in hps:
        candidates.append((-hp.cy, hp.cx))
        candidates.append((hp.cy, -hp.cx))
    for d in candidates:
        if d == (0, 0):
            continue
        if all(hp.cx * d[0] + hp.cy * d[1] >= 0 for hp in hps):
            raise UnboundedRegionError(f"region is unbounded in direction {d}")
    verts = []
    m = len(hps)
    for i in range(m):
        for j in range(i + 1, m):
            a, b = hps[i], hps[j]
            denom = a.cx * b.cy - a.cy * b.cx
            if denom == 0:
                continue
            x = (-a.c0 * b.cy + b.c0 * a.cy) / denom
            y = (-a.cx * b.c0 + b.cx * a.c0) / denom
            p = (x, y)
            if all(hp.value(p) >= 0 for hp in hps):
                verts.append(p)
    if not verts:
        raise ValueError("intersection of half-planes is empty")
    return Polygon2.from_points(verts)


class Triangle:
    """Non-degenerate triangle, stored counterclockwise."""

    def __init__(self, a: Point, b: Point, c: Point):
        a = (Fraction(a[0]), Fraction(a[1]))
        b = (Fraction(b[0]), Fraction(b[1]))
        c = (Fraction(c[0]), Fraction(c[1]))
        area2 = orient(a, b, c)
        if area2 == 0:
            raise ValueError("degenerate triangle")
        if area2 < 0:
            b, c = c, b
        self.vertices = [a, b, c]

    def contains_point(self, p: Point) -> bool:
        a, b, c = self.vertices
        return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0

    def contains_polygon(self, poly: Polygon2) -> bool:
        return all(self.contains_point(v) for v in poly.vertices)

    def as_polygon(self) -> Polygon2:
        return Polygon2(self.vertices)

    def __repr__(self):
        return f"Triangle({self.vertices!r})"


@dataclass
class NestedPair:
    """Inner polygon P and outer polygon Q with factorization provenance.

    ``inner_generators`` keeps the sliced columns of B in input order and
    ``outer_halfplanes`` the sliced rows of A in input order, so the slack
    matrix lines up with the original factorization.
    """

    inner: Polygon2
    outer: Polygon2
    inner_generators: list = field(default_factory=list)
    outer_halfplanes: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def is_nested(self) -> bool:
        return contains(self.outer, self.inner)


def slack_matrix(pair: NestedPair) -> ExactMatrix:
    """Half-plane i of Q evaluated at generator j of P; entry-wise
    nonnegative exactly when P is contained in Q."""
    hps = pair.outer_halfplanes or pair.outer.facets()
    gens = pair.inner_generators or pair.inner.vertices
    return ExactMatrix([[hp.value(g) for g in gens] for hp in hps])


# ---------------------------------------------------------------------------
# slices of a rank-3 factorization

SLICES = ("first", "sum")


def _slice_parts(column, convention: str):
    """(weight, planar point) of a lifted column under the slice."""
    x, y, z = column
    if convention == "first":
        return x, None if x == 0 else (y / x, z / x)
    w = x + y + z
    return w, None if w == 0 else (x / w, y / w)


def _slice_halfplane(row, convention: str):
    """Row (a1,a2,a3) of A as a half-plane in slice coordinates, or None
    when the constraint is trivially satisfied (zero row, or a constraint
    whose normal vanishes and whose constant is nonnegative)."""
    a1, a2, a3 = row
    if convention == "first":
        # point (1, x, y)
        c0, cx, cy = a1, a2, a3
    else:
        # point (x, y, 1-x-y)
        c0, cx, cy = a3, a1 - a3, a2 - a3
    if cx == 0 and cy == 0:
        if c0 < 0:
            raise ValueError(f"row {tuple(row)} is infeasible on the slice")
        return None
    return HalfPlane(c0, cx, cy)


def polytopes_from_factorization(a: ExactMatrix, b: ExactMatrix, slice: str = "first") -> NestedPair:
    """Nested pair (P, Q) from a factorization A.B via an affine slice.

    P is spanned by the sliced columns of B and Q is cut out by the sliced
    rows of A.  Supported conventions: "first" (first coordinate = 1) and
    "sum" (coordinate sum = 1).  Every column of B must have strictly
    positive slice weight, and Q must come out bounded.
    """
    if slice not in SLICES:
        raise ValueError(f"unknown slice convention {slice!r}")
    if a.q != 3 or b.p != 3:
        raise ValueError("factors must have inner dimension 3")
    gens = []
    for j in range(1, b.q + 1):
        w, p = _slice_parts(b.col(j), slice)
        if w <= 0:
            raise ValueError(f"column {j} of B has non-positive slice weight {w}")
        gens.append(p)
    hps = [hp for hp in (_slice_halfplane(a.row(i), slice) for i in range(1, a.p + 1)) if hp]
    outer = polygon_from_halfplanes(hps)  # may raise UnboundedRegionError
    inner = Polygon2.from_points(gens)
    return NestedPair(inner, outer, gens, hps, {"a": a, "b": b, "slice": slice})


# ---------------------------------------------------------------------------
# nested-triangle search


def tangent_vertex(v: Point, poly: Polygon2) -> Point:
    """Vertex t of poly such that the directed line v -> t keeps the whole
    polygon on its closed left side; ties along the line resolved to the
    farthest vertex.  v may lie on the polygon but not coincide with the
    only vertex."""
    candidates = []
    for t in poly.vertices:
        if t == v:
            continue
        if all(orient(v, t, p) >= 0 for p in poly.vertices):
            candidates.append(t)
    if not candidates:
        raise ValueError("no tangent vertex; is the point inside the polygon?")

    def sqdist(t):
        return (t[0] - v[0]) ** 2 + (t[1] - v[1]) ** 2

    # candidates are collinear with v (vertices on the supporting line);
    # take the farthest so the tangent segment covers any touching edge
    return max(candidates, key=sqdist)


def chord_exit(v: Point, towards: Point, outer: Polygon2) -> Point:
    """Farthest point of outer on the ray v + s*(towards - v), s >= 0.

    v must lie in outer and towards differ from v.
    """
    if v == towards:
        raise ValueError("undirected chord")
    hi = None
    for hp in outer.facets():
        fv = hp.value(v)
        ft = hp.value(towards)
        slope = ft - fv
        if slope >= 0:
            continue  # never leaves through this facet in forward direction
        bound = fv / (-slope)
        if hi is None or bound < hi:
            hi = bound
    if hi is None:
        raise ValueError("ray never leaves the polygon; outer must be bounded")
    d = (towards[0] - v[0], towards[1] - v[1])
    return (v[0] + hi * d[0], v[1] + hi * d[1])


def _line_intersection(a1: Point, a2: Point, b1: Point, b2: Point):
    """Intersection of lines a1a2 and b1b2, or None if parallel."""
    d1 = (a2[0] - a1[0], a2[1] - a1[1])
    d2 = (b2[0] - b1[0], b2[1] - b1[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if denom == 0:
        return None
    s = ((b1[0] - a1[0]) * d2[1] - (b1[1] - a1[1]) * d2[0]) / denom
    return (a1[0] + s * d1[0], a1[1] + s * d1[1])


def _verified(candidate, inner: Polygon2, outer: Polygon2):
    try:
        tri = Triangle(*candidate)
    except ValueError:
        return None
    if tri.contains_polygon(inner) and all(outer.contains_point(v) for v in tri.vertices):
        return tri
    return None


def nested_triangle(pair: NestedPair):
    """A triangle D with P <= D <= Q, or None if none exists.

    Completeness rests on anchored enumeration: if any nested triangle
    exists, one exists with a vertex at a vertex of Q or with a side
    containing an edge of P.  Each anchor is closed greedily: extend the
    current supporting line to its farthest point inside Q, then continue
    with the tangent to P from there.
    """
    inner, outer = pair.inner, pair.outer
    if outer.is_degenerate():
        raise ValueError("outer polygon must be two-dimensional")
    if not contains(outer, inner):
        raise ValueError("inner polygon is not contained in the outer polygon")

    if inner.n == 3:
        return Triangle(*inner.vertices)
    if outer.n == 3:
        return Triangle(*outer.vertices)
    if inner.n == 1:
        # fan triangulation of Q around its first vertex
        p = inner.vertices[0]
        q0 = outer.vertices[0]
        for i in range(1, outer.n - 1):
            tri = Triangle(q0, outer.vertices[i], outer.vertices[i + 1])
            if tri.contains_point(p):
                return tri
        raise AssertionError("point inside outer polygon missed by its fan")

    # side anchored on a line containing an edge of P
    edge_lines = list(inner.edges())
    if inner.n == 2:
        (a, b) = edge_lines[0]
        edge_lines = [(a, b), (b, a)]
    for (a, b) in edge_lines:
        v1 = chord_exit(a, b, outer)
        tri = _close_chain_from_line(a, v1, inner, outer)
        if tri is not None:
            return tri

    # vertex anchored at a vertex of Q
    for q in outer.vertices:
        if inner.contains_point(q) and inner.n >= 3:
            continue  # q inside P would mean P touches Q; tangents handle boundary
        try:
            t1 = tangent_vertex(q, inner)
        except ValueError:
            continue
        v1 = chord_exit(q, t1, outer)
        if v1 == q:
            continue
        try:
            t2 = tangent_vertex(v1, inner)
        except ValueError:
            continue
        v2 = chord_exit(v1, t2, outer)
        tri = _verified((q, v1, v2), inner, outer)
        if tri is not None:
            return tri
    return None


def _close_chain_from_line(start: Point, v1: Point, inner: Polygon2, outer: Polygon2):
    """Greedy closure of an anchored chain whose first side lies on the
    directed line start -> v1 (already extended to its exit point v1)."""
    if v1 == start:
        return None
    try:
        t2 = tangent_vertex(v1, inner)
    except ValueError:
        return None
    v2 = chord_exit(v1, t2, outer)
    if v2 == v1:
        return None
    try:
        t3 = tangent_vertex(v2, inner)
    except ValueError:
        return None
    third = (v2[0] + (t3[0] - v2[0]), v2[1] + (t3[1] - v2[1]))
    x = _line_intersection(v2, third, start, v1)
    if x is None:
        return None
    return _verified((v1, v2, x), inner, outer)


# ---------------------------------------------------------------------------
# nonnegative rank at most 3


def _independent_columns(m: ExactMatrix, r: int) -> list:
    cols = []
    for j in range(1, m.q + 1):
        trial = cols + [j]
        if rank(m.submatrix(range(1, m.p + 1), trial)) == len(trial):
            cols = trial
            if len(cols) == r:
                return cols
    raise ValueError(f"matrix has rank below {r}")


def _nonneg_rank1_factors(m: ExactMatrix):
    """(u, v) nonnegative with u v^T = m, for a nonnegative rank-<=1 m."""
    j0 = next((j for j in range(1, m.q + 1) if any(x != 0 for x in m.col(j))), None)
    if j0 is None:
        return [Fraction(0)] * m.p, [Fraction(0)] * m.q
    u = m.col(j0)
    i0 = next(i for i in range(1, m.p + 1) if m.entry(i, j0) != 0)
    v = [m.entry(i0, j) / m.entry(i0, j0) for j in range(1, m.q + 1)]
    return u, v


def _nonneg_rank2_factorization(m: ExactMatrix):
    """Nonnegative (A, B) with A p x 2, B 2 x q and A.B = m, for a
    nonnegative rank-2 matrix (always possible in rank <= 2)."""
    nz = [j for j in range(1, m.q + 1) if any(x != 0 for x in m.col(j))]
    cols = {j: m.col(j) for j in nz}
    sums = {j: sum(cols[j]) for j in nz}
    normalized = {j: [x / sums[j] for x in cols[j]] for j in nz}
    # normalized columns lie on an affine line; order them along it
    j_a = nz[0]
    j_b = next(j for j in nz if normalized[j] != normalized[j_a])
    d = [x - y for x, y in zip(normalized[j_b], normalized[j_a])]

    def param(j):
        return sum((x - y) * dz for x, y, dz in zip(normalized[j], normalized[j_a], d))

    lo = min(nz, key=param)
    hi = max(nz, key=param)
    a_mat = ExactMatrix([[normalized[lo][i], normalized[hi][i]] for i in range(m.p)])
    b_rows = [[], []]
    for j in range(1, m.q + 1):
        if j not in nz:
            b_rows[0].append(Fraction(0))
            b_rows[1].append(Fraction(0))
            continue
        sol = solve_linear(a_mat, ExactMatrix.column(cols[j]))
        assert sol.consistent
        b_rows[0].append(sol.particular.entry(1, 1))
        b_rows[1].append(sol.particular.entry(2, 1))
    b_mat = ExactMatrix(b_rows)
    assert a_mat.is_nonnegative() and b_mat.is_nonnegative()
    assert matmul(a_mat, b_mat) == m
    return a_mat, b_mat


def _pad_to_width(a: ExactMatrix, width: int) -> ExactMatrix:
    if a.q >= width:
        return a
    return a.hstack(ExactMatrix.zeros(a.p, width - a.q))


def _pad_to_height(b: ExactMatrix, height: int) -> ExactMatrix:
    if b.p >= height:
        return b
    return b.vstack(ExactMatrix.zeros(height - b.p, b.q))


def _bounded_slice_pair(a0: ExactMatrix, b0: ExactMatrix) -> NestedPair:
    """Nested pair for M = a0.b0 with a0 nonnegative of rank 3, using the
    column-sum functional of a0 as the slice direction (which is strictly
    positive on the cone of A, making Q bounded)."""
    w = [sum(a0.col(k)) for k in range(1, 4)]
    g_rows = [w]
    for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        if len(g_rows) < 3 and rank(ExactMatrix(g_rows + [e])) == len(g_rows) + 1:
            g_rows.append(e)
    g = ExactMatrix(g_rows)
    assert det(g) != 0
    a_sliced = matmul(a0, inverse(g))
    b_sliced = matmul(g, b0)
    nz_cols = [j for j in range(1, b_sliced.q + 1) if any(x != 0 for x in b_sliced.col(j))]
    b_geom = b_sliced.submatrix(range(1, 4), nz_cols)
    pair = polytopes_from_factorization(a_sliced, b_geom, "first")
    pair.provenance.update({"basis_change": g, "nonzero_columns": nz_cols})
    return pair


def nn_rank_at_most_3(m: ExactMatrix):
    """Decide nonnegative rank <= 3, with a witness factorization.

    Returns (True, (A, B)) with A, B nonnegative, A.B == m and inner
    dimension 3, or (False, None).  For rank < 3 the witness is built
    directly; for rank 3 a triangle nested between the associated polygons
    is converted back through the simplicial change of basis.
    """
    if not m.is_nonnegative():
        raise ValueError("matrix must be nonnegative")
    r = rank(m)
    if r == 0:
        return True, (ExactMatrix.zeros(m.p, 3), ExactMatrix.zeros(3, m.q))
    if r == 1:
        u, v = _nonneg_rank1_factors(m)
        a = _pad_to_width(ExactMatrix.column(u), 3)
        b = _pad_to_height(ExactMatrix.row_vector(v), 3)
        assert matmul(a, b) == m
        return True, (a, b)
    if r == 2:
        a2, b2 = _nonneg_rank2_factorization(m)
        return True, (_pad_to_width(a2, 3), _pad_to_height(b2, 3))
    if r > 3:
        return False, None

    cols = _independent_columns(m, 3)
    a0 = m.submatrix(range(1, m.p + 1), cols)
    sol = solve_linear(a0, m)
    assert sol.consistent
    b0 = sol.particular
    assert matmul(a0, b0) == m

    pair = _bounded_slice_pair(a0, b0)
    tri = nested_triangle(pair)
    if tri is None:
        return False, None
    witness = triangle_to_factorization(pair, tri, m)
    return True, witness


def triangle_to_factorization(pair: NestedPair, tri: Triangle, m: ExactMatrix):
    """Convert a nested triangle for the pair built by _bounded_slice_pair
    back into a size-3 nonnegative factorization of m."""
    a_sliced = pair.provenance["a"]
    b_geom = pair.provenance["b"]
    nz_cols = pair.provenance["nonzero_columns"]
    c = ExactMatrix([[1, 1, 1]] + [[v[0] for v in tri.vertices], [v[1] for v in tri.vertices]])
    # columns of c are the lifted triangle vertices (1, x, y)
    c = c  # 3x3
    a_w = matmul(a_sliced, c)
    c_inv = inverse(c)
    b_w_geom = matmul(c_inv, b_geom)
    # reinsert zero columns dropped from the geometry
    rows = [[Fraction(0)] * m.q for _ in range(3)]
    for idx, j in enumerate(nz_cols, start=1):
        for k in range(3):
            rows[k][j - 1] = b_w_geom.entry(k + 1, idx)
    b_w = ExactMatrix(rows)
    assert a_w.is_nonnegative(), "triangle not inside Q"
    assert b_w.is_nonnegative(), "P not inside triangle"
    assert matmul(a_w, b_w) == m
    return a_w, b_w
