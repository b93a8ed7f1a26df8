"""Simplices, prisms and polyhedra for the branch-and-bound search.

All values are immutable after construction; operations return fresh
objects.  The polyhedron lives in (x, t)-space and outer-approximates the
epigraph region {x in the cube, fhat(x) <= t}.
"""

import numpy as np

from .numerics import SingularMatrixError, det, lu_factor, lu_solve, lu_solve_factored
from .setfn import indicator

DEGENERACY_TOL = 1e-12
BARY_TOL = 1e-12


class DegenerateSimplexError(ValueError):
    pass


class Simplex:
    """n+1 affinely independent vertices in n-space."""

    __slots__ = ("vertices", "n", "_minv")

    def __init__(self, vertices):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] + 1:
            raise ValueError("simplex needs n+1 vertices in n-space")
        n = V.shape[1]
        # one factorization serves both the degeneracy test (|det| of the
        # barycentric matrix equals |det| of the edge matrix) and the inverse
        M = np.vstack([V.T, np.ones(n + 1)])
        scale = float(np.prod(np.linalg.norm(V[1:] - V[0], axis=1)))
        try:
            LU, piv = lu_factor(M)
        except SingularMatrixError:
            raise DegenerateSimplexError("vertices are (nearly) affinely dependent")
        d = float(np.prod(np.diag(LU)))
        if abs(d) <= DEGENERACY_TOL * max(scale, 1e-300):
            raise DegenerateSimplexError("vertices are (nearly) affinely dependent")
        V.setflags(write=False)
        self.vertices = V
        self.n = n
        # lambda(x) = Minv @ (x; 1)
        self._minv = lu_solve_factored(LU, piv, np.eye(n + 1))
        self._minv.setflags(write=False)

    def replace_vertex(self, i, r):
        """Child simplex with vertex i replaced by r, sharing all other
        vertices.  The barycentric matrix is updated by a rank-one
        (Sherman-Morrison) step instead of a fresh factorization."""
        lam = barycentric(self, r)
        if abs(lam[i]) <= DEGENERACY_TOL:
            raise DegenerateSimplexError("replacement point lies on the opposite facet")
        V = self.vertices.copy()
        V[i] = r
        u = lam.copy()
        u[i] -= 1.0
        minv = self._minv - np.outer(u, self._minv[i]) / lam[i]
        child = object.__new__(Simplex)
        V.setflags(write=False)
        minv.setflags(write=False)
        child.vertices = V
        child.n = self.n
        child._minv = minv
        return child

    def volume_measure(self):
        """|det| of the edge matrix (n! times the Euclidean volume)."""
        return abs(det((self.vertices[1:] - self.vertices[0]).T))

    def max_edge_length(self):
        V = self.vertices
        diff = V[:, None, :] - V[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=2))))

    def barycentric_many(self, X):
        """Barycentric coordinates for the rows of X; returns (m, n+1)."""
        X = np.asarray(X, dtype=float)
        aug = np.hstack([X, np.ones((X.shape[0], 1))])
        return aug @ self._minv.T

    def contains(self, x, tol=BARY_TOL):
        return bool(np.min(barycentric(self, x)) >= -tol)

    def __repr__(self):
        return "Simplex(n=%d)" % self.n


class Prism:
    """Vertical extension of a simplex into (x, t)-space; t is unbounded."""

    __slots__ = ("base",)

    def __init__(self, base):
        self.base = base

    def __repr__(self):
        return "Prism(%r)" % self.base


def barycentric(S, x):
    """The unique lambda with sum(lambda) = 1 and sum(lambda_i v_i) = x."""
    x = np.asarray(x, dtype=float)
    return S._minv @ np.append(x, 1.0)


def initial_simplex(n, v_mask=0):
    """Enclosing simplex of the unit cube anchored at the cube vertex v_mask.

    The apex is the chosen cube vertex; the n remaining vertices are the
    points where the bounding hyperplane meets the cone edges leaving the
    apex (a step of length n along each free coordinate direction).
    """
    apex = indicator(v_mask, n)
    verts = [apex]
    for i in range(n):
        d = np.zeros(n)
        d[i] = -1.0 if (v_mask >> i) & 1 else 1.0
        verts.append(apex + n * d)
    return Simplex(np.array(verts))


def longest_edge(S):
    """Index pair (i, j), i < j, of the longest edge; lexicographic tie-break."""
    V = S.vertices
    m = len(V)
    diff = V[:, None, :] - V[None, :, :]
    d2 = np.sum(diff * diff, axis=2)
    iu = np.triu_indices(m, k=1)
    k = int(np.argmax(d2[iu]))  # first max: lexicographically smallest pair
    return int(iu[0][k]), int(iu[1][k])


def bisect(S):
    """Longest-edge bisection; returns the two children covering S."""
    i1, i2 = longest_edge(S)
    V = S.vertices
    r = 0.5 * (V[i1] + V[i2])
    return S.replace_vertex(i1, r), S.replace_vertex(i2, r)


def radial_subdivide(S, r, tol=1e-10):
    """Partition S by joining an interior point r to the opposite facets.

    Replaces each vertex carrying barycentric weight > tol by r; the
    resulting simplices cover S and overlap only on boundaries.  Raises when
    r is (numerically) a vertex of S, where no proper partition exists.
    """
    lam = barycentric(S, r)
    keep = np.nonzero(lam > tol)[0]
    if len(keep) < 2:
        raise ValueError("subdivision point coincides with a vertex")
    return [S.replace_vertex(int(i), r) for i in keep]


def hyperplane_through(points, heights):
    """The hyperplane {p.x - t = gamma} through the lifted points (v_i, t_i).

    Returns (p, gamma); raises on a degenerate base.
    """
    V = np.asarray(points, dtype=float)
    t = np.asarray(heights, dtype=float)
    n = V.shape[1]
    A = np.hstack([V, -np.ones((n + 1, 1))])
    sol = lu_solve(A, t)
    return sol[:n], float(sol[n])


class Polyhedron:
    """Conjunction of half-spaces A_j . x + a_j t <= b_j."""

    __slots__ = ("A", "a", "b")

    def __init__(self, A, a, b):
        self.A = np.array(A, dtype=float)
        self.a = np.array(a, dtype=float)
        self.b = np.array(b, dtype=float)
        self.A.setflags(write=False)
        self.a.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def num_rows(self):
        return len(self.b)

    def with_row(self, coeff_x, coeff_t, rhs):
        return Polyhedron(np.vstack([self.A, np.asarray(coeff_x, dtype=float)]),
                          np.append(self.a, float(coeff_t)),
                          np.append(self.b, float(rhs)))

    def t_interval(self, x, tol=1e-9):
        """Feasible t-range at a fixed x, or None when the t-free rows reject x.

        Raises when no row bounds t from below (a_j < 0 is required).
        """
        x = np.asarray(x, dtype=float)
        lhs = self.A @ x
        lo = -np.inf
        hi = np.inf
        has_lower = False
        for j in range(len(self.b)):
            aj = self.a[j]
            if aj == 0.0:
                if lhs[j] > self.b[j] + tol:
                    return None
            elif aj > 0.0:
                hi = min(hi, (self.b[j] - lhs[j]) / aj)
            else:
                lo = max(lo, (self.b[j] - lhs[j]) / aj)
                has_lower = True
        if not has_lower:
            raise ValueError("polyhedron does not bound t from below")
        return lo, hi

    def satisfies(self, x, t, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.A @ x + self.a * t <= self.b + tol))

    def __repr__(self):
        return "Polyhedron(rows=%d)" % self.num_rows


def initial_polyhedron(S0, t_tilde):
    """Rows encoding x in S0 (facet inequalities recovered from barycentric
    coordinates) plus the floor -t <= -t_tilde."""
    n = S0.n
    Minv = S0._minv
    rows_A = []
    rows_a = []
    rows_b = []
    for i in range(n + 1):
        # lambda_i(x) = Minv[i,:n].x + Minv[i,n] >= 0
        rows_A.append(-Minv[i, :n])
        rows_a.append(0.0)
        rows_b.append(Minv[i, n])
    rows_A.append(np.zeros(n))
    rows_a.append(-1.0)
    rows_b.append(-float(t_tilde))
    return Polyhedron(np.array(rows_A), rows_a, rows_b)


def add_cut(P, cut_row):
    """Append the row s.x + c*t <= -d encoding l(x,t) = s.x + c*t + d <= 0."""
    s, c, d = cut_row
    return P.with_row(s, c, -d)
