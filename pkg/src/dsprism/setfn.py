"""Set-function oracles, the Lovász extension and its subgradients, and
exhaustive minimizers.

Subsets of the ground set {0, ..., n-1} are represented as bitmasks
(bit i set <=> element i in the subset).  Oracles are pure: repeated
evaluation of the same subset returns bit-identical values.
"""

import numpy as np

from .numerics import least_squares, sym_eigs

ENUM_CAP = 24


class GroundSetError(ValueError):
    pass


def mask_of(elements):
    """Bitmask for an iterable of element indices."""
    m = 0
    for i in elements:
        m |= 1 << int(i)
    return m


def set_of(mask):
    """Sorted element indices of a bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def indicator(mask, n):
    """Characteristic vector of a subset as a float array."""
    return np.array([(mask >> i) & 1 for i in range(n)], dtype=float)


class SetFunction:
    """A real-valued function on subsets of {0, ..., n-1}.

    ``fn`` maps a bitmask to a float.  ``spec`` keeps the constructor
    parameters for JSON round-trips; ``submodular`` records the direction
    claimed by the constructor (None when unknown).
    """

    __slots__ = ("n", "name", "_fn", "spec", "submodular", "table_values")

    def __init__(self, n, fn, name="custom", spec=None, submodular=None,
                 table_values=None):
        if n < 1:
            raise GroundSetError("ground set must be nonempty")
        self.n = int(n)
        self._fn = fn
        self.name = name
        self.spec = spec
        self.submodular = submodular
        self.table_values = table_values  # fast-path array for table oracles

    def __call__(self, mask):
        if mask >> self.n:
            raise GroundSetError("mask %d outside ground set of size %d" % (mask, self.n))
        return float(self._fn(int(mask)))

    def __repr__(self):
        return "SetFunction(n=%d, %s)" % (self.n, self.name)


def evaluate(oracle, subset):
    """Evaluate an oracle on a subset given as a mask or an iterable."""
    mask = subset if isinstance(subset, int) else mask_of(subset)
    return oracle(mask)


# ---------------------------------------------------------------------------
# Library constructors


def modular(weights):
    w = np.asarray(weights, dtype=float)
    n = len(w)

    def fn(mask):
        return float(sum(w[i] for i in range(n) if (mask >> i) & 1))

    return SetFunction(n, fn, "modular",
                       spec={"type": "modular", "weights": list(map(float, w))},
                       submodular=True)


def cardinality_concave(n, phi):
    """phi applied to |A|; phi is a list of n+1 values, concave nondecreasing."""
    phi = [float(v) for v in phi]
    if len(phi) != n + 1:
        raise ValueError("phi must have n+1 values")
    for k in range(n):
        if phi[k + 1] < phi[k] - 1e-12:
            raise ValueError("phi must be nondecreasing")
    for k in range(1, n):
        if phi[k + 1] - phi[k] > phi[k] - phi[k - 1] + 1e-12:
            raise ValueError("phi must be concave")

    def fn(mask):
        return phi[bin(mask).count("1")]

    return SetFunction(n, fn, "cardinality_concave",
                       spec={"type": "cardinality_concave", "phi": phi},
                       submodular=True)


def cut(n, edges):
    """Graph cut: edges are (u, v, weight) with nonnegative weights."""
    es = []
    for u, v, w in edges:
        u, v, w = int(u), int(v), float(w)
        if w < 0:
            raise ValueError("negative edge weight %g" % w)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError("edge endpoint outside ground set")
        es.append((u, v, w))

    def fn(mask):
        total = 0.0
        for u, v, w in es:
            if ((mask >> u) & 1) != ((mask >> v) & 1):
                total += w
        return total

    return SetFunction(n, fn, "cut",
                       spec={"type": "cut", "edges": [[u, v, w] for u, v, w in es]},
                       submodular=True)


def nuclear(X, scale=1.0):
    """f(A) = scale * sum of singular values of the column submatrix X_A."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a matrix")
    n = X.shape[1]
    scale = float(scale)

    def fn(mask):
        if mask == 0:
            return 0.0
        cols = [i for i in range(n) if (mask >> i) & 1]
        B = X[:, cols]
        eigs = sym_eigs(B.T @ B)
        return scale * float(np.sum(np.sqrt(np.clip(eigs, 0.0, None))))

    return SetFunction(n, fn, "nuclear",
                       spec={"type": "nuclear", "X": X.tolist(), "scale": scale},
                       submodular=True)


def neg_residual(X, y):
    """g(A) = -min_w ||y - X_A w||^2 (submodular; the residual is supermodular)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ValueError("X and y shapes are inconsistent")
    n = X.shape[1]

    def fn(mask):
        cols = [i for i in range(n) if (mask >> i) & 1]
        _, res = least_squares(X[:, cols], y)
        return -res

    return SetFunction(n, fn, "neg_residual",
                       spec={"type": "neg_residual", "X": X.tolist(), "y": y.tolist()},
                       submodular=True)


def gaussian_entropy(sigma):
    """f(A) = 1/2 log det(2*pi*e * Sigma_AA), with f(empty) = 0."""
    S = np.asarray(sigma, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("sigma must be square")
    if not np.allclose(S, S.T, atol=1e-10):
        raise ValueError("sigma must be symmetric")
    eigs = sym_eigs(S)
    if eigs[0] <= 1e-12:
        raise ValueError("sigma must be positive definite")
    n = S.shape[0]

    def fn(mask):
        if mask == 0:
            return 0.0
        idx = [i for i in range(n) if (mask >> i) & 1]
        sub = S[np.ix_(idx, idx)]
        vals = sym_eigs(sub)
        return 0.5 * float(np.sum(np.log(2.0 * np.pi * np.e * vals)))

    return SetFunction(n, fn, "gaussian_entropy",
                       spec={"type": "gaussian_entropy", "sigma": S.tolist()},
                       submodular=True)


def table(n, values):
    """Explicit table of 2^n values, indexed by mask."""
    vals = [float(v) for v in values]
    if len(vals) != 1 << n:
        raise ValueError("table must have exactly 2^n values")

    arr = np.array(vals)

    def fn(mask):
        return vals[mask]

    return SetFunction(n, fn, "table",
                       spec={"type": "table", "values": vals},
                       submodular=None, table_values=arr)


def coverage(n, item_weights, covers):
    """Weighted coverage: element i covers the universe items in covers[i];
    f(A) = total weight of the union of covered items."""
    w = np.asarray(item_weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("coverage item weights must be nonnegative")
    if len(covers) != n:
        raise ValueError("covers must have one entry per ground element")
    cover_masks = []
    for items in covers:
        cm = 0
        for u in items:
            u = int(u)
            if not (0 <= u < len(w)):
                raise ValueError("covered item index out of range")
            cm |= 1 << u
        cover_masks.append(cm)

    def fn(mask):
        covered = 0
        for i in range(n):
            if (mask >> i) & 1:
                covered |= cover_masks[i]
        return float(sum(w[u] for u in range(len(w)) if (covered >> u) & 1))

    return SetFunction(n, fn, "coverage",
                       spec={"type": "coverage", "item_weights": list(map(float, w)),
                             "covers": [set_of(cm) for cm in cover_masks]},
                       submodular=True)


def make_function(spec, n=None):
    """Build an oracle from a JSON-style spec dict."""
    kind = spec["type"]
    if kind == "modular":
        return modular(spec["weights"])
    if kind == "cardinality_concave":
        return cardinality_concave(n if n is not None else spec.get("n"), spec["phi"])
    if kind == "cut":
        if n is None:
            raise ValueError("cut spec needs the ground-set size")
        return cut(n, spec["edges"])
    if kind == "nuclear":
        return nuclear(spec["X"], spec.get("scale", 1.0))
    if kind == "neg_residual":
        return neg_residual(spec["X"], spec["y"])
    if kind == "gaussian_entropy":
        return gaussian_entropy(spec["sigma"])
    if kind == "table":
        nv = len(spec["values"])
        if n is None:
            n = nv.bit_length() - 1
        return table(n, spec["values"])
    if kind == "coverage":
        if n is None:
            n = len(spec["covers"])
        return coverage(n, spec["item_weights"], spec["covers"])
    raise ValueError("unknown set-function type %r" % kind)


def as_table(oracle):
    """Materialize an oracle into a table-backed oracle with identical values."""
    n = oracle.n
    if n > ENUM_CAP:
        raise GroundSetError("ground set too large to tabulate")
    vals = [oracle(m) for m in range(1 << n)]
    out = table(n, vals)
    out.name = "table(%s)" % oracle.name
    out.submodular = oracle.submodular
    return out


# ---------------------------------------------------------------------------
# Lovász extension


def _chain_order(x):
    # nonincreasing values, ties broken by ascending index
    x = np.asarray(x, dtype=float)
    return np.lexsort((np.arange(len(x)), -x))


def _chain_values(oracle, order):
    """Values of the oracle along the prefix chain of an element order,
    starting from the empty set: n+1 values."""
    n = oracle.n
    if oracle.table_values is not None:
        chain = np.cumsum(np.left_shift(1, order))
        return np.concatenate([[oracle.table_values[0]],
                               oracle.table_values[chain]])
    out = np.empty(n + 1)
    out[0] = oracle(0)
    mask = 0
    for j in range(n):
        mask |= 1 << int(order[j])
        out[j + 1] = oracle(mask)
    return out


def lovasz(oracle, x):
    """Lovász extension value at x (offset by f(empty) so that the extension
    agrees with the set function at every characteristic vector)."""
    x = np.asarray(x, dtype=float)
    n = oracle.n
    if len(x) != n:
        raise GroundSetError("point has wrong dimension")
    # exact at characteristic vectors: the chain sum telescopes to the set
    # value, so return it without accumulating rounding
    bits = x == 1.0
    if np.all(bits | (x == 0.0)):
        return oracle(int(np.sum(np.left_shift(1, np.nonzero(bits)[0]))))
    order = _chain_order(x)
    cv = _chain_values(oracle, order)
    return float(cv[0] + x[order] @ np.diff(cv))


def lovasz_subgradient(oracle, x):
    """Edmonds greedy subgradient of the Lovász extension at x."""
    x = np.asarray(x, dtype=float)
    n = oracle.n
    if len(x) != n:
        raise GroundSetError("point has wrong dimension")
    order = _chain_order(x)
    cv = _chain_values(oracle, order)
    s = np.empty(n)
    s[order] = np.diff(cv)
    return s


# ---------------------------------------------------------------------------
# Exhaustive minimization


def brute_force_min(oracle):
    """Exact minimizer by enumeration; ties broken to the smallest mask."""
    n = oracle.n
    if n > ENUM_CAP:
        raise GroundSetError("ground set too large for exhaustive enumeration")
    if oracle.table_values is not None:
        m = int(np.argmin(oracle.table_values))  # first min: smallest mask
        return m, float(oracle.table_values[m])
    best_mask = 0
    best_val = oracle(0)
    for m in range(1, 1 << n):
        v = oracle(m)
        if v < best_val:
            best_val = v
            best_mask = m
    return best_mask, best_val


def brute_force_ds_min(f, g):
    """Exact minimizer of f - g by enumeration; ties to the smallest mask."""
    if f.n != g.n:
        raise GroundSetError("oracles live on different ground sets")
    n = f.n
    if n > ENUM_CAP:
        raise GroundSetError("ground set too large for exhaustive enumeration")
    best_mask = 0
    best_val = f(0) - g(0)
    for m in range(1, 1 << n):
        v = f(m) - g(m)
        if v < best_val:
            best_val = v
            best_mask = m
    return best_mask, best_val


def max_submodularity_violation(oracle):
    """Largest four-point violation max(f(AuB)+f(AnB)-f(A)-f(B)); <= 0 means
    submodular.  Exhaustive, so only for small n."""
    n = oracle.n
    if n > 12:
        raise GroundSetError("four-point check is exhaustive; n too large")
    vals = np.array([oracle(m) for m in range(1 << n)])
    masks = np.arange(1 << n)
    A = masks[:, None]
    B = masks[None, :]
    return float(np.max(vals[A | B] + vals[A & B] - vals[A] - vals[B]))


def ds_decompose(f, g, slack=1e-9):
    """Valid difference-of-submodular decomposition of f - g.

    When g (or f) fails the four-point check, adds M * q with
    q(A) = |A| (n - |A|) to both sides.  q is submodular with four-point
    slack >= 2 on every incomparable pair, so M = violation / 2 repairs
    the pair while leaving the difference f - g unchanged.
    Returns (f', g', M); M = 0 means the inputs were returned as-is.
    """
    if f.n != g.n:
        raise GroundSetError("oracles live on different ground sets")
    n = f.n
    ft, gt = as_table(f), as_table(g)
    viol = max(max_submodularity_violation(ft), max_submodularity_violation(gt))
    if viol <= slack:
        return ft, gt, 0.0
    M = 0.5 * viol * (1.0 + 1e-6) + slack
    card = np.array([bin(m).count("1") for m in range(1 << n)])
    q = M * card * (n - card)
    f2 = table(n, [ft(m) + q[m] for m in range(1 << n)])
    g2 = table(n, [gt(m) + q[m] for m in range(1 << n)])
    f2.submodular = g2.submodular = True
    f2.name = "repaired(%s)" % f.name
    g2.name = "repaired(%s)" % g.name
    return f2, g2, M


def is_submodular(oracle, tol=1e-9):
    """Exhaustive four-point check; only sensible for small n."""
    n = oracle.n
    if n > 12:
        raise GroundSetError("four-point check is exhaustive; n too large")
    vals = np.array([oracle(m) for m in range(1 << n)])
    masks = np.arange(1 << n)
    A = masks[:, None]
    B = masks[None, :]
    lhs = vals[A] + vals[B]
    rhs = vals[A | B] + vals[A & B]
    return bool(np.all(lhs >= rhs - tol))
