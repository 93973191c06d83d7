"""Row- and column-stochastic consensus weights and Perron-vector utilities.

Matrices are dense ``n x n`` arrays applied blockwise to ``n x p`` state
arrays, which is equivalent to the Kronecker lift ``M (x) I_p``.
"""

from dataclasses import dataclass
import enum

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import NumericalError, StructuralInputError
from .graph import Digraph

SUM_TOL = 1e-12


class Kind(enum.Enum):
    ROW = "row"
    COLUMN = "column"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    entries: np.ndarray
    kind: Kind

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise StructuralInputError(f"weight matrix must be square, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def n(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def to_csv(self, path):
        with open(path, "w") as fh:
            for row in self.entries:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")


def validate(m, g=None, tol=SUM_TOL):
    """Check nonnegativity, stochasticity and, given ``g``, the support pattern.

    The positive diagonal is part of the support check: it comes from the
    graph's self-loops, and derived matrices such as ``V^{-1} B V`` of a
    loop-free ``B`` need not have it.

    Raises :class:`StructuralInputError` on the first violation and returns
    ``m`` otherwise.
    """
    a = m.entries
    if not np.all(np.isfinite(a)):
        raise StructuralInputError("weight matrix has non-finite entries")
    if np.any(a < 0):
        raise StructuralInputError("weight matrix has negative entries")
    sums = a.sum(axis=1) if m.kind is Kind.ROW else a.sum(axis=0)
    worst = float(np.max(np.abs(sums - 1.0)))
    if worst > tol:
        raise StructuralInputError(f"{m.kind.value} sums deviate from 1 by {worst:.3e} > {tol:g}")
    if g is not None:
        if np.any(np.diag(a) <= 0):
            raise StructuralInputError("weight matrix has a non-positive diagonal entry")
        if g.n != m.n:
            raise StructuralInputError(f"graph has {g.n} nodes, matrix is {m.n}x{m.n}")
        # both kinds share the pattern a_ij > 0 <=> j -> i
        if not np.array_equal(a > 0, g.adjacency()):
            raise StructuralInputError("weight support does not match graph adjacency")
    return m


def uniform_row_stochastic(g: Digraph) -> StochasticMatrix:
    """``a_ij = 1/|N_i^in|`` for every in-neighbor ``j`` of ``i``."""
    a = np.zeros((g.n, g.n))
    for i, nbrs in enumerate(g.in_neighbors):
        a[i, sorted(nbrs)] = 1.0 / len(nbrs)
    return StochasticMatrix(a, Kind.ROW)


def uniform_column_stochastic(g: Digraph) -> StochasticMatrix:
    """``b_ij = 1/|N_j^out|`` for every out-neighbor ``i`` of ``j``."""
    b = np.zeros((g.n, g.n))
    for j, outs in enumerate(g.out_neighbors):
        b[sorted(outs), j] = 1.0 / len(outs)
    return StochasticMatrix(b, Kind.COLUMN)


def perron_vector(m, side=Side.RIGHT, tol=1e-12, max_iter=1_000_000):
    """Positive eigenvector for eigenvalue 1, normalized to sum 1.

    Power iteration on ``M`` (right) or ``M^T`` (left) from the uniform
    vector, stopping once successive iterates differ by at most ``tol`` in
    max-norm. Primitivity makes this converge. A reducible input is rejected
    up front and a periodic one exhausts ``max_iter``; both raise
    :class:`NumericalError`.
    """
    a = np.asarray(m.entries if isinstance(m, StochasticMatrix) else m, dtype=float)
    if connected_components(a > 0, directed=True, connection="strong")[0] != 1:
        raise NumericalError("matrix is reducible; its Perron vector is not positive")
    op = a if Side(side) is Side.RIGHT else a.T
    n = a.shape[0]
    u = np.full(n, 1.0 / n)
    for _ in range(int(max_iter)):
        nxt = op @ u
        nxt /= nxt.sum()
        change = np.max(np.abs(nxt - u))
        u = nxt
        if change <= tol:
            break
    else:
        raise NumericalError(
            f"power iteration did not converge in {max_iter} steps (last change {change:.3e}); "
            "is the matrix primitive?")
    if np.any(u <= 0):
        raise NumericalError("Perron vector has non-positive entries; matrix is not primitive")
    return u


def similarity_transform_check(b, v, tol=1e-15):
    """Row-stochastic ``V^{-1} B V`` for column-stochastic ``B`` with ``Bv = v``.

    Entry ``(i, j)`` is ``b_ij v_j / v_i``. The result is validated as
    row-stochastic before it is returned.
    """
    if b.kind is not Kind.COLUMN:
        raise StructuralInputError("similarity transform needs a column-stochastic matrix")
    v = np.asarray(v, dtype=float)
    if v.shape != (b.n,):
        raise StructuralInputError(f"vector of length {v.shape} does not match n={b.n}")
    if np.any(v <= tol):
        raise NumericalError(f"singular transform: min v_i = {v.min():.3e}")
    out = StochasticMatrix(b.entries * v[None, :] / v[:, None], Kind.ROW)
    return validate(out)


def limit_matrix(m, tol=1e-14):
    """``1 w^T`` for row-stochastic ``m``, ``v 1^T`` for column-stochastic."""
    n = m.n
    if m.kind is Kind.ROW:
        w = perron_vector(m, Side.LEFT, tol=tol)
        return np.outer(np.ones(n), w)
    v = perron_vector(m, Side.RIGHT, tol=tol)
    return np.outer(v, np.ones(n))


def power_limit_residual(m, k):
    """``max |M^k - M^inf|``; shrinks to zero for primitive ``m``."""
    mk = np.linalg.matrix_power(m.entries, int(k))
    return float(np.max(np.abs(mk - limit_matrix(m))))
