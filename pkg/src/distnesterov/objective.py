"""Per-agent objectives ``f_i`` and their global average ``F = (1/n) sum f_i``."""

from dataclasses import dataclass
import json
import math

import numpy as np
from scipy.special import expit

from .errors import ParameterError, StructuralInputError

DEFAULT_LAMBDA = 1e-2


class ObjectiveSet:
    """Bundle of ``n`` local objectives on ``R^p``.

    Subclasses implement :meth:`value` and :meth:`gradient` for one agent and
    usually override :meth:`gradients` with a vectorized version.

    Attributes
    ----------
    n, p : int
        Agent count and decision dimension.
    mu : float or None
        Strong-convexity modulus; ``0`` marks a merely convex objective.
    L : float or None
        Smoothness constant of every ``f_i`` (and hence of ``F``).
    """

    n: int
    p: int
    mu = None
    L = None

    def value(self, i, x):
        raise NotImplementedError

    def gradient(self, i, x):
        raise NotImplementedError

    def gradients(self, X):
        """Stack of ``grad f_i(X[i])`` for an ``n x p`` array ``X``."""
        X = np.asarray(X, dtype=float)
        return np.stack([self.gradient(i, X[i]) for i in range(self.n)])

    def global_value(self, x):
        return float(np.mean([self.value(i, x) for i in range(self.n)]))

    def global_gradient(self, x):
        x = np.asarray(x, dtype=float)
        return self.gradients(np.tile(x, (self.n, 1))).mean(axis=0)

    def exact_minimizer(self):
        """Closed-form minimizer of ``F`` when one is known, else ``None``."""
        return None

    @property
    def strongly_convex(self):
        return bool(self.mu)

    def _check_params(self):
        if self.mu is not None and self.L is not None and self.mu > self.L:
            raise ParameterError(f"mu={self.mu} exceeds L={self.L}")


# -- logistic regression ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LogisticData:
    """Per-agent samples for binary logistic regression.

    ``features`` has shape ``(n, m, p)`` and ``labels`` shape ``(n, m)``
    with entries in ``{-1, +1}``; every agent holds ``m`` samples.
    """

    features: np.ndarray
    labels: np.ndarray
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self):
        c = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if c.ndim != 3 or y.shape != c.shape[:2]:
            raise StructuralInputError(
                f"features must be (n, m, p) and labels (n, m); got {c.shape} and {y.shape}")
        if c.shape[1] < 1:
            raise StructuralInputError("every agent needs at least one sample")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise StructuralInputError("labels must be -1 or +1")
        if not self.lam > 0:
            raise ParameterError(f"regularizer must be positive, got {self.lam}")
        object.__setattr__(self, "features", c)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "lam", float(self.lam))

    def to_json(self):
        return {
            "features": self.features.tolist(),
            "labels": self.labels.astype(int).tolist(),
            "lam": self.lam,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(np.array(obj["features"], dtype=float), np.array(obj["labels"], dtype=float),
                   obj.get("lam", DEFAULT_LAMBDA))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def generate_logistic_data(n, p, m_per_agent, lam=DEFAULT_LAMBDA, seed=0):
    """Standard-normal features and fair-coin labels, independent of each other."""
    if min(n, p, m_per_agent) < 1:
        raise ParameterError("n, p and m_per_agent must all be positive")
    rng = np.random.default_rng(seed)
    features = rng.standard_normal((n, m_per_agent, p))
    labels = np.where(rng.random((n, m_per_agent)) < 0.5, 1.0, -1.0)
    return LogisticData(features, labels, lam)


class LogisticObjective(ObjectiveSet):
    """Regularized logistic loss on the variable ``z = (b, c)`` in ``R^{p+1}``.

    ``f_i(z) = sum_j log(1 + exp(-y_ij (b^T c_ij + c))) + lam/2 ||z||^2``.
    """

    def __init__(self, data: LogisticData):
        self.data = data
        n, m, p = data.features.shape
        self.n = n
        self.p = p + 1
        # augmented features (c_ij, 1) so the margin is a single dot product
        self._feats = np.concatenate([data.features, np.ones((n, m, 1))], axis=2)
        self._labels = data.labels
        self.mu = data.lam
        self.L = data.lam + 0.25 * float(np.max((self._feats ** 2).sum(axis=(1, 2))))
        self._check_params()

    def value(self, i, x):
        margins = self._labels[i] * (self._feats[i] @ x)
        return float(np.logaddexp(0.0, -margins).sum() + 0.5 * self.data.lam * x @ x)

    def gradient(self, i, x):
        # one kernel for both paths, so a single agent matches the centralized gradient bitwise
        x = np.asarray(x, dtype=float)
        return self._batch(self._feats[i:i + 1], self._labels[i:i + 1], x[None, :])[0]

    def global_value(self, x):
        x = np.asarray(x, dtype=float)
        margins = self._labels * (self._feats @ x)
        return float(np.logaddexp(0.0, -margins).sum() / self.n + 0.5 * self.data.lam * x @ x)

    def gradients(self, X):
        return self._batch(self._feats, self._labels, np.asarray(X, dtype=float))

    def _batch(self, feats, labels, X):
        margins = labels * np.einsum("imp,ip->im", feats, X)
        weights = -labels * expit(-margins)
        return np.einsum("imp,im->ip", feats, weights) + self.data.lam * X


def logistic_objective(data):
    return LogisticObjective(data)


# -- piecewise quartic (convex, not strongly convex) ----------------------------------

def huberized_quartic(x):
    """``x^4/4`` on ``|x| <= 1`` and ``|x| - 3/4`` outside."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    return np.where(ax <= 1.0, 0.25 * x ** 4, ax - 0.75)


def huberized_quartic_prime(x):
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) <= 1.0, x ** 3, np.sign(x))


class QuarticObjective(ObjectiveSet):
    """``f_i(x) = u(x) + b_i x`` on ``R`` with offsets summing to zero.

    ``F = u`` up to rounding, so the minimizer is 0 and ``F''(0) = 0``.
    """

    def __init__(self, offsets):
        b = np.asarray(offsets, dtype=float)
        if b.ndim != 1 or b.size < 1:
            raise StructuralInputError("offsets must be a non-empty vector")
        self.offsets = b
        self._mean_offset = math.fsum(b) / b.size
        self.n = b.size
        self.p = 1
        self.mu = 0.0
        self.L = 3.0

    def value(self, i, x):
        x = np.asarray(x, dtype=float)
        return float(huberized_quartic(x[0]) + self.offsets[i] * x[0])

    def gradient(self, i, x):
        x = np.asarray(x, dtype=float)
        return huberized_quartic_prime(x) + self.offsets[i]

    def gradients(self, X):
        X = np.asarray(X, dtype=float)
        return huberized_quartic_prime(X) + self.offsets[:, None]

    def global_value(self, x):
        x = np.asarray(x, dtype=float)
        return float(huberized_quartic(x[0]) + self._mean_offset * x[0])

    def global_gradient(self, x):
        return huberized_quartic_prime(np.asarray(x, dtype=float)) + self._mean_offset

    def exact_minimizer(self):
        # offsets sum to zero by construction, so F = u; the float sum is only
        # zero up to rounding, which would shift the root by ~cbrt(eps)
        return np.zeros(1)


def quartic_objective(n, seed=0):
    """Draw ``b_1..b_{n-1}`` standard normal and set ``b_n = -sum`` of the rest."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    b = np.empty(n)
    b[:-1] = rng.standard_normal(n - 1)
    b[-1] = -math.fsum(b[:-1])
    return QuarticObjective(b)


# -- quadratic test fixture -------------------------------------------------------------

class QuadraticObjective(ObjectiveSet):
    """``f_i(x) = ||x - t_i||^2 / 2``; the minimizer of ``F`` is the mean target."""

    def __init__(self, targets):
        t = np.asarray(targets, dtype=float)
        if t.ndim == 1:
            t = t[:, None]
        if t.ndim != 2 or t.shape[0] < 1:
            raise StructuralInputError(f"targets must be (n, p), got shape {t.shape}")
        self.targets = t
        self.n, self.p = t.shape
        self.mu = 1.0
        self.L = 1.0

    def value(self, i, x):
        d = np.asarray(x, dtype=float) - self.targets[i]
        return float(0.5 * d @ d)

    def gradient(self, i, x):
        return np.asarray(x, dtype=float) - self.targets[i]

    def gradients(self, X):
        return np.asarray(X, dtype=float) - self.targets

    def global_value(self, x):
        d = np.asarray(x, dtype=float)[None, :] - self.targets
        return float(0.5 * np.mean(np.sum(d * d, axis=1)))

    def exact_minimizer(self):
        return self.targets.mean(axis=0)


def quadratic_objective(n, p, seed=0):
    rng = np.random.default_rng(seed)
    return QuadraticObjective(rng.standard_normal((n, p)))
