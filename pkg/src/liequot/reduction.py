"""Pointwise linear algebra of Kähler reduction.

All routines accept either float arrays or object arrays of ``Fraction``.
Object arrays are handled exactly (Gauss-Jordan pivoting), float arrays go
through LAPACK. Subspaces are column-spanned: ``basis`` has shape
``(ambient_dim, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from ._exact import ONE, ZERO, inverse, rref, to_fraction
from .errors import DegeneratePointError, DomainError

FLOAT_RANK_TOL = 1e-10


def is_exact(a: np.ndarray) -> bool:
    return np.asarray(a).dtype == object


def exact_array(a) -> np.ndarray:
    """Object array of ``Fraction`` built from nested sequences."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def identity(n: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.eye(n)
    out = np.full((n, n), ZERO, dtype=object)
    for i in range(n):
        out[i, i] = ONE
    return out


def zeros(shape, exact: bool) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object) if exact else np.zeros(shape)


def _inv(a: np.ndarray) -> np.ndarray:
    if is_exact(a):
        inv = inverse(a.tolist())
        if inv is None:
            raise DomainError("singular matrix")
        return np.array(inv, dtype=object).reshape(a.shape)
    return np.linalg.inv(a)


def matrix_rank(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if is_exact(a):
        return len(rref(a.tolist())[0])
    return int(np.linalg.matrix_rank(a, tol=FLOAT_RANK_TOL * max(1.0, np.abs(a).max())))


def independent_columns(m: np.ndarray) -> np.ndarray:
    """A column basis of the span of ``m``'s columns."""
    m = np.asarray(m)
    n = m.shape[0]
    if m.size == 0 or m.shape[1] == 0:
        return zeros((n, 0), is_exact(m))
    if is_exact(m):
        _, piv = rref(m.tolist(), m.shape[1])
        return m[:, piv]
    scale = max(1.0, np.abs(m).max())
    _, r, perm = scipy.linalg.qr(m, pivoting=True, mode="economic")
    diag = np.abs(np.diag(r))
    k = int((diag > FLOAT_RANK_TOL * scale).sum())
    return m[:, np.sort(perm[:k])]


def max_abs(a: np.ndarray):
    a = np.asarray(a)
    if a.size == 0:
        return ZERO if is_exact(a) else 0.0
    if is_exact(a):
        return max(abs(x) for x in a.flat)
    return float(np.abs(a).max())


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis)
        if b.ndim == 1:
            b = b.reshape(self.ambient_dim, -1) if b.size else zeros((self.ambient_dim, 0), is_exact(b))
        if b.shape[0] != self.ambient_dim:
            raise DomainError("basis vectors have the wrong length")
        if matrix_rank(b) != b.shape[1]:
            raise DomainError("subspace basis is linearly dependent")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def span(cls, vectors: np.ndarray) -> "Subspace":
        """Subspace spanned by the columns, dropping dependent ones."""
        vectors = np.asarray(vectors)
        return cls(vectors.shape[0], independent_columns(vectors))

    @classmethod
    def zero(cls, n: int, exact: bool = False) -> "Subspace":
        return cls(n, zeros((n, 0), exact))

    @classmethod
    def whole(cls, n: int, exact: bool = False) -> "Subspace":
        return cls(n, identity(n, exact))


def orthogonal_projection(g: np.ndarray, target: Subspace) -> np.ndarray:
    """The g-orthogonal projector onto ``target``: ``B (B^T g B)^{-1} B^T g``."""
    g = np.asarray(g)
    n = g.shape[0]
    exact = is_exact(g)
    b = target.basis
    if target.dim == 0:
        return zeros((n, n), exact)
    if exact:
        gram = b.T @ g @ b
        return b @ _inv(gram) @ b.T @ g
    # float: with g = L L^T the projector is Euclidean in y = L^T x
    lt = np.linalg.cholesky(g).T
    q, _ = np.linalg.qr(lt @ b)
    return np.linalg.solve(lt, q @ (q.T @ lt))


def complement_projection(g: np.ndarray, target: Subspace) -> np.ndarray:
    n = np.asarray(g).shape[0]
    return identity(n, is_exact(g)) - orthogonal_projection(g, target)


def sum_subspace(v: Subspace, w: Subspace) -> Subspace:
    return Subspace.span(np.concatenate([v.basis, w.basis], axis=1))


def staged_projector(g: np.ndarray, v: Subspace, w: Subspace) -> np.ndarray:
    """``prj_2 ∘ prj_1``: first off ``W``, then off the image of ``V``."""
    prj1 = complement_projection(g, w)
    image = Subspace.span(prj1 @ v.basis)
    prj2 = complement_projection(g, image)
    return prj2 @ prj1


def projection_composition_check(g: np.ndarray, v: Subspace, w: Subspace):
    """Largest entry of ``prj_{(V+W)^⊥} - prj_2 ∘ prj_1``.

    Exactly zero in exact mode; a float otherwise.
    """
    direct = complement_projection(g, sum_subspace(v, w))
    return max_abs(direct - staged_projector(g, v, w))


@dataclass(frozen=True)
class CompatibleTriple:
    """Metric ``g``, complex structure ``J`` and symplectic form ``omega``.

    Forms are matrices: ``g(u, v) = u @ g @ v`` and ``g(u, v) = omega(u, J v)``,
    so ``omega = -g J``.
    """

    g: np.ndarray
    J: np.ndarray
    omega: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.g)

    @classmethod
    def from_metric(cls, g: np.ndarray, J: np.ndarray) -> "CompatibleTriple":
        return cls(g, J, -(g @ J))

    def defects(self) -> dict:
        """Deviations from the defining identities (all zero when compatible)."""
        n = self.dim
        ident = identity(n, self.exact)
        return {
            "J2": max_abs(self.J @ self.J + ident),
            "g_vs_omega": max_abs(self.g - self.omega @ self.J),
            "omega_antisym": max_abs(self.omega + self.omega.T),
            "g_sym": max_abs(self.g - self.g.T),
        }

    def is_positive_definite(self) -> bool:
        if self.exact:
            # Sylvester: leading principal minors
            from ._exact import det

            m = self.g.tolist()
            return all(det([row[:k] for row in m[:k]]) > 0 for k in range(1, self.dim + 1))
        return bool(np.all(np.linalg.eigvalsh((self.g + self.g.T) / 2) > 0))

    def validate(self, tol: float = 1e-10) -> None:
        d = self.defects()
        bad = {k: v for k, v in d.items() if (v != 0 if self.exact else v > tol)}
        if bad or not self.is_positive_definite():
            raise DomainError(f"not a compatible triple: {bad or 'g not positive-definite'}")


def standard_complex_structure(n: int, exact: bool = False) -> np.ndarray:
    """``J0`` on R^{2n} with coordinates ``(x_1..x_n, y_1..y_n)``: ``J0 x_k = y_k``."""
    j = zeros((2 * n, 2 * n), exact)
    one = ONE if exact else 1.0
    for k in range(n):
        j[n + k, k] = one
        j[k, n + k] = -one
    return j


def standard_triple(n: int, exact: bool = False) -> CompatibleTriple:
    return CompatibleTriple.from_metric(identity(2 * n, exact), standard_complex_structure(n, exact))


def random_rational_matrix(rng, rows: int, cols: int, bound: int = 5, den: int = 4) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    for idx in np.ndindex(rows, cols):
        out[idx] = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, den + 1)))
    return out


def random_invertible(rng, n: int, exact: bool = False, max_cond: float = 100.0) -> np.ndarray:
    """Random invertible matrix; float samples are rejected above ``max_cond``.

    The metric built from ``A`` has condition number ``cond(A)**2``, which
    sets the float error of every projector derived from it.
    """
    while True:
        a = random_rational_matrix(rng, n, n) if exact else rng.standard_normal((n, n)) + 2 * np.eye(n)
        if matrix_rank(a) == n:
            if not exact and np.linalg.cond(a) > max_cond:
                continue
            return a


def random_compatible_triple(rng, n: int, exact: bool = False) -> tuple[CompatibleTriple, np.ndarray]:
    """Conjugate the standard structure on R^{2n} by a random matrix ``A``.

    Returns the triple and ``A``; ``A`` maps standard-isotropic subspaces to
    isotropic ones for the new form.
    """
    a = random_invertible(rng, 2 * n, exact)
    ainv = _inv(a)
    j = a @ standard_complex_structure(n, exact) @ ainv
    g = ainv.T @ ainv
    return CompatibleTriple.from_metric(g, j), a


def random_subspace(rng, ambient: int, k: int, exact: bool = False) -> Subspace:
    if k == 0:
        return Subspace.zero(ambient, exact)
    while True:
        b = random_rational_matrix(rng, ambient, k) if exact else rng.standard_normal((ambient, k))
        if matrix_rank(b) == k:
            return Subspace(ambient, b)


def random_isotropic_subspace(rng, frame: np.ndarray, k: int, exact: bool = False) -> Subspace:
    """Isotropic ``k``-plane: the image under ``frame`` of a plane in x-space."""
    n2 = frame.shape[0]
    n = n2 // 2
    if k > n:
        raise DomainError("isotropic subspaces have dimension at most half the ambient")
    base = random_subspace(rng, n, k, exact).basis
    full = zeros((n2, k), exact)
    full[:n, :] = base
    return Subspace(n2, frame @ full)


@dataclass(frozen=True)
class ReducedPoint:
    """Reduced structure on ``Q``, expressed in the coordinates of ``basis``."""

    basis: np.ndarray
    triple: CompatibleTriple

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _solve_in_basis(q: np.ndarray, targets: np.ndarray) -> np.ndarray | None:
    """Coordinates ``c`` with ``q c = targets`` or ``None`` if not in the span."""
    if is_exact(q):
        n, k = q.shape
        aug = np.concatenate([q, targets], axis=1).tolist()
        red, piv = rref(aug, k + targets.shape[1])
        if any(p >= k for p in piv):
            return None
        out = np.full((k, targets.shape[1]), ZERO, dtype=object)
        for row, p in zip(red, piv):
            out[p, :] = row[k:]
        return out
    c, *_ = np.linalg.lstsq(q, targets, rcond=None)
    resid = np.abs(q @ c - targets).max() if targets.size else 0.0
    if resid > 1e-8 * max(1.0, np.abs(targets).max() if targets.size else 1.0):
        return None
    return c


def level_tangent_for(triple: CompatibleTriple, group_dirs: Subspace) -> Subspace:
    """``(J·group_dirs)^⊥``: the kernel of the moment-map differential."""
    n = triple.dim
    jb = triple.J @ group_dirs.basis
    return Subspace.span(complement_projection(triple.g, Subspace.span(jb)))


def reduce_point(
    triple: CompatibleTriple,
    level_tangent: Subspace | None,
    group_dirs: Subspace,
) -> ReducedPoint:
    """Restrict the triple to ``Q = group_dirs^⊥ ∩ level_tangent``.

    ``level_tangent=None`` uses the moment-map kernel ``(J·group_dirs)^⊥``.
    Raises :class:`DegeneratePointError` when the orbit directions are not
    inside the level tangent, when ``J·group_dirs`` meets it, or when the
    resulting ``Q`` is not a complex subspace.
    """
    if level_tangent is None:
        level_tangent = level_tangent_for(triple, group_dirs)
    lt, gd = level_tangent.basis, group_dirs.basis
    k = group_dirs.dim
    if matrix_rank(np.concatenate([lt, gd], axis=1)) != level_tangent.dim:
        raise DegeneratePointError("orbit directions are not tangent to the level set")
    jg = triple.J @ gd
    if matrix_rank(np.concatenate([lt, jg], axis=1)) != level_tangent.dim + k:
        raise DegeneratePointError("J·(orbit directions) meets the level tangent; action not locally free")
    q = independent_columns(complement_projection(triple.g, group_dirs) @ lt)
    if q.shape[1] != level_tangent.dim - k:
        raise DegeneratePointError("unexpected dimension of the reduced tangent space")
    jq = _solve_in_basis(q, triple.J @ q)
    if jq is None:
        raise DegeneratePointError("reduced tangent space is not J-invariant")
    gq = q.T @ triple.g @ q
    oq = q.T @ triple.omega @ q
    return ReducedPoint(q, CompatibleTriple(gq, jq, oq))


@dataclass(frozen=True)
class StagesNorms:
    """Squared g-norms of the direct and the two staged projections of ``v``."""

    direct_sq: object
    staged_sq: object
    swapped_sq: object

    @property
    def direct(self) -> float:
        return math.sqrt(float(self.direct_sq))

    @property
    def staged(self) -> float:
        return math.sqrt(float(self.staged_sq))

    @property
    def swapped(self) -> float:
        return math.sqrt(float(self.swapped_sq))


def _norm_sq(g, x):
    return (x @ g @ x) if not is_exact(g) else sum(
        (x[i] * g[i, j] * x[j] for i in range(len(x)) for j in range(len(x))), ZERO
    )


def stages_norm_check(triple: CompatibleTriple, w: Subspace, v: Subspace, vec: np.ndarray) -> StagesNorms:
    """Norm of ``vec`` off ``V+W`` in one step and in two stages, both orders."""
    g = triple.g
    vec = np.asarray(vec)
    direct = complement_projection(g, sum_subspace(v, w)) @ vec
    staged = staged_projector(g, v, w) @ vec
    swapped = staged_projector(g, w, v) @ vec
    return StagesNorms(_norm_sq(g, direct), _norm_sq(g, staged), _norm_sq(g, swapped))
