"""Type-A matrix model: su(n), coadjoint orbits and the embedding into E.

Conventions (pinned by tests):

* ``t*`` uses the frame coordinates of :mod:`liequot.lie_core`; a diagonal
  element ``i*diag(h)`` of ``su(n)`` pairs with ``lam`` as ``sum lam_k h_k``.
* For ``alpha = e_i - e_j`` (``i < j``): ``X_alpha = E_ij``,
  ``X_{-alpha} = -E_ji``, ``U = E_ij - E_ji``, ``V = i(E_ij + E_ji)``.
* The Hermitian metric is linear in the first slot, ``omega_E = -Im(.,.)``
  and ``X in k`` acts on ``E`` by ``2*pi*rho(X)``. Together these give the
  moment map ``-pi |u|^2 varpi_p`` on the highest-weight line of ``V_p``.
* ``V_{varpi_p} = Lambda^p C^n`` with highest weight vector
  ``e_1 ^ ... ^ e_p``.

Vectors of ``E`` are stored as :class:`EVector`: blocks ``(c_p, w_p)`` with
``v = pi^{-1/2} sum_p sqrt(c_p) w_p``, so every identity involving ``pi`` and
the square roots stays exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from ._exact import ONE, QI, ZERO, det, inverse, to_fraction
from .errors import DomainError
from .lie_core import (
    Face,
    RootSystem,
    build_root_system,
    decomposition_dims,
    face_of,
    face_root_sets,
    faces,
    positive_orbit_roots,
)

FLOAT_TOL = 1e-9


def _is_exact(m) -> bool:
    return np.asarray(m).dtype == object


def _zero_like(exact: bool):
    return QI(0) if exact else 0j


def _qi_array(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, QI) else QI._lift(x) if not isinstance(x, (int, Fraction)) else QI(x)
    return out


def conj_transpose(m: np.ndarray) -> np.ndarray:
    if _is_exact(m):
        out = np.empty((m.shape[1], m.shape[0]), dtype=object)
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                out[j, i] = m[i, j].conjugate()
        return out
    return m.conj().T


def hermitian_inner(x: np.ndarray, y: np.ndarray):
    """``(x, y) = sum x_i conj(y_i)``: linear in the first slot."""
    if _is_exact(x) or _is_exact(y):
        total = QI(0)
        for a, b in zip(x, y):
            total = total + QI._lift(a) * QI._lift(b).conjugate()
        return total
    return complex(np.sum(x * np.conj(y)))


def _re(z):
    return z.re if isinstance(z, QI) else z.real


def _im(z):
    return z.im if isinstance(z, QI) else z.imag


def unit_matrix(n: int, i: int, j: int, exact: bool = True) -> np.ndarray:
    m = np.empty((n, n), dtype=object) if exact else np.zeros((n, n), dtype=complex)
    if exact:
        m.fill(QI(0))
        m[i, j] = QI(1)
    else:
        m[i, j] = 1.0
    return m


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


@dataclass(frozen=True)
class MatrixLieRealization:
    """``su(n)`` with Chevalley-type data attached to the type-A root system."""

    n: int

    @cached_property
    def rs(self) -> RootSystem:
        return build_root_system("A", self.n - 1)

    @staticmethod
    def root_indices(alpha: Sequence) -> tuple[int, int]:
        """``(i, j)`` with ``alpha = e_i - e_j``."""
        i = next((k for k, a in enumerate(alpha) if a == 1), None)
        j = next((k for k, a in enumerate(alpha) if a == -1), None)
        if i is None or j is None or sum(1 for a in alpha if a != 0) != 2:
            raise DomainError(f"{tuple(alpha)} is not a type-A root")
        return i, j

    def x_root(self, alpha: Sequence, exact: bool = True) -> np.ndarray:
        """Root vector ``X_alpha`` (works for negative roots too)."""
        i, j = self.root_indices(alpha)
        if i < j:
            return unit_matrix(self.n, i, j, exact)
        return -unit_matrix(self.n, i, j, exact)

    def theta(self, x: np.ndarray) -> np.ndarray:
        """Cartan involution ``X -> -X^dagger``."""
        return -conj_transpose(x)

    def coroot_element(self, alpha: Sequence, exact: bool = True) -> np.ndarray:
        """``alpha^vee`` as the element ``i*diag(e_i - e_j)`` of ``t``."""
        i, j = self.root_indices(alpha)
        m = unit_matrix(self.n, i, i, exact) - unit_matrix(self.n, j, j, exact)
        return (QI(0, 1) if exact else 1j) * m

    def h_simple(self, k: int, exact: bool = True) -> np.ndarray:
        """``H_k = -i alpha_k^vee``."""
        return (QI(0, -1) if exact else -1j) * self.coroot_element(self.rs.simple_roots[k], exact)

    def u_root(self, alpha: Sequence, exact: bool = True) -> np.ndarray:
        x = self.x_root(alpha, exact)
        return x + self.theta(x)

    def v_root(self, alpha: Sequence, exact: bool = True) -> np.ndarray:
        x = self.x_root(alpha, exact)
        i_ = QI(0, 1) if exact else 1j
        return i_ * x - i_ * self.theta(x)

    def su_basis(self, exact: bool = False) -> list[np.ndarray]:
        """Real basis of ``su(n)``: ``i(E_jj - E_{j+1,j+1})``, ``E_ij - E_ji``, ``i(E_ij + E_ji)``."""
        n = self.n
        i_ = QI(0, 1) if exact else 1j
        out = []
        for j in range(n - 1):
            out.append(i_ * (unit_matrix(n, j, j, exact) - unit_matrix(n, j + 1, j + 1, exact)))
        for i in range(n):
            for j in range(i + 1, n):
                out.append(unit_matrix(n, i, j, exact) - unit_matrix(n, j, i, exact))
                out.append(i_ * (unit_matrix(n, i, j, exact) + unit_matrix(n, j, i, exact)))
        return out

    def check_in_algebra(self, x: np.ndarray) -> None:
        x = np.asarray(x)
        if x.shape != (self.n, self.n):
            raise DomainError("wrong matrix size")
        if _is_exact(x):
            ok = all(x[i, j] + x[j, i].conjugate() == 0 for i in range(self.n) for j in range(self.n))
            ok = ok and sum((x[i, i] for i in range(self.n)), QI(0)) == 0
        else:
            ok = np.abs(x + x.conj().T).max() < FLOAT_TOL and abs(np.trace(x)) < FLOAT_TOL
        if not ok:
            raise DomainError("matrix is not anti-Hermitian and traceless")

    def pair(self, lam: Sequence, x: np.ndarray):
        """``<lam, X> = sum_k lam_k Im(X_kk)``."""
        if _is_exact(x):
            return sum((to_fraction(lam[k]) * x[k, k].im for k in range(self.n)), ZERO)
        return float(sum(float(lam[k]) * x[k, k].imag for k in range(self.n)))


@lru_cache(maxsize=None)
def realization(n: int) -> MatrixLieRealization:
    return MatrixLieRealization(n)


def kks_form(real: MatrixLieRealization, lam: Sequence, x: np.ndarray, y: np.ndarray):
    """Kirillov-Kostant-Souriau pairing ``<lam, [X, Y]>``."""
    real.check_in_algebra(x)
    real.check_in_algebra(y)
    return real.pair(lam, bracket(x, y))


def _orbit_roots_checked(rs: RootSystem, lam: Sequence, roots: Sequence) -> None:
    allowed = set(positive_orbit_roots(rs, face_of(rs, lam)))
    for a in roots:
        if tuple(a) not in allowed:
            raise DomainError(f"{tuple(a)} is not an orbit direction at this lambda")


@lru_cache(maxsize=None)
def _bracket_diagonal(n: int, alpha: tuple, beta: tuple, kind: str) -> tuple[Fraction, ...]:
    """``Im`` of the diagonal of the bracket behind each metric entry (lambda-free)."""
    real = realization(n)
    ua, va = real.u_root(alpha), real.v_root(alpha)
    ub, vb = real.u_root(beta), real.v_root(beta)
    if kind == "UU":
        m, sign = bracket(ua, vb), 1
    elif kind == "VV":
        m, sign = bracket(ub, va), 1
    elif kind == "UV":
        m, sign = bracket(ua, ub), -1
    else:
        m, sign = bracket(ub, ua), -1
    return tuple(sign * m[k, k].im for k in range(n))


def _metric_entry(rs: RootSystem, lam: tuple, alpha: tuple, beta: tuple, kind: str) -> Fraction:
    diag = _bracket_diagonal(rs.rank + 1, alpha, beta, kind)
    return sum((a * b for a, b in zip(lam, diag)), ZERO)


def orbit_metric(rs: RootSystem, lam: Sequence, alpha: Sequence, beta: Sequence, kind: str):
    """Kähler metric of the orbit on the ``U``/``V`` frame, from brackets.

    ``g(A, B) = omega(A, J B)`` with ``J U = V`` and ``J V = -U`` on the frame,
    and ``omega`` the orbit's KKS form.
    """
    if rs.series != "A":
        raise DomainError("orbit metrics are only modelled in type A")
    lam = tuple(to_fraction(x) for x in lam)
    alpha, beta = tuple(alpha), tuple(beta)
    _orbit_roots_checked(rs, lam, [alpha, beta])
    kind = kind.upper()
    if kind not in ("UU", "VV", "UV", "VU"):
        raise DomainError(f"unknown frame kind {kind!r}")
    return _metric_entry(rs, lam, alpha, beta, kind)


def orbit_frame(rs: RootSystem, lam: Sequence) -> list[tuple[str, tuple]]:
    """Ordered frame ``[(U, a_1), (V, a_1), (U, a_2), ...]`` over ``R_+ \\ R(sigma)``."""
    out = []
    for a in positive_orbit_roots(rs, face_of(rs, lam)):
        out.append(("U", a))
        out.append(("V", a))
    return out


def orbit_metric_matrix(rs: RootSystem, lam: Sequence) -> list[list[Fraction]]:
    if rs.series != "A":
        raise DomainError("orbit metrics are only modelled in type A")
    lam = tuple(to_fraction(x) for x in lam)
    frame = orbit_frame(rs, lam)
    return [[_metric_entry(rs, lam, a, b, ka + kb) for kb, b in frame] for ka, a in frame]


def predicted_orbit_gram(rs: RootSystem, lam: Sequence) -> list[list[Fraction]]:
    """Block diagonal ``2 <lam, alpha^vee>`` on each ``(U_alpha, V_alpha)`` pair."""
    frame = orbit_frame(rs, lam)
    return [
        [2 * rs.pairing(lam, a) if (a == b and ka == kb) else ZERO for kb, b in frame]
        for ka, a in frame
    ]


def dual_orbit_label(rs: RootSystem, lam: Sequence) -> tuple[Fraction, ...]:
    """``-w_0 lam``: the label of the orbit with the opposite symplectic form."""
    from .lie_core import WeylGroup

    w0 = rs.longest_element
    return tuple(-x for x in WeylGroup.act(w0, tuple(to_fraction(x) for x in lam)))


# ---------------------------------------------------------------------------
# exterior powers


@lru_cache(maxsize=None)
def wedge_basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), p))


def wedge_generator(x: np.ndarray, p: int) -> np.ndarray:
    """Action of ``x`` on ``Lambda^p C^n`` as a derivation."""
    n = x.shape[0]
    exact = _is_exact(x)
    basis = wedge_basis(n, p)
    index = {b: k for k, b in enumerate(basis)}
    d = len(basis)
    m = np.empty((d, d), dtype=object) if exact else np.zeros((d, d), dtype=complex)
    if exact:
        m.fill(QI(0))
    for col, b in enumerate(basis):
        for pos, j in enumerate(b):
            rest = b[:pos] + b[pos + 1:]
            for a in range(n):
                coef = x[a, j]
                if coef == 0 or a in rest:
                    continue
                new = list(b)
                new[pos] = a
                # sign of sorting permutation
                sign = 1
                for u in range(p):
                    for v in range(u + 1, p):
                        if new[u] > new[v]:
                            sign = -sign
                row = index[tuple(sorted(new))]
                m[row, col] = m[row, col] + (coef if sign > 0 else -coef)
    return m


def compound_matrix(k: np.ndarray, p: int) -> np.ndarray:
    """Action of the group element ``k`` on ``Lambda^p C^n`` (p x p minors)."""
    n = k.shape[0]
    exact = _is_exact(k)
    basis = wedge_basis(n, p)
    d = len(basis)
    m = np.empty((d, d), dtype=object) if exact else np.zeros((d, d), dtype=complex)
    for r, rows in enumerate(basis):
        for c, cols in enumerate(basis):
            sub = k[np.ix_(rows, cols)]
            m[r, c] = det(sub.tolist()) if exact else np.linalg.det(sub)
    return m


def highest_weight_vector(n: int, p: int, exact: bool = True) -> np.ndarray:
    d = len(wedge_basis(n, p))
    v = np.empty(d, dtype=object) if exact else np.zeros(d, dtype=complex)
    if exact:
        v.fill(QI(0))
        v[0] = QI(1)
    else:
        v[0] = 1.0
    return v


@dataclass(frozen=True)
class FundamentalRepSpace:
    """``E = sum_p Lambda^p C^n`` with orthonormal wedge basis."""

    n: int

    @property
    def real(self) -> MatrixLieRealization:
        return realization(self.n)

    @property
    def rank(self) -> int:
        return self.n - 1

    def dims(self) -> list[int]:
        return [len(wedge_basis(self.n, p)) for p in range(1, self.n)]

    def generator(self, p: int, x: np.ndarray) -> np.ndarray:
        return wedge_generator(x, p)

    def highest_vector(self, p: int, exact: bool = True) -> np.ndarray:
        return highest_weight_vector(self.n, p, exact)


@lru_cache(maxsize=None)
def fundamental_rep_space(n: int) -> FundamentalRepSpace:
    return FundamentalRepSpace(n)


@dataclass(frozen=True)
class EVector:
    """``pi^{-1/2} sum_p sqrt(c_p) w_p`` with ``w_p`` in ``Lambda^p C^n``."""

    coeffs: tuple
    blocks: tuple

    def norm_sq_times_pi(self):
        """``pi * ||v||^2 = sum_p c_p ||w_p||^2`` (exact for exact input)."""
        return sum((c * _re(hermitian_inner(w, w)) for c, w in zip(self.coeffs, self.blocks)), 0)

    def to_complex(self) -> np.ndarray:
        parts = []
        for c, w in zip(self.coeffs, self.blocks):
            wf = np.array([complex(z) for z in w]) if _is_exact(w) else np.asarray(w, dtype=complex)
            parts.append(math.sqrt(float(c) / math.pi) * wf)
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    @classmethod
    def zero(cls, frs: FundamentalRepSpace, exact: bool = True) -> "EVector":
        blocks = []
        for p in range(1, frs.n):
            w = highest_weight_vector(frs.n, p, exact)
            blocks.append(w * 0 if not exact else np.array([QI(0)] * len(w), dtype=object))
        return cls(tuple(ZERO for _ in blocks), tuple(blocks))


def _check_dominant(rs: RootSystem, lam) -> tuple[Fraction, ...]:
    lam = tuple(to_fraction(x) for x in lam)
    if len(lam) != rs.frame_dim or not rs.in_weight_space(lam):
        raise DomainError("lambda is not a vector of t*")
    pairs = rs.simple_pairings(lam)
    if any(x < 0 for x in pairs):
        raise DomainError("lambda is outside the positive chamber")
    return pairs


def embed_F(frs: FundamentalRepSpace, k: np.ndarray, lam: Sequence) -> EVector:
    """``F(k, lam) = pi^{-1/2} sum_p sqrt(<lam, alpha_p^vee>) k.v_p``."""
    pairs = _check_dominant(frs.real.rs, lam)
    k = np.asarray(k)
    exact = _is_exact(k)
    blocks = []
    for p in range(1, frs.n):
        # k.v_p is the first column of the compound matrix
        basis = wedge_basis(frs.n, p)
        rows = basis
        cols = basis[0]
        w = np.empty(len(rows), dtype=object) if exact else np.zeros(len(rows), dtype=complex)
        for r, rr in enumerate(rows):
            sub = k[np.ix_(rr, cols)]
            w[r] = det(sub.tolist()) if exact else np.linalg.det(sub)
        blocks.append(w)
    coeffs = tuple(pairs) if exact else tuple(float(c) for c in pairs)
    return EVector(coeffs, tuple(blocks))


def mu_E(frs: FundamentalRepSpace, v: EVector, x: np.ndarray):
    """``<mu_E(v), X> = 1/2 omega_E(X.v, v) = -sum_p c_p Im(rho_p(X) w_p, w_p)``."""
    total = 0
    for p, (c, w) in enumerate(zip(v.coeffs, v.blocks), start=1):
        if c == 0:
            continue
        xw = wedge_generator(np.asarray(x), p) @ w
        total = total - c * _im(hermitian_inner(xw, w))
    return total


def mu_E_K(frs: FundamentalRepSpace, v: EVector, exact: bool | None = None) -> list:
    """``mu_E(v)`` as its values on :meth:`MatrixLieRealization.su_basis`."""
    if exact is None:
        exact = bool(v.blocks) and _is_exact(v.blocks[0])
    return [mu_E(frs, v, x) for x in frs.real.su_basis(exact)]


def mu_E_T(frs: FundamentalRepSpace, v: EVector) -> tuple:
    """Moment map of the torus acting on ``V_p`` with weight ``-varpi_p``.

    Equals ``sum_p c_p ||w_p||^2 varpi_p``.
    """
    rs = frs.real.rs
    out = [0] * rs.frame_dim
    for p, (c, w) in enumerate(zip(v.coeffs, v.blocks)):
        s = c * _re(hermitian_inner(w, w))
        out = [a + s * b for a, b in zip(out, rs.fundamental_weights[p])]
    return tuple(out)


def coadjoint_values(real: MatrixLieRealization, k: np.ndarray, lam: Sequence, exact: bool | None = None) -> list:
    """``k.lam`` on the ``su(n)`` basis: ``<k.lam, X> = <lam, k^dagger X k>``."""
    if exact is None:
        exact = _is_exact(k)
    kh = conj_transpose(k)
    lam_c = tuple(to_fraction(x) for x in lam) if exact else tuple(float(x) for x in lam)
    return [real.pair(lam_c, kh @ x @ k) for x in real.su_basis(exact)]


@dataclass(frozen=True)
class MomentCheck:
    t_moment: tuple
    k_moment: list
    expected_t: tuple
    expected_k: list

    def deviation(self) -> float:
        dt = max((abs(float(a) - float(b)) for a, b in zip(self.t_moment, self.expected_t)), default=0.0)
        dk = max((abs(float(a) - float(b)) for a, b in zip(self.k_moment, self.expected_k)), default=0.0)
        return max(dt, dk)

    def exact_match(self) -> bool:
        return tuple(self.t_moment) == tuple(self.expected_t) and list(self.k_moment) == list(self.expected_k)


def implosion_moment_check(frs: FundamentalRepSpace, k: np.ndarray, lam: Sequence) -> MomentCheck:
    """Torus and ``K`` moments of ``F(k, lam)`` against ``lam`` and ``-k.lam``."""
    k = np.asarray(k)
    exact = _is_exact(k)
    v = embed_F(frs, k, lam)
    t_mom = mu_E_T(frs, v)
    k_mom = mu_E_K(frs, v, exact)
    lam_c = tuple(to_fraction(x) for x in lam) if exact else tuple(float(x) for x in lam)
    expected_k = [-x for x in coadjoint_values(frs.real, k, lam, exact)]
    return MomentCheck(t_mom, k_mom, lam_c, expected_k)


@lru_cache(maxsize=None)
def _frame_products(n: int, frame: tuple) -> tuple:
    """``Re(rho_p(A) v_p, rho_p(B) v_p)`` for every ``p`` and frame pair.

    Independent of ``lam``, so cached per frame.
    """
    real = realization(n)
    out = []
    for p in range(1, n):
        v = highest_weight_vector(n, p, True)
        vecs = []
        for kind, a in frame:
            x = real.u_root(a) if kind == "U" else real.v_root(a)
            vecs.append(wedge_generator(x, p) @ v)
        out.append(tuple(tuple(_re(hermitian_inner(x, y)) for y in vecs) for x in vecs))
    return tuple(out)


def implosion_pullback_gram(frs: FundamentalRepSpace, lam: Sequence, face: Face | None = None) -> list[list[Fraction]]:
    """Pullback of ``Re(.,.)_E`` along ``dF`` at ``([e], lam)`` on the orbit frame.

    The tangent action on ``E`` is normalised as ``sqrt(2 pi) rho``, so the
    entry is ``(1/pi) sum_p <lam, alpha_p^vee> * 2 pi * Re(rho_p(A) v_p, rho_p(B) v_p)``.
    """
    rs = frs.real.rs
    lam = tuple(to_fraction(x) for x in lam)
    actual = face_of(rs, lam)
    if face is not None and face != actual:
        raise DomainError("lambda does not lie in the given face")
    pairs = rs.simple_pairings(lam)
    frame = tuple(orbit_frame(rs, lam))
    prods = _frame_products(frs.n, frame)
    m = len(frame)
    gram = [[ZERO] * m for _ in range(m)]
    for c, table in zip(pairs, prods):
        if c == 0:
            continue
        for a in range(m):
            for b in range(m):
                gram[a][b] += 2 * c * table[a][b]
    return gram


def strata_table(rs: RootSystem) -> list[dict]:
    """One record per face: ``dim K/[K_sigma,K_sigma] + dim sigma``."""
    out = []
    for f in faces(rs):
        semisimple, rest = decomposition_dims(rs, f)
        out.append(
            {
                "vanishing_set": f.sorted_set(),
                "face_dim": f.dim,
                "semisimple_dim": semisimple,
                "quotient_dim": rest,
                "stratum_dim": rest + f.dim,
            }
        )
    return out


# ---------------------------------------------------------------------------
# special unitary samples


def random_su_float(n: int, rng) -> np.ndarray:
    from scipy.stats import unitary_group

    u = unitary_group.rvs(n, random_state=rng)
    d = np.linalg.det(u)
    u[:, 0] = u[:, 0] / d
    return u


def random_su_exact(n: int, rng, bound: int = 3) -> np.ndarray:
    """Exact special unitary matrix over ``Q(i)`` via the Cayley transform."""
    a = np.empty((n, n), dtype=object)
    for i in range(n):
        a[i, i] = QI(0, Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4))))
        for j in range(i + 1, n):
            z = QI(Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4))),
                   Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4))))
            a[i, j] = z
            a[j, i] = -z.conjugate()
    ident = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            ident[i, j] = QI(1 if i == j else 0)
    plus = (ident + a).tolist()
    inv = inverse(plus)
    k = (ident - a) @ np.array(inv, dtype=object)
    d = det(k.tolist())
    k[:, 0] = k[:, 0] * d.conjugate()
    return k


def weyl_permutation_matrix(perm: Sequence[int], exact: bool = False) -> np.ndarray:
    """Special unitary lift of a permutation (sign fixed on the first column)."""
    n = len(perm)
    m = np.zeros((n, n), dtype=complex)
    for j, i in enumerate(perm):
        m[i, j] = 1.0
    d = np.linalg.det(m)
    m[:, 0] *= d.conjugate()
    if exact:
        return _qi_array([[QI(Fraction(int(round(z.real))), Fraction(int(round(z.imag)))) for z in row] for row in m])
    return m
