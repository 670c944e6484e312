"""Exact scalar types, linear algebra over fields, and an exact simplex solver.

Everything here works on plain Python lists so the same routines run over
``Fraction`` and over the Gaussian rationals :class:`QI`.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Convert ``x`` to an exact rational.

    Strings may be ``"p/q"``, ``"p"`` or a decimal literal. Floats are read
    through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, numbers.Real):
        if not math.isfinite(float(x)):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(float(x)))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def fraction_vector(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(x) for x in xs)


def fmt(q: Fraction) -> str:
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_vector(v: Iterable) -> list[str]:
    return [fmt(x) for x in v]


class QI:
    """Gaussian rational ``re + i*im`` with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, QI):
            return other
        if isinstance(other, (numbers.Rational, Fraction)):
            return QI(other)
        if isinstance(other, complex):
            return QI(Fraction(repr(other.real)), Fraction(repr(other.imag)))
        return NotImplemented

    def __add__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        n = self * o.conjugate()
        return QI(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = QI._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return QI(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"


I = QI(0, 1)


# ---------------------------------------------------------------------------
# linear algebra over an exact field (lists of rows)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``."""
    m = [[Fraction(int(x)) if isinstance(x, numbers.Integral) else x for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : rows @ x = 0}`` as a list of vectors."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list | None:
    """Solve the square system ``a x = b``; ``None`` when singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> list[list] | None:
    n = len(a)
    one = ONE
    zero = ZERO
    if n and isinstance(a[0][0], QI):
        one, zero = QI(1), QI(0)
    aug = [list(a[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        return None
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]):
    m = [[Fraction(int(x)) if isinstance(x, numbers.Integral) else x for x in r] for r in a]
    n = len(m)
    if n == 0:
        return ONE
    d = ONE if not isinstance(m[0][0], QI) else QI(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return d * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        p = m[c][c]
        d = d * p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in bt] for row in a]


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), ZERO)


def primitive_row(row: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational row to coprime integers (sign preserved)."""
    den = 1
    for x in row:
        den = math.lcm(den, to_fraction(x).denominator)
    ints = [int(to_fraction(x) * den) for x in row]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for x in values:
        den = math.lcm(den, x.denominator)
    return den


def object_array(rows) -> np.ndarray:
    """Object-dtype numpy array that keeps exact scalars."""
    arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            arr[i, j] = x
    return arr


# ---------------------------------------------------------------------------
# exact linear programming


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _int_pivot(tab, basis, row, col, det):
    """Fraction-free pivot: every entry stays ``det`` times its true value."""
    p = tab[row][col]
    prow = tab[row]
    for i in range(len(tab)):
        if i == row:
            continue
        t = tab[i]
        f = t[col]
        if f == 0:
            tab[i] = [(a * p) // det for a in t]
        else:
            tab[i] = [(a * p - f * b) // det for a, b in zip(t, prow)]
    basis[row] = col
    return p


def _int_simplex(tab, basis, ncols, det):
    """Bland's rule on an integer tableau; the objective is the last row."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return "optimal", det
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                num = tab[i][-1]
                if best is None:
                    best = i
                    continue
                bn, ba = tab[best][-1], tab[best][col]
                lhs, rhs = num * ba, bn * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                    best = i
        if best is None:
            return "unbounded", det
        det = _int_pivot(tab, basis, best, col, det)


def _integer_row(values) -> list[int]:
    den = math.lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values]


def lp_standard(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Minimise ``c @ x`` subject to ``a_eq @ x = b_eq`` and ``x >= 0``.

    Two-phase tableau simplex with Bland's anti-cycling rule. Pivoting is
    fraction-free: rows are scaled to integers and the tableau holds integer
    multiples of the current basis determinant.
    """
    n = len(c)
    cf = [to_fraction(v) for v in c]
    rows = []
    for r, b in zip(a_eq, b_eq):
        vals = [to_fraction(v) for v in r] + [to_fraction(b)]
        ints = _integer_row(vals)
        if ints[-1] < 0:
            ints = [-v for v in ints]
        rows.append(ints)
    m = len(rows)
    if m == 0:
        if any(v < 0 for v in cf):
            return LPResult("unbounded")
        return LPResult("optimal", tuple([ZERO] * n), ZERO)
    # phase 1 with artificials n..n+m-1
    tab = []
    for i, r in enumerate(rows):
        tab.append(r[:n] + [1 if k == i else 0 for k in range(m)] + [r[n]])
    obj = [0] * (n + m + 1)
    for r in tab:
        for j in range(n):
            obj[j] -= r[j]
        obj[-1] -= r[-1]
    tab.append(obj)
    basis = [n + i for i in range(m)]
    _, det = _int_simplex(tab, basis, n + m, 1)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                continue  # redundant row
            if tab[i][col] < 0:
                tab[i] = [-v for v in tab[i]]
            det = _int_pivot(tab, basis, i, col, det)
        keep.append(i)
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase 2: objective row holds det * reduced costs
    ci = _integer_row(cf + [ZERO])[:n]
    obj = [det * v for v in ci] + [0]
    for i, bj in enumerate(basis):
        f = ci[bj]
        if f:
            obj = [a - f * b for a, b in zip(obj, tab[i])]
    tab.append(obj)
    status, det = _int_simplex(tab, basis, n, det)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [ZERO] * n
    for i, bj in enumerate(basis):
        x[bj] = Fraction(tab[i][-1], det)
    value = sum((a * b for a, b in zip(cf, x)), ZERO)
    return LPResult("optimal", tuple(x), value)


def linprog(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Iterable[int] = (),
) -> LPResult:
    """Minimise ``c @ x`` with ``a_ub x <= b_ub``, ``a_eq x = b_eq``.

    Variables are non-negative except those listed in ``free``.
    """
    n = len(c)
    free = sorted(set(free))
    # column map: each original var -> (pos col, neg col or None)
    cols = {}
    k = 0
    for j in range(n):
        if j in free:
            cols[j] = (k, k + 1)
            k += 2
        else:
            cols[j] = (k, None)
            k += 1
    nslack = len(a_ub)
    total = k + nslack

    def expand(row):
        out = [ZERO] * total
        for j in range(n):
            v = to_fraction(row[j])
            p, q = cols[j]
            out[p] = v
            if q is not None:
                out[q] = -v
        return out

    eq_rows, eq_rhs = [], []
    for i, (row, b) in enumerate(zip(a_ub, b_ub)):
        r = expand(row)
        r[k + i] = ONE
        eq_rows.append(r)
        eq_rhs.append(b)
    for row, b in zip(a_eq, b_eq):
        eq_rows.append(expand(row))
        eq_rhs.append(b)
    cc = expand(c)
    res = lp_standard(cc, eq_rows, eq_rhs)
    if res.status != "optimal":
        return res
    x = []
    for j in range(n):
        p, q = cols[j]
        x.append(res.x[p] - (res.x[q] if q is not None else ZERO))
    return LPResult("optimal", tuple(x), res.value)
