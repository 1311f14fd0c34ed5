"""Exact dense linear algebra over prime fields GF(p).

Matrices are numpy ``int64`` arrays with entries reduced to ``[0, p)``.
Row reduction works on column panels: within a panel the elimination is
the classical one-pivot-at-a-time sweep, while the trailing columns are
updated once per panel with a matrix product.  The product runs through
float64, which is exact here: the inner dimension is at most the panel
width, so every dot product is a sum of at most ``_PANEL`` terms bounded
by ``(p - 1) ** 2 < 2**32``, far inside float64's ``2**53`` integer
window.  Modular reductions are deferred where the int64 magnitude stays
bounded (entries only accumulate a few multiples of ``p`` between
reductions), which keeps the hot loops free of integer division.

Pivot choice is the first nonzero entry scanning down each column, so
the reduced form and every basis derived from it are reproducible across
runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_MODULUS = 1 << 16
_PANEL = 128


class LinalgError(ValueError):
    """Raised for invalid moduli or malformed matrix input."""


def is_prime(n: int) -> bool:
    """Trial-division primality test, adequate for 16-bit moduli."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_prime(p: object) -> int:
    """Validate a field characteristic and return it as a plain int.

    Accepts ints (including numpy integer scalars) in ``[2, 2**16)`` that
    are prime.  Rejects bools explicitly: ``True`` would otherwise slip
    through as 1.
    """
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise LinalgError(f"characteristic must be an int, got {p!r}")
    q = int(p)
    if q < 2 or q >= MAX_MODULUS:
        raise LinalgError(f"characteristic {q} outside supported range [2, {MAX_MODULUS})")
    if not is_prime(q):
        raise LinalgError(f"characteristic {q} is not prime")
    return q


@dataclass(frozen=True)
class PrimeField:
    """A prime field GF(p) with scalar helpers."""

    p: int

    def __post_init__(self) -> None:
        require_prime(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p


def to_matrix(entries, p: int, copy: bool = True) -> np.ndarray:
    """Coerce nested sequences or an array to a reduced int64 matrix."""
    require_prime(p)
    a = np.array(entries, dtype=np.int64, copy=copy)
    if a.ndim != 2:
        raise LinalgError(f"expected a 2-d matrix, got shape {a.shape}")
    a %= p
    return a


def matrix_from_flat(flat, rows: int, cols: int, p: int) -> np.ndarray:
    """Build a rows-by-cols matrix from a flat row-major entry list."""
    a = np.array(flat, dtype=np.int64)
    if a.ndim != 1 or a.size != rows * cols:
        raise LinalgError(f"expected {rows * cols} entries, got {a.size}")
    return to_matrix(a.reshape(rows, cols), p, copy=False)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product of reduced matrices, reduced mod p."""
    require_prime(p)
    return (a @ b) % p


def kronecker(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Kronecker product with the left factor indexing the coarse blocks."""
    require_prime(p)
    return np.kron(a, b) % p


def _float_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Multiply reduced int64 matrices via float64, reduced mod p.

    Exact provided the inner dimension times (p - 1)**2 stays below
    2**53; callers keep the inner dimension at most ``_PANEL``.
    """
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return prod.astype(np.int64) % p


def _forward(a: np.ndarray, p: int) -> list[int]:
    """In-place blocked forward elimination; returns pivot column list.

    Between panel boundaries entries may hold unreduced residues: a
    trailing entry accumulates at most one subtraction of a value below
    ``p`` per panel, and in-panel entries at most ``_PANEL`` subtractions
    of values below ``p**2``, so magnitudes stay below ``2**46``.  Every
    value is reduced before it is read as a coefficient, and the whole
    matrix is reduced once on exit.
    """
    m, n = a.shape
    pivots: list[int] = []
    row = 0
    col = 0
    while row < m and col < n:
        hi = min(col + _PANEL, n)
        width = hi - col
        # fac[i, j] is the multiple of the panel's j-th pivot row that was
        # subtracted from row i; reused for the one-shot trailing update.
        fac = np.zeros((m, width), dtype=np.int64)
        scales: list[int] = []
        nloc = 0
        for c in range(col, hi):
            r = row + nloc
            if r >= m:
                break
            a[r:, c] %= p
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            r0 = r + int(nz[0])
            if r0 != r:
                a[[r, r0]] = a[[r0, r]]
                fac[[r, r0]] = fac[[r0, r]]
            a[r, c:hi] %= p
            s = pow(int(a[r, c]), p - 2, p)
            if s != 1:
                a[r, c:hi] = (a[r, c:hi] * s) % p
            scales.append(s)
            if r + 1 < m:
                f = a[r + 1:, c].copy()
                fac[r + 1:, nloc] = f
                # Deferred reduction: f < p and the pivot row is reduced.
                a[r + 1:, c:hi] -= f[:, None] * a[r, c:hi]
            pivots.append(c)
            nloc += 1
        if nloc and hi < n:
            # Finalize the pivot rows' trailing columns in pivot order.
            for i in range(nloc):
                r = row + i
                v = a[r, hi:] % p
                coef = fac[r, :i]
                if i and coef.any():
                    v = (v - coef @ a[row:row + i, hi:]) % p
                if scales[i] != 1:
                    v = (v * scales[i]) % p
                a[r, hi:] = v
            below = row + nloc
            if below < m:
                fb = fac[below:, :nloc]
                if fb.any():
                    prod = _float_matmul(fb, a[row:below, hi:], p)
                    a[below:, hi:] -= prod
        if nloc:
            a[row:, col:hi] %= p
        row += nloc
        col = hi
    a %= p
    return pivots


def row_reduce(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p).

    Returns a new matrix together with the pivot column indices.  The
    back-substitution pass mirrors the forward one: sequential within a
    group of ``_PANEL`` pivot rows, then one matrix product clears those
    pivot columns from all earlier rows.
    """
    require_prime(p)
    r = np.array(a, dtype=np.int64, copy=True)
    r %= p
    pivots = _forward(r, p)
    k = len(pivots)
    while k > 0:
        j = max(0, k - _PANEL)
        for i in range(k - 1, j - 1, -1):
            r[i, :] %= p
            cols = pivots[i + 1:k]
            if cols:
                f = r[i, cols]
                if f.any():
                    r[i, :] = (r[i, :] - f @ r[i + 1:k, :]) % p
        if j > 0:
            g = r[:j, pivots[j:k]] % p
            if g.any():
                prod = _float_matmul(g, r[j:k, :], p)
                r[:j, :] -= prod
        k = j
    if pivots:
        r[:len(pivots), :] %= p
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    """Rank over GF(p); forward elimination only."""
    require_prime(p)
    w = np.array(a, dtype=np.int64, copy=True)
    w %= p
    return len(_forward(w, p))


def nullspace_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the right kernel of ``a`` over GF(p).

    Basis vectors are ordered by ascending free column and each has a 1
    in its own free coordinate, so the result is canonical for a given
    input.  Shape is (cols, nullity).
    """
    require_prime(p)
    red, pivots = row_reduce(a, p)
    n = red.shape[1]
    npiv = len(pivots)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    basis[free, np.arange(len(free))] = 1
    if pivots and free:
        basis[pivots, :] = (-red[:npiv][:, free]) % p
    return basis
