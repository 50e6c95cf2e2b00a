"""Dense complex linear algebra for 2-, 3- and 4-dimensional operators.

Everything here works on ``numpy`` arrays but the eigensolver itself runs
cyclic complex Jacobi rotations on plain Python scalars: for matrices this
small the per-call overhead of array operations dominates the arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NotHermitian

__all__ = [
    "EigenSystem",
    "hermitian_eig",
    "check_hermitian",
    "partial_transpose_b",
    "trace_norm",
    "matrix_exp_unitary",
]

HERMITIAN_TOL = 1e-12
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
PHASE_THRESHOLD = 1e-9


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order and the matching unit eigenvectors.

    ``eigenvectors[:, j]`` belongs to ``eigenvalues[j]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        # allows ``w, v = hermitian_eig(a)``
        yield self.eigenvalues
        yield self.eigenvectors

    @property
    def dim(self):
        return len(self.eigenvalues)

    def vector(self, j):
        return self.eigenvectors[:, j]


def _as_square(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_hermitian(a, tol=HERMITIAN_TOL):
    """Return ``a`` as a complex array after checking ``max|a - a^H| <= tol * max(1, max|a|)``.

    Raises
    ------
    NotHermitian
        If the deviation exceeds the tolerance.
    """
    a = _as_square(a)
    if a.size == 0:
        return a
    dev = float(np.max(np.abs(a - a.conj().T)))
    scale = max(1.0, float(np.max(np.abs(a))))
    if not dev <= tol * scale:
        raise NotHermitian(f"matrix is not Hermitian: max|A - A^H| = {dev:.3e}")
    return a


def _fix_phase(vec, threshold=PHASE_THRESHOLD):
    # first significant component real-positive
    for c in vec:
        mag = abs(c)
        if mag > threshold:
            ph = c.conjugate() / mag
            return [x * ph for x in vec]
    return vec


def hermitian_eig(a, *, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian matrix; it is symmetrised as ``(a + a^H) / 2`` after the check.
    tol : float
        Hermiticity tolerance, relative to ``max(1, max|a|)``.

    Returns
    -------
    EigenSystem
        Ascending eigenvalues; unit eigenvectors whose first component above
        ``1e-9`` in modulus is real and positive.

    Raises
    ------
    NotHermitian
        If ``a`` fails the Hermiticity check.

    Notes
    -----
    Sweeps stop once the off-diagonal Frobenius norm is below
    ``1e-14 * ||a||_F`` or after 100 sweeps.
    """
    a = check_hermitian(a, tol)
    n = a.shape[0]
    h = 0.5 * (a + a.conj().T)
    m = [[complex(h[i, j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        m[i][i] = complex(m[i][i].real, 0.0)
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    fro = math.sqrt(sum(abs(x) ** 2 for row in m for x in row))
    target = JACOBI_REL_TOL * fro
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(sum(abs(m[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(m, v, p, q, n)

    evals = [m[i][i].real for i in range(n)]
    order = sorted(range(n), key=lambda k: evals[k])
    values = np.array([evals[k] for k in order])
    vectors = np.empty((n, n), dtype=complex)
    for col, k in enumerate(order):
        vectors[:, col] = _fix_phase([v[i][k] for i in range(n)])
    return EigenSystem(values, vectors)


def _rotate(m, v, p, q, n):
    apq = m[p][q]
    mag = abs(apq)
    if mag == 0.0:
        return
    app = m[p][p].real
    aqq = m[q][q].real
    # make the pivot real with the phase e^{i phi}, then a real Givens rotation
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    sp = s * phase  # s e^{i phi}
    spc = sp.conjugate()
    # columns: A <- A G with G[p,p]=c, G[q,p]=-s e^{-i phi}, G[p,q]=s e^{i phi}, G[q,q]=c
    for k in range(n):
        akp = m[k][p]
        akq = m[k][q]
        m[k][p] = c * akp - spc * akq
        m[k][q] = sp * akp + c * akq
    for k in range(n):
        apk = m[p][k]
        aqk = m[q][k]
        m[p][k] = c * apk - sp * aqk
        m[q][k] = spc * apk + c * aqk
    m[p][q] = 0j
    m[q][p] = 0j
    m[p][p] = complex(m[p][p].real, 0.0)
    m[q][q] = complex(m[q][q].real, 0.0)
    for k in range(n):
        vkp = v[k][p]
        vkq = v[k][q]
        v[k][p] = c * vkp - spc * vkq
        v[k][q] = sp * vkp + c * vkq


def partial_transpose_b(rho):
    """Partial transpose on the second qubit of a 4x4 operator.

    The basis order is ``|00>, |01>, |10>, |11>``; entry
    ``(i1 i2, j1 j2)`` moves to ``(i1 j2, j1 i2)``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"partial transpose needs a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4).copy()


def trace_norm(a):
    """Sum of the absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eig(a).eigenvalues)))


def matrix_exp_unitary(h, t):
    """``exp(-i h t)`` for Hermitian ``h`` through its eigendecomposition.

    Examples
    --------
    >>> import numpy as np
    >>> sx = np.array([[0, 1], [1, 0]])
    >>> np.allclose(matrix_exp_unitary(sx, np.pi / 2), -1j * sx)
    True
    """
    w, u = hermitian_eig(h)
    phases = np.array([cmath.exp(-1j * lam * t) for lam in w])
    return (u * phases) @ u.conj().T
