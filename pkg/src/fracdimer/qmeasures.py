"""Coherence, entanglement and Bell-nonlocality measures of two-qubit states.

All logarithms are base 2, so entropies and coherence are in bits. Every
function accepts either a :class:`~fracdimer.tfse.DensityMatrix` or a plain
4x4 array; arrays are validated (unit trace, Hermitian) first.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import InvalidDensityMatrix
from .qlinalg import hermitian_eig, partial_transpose_b
from .tfse import DensityMatrix

__all__ = [
    "PAULI",
    "CorrelationTensor",
    "ResourceValues",
    "von_neumann_entropy",
    "rel_entropy_coherence",
    "negativity",
    "log_negativity",
    "concurrence",
    "correlation_tensor",
    "chsh_max",
    "chsh_value",
    "all_measures",
]

TRACE_TOL = 1e-9
NEG_EIG_TOL = 1e-9
ROUTE_TOL = 1e-10
_EIG_FLOOR = 1e-14

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_SYSY = np.kron(PAULI[1], PAULI[1])
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class CorrelationTensor:
    """``n[k, l] = Tr(rho s_k (x) s_l)`` with the local Bloch vectors ``u`` and ``v``."""

    n: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class ResourceValues:
    coherence: float
    entropy: float
    negativity: float
    log_negativity: float
    concurrence: float
    chsh: float

    def as_dict(self):
        return asdict(self)


def _rho(rho):
    if isinstance(rho, DensityMatrix):
        return rho.rho
    return DensityMatrix.from_array(rho, tol=TRACE_TOL).rho


def _spectrum(rho):
    """Eigenvalues of ``rho`` after the validity check, clamped at zero."""
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"trace must be 1, got {tr:.12g}")
    es = hermitian_eig(rho)
    w = es.eigenvalues
    if w[0] < -NEG_EIG_TOL:
        raise InvalidDensityMatrix(f"negative eigenvalue {w[0]:.3e}")
    return np.clip(w, 0.0, None), es.eigenvectors


def _entropy_bits(w):
    s = 0.0
    for x in w:
        x = float(x)
        if x > 0.0:
            s -= x * math.log2(x)
    return max(s, 0.0)


def von_neumann_entropy(rho):
    """``-sum w log2 w`` over the eigenvalues of ``rho`` (``0 log 0 = 0``)."""
    w, _ = _spectrum(_rho(rho))
    return _entropy_bits(w)


def rel_entropy_coherence(rho):
    """Relative entropy of coherence ``S(diag rho) - S(rho)`` in the computational basis."""
    r = _rho(rho)
    w, _ = _spectrum(r)
    return _coherence(r, w)


def _coherence(r, w):
    diag = np.clip(np.real(np.diag(r)), 0.0, None)
    return max(_entropy_bits(diag) - _entropy_bits(w), 0.0)


def _negativity_routes(r):
    pt = hermitian_eig(partial_transpose_b(r)).eigenvalues
    by_eigs = float(np.sum(np.abs(pt) - pt)) / 2.0
    tnorm = float(np.sum(np.abs(pt)))
    by_norm = (tnorm - 1.0) / 2.0
    if abs(by_eigs - by_norm) > ROUTE_TOL:
        raise InvalidDensityMatrix(f"negativity routes disagree: {by_eigs!r} vs {by_norm!r}")
    return max(by_eigs, 0.0), tnorm


def negativity(rho):
    """Sum of the absolute negative eigenvalues of the partial transpose.

    Computed from the eigenvalues and from ``(||rho^T_B||_1 - 1) / 2``; the two
    must agree to 1e-10.
    """
    return _negativity_routes(_rho(rho))[0]


def _log_neg(neg, tnorm):
    ln = math.log2(2.0 * neg + 1.0)
    alt = math.log2(max(tnorm, 1.0))
    if abs(ln - alt) > ROUTE_TOL:
        raise InvalidDensityMatrix(f"log-negativity routes disagree: {ln!r} vs {alt!r}")
    return ln


def log_negativity(rho):
    """``log2(2 N + 1)``, checked against ``log2 ||rho^T_B||_1``."""
    neg, tnorm = _negativity_routes(_rho(rho))
    return _log_neg(neg, tnorm)


def _concurrence(r, w, vecs):
    # With rho = Psi Psi^H, Psi = V sqrt(w), the square roots of the eigenvalues
    # of rho (sy sy) rho* (sy sy) are the singular values of Psi^T (sy sy) Psi.
    # Eigenvalues at roundoff level are dropped: their square roots (~1e-8)
    # would otherwise leak into the result.
    keep = w > _EIG_FLOOR * max(1.0, float(np.max(w)))
    psi = vecs[:, keep] * np.sqrt(w[keep])
    if psi.shape[1] == 0:
        return 0.0
    t = psi.T @ _SYSY @ psi
    s = np.zeros(4)
    sv = np.linalg.svd(t, compute_uv=False)
    s[: len(sv)] = sv
    return max(0.0, float(s[0] - s[1] - s[2] - s[3]))


def concurrence(rho):
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)``.

    ``s_i`` are the descending square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``, obtained as singular values of
    ``Psi^T (sy x sy) Psi`` for ``rho = Psi Psi^H``.
    """
    r = _rho(rho)
    w, vecs = _spectrum(r)
    return _concurrence(r, w, vecs)


def correlation_tensor(rho):
    """Pauli correlation tensor and local Bloch vectors."""
    r = _rho(rho)
    n = np.empty((3, 3))
    for k, sk in enumerate(PAULI):
        for l, sl in enumerate(PAULI):
            n[k, l] = float(np.real(np.trace(r @ np.kron(sk, sl))))
    u = np.array([float(np.real(np.trace(r @ np.kron(s, _I2)))) for s in PAULI])
    v = np.array([float(np.real(np.trace(r @ np.kron(_I2, s)))) for s in PAULI])
    return CorrelationTensor(n, u, v)


def _chsh_from_tensor(n):
    ev = hermitian_eig(n.T @ n).eigenvalues
    top = max(float(ev[-1] + ev[-2]), 0.0)
    return 2.0 * math.sqrt(top)


def chsh_max(rho):
    """Maximal CHSH value ``2 sqrt(m1 + m2)`` (Horodecki criterion).

    ``m1``, ``m2`` are the two largest eigenvalues of ``N^T N``; the value
    exceeds 2 exactly when some CHSH inequality is violated.
    """
    return _chsh_from_tensor(correlation_tensor(rho).n)


def chsh_value(rho, a1, a2, b1, b2):
    """CHSH expectation for measurement directions ``a1, a2`` (first qubit) and ``b1, b2``.

    ``<B> = a1.N(b1 + b2) + a2.N(b1 - b2)`` with unit 3-vectors.
    """
    n = correlation_tensor(rho).n
    a1, a2, b1, b2 = (np.asarray(x, dtype=float) for x in (a1, a2, b1, b2))
    return float(a1 @ n @ (b1 + b2) + a2 @ n @ (b1 - b2))


def all_measures(rho):
    """Every measure of the module from one pass over ``rho``.

    Examples
    --------
    >>> import numpy as np
    >>> bell = np.zeros(4); bell[[0, 3]] = 2 ** -0.5
    >>> vals = all_measures(np.outer(bell, bell))
    >>> round(vals.chsh, 6), round(vals.concurrence, 6)
    (2.828427, 1.0)
    """
    r = _rho(rho)
    w, vecs = _spectrum(r)
    neg, tnorm = _negativity_routes(r)
    return ResourceValues(
        coherence=_coherence(r, w),
        entropy=_entropy_bits(w),
        negativity=neg,
        log_negativity=_log_neg(neg, tnorm),
        concurrence=_concurrence(r, w, vecs),
        chsh=_chsh_from_tensor(correlation_tensor(DensityMatrix(r, 1.0)).n),
    )
