r"""Two-site dimer: Hamiltonian, closed-form eigensystem and dipole-dipole rates.

Basis order is ``|00>, |01>, |10>, |11>`` throughout. With
:math:`\nu_0 = (\nu_1+\nu_2)/2`, :math:`\Delta = \nu_1-\nu_2` and
:math:`\Omega = \sqrt{4V_{12}^2 + \Delta^2}` the spectrum is
:math:`\{-\nu_0, -\Omega/2, +\Omega/2, +\nu_0\}`; the corner states
``|00>`` and ``|11>`` are exact eigenstates and the single-excitation
block mixes ``|01>`` and ``|10>``.

Rates use natural units :math:`\epsilon_0 = \hbar = c = 1`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError, ZetaUnderflow
from .qlinalg import hermitian_eig

__all__ = [
    "DimerParams",
    "GeometryParams",
    "DimerEigensystem",
    "build_hamiltonian",
    "eigensystem",
    "collective_rates",
    "collective_rates_small_zeta",
    "emission_rate",
    "ZETA_MIN",
]

ZETA_MIN = 1e-4
RESIDUAL_TOL = 1e-10
_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class DimerParams:
    """Site frequencies ``nu1``, ``nu2``, coupling ``v12`` and ``hbar_tau``."""

    nu1: float
    nu2: float
    v12: float
    hbar_tau: float = 1.0

    def __post_init__(self):
        for name in ("nu1", "nu2", "v12", "hbar_tau"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValidationError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)
        if not self.hbar_tau > 0.0:
            raise ValidationError(f"hbar_tau must be positive, got {self.hbar_tau}")

    @property
    def nu0(self):
        """Mean transition frequency."""
        return 0.5 * (self.nu1 + self.nu2)

    @property
    def delta(self):
        """Detuning ``nu1 - nu2``."""
        return self.nu1 - self.nu2

    @property
    def omega(self):
        """Single-excitation gap ``sqrt(4 v12^2 + delta^2)``."""
        return math.hypot(2.0 * self.v12, self.delta)


def _unit3(vec, name):
    arr = np.asarray(vec, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValidationError(f"{name} must be a 3-vector")
    if abs(float(np.linalg.norm(arr)) - 1.0) > _UNIT_TOL:
        raise ValidationError(f"{name} must have unit norm, got {np.linalg.norm(arr):.15g}")
    return arr


@dataclass(frozen=True)
class GeometryParams:
    """Dipole geometry of the pair.

    Parameters
    ----------
    gamma1, gamma2 : float
        Single-molecule decay rates, positive.
    mu_hat1, mu_hat2 : array_like, shape (3,)
        Unit dipole orientations.
    r_hat : array_like, shape (3,)
        Unit vector along the separation.
    zeta : float
        Dimensionless separation ``n k r12``, positive.
    """

    gamma1: float
    gamma2: float
    mu_hat1: tuple
    mu_hat2: tuple
    r_hat: tuple
    zeta: float

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "zeta"):
            val = float(getattr(self, name))
            if not val > 0.0 or not math.isfinite(val):
                raise ValidationError(f"{name} must be positive and finite, got {val}")
            object.__setattr__(self, name, val)
        for name in ("mu_hat1", "mu_hat2", "r_hat"):
            object.__setattr__(self, name, tuple(_unit3(getattr(self, name), name)))

    def scalars(self):
        """``(a, b1, b2) = (mu1.mu2, mu1.r, mu2.r)``."""
        m1, m2, r = (np.asarray(v) for v in (self.mu_hat1, self.mu_hat2, self.r_hat))
        return float(m1 @ m2), float(m1 @ r), float(m2 @ r)


@dataclass(frozen=True)
class DimerEigensystem:
    """Energies ``(e1, e2, e3, e4)`` and states; ``states[:, j]`` pairs with ``energies[j]``.

    ``mixing = (alpha, beta, gamma, delta)`` gives the central states as
    ``alpha|01> + beta|10>`` and ``gamma|01> + delta|10>``.
    ``numeric_fallback`` is set when the closed form failed its residual
    check and the Jacobi eigenvectors were used instead.
    """

    energies: tuple
    states: np.ndarray
    mixing: tuple
    numeric_fallback: bool = False
    residual: float = 0.0
    hamiltonian: np.ndarray = field(default=None, repr=False, compare=False)

    def state(self, j):
        return self.states[:, j]


def build_hamiltonian(p):
    """4x4 real-symmetric dimer Hamiltonian (complex dtype).

    Examples
    --------
    >>> h = build_hamiltonian(DimerParams(1.0, 2.0, 1.0))
    >>> h.real.tolist()[1]
    [0.0, 0.5, 1.0, 0.0]
    """
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = -p.nu0
    h[3, 3] = p.nu0
    h[1, 1] = -0.5 * p.delta
    h[2, 2] = 0.5 * p.delta
    h[1, 2] = h[2, 1] = p.v12
    return h


def _central_vector(lam, delta, v):
    # two rows of (H_c - lam) v = 0 give two candidate null vectors; the
    # larger one avoids the cancellation in lam +- delta/2
    c1 = np.array([v, lam + 0.5 * delta])
    c2 = np.array([lam - 0.5 * delta, v])
    vec = c1 if np.max(np.abs(c1)) >= np.max(np.abs(c2)) else c2
    # rescale first so that tiny couplings do not underflow in the norm
    vec = vec / np.max(np.abs(vec))
    vec = vec / np.linalg.norm(vec)
    lead = vec[0] if abs(vec[0]) > 1e-9 else vec[1]
    return vec * math.copysign(1.0, lead)


def eigensystem(p):
    """Closed-form eigensystem, cross-checked against :func:`hermitian_eig`.

    Ordering follows the labels ``e1 = -nu0``, ``e2 = -Omega/2``,
    ``e3 = +Omega/2``, ``e4 = +nu0``, not the numeric order. With ``v12 == 0``
    the central states are ``|01>`` and ``|10>`` assigned to ``-|delta|/2``
    and ``+|delta|/2``.
    """
    h = build_hamiltonian(p)
    half = 0.5 * p.omega
    energies = (-p.nu0, -half, half, p.nu0)
    if p.v12 == 0.0:
        if p.delta >= 0.0:
            a, b, g, d = 1.0, 0.0, 0.0, 1.0
        else:
            a, b, g, d = 0.0, 1.0, 1.0, 0.0
    else:
        a, b = _central_vector(-half, p.delta, p.v12)
        g, d = _central_vector(half, p.delta, p.v12)
    states = _assemble(a, b, g, d)
    scale = max(1.0, float(np.linalg.norm(h)))
    residual = _max_residual(h, states, energies) / scale

    fallback = False
    if not residual <= RESIDUAL_TOL or not _matches_numeric(h, energies, scale):
        block = hermitian_eig(h[1:3, 1:3])
        (a, b), (g, d) = block.vector(0).real, block.vector(1).real
        energies = (-p.nu0, float(block.eigenvalues[0]), float(block.eigenvalues[1]), p.nu0)
        states = _assemble(a, b, g, d)
        residual = _max_residual(h, states, energies) / scale
        fallback = True
    return DimerEigensystem(
        energies=tuple(float(e) for e in energies),
        states=states,
        mixing=(float(a), float(b), float(g), float(d)),
        numeric_fallback=fallback,
        residual=residual,
        hamiltonian=h,
    )


def _assemble(a, b, g, d):
    s = np.zeros((4, 4), dtype=complex)
    s[0, 0] = 1.0
    s[1, 1], s[2, 1] = a, b
    s[1, 2], s[2, 2] = g, d
    s[3, 3] = 1.0
    return s


def _max_residual(h, states, energies):
    return max(float(np.linalg.norm(h @ states[:, j] - energies[j] * states[:, j])) for j in range(4))


def _matches_numeric(h, energies, scale):
    numeric = hermitian_eig(h).eigenvalues
    return float(np.max(np.abs(np.sort(energies) - numeric))) <= RESIDUAL_TOL * scale


def collective_rates(g):
    r"""Collective decay rate :math:`\gamma_{12}` and coherent coupling :math:`J_{12}`.

    .. math::

        \gamma_{12} = \tfrac32\sqrt{\gamma_1\gamma_2}\Big[(a - b_1b_2)\frac{\sin\zeta}{\zeta}
            + (a - 3b_1b_2)\Big(\frac{\cos\zeta}{\zeta^2} - \frac{\sin\zeta}{\zeta^3}\Big)\Big]

        J_{12} = \tfrac34\sqrt{\gamma_1\gamma_2}\Big[(b_1b_2 - a)\frac{\cos\zeta}{\zeta}
            + (a - 3b_1b_2)\Big(\frac{\cos\zeta}{\zeta^3} + \frac{\sin\zeta}{\zeta^2}\Big)\Big]

    with :math:`a = \hat\mu_1\cdot\hat\mu_2`, :math:`b_i = \hat\mu_i\cdot\hat r`.

    Raises
    ------
    ZetaUnderflow
        For ``zeta < 1e-4``; use :func:`collective_rates_small_zeta` there.
    """
    z = g.zeta
    if z < ZETA_MIN:
        raise ZetaUnderflow(f"zeta = {z:g} < {ZETA_MIN:g}; use collective_rates_small_zeta")
    a, b1, b2 = g.scalars()
    pref = math.sqrt(g.gamma1 * g.gamma2)
    s, c = math.sin(z), math.cos(z)
    gamma12 = 1.5 * pref * ((a - b1 * b2) * s / z + (a - 3 * b1 * b2) * (c / z**2 - s / z**3))
    j12 = 0.75 * pref * ((b1 * b2 - a) * c / z + (a - 3 * b1 * b2) * (c / z**3 + s / z**2))
    return gamma12, j12


def collective_rates_small_zeta(g):
    """Small-``zeta`` expansion of :func:`collective_rates`.

    The regular kernels are expanded through ``zeta**4`` and the singular
    ones (``1/zeta**3``, ``1/zeta``) keep their poles, so the relative
    truncation error is ``O(zeta**6)`` for ``gamma12`` and ``O(zeta**6)``
    relative to the leading ``1/zeta**3`` for ``J12``. Valid for any
    ``zeta`` up to roughly 0.1.
    """
    z = g.zeta
    a, b1, b2 = g.scalars()
    pref = math.sqrt(g.gamma1 * g.gamma2)
    z2 = z * z
    sinc = 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    # cos/z^2 - sin/z^3 = (z cos z - sin z) / z^3
    k1 = -1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0
    # cos/z^3 + sin/z^2
    k2 = 1.0 / z**3 + 0.5 / z - z / 8.0 + z * z2 / 144.0
    cosc = 1.0 / z - 0.5 * z + z * z2 / 24.0
    gamma12 = 1.5 * pref * ((a - b1 * b2) * sinc + (a - 3 * b1 * b2) * k1)
    j12 = 0.75 * pref * ((b1 * b2 - a) * cosc + (a - 3 * b1 * b2) * k2)
    return gamma12, j12


def emission_rate(freq, dipole_sq, refr_index):
    """Single-emitter spontaneous rate ``n f^3 |mu|^2 / (3 pi)`` in natural units.

    Examples
    --------
    >>> round(emission_rate(2.0, 1.0, 1.5), 4)
    1.2732
    """
    for name, val in (("freq", freq), ("dipole_sq", dipole_sq), ("refr_index", refr_index)):
        if not float(val) > 0.0:
            raise ValidationError(f"{name} must be positive, got {val}")
    return float(refr_index) * float(freq) ** 3 * float(dipole_sq) / (3.0 * math.pi)
