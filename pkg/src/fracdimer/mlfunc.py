r"""Mittag-Leffler function :math:`E_{\alpha,\beta}(z)` for complex arguments.

Three regimes are combined by :func:`ml_eval`:

* ``series`` -- the defining power series, for small scaled modulus;
* ``asymptotic`` -- the large-``|z|`` expansion with the exponential
  (residue) term switched on inside the Stokes sector ``|arg z| < alpha*pi``;
* ``integral`` -- a Hankel-type inverse Laplace contour integral
  :math:`\frac{1}{2\pi i}\int e^s s^{\alpha-\beta}/(s^\alpha - z)\,ds`
  plus the pole residue, evaluated with adaptive quadrature.

Regime boundaries are expressed in the *scaled modulus*
``x = |z| ** (1 / alpha)``: the series cancels like ``exp(x)`` and the
asymptotic tail is accurate like ``exp(-x)``, so a fixed radius in ``|z|``
cannot serve every ``alpha`` in (0, 1].
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .exceptions import NonConvergent, OutOfDomain
from .special import lgamma, rgamma, rgamma_extended, sinpi

__all__ = [
    "FractionalOrder",
    "MLResult",
    "SERIES_RADIUS",
    "ASYMPTOTIC_RADIUS",
    "ASYMPTOTIC_DISPATCH_RADIUS",
    "OVERLAP_ANNULUS",
    "ml_series",
    "ml_asymptotic",
    "ml_integral",
    "ml_eval",
    "mittag_leffler",
]

#: scaled modulus below which ml_eval sums the power series directly
SERIES_RADIUS = 5.0
#: smallest scaled modulus accepted by ml_asymptotic
ASYMPTOTIC_RADIUS = 12.0
#: scaled modulus above which ml_eval trusts the asymptotic expansion (|tail| ~ exp(-x))
ASYMPTOTIC_DISPATCH_RADIUS = 40.0
#: scaled-modulus band where the extended-precision series and the asymptotic
#: expansion are both accurate to ~1e-9; used to cross-check the two regimes
OVERLAP_ANNULUS = (19.0, 21.0)

SERIES_MAX_TERMS = 2000
EXTENDED_MAX_TERMS = 10000
PRECISION_LOSS_RATIO = 1e12

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class FractionalOrder:
    """Caputo order ``tau`` in (0, 1]; ``tau = 1`` is ordinary Schroedinger evolution."""

    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not (0.0 < tau <= 1.0) or math.isnan(tau):
            raise ValueError(f"fractional order must lie in (0, 1], got {self.tau!r}")
        object.__setattr__(self, "tau", tau)

    def __float__(self):
        return self.tau

    @property
    def is_unitary(self):
        return self.tau == 1.0

    @classmethod
    def coerce(cls, tau):
        return tau if isinstance(tau, cls) else cls(tau)


@dataclass(frozen=True)
class MLResult:
    value: complex
    est_error: float
    regime: str
    n_terms: int = 0
    precision_loss: bool = False

    def __complex__(self):
        return complex(self.value)


def _check_alpha(alpha, upper=None):
    alpha = float(alpha)
    if not alpha > 0.0:
        raise OutOfDomain(f"alpha must be positive, got {alpha}")
    if upper is not None and alpha > upper:
        raise OutOfDomain(f"alpha must be <= {upper}, got {alpha}")
    return alpha


def _scaled_modulus(z, alpha):
    r = abs(z)
    if r == 0.0:
        return 0.0
    return math.exp(math.log(r) / alpha)


def ml_series(z, alpha, beta=1.0, tol=_EPS, *, compensated=False, max_terms=None):
    """Sum ``sum_k z**k / Gamma(alpha*k + beta)`` until two consecutive terms are negligible.

    Parameters
    ----------
    z : complex
    alpha, beta : float
        ``alpha > 0``; ``beta`` is any real.
    tol : float
        Relative stopping threshold against the running partial sum.
    compensated : bool
        Use Kahan-Babuska (Neumaier) summation and raise the term cap to
        ``EXTENDED_MAX_TERMS``. Intended for the annulus between the pure
        series and the asymptotic regime.
    max_terms : int, optional
        Override the hard cap.

    Raises
    ------
    NonConvergent
        When the cap is reached first.
    """
    alpha = _check_alpha(alpha)
    beta = float(beta)
    z = complex(z)
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if max_terms is None:
        max_terms = EXTENDED_MAX_TERMS if compensated else SERIES_MAX_TERMS

    x = _scaled_modulus(z, alpha)
    # terms grow until alpha*k + beta passes roughly the scaled modulus
    k_peak = max(0, math.ceil((x + 1.0 - beta) / alpha))
    if compensated and beta > 0.0:
        return _series_extended(z, alpha, beta, tol, max_terms, k_peak)
    log_z = cmath.log(z) if z != 0 else None
    s_re = s_im = c_re = c_im = 0.0
    largest = 0.0
    abs_sum = 0.0
    small_run = 0
    zk = 1 + 0j
    for k in range(max_terms + 1):
        arg = alpha * k + beta
        if k == 0:
            term = rgamma(arg) + 0j
        elif z == 0:
            term = 0j
        elif arg > 150.0:
            # z**k / Gamma(arg) in log space; Gamma(arg) > 0 here
            term = cmath.exp(k * log_z - lgamma(arg))
        else:
            zk *= z
            term = zk * rgamma(arg)
        mag = abs(term)
        largest = max(largest, mag)
        abs_sum += mag
        if compensated:
            s_re, c_re = _neumaier(s_re, c_re, term.real)
            s_im, c_im = _neumaier(s_im, c_im, term.imag)
        else:
            s_re += term.real
            s_im += term.imag
        total = complex(s_re + c_re, s_im + c_im)
        if k >= k_peak and mag <= tol * abs(total):
            small_run += 1
            if small_run >= 2:
                value = total
                err = mag + 4.0 * _EPS * abs_sum
                lost = largest > PRECISION_LOSS_RATIO * abs(value) if value != 0 else largest > 0.0
                return MLResult(value, err, "series", k + 1, lost)
        else:
            small_run = 0
    raise NonConvergent(
        f"Mittag-Leffler series did not converge within {max_terms} terms "
        f"(z={z}, alpha={alpha}, beta={beta})"
    )


def _series_extended(z, alpha, beta, tol, max_terms, k_peak, chunk=64):
    # long-double terms and Neumaier accumulation: alpha*k + beta and z**k stay
    # exact to ~1e-19, which is what the cancelling annulus needs
    ld = np.longdouble
    zl = np.clongdouble(z)
    a_l, b_l = ld(alpha), ld(beta)
    s_re = s_im = c_re = c_im = ld(0)
    largest = 0.0
    abs_sum = 0.0
    small_run = 0
    zk = np.clongdouble(1)
    start = 0
    while start <= max_terms:
        ks = np.arange(start, min(start + chunk, max_terms + 1))
        powers = np.empty(len(ks), dtype=np.clongdouble)
        for i in range(len(ks)):
            if ks[i] > 0:
                zk = zk * zl
            powers[i] = zk
        terms = powers * rgamma_extended(a_l * ks.astype(ld) + b_l)
        for i, term in enumerate(terms):
            mag = float(abs(term))
            largest = max(largest, mag)
            abs_sum += mag
            s_re, c_re = _neumaier(s_re, c_re, term.real)
            s_im, c_im = _neumaier(s_im, c_im, term.imag)
            total = complex(float(s_re + c_re), float(s_im + c_im))
            if ks[i] >= k_peak and mag <= tol * abs(total):
                small_run += 1
                if small_run >= 2:
                    err = mag + 4.0 * float(np.finfo(ld).eps) * abs_sum + _EPS * abs(total)
                    lost = largest > PRECISION_LOSS_RATIO * abs(total) if total != 0 else largest > 0.0
                    return MLResult(total, err, "series", int(ks[i]) + 1, lost)
            else:
                small_run = 0
        start += chunk
    raise NonConvergent(
        f"Mittag-Leffler series did not converge within {max_terms} terms "
        f"(z={z}, alpha={alpha}, beta={beta})"
    )


def _neumaier(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


_LOG_MAX = 709.78


def _exponential_term(z, alpha, beta):
    # principal-branch residue (1/alpha) z**((1-beta)/alpha) exp(z**(1/alpha))
    log_z = cmath.log(z)
    expo = (1.0 - beta) / alpha * log_z + cmath.exp(log_z / alpha) - math.log(alpha)
    if expo.real > _LOG_MAX:
        # overflow: infinite modulus with the correct phase
        c, s = math.cos(expo.imag), math.sin(expo.imag)
        return complex(math.copysign(math.inf, c) if c else 0.0, math.copysign(math.inf, s) if s else 0.0)
    return cmath.exp(expo)


def _in_stokes_sector(z, alpha):
    return alpha >= 1.0 or abs(cmath.phase(z)) < alpha * math.pi


def _inverse_power_term(log_inv_z, power, k, alpha, beta):
    # z**-k / Gamma(beta - alpha*k), switching to log space once Gamma overflows
    w = beta - alpha * k
    if 1.0 - w <= 150.0:
        return power * rgamma(w)
    s = sinpi(w)
    if s == 0.0:
        return 0j
    # 1/Gamma(w) = sin(pi w) Gamma(1 - w) / pi
    return cmath.exp(k * log_inv_z + lgamma(1.0 - w)) * (s / math.pi)


def _asymptotic(z, alpha, beta, n_terms, tol=_EPS):
    value = _exponential_term(z, alpha, beta) if _in_stokes_sector(z, alpha) else 0j
    # rounding of the exponent z**(1/alpha) is amplified by its modulus
    exp_err = 4.0 * _EPS * abs(value) * (1.0 + _scaled_modulus(z, alpha))
    inv_z = 1.0 / z
    log_inv_z = -cmath.log(z)
    log_abs_z = math.log(abs(z))
    power = 1 + 0j
    tail = 0j
    prev = math.inf
    used = 0
    omitted = 0.0
    small_run = 0
    for k in range(1, n_terms + 2):
        power *= inv_z
        term = _inverse_power_term(log_inv_z, power, k, alpha, beta)
        # |1/Gamma(w)| = |sin(pi w)| Gamma(1-w) / pi oscillates; decide on the
        # smooth envelope Gamma(1-w) / (pi |z|**k), an upper bound for |term|
        w = beta - alpha * k
        if alpha == 1.0 and w <= 0.0 and w == math.floor(w):
            # every remaining coefficient 1/Gamma(w) vanishes: the tail is exact
            omitted = 0.0
            break
        if w < 1.0:
            env = math.exp(lgamma(1.0 - w) - k * log_abs_z) / math.pi
        else:
            env = abs(term)
        if k == n_terms + 1 or env > prev:
            omitted = env
            break
        prev = env
        tail += term
        used = k
        if env <= tol * abs(value - tail):
            small_run += 1
            if small_run >= 2:
                omitted = env
                break
        else:
            small_run = 0
    value -= tail
    err = omitted + exp_err + 4.0 * _EPS * (abs(value) + abs(tail))
    return MLResult(value, err, "asymptotic", used)


def _default_asymptotic_terms(x, alpha):
    # optimal truncation sits near alpha*k ~ x
    return min(EXTENDED_MAX_TERMS, int(x / alpha) + 20)


def ml_asymptotic(z, alpha, beta=1.0, n_terms=None):
    """Large-argument expansion of E_{alpha,beta}.

    ``(1/alpha) z**((1-beta)/alpha) exp(z**(1/alpha)) - sum_{k=1}^{K} z**-k / Gamma(beta - alpha*k)``
    where the exponential term is kept for ``|arg z| < alpha*pi`` (it is
    exponentially small between ``alpha*pi/2`` and ``alpha*pi``) and ``K`` is
    ``n_terms`` (default: about ``|z|**(1/alpha) / alpha``) or the index of
    the smallest term, whichever comes first.

    Raises
    ------
    OutOfDomain
        If ``|z| ** (1/alpha) < ASYMPTOTIC_RADIUS`` or ``alpha`` is outside (0, 1].
    """
    alpha = _check_alpha(alpha, upper=1.0)
    z = complex(z)
    x = _scaled_modulus(z, alpha)
    if x < ASYMPTOTIC_RADIUS:
        raise OutOfDomain(
            f"asymptotic expansion needs |z|**(1/alpha) >= {ASYMPTOTIC_RADIUS}, got {x:.6g}"
        )
    if n_terms is None:
        n_terms = _default_asymptotic_terms(x, alpha)
    return _asymptotic(z, alpha, float(beta), int(n_terms))


def ml_integral(z, alpha, beta=1.0, *, epsabs=1e-15, epsrel=1e-13):
    """Inverse-Laplace contour representation of E_{alpha,beta}(z).

    The Bromwich line is folded onto two rays ``arg s = +-theta`` joined by an
    arc of radius ``eps``; the pole ``s* = z**(1/alpha)`` contributes its
    residue when it lies to the right of the contour. ``theta`` is pi unless
    the pole sits close to the negative axis, in which case 3*pi/4 is used so
    the rays never pass near it.
    """
    alpha = _check_alpha(alpha, upper=1.0)
    beta = float(beta)
    z = complex(z)
    if z == 0:
        raise OutOfDomain("contour representation needs z != 0")

    x = _scaled_modulus(z, alpha)
    pole_angle = abs(cmath.phase(z)) / alpha
    theta = math.pi if abs(pole_angle - math.pi) >= 0.12 * math.pi else 0.75 * math.pi
    eps = min(1.0, 0.5 * x)
    a = alpha - beta

    def f_polar(r, ang):
        s = cmath.rect(r, ang)
        s_alpha = cmath.rect(r ** alpha, alpha * ang)
        s_pow = cmath.rect(r ** a, a * ang)
        return cmath.exp(s) * s_pow / (s_alpha - z)

    e_pos = cmath.exp(1j * theta)
    e_neg = cmath.exp(-1j * theta)

    def ray(r):
        return f_polar(r, theta) * e_pos - f_polar(r, -theta) * e_neg

    def arc(phi):
        return f_polar(eps, phi) * cmath.rect(eps, phi)

    upper = eps + 40.0 / abs(math.cos(theta))
    points = [x] if eps < x < upper else None
    with warnings.catch_warnings():
        # roundoff warnings are folded into est_error instead
        warnings.simplefilter("ignore", IntegrationWarning)
        ray_val, ray_err = quad(ray, eps, upper, complex_func=True, epsabs=epsabs,
                                epsrel=epsrel, limit=200, points=points)
        arc_val, arc_err = quad(arc, -theta, theta, complex_func=True, epsabs=epsabs,
                                epsrel=epsrel, limit=200)
    value = ray_val / (2j * math.pi) + arc_val / (2.0 * math.pi)
    err = (_abs_err(ray_err) + _abs_err(arc_err)) / (2.0 * math.pi)
    if pole_angle < theta:
        residue = _exponential_term(z, alpha, beta)
        value += residue
        err += 4.0 * _EPS * abs(residue) * (1.0 + x)
    return MLResult(value, err + 4.0 * _EPS * abs(value), "integral")


def _abs_err(err):
    # quad(complex_func=True) reports separate real/imag error estimates
    if isinstance(err, dict):
        return math.hypot(err["real"][1], err["imag"][1])
    if isinstance(err, (tuple, list)):
        return math.hypot(*[float(e) for e in err])
    return abs(err)


def _terminating_unit_alpha(alpha, beta):
    # for alpha = 1 and integer beta >= 1 the asymptotic tail vanishes identically
    return alpha == 1.0 and beta >= 1.0 and beta == math.floor(beta)


def ml_eval(z, alpha, beta=1.0):
    """Evaluate E_{alpha,beta}(z) for ``alpha`` in (0, 1], choosing the regime.

    The regime depends on the scaled modulus ``x = |z|**(1/alpha)``: the
    power series for ``x <= SERIES_RADIUS``, the asymptotic expansion for
    ``x >= ASYMPTOTIC_DISPATCH_RADIUS`` and the contour integral in between.
    ``alpha == 1`` with integer ``beta >= 1`` uses the asymptotic form beyond
    the series radius, where it is exact (``E_{1,1}(z) = exp(z)``).

    Examples
    --------
    >>> res = ml_eval(-1.0, 0.5)
    >>> res.regime, round(res.value.real, 10)
    ('series', 0.4275835762)
    >>> ml_eval(30j, 0.9).regime
    'asymptotic'
    """
    alpha = _check_alpha(alpha, upper=1.0)
    beta = float(beta)
    z = complex(z)
    x = _scaled_modulus(z, alpha)
    if x <= SERIES_RADIUS:
        return ml_series(z, alpha, beta)
    if _terminating_unit_alpha(alpha, beta):
        return _asymptotic(z, alpha, beta, int(beta) + 1)
    if x >= ASYMPTOTIC_DISPATCH_RADIUS:
        return _asymptotic(z, alpha, beta, _default_asymptotic_terms(x, alpha))
    return ml_integral(z, alpha, beta)


def mittag_leffler(z, alpha, beta=1.0):
    """Value-only convenience wrapper around :func:`ml_eval`; accepts arrays."""
    if np.ndim(z) == 0:
        return ml_eval(complex(z), alpha, beta).value
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    for idx, zi in np.ndenumerate(z):
        out[idx] = ml_eval(zi, alpha, beta).value
    return out
