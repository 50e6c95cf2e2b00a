"""Oracle checks behind ``fracdimer validate``.

Each suite compares the library against an independent reference (the
exponential and ``erfc`` identities for the Mittag-Leffler kernel, the
matrix exponential and a Caputo integrator for the evolution, closed forms
and brute-force maximisation for the measures) and returns
:class:`CheckResult` rows.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from . import dimer_model, mlfunc, qlinalg, qmeasures, tfse

__all__ = ["CheckResult", "SUITES", "run_suites", "chsh_brute_force", "format_table"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    error: float
    tolerance: float
    seconds: float = 0.0


def _check(suite, name, error, tol, t0):
    return CheckResult(suite, name, bool(error <= tol), float(error), float(tol), time.perf_counter() - t0)


# --- mlfunc ---------------------------------------------------------------


def ml_checks(rng, n=1000):
    out = []
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        r = 50.0 * math.sqrt(rng.uniform())
        z = cmath.rect(r, rng.uniform(-math.pi, math.pi))
        ref = cmath.exp(z)
        worst = max(worst, abs(mlfunc.ml_eval(z, 1.0).value - ref) / abs(ref))
    out.append(_check("mlfunc", "E_1(z) = exp(z), |z| <= 50", worst, 1e-10, t0))

    t0 = time.perf_counter()
    err = abs(mlfunc.ml_eval(-1.0, 0.5).value - math.e * math.erfc(1.0))
    out.append(_check("mlfunc", "E_1/2(-1) = e erfc(1)", err, 1e-9, t0))

    t0 = time.perf_counter()
    lo, hi = mlfunc.OVERLAP_ANNULUS
    worst = 0.0
    for _ in range(200):
        alpha = round(float(rng.integers(1, 11)) / 10.0, 1)
        x = rng.uniform(lo, hi)
        z = cmath.rect(x**alpha, rng.uniform(-math.pi, math.pi))
        s = mlfunc.ml_series(z, alpha, compensated=True).value
        a = mlfunc.ml_asymptotic(z, alpha).value
        worst = max(worst, abs(s - a) / (1.0 + abs(a)))
    out.append(_check("mlfunc", "series vs asymptotic overlap", worst, 1e-8, t0))
    return out


# --- qlinalg / dimer --------------------------------------------------------


def eig_checks(rng, n=1000):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        p = dimer_model.DimerParams(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.1, 10))
        analytic = np.sort(dimer_model.eigensystem(p).energies)
        numeric = qlinalg.hermitian_eig(dimer_model.build_hamiltonian(p)).eigenvalues
        worst = max(worst, float(np.max(np.abs(analytic - numeric))))
    out = [_check("dimer", "analytic vs Jacobi energies", worst, 1e-10, t0)]

    t0 = time.perf_counter()
    eig = dimer_model.eigensystem(dimer_model.DimerParams(1.3, 1.3, 0.7))
    bell_m = np.array([0, 1, -1, 0]) / math.sqrt(2)
    bell_p = np.array([0, 1, 1, 0]) / math.sqrt(2)
    ov = min(abs(np.vdot(bell_m, eig.state(1))) ** 2, abs(np.vdot(bell_p, eig.state(2))) ** 2)
    out.append(_check("dimer", "resonant Bell eigenstates", 1.0 - ov, 1e-10, t0))
    return out


# --- tfse -----------------------------------------------------------------


def _random_state(rng):
    kind = ("ground_excited", "single_excitation")[int(rng.integers(0, 2))]
    return tfse.InitialState(kind, rng.uniform(0, 1))


def unitary_checks(rng, n=100):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        p = dimer_model.DimerParams(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3))
        s = _random_state(rng)
        t = rng.uniform(0, 5)
        rho = tfse.density_matrix(tfse.evolve(s, p, 1.0, t)).rho
        u = qlinalg.matrix_exp_unitary(dimer_model.build_hamiltonian(p), t)
        psi = u @ s.vector()
        worst = max(worst, float(np.max(np.abs(rho - np.outer(psi, psi.conj())))))
    return [_check("tfse", "tau = 1 vs matrix exponential", worst, 1e-8, t0)]


def caputo_checks(taus=(0.3, 0.5, 0.8), t_grid=(0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0), steps_per_unit=1000):
    out = []
    p = dimer_model.DimerParams(1.0, 2.0, 1.0)
    eig = dimer_model.eigensystem(p)
    for kind in ("ground_excited", "single_excitation"):
        s = tfse.InitialState(kind, 1.0 / math.sqrt(2.0))
        for tau in taus:
            t0 = time.perf_counter()
            a = cmath.exp(-0.5j * math.pi * tau) * eig.hamiltonian / p.hbar_tau
            ys = tfse.caputo_oracle_solve(a, s.vector(), tau, t_grid, steps_per_unit)
            worst = 0.0
            for t, y in zip(t_grid, ys):
                chi = tfse.evolve(s, p, tau, t, eig=eig).amplitudes
                mask = np.abs(chi) > 1e-3
                worst = max(worst, float(np.max(np.abs(chi[mask] - y[mask]) / np.abs(chi[mask]))))
            out.append(_check("tfse", f"ML vs Caputo ABM, {kind}, tau={tau}", worst, 1e-4, t0))
    return out


# --- qmeasures ------------------------------------------------------------


def _binary_entropy(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def measure_checks():
    t0 = time.perf_counter()
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    v = qmeasures.all_measures(np.outer(bell, bell))
    err = max(abs(v.coherence - 1), abs(v.log_negativity - 1), abs(v.concurrence - 1), abs(v.chsh - 2 * math.sqrt(2)))
    out = [_check("qmeasures", "Bell state closed forms", err, 1e-9, t0)]

    t0 = time.perf_counter()
    worst = 0.0
    for k in range(1, 10):
        p = k / 10.0
        q = math.sqrt(1 - p * p)
        psi = np.array([p, 0, 0, q])
        v = qmeasures.all_measures(np.outer(psi, psi))
        c = 2 * p * q
        worst = max(
            worst,
            abs(v.concurrence - c),
            abs(v.chsh - 2 * math.sqrt(1 + c * c)),
            abs(v.coherence - _binary_entropy(p * p)),
        )
    out.append(_check("qmeasures", "pure family closed forms", worst, 1e-8, t0))
    return out


def _observable(n_vec):
    return sum(c * s for c, s in zip(n_vec, qmeasures.PAULI))


def _unit(theta, phi):
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def _bell_expectation(rho, angles):
    a1, a2, b1, b2 = (_unit(angles[2 * i], angles[2 * i + 1]) for i in range(4))
    op = np.kron(_observable(a1), _observable(b1) + _observable(b2)) + np.kron(
        _observable(a2), _observable(b1) - _observable(b2)
    )
    return float(np.real(np.trace(rho @ op)))


def chsh_brute_force(rho, rng, n_samples=10_000, n_refine=5):
    """Largest CHSH expectation found by random search plus local refinement.

    Works directly with ``Tr(rho B)`` for the Bell operator ``B`` built from
    Pauli observables, without the correlation-tensor shortcut, so it is a
    lower bound independent of :func:`~fracdimer.qmeasures.chsh_max`.
    """
    from scipy.optimize import minimize

    rho = np.asarray(rho, dtype=complex)
    # sample in the tensor picture for speed; refinement uses the full trace
    n = np.empty((3, 3))
    for k, sk in enumerate(qmeasures.PAULI):
        for l, sl in enumerate(qmeasures.PAULI):
            n[k, l] = float(np.real(np.trace(rho @ np.kron(sk, sl))))
    ang = np.column_stack([
        np.arccos(rng.uniform(-1, 1, size=(n_samples, 4))),
        rng.uniform(0, 2 * math.pi, size=(n_samples, 4)),
    ])[:, [0, 4, 1, 5, 2, 6, 3, 7]]
    st, ct = np.sin(ang[:, 0::2]), np.cos(ang[:, 0::2])
    vec = np.stack([st * np.cos(ang[:, 1::2]), st * np.sin(ang[:, 1::2]), ct], axis=-1)
    a1, a2, b1, b2 = (vec[:, i, :] for i in range(4))
    vals = np.einsum("si,ij,sj->s", a1, n, b1 + b2) + np.einsum("si,ij,sj->s", a2, n, b1 - b2)
    best = float(np.max(np.abs(vals)))
    for idx in np.argsort(-np.abs(vals))[:n_refine]:
        sign = 1.0 if vals[idx] >= 0 else -1.0
        res = minimize(lambda x: -sign * _bell_expectation(rho, x), ang[idx], method="BFGS",
                       options={"gtol": 1e-10})
        best = max(best, abs(float(res.fun)))
    return best


def _random_density(rng):
    rank = int(rng.integers(1, 5))
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def horodecki_checks(rng, n=100, n_samples=10_000):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        rho = _random_density(rng)
        worst = max(worst, abs(qmeasures.chsh_max(rho) - chsh_brute_force(rho, rng, n_samples)))
    return [_check("qmeasures", "Horodecki vs brute-force CHSH", worst, 1e-4, t0)]


SUITES = {
    "mlfunc": lambda rng, quick: ml_checks(rng, 200 if quick else 1000),
    "dimer": lambda rng, quick: eig_checks(rng, 200 if quick else 1000),
    "tfse": lambda rng, quick: unitary_checks(rng, 20 if quick else 100)
    + caputo_checks(taus=(0.5,) if quick else (0.3, 0.5, 0.8)),
    "qmeasures": lambda rng, quick: measure_checks() + horodecki_checks(rng, 10 if quick else 100, 2000 if quick else 10_000),
}


def run_suites(names=None, *, seed=20240501, quick=False):
    """Run the named suites (all by default) and return every check."""
    rng = np.random.default_rng(seed)
    out = []
    for name in names or SUITES:
        out.extend(SUITES[name](rng, quick))
    return out


def format_table(results):
    width = max((len(r.name) for r in results), default=10)
    lines = [f"{'suite':<10} {'check':<{width}}  {'error':>10}  {'tol':>8}  result"]
    for r in results:
        lines.append(
            f"{r.suite:<10} {r.name:<{width}}  {r.error:>10.3e}  {r.tolerance:>8.0e}  {'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
