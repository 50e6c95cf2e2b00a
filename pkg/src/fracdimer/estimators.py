"""scikit-learn style wrappers.

:class:`FractionalDimer` is fitted once (eigensystem and mode
decomposition) and then transforms an array of times into a table of
resource measures. :class:`ResourceMeasures` maps a stack of 4x4 density
matrices to the same kind of table. Both follow the ``BaseEstimator``
conventions, so ``get_params`` / ``set_params`` / ``clone`` and pipelines
work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dimer_model import DimerParams, eigensystem
from .exceptions import ValidationError
from .mlfunc import FractionalOrder
from .qmeasures import all_measures
from .tfse import DensityMatrix, InitialState, decompose_initial, density_matrix, evolve, mode_exponents

__all__ = ["FractionalDimer", "ResourceMeasures", "check_times", "check_density_matrices", "MEASURE_COLUMNS"]

MEASURE_COLUMNS = ("coherence", "entropy", "negativity", "log_negativity", "concurrence", "chsh")


def check_times(X):
    """Validate times as a 1-D float array of non-negative finite values.

    Accepts shape ``(n,)`` or ``(n, 1)``.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = check_array(arr.reshape(-1, 1), ensure_2d=True, dtype=float)[:, 0]
    if np.any(arr < 0):
        raise ValidationError("times must be non-negative")
    return arr


def check_density_matrices(X):
    """Validate a stack of 4x4 density matrices, shape ``(n, 4, 4)`` or ``(4, 4)``."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1:] != (4, 4):
        raise ValidationError(f"expected density matrices of shape (n, 4, 4), got {arr.shape}")
    return [DensityMatrix.from_array(r) for r in arr]


class FractionalDimer(BaseEstimator, TransformerMixin):
    """Time-fractional evolution of a dimer as a transformer over times.

    Parameters
    ----------
    nu1, nu2 : float
        Site transition frequencies.
    v12 : float
        Dipole-dipole coupling.
    tau : float
        Caputo order in (0, 1].
    p : float
        Initial-state amplitude parameter in [0, 1].
    preset : {'single_excitation', 'ground_excited'}
    hbar_tau : float
        Fractional Planck constant (energies are in its units).

    Attributes
    ----------
    eigensystem_ : DimerEigensystem
    coefficients_ : ndarray of shape (4,)
        Overlaps of the initial state with the eigenstates.
    exponents_ : ndarray of shape (4,)
        Mode exponents ``lambda_j``.

    Examples
    --------
    >>> model = FractionalDimer(tau=1.0).fit()
    >>> model.transform([0.0]).shape
    (1, 6)
    """

    def __init__(self, nu1=1.0, nu2=2.0, v12=1.0, tau=1.0, p=2**-0.5, preset="single_excitation", hbar_tau=1.0):
        self.nu1 = nu1
        self.nu2 = nu2
        self.v12 = v12
        self.tau = tau
        self.p = p
        self.preset = preset
        self.hbar_tau = hbar_tau

    def fit(self, X=None, y=None):
        if self.preset == "custom":
            raise ValidationError("FractionalDimer supports the named presets only")
        self.params_ = DimerParams(self.nu1, self.nu2, self.v12, self.hbar_tau)
        self.order_ = FractionalOrder(self.tau)
        self.state_ = InitialState(self.preset, self.p)
        self.eigensystem_ = eigensystem(self.params_)
        self.coefficients_ = decompose_initial(self.state_, self.eigensystem_)
        self.exponents_ = mode_exponents(self.eigensystem_, self.order_, self.params_.hbar_tau)
        return self

    def evolve(self, X):
        """List of :class:`~fracdimer.tfse.EvolvedState`, one per time."""
        check_is_fitted(self, "eigensystem_")
        return [evolve(self.state_, self.params_, self.order_, t, eig=self.eigensystem_) for t in check_times(X)]

    def density_matrices(self, X):
        """Normalised density matrices, shape ``(n, 4, 4)``."""
        return np.array([density_matrix(es).rho for es in self.evolve(X)])

    def transform(self, X):
        """Resource measures at the times ``X``; columns as in :data:`MEASURE_COLUMNS`."""
        rows = []
        for es in self.evolve(X):
            v = all_measures(density_matrix(es))
            rows.append([getattr(v, c) for c in MEASURE_COLUMNS])
        return np.array(rows, dtype=float).reshape(-1, len(MEASURE_COLUMNS))

    def norm_sq(self, X):
        return np.array([es.norm_sq for es in self.evolve(X)])

    def get_feature_names_out(self, input_features=None):
        return np.array(MEASURE_COLUMNS, dtype=object)


class ResourceMeasures(BaseEstimator, TransformerMixin):
    """Stateless transformer from density matrices to resource measures.

    Parameters
    ----------
    columns : tuple of str, optional
        Subset and order of :data:`MEASURE_COLUMNS` to return.
    """

    def __init__(self, columns=MEASURE_COLUMNS):
        self.columns = columns

    def fit(self, X=None, y=None):
        unknown = [c for c in self.columns if c not in MEASURE_COLUMNS]
        if unknown:
            raise ValidationError(f"unknown measure columns: {', '.join(unknown)}")
        self.n_features_out_ = len(self.columns)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        rows = []
        for dm in check_density_matrices(X):
            v = all_measures(dm)
            rows.append([getattr(v, c) for c in self.columns])
        return np.array(rows, dtype=float).reshape(-1, self.n_features_out_)

    def get_feature_names_out(self, input_features=None):
        return np.array(self.columns, dtype=object)
