"""Spectra and hermitian coordinate/momentum matrices for 1-D bound systems.

The builders produce an energy list together with the position matrix X and
the momentum matrix P in the energy eigenbasis.  For every builder the two
matrices are tied entrywise through the transition frequencies,

    P(n, n') = i * m * w(n, n') * X(n, n'),    w(n, n') = (E_n - E_n') / hbar,

which keeps P hermitian whenever X is.  Amplitude tables re-index X entries
by (state, jump) pairs, the format the condition evaluators reason about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jacobi import jacobi_eigh

#: Relative Frobenius defect accepted before a matrix stops counting as hermitian.
HERMITICITY_TOL = 1e-12

#: Entries smaller than this are treated as structural zeros when banding is probed.
BAND_CUTOFF = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    """Mass, reduced action quantum and (for the oscillator builder) frequency."""

    mass: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("mass", "hbar", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def _frozen_array(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectralSystem:
    """Retained energy levels of a 1-D bound system, lowest first."""

    constants: PhysicalConstants
    energies: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise ValueError("energies must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(e)):
            raise ValueError("energies must all be finite")
        if np.any(np.diff(e) < 0.0):
            raise ValueError("energies must be nondecreasing")
        object.__setattr__(self, "energies", _frozen_array(e, float))

    @property
    def size(self) -> int:
        return int(self.energies.size)


@dataclass(frozen=True)
class FrequencyTable:
    """Antisymmetric matrix of transition frequencies w(n, n')."""

    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("frequency matrix must be square")
        scale = 1.0 + float(np.max(np.abs(w))) if w.size else 1.0
        if float(np.max(np.abs(w + w.T))) > 1e-12 * scale:
            raise ValueError("frequency matrix must be antisymmetric")
        object.__setattr__(self, "omega", _frozen_array(w, float))

    @property
    def size(self) -> int:
        return int(self.omega.shape[0])

    def __getitem__(self, key):
        return self.omega[key]


def transition_frequencies(system: SpectralSystem) -> FrequencyTable:
    """Frequency table w(n, n') = (E_n - E_n') / hbar of a system.

    Antisymmetry and the combination rule w(n, k) + w(k, n') = w(n, n') hold
    exactly because every entry is a difference of one-index quantities.
    """
    e = system.energies / system.constants.hbar
    return FrequencyTable(e[:, None] - e[None, :])


def hermiticity_defect(matrix) -> float:
    """Frobenius norm of (M - M^dagger) divided by max(1, Frobenius norm of M)."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("hermiticity_defect expects a square matrix")
    defect = float(np.linalg.norm(m - m.conj().T))
    return defect / max(1.0, float(np.linalg.norm(m)))


@dataclass(frozen=True)
class MatrixPair:
    """Hermitian position and momentum matrices over the same state basis."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        p = np.asarray(self.p, dtype=complex)
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise ValueError("position matrix must be square")
        if p.shape != x.shape:
            raise ValueError("position and momentum matrices must share a shape")
        if hermiticity_defect(x) > HERMITICITY_TOL:
            raise ValueError("position matrix is not hermitian within tolerance")
        if hermiticity_defect(p) > HERMITICITY_TOL:
            raise ValueError("momentum matrix is not hermitian within tolerance")
        object.__setattr__(self, "x", _frozen_array(x, complex))
        object.__setattr__(self, "p", _frozen_array(p, complex))

    @property
    def size(self) -> int:
        return int(self.x.shape[0])


def momentum_from_position(x, freq: FrequencyTable, mass: float) -> np.ndarray:
    """Entrywise momentum matrix P(n, n') = i * mass * w(n, n') * X(n, n').

    Hermitian input X yields hermitian output because the frequency matrix is
    real antisymmetric.
    """
    xm = np.asarray(x, dtype=complex)
    if xm.ndim != 2 or xm.shape[0] != xm.shape[1]:
        raise ValueError("position matrix must be square")
    if xm.shape[0] != freq.size:
        raise ValueError("position matrix and frequency table sizes disagree")
    return 1j * mass * freq.omega * xm


def matrix_bandwidth(x, cutoff: float = BAND_CUTOFF) -> int:
    """Largest |row - column| carrying an entry of magnitude >= cutoff."""
    xm = np.asarray(x)
    n = xm.shape[0]
    band = 0
    for b in range(1, n):
        if np.max(np.abs(np.diagonal(xm, b))) >= cutoff:
            band = b
    return band


@dataclass(frozen=True)
class AmplitudeTable:
    """Transition amplitudes keyed by (state n, jump alpha), A(n, alpha) = X(n, n - alpha).

    ``window`` is the inclusive range of recorded state labels and ``size`` the
    dimension of the source matrix; entries exist only where both indices of
    X(n, n - alpha) fall inside the matrix.  Two constraint flags are computed
    from the recorded entries:

    * ``hermitian_consistent``: A(n, alpha) == conj(A(n - alpha, -alpha)),
      the re-indexed form of X being hermitian;
    * ``heisenberg_real``: A(n, alpha) == conj(A(n, -alpha)), the classical
      reality condition carried over to transition amplitudes.
    """

    window: tuple[int, int]
    alpha_max: int
    size: int
    entries: dict
    hermitian_consistent: bool = field(init=False)
    heisenberg_real: bool = field(init=False)

    def __post_init__(self):
        lo, hi = self.window
        if not (0 <= lo <= hi <= self.size - 1):
            raise ValueError(f"window {self.window} out of range for size {self.size}")
        if self.alpha_max < 0:
            raise ValueError("alpha_max must be nonnegative")
        herm = True
        real = True
        for (n, a), value in self.entries.items():
            partner = self.entries.get((n - a, -a))
            if partner is not None and abs(value - partner.conjugate()) > 1e-12:
                herm = False
            partner = self.entries.get((n, -a))
            if partner is not None and abs(value - partner.conjugate()) > 1e-12:
                real = False
        object.__setattr__(self, "hermitian_consistent", herm)
        object.__setattr__(self, "heisenberg_real", real)

    def amplitude_for_pair(self, row: int, col: int) -> complex:
        """Matrix entry X(row, col) as seen by the table.

        Index pairs outside the truncated matrix are genuine zeros; pairs
        inside the matrix but outside the recorded window are missing data.
        """
        if not (0 <= row < self.size and 0 <= col < self.size):
            return 0j
        key = (row, row - col)
        try:
            return self.entries[key]
        except KeyError:
            raise ValueError(
                f"amplitude for pair ({row},{col}) is outside the recorded window"
            ) from None


def to_amplitude_table(x, window: tuple[int, int], alpha_max: int) -> AmplitudeTable:
    """Record X entries as transition amplitudes A(n, alpha) = X(n, n - alpha)."""
    xm = np.asarray(x, dtype=complex)
    if xm.ndim != 2 or xm.shape[0] != xm.shape[1]:
        raise ValueError("position matrix must be square")
    size = xm.shape[0]
    lo, hi = window
    if not (0 <= lo <= hi <= size - 1):
        raise ValueError(f"window {window} out of range for matrix size {size}")
    entries = {}
    for n in range(lo, hi + 1):
        for a in range(-alpha_max, alpha_max + 1):
            if 0 <= n - a < size:
                entries[(n, a)] = complex(xm[n, n - a])
    return AmplitudeTable(window=(lo, hi), alpha_max=alpha_max, size=size, entries=entries)


def build_oscillator(constants: PhysicalConstants, size: int):
    """Closed-form harmonic oscillator truncated to ``size`` states.

    E_n = (n + 1/2) hbar omega and X is real symmetric tridiagonal with
    X(n, n+1) = sqrt((n + 1) hbar / (2 m omega)).  Returns the system and the
    matrix pair in the energy eigenbasis.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    m, w, hb = constants.mass, constants.omega, constants.hbar
    n = np.arange(size)
    energies = (n + 0.5) * hb * w
    x = np.zeros((size, size))
    if size > 1:
        off = np.sqrt((n[:-1] + 1.0) * hb / (2.0 * m * w))
        x[n[:-1], n[:-1] + 1] = off
        x[n[:-1] + 1, n[:-1]] = off
    system = SpectralSystem(constants=constants, energies=energies, kind="oscillator")
    freq = transition_frequencies(system)
    p = momentum_from_position(x, freq, m)
    return system, MatrixPair(x=x.astype(complex), p=p)


@dataclass(frozen=True)
class PolynomialPotential:
    """Confining polynomial potential V(x) = sum_k c_k x^k, coefficients ascending.

    Trailing zero coefficients are dropped; the retained leading term must have
    even degree >= 2 with a positive coefficient so that V grows on both sides.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite 1-D sequence")
        nz = np.nonzero(c)[0]
        if nz.size == 0:
            raise ValueError("potential has no nonzero coefficients")
        c = c[: nz[-1] + 1]
        degree = c.size - 1
        if degree < 2 or degree % 2 != 0 or c[-1] <= 0.0:
            raise ValueError(
                "potential is not confining: leading term must have positive "
                "coefficient and even degree >= 2"
            )
        object.__setattr__(self, "coefficients", _frozen_array(c, float))

    @property
    def degree(self) -> int:
        return int(self.coefficients.size - 1)

    def coefficient(self, k: int) -> float:
        return float(self.coefficients[k]) if k < self.coefficients.size else 0.0

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)

    def slope(self, x):
        return np.polynomial.polynomial.polyval(
            x, np.polynomial.polynomial.polyder(self.coefficients)
        )

    def minimum(self) -> tuple[float, float]:
        """Location and value of the global minimum."""
        dcoef = np.polynomial.polynomial.polyder(self.coefficients)
        roots = np.polynomial.polynomial.polyroots(dcoef)
        candidates = [r.real for r in np.atleast_1d(roots) if abs(r.imag) <= 1e-9 * (1.0 + abs(r))]
        if not candidates:
            candidates = [0.0]
        values = [float(self(x)) for x in candidates]
        best = int(np.argmin(values))
        return float(candidates[best]), values[best]


def _potential_matrix(potential: PolynomialPotential, x: np.ndarray) -> np.ndarray:
    # Horner evaluation of V at the matrix argument.
    c = potential.coefficients
    n = x.shape[0]
    result = np.zeros((n, n))
    np.fill_diagonal(result, c[-1])
    for k in range(c.size - 2, -1, -1):
        result = result @ x
        result[np.diag_indices(n)] += c[k]
    return result


def build_from_potential(
    potential: PolynomialPotential,
    constants: PhysicalConstants,
    basis_size: int,
    keep: int,
):
    """Diagonalize a confining polynomial potential in an auxiliary oscillator basis.

    The Hamiltonian H = P^2 / 2m + V(X) is assembled with the basis frequency
    w_b = max(1, sqrt(2 c_2 / m)), diagonalized with the in-module Jacobi
    solver, and the lowest ``keep`` states are retained.  Eigenvector phases
    are fixed so that each vector's largest-magnitude component is positive,
    which makes X real symmetric.  The returned momentum matrix is rebuilt
    from the retained spectrum, P = i m w o X entrywise.
    """
    if keep < 1:
        raise ValueError("keep must be at least 1")
    if keep > basis_size / 2:
        raise ValueError("keep must not exceed half the auxiliary basis size")
    m, hb = constants.mass, constants.hbar
    w_basis = max(1.0, math.sqrt(max(0.0, 2.0 * potential.coefficient(2) / m)))
    aux = PhysicalConstants(mass=m, hbar=hb, omega=w_basis)
    _, aux_pair = build_oscillator(aux, basis_size)
    x_aux = aux_pair.x.real
    b = aux_pair.p.imag  # P = i B with B real antisymmetric
    hamiltonian = -(b @ b) / (2.0 * m) + _potential_matrix(potential, x_aux)
    hamiltonian = 0.5 * (hamiltonian + hamiltonian.T)
    evals, evecs = jacobi_eigh(hamiltonian)
    vectors = evecs[:, :keep].copy()
    for j in range(keep):
        lead = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[lead, j] < 0.0:
            vectors[:, j] = -vectors[:, j]
    energies = evals[:keep]
    x_new = vectors.T @ x_aux @ vectors
    x_new = 0.5 * (x_new + x_new.T)
    system = SpectralSystem(constants=constants, energies=energies, kind="potential")
    freq = transition_frequencies(system)
    p_new = momentum_from_position(x_new, freq, m)
    return system, MatrixPair(x=x_new.astype(complex), p=p_new)
