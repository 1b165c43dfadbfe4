"""Evaluators for the competing quantum-condition sums and commutator diagnostics.

Several historical formulations of the quantum condition look nearly identical
in print: each is a sum over transition amplitudes weighted by transition
frequencies.  They stop agreeing once one fixes what the symbols mean on a
finite hermitian matrix:

* ``heisenberg_sum`` evaluates the classic frequency-weighted sum in two
  readings.  On a hermitian matrix the conjugated products are squared moduli
  and the sum reproduces hbar.  On an amplitude table forced to obey the
  classical reality condition the amplitudes lose their state dependence and
  the same sum collapses to zero.
* ``born_jordan_sum`` uses plain entry products; ``modified_sum`` uses squared
  moduli.  The two coincide exactly for hermitian input and are reported side
  by side.
* ``nearest_neighbor_rewrite`` is the tempting oscillator-only rearrangement
  that fails quantitatively at small state labels.
* ``commutator_diagonal_sum`` and the loop-integral helpers express the
  diagonal of XP - PX as banded sums, which is how the difference rule in
  ``born_difference`` connects the classical action derivative to the
  commutation relation.

``full_report`` bundles all of the above per state, together with off-diagonal
and truncation-edge diagnostics of the commutator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .spectral import (
    AmplitudeTable,
    FrequencyTable,
    MatrixPair,
    SpectralSystem,
    matrix_bandwidth,
    momentum_from_position,
    to_amplitude_table,
    transition_frequencies,
)

#: Off-band magnitude above which a matrix no longer counts as nearest-neighbor.
NEAREST_NEIGHBOR_TOL = 1e-12

#: Imaginary leakage allowed in nominally real condition values, relative to hbar.
REALNESS_TOL = 1e-10


def commutator(x, p) -> np.ndarray:
    """Matrix commutator XP - PX."""
    xm = np.asarray(x, dtype=complex)
    pm = np.asarray(p, dtype=complex)
    if xm.ndim != 2 or xm.shape[0] != xm.shape[1]:
        raise ValueError("commutator expects square matrices")
    if pm.shape != xm.shape:
        raise ValueError("matrix shapes disagree")
    return xm @ pm - pm @ xm


def _check_window(n: int, size: int, alpha_max: int) -> None:
    if not 0 <= n < size:
        raise ValueError(f"state label {n} outside the system")
    if n + alpha_max > size - 1:
        raise ValueError(
            f"state {n} violates the evaluation window n <= {size - 1 - alpha_max}"
        )


def _matrix_entry(matrix: np.ndarray, row: int, col: int) -> complex:
    size = matrix.shape[0]
    if 0 <= row < size and 0 <= col < size:
        return complex(matrix[row, col])
    return 0j


def _freq_entry(freq: FrequencyTable, row: int, col: int) -> float:
    size = freq.size
    if 0 <= row < size and 0 <= col < size:
        return float(freq.omega[row, col])
    return 0.0


def _heisenberg_sum_complex(source, freq, mass, n, alpha_max) -> complex:
    if isinstance(source, AmplitudeTable):
        size = source.size
        entry = source.amplitude_for_pair
    else:
        matrix = np.asarray(source, dtype=complex)
        size = matrix.shape[0]
        entry = lambda r, c: _matrix_entry(matrix, r, c)  # noqa: E731
    _check_window(n, size, alpha_max)
    total = 0j
    for a in range(-alpha_max, alpha_max + 1):
        up = entry(n + a, n)
        total += up.conjugate() * up * _freq_entry(freq, n + a, n)
        down = entry(n - a, n)
        total -= down.conjugate() * down * _freq_entry(freq, n, n - a)
    return mass * total


def heisenberg_sum(source, freq: FrequencyTable, mass: float, n: int, alpha_max: int) -> float:
    """Frequency-weighted sum m * sum_a {|X(n+a,n)|^2 w(n+a,n) - |X(n-a,n)|^2 w(n,n-a)}.

    ``source`` is either a matrix (entries read literally, conjugation is
    complex conjugation of the stored entry) or an :class:`AmplitudeTable`
    (entries read through the recorded window; pairs outside the truncated
    matrix are zero, pairs inside the matrix but outside the window raise).
    Equals hbar on the oscillator; collapses to zero on reality-constrained
    tables whose amplitudes have lost their state dependence.
    """
    return float(_heisenberg_sum_complex(source, freq, mass, n, alpha_max).real)


def _born_jordan_sum_complex(x, freq, mass, n, alpha_max) -> complex:
    matrix = np.asarray(x, dtype=complex)
    _check_window(n, matrix.shape[0], alpha_max)
    total = 0j
    for a in range(-alpha_max, alpha_max + 1):
        total += (
            _matrix_entry(matrix, n, n + a)
            * _matrix_entry(matrix, n + a, n)
            * _freq_entry(freq, n + a, n)
        )
        total -= (
            _matrix_entry(matrix, n, n - a)
            * _matrix_entry(matrix, n - a, n)
            * _freq_entry(freq, n, n - a)
        )
    return mass * total


def born_jordan_sum(x, freq: FrequencyTable, mass: float, n: int, alpha_max: int) -> float:
    """Sum m * sum_a {X(n,n+a) X(n+a,n) w(n+a,n) - X(n,n-a) X(n-a,n) w(n,n-a)}.

    Plain entry products, no conjugation.  For hermitian X the products are
    squared moduli and this agrees with :func:`modified_sum` exactly; the two
    diverge on non-hermitian input.
    """
    return float(_born_jordan_sum_complex(x, freq, mass, n, alpha_max).real)


def _modified_sum_complex(x, freq, mass, n, alpha_max) -> complex:
    matrix = np.asarray(x, dtype=complex)
    _check_window(n, matrix.shape[0], alpha_max)
    total = 0j
    for a in range(-alpha_max, alpha_max + 1):
        up = _matrix_entry(matrix, n + a, n)
        total += (up.real * up.real + up.imag * up.imag) * _freq_entry(freq, n + a, n)
        down = _matrix_entry(matrix, n - a, n)
        total -= (down.real * down.real + down.imag * down.imag) * _freq_entry(
            freq, n, n - a
        )
    return mass * total


def modified_sum(x, freq: FrequencyTable, mass: float, n: int, alpha_max: int) -> float:
    """Modified sum-rule form m * sum_a {|X(n+a,n)|^2 w(n+a,n) - |X(n-a,n)|^2 w(n,n-a)}.

    The squared moduli implement X(n +- a, n) = conj(X(n, n +- a)); this is the
    reading under which the sum equals hbar for every interior state.
    """
    return float(_modified_sum_complex(x, freq, mass, n, alpha_max).real)


def _nearest_neighbor_rewrite_complex(x, mass, omega, n) -> complex:
    matrix = np.asarray(x, dtype=complex)
    size = matrix.shape[0]
    if matrix_bandwidth(matrix, NEAREST_NEIGHBOR_TOL) > 1:
        raise ValueError(
            "the nearest-neighbor rewrite is only defined for matrices whose "
            "entries beyond the first off-diagonal vanish"
        )
    _check_window(n, size, 0)
    return mass * omega * (
        _matrix_entry(matrix, n + 1, n) * _matrix_entry(matrix, n + 1, n + 2)
        - _matrix_entry(matrix, n - 1, n) * _matrix_entry(matrix, n - 1, n - 2)
    )


def nearest_neighbor_rewrite(x, mass: float, omega: float, n: int) -> float:
    """The invalid oscillator-only rearrangement of the quantum condition.

    Evaluates m * omega * {X(n+1,n) X(n+1,n+2) - X(n-1,n) X(n-1,n-2)} with
    out-of-range entries read as zero.  On the oscillator it yields
    hbar/sqrt(2) at n = 0 and hbar*sqrt(6)/2 at n = 1, approaching hbar only
    for large n, which is the quantitative witness of its invalidity.
    """
    return float(_nearest_neighbor_rewrite_complex(x, mass, omega, n).real)


def commutator_diagonal_sum(x, p, n: int, alpha_max: int) -> complex:
    """Banded diagonal element sum_a {P(n+a,n) X(n,n+a) - P(n,n+a) X(n+a,n)}.

    Equals commutator(X, P)[n, n] once alpha_max spans every nonzero band.
    """
    xm = np.asarray(x, dtype=complex)
    pm = np.asarray(p, dtype=complex)
    if pm.shape != xm.shape:
        raise ValueError("matrix shapes disagree")
    _check_window(n, xm.shape[0], alpha_max)
    total = 0j
    for a in range(-alpha_max, alpha_max + 1):
        total += _matrix_entry(pm, n + a, n) * _matrix_entry(xm, n, n + a)
        total -= _matrix_entry(pm, n, n + a) * _matrix_entry(xm, n + a, n)
    return total


def loop_integral_diagonal(x, p, freq: FrequencyTable, n: int, period: float) -> complex:
    """(n, n) element of the momentum-times-coordinate-differential loop integral.

    Returns ``-T * sum_a i w(n, n-a) P(n, n-a) X(n-a, n)``.  The phases of the
    two time-dependent factors cancel pairwise, so the integrand is constant
    in time and the loop integral over an interval T is just T times the sum.
    For the oscillator over one period this reproduces 2 pi E_n / omega.
    """
    xm = np.asarray(x, dtype=complex)
    pm = np.asarray(p, dtype=complex)
    if pm.shape != xm.shape:
        raise ValueError("matrix shapes disagree")
    size = xm.shape[0]
    if not 0 <= n < size:
        raise ValueError(f"state label {n} outside the system")
    if period <= 0.0:
        raise ValueError("period must be positive")
    total = 0j
    for a in range(n - size + 1, n + 1):
        total += 1j * _freq_entry(freq, n, n - a) * pm[n, n - a] * xm[n - a, n]
    return -period * total


def loop_integral_diagonal_conjugate(
    x, p, freq: FrequencyTable, n: int, period: float
) -> complex:
    """Conjugate-form companion, ``T * sum_a i w(n, n-a) P(n-a, n) X(n, n-a)``.

    For hermitian X and P this is the complex conjugate of
    :func:`loop_integral_diagonal`.
    """
    xm = np.asarray(x, dtype=complex)
    pm = np.asarray(p, dtype=complex)
    if pm.shape != xm.shape:
        raise ValueError("matrix shapes disagree")
    size = xm.shape[0]
    if not 0 <= n < size:
        raise ValueError(f"state label {n} outside the system")
    if period <= 0.0:
        raise ValueError("period must be positive")
    total = 0j
    for a in range(n - size + 1, n + 1):
        total += 1j * _freq_entry(freq, n, n - a) * pm[n - a, n] * xm[n, n - a]
    return period * total


def loop_integral_state_difference(x, p, n: int) -> complex:
    """Discrete state derivative of the loop integral,
    ``-2 pi i sum_a P(n+a,n) X(n,n+a) + 2 pi i sum_a P(n,n-a) X(n-a,n)``.

    For hermitian X, P the two sums are complex conjugates, so the combination
    is real; away from the truncation edge it equals 2 pi hbar.
    """
    xm = np.asarray(x, dtype=complex)
    pm = np.asarray(p, dtype=complex)
    if pm.shape != xm.shape:
        raise ValueError("matrix shapes disagree")
    size = xm.shape[0]
    if not 0 <= n < size:
        raise ValueError(f"state label {n} outside the system")
    first = 0j
    for a in range(-n, size - n):
        first += pm[n + a, n] * xm[n, n + a]
    second = 0j
    for a in range(n - size + 1, n + 1):
        second += pm[n, n - a] * xm[n - a, n]
    return -2j * math.pi * first + 2j * math.pi * second


def born_difference(term, n: int, alpha: int) -> complex:
    """Difference rule replacing the scaled state derivative of a transition term.

    For a family of values attached to (row, column) label pairs, the term
    ``alpha * d/dn`` applied to the (n, n - alpha) member is replaced by the
    up-shifted pair minus the base pair,

        term(n + alpha, n) - term(n, n - alpha),

    with missing pairs read as zero.  Summed over alpha, the rule applied to
    the family term(r, c) = P(r, c) X(c, r) reproduces the banded commutator
    diagonal of :func:`commutator_diagonal_sum`.
    """
    up = complex(term.get((n + alpha, n), 0.0))
    base = complex(term.get((n, n - alpha), 0.0))
    return up - base


def impose_heisenberg_reality(table: AmplitudeTable) -> AmplitudeTable:
    """Project an amplitude table onto the joint reality and hermiticity constraints.

    The two constraints close along each +-alpha diagonal pair: every recorded
    A(n, alpha) is averaged with every conj(A(n', -alpha)) and the mean is
    written back, so the result satisfies both constraints and its amplitudes
    are independent of the state label along each diagonal.  That forced state
    independence is exactly what makes the constrained tables collapse the
    frequency-weighted sum to zero.  The input must already be hermitian
    consistent; a table that already satisfies both constraints is a fixed
    point.
    """
    if not table.hermitian_consistent:
        raise ValueError("table must satisfy the hermiticity-derived constraint")
    new_entries = dict(table.entries)
    for band in range(table.alpha_max + 1):
        plus_keys = sorted(k for k in table.entries if k[1] == band)
        minus_keys = sorted(k for k in table.entries if k[1] == -band)
        pool = [table.entries[k] for k in plus_keys]
        pool += [table.entries[k].conjugate() for k in minus_keys if band != 0]
        if not pool:
            continue
        mean = sum(pool) / len(pool)
        if band == 0:
            mean = complex(mean.real, 0.0)
        for k in plus_keys:
            new_entries[k] = mean
        for k in minus_keys:
            new_entries[k] = mean.conjugate()
    return AmplitudeTable(
        window=table.window,
        alpha_max=table.alpha_max,
        size=table.size,
        entries=new_entries,
    )


@dataclass(frozen=True)
class ConditionRow:
    """Per-state values of every condition formulation plus signed residuals.

    Real-valued fields are compared against hbar, the commutator diagonal
    against i*hbar.  ``bj_alternative`` is NaN for systems whose position
    matrix is not nearest-neighbor banded.
    """

    n: int
    eq4_hermitian: float
    eq4_constrained: float
    eq14: float
    eq25: float
    bj_alternative: float
    commutator_diag: complex
    residual_eq4_hermitian: float
    residual_eq4_constrained: float
    residual_eq14: float
    residual_eq25: float
    residual_bj_alternative: float
    residual_commutator: complex


@dataclass(frozen=True)
class ConditionReport:
    """Evaluation-window condition rows plus commutator diagnostics."""

    system_kind: str
    mass: float
    omega: float
    hbar: float
    size: int
    window: tuple[int, int]
    alpha_max: int
    rows: tuple
    offdiag_max: float
    trace_commutator: complex
    edge_diag: complex


def _real_or_raise(value: complex, hbar: float, label: str) -> float:
    if abs(value.imag) > REALNESS_TOL * hbar:
        raise NumericalError(
            f"{label} has imaginary part {value.imag:.3e} beyond {REALNESS_TOL} * hbar"
        )
    return float(value.real)


def full_report(
    system: SpectralSystem, pair: MatrixPair, alpha_max: int | None = None
) -> ConditionReport:
    """Evaluate every condition formulation on each window state of a system.

    The evaluation window is 0 <= n <= N - 1 - alpha_max; the default
    alpha_max is the band beyond which all X entries drop below 1e-12 (at
    least 1).  Rows are computed in a fixed order so identical inputs yield
    identical reports.
    """
    if pair.size != system.size:
        raise ValueError("matrix pair and system sizes disagree")
    x = pair.x
    p = pair.p
    size = system.size
    mass = system.constants.mass
    hbar = system.constants.hbar
    omega = system.constants.omega
    freq = transition_frequencies(system)
    if alpha_max is None:
        alpha_max = max(1, matrix_bandwidth(x))
    if alpha_max < 1:
        raise ValueError("alpha_max must be at least 1")
    window_hi = size - 1 - alpha_max
    if window_hi < 0:
        raise ValueError("empty evaluation window: system too small for alpha_max")

    comm = commutator(x, p)
    table = to_amplitude_table(x, (0, size - 1), alpha_max)
    constrained = impose_heisenberg_reality(table)
    nn_banded = matrix_bandwidth(x, NEAREST_NEIGHBOR_TOL) <= 1

    rows = []
    for n in range(window_hi + 1):
        eq4_h = _real_or_raise(
            _heisenberg_sum_complex(x, freq, mass, n, alpha_max), hbar, "eq4_hermitian"
        )
        eq4_c = _real_or_raise(
            _heisenberg_sum_complex(constrained, freq, mass, n, alpha_max),
            hbar,
            "eq4_constrained",
        )
        eq14 = _real_or_raise(
            _born_jordan_sum_complex(x, freq, mass, n, alpha_max), hbar, "eq14"
        )
        eq25 = _real_or_raise(
            _modified_sum_complex(x, freq, mass, n, alpha_max), hbar, "eq25"
        )
        if nn_banded:
            bj = _real_or_raise(
                _nearest_neighbor_rewrite_complex(x, mass, omega, n),
                hbar,
                "bj_alternative",
            )
        else:
            bj = math.nan
        diag = complex(comm[n, n])
        rows.append(
            ConditionRow(
                n=n,
                eq4_hermitian=eq4_h,
                eq4_constrained=eq4_c,
                eq14=eq14,
                eq25=eq25,
                bj_alternative=bj,
                commutator_diag=diag,
                residual_eq4_hermitian=eq4_h - hbar,
                residual_eq4_constrained=eq4_c - hbar,
                residual_eq14=eq14 - hbar,
                residual_eq25=eq25 - hbar,
                residual_bj_alternative=bj - hbar,
                residual_commutator=diag - 1j * hbar,
            )
        )

    block = comm[: window_hi + 1, : window_hi + 1]
    offdiag = np.abs(block - np.diag(np.diag(block)))
    return ConditionReport(
        system_kind=system.kind,
        mass=mass,
        omega=omega,
        hbar=hbar,
        size=size,
        window=(0, window_hi),
        alpha_max=alpha_max,
        rows=tuple(rows),
        offdiag_max=float(np.max(offdiag)) if block.size else 0.0,
        trace_commutator=complex(np.trace(comm)),
        edge_diag=complex(comm[size - 1, size - 1]),
    )
