"""Eigendecomposition of the Hamiltonian and spectral time propagation.

States evolve as ``psi(tau) = V exp(-i E tau) V^T psi(0)`` with hbar = 1 and
times in units of 1/t.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    InvalidStateError,
    NumericalFailure,
    OracleScopeError,
)
from .hilbert import HilbertSpace

ORACLE_MAX_DIM = 200


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def norm(self) -> float:
        """Spectral norm of the decomposed operator."""
        return float(np.max(np.abs(self.eigenvalues))) if self.dimension else 0.0

    def coefficients(self, psi0: np.ndarray) -> np.ndarray:
        """Overlaps ``<lambda|psi0>`` for every eigenvector."""
        psi0 = np.asarray(psi0)
        if psi0.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"state of length {psi0.shape} for a {self.dimension}-dimensional spectrum"
            )
        v = self.eigenvectors
        if np.iscomplexobj(psi0):
            return v.T @ np.ascontiguousarray(psi0.real) + 1j * (v.T @ np.ascontiguousarray(psi0.imag))
        return (v.T @ psi0).astype(complex)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _available_memory() -> int | None:
    try:
        with open("/proc/meminfo") as fh:
            for line in fh:
                if line.startswith("MemAvailable:"):
                    return int(line.split()[1]) * 1024
    except OSError:
        pass
    try:
        return os.sysconf("SC_AVPHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):
        return None


def _pick_driver(dim: int, overwrite: bool) -> str:
    """Divide-and-conquer when its ~2 n^2 workspace fits in free memory, else MRRR."""
    need = 8 * (2 * dim * dim + 6 * dim) + (0 if overwrite else 8 * dim * dim)
    free = _available_memory()
    if free is None:
        return "evd" if dim <= 6000 else "evr"
    return "evd" if need < 0.8 * free else "evr"


def diagonalize(h: np.ndarray, *, overwrite: bool = False) -> SpectralDecomposition:
    """Full dense eigendecomposition of a real-symmetric matrix."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    dim = h.shape[0]
    if not np.all(np.isfinite(h)):
        raise NumericalFailure("matrix has non-finite entries", {"dimension": dim})
    if overwrite and h.flags.c_contiguous and not h.flags.f_contiguous:
        # LAPACK wants Fortran order; the transpose of a symmetric matrix is
        # the same matrix, and avoids an n^2 copy
        h = h.T
    driver = _pick_driver(dim, overwrite)
    try:
        w, v = scipy.linalg.eigh(h, driver=driver, overwrite_a=overwrite, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(
            f"eigensolver did not converge: {exc}",
            {"dimension": dim, "driver": driver, "max_abs": float(np.abs(h).max())},
        ) from exc
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def time_grid(t_max: float, n_steps: int, t_min: float = 0.0) -> np.ndarray:
    """``n_steps + 1`` equally spaced times from ``t_min`` to ``t_max``."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if not (0 <= t_min < t_max):
        raise ValueError(f"need 0 <= t_min < t_max, got {t_min}, {t_max}")
    return np.linspace(t_min, t_max, n_steps + 1)


def check_grid(times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly increasing and start at >= 0")
    return times


def localized_initial_state(space: HilbertSpace, site: int) -> np.ndarray:
    """One particle on node ``site`` (a graph label), nothing elsewhere."""
    if 1 not in space.sectors:
        raise InvalidStateError("the one-particle sector is not part of this space")
    pos = space.graph.position(site)
    psi = np.zeros(space.dimension, dtype=complex)
    psi[space.index_of(1 << pos)] = 1.0
    return psi


def iter_evolve(
    spec: SpectralDecomposition, psi0: np.ndarray, times, chunk: int = 128
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(times, states)`` blocks; ``states`` has shape ``(len(block), dim)``.

    Blocks keep memory bounded for large spaces; ``V`` is applied as two real
    products to avoid promoting it to complex.
    """
    times = check_grid(times)
    c = spec.coefficients(psi0)
    v = spec.eigenvectors
    e = spec.eigenvalues
    for start in range(0, times.size, chunk):
        block = times[start : start + chunk]
        amp = np.exp(-1j * np.outer(e, block)) * c[:, None]
        # contiguous copies: strided .real/.imag views would bypass BLAS
        states = v @ np.ascontiguousarray(amp.real) + 1j * (v @ np.ascontiguousarray(amp.imag))
        yield block, states.T


def evolve(spec: SpectralDecomposition, psi0: np.ndarray, times) -> np.ndarray:
    """States at each grid time, stacked as rows."""
    blocks = [s for _, s in iter_evolve(spec, psi0, times)]
    return np.concatenate(blocks, axis=0)


def oracle_propagate(h: np.ndarray, psi0: np.ndarray, tau: float, tol: float = 1e-12) -> np.ndarray:
    """Reference ``exp(-i H tau) psi0`` by scaling and squaring a Taylor series.

    Independent of any eigensolver; limited to small matrices.
    """
    h = np.asarray(h, dtype=float)
    dim = h.shape[0]
    if dim > ORACLE_MAX_DIM:
        raise OracleScopeError(f"oracle limited to dimension {ORACLE_MAX_DIM}, got {dim}")
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (dim,):
        raise DimensionMismatchError(f"state of length {psi0.shape} for a {dim}x{dim} matrix")
    if tau == 0:
        return psi0.copy()

    a = -1j * tau * h
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0 else 0
    a = a / 2**squarings

    step = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 60):
        term = term @ a / k
        step += term
        if np.linalg.norm(term, 1) < tol * 2.0**-squarings:
            break
    else:
        raise NumericalFailure("Taylor series did not converge", {"dimension": dim, "tau": tau})
    for _ in range(squarings):
        step = step @ step
    return step @ psi0
