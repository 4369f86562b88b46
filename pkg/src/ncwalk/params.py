"""Hamiltonian coefficients, all in units of the hopping amplitude t."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Coefficients of the number-nonconserving lattice Hamiltonian.

    ``onsite_disorder`` holds the random part of the site energies; the full
    site energy is ``delta_eps + onsite_disorder[i]``.  ``None`` means an
    ideal (disorder-free) lattice.
    """

    delta_eps: float = 20.0
    t_hop: float = 1.0
    v_int: float = 0.0
    delta_pair: float = 0.0
    gamma_single: float = 0.0
    onsite_disorder: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("delta_eps", "t_hop", "v_int", "delta_pair", "gamma_single"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.onsite_disorder is not None:
            eps = np.asarray(self.onsite_disorder, dtype=float)
            if eps.ndim != 1 or not np.all(np.isfinite(eps)):
                raise ValueError("onsite_disorder must be a finite 1-D vector")
            eps.setflags(write=False)
            object.__setattr__(self, "onsite_disorder", eps)
        scale = abs(self.delta_eps)
        if max(abs(self.delta_pair), abs(self.gamma_single)) > 0.25 * scale:
            warnings.warn(
                "number-changing couplings are not small compared to delta_eps; "
                "the few-particle truncation may be inaccurate",
                stacklevel=3,
            )

    @property
    def conserves_number(self) -> bool:
        return self.delta_pair == 0 and self.gamma_single == 0

    def site_energies(self, n: int) -> np.ndarray:
        if self.onsite_disorder is None:
            return np.full(n, float(self.delta_eps))
        if self.onsite_disorder.shape != (n,):
            raise ValueError(
                f"onsite_disorder has length {self.onsite_disorder.shape[0]}, expected {n}"
            )
        return self.delta_eps + self.onsite_disorder

    def with_disorder(self, eps) -> "ModelParams":
        return replace(self, onsite_disorder=None if eps is None else np.asarray(eps, float))

    def as_dict(self) -> dict:
        out = {
            "delta_eps": self.delta_eps,
            "t_hop": self.t_hop,
            "v_int": self.v_int,
            "delta_pair": self.delta_pair,
            "gamma_single": self.gamma_single,
        }
        if self.onsite_disorder is not None:
            out["onsite_disorder"] = self.onsite_disorder.tolist()
        return out
