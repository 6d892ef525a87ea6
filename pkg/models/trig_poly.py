from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List

import numpy as np

# Evaluation is chunked so that len(x) * D cosine tables stay small.
_EVAL_CHUNK = 1 << 14


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Even real 1-periodic trigonometric polynomial

        f(x) = c0 + 2 * sum_{k=1..D} c_k cos(2 pi k x),

    so that c_k is the Fourier coefficient f^(k) = f^(-k).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("a trigonometric polynomial needs at least c0")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls(np.array([value], dtype=float))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def mass(self) -> float:
        """f^(0), the mean of f over one period."""
        return float(self.coeffs[0])

    def coeff(self, k: int) -> float:
        k = abs(k)
        return float(self.coeffs[k]) if k <= self.degree else 0.0

    def value_at_zero(self) -> float:
        return float(self.coeffs[0] + 2.0 * self.coeffs[1:].sum())

    def sup_norm_bound(self) -> float:
        """B = |c0| + 2 sum |c_k| >= max |f|."""
        return float(abs(self.coeffs[0]) + 2.0 * np.abs(self.coeffs[1:]).sum())

    def active_degree(self, tol: float = 1e-9) -> int:
        nz = np.flatnonzero(np.abs(self.coeffs) > tol)
        return int(nz[-1]) if nz.size else 0

    def evaluate(self, x):
        """Evaluate at a scalar or array of points; returns the same shape."""
        xs = np.asarray(x, dtype=float)
        flat = xs.reshape(-1)
        out = np.empty(flat.size, dtype=float)
        ks = np.arange(1, self.degree + 1, dtype=float)
        tail = self.coeffs[1:]
        for start in range(0, flat.size, _EVAL_CHUNK):
            chunk = flat[start:start + _EVAL_CHUNK]
            if ks.size:
                table = np.cos(2.0 * np.pi * np.outer(chunk, ks))
                out[start:start + chunk.size] = self.coeffs[0] + 2.0 * (table @ tail)
            else:
                out[start:start + chunk.size] = self.coeffs[0]
        if xs.ndim == 0:
            return float(out[0])
        return out.reshape(xs.shape)

    __call__ = evaluate

    def with_coeffs(self, coeffs: Iterable[float]) -> "TrigPoly":
        return TrigPoly(np.asarray(list(coeffs), dtype=float))

    def scaled(self, s: float) -> "TrigPoly":
        return TrigPoly(self.coeffs * s)

    def to_list(self) -> List[float]:
        return [float(c) for c in self.coeffs]

    def allclose(self, other: "TrigPoly", atol: float = 1e-10) -> bool:
        size = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(size)
        b = np.zeros(size)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.allclose(a, b, rtol=0.0, atol=atol))

    def __repr__(self):
        shown = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if self.coeffs.size > 6 else ""
        return f"<TrigPoly(degree={self.degree}, coeffs=[{shown}{more}])>"


@dataclass(frozen=True)
class CertifiedExtremum:
    """Rigorous lower bound for min f on [lo, hi].

    bound <= true minimum always holds; margin is the gap between the best
    sampled value and the bound.
    """

    bound: float
    grid_points: int
    sup_norm_bound: float
    derivative_bound: float
    margin: float
    lo: float = 0.0
    hi: float = 0.5
    sample_min: float = 0.0
    argmin: float = 0.0
    second_derivative_bound: float = 0.0
    capped: bool = False
