"""Double-well potentials, their first integrals, and the surface tension constant.

The default potential is the quartic W(t) = t^2 (1-t)^2 with wells at 0 and 1,
for which the first integral and the tension constant are closed-form.
Tabulated potentials (piecewise-linear interpolants of (t, W) samples) support
energy evaluation only; derivative-based solvers reject them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import CapabilityError


@dataclass(frozen=True)
class DoubleWell:
    """Nonnegative potential vanishing exactly at the phase values 0 and 1.

    Quartic instances satisfy the growth bounds
    ``growth_constant * |t|**p <= W(t) <= |t|**p / growth_constant``
    for ``|t| >= growth_threshold`` with ``p = growth_exponent``.
    """

    kind: str  # "quartic" | "tabulated"
    growth_exponent: float = 4.0
    growth_constant: float = 0.125
    growth_threshold: float = 2.0
    knots: np.ndarray | None = field(default=None, repr=False)
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("quartic", "tabulated"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "tabulated":
            knots = np.asarray(self.knots, dtype=float)
            samples = np.asarray(self.samples, dtype=float)
            if knots.ndim != 1 or knots.shape != samples.shape or knots.size < 2:
                raise ValueError("tabulated potential needs matching 1d knot/sample arrays")
            if not np.all(np.diff(knots) > 0):
                raise ValueError("tabulated knots must be strictly increasing")
            if np.any(samples < 0):
                raise ValueError("tabulated potential must be nonnegative")
            if knots[0] > 0.0 or knots[-1] < 1.0:
                raise ValueError("tabulated knots must cover [0, 1]")
            scale = samples.max() if samples.size else 1.0
            for well in (0.0, 1.0):
                if abs(np.interp(well, knots, samples)) > 1e-15 * max(scale, 1.0):
                    raise ValueError(f"potential must vanish at the well t={well:g}")
            knots.setflags(write=False)
            samples.setflags(write=False)
            object.__setattr__(self, "knots", knots)
            object.__setattr__(self, "samples", samples)

    @classmethod
    def quartic(cls) -> "DoubleWell":
        """The default well W(t) = t^2 (1-t)^2."""
        return cls(kind="quartic")

    @classmethod
    def tabulated(cls, knots, samples) -> "DoubleWell":
        return cls(kind="tabulated", knots=knots, samples=samples,
                   growth_exponent=2.0, growth_constant=np.nan,
                   growth_threshold=np.nan)

    @classmethod
    def from_file(cls, path) -> "DoubleWell":
        """Load a tabulated potential from a two-column text file (t, W per line)."""
        rows = []
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected two columns, got {len(parts)}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
        if len(rows) < 2:
            raise ValueError(f"{path}: need at least two samples")
        arr = np.array(rows, dtype=float)
        return cls.tabulated(arr[:, 0], arr[:, 1])

    @property
    def differentiable(self) -> bool:
        return self.kind == "quartic"

    def evaluate(self, t, order: int = 0):
        """Evaluate W (order 0) or W' (order 1) at scalar or array argument."""
        if order not in (0, 1):
            raise ValueError(f"order must be 0 or 1, got {order}")
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise ValueError("potential argument must be finite")
        if self.kind == "quartic":
            if order == 0:
                out = t * t * (1.0 - t) ** 2
            else:
                out = 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t)
        else:
            if order == 1:
                raise CapabilityError(
                    "tabulated potentials are piecewise linear and expose no derivative")
            if np.any(t < self.knots[0]) or np.any(t > self.knots[-1]):
                raise ValueError("argument outside the tabulated range")
            out = np.interp(t, self.knots, self.samples)
        return float(out) if out.ndim == 0 else out

    def __call__(self, t, order: int = 0):
        return self.evaluate(t, order=order)

    def sqrt_well(self, t):
        """sqrt(W(t)); closed form |t(1-t)| for the quartic."""
        if self.kind == "quartic":
            t = np.asarray(t, dtype=float)
            out = np.abs(t * (1.0 - t))
            return float(out) if out.ndim == 0 else out
        return np.sqrt(self.evaluate(t))

    def first_integral(self, r):
        """theta(r) = integral of sqrt(W) from 0 to r, for scalar or array r.

        Closed form for the quartic; for tabulated potentials the integral of
        sqrt of the piecewise-linear interpolant is taken segment by segment
        in closed form (exact, so the 1e-10 accuracy target is free).
        """
        r_arr = np.asarray(r, dtype=float)
        if not np.all(np.isfinite(r_arr)):
            raise ValueError("first_integral argument must be finite")
        if self.kind == "quartic":
            out = _theta_quartic(r_arr)
        else:
            if np.any(r_arr < self.knots[0]) or np.any(r_arr > self.knots[-1]):
                raise ValueError("argument outside the tabulated range")
            out = self._theta_tabulated(r_arr)
        return float(out) if out.ndim == 0 else out

    def _theta_tabulated(self, x: np.ndarray) -> np.ndarray:
        knots, samples = self.knots, self.samples
        cache = getattr(self, "_theta_cache", None)
        if cache is None:
            dt = np.diff(knots)
            w0, w1 = samples[:-1], samples[1:]
            slopes = (w1 - w0) / dt
            flat = slopes == 0.0
            safe = np.where(flat, 1.0, slopes)
            segments = np.where(flat, np.sqrt(w0) * dt,
                                2.0 / (3.0 * safe) * (w1**1.5 - w0**1.5))
            cumulative = np.concatenate([[0.0], np.cumsum(segments)])
            cache = (slopes, cumulative)
            object.__setattr__(self, "_theta_cache", cache)
            object.__setattr__(self, "_theta_origin",
                               float(self._theta_raw(np.asarray(0.0), *cache)))
        return self._theta_raw(x, *cache) - self._theta_origin

    def _theta_raw(self, x, slopes, cumulative):
        # integral of sqrt(W) from the first knot up to x
        knots, samples = self.knots, self.samples
        i = np.clip(np.searchsorted(knots, x, side="right") - 1, 0,
                    len(knots) - 2)
        w0 = samples[i]
        m = slopes[i]
        wx = w0 + m * (x - knots[i])
        flat = m == 0.0
        safe = np.where(flat, 1.0, m)
        partial = np.where(flat, np.sqrt(w0) * (x - knots[i]),
                           2.0 / (3.0 * safe) * (wx**1.5 - w0**1.5))
        return cumulative[i] + partial

    def tension_constant(self) -> float:
        """k = theta(1); the sharp interface carries energy 2k per unit length."""
        return self.first_integral(1.0)

    def optimal_profile(self) -> Callable[[np.ndarray], np.ndarray]:
        """The increasing 1d transition profile s with s' = sqrt(W(s)), s(0) = 1/2.

        For the quartic this is the logistic 1/(1+exp(-t)); otherwise the
        profile is built numerically by inverting t(u) = int_{1/2}^u dr/sqrt(W).
        Returned callable clamps its output to [0, 1].
        """
        if self.kind == "quartic":
            def profile(t):
                t = np.asarray(t, dtype=float)
                out = 1.0 / (1.0 + np.exp(-np.clip(t, -700.0, 700.0)))
                return float(out) if out.ndim == 0 else out
            return profile
        return self._numeric_profile()

    def _numeric_profile(self) -> Callable[[np.ndarray], np.ndarray]:
        # Invert t(u) = int_{1/2}^u dr/sqrt(W(r)) on a grid stopping short of
        # the wells (the integrand blows up there); beyond the grid the
        # profile saturates at the wells.
        margin = 1e-4
        us = np.linspace(margin, 1.0 - margin, 2001)
        integrand = 1.0 / np.maximum(self.sqrt_well(us), 1e-300)
        ts = integrate.cumulative_trapezoid(integrand, us, initial=0.0)
        ts -= np.interp(0.5, us, ts)

        def profile(t):
            t = np.asarray(t, dtype=float)
            out = np.interp(t, ts, us, left=0.0, right=1.0)
            return float(out) if out.ndim == 0 else out

        return profile

    def check_growth(self, ts) -> bool:
        """Sample the growth bounds c|t|^p <= W(t) <= |t|^p / c for |t| >= T."""
        ts = np.asarray(ts, dtype=float)
        ts = ts[np.abs(ts) >= self.growth_threshold]
        if ts.size == 0:
            return True
        w = self.evaluate(ts)
        power = np.abs(ts) ** self.growth_exponent
        c = self.growth_constant
        return bool(np.all(c * power <= w) and np.all(w <= power / c))


def _theta_quartic(r: np.ndarray) -> np.ndarray:
    # sqrt(W) = |t(1-t)|; antiderivative stitched at the wells
    inner = r * r / 2.0 - r**3 / 3.0
    out = np.where(r <= 0.0, r**3 / 3.0 - r * r / 2.0, inner)
    return np.where(r >= 1.0, 1.0 / 3.0 + r**3 / 3.0 - r * r / 2.0, out)
