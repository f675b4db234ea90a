"""Bounded real potentials V(x) on a symmetric interval [-a, a].

Units are fixed to hbar = 2m = 1 so the operator reads -d^2/dx^2 + V(x).
Supported shapes: zero, square finite well, harmonic c*x^2, cosine,
polynomial, and piecewise polynomial.  All values are finite by
construction; distributional potentials (delta spikes) cannot be
expressed.  Evaluation at an interior jump uses the right-limit value so
results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, PotentialError

# kinds that are even by construction: the parity check short-circuits
_EVEN_BY_CONSTRUCTION = frozenset({"zero", "finite-well", "harmonic", "cosine"})

_KINDS = ("zero", "finite-well", "harmonic", "cosine", "polynomial", "piecewise")

_PARITY_GRID = 1001  # fixed sampling grid for the parity check


def _require_finite(name, value):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise PotentialError(f"{name} must be numeric, got {value!r}") from exc
    if not np.all(np.isfinite(arr)):
        raise PotentialError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Potential:
    """A bounded, piecewise-continuous real potential on [-a, a].

    Construct through the factory classmethods (``Potential.zero`` etc.)
    or ``from_json``; instances are immutable and safe to share.
    """

    kind: str
    a: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        if not (np.isfinite(self.a) and self.a > 0):
            raise PotentialError(f"half-width a must be positive and finite, got {self.a}")
        validator = getattr(self, "_validate_" + self.kind.replace("-", "_"))
        validator()

    # -- per-kind validation ------------------------------------------------

    def _validate_zero(self):
        pass

    def _validate_finite_well(self):
        depth = _require_finite("depth", self.params.get("depth"))
        hw = _require_finite("half_width", self.params.get("half_width"))
        if not 0 < hw < self.a:
            raise PotentialError(f"well half_width must lie in (0, a), got {hw}")
        del depth

    def _validate_harmonic(self):
        _require_finite("coefficient", self.params.get("coefficient"))

    def _validate_cosine(self):
        _require_finite("amplitude", self.params.get("amplitude"))
        _require_finite("wavenumber", self.params.get("wavenumber"))

    def _validate_polynomial(self):
        coeffs = self.params.get("coefficients")
        if coeffs is None or len(coeffs) == 0:
            raise PotentialError("polynomial requires a non-empty coefficient list")
        _require_finite("coefficients", coeffs)

    def _validate_piecewise(self):
        pieces = self.params.get("pieces")
        if not pieces:
            raise PotentialError("piecewise requires at least one piece")
        prev = -self.a
        for piece in pieces:
            lo, hi = piece["interval"]
            _require_finite("interval", [lo, hi])
            _require_finite("coefficients", piece["coefficients"])
            if abs(lo - prev) > 1e-12 * max(1.0, self.a):
                raise PotentialError(f"pieces must tile [-a, a]; gap/overlap at {lo}")
            if hi <= lo:
                raise PotentialError(f"empty piece interval [{lo}, {hi}]")
            prev = hi
        if abs(prev - self.a) > 1e-12 * max(1.0, self.a):
            raise PotentialError("pieces must cover the interval up to x = a")

    # -- factories ------------------------------------------------------------

    @classmethod
    def zero(cls, a):
        return cls("zero", float(a))

    @classmethod
    def finite_well(cls, depth, half_width, a):
        return cls("finite-well", float(a), {"depth": float(depth), "half_width": float(half_width)})

    @classmethod
    def harmonic(cls, coefficient, a):
        return cls("harmonic", float(a), {"coefficient": float(coefficient)})

    @classmethod
    def cosine(cls, amplitude, wavenumber, a):
        return cls("cosine", float(a), {"amplitude": float(amplitude), "wavenumber": float(wavenumber)})

    @classmethod
    def polynomial(cls, coefficients, a):
        return cls("polynomial", float(a), {"coefficients": [float(c) for c in coefficients]})

    @classmethod
    def piecewise(cls, pieces, a):
        """pieces: iterable of ((lo, hi), coefficients) with ascending coefficients."""
        norm = [{"interval": [float(lo), float(hi)], "coefficients": [float(c) for c in cs]}
                for (lo, hi), cs in pieces]
        return cls("piecewise", float(a), {"pieces": norm})

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, x):
        """Return V(x) for x in [-a, a]; right-limit value at a jump."""
        x = float(x)
        if x < -self.a - 4e-16 * self.a or x > self.a + 4e-16 * self.a:
            raise DomainError(f"x = {x} outside [-{self.a}, {self.a}]")
        x = min(max(x, -self.a), self.a)
        if self.kind == "zero":
            return 0.0
        if self.kind == "harmonic":
            return self.params["coefficient"] * x * x
        if self.kind == "cosine":
            return float(self.params["amplitude"] * np.cos(self.params["wavenumber"] * x))
        if self.kind == "finite-well":
            hw = self.params["half_width"]
            # right-limit convention: x = -hw is inside, x = +hw is outside
            return self.params["depth"] if -hw <= x < hw else 0.0
        if self.kind == "polynomial":
            return float(npoly.polyval(x, self.params["coefficients"]))
        # piecewise: right-continuous, last piece owns x = a
        pieces = self.params["pieces"]
        for piece in pieces:
            lo, hi = piece["interval"]
            if lo <= x < hi:
                return float(npoly.polyval(x, piece["coefficients"]))
        return float(npoly.polyval(x, pieces[-1]["coefficients"]))

    def is_even(self, tol=1e-12):
        """True when V(-x) = V(x) within tol on a fixed 1001-point grid.

        Kinds that are even by construction (zero, finite-well, harmonic,
        cosine) short-circuit to True, as do polynomials with vanishing
        odd coefficients, so one-sided jump conventions cannot spoil the
        answer at a breakpoint.
        """
        if self.kind in _EVEN_BY_CONSTRUCTION:
            return True
        if self.kind == "polynomial":
            if all(c == 0.0 for c in self.params["coefficients"][1::2]):
                return True
        grid = np.linspace(-self.a, self.a, _PARITY_GRID)
        worst = max(abs(self.evaluate(x) - self.evaluate(-x)) for x in grid)
        return worst <= tol

    # -- structure used by the integrator --------------------------------------

    def breakpoints(self):
        """Sorted interior discontinuity abscissae (may be empty)."""
        if self.kind == "finite-well":
            hw = self.params["half_width"]
            return (-hw, hw)
        if self.kind == "piecewise":
            edges = [p["interval"][1] for p in self.params["pieces"][:-1]]
            return tuple(sorted(e for e in edges if -self.a < e < self.a))
        return ()

    def piece_callable(self, lo, hi):
        """Vectorized V on [lo, hi], which must contain no interior breakpoint.

        Unlike ``evaluate`` this uses the piece that owns the open interval
        (lo, hi), so the value at the right edge is the left limit: the
        integrator and quadrature never see the jump.
        """
        if self.kind == "zero":
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))
        if self.kind == "harmonic":
            c = self.params["coefficient"]
            return lambda x: c * np.square(x)
        if self.kind == "cosine":
            amp, wn = self.params["amplitude"], self.params["wavenumber"]
            return lambda x: amp * np.cos(wn * np.asarray(x))
        mid = 0.5 * (lo + hi)
        if self.kind == "finite-well":
            value = self.params["depth"] if abs(mid) < self.params["half_width"] else 0.0
            return lambda x: np.full_like(np.asarray(x, dtype=float), value)
        if self.kind == "polynomial":
            coeffs = self.params["coefficients"]
            return lambda x: npoly.polyval(np.asarray(x, dtype=float), coeffs)
        for piece in self.params["pieces"]:
            plo, phi = piece["interval"]
            if plo <= mid <= phi:
                coeffs = piece["coefficients"]
                return lambda x: npoly.polyval(np.asarray(x, dtype=float), coeffs)
        raise PotentialError(f"no piece covers [{lo}, {hi}]")

    def sup_norm(self):
        """Estimate of max |V| on [-a, a] (dense sampling per smooth piece)."""
        edges = (-self.a, *self.breakpoints(), self.a)
        worst = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            vals = self.piece_callable(lo, hi)(np.linspace(lo, hi, 513))
            worst = max(worst, float(np.max(np.abs(vals))))
        return worst

    # -- serialization ----------------------------------------------------------

    def to_json(self):
        return {"kind": self.kind, "a": self.a, "params": self.params}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["kind"], float(data["a"]), dict(data.get("params", {})))
        except KeyError as exc:
            raise PotentialError(f"potential descriptor missing field {exc}") from exc
