"""Parameter algebra for the sextic doubly anharmonic oscillator.

The potential is V(x) = omega2*x^2/2 + lam*x^4/4 + eta*x^6/6 with eta > 0.
Working quantities:

    a = (lam/4) * sqrt(3/eta)
    b = sqrt(eta/3)                  (> 0)
    c = omega2 + sqrt(3*eta) - 3*lam^2/(16*eta)
    gamma = sqrt(3/eta) * (3*lam^2/(16*eta) - omega2)

A polynomial (quasi-exact) solution of degree index N and parity eps exists
iff gamma = 4N + 3 + 2*eps, equivalently c + 2b(2N + eps) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidCouplingError, NoSolutionError


@dataclass(frozen=True)
class CouplingParams:
    """Physical couplings (omega2 may be negative; the x^4/x^6 terms confine)."""

    omega_sq: float
    lam: float
    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise InvalidCouplingError(f"eta must be > 0, got {self.eta}")


@dataclass(frozen=True)
class ReducedParams:
    """Derived quantities a, b, c, gamma; b > 0 and c + b*gamma = sqrt(3*eta)."""

    a: float
    b: float
    c: float
    gamma: float

    @property
    def eta(self) -> float:
        return 3.0 * self.b**2

    @property
    def lam(self) -> float:
        return 4.0 * self.a * self.b

    def omega_sq(self, gamma: float | None = None) -> float:
        """Coupling omega2 implied by (a, b) and the given (or stored) gamma."""
        g = self.gamma if gamma is None else gamma
        return self.a**2 - g * self.b


@dataclass(frozen=True)
class QesIndex:
    """Degree index N (polynomial degree in x^2) and parity eps in {0, 1}."""

    n_cap: int
    parity: int

    def __post_init__(self):
        if self.n_cap < 0:
            raise ValueError(f"N must be >= 0, got {self.n_cap}")
        if self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")


def reduce(p: CouplingParams) -> ReducedParams:
    """Map physical couplings to the reduced quantities (a, b, c, gamma)."""
    s = math.sqrt(3.0 / p.eta)
    a = 0.25 * p.lam * s
    b = math.sqrt(p.eta / 3.0)
    c = p.omega_sq + math.sqrt(3.0 * p.eta) - 3.0 * p.lam**2 / (16.0 * p.eta)
    gamma = s * (3.0 * p.lam**2 / (16.0 * p.eta) - p.omega_sq)
    return ReducedParams(a=a, b=b, c=c, gamma=gamma)


def constraint_gamma(idx: QesIndex) -> float:
    """Required value of gamma for a degree-N, parity-eps polynomial solution."""
    return float(4 * idx.n_cap + 3 + 2 * idx.parity)


def gamma_residual(p: CouplingParams, idx: QesIndex) -> float:
    """Signed mismatch gamma(p) - (4N + 3 + 2*eps)."""
    return reduce(p).gamma - constraint_gamma(idx)


def solve_constraint(
    idx: QesIndex,
    omega_sq: float | None = None,
    lam: float | None = None,
    eta: float | None = None,
) -> list[CouplingParams]:
    """Solve the coupling constraint for the one unspecified coupling.

    Exactly one of omega_sq, lam, eta must be None.  Returns all admissible
    solutions (one for omega2, up to two for lam, any number of positive
    roots for eta), sorted by the solved value.
    """
    unknowns = [name for name, v in (("omega_sq", omega_sq), ("lam", lam), ("eta", eta)) if v is None]
    if len(unknowns) != 1:
        raise ValueError(f"exactly one coupling must be unknown, got {unknowns or 'none'}")
    g = constraint_gamma(idx)

    if omega_sq is None:
        # linear: omega2 = 3*lam^2/(16*eta) - gamma*sqrt(eta/3)
        if not eta > 0:
            raise InvalidCouplingError(f"eta must be > 0, got {eta}")
        w = 3.0 * lam**2 / (16.0 * eta) - g * math.sqrt(eta / 3.0)
        return [CouplingParams(w, lam, eta)]

    if lam is None:
        if not eta > 0:
            raise InvalidCouplingError(f"eta must be > 0, got {eta}")
        rhs = 16.0 * eta * (g * math.sqrt(eta / 3.0) + omega_sq) / 3.0
        if rhs < 0:
            raise NoSolutionError(
                f"no real lam satisfies the constraint (lam^2 = {rhs:.6g} < 0)"
            )
        root = math.sqrt(rhs)
        sols = {root, -root}
        return [CouplingParams(omega_sq, l, eta) for l in sorted(sols)]

    return _solve_eta(omega_sq, lam, g)


def _solve_eta(omega_sq: float, lam: float, g: float) -> list[CouplingParams]:
    """Bracket and bisect the constraint as a scalar equation in eta > 0."""

    def f(eta: float) -> float:
        return math.sqrt(3.0 / eta) * (3.0 * lam**2 / (16.0 * eta) - omega_sq) - g

    # log-spaced scan for sign changes; robustness over speed for a scalar solve
    import numpy as np

    grid = np.logspace(-12, 12, 2001)
    vals = np.array([f(e) for e in grid])
    roots: list[float] = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if f(lo) * f(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    if not roots:
        raise NoSolutionError(
            f"no eta > 0 satisfies the constraint for omega2={omega_sq}, lam={lam}, gamma={g}"
        )
    return [CouplingParams(omega_sq, lam, e) for e in sorted(roots)]
