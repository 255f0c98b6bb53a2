"""Resonance pole of the level propagator and derived quantities.

For a discrete level of energy ``omega_a`` coupled to the continuum, the
propagator of the surviving component is 1/(E − omega_a − Sigma(E)).  On
the second sheet this has a simple pole

    E_pole = (omega_a + Delta) − i·gamma0/2,

whose real shift ``Delta``, width ``gamma0`` and squared-residue magnitude

    Z = |1 − Sigma'(E_pole)|^(−2)

control the exponential era of the decay, P(t) ≈ Z·exp(−gamma0·t).

:func:`find_pole` locates the pole by a damped complex Newton iteration on
f(E) = E − omega_a − Sigma_II(E), seeded at the second-order golden-rule
point omega_a + Delta_R(omega_a) − iπg²(omega_a).  For the Lorentzian
family the pole equation is the quadratic (E − omega_a)(E + iΛ) = λ², and
:func:`lorentzian_pole_closed_form` evaluates the explicit nested-radical
solution, falling back to the quadratic roots (the ground truth) if the
radical branch goes astray at strong coupling.

Threshold families can additionally split off a genuine bound state below
the continuum edge; :func:`find_bound_states` detects it and reports its
spectral weight, which the amplitude module must include to conserve
probability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import (
    BelowThresholdWarning,
    ContinuationUnsupportedError,
    ConvergenceError,
    DomainError,
    NoDecayError,
)
from .formfactor import FormFactor, LorentzianCoupling
from .selfenergy import Sheet, _sigma_first_quad, self_energy

__all__ = [
    "BoundState",
    "PoleData",
    "find_pole",
    "lorentzian_pole_closed_form",
    "golden_rule_rate",
    "find_bound_states",
]

_RESIDUAL_TOL = 1e-10
_NEWTON_TARGET = 1e-13


class BoundState(NamedTuple):
    """A real propagator pole below the continuum threshold.

    ``weight`` is the residue 1/(1 − Sigma'(E)) ∈ (0, 1); it is the
    probability permanently trapped in the discrete-continuum mixture.
    """

    energy: float
    weight: float


@dataclass(frozen=True)
class PoleData:
    """Second-sheet resonance pole and its derived decay parameters.

    Attributes
    ----------
    e_pole : complex
        Pole position, Im e_pole < 0.
    omega_a : float
        Discrete-level energy the pole belongs to.
    shift_delta : float
        Level shift Delta = Re e_pole − omega_a.
    gamma0 : float
        Decay rate, gamma0 = −2 Im e_pole > 0.
    z_renorm : float
        Wave-function renormalization |1 − Sigma'(e_pole)|^(−2).
    residual : float
        |e_pole − omega_a − Sigma_II(e_pole)|, the convergence witness.
    bound_states : tuple of BoundState
        Real poles below threshold, if any were detected.
    """

    e_pole: complex
    omega_a: float
    shift_delta: float
    gamma0: float
    z_renorm: float
    residual: float
    bound_states: tuple = field(default=())

    def __post_init__(self):
        if not (self.e_pole.imag < 0.0):
            raise ValueError(f"pole must lie in the lower half plane, got {self.e_pole!r}")
        if not (self.gamma0 > 0.0):
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not (self.z_renorm > 0.0):
            raise ValueError(f"z_renorm must be positive, got {self.z_renorm}")
        if not (self.residual >= 0.0 and math.isfinite(self.residual)):
            raise ValueError(f"residual must be finite and non-negative, got {self.residual}")


def _pole_data_from(E: complex, omega_a: float, z: float, residual: float,
                    bound_states=()) -> PoleData:
    return PoleData(
        e_pole=E,
        omega_a=omega_a,
        shift_delta=E.real - omega_a,
        gamma0=-2.0 * E.imag,
        z_renorm=z,
        residual=residual,
        bound_states=tuple(bound_states),
    )


def find_pole(ff: FormFactor, omega_a: float, max_steps: int = 200) -> PoleData:
    """Locate the second-sheet pole of the propagator by complex Newton.

    Parameters
    ----------
    ff : FormFactor
        Coupling family; must support analytic continuation.
    omega_a : float
        Discrete-level energy; must exceed the threshold for threshold
        families.
    max_steps : int
        Newton iteration budget.

    Returns
    -------
    PoleData
        The pole nearest the golden-rule seed, with residual below
        1e−10·max(1, |e_pole|), plus any detected bound states.

    Raises
    ------
    NoDecayError
        Zero coupling — the level does not decay and there is no pole.
    ContinuationUnsupportedError
        The family has no second sheet to search.
    DomainError
        omega_a at or below the continuum threshold.
    ConvergenceError
        Newton failed to meet the residual target within ``max_steps``;
        the exception carries the iterate trajectory.
    """
    omega_a = float(omega_a)
    if not math.isfinite(omega_a):
        raise DomainError(f"omega_a must be finite, got {omega_a!r}")
    if ff.g2_integral() == 0.0:
        raise NoDecayError("zero coupling: the level is stationary, no pole exists")
    if not ff.continuable:
        raise ContinuationUnsupportedError(
            f"{ff.family} family has no analytic continuation to search for a pole"
        )
    lo = ff.threshold
    if math.isfinite(lo) and omega_a <= lo:
        raise DomainError(
            f"omega_a={omega_a} must lie above the continuum threshold {lo}"
        )

    from .selfenergy import real_shift  # local import avoids cycle at module load

    scale = max(1.0, abs(omega_a), ff.bandwidth)
    seed = complex(omega_a + real_shift(ff, omega_a), -math.pi * float(ff.g2(omega_a)))
    if seed.imag == 0.0:
        seed -= 1j * 1e-12 * scale

    E = seed
    trajectory = [E]
    best = (math.inf, E)
    step_cap = 2.0 * ff.bandwidth
    converged = False
    for _ in range(max_steps):
        sv = self_energy(ff, E, Sheet.SECOND)
        f = E - omega_a - sv.value
        fabs = abs(f)
        if fabs < best[0]:
            best = (fabs, E)
        if fabs < _NEWTON_TARGET * max(1.0, abs(E)):
            converged = True
            break
        fprime = 1.0 - sv.derivative
        if fprime == 0:
            raise ConvergenceError("Newton derivative vanished", trajectory=trajectory)
        step = f / fprime
        if abs(step) > step_cap:
            step *= step_cap / abs(step)
        E = E - step
        if E.imag > 0.0:
            # The physical pole is below the axis; fold the iterate back.
            E = complex(E.real, -abs(E.imag))
        trajectory.append(E)

    if not converged:
        E = best[1]

    sv = self_energy(ff, E, Sheet.SECOND)
    residual = abs(E - omega_a - sv.value)
    if residual > _RESIDUAL_TOL * max(1.0, abs(E)):
        raise ConvergenceError(
            f"pole search stalled: residual {residual:.3e} after {max_steps} steps",
            trajectory=trajectory,
        )
    if E.imag >= 0.0:
        raise ConvergenceError(
            f"search converged to a non-decaying root {E!r}", trajectory=trajectory
        )
    z = abs(1.0 - sv.derivative) ** -2.0

    bound = ()
    if math.isfinite(lo):
        bound = find_bound_states(ff, omega_a)
    return _pole_data_from(E, omega_a, z, residual, bound)


def _lorentzian_quadratic_roots(lam: float, bandwidth: float, omega_a: float):
    """Both roots of (E − omega_a)(E + iΛ) = λ², best first.

    Ordering: smaller |Im| first; ties broken by larger residue magnitude,
    then by Re ≥ 0 for determinism in the symmetric strong-coupling case.
    """
    roots = np.roots([1.0, 1j * bandwidth - omega_a, -(1j * bandwidth * omega_a + lam**2)])

    def sort_key(E):
        den = E + 1j * bandwidth
        resid_mag = abs(1.0 / (1.0 + lam**2 / den**2)) if den != 0 else 0.0
        return (abs(E.imag), -resid_mag, -E.real)

    return sorted((complex(r) for r in roots), key=sort_key)


def lorentzian_pole_closed_form(coupling: float, bandwidth: float, omega_a: float) -> PoleData:
    """Explicit Lorentzian pole via the nested-radical solution.

    Evaluates, with Ω² = omega_a² + 4λ² − Λ² and S = sqrt(Ω⁴ + 4·omega_a²Λ²),

        Delta  = −omega_a/2 + sign(omega_a)·sqrt((S + Ω²)/2)/2,
        gamma0 = Λ − sqrt((S − Ω²)/2),

    and Z from the closed expression

        Z = [(omega_a+Δ)² + (Λ−γ₀/2)²] / [(omega_a+2Δ)² + (Λ−γ₀)²].

    The radicals presuppose a branch; the quadratic roots of
    (E − omega_a)(E + iΛ) = λ² are the ground truth, and whenever the
    radical values fail to satisfy the pole equation to 1e−10 the
    longest-lived quadratic root is used instead.

    Parameters
    ----------
    coupling, bandwidth : float
        λ > 0 and Λ > 0.
    omega_a : float
        Discrete-level energy (any real value).

    Returns
    -------
    PoleData
    """
    lam = float(coupling)
    bw = float(bandwidth)
    omega_a = float(omega_a)
    if not (lam > 0.0) or not math.isfinite(lam):
        raise NoDecayError(f"coupling must be positive, got {lam}")
    if not (bw > 0.0) or not math.isfinite(bw):
        raise ValueError(f"bandwidth must be positive, got {bw}")
    if not math.isfinite(omega_a):
        raise DomainError(f"omega_a must be finite, got {omega_a!r}")

    omega2 = omega_a**2 + 4.0 * lam**2 - bw**2
    s = math.sqrt(omega2**2 + 4.0 * omega_a**2 * bw**2)
    u = math.sqrt(max(s + omega2, 0.0) / 2.0)
    v = math.sqrt(max(s - omega2, 0.0) / 2.0)
    delta = -omega_a / 2.0 + float(np.sign(omega_a)) * u / 2.0
    gamma0 = bw - v
    candidate = complex(omega_a + delta, -gamma0 / 2.0)

    scale = max(1.0, abs(candidate))
    roots = _lorentzian_quadratic_roots(lam, bw, omega_a)
    best = roots[0]

    def pole_eq_residual(E):
        return abs((E - omega_a) * (E + 1j * bw) - lam**2)

    # Radicals win when they solve the pole equation and match the
    # designated root; otherwise trust the quadratic.
    if pole_eq_residual(candidate) > 1e-10 * scale or abs(candidate - best) > 1e-10 * scale:
        candidate = best
        delta = candidate.real - omega_a
        gamma0 = -2.0 * candidate.imag
    if not (candidate.imag < 0.0):
        raise DomainError(
            f"no decaying pole for coupling={lam}, bandwidth={bw}, omega_a={omega_a}"
        )

    z = ((omega_a + delta) ** 2 + (bw - gamma0 / 2.0) ** 2) / (
        (omega_a + 2.0 * delta) ** 2 + (bw - gamma0) ** 2
    )
    residual = abs(candidate - omega_a - lam**2 / (candidate + 1j * bw))
    return _pole_data_from(candidate, omega_a, z, residual)


def golden_rule_rate(ff: FormFactor, omega_a: float) -> float:
    """Weak-coupling on-shell decay rate 2π·g²(omega_a).

    Below the continuum threshold the density vanishes and the rate is
    zero; a :class:`BelowThresholdWarning` flags that case.
    """
    omega_a = float(omega_a)
    if not math.isfinite(omega_a):
        raise DomainError(f"omega_a must be finite, got {omega_a!r}")
    lo = ff.threshold
    if math.isfinite(lo) and omega_a < lo:
        warnings.warn(
            f"omega_a={omega_a} lies below the continuum threshold {lo}; "
            "the on-shell rate is zero",
            BelowThresholdWarning,
            stacklevel=2,
        )
        return 0.0
    return 2.0 * math.pi * float(ff.g2(omega_a))


def find_bound_states(ff: FormFactor, omega_a: float) -> tuple:
    """Scan for a real propagator pole below the continuum threshold.

    The level function F(E) = E − omega_a − Sigma_I(E) is strictly
    increasing on (−∞, threshold) because Sigma_I' < 0 there, so at most
    one bound state exists; it does iff F just below the edge is positive.

    Returns
    -------
    tuple of BoundState
        Empty for families without a finite threshold (no real axis below
        the continuum) and at weak coupling.
    """
    omega_a = float(omega_a)
    lo = ff.threshold
    if not math.isfinite(lo) or ff.g2_integral() == 0.0:
        return ()

    def level_fn(E):
        # Value-only path: the derivative quadrature is needlessly hard
        # (and fragile) this close to the branch point.
        sigma = _sigma_first_quad(ff, complex(E, 0.0))
        return E - omega_a - sigma.real

    edge = lo - 1e-6 * max(1.0, ff.bandwidth)
    if level_fn(edge) <= 0.0:
        return ()
    span = max(ff.bandwidth, abs(omega_a - lo), 1.0)
    low = lo - span
    for _ in range(60):
        if level_fn(low) < 0.0:
            break
        low = lo - 2.0 * (lo - low)
    else:
        return ()
    energy = optimize.brentq(level_fn, low, edge, xtol=1e-14, rtol=8.9e-16)
    sv = self_energy(ff, complex(energy, 0.0), Sheet.FIRST)
    weight = 1.0 / (1.0 - sv.derivative.real)
    return (BoundState(float(energy), float(weight)),)
