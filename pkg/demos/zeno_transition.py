"""Measurement-modified decay: from the Zeno to the inverse Zeno regime.

Projective measurements at interval tau reset the decay; the survival
after N measurements is P(tau)^N = exp(-gamma(tau) N tau) with
gamma(tau) = -ln P(tau)/tau.  Whether measurement slows decay down
(Zeno) or speeds it up (inverse Zeno) depends on how gamma(tau)
compares with the undisturbed rate gamma0 — and the crossing point
tau* exists whenever the renormalization Z is below 1.

This demo sweeps the detuning omega_a and reports, per model, the
existence criterion, the transition time, and the jump-time estimate
gamma0 * tau_Z^2.

Run:  python3 demos/zeno_transition.py
"""

import numpy as np

from zenodecay.formfactor import LorentzianCoupling
from zenodecay.model import DecayModel
from zenodecay.zeno import (
    classify_regime,
    effective_rate,
    existence_criteria,
    find_transition_time,
)

LAM, BW = 0.1, 1.0


def main():
    print(f"Lorentzian coupling lambda={LAM}, bandwidth={BW}")
    print(f"{'omega_a':>8} {'Z':>10} {'Z<1':>5} {'tau*':>12} {'jump time':>12}")
    for omega_a in (0.0, 0.5, 0.8, 1.5, 2.0, 5.0, 10.0):
        model = DecayModel(LorentzianCoupling(LAM, BW), omega_a)
        report = find_transition_time(model)
        crit = existence_criteria(model)
        tau_star = f"{report.tau_star:.6g}" if report.tau_star is not None else "none"
        print(f"{omega_a:8.1f} {model.z_renorm:10.6f} {str(crit.z_less_1):>5} "
              f"{tau_star:>12} {report.jump_time:12.6g}")
    print()

    model = DecayModel(LorentzianCoupling(LAM, BW), 2.0)
    report = find_transition_time(model)
    print(f"detail at omega_a=2: tau* = {report.tau_star:.9g}")
    for tau in (0.1 * report.tau_star, report.tau_star, 4.0 * report.tau_star):
        gamma = effective_rate(model, tau)
        regime = classify_regime(model, tau).value
        print(f"  tau = {tau:9.5f}: gamma(tau)/gamma0 = {gamma / model.gamma0:8.5f}  "
              f"-> {regime}")
    print()

    taus = np.geomspace(1e-3, 30.0, 9)
    print("gamma(tau)/gamma0 along the curve (note the linear rise ~ tau):")
    for tau in taus:
        bar = "#" * max(1, int(40 * min(2.0, effective_rate(model, tau) / model.gamma0)))
        print(f"  tau = {tau:9.4f}  {bar}")


if __name__ == "__main__":
    main()
