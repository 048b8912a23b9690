"""What the eavesdropper sees in a single pulse.

Her interferometer arm routes the pulse energy between two single-photon
detectors according to the encoding phase, while her homodyne arm returns
a Gaussian outcome whose mean carries that phase.  With the source only
partially phase-randomized, the outcome distributions for the four
protocol phases stay well separated, which is the whole opening for the
attack: this script prints the click probabilities and writes the
phase-averaged outcome curves to CSV for plotting.
"""

import csv
import math
from pathlib import Path

import numpy as np

from decoyattack import EveParams, PHASE_ALPHABET, phase_averaged_pdf, spd_click_probs

OUT = Path(__file__).resolve().parent / "output"


def main():
    eve = EveParams()
    omega, delta = 0.3, math.pi / 4

    print(f"pulse intensity {omega}, randomization window {math.degrees(delta):.0f} deg\n")
    print("encoding phase   P(D0 clicks)  P(D1 clicks)  mean outcome")
    for theta in PHASE_ALPHABET:
        p_d0, p_d1 = spd_click_probs(omega, theta, eve)
        mean = math.sqrt(omega) * math.cos(theta) / 2.0
        print(f"  {math.degrees(theta):6.0f} deg     {p_d0:.6f}      {p_d1:.6f}      {mean:+.4f}")

    print("\nThe two detectors fire asymmetrically except for the conjugate-basis")
    print("phases, and the homodyne mean flips sign between opposite phases:")
    print("thresholding the outcome separates them.")

    OUT.mkdir(exist_ok=True)
    path = OUT / "outcome_distributions.csv"
    xs = np.linspace(-2.0, 2.0, 401)
    curves = [phase_averaged_pdf(xs, omega, th, 0.0, delta, eve) for th in PHASE_ALPHABET]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x"] + [f"pdf_theta_{int(math.degrees(t))}" for t in PHASE_ALPHABET])
        for i, x in enumerate(xs):
            writer.writerow([f"{x:.6f}"] + [f"{c[i]:.10e}" for c in curves])
    print(f"\nwrote the four phase-averaged outcome densities to {path}")


if __name__ == "__main__":
    main()
