"""Eve's decision statistics as a function of her dead-zone threshold.

A round is conclusive when the homodyne outcome clears the threshold on
the side whose detector clicked.  Raising the threshold trades rate for
confidence: conclusive rounds become rarer but her phase guess (and the
state she resends to Bob) gets cleaner.  Note the gap between Bob's error
rate and Eve's own, and how both fall as the dead zone widens.
"""

import numpy as np

from decoyattack import EveParams, SourceParams, attack_summary, resend_probs


def main():
    source = SourceParams()  # signal 0.48, decoy 0.10, 10-degree window
    print("threshold   P_succ      e_AB      e_AE")
    for x0 in np.arange(1.0, 2.0001, 0.1):
        s = attack_summary(source.mu, source, EveParams(x0=float(x0)))
        print(f"  x0={x0:4.1f}   {s.p_succ:.6f}  {s.e_ab:.5f}  {s.e_ae:.5f}")

    print("\nconditional resend matrix at x0=1.5 (rows: resend phase k*90deg,")
    print("columns: sent phase j*90deg):")
    probs = resend_probs(source.mu, source, EveParams(x0=1.5))
    for k in range(4):
        print("   " + "  ".join(f"{probs[k, j]:.3e}" for j in range(4)))
    column = probs.sum(axis=0)
    print("per-phase conclusive probability:", np.array2string(column, precision=3))
    print("the complement of each column sum is the vacuum-resend probability")


if __name__ == "__main__":
    main()
