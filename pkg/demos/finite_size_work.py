"""Where the finite-size work cost actually moves.

For some channels the exact dilation V^(x n) is already as cheap as Gibbs
sub-preservation allows, the typicality operator cuts nothing at the default
slack, and the per-copy work sits at a constant. Amplitude damping is not
such a channel: its exact dilation costs strictly more than T(E), and
tightening the slack schedule lets the typicality projection pare the
expensive sectors, driving the per-copy work down toward the capacity while
giving up a controlled amount of fidelity.

    python3 demos/finite_size_work.py
"""

import numpy as np

from thermocap import (
    ThermoContext,
    TypicalityParams,
    build_universal_implementation,
    channel_from_kraus,
    gibbs_weight,
    iid_accuracy,
    thermo_capacity,
    work_cost,
)

ctx = ThermoContext(beta=1.0)
H = np.diag([0.0, 1.0])


def amplitude_damping(gamma):
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return channel_from_kraus([k0, k1], h_in=H, h_out=H)


# --- The gap that finite-size effects live in --------------------------------
# Per-copy work of the exact dilation: lambda_max of the Gibbs-weight image,
# constant in n. When it exceeds T(E) there is room for the typicality
# projection to save work.

ch = amplitude_damping(0.5)
cap = thermo_capacity(ch, ctx, tol=1e-8).value
gamma_w = gibbs_weight(H, ctx)
lam, u = np.linalg.eigh(gamma_w)
isqrt = (u / np.sqrt(lam)) @ u.conj().T
w_exact = float(np.log(np.linalg.eigvalsh(isqrt @ ch.apply(gamma_w) @ isqrt)[-1]))

print("amplitude damping, gamma = 0.5, H = diag(0, 1), beta = 1:")
print(f"  T(E)                  = {cap:.6f}")
print(f"  exact-dilation work   = {w_exact:.6f}")
print(f"  room to save          = {w_exact - cap:.6f} per copy")

# For contrast: the erasure channel has no room at all. Every outcome pair
# already satisfies the constraint at the capacity threshold, so W is the
# exact dilation and its work equals T(E) identically in n.

erasure = channel_from_kraus(
    [
        np.array([[1, 0], [0, 0]], dtype=complex),
        np.array([[0, 1], [0, 0]], dtype=complex),
    ],
    h_in=H,
    h_out=H,
)
cap_e = thermo_capacity(erasure, ctx, tol=1e-8).value
vals = []
for n in (2, 4, 6):
    impl = build_universal_implementation(erasure, n, ctx=ctx)
    vals.append(work_cost(impl, ctx))
print("\nerasure for comparison: work at n = 2, 4, 6 minus T(E):")
print(f"  {[f'{v - cap_e:+.1e}' for v in vals]}  (flat, nothing to cut)")

# --- Tightening the slack ----------------------------------------------------
# The constraint admits sectors up to T + eta with eta = c / sqrt(n). The
# default c = 2 is generous at desk scale; smaller c starts cutting.

sigma = np.diag([0.6, 0.4])
print("\nwork per copy / iid fidelity on diag(0.6, 0.4):")
print("  c        n = 2                n = 4                n = 6")
for coeff in (2.0, 0.5, 0.25):
    cells = []
    for n in (2, 4, 6):
        impl = build_universal_implementation(
            ch,
            n,
            params=TypicalityParams(threshold=cap, slack_coeff=coeff),
            ctx=ctx,
        )
        cells.append(
            f"{work_cost(impl, ctx):.5f} / {iid_accuracy(impl, sigma):.5f}"
        )
    print(f"  {coeff:<5}  " + "    ".join(cells))

print(
    "\nwith c = 0.25 the per-copy work falls from the exact-dilation cost"
    f" {w_exact:.4f}\ntoward T(E) = {cap:.4f} as n grows, while the fidelity"
    " stays above 0.84.\nThat is the asymptotic mechanism at desk scale: the"
    " guarantee is work <= T + eta,\nand the slack schedule decides how fast"
    " the bound is approached."
)
