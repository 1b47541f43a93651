"""Universal implementation of iid channel batches and its verification.

build_universal_implementation assembles W = M V^(x n) from the typicality
operator around the canonical dilation, clips it to a contraction, and wraps
it with a trace-preservation completion that routes the missing branch to
the output Gibbs state. work_cost reads off the per-copy work of the
W-branch through Gibbs sub-preservation; iid_accuracy and diamond_accuracy
measure how close the result stays to the ideal batch; naive_implementation
is the measure-then-prepare baseline that decoheres superpositions.
"""

from dataclasses import dataclass

import numpy as np

from .capacity import capacity_objective, thermo_capacity
from .channels import Channel, channel_from_kraus, stinespring, tensor_power
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidPOVMError,
    ValidationError,
)
from .sdp import diamond_distance
from .states import (
    ThermoContext,
    eigh_hermitian,
    gibbs_state,
    gibbs_weight,
    kron_power,
    lift_hamiltonian,
    make_density,
    partial_trace,
    permute_factors,
    permute_vector_factors,
    require_hermitian,
)
from .typicality import TypicalityParams, contraction_w, energy_povm, spectrum_povm

CONTRACTION_TOL = 1e-9
# diamond_accuracy assembles the full Choi difference; 64 = three qubit copies
DIAMOND_ACCURACY_BUDGET = 64
_EFFECT_FLOOR = 1e-12


@dataclass(frozen=True)
class Implementation:
    """The built contraction W with its completion and build metadata.

    w maps X^n to X'^n (x) E^n. The completion branch sends the weight
    missing from W^dag W to the state omega on X'^n, making the total map
    trace preserving. diagnostics records the pre-clip operator norm and
    surviving-weight estimates.
    """

    w: np.ndarray
    n: int
    channel: Channel
    dim_env: int
    completion: bool
    omega: np.ndarray
    threshold: float
    eta: float
    beta: float
    diagnostics: dict

    @property
    def dim_in_total(self) -> int:
        return self.channel.dim_in ** self.n

    @property
    def dim_out_total(self) -> int:
        return self.channel.dim_out ** self.n

    def branch_kraus(self):
        """Kraus operators of the W-branch map tr_E(W . W^dag)."""
        w3 = self.w.reshape(self.dim_out_total, self.dim_env ** self.n, -1)
        return [w3[:, e, :] for e in range(w3.shape[1])]

    def completion_kraus(self):
        """Kraus operators of the completion branch tr[(1 - W^dag W) .] omega."""
        deficit = np.eye(self.dim_in_total) - self.w.conj().T @ self.w
        mu, u = eigh_hermitian(deficit)
        nu, wv = eigh_hermitian(self.omega)
        ops = []
        for j in np.flatnonzero(mu > _EFFECT_FLOOR):
            for a in np.flatnonzero(nu > _EFFECT_FLOOR):
                ops.append(
                    np.sqrt(nu[a] * mu[j]) * np.outer(wv[:, a], u[:, j].conj())
                )
        return ops

    def total_channel(self) -> Channel:
        """The completed trace-preserving channel X^n -> X'^n."""
        kraus = self.branch_kraus()
        if self.completion:
            kraus = kraus + self.completion_kraus()
        h_in, h_out = self.channel.hamiltonians()
        return channel_from_kraus(
            kraus,
            h_in=lift_hamiltonian(h_in, self.n),
            h_out=lift_hamiltonian(h_out, self.n),
        )

    def apply_branch(self, rho) -> np.ndarray:
        """tr_E(W rho W^dag), the sub-normalized W-branch output."""
        out = self.w @ rho @ self.w.conj().T
        return partial_trace(
            out, [self.dim_out_total, self.dim_env ** self.n], keep=[0]
        )


def build_universal_implementation(
    ch: Channel,
    n: int,
    params: TypicalityParams = None,
    ctx: ThermoContext = None,
    completion: bool = True,
) -> Implementation:
    """Assemble the universal implementation of E^(x n) for the channel ch.

    Builds the four estimation POVMs, the typicality contraction
    W = M V^(x n), clips singular values at 1 when the projector sum
    overshoots, and attaches the output-Gibbs completion. The constraint
    threshold defaults to the channel's computed capacity.
    """
    if ctx is None:
        raise ValidationError("a ThermoContext with beta is required")
    if ch.h_in is None or ch.h_out is None:
        raise ValidationError(
            "universal implementation needs both Hamiltonians attached"
        )
    if params is None:
        params = TypicalityParams()
    if params.threshold is None:
        cap = thermo_capacity(ch, ctx, tol=1e-8)
        params = TypicalityParams(
            threshold=cap.value, eta=params.eta, slack_coeff=params.slack_coeff
        )

    v = stinespring(ch)
    spectrum_in = spectrum_povm(ch.dim_in, n)
    energy_in = energy_povm(ch.h_in, n)
    spectrum_out = spectrum_povm(ch.dim_out, n)
    energy_out = energy_povm(ch.h_out, n)
    w_raw = contraction_w(
        v, n, spectrum_in, energy_in, spectrum_out, energy_out, params, ctx
    )

    if np.abs(w_raw).max() == 0.0:
        preclip = 0.0
        w = w_raw
    else:
        u, sing, vh = np.linalg.svd(w_raw, full_matrices=False)
        preclip = float(sing[0])
        w = (u * np.minimum(sing, 1.0)) @ vh if preclip > 1.0 else w_raw

    gamma_in = gibbs_state(ch.h_in, ctx)
    gram = w.conj().T @ w
    surviving_gibbs = float(
        np.real(np.trace(gram @ kron_power(gamma_in, n)))
    )
    surviving_uniform = float(np.real(np.trace(gram))) / ch.dim_in ** n
    omega = kron_power(gibbs_state(ch.h_out, ctx), n)

    return Implementation(
        w=w,
        n=n,
        channel=ch,
        dim_env=v.dim_env,
        completion=completion,
        omega=omega,
        threshold=float(params.threshold),
        eta=float(params.resolved_eta(n)),
        beta=float(ctx.beta),
        diagnostics={
            "preclip_norm": preclip,
            "surviving_weight_gibbs": surviving_gibbs,
            "surviving_weight_uniform": surviving_uniform,
        },
    )


def work_cost(impl: Implementation, ctx: ThermoContext) -> float:
    """Per-copy work of the W-branch through Gibbs sub-preservation.

    lambda is the smallest factor with tr_E(W Gamma W^dag) <= lambda Gamma'
    for the unnormalized Gibbs weights Gamma, Gamma' of the lifted input and
    output Hamiltonians; the per-copy work is ln(lambda) / (beta n). A zero
    branch gives -inf.
    """
    h_in, h_out = impl.channel.hamiltonians()
    gamma_in = kron_power(gibbs_weight(h_in, ctx), impl.n)
    gamma_out = kron_power(gibbs_weight(h_out, ctx), impl.n)
    mapped = impl.apply_branch(gamma_in)
    lam_out, u_out = eigh_hermitian(gamma_out)
    isqrt = (u_out / np.sqrt(lam_out)) @ u_out.conj().T
    lam = float(np.linalg.eigvalsh(isqrt @ mapped @ isqrt)[-1])
    if lam <= 0.0:
        return -np.inf
    return float(np.log(lam) / (ctx.beta * impl.n))


def reference_inputs(h, ctx: ThermoContext):
    """Five standard single-copy test states for a system with Hamiltonian h.

    Ground and top eigenstates, the uniform superposition of all
    eigenvectors, the maximally mixed state, and the Gibbs state.
    """
    h = require_hermitian(h, what="Hamiltonian")
    d = h.shape[0]
    _, u = eigh_hermitian(h)
    ground = np.outer(u[:, 0], u[:, 0].conj())
    top = np.outer(u[:, -1], u[:, -1].conj())
    plus = u.sum(axis=1) / np.sqrt(d)
    return (
        ("ground", ground),
        ("excited", top),
        ("superposition", np.outer(plus, plus.conj())),
        ("maximally-mixed", np.eye(d, dtype=complex) / d),
        ("gibbs", gibbs_state(h, ctx)),
    )


def _interleave_perm(n: int):
    """Factor order (A_1 B_1 ... A_n B_n) -> (A_1..A_n B_1..B_n)."""
    return list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))


def iid_accuracy(impl: Implementation, sigma) -> float:
    """Fidelity of the W-branch against the ideal batch on a purified input.

    The input is the n-fold purification psi_sigma^(x n); the report is the
    Uhlmann fidelity between the sub-normalized branch output
    tr_E[(W (x) 1_R) psi (W (x) 1_R)^dag] and ((E (x) id)(psi_sigma))^(x n),
    so weight routed to the completion directly lowers the value. An empty
    W gives 0.
    """
    ch = impl.channel
    n = impl.n
    di, do = ch.dim_in, ch.dim_out
    sigma = make_density(sigma)
    if sigma.shape != (di, di):
        raise DimensionMismatchError(
            f"input state has shape {sigma.shape}, channel input dimension is {di}"
        )
    if (do * di) ** n > 4096:
        raise BudgetExceededError(
            f"purified output dimension {(do * di) ** n} exceeds the budget 4096"
        )

    lam, u = eigh_hermitian(sigma)
    lam = np.clip(lam, 0.0, None)
    psi = (u * np.sqrt(lam)).reshape(di * di)  # X (x) R with R the eigenindex
    psi_n = permute_vector_factors(
        kron_power(psi, n), [di, di] * n, _interleave_perm(n)
    )

    b = (impl.w @ psi_n.reshape(di ** n, di ** n)).reshape(
        do ** n, impl.dim_env ** n, di ** n
    )
    c = b.transpose(0, 2, 1).reshape(do ** n * di ** n, impl.dim_env ** n)

    eta1 = np.zeros((do * di,) * 2, dtype=complex)
    psi_mat = np.outer(psi, psi.conj())
    for k in ch.kraus:
        kr = np.kron(k, np.eye(di))
        eta1 += kr @ psi_mat @ kr.conj().T
    ideal = permute_factors(kron_power(eta1, n), [do, di] * n, _interleave_perm(n))

    overlap = c.conj().T @ ideal @ c
    vals = np.linalg.eigvalsh((overlap + overlap.conj().T) / 2)
    # the square root amplifies eigensolver noise near zero into a visible
    # positive bias, so values at noise scale are dropped outright
    vals = np.where(vals > 1e-13, vals, 0.0)
    return float(np.sqrt(vals).sum())


def diamond_accuracy(impl: Implementation) -> float:
    """Diamond distance between the completed implementation and E^(x n)."""
    ch = impl.channel
    choi_dim = (ch.dim_in * ch.dim_out) ** impl.n
    if choi_dim > DIAMOND_ACCURACY_BUDGET:
        raise BudgetExceededError(
            f"Choi dimension {choi_dim} exceeds the diamond-accuracy budget "
            f"{DIAMOND_ACCURACY_BUDGET}"
        )
    ideal = tensor_power(ch, impl.n)
    return diamond_distance(impl.total_channel(), ideal)


def naive_implementation(candidates) -> Channel:
    """Measure-then-prepare baseline: discriminate candidates, apply theirs.

    candidates is a sequence of (state, channel) pairs sharing dimensions.
    The measurement is the pretty-good measurement of the candidate states,
    with the deficit outside their joint support routed to the first effect,
    so a single candidate reduces exactly to its channel. The result is the
    channel sum_i T_i(M_i . M_i) with M_i the effect square roots; coherence
    between candidate supports does not survive it.
    """
    pairs = list(candidates)
    if not pairs:
        raise ValidationError("need at least one candidate")
    states = [make_density(s) for s, _ in pairs]
    chans = [c for _, c in pairs]
    d = states[0].shape[0]
    for s in states:
        if s.shape != (d, d):
            raise DimensionMismatchError("candidate states must share dimensions")
    for c in chans:
        if c.dim_in != d or c.dim_out != chans[0].dim_out:
            raise DimensionMismatchError("candidate channels must share dimensions")

    total = sum(states)
    lam, u = eigh_hermitian(total)
    pos = lam > _EFFECT_FLOOR
    isqrt = (u[:, pos] / np.sqrt(lam[pos])) @ u[:, pos].conj().T
    effects = [isqrt @ s @ isqrt for s in states]
    deficit = np.eye(d) - sum(effects)
    effects[0] = effects[0] + deficit
    resolved = sum(effects)
    dev = np.abs(resolved - np.eye(d)).max()
    if dev > 1e-9:
        raise InvalidPOVMError("candidate measurement does not resolve identity", margin=dev)

    kraus = []
    for eff, chan in zip(effects, chans):
        lam_e, u_e = eigh_hermitian(eff)
        root = (u_e * np.sqrt(np.clip(lam_e, 0.0, None))) @ u_e.conj().T
        for k in chan.kraus:
            kraus.append(k @ root)
    return channel_from_kraus(
        kraus, h_in=chans[0].h_in, h_out=chans[0].h_out
    )
