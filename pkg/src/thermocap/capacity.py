"""Thermodynamic capacity of a channel by conditional-gradient ascent.

The capacity is the worst-case free energy difference

    T(E) = max_sigma [ F(E(sigma)) - F(sigma) ]

which is a concave maximization over density matrices: writing the scaled
objective as beta tr(H_out E(sigma)) - beta tr(H_in sigma) + S(sigma)
- S(E(sigma)), the entropy difference equals the conditional entropy of the
dilation environment given the output, which is concave in sigma. The solver
follows the standard conditional-gradient scheme: linearize at the current
iterate, step toward the best pure state of the gradient, and keep the
running minimum of the linearization maxima as a certified upper bound.
Plain conditional gradient certifies slowly when the maximizer is full rank,
so each iteration also tries the stationarity update
sigma <- exp(beta adj(H_out) - beta H_in + adj(ln E(sigma)))/Z and keeps
whichever candidate scores higher; the certificate is unaffected.
"""

import numpy as np
from dataclasses import dataclass

from .channels import Channel, channel_from_kraus
from .errors import NotConvergedError, ValidationError
from .states import ThermoContext, free_energy

GRAD_PERTURBATION = 1e-10
MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class CapacityResult:
    """Solver output. value and certificate_gap are in energy units.

    The capacity lies in [value, value + certificate_gap]: value is the
    objective at the returned maximizer and the gap comes from the final
    linearization bound.
    """

    value: float
    maximizer: np.ndarray
    certificate_gap: float
    iterations: int


def capacity_objective(ch: Channel, sigma, ctx: ThermoContext) -> float:
    """F(E(sigma)) - F(sigma) in energy units."""
    h_in, h_out = ch.hamiltonians()
    return free_energy(ch.apply(sigma), h_out, ctx) - free_energy(sigma, h_in, ctx)


def _log_perturbed(rho, delta=GRAD_PERTURBATION):
    """Matrix log of (1-delta) rho + delta 1/d, safe at rank-deficient rho."""
    rho = np.asarray(rho)
    d = rho.shape[0]
    lam, u = np.linalg.eigh((rho + rho.conj().T) / 2)
    lam = (1 - delta) * np.clip(lam, 0, None) + delta / d
    return (u * np.log(lam)) @ u.conj().T


def _scaled_objective(ch, sigma, beta, h_in, h_out):
    """beta [F(E(sigma)) - F(sigma)] without the free-energy self-check, for speed."""
    out = ch.apply(sigma)
    lam_s = np.linalg.eigvalsh(sigma)
    lam_o = np.linalg.eigvalsh(out)
    lam_s = lam_s[lam_s > 1e-12]
    lam_o = lam_o[lam_o > 1e-12]
    s_in = -(lam_s * np.log(lam_s)).sum()
    s_out = -(lam_o * np.log(lam_o)).sum()
    e_in = np.real(np.trace(h_in @ sigma))
    e_out = np.real(np.trace(h_out @ out))
    return beta * (e_out - e_in) + s_in - s_out


def _line_search(f, lo=0.0, hi=1.0, iters=70):
    """Golden-section maximization of a concave scalar function on [lo, hi]."""
    inv_phi = (np.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        if b - a < 1e-12:
            break
    return (a + b) / 2


def thermo_capacity(
    ch: Channel,
    ctx: ThermoContext,
    tol: float = 1e-6,
    max_iterations: int = MAX_ITERATIONS,
) -> CapacityResult:
    """Maximize F(E(sigma)) - F(sigma) over input states.

    Starts from the maximally mixed state. Each iteration diagonalizes the
    gradient, takes the stationarity update when it improves the objective
    and otherwise moves toward the gradient's top eigenvector (lowest index
    wins ties) with an exact line search. Optimality is certified through the
    running minimum of linearization bounds. Raises NotConvergedError,
    carrying the best iterate, if the gap is still above tol after
    max_iterations.
    """
    if ch.h_in is None or ch.h_out is None:
        raise ValidationError("thermo_capacity needs h_in and h_out attached")
    beta = ctx.beta
    h_in, h_out = ch.hamiltonians()
    d = ch.dim_in
    sigma = np.eye(d, dtype=complex) / d
    kdag_hout = ch.apply_adjoint(h_out)

    best_val = -np.inf
    best_sigma = sigma
    upper = np.inf
    it = 0
    for it in range(1, max_iterations + 1):
        val = _scaled_objective(ch, sigma, beta, h_in, h_out)
        if val > best_val:
            best_val, best_sigma = val, sigma
        logsig = _log_perturbed(sigma)
        pushed = ch.apply_adjoint(_log_perturbed(ch.apply(sigma)))
        grad = beta * kdag_hout - beta * h_in - logsig + pushed
        grad = (grad + grad.conj().T) / 2
        lam, u = np.linalg.eigh(grad)
        top = np.nonzero(lam >= lam[-1] - 1e-12)[0][0]  # lowest index among ties
        psi = u[:, top]
        tau = np.outer(psi, psi.conj())
        # every linearization maximum upper-bounds the capacity; keep the best
        upper = min(upper, val + float(lam[-1] - np.real(np.trace(grad @ sigma))))
        if upper - best_val <= tol * beta:
            break
        # stationarity candidate: the optimum satisfies sigma = exp(a)/Z
        a = grad + logsig
        lam_a, u_a = np.linalg.eigh((a + a.conj().T) / 2)
        w = np.exp(lam_a - lam_a.max())
        fixed = (u_a * (w / w.sum())) @ u_a.conj().T
        fixed_val = _scaled_objective(ch, fixed, beta, h_in, h_out)
        if fixed_val >= val:
            sigma = fixed
            continue
        t = _line_search(
            lambda t: _scaled_objective(
                ch, (1 - t) * sigma + t * tau, beta, h_in, h_out
            )
        )
        if t <= 0:
            break
        sigma = (1 - t) * sigma + t * tau
        sigma = (sigma + sigma.conj().T) / 2

    result = CapacityResult(
        value=best_val / beta,
        maximizer=best_sigma,
        certificate_gap=max(upper - best_val, 0.0) / beta,
        iterations=it,
    )
    if result.certificate_gap > tol:
        raise NotConvergedError(
            f"conditional gradient stalled at gap {result.certificate_gap:.3e} "
            f"after {it} iterations",
            result=result,
        )
    return result


def min_entropy_gain(ch: Channel, tol: float = 1e-6) -> float:
    """Minimal entropy gain min_sigma [S(E(sigma)) - S(sigma)] in nats.

    Runs the capacity ascent with both Hamiltonians zeroed at beta = 1, where
    the objective reduces to the negated entropy gain.
    """
    flat = channel_from_kraus(
        ch.kraus,
        h_in=np.zeros((ch.dim_in, ch.dim_in)),
        h_out=np.zeros((ch.dim_out, ch.dim_out)),
    )
    res = thermo_capacity(flat, ThermoContext(1.0), tol=tol)
    return -res.value


def interconversion_rate(
    ch_from: Channel, ch_to: Channel, ctx: ThermoContext, tol: float = 1e-6
) -> float:
    """Asymptotic work rate for converting copies of one process into another.

    Returns T(ch_to) - T(ch_from) in energy units per copy; positive means net
    work must be supplied.
    """
    t_from = thermo_capacity(ch_from, ctx, tol=tol).value
    t_to = thermo_capacity(ch_to, ctx, tol=tol).value
    return t_to - t_from
