"""Density matrices, entropies, and free energy at fixed inverse temperature.

Everything works on plain complex numpy arrays. Entropic quantities are in
nats and hbar = k_B = 1 throughout, so free energies and energies share units.
Composite systems are ordered row-major: the leftmost tensor factor is the
most significant index.
"""

import numpy as np
from dataclasses import dataclass

from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotPSDError,
    NotUnitTraceError,
    NumericalFailureError,
)

HERM_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class ThermoContext:
    """Thermodynamic context: a single inverse temperature beta > 0."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0):
            raise ValueError(f"beta must be positive, got {self.beta}")


def _as_square(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(mat, tol: float = HERM_TOL, what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within tol and return the symmetrized matrix."""
    a = _as_square(mat)
    dev = np.abs(a - a.conj().T).max()
    if dev > tol:
        raise NotHermitianError(f"{what} is not Hermitian", margin=dev)
    return (a + a.conj().T) / 2


def eigh_hermitian(mat):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Symmetrizes the input before handing it to LAPACK so that tiny
    anti-Hermitian noise cannot poison the factorization.
    """
    a = _as_square(mat)
    return np.linalg.eigh((a + a.conj().T) / 2)


def make_density(mat) -> np.ndarray:
    """Validate and normalize a density matrix.

    Checks Hermiticity, positivity, and unit trace, each within 1e-9.
    Eigenvalues in [-1e-9, 0) are clipped to zero and the matrix is
    renormalized, so the returned array is exactly unit trace and PSD up to
    floating error. The result is marked read-only.
    """
    a = require_hermitian(mat, HERM_TOL, "density matrix")
    tr = a.trace().real
    if abs(tr - 1) > TRACE_TOL:
        raise NotUnitTraceError("density matrix trace is not 1", margin=abs(tr - 1))
    lam, u = np.linalg.eigh(a)
    if lam[0] < -PSD_TOL:
        raise NotPSDError("density matrix is not PSD", margin=-lam[0])
    lam = np.clip(lam, 0, None)
    out = (u * lam) @ u.conj().T
    out = (out + out.conj().T) / 2
    out /= out.trace().real
    out.flags.writeable = False
    return out


def von_neumann_entropy(rho) -> float:
    """S(rho) = -tr(rho ln rho) in nats.

    Assumes a valid density matrix. Eigenvalues below 1e-12 are treated as
    exact zeros (0 ln 0 = 0) and the result is clamped to [0, ln d].
    """
    lam = np.linalg.eigvalsh(np.asarray(rho))
    lam = lam[lam > EIG_CUTOFF]
    s = float(-(lam * np.log(lam)).sum())
    return min(max(s, 0.0), np.log(len(rho)))


def relative_entropy(rho, gamma) -> float:
    """Quantum relative entropy D(rho || gamma) = tr[rho (ln rho - ln gamma)] in nats.

    gamma must be PSD but need not be normalized. Returns +inf when the
    support of rho is not contained in the support of gamma (kernel weight
    above 1e-12).
    """
    rho = np.asarray(rho)
    gamma = np.asarray(gamma)
    if rho.shape != gamma.shape:
        raise DimensionMismatchError(
            f"state has shape {rho.shape}, reference has shape {gamma.shape}"
        )
    lam_g, u_g = eigh_hermitian(gamma)
    kernel = lam_g <= EIG_CUTOFF
    if kernel.any():
        # weight of rho on ker(gamma)
        uk = u_g[:, kernel]
        w = float(np.real(np.einsum("ij,jk,ki->", uk.conj().T, rho, uk)))
        if w > 1e-12:
            return np.inf
    lam_r = np.linalg.eigvalsh(rho)
    lam_r = lam_r[lam_r > EIG_CUTOFF]
    tr_rho_ln_rho = float((lam_r * np.log(lam_r)).sum())
    # tr(rho ln gamma) evaluated in the eigenbasis of gamma, kernel excluded
    diag = np.real(np.einsum("ji,jk,ki->i", u_g.conj(), rho, u_g))
    keep = ~kernel
    tr_rho_ln_gamma = float((diag[keep] * np.log(lam_g[keep])).sum())
    return tr_rho_ln_rho - tr_rho_ln_gamma


def gibbs_weight(h, ctx: ThermoContext) -> np.ndarray:
    """Unnormalized thermal weight e^{-beta H}, computed by eigendecomposition."""
    lam, u = eigh_hermitian(h)
    return (u * np.exp(-ctx.beta * lam)) @ u.conj().T


def gibbs_state(h, ctx: ThermoContext) -> np.ndarray:
    """Normalized thermal state e^{-beta H} / Z."""
    g = gibbs_weight(h, ctx)
    return g / g.trace().real


def free_energy(rho, h, ctx: ThermoContext) -> float:
    """Free energy F(rho) = tr(H rho) - S(rho)/beta.

    Also evaluates the equivalent form D(rho || e^{-beta H})/beta and raises
    NumericalFailureError if the two disagree beyond 1e-8, as a self-check
    against eigenbasis drift.
    """
    rho = np.asarray(rho)
    h = np.asarray(h)
    if rho.shape != h.shape:
        raise DimensionMismatchError(
            f"state has shape {rho.shape}, Hamiltonian has shape {h.shape}"
        )
    energy = float(np.real(np.trace(h @ rho)))
    f = energy - von_neumann_entropy(rho) / ctx.beta
    f_rel = relative_entropy(rho, gibbs_weight(h, ctx)) / ctx.beta
    if abs(f - f_rel) > 1e-8:
        raise NumericalFailureError(
            f"free energy self-check failed: {f!r} vs {f_rel!r}"
        )
    return f


def trace_distance(a, b) -> float:
    """Trace distance (1/2) ||a - b||_1 for Hermitian a, b."""
    lam = np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))
    return float(np.abs(lam).sum() / 2)


def trace_norm(a) -> float:
    """||a||_1, the sum of singular values."""
    return float(np.linalg.svd(np.asarray(a), compute_uv=False).sum())


def partial_trace(mat, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in keep.

    :param mat: operator on the composite space, shape (prod(dims), prod(dims))
    :param dims: factor dimensions, leftmost factor most significant
    :param keep: indices of the factors to retain, in their original order
    """
    dims = tuple(int(d) for d in dims)
    a = np.asarray(mat)
    n = len(dims)
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise DimensionMismatchError(
            f"operator shape {a.shape} does not match dims {dims}"
        )
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {n} factors")
    t = a.reshape(dims + dims)
    # contract each traced factor pair (i, i + n), highest first so that the
    # remaining axis numbering stays valid
    traced = [i for i in range(n) if i not in keep]
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def kron_all(mats) -> np.ndarray:
    """Kronecker product of a sequence of matrices, leftmost most significant."""
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def kron_power(mat, n: int) -> np.ndarray:
    """n-fold Kronecker power."""
    return kron_all([mat] * n)


def lift_hamiltonian(h, n: int) -> np.ndarray:
    """Noninteracting n-copy Hamiltonian sum_i 1 x ... x H x ... x 1."""
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    eye = np.eye(d)
    total = np.zeros((d**n, d**n), dtype=complex)
    for i in range(n):
        total += kron_all([h if j == i else eye for j in range(n)])
    return total


def permute_vector_factors(vec, dims, perm) -> np.ndarray:
    """Reorder the tensor factors of a state vector.

    Output factor j is input factor perm[j]; dims lists the input factor
    dimensions in order.
    """
    dims = tuple(int(d) for d in dims)
    perm = list(perm)
    v = np.asarray(vec).reshape(dims)
    return v.transpose(perm).reshape(-1)


def permute_factors(mat, dims, perm) -> np.ndarray:
    """Reorder the tensor factors of an operator (rows and columns together)."""
    dims = tuple(int(d) for d in dims)
    perm = list(perm)
    n = len(dims)
    t = np.asarray(mat).reshape(dims + dims)
    t = t.transpose(perm + [p + n for p in perm])
    d_tot = int(np.prod(dims))
    return t.reshape(d_tot, d_tot)
