"""Quantum channels in Kraus form, their dilations, and tensor powers.

A channel maps operators on a dim_in space to operators on a dim_out space
and may carry the Hamiltonians of both ends. The Choi matrix convention is

    J(E) = sum_ij E(|i><j|) (x) |i><j|

with the output factor leftmost, unnormalized.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    NotIsometryError,
    NotTracePreservingError,
    ValidationError,
)
from .states import kron_all, lift_hamiltonian, require_hermitian

TP_TOL = 1e-8
ISOMETRY_TOL = 1e-8

# Largest composite operator dimension the desk-scale routines will build.
DIM_BUDGET = 4096


@dataclass(frozen=True)
class Channel:
    """A CPTP map held as a tuple of Kraus operators.

    Construct through channel_from_kraus, which validates trace preservation.
    h_in and h_out are optional Hamiltonians on the input and output spaces.
    """

    kraus: tuple
    dim_in: int
    dim_out: int
    h_in: np.ndarray | None = None
    h_out: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def apply(self, rho) -> np.ndarray:
        """E(rho) = sum_k K rho K^dag."""
        rho = np.asarray(rho)
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for k in self.kraus:
            out += k @ rho @ k.conj().T
        return out

    def apply_adjoint(self, m) -> np.ndarray:
        """Adjoint map E^dag(M) = sum_k K^dag M K (unital when E is TP)."""
        m = np.asarray(m)
        out = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for k in self.kraus:
            out += k.conj().T @ m @ k
        return out

    @property
    def choi(self) -> np.ndarray:
        """Choi matrix, cached after the first request."""
        if "choi" not in self._cache:
            j = np.zeros((self.dim_out * self.dim_in,) * 2, dtype=complex)
            for k in self.kraus:
                v = np.asarray(k).reshape(-1)  # row-major (out, in) flattening
                j += np.outer(v, v.conj())
            j.flags.writeable = False
            self._cache["choi"] = j
        return self._cache["choi"]

    def tensor(self, other: "Channel") -> "Channel":
        """Tensor product channel, Hamiltonians lifted additively."""
        kraus = [np.kron(a, b) for a in self.kraus for b in other.kraus]

        def lift(ha, hb, da, db):
            if ha is None and hb is None:
                return None
            ha = np.zeros((da, da)) if ha is None else ha
            hb = np.zeros((db, db)) if hb is None else hb
            return np.kron(ha, np.eye(db)) + np.kron(np.eye(da), hb)

        return channel_from_kraus(
            kraus,
            h_in=lift(self.h_in, other.h_in, self.dim_in, other.dim_in),
            h_out=lift(self.h_out, other.h_out, self.dim_out, other.dim_out),
        )

    def hamiltonians(self):
        """(H_in, H_out), substituting zeros where unset."""
        h_in = np.zeros((self.dim_in, self.dim_in)) if self.h_in is None else self.h_in
        h_out = np.zeros((self.dim_out, self.dim_out)) if self.h_out is None else self.h_out
        return h_in, h_out


@dataclass(frozen=True)
class StinespringIsometry:
    """Isometry V: input -> output (x) environment with E(rho) = tr_env(V rho V^dag)."""

    v: np.ndarray
    dim_in: int
    dim_out: int
    dim_env: int

    def __post_init__(self):
        v = np.asarray(self.v)
        if v.shape != (self.dim_out * self.dim_env, self.dim_in):
            raise DimensionMismatchError(
                f"isometry shape {v.shape} does not match dims "
                f"({self.dim_out}x{self.dim_env}, {self.dim_in})"
            )
        dev = np.abs(v.conj().T @ v - np.eye(self.dim_in)).max()
        if dev > ISOMETRY_TOL:
            raise NotIsometryError("V^dag V deviates from identity", margin=dev - ISOMETRY_TOL)


def channel_from_kraus(kraus, h_in=None, h_out=None) -> Channel:
    """Build a validated Channel from a list of Kraus operators.

    Raises NotTracePreservingError, reporting ||sum K^dag K - 1||_inf, when the
    completeness relation fails beyond 1e-8.
    """
    ks = [np.asarray(k, dtype=complex) for k in kraus]
    if not ks:
        raise DimensionMismatchError("need at least one Kraus operator")
    d_out, d_in = ks[0].shape
    for k in ks:
        if k.shape != (d_out, d_in):
            raise DimensionMismatchError(
                f"inconsistent Kraus shapes: {k.shape} vs {(d_out, d_in)}"
            )
    acc = np.zeros((d_in, d_in), dtype=complex)
    for k in ks:
        acc += k.conj().T @ k
    dev = np.abs(acc - np.eye(d_in)).max()
    if dev > TP_TOL:
        raise NotTracePreservingError(
            f"Kraus operators are not trace preserving, ||sum K^dag K - 1||_inf = {dev:.3e}",
            margin=dev,
        )
    if h_in is not None:
        h_in = require_hermitian(h_in, what="h_in")
        if h_in.shape != (d_in, d_in):
            raise DimensionMismatchError("h_in dimension does not match dim_in")
    if h_out is not None:
        h_out = require_hermitian(h_out, what="h_out")
        if h_out.shape != (d_out, d_out):
            raise DimensionMismatchError("h_out dimension does not match dim_out")
    for k in ks:
        k.flags.writeable = False
    return Channel(kraus=tuple(ks), dim_in=d_in, dim_out=d_out, h_in=h_in, h_out=h_out)


def stinespring(ch: Channel) -> StinespringIsometry:
    """Canonical dilation V|psi> = sum_k (K_k|psi>) (x) |k>_env.

    The environment dimension equals the number of Kraus operators.
    """
    n_env = len(ch.kraus)
    # row index (out, env) with the output factor most significant
    v = np.stack(ch.kraus, axis=1).reshape(ch.dim_out * n_env, ch.dim_in)
    return StinespringIsometry(v=v, dim_in=ch.dim_in, dim_out=ch.dim_out, dim_env=n_env)


def tensor_power(ch: Channel, n: int, budget: int = DIM_BUDGET) -> Channel:
    """n-fold tensor power E^(x)n with Hamiltonians lifted to copy sums.

    The environment of the canonical dilation grows as (#Kraus)^n, so the
    budget is checked on dim_out^n x dim_env^n.
    """
    if n < 1:
        raise DimensionMismatchError(f"tensor power needs n >= 1, got {n}")
    if (ch.dim_out * len(ch.kraus)) ** n > budget:
        raise BudgetExceededError(
            f"tensor power n={n} needs composite dimension "
            f"{(ch.dim_out * len(ch.kraus)) ** n} > budget {budget}"
        )
    kraus = [kron_all(combo) for combo in _product(ch.kraus, n)]
    h_in = None if ch.h_in is None else lift_hamiltonian(ch.h_in, n)
    h_out = None if ch.h_out is None else lift_hamiltonian(ch.h_out, n)
    return channel_from_kraus(kraus, h_in=h_in, h_out=h_out)


def _product(items, n):
    import itertools

    return itertools.product(items, repeat=n)


def is_time_covariant(ch: Channel, tol: float = 1e-9):
    """Check covariance under the free time evolution of both Hamiltonians.

    E is time covariant when E(e^{-iH_in t} rho e^{iH_in t}) equals
    e^{-iH_out t} E(rho) e^{iH_out t} for all t, which holds iff the Choi
    matrix commutes with H_out (x) 1 - 1 (x) H_in^T. Returns (flag, residual)
    where residual is the spectral norm of that commutator.
    """
    if ch.h_in is None or ch.h_out is None:
        raise ValidationError("time covariance needs both h_in and h_out attached")
    h_in, h_out = ch.hamiltonians()
    gen = np.kron(h_out, np.eye(ch.dim_in)) - np.kron(np.eye(ch.dim_out), h_in.T)
    comm = ch.choi @ gen - gen @ ch.choi
    residual = float(np.linalg.norm(comm, 2))
    return residual <= tol, residual
