"""Spectrum and energy estimation POVMs and the typicality operator.

Two coarse measurements on n identical systems: the spectrum POVM projects
onto the isotypic blocks of the symmetric-group action (one block per Young
diagram, labeled by the Shannon entropy of the normalized diagram), and the
energy POVM bins the eigenspaces of the noninteracting total Hamiltonian
(labeled by bin-center energy per copy). Both commute with every local
unitary applied identically to all factors and with every permutation of the
factors, so measuring them costs no iid structure.

typicality_operator combines input-side and output-side estimates of both
kinds around a Stinespring dilation and keeps only the outcome combinations
whose estimated free-energy production stays below a threshold. The result
is the smoothing operator that turns an iid channel batch into a map with
controlled work cost.
"""

import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import young
from .channels import StinespringIsometry
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    EmptyConstraintSetWarning,
    InvalidPOVMError,
    ValidationError,
)
from .states import ThermoContext, eigh_hermitian, kron_power, require_hermitian

POVM_TOL = 1e-9
POVM_DIM_BUDGET = 4096
DEFAULT_SLACK_COEFF = 2.0
# eigenvalue sums are rounded before binning so exact degeneracies stay together
ENERGY_DECIMALS = 10
LABEL_DECIMALS = 12


@dataclass(frozen=True)
class TypicalPOVM:
    """Labeled projective measurement on n factors of local dimension local_dim.

    elements holds (label, projector) pairs sorted by label; labels are
    per-copy estimates (entropy in nats or energy).
    """

    kind: str
    n: int
    local_dim: int
    elements: tuple

    @property
    def labels(self):
        return tuple(label for label, _ in self.elements)

    @property
    def projectors(self):
        return tuple(proj for _, proj in self.elements)

    @property
    def dim(self) -> int:
        return self.local_dim ** self.n

    def validate(self, tol: float = POVM_TOL) -> None:
        """Check completeness, idempotence and mutual orthogonality."""
        projs = self.projectors
        dev = np.abs(sum(projs) - np.eye(self.dim)).max()
        if dev > tol:
            raise InvalidPOVMError(
                "projectors do not resolve the identity", margin=dev
            )
        for i, p in enumerate(projs):
            for j in range(i, len(projs)):
                ref = p if i == j else 0.0
                dev = np.abs(p @ projs[j] - ref).max()
                if dev > tol:
                    what = "idempotence" if i == j else "orthogonality"
                    raise InvalidPOVMError(f"{what} fails", margin=dev)


@dataclass(frozen=True)
class TypicalityParams:
    """Constraint parameters for the typicality operator.

    threshold is the per-copy free-energy production bound (None lets the
    implementation builder substitute the solver's channel capacity). eta is
    the additive slack; when None it follows the schedule
    slack_coeff / sqrt(n).
    """

    threshold: float = None
    eta: float = None
    slack_coeff: float = DEFAULT_SLACK_COEFF

    def __post_init__(self):
        if self.eta is not None and self.eta < 0:
            raise ValidationError(f"slack eta must be >= 0, got {self.eta}")
        if self.slack_coeff < 0:
            raise ValidationError(
                f"slack coefficient must be >= 0, got {self.slack_coeff}"
            )

    def resolved_eta(self, n: int) -> float:
        return self.eta if self.eta is not None else self.slack_coeff / np.sqrt(n)


def _check_budget(local_dim: int, n: int):
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    if local_dim < 1:
        raise ValidationError(f"need local_dim >= 1, got {local_dim}")
    if local_dim ** n > POVM_DIM_BUDGET:
        raise BudgetExceededError(
            f"composite dimension {local_dim ** n} exceeds the POVM budget "
            f"{POVM_DIM_BUDGET}"
        )


def _shannon(weights) -> float:
    w = np.asarray(weights, dtype=float)
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())


def spectrum_povm(local_dim: int, n: int) -> TypicalPOVM:
    """Schur-Weyl spectrum estimation on (C^local_dim)^(x n).

    One projector per Young diagram of n with at most local_dim rows, built
    by isotypic projection P_lambda = (dim_lambda / n!) sum_mu chi_lambda(mu)
    C_mu from the symmetric-group class sums C_mu. The label is the Shannon
    entropy of the normalized diagram, an estimate of entropy per copy.
    """
    _check_budget(local_dim, n)
    if n > 8:
        # the class sums run over all n! permutations
        raise BudgetExceededError(
            f"spectrum estimation sums {n}! permutation operators; n is capped at 8"
        )
    sums = young.class_sums(local_dim, n)
    n_fact = factorial(n)
    by_label = {}
    for lam in young.partitions(n, max_rows=local_dim):
        proj = sum(
            young.character(lam, mu) * c_mu for mu, c_mu in sums.items()
        ) * (young.dimension(lam) / n_fact)
        label = round(_shannon(np.asarray(lam) / n), LABEL_DECIMALS) + 0.0
        if label in by_label:
            by_label[label] = by_label[label] + proj
        else:
            by_label[label] = proj
    elements = tuple(
        (label, by_label[label].astype(complex)) for label in sorted(by_label)
    )
    return TypicalPOVM(
        kind="spectrum-entropy", n=n, local_dim=local_dim, elements=elements
    )


def default_bin_width(h, n: int) -> float:
    """Default energy resolution: single-copy spectral span over 4n."""
    lam = np.linalg.eigvalsh(require_hermitian(h, what="Hamiltonian"))
    return float(lam[-1] - lam[0]) / (4 * n)


def energy_povm(h, n: int, delta: float = None) -> TypicalPOVM:
    """Total-energy estimation for the noninteracting sum of n copies of h.

    Eigenprojectors of sum_i h_i are grouped into bins of width n*delta;
    the label is the bin-center energy divided by n. Exactly degenerate
    levels always share a bin. A spectrally trivial h (single eigenvalue)
    yields one element labeled by that eigenvalue.
    """
    h = require_hermitian(h, what="Hamiltonian")
    d = h.shape[0]
    _check_budget(d, n)
    if delta is None:
        delta = default_bin_width(h, n)
    levels, u = eigh_hermitian(h)

    # total eigenbasis = n-fold products of single-copy eigenvectors
    u_n = kron_power(u, n)
    energies = np.zeros(d ** n)
    for i in range(n):
        reps = d ** (n - 1 - i)
        tiles = d ** i
        energies += np.tile(np.repeat(levels, reps), tiles)
    energies = np.round(energies, ENERGY_DECIMALS)

    e_min = energies.min()
    span = energies.max() - e_min
    width = n * delta
    if span <= 0 or width <= 0:
        proj = np.eye(d ** n, dtype=complex)
        return TypicalPOVM(
            kind="energy",
            n=n,
            local_dim=d,
            elements=((float(e_min / n), proj),),
        )

    n_bins = int(np.ceil(span / width))
    idx = np.minimum((energies - e_min) // width, n_bins - 1).astype(int)
    elements = []
    for b in sorted(set(idx)):
        cols = u_n[:, idx == b]
        label = float((e_min + (b + 0.5) * width) / n)
        elements.append((label, cols @ cols.conj().T))
    return TypicalPOVM(kind="energy", n=n, local_dim=d, elements=tuple(elements))


def _lift_isometry(v: StinespringIsometry, n: int) -> np.ndarray:
    """V^(x n) with output factors reordered to X'^n (x) E^n."""
    do, de, di = v.dim_out, v.dim_env, v.dim_in
    vn = kron_power(np.asarray(v.v), n)
    # output axes arrive as (X'_1 E_1 ... X'_n E_n); gather X' first, then E
    shaped = vn.reshape(*([do, de] * n), di ** n)
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2)) + [2 * n]
    return shaped.transpose(order).reshape((do * de) ** n, di ** n)


def _sector_terms(v, n, spectrum_in, energy_in, spectrum_out, energy_out, params, ctx):
    """Shared assembly of the per-sector products (G(s,h) (x) 1_E) V_n P_s Q_h.

    Returns (v_n, terms) where each term is the full matrix from X^n to
    X'^n (x) E^n. G(s,h) sums the output-sector projectors allowed together
    with input estimate (s, h); it acts on X'^n only.
    """
    if params.threshold is None:
        raise ValidationError(
            "typicality threshold is unset; pass TypicalityParams.threshold "
            "or build through build_universal_implementation"
        )
    for povm, dim, what in (
        (spectrum_in, v.dim_in, "input spectrum"),
        (energy_in, v.dim_in, "input energy"),
        (spectrum_out, v.dim_out, "output spectrum"),
        (energy_out, v.dim_out, "output energy"),
    ):
        if povm.n != n or povm.local_dim != dim:
            raise DimensionMismatchError(
                f"{what} POVM is built for n={povm.n}, local_dim={povm.local_dim}; "
                f"need n={n}, local_dim={dim}"
            )
    if (v.dim_out * v.dim_env) ** n > POVM_DIM_BUDGET:
        raise BudgetExceededError(
            f"lifted dilation dimension {(v.dim_out * v.dim_env) ** n} exceeds "
            f"the budget {POVM_DIM_BUDGET}"
        )
    beta = ctx.beta
    eta = params.resolved_eta(n)
    bound = beta * (params.threshold + eta)

    # output pairs sorted by their free-energy score; prefix sums give G
    out_pairs = []
    for s_out, p_out in spectrum_out.elements:
        for h_out, q_out in energy_out.elements:
            joint = q_out @ p_out
            if np.abs(joint).max() < 1e-14:
                continue
            out_pairs.append((beta * h_out - s_out, joint))
    out_pairs.sort(key=lambda item: item[0])
    scores = [score for score, _ in out_pairs]
    prefixes = []
    acc = np.zeros((v.dim_out ** n,) * 2, dtype=complex)
    for _, joint in out_pairs:
        acc = acc + joint
        prefixes.append(acc)

    v_n = _lift_isometry(v, n)
    de_n = v.dim_env ** n
    terms = []
    for s_in, p_in in spectrum_in.elements:
        for h_in, q_in in energy_in.elements:
            joint_in = p_in @ q_in
            if np.abs(joint_in).max() < 1e-14:
                continue
            # keep output pairs with -s' + beta h' <= bound - (s - beta h)
            budget = bound - (s_in - beta * h_in)
            count = np.searchsorted(scores, budget + 1e-12, side="right")
            if count == 0:
                continue
            g = prefixes[count - 1]
            target = v_n @ joint_in
            shaped = target.reshape(v.dim_out ** n, de_n, -1)
            lifted = np.einsum("ab,bec->aec", g, shaped).reshape(target.shape)
            terms.append(lifted)
    return v_n, terms


def typicality_operator(
    v: StinespringIsometry,
    n: int,
    spectrum_in: TypicalPOVM,
    energy_in: TypicalPOVM,
    spectrum_out: TypicalPOVM,
    energy_out: TypicalPOVM,
    params: TypicalityParams,
    ctx: ThermoContext,
) -> np.ndarray:
    """Typicality operator M on X'^n (x) E^n for the dilation V of one copy.

    M = sum over estimate tuples (s, h, s', h') obeying
    -s' + beta h' + s - beta h <= beta (threshold + eta) of
    (Q_h' P_s' (x) 1_E) V^(x n) P_s Q_h V^(x n) dagger. Output-side
    projectors act on X'^n alone. Emits EmptyConstraintSetWarning and
    returns the zero matrix when no tuple passes.
    """
    v_n, terms = _sector_terms(
        v, n, spectrum_in, energy_in, spectrum_out, energy_out, params, ctx
    )
    if not terms:
        warnings.warn(
            "no estimate tuple satisfies the typicality constraint; M = 0",
            EmptyConstraintSetWarning,
        )
        dim = v_n.shape[0]
        return np.zeros((dim, dim), dtype=complex)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total @ v_n.conj().T


def contraction_w(
    v: StinespringIsometry,
    n: int,
    spectrum_in: TypicalPOVM,
    energy_in: TypicalPOVM,
    spectrum_out: TypicalPOVM,
    energy_out: TypicalPOVM,
    params: TypicalityParams,
    ctx: ThermoContext,
) -> np.ndarray:
    """W = M V^(x n) from X^n to X'^n (x) E^n, assembled without forming M.

    Since V^(x n) is an isometry, M V^(x n) collapses to the same sector sum
    with V^dagger V = 1 absorbed, which keeps the largest matrix in play at
    dim (out*env)^n x in^n instead of square.
    """
    v_n, terms = _sector_terms(
        v, n, spectrum_in, energy_in, spectrum_out, energy_out, params, ctx
    )
    if not terms:
        warnings.warn(
            "no estimate tuple satisfies the typicality constraint; W = 0",
            EmptyConstraintSetWarning,
        )
        return np.zeros(v_n.shape, dtype=complex)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total
