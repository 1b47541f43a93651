"""Dense semidefinite programming over complex Hermitian blocks.

solve_sdp is a primal-dual path-following solver with Nesterov-Todd scaling,
written directly against complex Hermitian matrices (no real embedding).
Problems are stated in the standard block form

    min / max   sum_b tr(C_b X_b)
    subject to  sum_b tr(A_ib X_b) = rhs_i        (equality rows)
                sum_b tr(G_jb X_b) <= rhs_j       (inequality rows)
                X_b >= 0 for every block

with all cost and coefficient matrices Hermitian, so every trace above is
real. Inequality rows are absorbed into 1x1 slack blocks internally.

diamond_distance and hypothesis_testing_entropy are the two quantities the
rest of the library needs. The hypothesis-testing program runs on solve_sdp;
the diamond-norm program is delegated to cvxpy/SCS because its exact
matrix-equality formulation (dim^2 rows against a dense Schur complement)
is the one instance class a generic dense solver cannot assemble in
reasonable time at three qubit copies.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channels import Channel
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InfeasibleError,
    NumericalFailureError,
    ValidationError,
)
from .states import eigh_hermitian

SDP_EPS = 1e-7
SDP_MAX_ITERATIONS = 200
SDP_BLOCK_BUDGET = 256
SENTINEL_FLOOR = 1e-12
DIAMOND_EPS = 1e-9
DIAMOND_DIM_BUDGET = 256


@dataclass(frozen=True)
class SdpProblem:
    """Block SDP description.

    blocks: tuple of (name, dim) pairs. cost: Hermitian matrix per block
    name (missing blocks cost zero). eq_rows / ineq_rows: tuples of
    (coeffs, rhs) where coeffs maps block names to Hermitian matrices.
    """

    blocks: tuple
    cost: dict
    eq_rows: tuple = ()
    ineq_rows: tuple = ()
    sense: str = "min"


@dataclass(frozen=True)
class SdpSolution:
    primal_value: float
    dual_value: float
    blocks: dict
    y: np.ndarray
    status: str
    iterations: int
    gap: float
    primal_residual: float
    dual_residual: float


def hermitian_basis(dim: int):
    """Orthonormal basis of Hermitian dim x dim matrices (Frobenius inner product)."""
    basis = []
    for i in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    inv_sqrt2 = 1 / np.sqrt(2)
    for i in range(dim):
        for j in range(i + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = e[j, i] = inv_sqrt2
            basis.append(e)
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = -1j * inv_sqrt2
            e[j, i] = 1j * inv_sqrt2
            basis.append(e)
    return basis


def matrix_equality_rows(mapping: dict, rhs_matrix, dim: int):
    """Rows enforcing sum_b c_b X_b = RHS entrywise, c_b real scalars.

    Expands the matrix equality over the Hermitian basis; both sides must be
    Hermitian for the expansion to be exact.
    """
    rows = []
    for b in hermitian_basis(dim):
        coeffs = {name: c * b for name, c in mapping.items()}
        rows.append((coeffs, float(np.real(np.trace(b @ rhs_matrix)))))
    return rows


def _require_hermitian(mat, what):
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"{what} must be square, got shape {mat.shape}")
    if np.abs(mat - mat.conj().T).max() > 1e-9:
        raise ValidationError(f"{what} is not Hermitian")
    return (mat + mat.conj().T) / 2


class _BlockProblem:
    """Internal all-equality form with slack blocks appended."""

    def __init__(self, problem: SdpProblem):
        names = [name for name, _ in problem.blocks]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate block names")
        dims = {}
        for name, dim in problem.blocks:
            if dim < 1:
                raise ValidationError(f"block {name!r} has nonpositive dimension")
            if dim > SDP_BLOCK_BUDGET:
                raise BudgetExceededError(
                    f"block {name!r} has dimension {dim}, budget is {SDP_BLOCK_BUDGET}"
                )
            dims[name] = dim
        sign = {"min": 1.0, "max": -1.0}.get(problem.sense)
        if sign is None:
            raise ValidationError(f"sense must be 'min' or 'max', got {problem.sense!r}")
        self.sign = sign

        for name in problem.cost:
            if name not in dims:
                raise ValidationError(f"cost references unknown block {name!r}")
        rows = list(problem.eq_rows)
        n_eq = len(rows)
        slack_names = []
        for j, (coeffs, rhs) in enumerate(problem.ineq_rows):
            sname = f"_slack{j}"
            slack_names.append(sname)
            dims[sname] = 1
            row = dict(coeffs)
            row[sname] = np.ones((1, 1), dtype=complex)
            rows.append((row, rhs))
        self.names = names + slack_names
        self.user_names = names
        self.dims = [dims[n] for n in self.names]
        self.m = len(rows)
        self.n_eq = n_eq

        self.cost = []
        for name, d in zip(self.names, self.dims):
            c = problem.cost.get(name)
            c = np.zeros((d, d), dtype=complex) if c is None else _require_hermitian(c, f"cost[{name}]")
            if c.shape != (d, d):
                raise DimensionMismatchError(
                    f"cost[{name}] has shape {c.shape}, block dimension is {d}"
                )
            self.cost.append(sign * c)

        self.rows = np.zeros(self.m)
        self.a = [np.zeros((self.m, d, d), dtype=complex) for d in self.dims]
        index = {n: k for k, n in enumerate(self.names)}
        for i, (coeffs, rhs) in enumerate(rows):
            self.rows[i] = float(rhs)
            for name, mat in coeffs.items():
                if name not in index:
                    raise ValidationError(f"row {i} references unknown block {name!r}")
                k = index[name]
                mat = _require_hermitian(mat, f"row {i} coefficient for {name!r}")
                if mat.shape != (self.dims[k], self.dims[k]):
                    raise DimensionMismatchError(
                        f"row {i} coefficient for {name!r} has shape {mat.shape}"
                    )
                self.a[k][i] = mat

    def apply(self, xs):
        out = np.zeros(self.m)
        for a, x in zip(self.a, xs):
            out += np.einsum("ijk,kj->i", a, x).real
        return out

    def adjoint(self, y):
        return [np.einsum("i,ijk->jk", y, a) for a in self.a]


def _chol(mat):
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        jitter = 1e-14 * max(1.0, np.abs(mat).max())
        return np.linalg.cholesky(mat + jitter * np.eye(mat.shape[0]))


def _max_step(x, dx):
    """Largest alpha with x + alpha dx >= 0, via a Cholesky congruence."""
    l = _chol(x)
    m = np.linalg.solve(l, np.linalg.solve(l, dx.conj().T).conj().T)
    lam = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
    if lam >= -1e-16:
        return np.inf
    return -1.0 / lam


def solve_sdp(problem: SdpProblem, eps: float = SDP_EPS, max_iterations: int = SDP_MAX_ITERATIONS) -> SdpSolution:
    """Solve a block SDP to relative accuracy eps.

    Raises InfeasibleError when the iterates diverge in the way characteristic
    of an infeasible or unbounded problem, NumericalFailureError when the
    Newton system cannot be stabilized, BudgetExceededError for blocks above
    the dimension budget.
    """
    p = _BlockProblem(problem)
    m = p.m
    nt = float(sum(p.dims))
    b = p.rows

    scale_b = 1.0 + np.abs(b).max() if m else 1.0
    scale_c = 1.0 + max((np.abs(c).max() for c in p.cost), default=0.0)
    xs = [np.eye(d, dtype=complex) * scale_b for d in p.dims]
    ss = [np.eye(d, dtype=complex) * scale_c for d in p.dims]
    y = np.zeros(m)

    best = None
    status = "running"
    it = 0
    for it in range(1, max_iterations + 1):
        mu = sum(np.real(np.trace(x @ s)) for x, s in zip(xs, ss)) / nt
        pobj = sum(np.real(np.trace(c @ x)) for c, x in zip(p.cost, xs))
        dobj = float(b @ y)
        r_p = b - p.apply(xs)
        adj = p.adjoint(y)
        r_d = [c - a - s for c, a, s in zip(p.cost, adj, ss)]
        res_p = np.abs(r_p).max() / scale_b if m else 0.0
        res_d = max(np.abs(r).max() for r in r_d) / scale_c
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        if res_p <= eps and res_d <= eps and gap <= eps:
            status = "optimal"
            break
        if np.abs(y).max() > 1e12 * scale_b or max(np.abs(x).max() for x in xs) > 1e12 * scale_b:
            raise InfeasibleError(
                "iterates diverged; the problem looks primal or dual infeasible "
                f"(|y| = {np.abs(y).max():.2e}, residuals {res_p:.2e}/{res_d:.2e})"
            )
        if mu < 1e-14 and (res_p > np.sqrt(eps) or res_d > np.sqrt(eps)):
            raise InfeasibleError(
                "complementarity vanished while feasibility residuals stayed "
                f"large ({res_p:.2e}/{res_d:.2e}); no feasible point approached"
            )

        # Nesterov-Todd scaling per block: w s w = x
        ws = []
        for x, s in zip(xs, ss):
            lx = _chol(x)
            ls = _chol(s)
            u, sig, vh = np.linalg.svd(ls.conj().T @ lx)
            g = lx @ vh.conj().T / np.sqrt(sig)
            ws.append(g @ g.conj().T)

        # Schur complement M_ij = sum_b tr(A_ib W_b A_jb W_b)
        mat = np.zeros((m, m))
        waw = []
        for a, w in zip(p.a, ws):
            t = np.einsum("ab,ibc,cd->iad", w, a, w, optimize=True)
            waw.append(t)
            mat += np.einsum("iab,jba->ij", t, a, optimize=True).real
        reg = 0.0
        for attempt in range(6):
            try:
                chol = np.linalg.cholesky(mat + reg * np.eye(m)) if m else None
                break
            except np.linalg.LinAlgError:
                reg = 1e-12 * max(1.0, np.abs(mat).max()) * 10 ** attempt
        else:
            raise NumericalFailureError("Newton system is not positive definite")

        def schur_solve(rhs):
            if not m:
                return np.zeros(0)
            z = np.linalg.solve(chol, rhs)
            return np.linalg.solve(chol.conj().T, z)

        s_inv = []
        for s in ss:
            lam, u = eigh_hermitian(s)
            s_inv.append((u / lam) @ u.conj().T)

        def newton(comp_rhs):
            rhs = r_p.copy() if m else np.zeros(0)
            for a, w, rd, cr, t in zip(p.a, ws, r_d, comp_rhs, waw):
                wrw = w @ rd @ w
                rhs += np.einsum("ijk,kj->i", a, wrw - cr).real
            dy = schur_solve(rhs)
            adj_dy = p.adjoint(dy)
            dss = [rd - ad for rd, ad in zip(r_d, adj_dy)]
            dxs = []
            for cr, w, ds in zip(comp_rhs, ws, dss):
                dx = cr - w @ ds @ w
                dxs.append((dx + dx.conj().T) / 2)
            return dxs, dy, dss

        # predictor fixes the centering weight, corrector takes the step
        comp_aff = [-x for x in xs]
        dxa, dya, dsa = newton(comp_aff)
        ap = min(1.0, *(0.99 * _max_step(x, dx) for x, dx in zip(xs, dxa)))
        ad = min(1.0, *(0.99 * _max_step(s, ds) for s, ds in zip(ss, dsa)))
        mu_aff = sum(
            np.real(np.trace((x + ap * dx) @ (s + ad * ds)))
            for x, dx, s, ds in zip(xs, dxa, ss, dsa)
        ) / nt
        sigma = min(1.0, max((mu_aff / mu), 0.0) ** 3)

        comp = [sigma * mu * si - x for si, x in zip(s_inv, xs)]
        dxs, dy, dss = newton(comp)
        ap = min(1.0, *(0.99 * _max_step(x, dx) for x, dx in zip(xs, dxs)))
        ad = min(1.0, *(0.99 * _max_step(s, ds) for s, ds in zip(ss, dss)))
        xs = [(x + ap * dx + (x + ap * dx).conj().T) / 2 for x, dx in zip(xs, dxs)]
        ss = [(s + ad * ds + (s + ad * ds).conj().T) / 2 for s, ds in zip(ss, dss)]
        y = y + ad * dy

    else:
        raise NumericalFailureError(
            f"no convergence in {max_iterations} iterations "
            f"(gap {gap:.2e}, residuals {res_p:.2e}/{res_d:.2e})"
        )

    user_blocks = {
        name: xs[k] for k, name in enumerate(p.names) if not name.startswith("_slack")
    }
    return SdpSolution(
        primal_value=p.sign * pobj,
        dual_value=p.sign * dobj,
        blocks=user_blocks,
        y=y,
        status=status,
        iterations=it,
        gap=gap,
        primal_residual=res_p,
        dual_residual=res_d,
    )


def hypothesis_testing_entropy(rho, gamma, eps_ht: float, solver_eps: float = 1e-9) -> float:
    """One-shot distinguishability: -ln of the optimal type-II error.

    Minimizes tr(Q gamma) over effects 0 <= Q <= 1 with tr(Q rho) >= 1 - eps_ht,
    and returns -ln of the optimum in nats. Returns +inf when the optimum
    vanishes, which happens exactly when the kernel of gamma captures rho
    weight at least 1 - eps_ht; that case is decided spectrally before
    solving, since a path-following solver cannot certify a zero optimum.
    """
    rho = np.asarray(rho, dtype=complex)
    gamma = np.asarray(gamma, dtype=complex)
    if rho.shape != gamma.shape:
        raise DimensionMismatchError(
            f"state has shape {rho.shape}, reference has shape {gamma.shape}"
        )
    if not 0.0 < eps_ht < 1.0:
        raise ValidationError(f"eps_ht must lie in (0, 1), got {eps_ht}")
    d = rho.shape[0]

    lam, u = eigh_hermitian(gamma)
    kernel = u[:, lam <= 1e-12]
    if kernel.size:
        kernel_weight = float(np.real(np.trace(kernel.conj().T @ rho @ kernel)))
        if kernel_weight >= 1.0 - eps_ht - 1e-12:
            return np.inf

    problem = SdpProblem(
        blocks=(("q", d), ("r", d)),
        cost={"q": gamma},
        eq_rows=tuple(matrix_equality_rows({"q": 1.0, "r": 1.0}, np.eye(d), d)),
        ineq_rows=(({"q": -rho}, -(1.0 - eps_ht)),),
        sense="min",
    )
    value = solve_sdp(problem, eps=solver_eps).primal_value
    if value <= SENTINEL_FLOOR:
        return np.inf
    return -np.log(value)


def _canonical_sign(delta):
    """Flip the sign of a Hermitian matrix so the first nonzero entry is positive.

    Makes diamond_distance(a, b) and diamond_distance(b, a) solve the exact
    same program, so symmetry holds bit for bit.
    """
    flat = delta.ravel()
    nz = np.flatnonzero(np.abs(flat) > 0)
    if nz.size == 0:
        return delta
    lead = flat[nz[0]]
    key = lead.real if lead.real != 0 else lead.imag
    return -delta if key < 0 else delta


def diamond_distance(ch_a: Channel, ch_b: Channel, eps: float = DIAMOND_EPS) -> float:
    """Diamond-norm distance between two channels of equal dimensions.

    Solves the semidefinite program
        max 2 tr(Delta W),  0 <= W <= 1 (x) rho,  rho a state
    on the Choi difference Delta, the exact expression of the operational
    distance max over referenced inputs of the trace-norm output difference.
    Delegated to SCS through cvxpy; see the module docstring for why this
    one program is not run on solve_sdp.
    """
    import cvxpy as cp

    if (ch_a.dim_in, ch_a.dim_out) != (ch_b.dim_in, ch_b.dim_out):
        raise DimensionMismatchError("channels must share input and output dimensions")
    d_in, d_out = ch_a.dim_in, ch_a.dim_out
    dim = d_in * d_out
    if dim > DIAMOND_DIM_BUDGET:
        raise BudgetExceededError(
            f"Choi dimension {dim} exceeds the diamond budget {DIAMOND_DIM_BUDGET}"
        )

    delta = _canonical_sign(ch_a.choi - ch_b.choi)
    if np.abs(delta).max() == 0.0:
        return 0.0

    w = cp.Variable((dim, dim), hermitian=True)
    rho = cp.Variable((d_in, d_in), hermitian=True)
    zero = np.zeros((d_in, d_in))
    # 1 (x) rho assembled as a block-diagonal matrix; a Kronecker product with
    # a variable would expand into an enormous expression tree
    blocks = [
        [rho if i == j else zero for j in range(d_out)] for i in range(d_out)
    ]
    constraints = [
        w >> 0,
        cp.bmat(blocks) - w >> 0,
        cp.trace(rho) == 1,
    ]
    objective = cp.Maximize(2 * cp.real(cp.trace(delta @ w)))
    prob = cp.Problem(objective, constraints)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prob.solve(solver=cp.SCS, eps=eps, max_iters=200_000, verbose=False)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise NumericalFailureError(f"diamond-norm SDP ended with status {prob.status}")
    if prob.status == "optimal_inaccurate":
        warnings.warn("diamond-norm SDP reached reduced accuracy", RuntimeWarning)
    return float(np.clip(prob.value, 0.0, 2.0))
