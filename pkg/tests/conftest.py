"""Shared generators and oracles for the test suite.

Everything random is driven by an explicit np.random.default_rng seed so
that every test is reproducible in isolation.
"""

import numpy as np

import thermocap as tc


def random_hermitian(rng, dim, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def random_density(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    # fix phases so the distribution is Haar
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_kraus(rng, dim_in, dim_out, n_kraus):
    # columns of an isometry give sum K^dag K = 1 up to QR roundoff
    g = rng.normal(size=(n_kraus * dim_out, dim_in)) + 1j * rng.normal(
        size=(n_kraus * dim_out, dim_in)
    )
    q, _ = np.linalg.qr(g)
    return [q[i * dim_out : (i + 1) * dim_out] for i in range(n_kraus)]


def random_channel(rng, dim_in=2, dim_out=2, n_kraus=2, hamiltonians=False, scale=1.0):
    ks = random_kraus(rng, dim_in, dim_out, n_kraus)
    h_in = random_hermitian(rng, dim_in, scale) if hamiltonians else None
    h_out = random_hermitian(rng, dim_out, scale) if hamiltonians else None
    return tc.channel_from_kraus(ks, h_in=h_in, h_out=h_out)


PAULI = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def bloch_grid_capacity(kraus, h_in, h_out, beta, step):
    """Brute-force capacity of a qubit channel over a Bloch-ball grid.

    Independent of the solver stack: the channel's affine Bloch
    representation is read off the Kraus operators and both entropies come
    from the binary-entropy-of-radius formula.  Returns the grid maximum of
    F(E(sigma)) - F(sigma) in energy units.
    """
    def app(rho):
        return sum(k @ rho @ k.conj().T for k in kraus)

    m = np.zeros((3, 3))
    c = np.zeros(3)
    img_id = app(PAULI[0]) / 2
    for j in range(3):
        img = app(PAULI[j + 1]) / 2
        for i in range(3):
            m[i, j] = np.real(np.trace(PAULI[i + 1] @ img))
    for i in range(3):
        c[i] = np.real(np.trace(PAULI[i + 1] @ img_id))

    t_in = np.array([np.real(np.trace(h_in @ p)) / 2 for p in PAULI[1:]])
    t_out = np.array([np.real(np.trace(h_out @ p)) / 2 for p in PAULI[1:]])
    e0_in = np.real(np.trace(h_in)) / 2
    e0_out = np.real(np.trace(h_out)) / 2

    def h2_of_radius(r):
        r = np.clip(r, 0.0, 1.0 - 1e-15)
        p = (1 + r) / 2
        q = (1 - r) / 2
        out = -p * np.log(p)
        mask = q > 0
        out[mask] -= q[mask] * np.log(q[mask])
        return out

    axis = np.arange(-1.0, 1.0 + step / 2, step)
    xg, yg = np.meshgrid(axis, axis, indexing="ij")
    best = -np.inf
    for z in axis:
        b = np.stack([xg.ravel(), yg.ravel(), np.full(xg.size, z)])
        b = b[:, (b ** 2).sum(0) <= 1.0]
        if b.shape[1] == 0:
            continue
        bo = m @ b + c[:, None]
        s_in = h2_of_radius(np.sqrt((b ** 2).sum(0)))
        s_out = h2_of_radius(np.sqrt((bo ** 2).sum(0)))
        e_in = e0_in + t_in @ b
        e_out = e0_out + t_out @ bo
        val = beta * (e_out - e_in) + s_in - s_out
        best = max(best, val.max())
    return best / beta


def erasure_channel(h=None, beta_target=None):
    """Qubit erasure to |0>."""
    k0 = np.array([[1, 0], [0, 0]], dtype=complex)
    k1 = np.array([[0, 1], [0, 0]], dtype=complex)
    return tc.channel_from_kraus([k0, k1], h_in=h, h_out=h)


def amplitude_damping(gamma, h=None):
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return tc.channel_from_kraus([k0, k1], h_in=h, h_out=h)


def permutation_operator(perm, d):
    """Matrix sending factor perm[j] of the input to output slot j."""
    n = len(perm)
    dim = d ** n
    digits = np.empty((dim, n), dtype=np.int64)
    idx = np.arange(dim)
    for pos in range(n - 1, -1, -1):
        digits[:, pos] = idx % d
        idx //= d
    weights = d ** np.arange(n - 1, -1, -1)
    target = digits[:, list(perm)] @ weights
    op = np.zeros((dim, dim))
    op[target, np.arange(dim)] = 1.0
    return op


def lp_hypothesis_value(p, g, eps):
    """Neyman-Pearson optimum for commuting (diagonal) states.

    min sum q_i g_i over 0 <= q <= 1 with sum q_i p_i >= 1 - eps: fill the
    test greedily in decreasing likelihood-ratio order, fractional last step.
    """
    need = 1.0 - eps
    ratio = [p[i] / g[i] if g[i] > 0 else np.inf for i in range(len(p))]
    cost = 0.0
    for i in sorted(range(len(p)), key=lambda k: -ratio[k]):
        if need <= 1e-15:
            break
        if p[i] <= 0:
            continue
        q = min(1.0, need / p[i])
        cost += q * g[i]
        need -= q * p[i]
    return cost
