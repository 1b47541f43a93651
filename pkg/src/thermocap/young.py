"""Symmetric-group combinatorics for isotypic projectors.

Partitions double as Young diagram labels and cycle types. Characters come
from the Murnaghan-Nakayama rule in beta-number form, dimensions from the
hook length formula, so the two can cross-check each other.
"""

from functools import lru_cache
from math import factorial

import numpy as np


def partitions(n: int, max_rows: int = None):
    """All partitions of n in lexicographically descending order, as tuples."""
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if max_rows is not None and len(prefix) == max_rows:
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    return out


def class_size(mu, n: int) -> int:
    """Number of permutations in S_n with cycle type mu (= n!/z_mu)."""
    z = 1
    for part in set(mu):
        m = mu.count(part)
        z *= part ** m * factorial(m)
    return factorial(n) // z


@lru_cache(maxsize=None)
def character(lam: tuple, mu: tuple) -> int:
    """Irreducible character chi^lam evaluated on cycle type mu."""
    if sum(lam) == 0:
        return 1
    r = mu[0]
    k = len(lam)
    betas = tuple(lam[i] + k - 1 - i for i in range(k))
    bset = set(betas)
    total = 0
    for b in betas:
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        # strip height - 1 = beta values crossed on the way down
        crossed = sum(1 for x in betas if nb < x < b)
        new_betas = sorted((x for x in betas if x != b), reverse=True)
        new_betas.append(nb)
        new_betas.sort(reverse=True)
        kk = len(new_betas)
        new_lam = tuple(
            v for v in (new_betas[i] - (kk - 1 - i) for i in range(kk)) if v > 0
        )
        total += (-1) ** crossed * character(new_lam, mu[1:])
    return total


def dimension(lam) -> int:
    """Irrep dimension of S_n for diagram lam, by the hook length formula."""
    n = sum(lam)
    hooks = 1
    k = len(lam)
    for i in range(k):
        for j in range(lam[i]):
            arm = lam[i] - j - 1
            leg = sum(1 for r in range(i + 1, k) if lam[r] > j)
            hooks *= arm + leg + 1
    return factorial(n) // hooks


def class_sums(local_dim: int, n: int):
    """Dense class-sum operators C_mu on (C^local_dim)^(x n), keyed by cycle type.

    C_mu sums the permutation operators of all elements with cycle type mu,
    acting by permuting tensor factors.
    """
    from itertools import permutations

    dim = local_dim ** n
    digits = np.empty((dim, n), dtype=np.int64)
    idx = np.arange(dim)
    for pos in range(n - 1, -1, -1):
        digits[:, pos] = idx % local_dim
        idx //= local_dim
    weights = local_dim ** np.arange(n - 1, -1, -1)

    sums = {tuple(mu): np.zeros((dim, dim)) for mu in partitions(n)}
    col = np.arange(dim)
    for perm in permutations(range(n)):
        mu = _cycle_type(perm)
        # factor at output slot j comes from input slot perm[j]
        target = digits[:, list(perm)] @ weights
        sums[mu][target, col] += 1.0
    return sums


def _cycle_type(perm) -> tuple:
    n = len(perm)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))
