"""Shared oracles and random-instance generators for the test suite."""

import math
import random

import numpy as np

from arithcoh.ghost import FiniteAbelianGroup, GhostSpaceFirstKind, idft, quotient_group_map

# group shapes with |G| <= 16 used by the randomized ghost suites
GROUP_POOL = [
    (2,), (3,), (4,), (5,), (6,), (7,), (8,), (9,), (10,), (11,), (12,),
    (13,), (14,), (15,), (16,), (2, 2), (2, 4), (2, 6), (2, 8), (3, 3),
    (4, 4), (2, 2, 2), (2, 2, 4), (2, 2, 2, 2),
]


def random_pd_gram(rng: random.Random, n: int):
    """Random positive-definite Gram matrix with entries in [0.2, 5]."""
    if n == 1:
        return [[rng.uniform(0.2, 5.0)]]
    a = rng.uniform(0.5, 5.0)
    c = rng.uniform(0.5, 5.0)
    b = rng.uniform(0.2, min(5.0, 0.8 * math.sqrt(a * c)))
    return [[a, b], [b, c]]


def brute_force_theta(gram, center, box: int = 60) -> float:
    """Independent oracle: direct summation over the integer box |v_i| <= box."""
    g = np.asarray(gram, dtype=float)
    n = g.shape[0]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    ks = np.arange(-box, box + 1)
    if n == 1:
        y = ks + c[0]
        q = g[0, 0] * y * y
    else:
        X, Y = np.meshgrid(ks, ks, indexing="ij")
        y0 = X + c[0]
        y1 = Y + c[1]
        q = g[0, 0] * y0 * y0 + 2.0 * g[0, 1] * y0 * y1 + g[1, 1] * y1 * y1
    return math.fsum(np.exp(-math.pi * q).ravel().tolist())


def brute_force_points(gram, center, radius, box: int = 8):
    """All v in the box with Q(v + center) <= radius, sorted lexicographically."""
    g = np.asarray(gram, dtype=float)
    n = g.shape[0]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    out = []
    if n == 1:
        candidates = [(v,) for v in range(-box, box + 1)]
    else:
        candidates = [(v0, v1) for v0 in range(-box, box + 1) for v1 in range(-box, box + 1)]
    for v in candidates:
        y = np.asarray(v, dtype=float) + c
        if float(y @ g @ y) <= radius:
            out.append(list(v))
    return sorted(out)


def random_even_spectrum(rng: random.Random, group: FiniteAbelianGroup,
                         mass: float) -> np.ndarray:
    """Nonnegative even spectrum with w[0] = 1 and sum of the rest = mass."""
    w = np.zeros(group.size)
    w[0] = 1.0
    neg = group.neg_table()
    raw = np.array([rng.uniform(0.0, 1.0) for _ in range(group.size)])
    raw[0] = 0.0
    raw = 0.5 * (raw + raw[neg])
    total = raw.sum()
    if total > 0:
        w += raw * (mass / total)
    return w


def random_first_kind(rng: random.Random, orders=None,
                      subgroup_prob: float = 0.3) -> GhostSpaceFirstKind:
    """Random valid first-kind structure.

    Built from a nonnegative even spectrum so positive-definiteness holds by
    construction, with the off-zero mass below 1 so u stays strictly positive.
    With probability subgroup_prob the function is lifted from a proper
    quotient, so the unit subgroup {u = 1} is nontrivial.
    """
    if orders is None:
        orders = rng.choice(GROUP_POOL)
    group = FiniteAbelianGroup(tuple(orders))
    lift = rng.random() < subgroup_prob and group.size > 2
    if lift:
        gen = rng.choice([x for x in group.elements() if any(x)])
        base_group, proj = quotient_group_map(group, [gen])
    else:
        base_group, proj = group, np.arange(group.size)
    w = random_even_spectrum(rng, base_group, mass=rng.uniform(0.05, 0.9))
    u = (idft(base_group, w * base_group.size)).real
    u = u / u[0]
    return GhostSpaceFirstKind(group, u[proj])
