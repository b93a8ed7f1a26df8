"""Approximate competitors: the supermodular-submodular procedure (SSP)
and greedy forward selection."""

import random
from dataclasses import dataclass

import numpy as np

from .setfn import ENUM_CAP, GroundSetError, set_of


def modular_lower_bound(g, current_mask, perm):
    """Tight modular lower bound of a submodular g along a greedy chain.

    perm must order all n elements with the elements of current_mask first.
    Returns (weights, constant) with h(B) = constant + sum of weights over B;
    h agrees with g at current_mask and h <= g everywhere.
    """
    n = g.n
    perm = [int(i) for i in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError("perm is not a permutation of the ground set")
    k = bin(current_mask).count("1")
    if {i for i in perm[:k]} != set(set_of(current_mask)):
        raise ValueError("current set is not a prefix of perm")
    weights = np.empty(n)
    const = g(0)
    mask = 0
    prev = const
    for j in range(n):
        mask |= 1 << perm[j]
        cur = g(mask)
        weights[perm[j]] = cur - prev
        prev = cur
    return weights, const


def _modular_min(f, weights, const):
    """Exact minimizer of f(A) - h(A) for the modular h, by enumeration."""
    n = f.n
    best_mask = 0
    best = f(0) - const
    for m in range(1, 1 << n):
        h = const + sum(weights[i] for i in range(n) if (m >> i) & 1)
        v = f(m) - h
        if v < best:
            best = v
            best_mask = m
    return best_mask, best


@dataclass
class SspResult:
    mask: int
    value: float
    iterations: int


def ssp(f, g, init=0, seed=0):
    """Supermodular-submodular procedure: replace g by a tight modular lower
    bound each round and minimize the submodular surrogate exactly.

    The chain permutation puts the current set first (ascending index) and
    the remaining elements in seeded-random order.
    """
    if f.n != g.n:
        raise GroundSetError("oracles live on different ground sets")
    n = f.n
    if n > ENUM_CAP:
        raise GroundSetError("ground set too large for the exhaustive inner step")
    rng = random.Random(seed)
    current = int(init)
    value = f(current) - g(current)
    iters = 0
    while True:
        iters += 1
        inside = set_of(current)
        rest = [i for i in range(n) if not (current >> i) & 1]
        rng.shuffle(rest)
        perm = inside + rest
        weights, const = modular_lower_bound(g, current, perm)
        cand, _ = _modular_min(f, weights, const)
        cand_val = f(cand) - g(cand)
        if cand_val < value - 1e-12:
            current, value = cand, cand_val
        else:
            break
    return SspResult(mask=current, value=value, iterations=iters)


def greedy(f, g):
    """Forward selection on f - g: repeatedly add the element with the most
    negative marginal change, smallest index on ties; stop when no addition
    improves.  Returns (mask, value)."""
    n = f.n
    if f.n != g.n:
        raise GroundSetError("oracles live on different ground sets")
    if n > ENUM_CAP:
        raise GroundSetError("ground set too large")
    current = 0
    value = f(0) - g(0)
    while True:
        best_i = None
        best_val = value - 1e-12
        for i in range(n):
            if (current >> i) & 1:
                continue
            m = current | (1 << i)
            v = f(m) - g(m)
            if v < best_val:
                best_val = v
                best_i = i
        if best_i is None:
            return current, value
        current |= 1 << best_i
        value = best_val
