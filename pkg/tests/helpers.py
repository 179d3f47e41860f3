"""Shared test helpers."""
import numpy as np

from iestim.core import Instance, ProductInstance

ACCEPTANCE_LINES = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    """Print and remember one acceptance line; the summary hook repeats them."""
    line = f"ACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append((number, line))


def random_table(rng, n, levels=None):
    """Random square table whose alternative 0 is an optimal target."""
    if levels is None:
        T = rng.uniform(-1, 1, size=(n, n))
    else:
        T = rng.choice(levels, size=(n, n))
    T[0, 0] = 1.0
    return T


def random_instance(rng, n, levels=None, noise_mode="deterministic"):
    return Instance(random_table(rng, n, levels), 0, noise_mode)


def random_product(rng, n_f, n_a, levels=None, noise_mode="two_point"):
    if levels is None:
        F = rng.uniform(-1, 1, size=(n_f, n_a))
    else:
        F = rng.choice(levels, size=(n_f, n_a))
    return ProductInstance(F, 0, noise_mode)
