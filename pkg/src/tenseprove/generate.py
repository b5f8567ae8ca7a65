"""Seeded random core formulas for corpus runs and property tests."""

from __future__ import annotations

import random

from .formula import Atom, BlackBox, Bottom, Box, Formula, Implies


def random_core_formula(rng: random.Random, atoms=("p", "q", "r"),
                        max_size: int = 12, max_degree: int = 2) -> Formula:
    """One random core formula with at most max_size AST nodes and modal
    degree at most max_degree."""
    f, _ = _grow(rng, tuple(atoms), max_size, max_degree)
    return f


def _grow(rng, atoms, size, degree):
    if size <= 1:
        return _leaf(rng, atoms), 1
    kinds = ["imp", "imp", "leaf"]
    if degree > 0:
        kinds += ["box", "bbox", "box", "bbox"]
    kind = rng.choice(kinds)
    if kind == "leaf":
        return _leaf(rng, atoms), 1
    if kind == "imp":
        lsize = rng.randint(1, size - 2) if size > 2 else 1
        left, nl = _grow(rng, atoms, lsize, degree)
        right, nr = _grow(rng, atoms, size - 1 - nl, degree)
        return Implies(left, right), 1 + nl + nr
    body, nb = _grow(rng, atoms, size - 1, degree - 1)
    return (Box(body) if kind == "box" else BlackBox(body)), 1 + nb


def _leaf(rng, atoms):
    return Atom(rng.choice(atoms)) if rng.random() < 0.85 else Bottom()


def corpus(seed: int, n: int, atoms=("p", "q", "r"),
           max_size: int = 12, max_degree: int = 2) -> list[Formula]:
    rng = random.Random(seed)
    return [random_core_formula(rng, atoms, max_size, max_degree) for _ in range(n)]
