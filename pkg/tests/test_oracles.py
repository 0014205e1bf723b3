"""Interpreter results checked against independent brute-force oracles."""

import random
import time
from collections import Counter

import pytest

from conftest import load_corpus
from oracles import combinations, queens_solutions, round_trips, to_py


@pytest.mark.parametrize("n,count", [(4, 2), (5, 10), (6, 4), (7, 40), (8, 92)])
def test_n_queens_counts(interp, n, count):
    load_corpus(interp, "nqueens.egi")
    start = time.perf_counter()
    solutions = to_py(interp.eval(f"(n-queens {n})"))
    assert time.perf_counter() - start < 30
    oracle = queens_solutions(n)
    assert len(oracle) == count
    got = sorted(tuple(h[k] for k in range(1, n + 1)) for h in solutions)
    assert got == sorted(oracle)


def test_trips_against_permutations(interp):
    load_corpus(interp, "trips.egi")
    routes = to_py(interp.eval("trips"))
    assert len(routes) == 120
    got = Counter((fare, tuple(s[k] for k in range(1, 7))) for fare, s in routes)
    assert got == Counter(round_trips())


def test_comb_random_cases(interp):
    rng = random.Random(20261016)
    for _ in range(50):
        size = rng.randint(0, 7)
        xs = rng.sample(range(1, 30), size)
        n = rng.randint(1, max(1, size))
        src = "{" + " ".join(map(str, xs)) + "}"
        got = to_py(interp.eval(f"(comb {n} {src})"))
        assert Counter(map(tuple, got)) == Counter(map(tuple, combinations(n, xs))), (n, xs)


def test_comb_allows_duplicates(interp):
    got = to_py(interp.eval("(comb 2 {5 5 6})"))
    assert Counter(map(tuple, got)) == Counter(map(tuple, combinations(2, [5, 5, 6])))


def test_take_drop_exhaustive(interp):
    for length in range(0, 9):
        xs = [3 * k + 1 for k in range(length)]
        src = "{" + " ".join(map(str, xs)) + "}"
        for n in range(0, 9):
            assert to_py(interp.eval(f"(take {n} {src})")) == xs[:n]
            assert to_py(interp.eval(f"(drop {n} {src})")) == xs[n:]
