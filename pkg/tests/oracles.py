"""Independent brute-force oracles. Plain Python, no interpreter code."""

import itertools

from loopmatch.core import Collection, Hash, Tuple


def to_py(v):
    """Convert an interpreter value into lists, tuples and dicts for comparison."""
    if isinstance(v, Collection):
        return [to_py(x) for x in v.values()]
    if isinstance(v, Tuple):
        return tuple(to_py(t.force()) for t in v.items)
    if isinstance(v, Hash):
        return {k: to_py(t.force()) for k, t in v.entries.items()}
    return v


def queens_solutions(n):
    """Permutations where no two queens share a diagonal; row i holds column perm[i]."""
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if all(abs(perm[i] - perm[j]) != j - i
               for i in range(n) for j in range(i + 1, n)):
            out.append(perm)
    return out


FARES = {
    "Tokyo": {"Shinjuku": 200, "Shibuya": 200, "Mitaka": 390, "Kinshicho": 160, "Kitasenju": 220},
    "Shinjuku": {"Tokyo": 200, "Shibuya": 160, "Mitaka": 220, "Kinshicho": 220, "Kitasenju": 310},
    "Shibuya": {"Tokyo": 200, "Shinjuku": 160, "Mitaka": 310, "Kinshicho": 220, "Kitasenju": 310},
    "Mitaka": {"Tokyo": 390, "Shinjuku": 220, "Shibuya": 310, "Kinshicho": 470, "Kitasenju": 550},
    "Kinshicho": {"Tokyo": 160, "Shinjuku": 220, "Shibuya": 220, "Mitaka": 470, "Kitasenju": 220},
    "Kitasenju": {"Tokyo": 220, "Shinjuku": 310, "Shibuya": 310, "Mitaka": 550, "Kinshicho": 220},
}


def round_trips():
    """Every tour from Tokyo through the other stations once and back, as (fare, stops)."""
    others = [s for s in FARES if s != "Tokyo"]
    out = []
    for perm in itertools.permutations(others):
        stops = list(perm) + ["Tokyo"]
        path = ["Tokyo"] + stops
        fare = sum(FARES[a][b] for a, b in zip(path, path[1:]))
        out.append((fare, tuple(stops)))
    return out


def combinations(n, xs):
    return [list(c) for c in itertools.combinations(xs, n)]
