"""Shared fixtures: catalog pairs, matrix pairs, and derivation spaces are
computed once per session since several test modules and the acceptance
suite query the same objects."""

import json

import pytest

from matderiv import (catalog, derivation_space, inner_space, matrix_pair)

CATALOG = ("field", "dual_numbers", "group_algebra_C2", "full_matrix_2",
           "upper_triangular_2", "direct_sum(field,field)")


@pytest.fixture(scope="session")
def pairs():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = catalog(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def mpairs(pairs):
    cache = {}

    def get(name, n):
        if (name, n) not in cache:
            a, m = pairs(name)
            cache[(name, n)] = matrix_pair(a, m, n)
        return cache[(name, n)]

    return get


@pytest.fixture(scope="session")
def derspaces(pairs, mpairs):
    """derivation_space for a base pair (n=None) or a matrix pair."""
    cache = {}

    def get(name, n=None):
        if (name, n) not in cache:
            if n is None:
                a, m = pairs(name)
            else:
                ma, mm = mpairs(name, n)
                a, m = ma.algebra, mm.bimodule
            cache[(name, n)] = derivation_space(a, m)
        return cache[(name, n)]

    return get


@pytest.fixture(scope="session")
def innerspaces(pairs, mpairs):
    cache = {}

    def get(name, n=None):
        if (name, n) not in cache:
            if n is None:
                a, m = pairs(name)
            else:
                ma, mm = mpairs(name, n)
                a, m = ma.algebra, mm.bimodule
            cache[(name, n)] = inner_space(a, m)
        return cache[(name, n)]

    return get


def write_map_file(path, lin, algebra="field", module="regular",
                   kind="derivation"):
    """Serialize a LinearMap as a MapFile the cli commands accept."""
    mat = [[str(lin.matrix.at(r, c)) for c in range(lin.matrix.cols)]
           for r in range(lin.matrix.rows)]
    path.write_text(json.dumps({"kind": kind, "algebra": algebra,
                                "module": module, "matrix": mat}),
                    encoding="utf-8")
    return str(path)


def write_algebra_file(path, name, dim, labels, unit, mult_triples):
    """mult_triples: mapping (i, j, k) -> rational string."""
    mult = [{"i": i, "j": j, "k": k, "c": c}
            for (i, j, k), c in sorted(mult_triples.items())]
    path.write_text(json.dumps({"name": name, "dim": dim,
                                "basis_labels": list(labels),
                                "unit": list(unit), "mult": mult}),
                    encoding="utf-8")
    return str(path)


def write_module_file(path, m, name="module"):
    left = [{"i": i, "p": p, "q": q, "c": str(m.left[i][p][q])}
            for i in range(m.algebra_dim) for p in range(m.dim)
            for q in range(m.dim) if m.left[i][p][q]]
    right = [{"p": p, "i": i, "q": q, "c": str(m.right[p][i][q])}
             for p in range(m.dim) for i in range(m.algebra_dim)
             for q in range(m.dim) if m.right[p][i][q]]
    path.write_text(json.dumps({"name": name, "dim": m.dim, "left": left,
                                "right": right}), encoding="utf-8")
    return str(path)
