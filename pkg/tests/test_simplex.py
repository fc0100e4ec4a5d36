import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from cksub.simplex import LpModel, add_rows, remap_basis, solve


def exact_vertex_optimum(c, rows, rhs, n):
    """Max c.x over A x <= b, 0 <= x <= 1 by enumerating vertices (exact)."""
    cons = [([F(a) for a in r], F(b)) for r, b in zip(rows, rhs)]
    for j in range(n):
        e = [F(0)] * n
        e[j] = F(1)
        cons.append((e, F(1)))
        cons.append(([-a for a in e], F(0)))
    best = None
    for pick in itertools.combinations(cons, n):
        mat = [list(a) + [b] for a, b in pick]
        ok = True
        for col in range(n):
            piv = next((i for i in range(col, n) if mat[i][col] != 0), None)
            if piv is None:
                ok = False
                break
            mat[col], mat[piv] = mat[piv], mat[col]
            for i in range(n):
                if i != col and mat[i][col]:
                    f = mat[i][col] / mat[col][col]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[col])]
        if not ok:
            continue
        x = [mat[i][n] / mat[i][i] for i in range(n)]
        if all(sum(a * v for a, v in zip(r, x)) <= b for r, b in cons):
            val = sum(F(ci) * v for ci, v in zip(c, x))
            best = val if best is None else max(best, val)
    return best


def test_trivial_models():
    assert solve(LpModel(1, [1])).objective == 1
    m = LpModel(2, [1, 1]).add_row([1, 1], 1)
    assert solve(m).objective == pytest.approx(1)
    assert solve(LpModel(1, [1]).add_row({}, -1)).status == "infeasible"


def test_p3_root_then_cut():
    m = LpModel(3, [5, -1, 5])
    for v in range(3):
        m.add_row({v: 1}, 1)
    root = solve(m)
    assert root.objective == pytest.approx(10) and np.allclose(root.x, [1, 0, 1])
    add_rows(m, [({0: 1, 1: -1, 2: 1}, 1)])
    cut = solve(m, root.basis)
    assert cut.objective == pytest.approx(9)
    assert np.all(m.matrix() @ cut.x <= np.array(m.rhs) + 1e-7)


def test_satisfied_row_keeps_optimum():
    m = LpModel(2, [1, 2]).add_row([1, 1], 1.5)
    first = solve(m)
    m.add_row([1, 0], 5)
    assert solve(m, first.basis).objective == pytest.approx(first.objective)


def test_bounds_and_errors():
    m = LpModel(2, [1, 1])
    assert solve(m, lb=[0, 0], ub=[0, 1]).objective == pytest.approx(1)
    assert solve(m, lb=[1, 0], ub=[0, 1]).status == "infeasible"
    with pytest.raises(ValueError):
        LpModel(2, [1])
    with pytest.raises(ValueError):
        LpModel(1, [1], ub=[np.inf])
    with pytest.raises(ValueError):
        m.add_row([1], 0)
    with pytest.raises(ValueError):
        m.add_row({5: 1}, 0)


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_matches_exact_vertex_enumeration(n, m, data):
    c = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m))
    rhs = data.draw(st.lists(st.integers(-2, 4), min_size=m, max_size=m))
    model = LpModel(n, c)
    for r, b in zip(rows, rhs):
        model.add_row(r, b)
    sol = solve(model)
    best = exact_vertex_optimum(c, rows, rhs, n)
    if best is None:
        assert sol.status == "infeasible"
    else:
        assert sol.status == "optimal" and sol.objective == pytest.approx(float(best), abs=1e-7)


def test_warm_starts_match_highs_and_are_monotone():
    rng = np.random.default_rng(3)
    for _ in range(60):
        n, mm = int(rng.integers(2, 12)), int(rng.integers(1, 12))
        a = rng.integers(-3, 4, (mm, n)).astype(float)
        b = rng.integers(0, 6, mm).astype(float)
        c = rng.integers(-5, 6, n).astype(float)
        model = LpModel(n, c)
        prev, last = None, np.inf
        for i in range(mm):
            model.add_row(a[i], b[i])
            sol = solve(model, prev.basis if prev else None)
            ref = linprog(-c, A_ub=a[: i + 1], b_ub=b[: i + 1], bounds=[(0, 1)] * n, method="highs")
            assert sol.status == "optimal" and sol.objective == pytest.approx(-ref.fun, abs=1e-6)
            assert sol.objective <= last + 1e-9
            last, prev = sol.objective, sol


def test_remove_rows_with_remapped_basis():
    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(60):
        n, mm = int(rng.integers(2, 10)), int(rng.integers(3, 10))
        a = rng.integers(-3, 4, (mm, n)).astype(float)
        b = rng.integers(0, 6, mm).astype(float)
        c = rng.integers(-5, 6, n).astype(float)
        model = LpModel(n, c)
        for i in range(mm):
            model.add_row(a[i], b[i])
        sol = solve(model)
        keep = [i for i in range(mm) if sol.basis.basic.count(n + i) == 0 or rng.random() < 0.5]
        warm = remap_basis(sol.basis, n, keep)
        model.remove_rows(keep)
        ref = linprog(-c, A_ub=a[keep], b_ub=b[keep], bounds=[(0, 1)] * n, method="highs")
        again = solve(model, warm)
        assert again.objective == pytest.approx(-ref.fun, abs=1e-6)
        checked += warm is not None and len(keep) < mm
    assert checked > 10


def test_remap_refuses_nonbasic_slack():
    m = LpModel(1, [1]).add_row([1], 0.5)
    sol = solve(m)
    assert 1 not in sol.basis.basic   # the binding row's slack is nonbasic
    assert remap_basis(sol.basis, 1, []) is None
    assert remap_basis(None, 1, [0]) is None


def test_deterministic():
    m = LpModel(3, [1, 2, 3]).add_row([1, 1, 1], 1.5).add_row([0, 1, 1], 1)
    a, b = solve(m), solve(m)
    assert a.objective == b.objective and np.array_equal(a.x, b.x) and a.basis == b.basis
