import random
from fractions import Fraction

from troplift.linprog import GeRow, solve_max


def F(x):
    return Fraction(x)


def validate_duals(rows, nonneg, objective, result):
    """Exact dual feasibility + strong duality, per the module conventions."""
    combo = {}
    for r in rows:
        mu = result.duals.get(r.id, F(0))
        assert mu >= 0
        for v, c in r.coeffs.items():
            combo[v] = combo.get(v, F(0)) + mu * F(c)
    for v in {v for r in rows for v in r.coeffs} | set(objective):
        target = -F(objective.get(v, 0))
        got = combo.get(v, F(0))
        if v in nonneg:
            assert got <= target
        else:
            assert got == target
    bound = sum(result.duals.get(r.id, F(0)) * F(r.rhs) for r in rows)
    assert bound == -result.value


def validate_farkas(rows, nonneg, result):
    combo = {}
    total = F(0)
    for r in rows:
        mu = result.farkas.get(r.id, F(0))
        assert mu >= 0
        total += mu * F(r.rhs)
        for v, c in r.coeffs.items():
            combo[v] = combo.get(v, F(0)) + mu * F(c)
    for v, c in combo.items():
        if v in nonneg:
            assert c <= 0
        else:
            assert c == 0
    assert total > 0


def test_simple_bounded():
    rows = [
        GeRow("r1", {"x": F(-1)}, F(-4)),          # x <= 4
        GeRow("r2", {"x": F(-1), "y": F(-1)}, F(-6)),  # x + y <= 6
    ]
    res = solve_max({"x": F(1), "y": F(1)}, rows, nonneg={"x", "y"})
    assert res.status == "optimal"
    assert res.value == 6
    validate_duals(rows, {"x", "y"}, {"x": F(1), "y": F(1)}, res)


def test_free_variable_equality_pair():
    # y free, y >= 2 and -y >= -2 pin y = 2; maximize y
    rows = [GeRow("lo", {"y": F(1)}, F(2)), GeRow("hi", {"y": F(-1)}, F(-2))]
    res = solve_max({"y": F(1)}, rows, nonneg=set())
    assert res.status == "optimal" and res.value == 2
    assert res.x["y"] == 2
    validate_duals(rows, set(), {"y": F(1)}, res)


def test_infeasible_detected_with_farkas():
    rows = [
        GeRow("a", {"x": F(1)}, F(3)),    # x >= 3
        GeRow("b", {"x": F(-1)}, F(-1)),  # x <= 1
    ]
    res = solve_max({"x": F(1)}, rows, nonneg={"x"})
    assert res.status == "infeasible"
    validate_farkas(rows, {"x"}, res)


def test_empty_row_infeasible():
    rows = [GeRow("impossible", {}, F(1))]  # 0 >= 1
    res = solve_max({}, rows, nonneg=set())
    assert res.status == "infeasible"
    assert res.farkas["impossible"] > 0


def test_unbounded():
    rows = [GeRow("lo", {"x": F(1)}, F(0))]
    res = solve_max({"x": F(1)}, rows, nonneg=set())
    assert res.status == "unbounded"


def test_negative_optimum():
    # maximize t subject to t <= -2 (free t)
    rows = [GeRow("cap", {"t": F(-1)}, F(2))]
    res = solve_max({"t": F(1)}, rows, nonneg=set())
    assert res.status == "optimal" and res.value == -2
    validate_duals(rows, set(), {"t": F(1)}, res)


def test_degenerate_does_not_cycle():
    # classic degenerate vertex; must terminate
    rows = [
        GeRow("r1", {"x": F(-1), "y": F(-1)}, F(0)),
        GeRow("r2", {"x": F(-1), "y": F(1)}, F(0)),
        GeRow("r3", {"x": F(-1)}, F(-1)),
    ]
    res = solve_max({"x": F(1)}, rows, nonneg={"x", "y"})
    assert res.status == "optimal"
    assert res.value == 0


def test_random_lps_exact_duality():
    rng = random.Random(424242)
    for trial in range(120):
        nvars = rng.randint(1, 5)
        names = [f"v{i}" for i in range(nvars)]
        nonneg = {v for v in names if rng.random() < 0.5}
        rows = []
        for j in range(rng.randint(1, 7)):
            coeffs = {v: F(rng.randint(-4, 4)) for v in names if rng.random() < 0.8}
            rows.append(GeRow(f"r{j}", coeffs, F(rng.randint(-5, 5))))
        # keep the problem bounded: box every variable
        for i, v in enumerate(names):
            rows.append(GeRow(f"ub{i}", {v: F(-1)}, F(-10)))
            if v not in nonneg:
                rows.append(GeRow(f"lb{i}", {v: F(1)}, F(-10)))
        objective = {v: F(rng.randint(-3, 3)) for v in names}
        res = solve_max(objective, rows, nonneg=nonneg)
        assert res.status in ("optimal", "infeasible")
        if res.status == "optimal":
            # primal feasibility
            for r in rows:
                lhs = sum(F(c) * res.x.get(v, F(0)) for v, c in r.coeffs.items())
                assert lhs >= F(r.rhs)
            for v in nonneg:
                assert res.x.get(v, F(0)) >= 0
            assert sum(F(c) * res.x.get(v, F(0))
                       for v, c in objective.items()) == res.value
            validate_duals(rows, nonneg, objective, res)
        else:
            validate_farkas(rows, nonneg, res)
