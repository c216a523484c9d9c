import numpy as np
import pytest

from affsym import geometry as geo
from affsym.model import ComplexBlock, RealBlock, assemble, tridiagonal_omega
from affsym.scenarios import load_scenario
from affsym.tensor_ops import (AlgebraicCurvature, ArityError, CovariantField,
                               GeometricCurvature, RecursionCapError,
                               alternating_sum_identity, nabla_S_codazzi,
                               nabla_power, nabla_tensor, r_power_action,
                               r_power_tensor)


def _model():
    return assemble([RealBlock(2, 0.7, 1), RealBlock(1, -0.4, -1),
                     RealBlock(1, 1.2, 1)])


def test_k_zero_is_identity():
    m = _model()
    prov = AlgebraicCurvature(m)
    w = tridiagonal_omega(4)
    for i in range(4):
        for j in range(4):
            assert r_power_action(prov, w, 0, (i, j)) == w[i, j]


def test_arity_checks():
    prov = AlgebraicCurvature(_model())
    w = tridiagonal_omega(4)
    with pytest.raises(ArityError):
        r_power_action(prov, w, 1, (0, 1, 2))
    with pytest.raises(RecursionCapError):
        r_power_action(prov, w, 9, tuple(0 for _ in range(20)))


def test_pair_swap_negates_exactly():
    prov = AlgebraicCurvature(_model())
    rng = np.random.default_rng(2)
    w = rng.uniform(-1, 1, (4, 4))
    w = w - w.T
    for _ in range(50):
        k = int(rng.integers(1, 4))
        args = tuple(int(v) for v in rng.integers(0, 4, size=2 * k + 2))
        base = r_power_action(prov, w, k, args)
        for pair in range(k):
            swapped = list(args)
            swapped[2 * pair], swapped[2 * pair + 1] = \
                swapped[2 * pair + 1], swapped[2 * pair]
            assert r_power_action(prov, w, k, tuple(swapped)) == -base


def test_multilinearity():
    prov = AlgebraicCurvature(_model())
    rng = np.random.default_rng(3)
    w = rng.uniform(-1, 1, (4, 4))
    w = w - w.T
    e = np.eye(4)
    for _ in range(20):
        k = int(rng.integers(1, 3))
        args = [int(v) for v in rng.integers(0, 4, size=2 * k + 2)]
        slot = int(rng.integers(0, len(args)))
        i, j = int(rng.integers(0, 4)), int(rng.integers(0, 4))
        # power-of-two coefficients: scaling commutes with rounding, so exact
        combo = list(args)
        combo[slot] = 2.0 * e[i] + 0.5 * e[j]
        lhs = r_power_action(prov, w, k, combo)
        a1 = list(args)
        a1[slot] = i
        a2 = list(args)
        a2[slot] = j
        assert lhs == 2.0 * r_power_action(prov, w, k, a1) \
            + 0.5 * r_power_action(prov, w, k, a2)
        # arbitrary real coefficients agree to relative 1e-12
        c1, c2 = float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2))
        combo[slot] = c1 * e[i] + c2 * e[j]
        lhs = r_power_action(prov, w, k, combo)
        ref = c1 * r_power_action(prov, w, k, a1) + c2 * r_power_action(prov, w, k, a2)
        assert abs(lhs - ref) <= 1e-12 * max(1.0, abs(ref))


def test_memoized_matches_plain_bit_for_bit():
    prov = AlgebraicCurvature(_model())
    rng = np.random.default_rng(4)
    w = rng.uniform(-1, 1, (4, 4))
    w = w - w.T
    for _ in range(30):
        k = int(rng.integers(1, 4))
        args = tuple(int(v) for v in rng.integers(0, 4, size=2 * k + 2))
        assert r_power_action(prov, w, k, args) == \
            r_power_action(prov, w, k, args, memo=False)


def test_tensor_mode_matches_recursion():
    m = assemble([RealBlock(2, 0.3, 1), ComplexBlock(1, 0.5, 1.1)])
    prov = AlgebraicCurvature(m)
    rng = np.random.default_rng(5)
    w = rng.uniform(-1, 1, (4, 4))
    w = w - w.T
    for k in (1, 2, 3):
        tensor = r_power_tensor(prov, w, k)
        for _ in range(25):
            args = tuple(int(v) for v in rng.integers(0, 4, size=2 * k + 2))
            assert abs(tensor[args] - r_power_action(prov, w, k, args)) < 1e-12


def test_geometric_example_values():
    sc = load_scenario("paper_example_n2")
    point = sc.sample_points[0]
    st = geo.induced_structure(sc, point)
    prov = GeometricCurvature(geo.curvature(st).R)
    w = sc.omega_at(point)
    x, y = point[0], point[1]
    assert abs(r_power_action(prov, w, 1, (0, 2, 0, 2)) - (-x * y * w[0, 1])) < 1e-12
    assert abs(r_power_action(prov, w, 2, (0, 2, 0, 2, 0, 2)) - x * y * w[1, 2]) < 1e-12
    assert np.max(np.abs(r_power_tensor(prov, w, 3))) < 1e-8


# -- covariant derivatives ----------------------------------------------


def _fd_nabla(field, scenario, k, point, idxs, h=1e-5):
    """Index-formula oracle with central-difference coordinate derivatives."""
    if k == 0:
        return field.values_at(point, scenario.coords)[tuple(idxs)]
    i0, rest = idxs[0], tuple(idxs[1:])
    up = list(point)
    dn = list(point)
    up[i0] += h
    dn[i0] -= h
    out = (_fd_nabla(field, scenario, k - 1, tuple(up), rest, h)
           - _fd_nabla(field, scenario, k - 1, tuple(dn), rest, h)) / (2 * h)
    gamma = geo.induced_structure(scenario, point).gamma
    for t, it in enumerate(rest):
        for m in range(scenario.dim):
            if gamma[m, i0, it] != 0.0:
                out -= gamma[m, i0, it] * _fd_nabla(
                    field, scenario, k - 1, point, rest[:t] + (m,) + rest[t + 1:], h)
    return out


def test_nabla_zero_is_component():
    sc = load_scenario("paper_example_n2")
    sj = geo.structure_jets(sc, sc.sample_points[0], 0)
    w = sc.omega_at(sc.sample_points[0])
    field = CovariantField.constant(w)
    assert nabla_power(field, sj, 0, (1, 2)) == w[1, 2]


def test_flat_connection_constant_form():
    sc = load_scenario("paraboloid")
    sj = geo.structure_jets(sc, sc.sample_points[0], 1)
    field = CovariantField.constant(sc.omega_at(sc.sample_points[0]))
    assert np.max(np.abs(nabla_tensor(field, sj, 1))) == 0.0


def test_nabla_matches_finite_differences_on_sphere():
    sc = load_scenario("centroaffine_sphere")
    point = sc.sample_points[0]
    field = CovariantField.constant(sc.omega_at(point))
    sj = geo.structure_jets(sc, point, 1)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                got = nabla_power(field, sj, 1, (i, j, k))
                ref = _fd_nabla(field, sc, 1, point, (i, j, k))
                assert abs(got - ref) < 1e-7


def test_nabla_two_matches_finite_differences():
    sc = load_scenario("centroaffine_sphere")
    point = sc.sample_points[2]
    field = CovariantField.constant(sc.omega_at(point))
    sj = geo.structure_jets(sc, point, 1)
    rng = np.random.default_rng(6)
    for _ in range(8):
        idxs = tuple(int(v) for v in rng.integers(0, 4, size=4))
        got = nabla_power(field, sj, 2, idxs)
        ref = _fd_nabla(field, sc, 2, point, idxs, h=2e-4)
        assert abs(got - ref) < 1e-5 * max(1.0, abs(ref))


def test_nabla_order_cap():
    sc = load_scenario("paraboloid")
    sj = geo.structure_jets(sc, sc.sample_points[0], 1)
    field = CovariantField.constant(tridiagonal_omega(4))
    with pytest.raises(RecursionCapError):
        nabla_power(field, sj, 3, (0, 0, 0, 1, 2))


def test_codazzi_shape_sides():
    for name, tol in (("paraboloid", 1e-14), ("paper_example_n2", 1e-8),
                      ("centroaffine_sphere", 1e-12)):
        sc = load_scenario(name)
        sj = geo.structure_jets(sc, sc.sample_points[0], 1)
        for i in range(sc.dim):
            for j in range(sc.dim):
                a, b = nabla_S_codazzi(sj, i, j)
                assert np.max(np.abs(a - b)) < tol


def test_sphere_codazzi_sides_vanish():
    # S = identity is parallel and tau = 0, so both sides are zero
    sc = load_scenario("centroaffine_sphere")
    sj = geo.structure_jets(sc, sc.sample_points[1], 1)
    a, b = nabla_S_codazzi(sj, 0, 2)
    assert np.max(np.abs(a)) < 1e-12 and np.max(np.abs(b)) < 1e-12


def test_alternating_identity_on_scenarios():
    for name in ("paraboloid", "paper_example_n2", "paper_example_n3",
                 "centroaffine_sphere"):
        sc = load_scenario(name)
        point = sc.sample_points[0]
        st = geo.induced_structure(sc, point)
        prov = GeometricCurvature(geo.curvature(st).R)
        sj = geo.structure_jets(sc, point, 1)
        field = CovariantField.constant(sc.omega_at(point))
        rng = np.random.default_rng(8)
        for _ in range(20):
            pair = (int(rng.integers(0, sc.dim)), int(rng.integers(0, sc.dim)))
            ys = tuple(int(v) for v in rng.integers(0, sc.dim, size=2))
            lhs, rhs = alternating_sum_identity(field, sj, prov, 1, [pair], ys)
            assert abs(lhs - rhs) < 1e-7


def test_alternating_identity_example_value():
    sc = load_scenario("paper_example_n2")
    point = sc.sample_points[0]
    st = geo.induced_structure(sc, point)
    prov = GeometricCurvature(geo.curvature(st).R)
    sj = geo.structure_jets(sc, point, 1)
    field = CovariantField.constant(sc.omega_at(point))
    lhs, rhs = alternating_sum_identity(field, sj, prov, 1, [(0, 2)], (0, 2))
    assert abs(lhs - (-2.0)) < 1e-12
    assert abs(lhs - rhs) < 1e-7


def test_alternating_identity_depth_two():
    # rhs sums four sign assignments of nabla^4, exercising order-5 jets
    sc = load_scenario("centroaffine_sphere")
    point = sc.sample_points[0]
    st = geo.induced_structure(sc, point)
    prov = GeometricCurvature(geo.curvature(st).R)
    sj = geo.structure_jets(sc, point, 3)
    field = CovariantField.constant(sc.omega_at(point))
    rng = np.random.default_rng(14)
    for _ in range(6):
        pairs = [(int(a), int(b)) for a, b in rng.integers(0, 4, size=(2, 2))]
        ys = tuple(int(v) for v in rng.integers(0, 4, size=2))
        lhs, rhs = alternating_sum_identity(field, sj, prov, 2, pairs, ys)
        assert abs(lhs - rhs) < 1e-7
