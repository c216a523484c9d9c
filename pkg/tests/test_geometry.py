import math

import numpy as np
import pytest

from affsym import geometry as geo
from affsym.scenarios import load_scenario, scenario_from_dict


def test_paraboloid_structure():
    sc = load_scenario("paraboloid")
    for point in sc.sample_points:
        st = geo.induced_structure(sc, point)
        assert np.max(np.abs(st.gamma)) == 0.0
        assert np.array_equal(st.h, 2.0 * np.eye(4))
        assert np.max(np.abs(st.S)) == 0.0
        assert np.max(np.abs(st.tau)) == 0.0
        assert np.max(np.abs(geo.curvature(st).R)) == 0.0


def test_worked_example_structure():
    sc = load_scenario("paper_example_n2")
    for point in sc.sample_points:
        x, y, z0, z1 = point
        st = geo.induced_structure(sc, point)
        expected_s = np.zeros((4, 4))
        expected_s[1, 0] = 1.0
        assert np.max(np.abs(st.S - expected_s)) < 1e-10
        assert np.max(np.abs(st.tau)) < 1e-10
        expected_h = np.zeros((4, 4))
        expected_h[0, 1] = expected_h[1, 0] = 1.0
        expected_h[2, 2] = x * y
        expected_h[3, 3] = y * math.sin(z0) / math.cos(z1)
        assert np.max(np.abs(st.h - expected_h) / np.maximum(1.0, np.abs(expected_h))) < 1e-9


def test_centroaffine_sphere_structure():
    sc = load_scenario("centroaffine_sphere")
    for point in sc.sample_points:
        t1, t2, t3, _ = point
        st = geo.induced_structure(sc, point)
        assert np.max(np.abs(st.S - np.eye(4))) < 1e-10
        assert np.max(np.abs(st.tau)) < 1e-10
        round_metric = np.diag([
            1.0, math.sin(t1) ** 2, (math.sin(t1) * math.sin(t2)) ** 2,
            (math.sin(t1) * math.sin(t2) * math.sin(t3)) ** 2])
        assert np.max(np.abs(st.h - round_metric)) < 1e-10
        # constant-curvature form of the Gauss rule with S = identity
        r = geo.curvature(st).R
        expected = (np.einsum("jt,li->ltij", st.h, np.eye(4))
                    - np.einsum("it,lj->ltij", st.h, np.eye(4)))
        assert np.max(np.abs(r - expected)) < 1e-8


def test_fundamental_residuals_all_scenarios():
    for name in ("paraboloid", "paper_example_n2", "paper_example_n3",
                 "centroaffine_sphere"):
        sc = load_scenario(name)
        for point in sc.sample_points:
            st = geo.induced_structure(sc, point)
            res = geo.fundamental_residuals(st, geo.curvature(st))
            assert res.max() < 1e-8, (name, point, res)


def test_gauss_model_equivalence():
    for name in ("paraboloid", "paper_example_n2", "paper_example_n3",
                 "centroaffine_sphere"):
        sc = load_scenario(name)
        for point in sc.sample_points:
            st = geo.induced_structure(sc, point)
            r = geo.curvature(st).R
            assert np.max(np.abs(r - geo.gauss_curvature_tensor(st.S, st.h))) < 1e-8


def test_curvature_antisymmetry_and_gamma_symmetry():
    sc = load_scenario("paper_example_n3")
    st = geo.induced_structure(sc, sc.sample_points[0])
    assert np.max(np.abs(st.gamma - np.transpose(st.gamma, (0, 2, 1)))) == 0.0
    assert np.max(np.abs(st.h - st.h.T)) == 0.0
    r = geo.curvature(st).R
    assert np.max(np.abs(r + np.transpose(r, (0, 1, 3, 2)))) < 1e-10


def test_frame_consistency():
    for name in ("paraboloid", "paper_example_n2", "centroaffine_sphere"):
        sc = load_scenario(name)
        for point in sc.sample_points:
            assert geo.frame_residual(sc, point) < 1e-9


def test_locally_equiaffine_implies_h_selfadjoint():
    for name in ("paper_example_n2", "paper_example_n3", "centroaffine_sphere"):
        sc = load_scenario(name)
        for point in sc.sample_points:
            st = geo.induced_structure(sc, point)
            assert geo.is_locally_equiaffine(st)
            hs = st.h @ st.S
            assert np.max(np.abs(hs - hs.T)) < 1e-9


def test_constraint_violation_is_named():
    sc = load_scenario("paper_example_n2")
    with pytest.raises(geo.ConstraintError) as err:
        geo.induced_structure(sc, (0.0, 1.0, 0.5, 0.5))
    assert err.value.name == "x_nonzero"


def test_singular_frame_rejected():
    coords = ("u1", "u2", "u3", "u4")
    # transversal lies in the tangent plane: frame is singular
    data = {
        "name": "bad", "dim": 4, "coords": list(coords),
        "immersion": ["u1", "u2", "u3", "u4", "u1^2"],
        "transversal": ["1", "0", "0", "0", "0"],
        "omega": [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]],
        "sample_points": [[0.0, 0.0, 0.0, 0.0]],
    }
    with pytest.raises(geo.SingularFrameError):
        scenario_from_dict(data)


def test_jet_domain_error_propagates():
    data = {
        "name": "dom", "dim": 4, "coords": ["a", "b", "c", "d"],
        "immersion": ["a", "b", "c", "d", "ln(a)"],
        "transversal": ["0", "0", "0", "0", "1"],
        "omega": [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1], [0, 0, -1, 0]],
        "sample_points": [[-1.0, 0.0, 0.0, 0.0]],
    }
    from affsym.jets import JetDomainError
    with pytest.raises(JetDomainError):
        scenario_from_dict(data)


def test_structure_jets_carry_gamma_partials():
    # dGamma from the order-1 solve matches central differences of Gamma
    sc = load_scenario("centroaffine_sphere")
    point = sc.sample_points[0]
    st = geo.induced_structure(sc, point)
    h = 1e-5
    for axis in (0, 2):
        up = list(point)
        dn = list(point)
        up[axis] += h
        dn[axis] -= h
        fd = (geo.induced_structure(sc, up).gamma
              - geo.induced_structure(sc, dn).gamma) / (2 * h)
        assert np.max(np.abs(st.dgamma[axis] - fd)) < 1e-7


def _general_family(n, epsilons):
    """The sine-curve immersion family at arbitrary n (dim 2n)."""
    dim = 2 * n
    coords = ["x", "y"] + [f"z{i}" for i in range(dim - 2)]
    terms = {0: ["x*sin(z0)"]}
    for i, eps in enumerate(epsilons, start=1):
        terms.setdefault(i - 1, []).append(
            ("+ " if eps > 0 else "- ") + f"cos(z{i})")
        terms.setdefault(i, []).append(("" if eps > 0 else "-") + f"sin(z{i})")
    immersion = ["-y*sin(x)", "y*cos(x)", "x*cos(z0)"]
    immersion += [" ".join(terms.get(i, ["0"])) for i in range(dim - 2)]
    omega = [[1.0 if j == i + 1 else (-1.0 if j == i - 1 else 0.0)
              for j in range(dim)] for i in range(dim)]
    return scenario_from_dict({
        "name": f"family_n{n}", "dim": dim, "coords": coords,
        "immersion": immersion,
        "transversal": ["-cos(x)", "-sin(x)"] + ["0"] * (dim - 1),
        "omega": omega,
        "sample_points": [[1.0, 2.0] + [0.3 + 0.1 * i for i in range(dim - 2)]],
    })


def test_family_generalizes_to_higher_dimension():
    sc = _general_family(4, (1, -1, 1, -1, 1))
    point = sc.sample_points[0]
    st = geo.induced_structure(sc, point)
    expected_s = np.zeros((8, 8))
    expected_s[1, 0] = 1.0
    assert np.max(np.abs(st.S - expected_s)) < 1e-10
    assert np.max(np.abs(st.tau)) < 1e-10
    res = geo.fundamental_residuals(st, geo.curvature(st))
    assert res.max() < 1e-8


def test_structure_solve_at_dimension_twelve():
    dim = 12
    coords = [f"u{i}" for i in range(1, dim + 1)]
    sq = " + ".join(f"u{i}^2" for i in range(1, dim + 1))
    omega = [[1.0 if j == i + 1 else (-1.0 if j == i - 1 else 0.0)
              for j in range(dim)] for i in range(dim)]
    sc = scenario_from_dict({
        "name": "paraboloid12", "dim": dim, "coords": coords,
        "immersion": coords + [sq],
        "transversal": ["0"] * dim + ["1"],
        "omega": omega,
        "sample_points": [[0.05 * i for i in range(1, dim + 1)]],
    })
    st = geo.induced_structure(sc, sc.sample_points[0])
    assert np.array_equal(st.h, 2.0 * np.eye(dim))
    assert geo.fundamental_residuals(st, geo.curvature(st)).max() < 1e-12
