import numpy as np
import pytest

from affsym.model import (ComplexBlock, ModelError, RealBlock, assemble,
                          build_block, complex_first, model_curvature,
                          random_omega, real_first, sip_matrix,
                          tridiagonal_omega)


def test_real_block_forms():
    s, h = build_block(RealBlock(2, 0.7, 1))
    assert np.array_equal(s, [[0.7, 0.0], [1.0, 0.7]])
    assert np.array_equal(h, [[0.0, 1.0], [1.0, 0.0]])
    s, h = build_block(RealBlock(1, 0.0, -1))
    assert np.array_equal(s, [[0.0]])
    assert np.array_equal(h, [[-1.0]])


def test_complex_block_form():
    s, h = build_block(ComplexBlock(1, 1.0, 2.0))
    assert np.array_equal(s, [[1.0, 2.0], [-2.0, 1.0]])
    assert np.array_equal(h, [[0.0, 1.0], [1.0, 0.0]])
    s, h = build_block(ComplexBlock(2, 0.5, -1.5))
    cell = np.array([[0.5, -1.5], [1.5, 0.5]])
    assert np.array_equal(s[:2, :2], cell)
    assert np.array_equal(s[2:, 2:], cell)
    assert np.array_equal(s[2:, :2], np.eye(2))
    assert np.array_equal(h, sip_matrix(4))


def test_blocks_are_selfadjoint_pairs():
    rng = np.random.default_rng(5)
    for _ in range(50):
        if rng.random() < 0.5:
            b = RealBlock(int(rng.integers(1, 6)), float(rng.uniform(-2, 2)),
                          int(rng.choice((-1, 1))))
        else:
            b = ComplexBlock(int(rng.integers(1, 4)), float(rng.uniform(-2, 2)),
                             float(rng.uniform(0.2, 2)))
        s, h = build_block(b)
        assert np.max(np.abs(s.T @ h - h @ s)) == 0.0


def test_assemble_examples():
    alpha = 0.9
    m = assemble([RealBlock(2, alpha, 1), RealBlock(1, 0, 1), RealBlock(1, 0, 1)])
    assert m.dim == 4
    expected_s = np.zeros((4, 4))
    expected_s[0, 0] = expected_s[1, 1] = alpha
    expected_s[1, 0] = 1.0
    assert np.array_equal(m.S, expected_s)
    assert np.array_equal(m.H, np.array(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float))

    lams, signs = (0.3, -0.7, 1.1, 0.0), (1, -1, -1, 1)
    m = assemble([RealBlock(1, l, s) for l, s in zip(lams, signs)])
    assert np.array_equal(m.S, np.diag(lams))
    assert np.array_equal(m.H, np.diag(signs).astype(float))

    m = assemble([ComplexBlock(2, 0.4, 1.2)])
    assert m.dim == 4
    assert np.array_equal(m.H, sip_matrix(4))


def test_assemble_rejects_odd_and_small():
    with pytest.raises(ModelError):
        assemble([RealBlock(3, 0, 1), RealBlock(2, 0, 1)])
    with pytest.raises(ModelError):
        assemble([RealBlock(1, 0, 1), RealBlock(1, 0, 1)])
    with pytest.raises(ModelError):
        ComplexBlock(1, 1.0, 0.0)


def test_reorder_helpers():
    blocks = [RealBlock(2, 0, 1), ComplexBlock(1, 0, 1), RealBlock(1, 1, 1)]
    cf = complex_first(blocks)
    assert isinstance(cf[0], ComplexBlock) and len(cf) == 3
    rf = real_first(cf)
    assert isinstance(rf[-1], ComplexBlock)


def test_model_curvature_examples():
    # vanishing shape operator
    m = assemble([RealBlock(1, 0, 1)] * 4)
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, y, z = rng.normal(size=(3, 4))
        assert np.max(np.abs(model_curvature(m, x, y, z))) == 0.0

    # 2-dimensional complex block: R(e1,e2)e1 = S e1
    alpha, beta = 0.8, 1.4
    m = assemble([ComplexBlock(1, alpha, beta), RealBlock(1, 0, 1), RealBlock(1, 0, 1)])
    got = model_curvature(m, m.basis(0), m.basis(1), m.basis(0))
    expected = alpha * m.basis(0) - beta * m.basis(1)
    assert np.max(np.abs(got - expected)) == 0.0

    # real block with k > 3: R(e1, e_{k-1}) e2 = eps S e1
    k, alpha, eps = 5, -0.6, -1
    m = assemble([RealBlock(k, alpha, eps), RealBlock(1, 0, 1)])
    got = model_curvature(m, m.basis(0), m.basis(k - 2), m.basis(1))
    expected = eps * (alpha * m.basis(0) + m.basis(1))
    assert np.max(np.abs(got - expected)) == 0.0


def test_model_curvature_bilinear_antisymmetric():
    m = assemble([RealBlock(2, 0.5, 1), ComplexBlock(1, 0.3, 0.9)])
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, y, z, w = rng.normal(size=(4, 4))
        a = model_curvature(m, x, y, z)
        assert np.max(np.abs(a + model_curvature(m, y, x, z))) < 1e-14
        lin = model_curvature(m, 2 * x + w, y, z)
        ref = 2 * model_curvature(m, x, y, z) + model_curvature(m, w, y, z)
        assert np.max(np.abs(lin - ref)) < 1e-13


def test_block_permutation_equivariance():
    """Permuting trailing 1x1 blocks conjugates the model by that permutation."""
    lead = [RealBlock(2, 0.4, 1)]
    tail = [RealBlock(1, 0.5, 1), RealBlock(1, -1.0, -1), RealBlock(1, 2.0, 1),
            RealBlock(1, 0.0, -1)]
    m1 = assemble(lead + tail)
    m2 = assemble(lead + [tail[2], tail[0], tail[3], tail[1]])
    perm = [0, 1, 2 + 2, 2 + 0, 2 + 3, 2 + 1]  # new index -> old index
    p = np.zeros((6, 6))
    for new, old in enumerate(perm):
        p[old, new] = 1.0
    assert np.array_equal(p.T @ m1.S @ p, m2.S)
    assert np.array_equal(p.T @ m1.H @ p, m2.H)
    rng = np.random.default_rng(11)
    for _ in range(10):
        x, y, z = rng.normal(size=(3, 6))
        a = model_curvature(m1, x, y, z)
        b = model_curvature(m2, p.T @ x, p.T @ y, p.T @ z)
        assert np.max(np.abs(p.T @ a - b)) < 1e-14


def test_tridiagonal_omega_nondegenerate():
    for dim in (4, 6, 8, 10, 12):
        w = tridiagonal_omega(dim)
        assert np.max(np.abs(w + w.T)) == 0.0
        assert abs(np.linalg.det(w) - 1.0) < 1e-10


def test_random_omega_respects_zero_pairs():
    rng = np.random.default_rng(1)
    w = random_omega(6, rng, zero_pairs=[(0, 3), (2, 5)])
    assert w[0, 3] == 0.0 and w[3, 0] == 0.0
    assert w[2, 5] == 0.0 and w[5, 2] == 0.0
    assert np.max(np.abs(w + w.T)) == 0.0
    assert abs(np.linalg.det(w)) > 1e-6
