import numpy as np
import pytest

from affsym import geometry as geo
from affsym.canonical import (CanonicalError, NotSelfadjointError, classify,
                              decompose, rank, signature, sip, sip_signature)
from affsym.model import ComplexBlock, RealBlock, assemble
from affsym.scenarios import load_scenario


def test_sip_matrix_and_signature():
    assert np.array_equal(sip(1), [[1.0]])
    assert np.array_equal(sip(3), [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    assert sip_signature(4) == (2, 2)
    assert sip_signature(5) == (3, 2)
    assert sip_signature(1) == (1, 0)
    for n in range(1, 13):
        s = sip(n)
        assert np.array_equal(s @ s, np.eye(n))
        assert np.array_equal(s, s.T)
        assert sip_signature(n) == signature(s)


def test_zero_matrix_splits_into_sign_blocks():
    pair = decompose(np.zeros((4, 4)), np.diag([1.0, -1.0, 1.0, -1.0]))
    assert len(pair.blocks) == 4
    assert all(b.size == 1 and b.eigenvalue == 0.0 for b in pair.blocks)
    assert sorted(b.sign for b in pair.blocks) == [-1, -1, 1, 1]
    assert pair.residual_jordan < 1e-12 and pair.residual_h < 1e-12


def test_canonical_input_is_recognised():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    h = np.array([[0.0, 1.0], [1.0, 0.0]])
    # A^T H = H A = E_11 by hand, so the pair is admissible as given
    assert np.array_equal(a.T @ h, h @ a)
    pair = decompose(a, h)
    assert pair.blocks == (RealBlock(2, 0.0, 1),)
    assert pair.residual_jordan < 1e-12 and pair.residual_h < 1e-12


def test_not_selfadjoint_rejected():
    with pytest.raises(NotSelfadjointError):
        decompose(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2) + 0.0)
    with pytest.raises(CanonicalError):
        decompose(np.zeros((2, 2)), np.zeros((2, 2)))  # singular H


def _conjugate(rng, m, spread=2.0):
    n = m.dim
    u, _, vt = np.linalg.svd(rng.normal(size=(n, n)))
    q = u @ np.diag(rng.uniform(1.0 / spread, spread, size=n)) @ vt
    qi = np.linalg.inv(q)
    return q @ m.S @ qi, qi.T @ m.H @ qi, q


_EIG_GRID = [-2.1, -1.4, -0.8, 0.0, 0.6, 1.3, 2.0]


def _random_blocks(rng):
    dim = int(rng.choice([4, 6, 8, 10]))
    lams = list(rng.permutation(_EIG_GRID))
    cplx = [(a, b) for a in (-1.0, 0.0, 0.9) for b in (0.7, 1.6)]
    rng.shuffle(cplx)
    blocks = []
    left = dim
    while left > 0:
        if left >= 4 and cplx and rng.random() < 0.3:
            half = int(rng.integers(1, min(3, left // 2) + 1))
            a, b = cplx.pop()
            blocks.append(ComplexBlock(half, a, b))
            left -= 2 * half
            continue
        size = int(rng.integers(1, min(4, left) + 1))
        lam = lams.pop() if lams and rng.random() < 0.85 else 0.0
        blocks.append(RealBlock(size, lam, int(rng.choice((-1, 1)))))
        left -= size
    return blocks


def _block_key(b):
    if isinstance(b, RealBlock):
        return ("real", b.size, round(b.eigenvalue, 5), b.sign)
    return ("complex", b.half_size, round(b.alpha, 5), round(abs(b.beta), 5))


def test_roundtrip_recovers_blocks():
    rng = np.random.default_rng(2024)
    for trial in range(60):
        blocks = _random_blocks(rng)
        m = assemble(blocks)
        a, h, _ = _conjugate(rng, m)
        pair = decompose(a, h)
        assert max(pair.residual_jordan, pair.residual_h) < 1e-6, (trial, blocks)
        assert sorted(map(_block_key, pair.blocks)) == \
            sorted(map(_block_key, blocks)), (trial, blocks, pair.blocks)


def test_eigenvalue_multiset_matches_eig():
    # A defective eigenvalue of a size-k block scatters by ~eps^(1/k) in any
    # double-precision eigensolver, so block eigenvalues are compared against
    # the mean of their matched cluster (second-order accurate), not pointwise.
    rng = np.random.default_rng(55)
    for _ in range(20):
        blocks = _random_blocks(rng)
        m = assemble(blocks)
        a, h, _ = _conjugate(rng, m)
        pair = decompose(a, h)
        groups = []
        for b in pair.blocks:
            if isinstance(b, RealBlock):
                groups.append((complex(b.eigenvalue), b.size))
            else:
                groups.append((complex(b.alpha, b.beta), b.half_size))
                groups.append((complex(b.alpha, -b.beta), b.half_size))
        direct = list(np.linalg.eigvals(a))
        assert sum(c for _, c in groups) == len(direct)
        for lam, count in sorted(groups, key=lambda g: -g[1]):
            nearest = sorted(range(len(direct)), key=lambda t: abs(lam - direct[t]))
            chosen = nearest[:count]
            assert abs(lam - np.mean([direct[t] for t in chosen])) < 1e-6
            for t in sorted(chosen, reverse=True):
                direct.pop(t)


def test_sylvester_sign_total():
    rng = np.random.default_rng(77)
    for _ in range(30):
        blocks = _random_blocks(rng)
        m = assemble(blocks)
        a, h, _ = _conjugate(rng, m)
        pair = decompose(a, h)
        pos = neg = 0
        for b in pair.blocks:
            if isinstance(b, RealBlock):
                p, n = sip_signature(b.size)
                if b.sign > 0:
                    pos, neg = pos + p, neg + n
                else:
                    pos, neg = pos + n, neg + p
            else:
                p, n = sip_signature(2 * b.half_size)
                pos, neg = pos + p, neg + n
        assert (pos, neg) == signature(h)


def test_block_multiset_invariant_under_conjugation():
    rng = np.random.default_rng(31)
    blocks = [RealBlock(2, 0.5, -1), ComplexBlock(1, 1.0, 2.0)]
    m = assemble(blocks)
    reference = sorted(map(_block_key, decompose(m.S, m.H).blocks))
    for _ in range(10):
        a, h, _ = _conjugate(rng, m)
        assert sorted(map(_block_key, decompose(a, h).blocks)) == reference


def test_classify_shapes():
    zero = decompose(np.zeros((4, 4)), np.diag([1.0, 1.0, -1.0, -1.0]))
    summary = classify(zero)
    assert summary.final_form == "zero" and summary.admissible_shape

    m = assemble([RealBlock(2, 0.0, 1), RealBlock(1, 0.0, 1), RealBlock(1, 0.0, -1)])
    summary = classify(decompose(m.S, m.H))
    assert summary.final_form == "rank_one_nilpotent"
    assert summary.admissible_shape and summary.max_real_size == 2

    m = assemble([ComplexBlock(1, 0.4, 1.0), RealBlock(1, 0.0, 1), RealBlock(1, 0.0, 1)])
    summary = classify(decompose(m.S, m.H))
    assert summary.has_complex and not summary.admissible_shape
    assert summary.final_form is None

    # one 2-block with nonzero eigenvalue: right shape, not final form
    m = assemble([RealBlock(2, 0.8, 1), RealBlock(1, 0.0, 1), RealBlock(1, 0.0, 1)])
    summary = classify(decompose(m.S, m.H))
    assert summary.admissible_shape and summary.final_form is None


def test_rank():
    assert rank(np.zeros((4, 4))) == 0
    assert rank(np.eye(6)) == 6
    sc = load_scenario("paper_example_n2")
    st = geo.induced_structure(sc, sc.sample_points[0])
    assert rank(st.S) == 1


def test_decompose_worked_example_pair():
    sc = load_scenario("paper_example_n2")
    for point in sc.sample_points:
        st = geo.induced_structure(sc, point)
        pair = decompose(st.S, st.h)
        sizes = sorted(b.size for b in pair.blocks)
        assert sizes == [1, 1, 2]
        assert all(abs(b.eigenvalue) < 1e-10 for b in pair.blocks)
        summary = classify(pair)
        assert summary.final_form == "rank_one_nilpotent"
        assert rank(st.S) == 1


def test_repeated_eigenvalue_blocks():
    # same eigenvalue in blocks of different size forces one root space
    blocks = [RealBlock(2, 0.7, 1), RealBlock(1, 0.7, -1), RealBlock(1, -0.3, 1)]
    m = assemble(blocks)
    rng = np.random.default_rng(9)
    a, h, _ = _conjugate(rng, m)
    pair = decompose(a, h)
    assert sorted(map(_block_key, pair.blocks)) == sorted(map(_block_key, blocks))
    summary = classify(pair)
    assert summary.sign_classes  # reported per (eigenvalue, size) class
