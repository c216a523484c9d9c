"""Pointwise algebraic (S, h) pairs assembled from Jordan/sip blocks.

A Gauss model is a pair of a shape-operator matrix S and a nondegenerate
symmetric form h on R^(2n) whose curvature is *defined* by
R(X,Y)Z = h(Y,Z) SX - h(X,Z) SY.  It carries no immersion; it exists so
that block-level identities can be tested with no geometry at all.

Block conventions (matching the canonical-pair normal form):

* a real block of size k with eigenvalue lam is lower-bidiagonal,
  S e_j = lam e_j + e_{j+1}, paired with eps * sip(k);
* a complex block of half-size k with eigenvalue alpha + i beta packs
  2x2 cells [[alpha, beta], [-beta, alpha]] on the diagonal and identity
  cells below, paired with a plain sip(2k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class RealBlock:
    size: int
    eigenvalue: float
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.size < 1:
            raise ModelError("real block size must be >= 1")
        if self.sign not in (-1, 1):
            raise ModelError("real block sign must be +1 or -1")

    @property
    def dim(self):
        return self.size


@dataclass(frozen=True)
class ComplexBlock:
    half_size: int
    alpha: float
    beta: float

    def __post_init__(self):
        if self.half_size < 1:
            raise ModelError("complex block half-size must be >= 1")
        if self.beta == 0.0:
            raise ModelError("complex block requires beta != 0")

    @property
    def dim(self):
        return 2 * self.half_size


BlockSpec = RealBlock | ComplexBlock


def sip_matrix(n: int) -> np.ndarray:
    """Anti-diagonal ones (the standard involutory permutation)."""
    return np.fliplr(np.eye(n))


def build_block(spec: BlockSpec):
    """Return the (S_i, H_i) matrix pair for one block."""
    if isinstance(spec, RealBlock):
        k = spec.size
        s = spec.eigenvalue * np.eye(k)
        for j in range(k - 1):
            s[j + 1, j] = 1.0
        return s, spec.sign * sip_matrix(k)
    if isinstance(spec, ComplexBlock):
        k = spec.half_size
        cell = np.array([[spec.alpha, spec.beta], [-spec.beta, spec.alpha]])
        s = np.zeros((2 * k, 2 * k))
        for j in range(k):
            s[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = cell
            if j + 1 < k:
                s[2 * j + 2: 2 * j + 4, 2 * j: 2 * j + 2] = np.eye(2)
        return s, sip_matrix(2 * k)
    raise ModelError(f"not a block spec: {spec!r}")


@dataclass(frozen=True)
class GaussModel:
    dim: int
    S: np.ndarray
    H: np.ndarray
    blocks: tuple = field(default=())

    def h(self, x, y):
        return float(np.asarray(x) @ self.H @ np.asarray(y))

    def basis(self, i):
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e


def assemble(blocks, validate: bool = True) -> GaussModel:
    """Direct-sum the given blocks, in order, into a GaussModel."""
    blocks = tuple(blocks)
    dim = sum(b.dim for b in blocks)
    if dim % 2 != 0:
        raise ModelError(f"total dimension {dim} is odd")
    if dim < 4:
        raise ModelError(f"total dimension {dim} is below 4")
    s = np.zeros((dim, dim))
    h = np.zeros((dim, dim))
    at = 0
    for b in blocks:
        sb, hb = build_block(b)
        d = b.dim
        s[at: at + d, at: at + d] = sb
        h[at: at + d, at: at + d] = hb
        at += d
    if validate:
        err = np.max(np.abs(s.T @ h - h @ s))
        assert err < 1e-12, f"assembled pair not h-selfadjoint (residual {err})"
        assert abs(np.linalg.det(h)) > 1e-12, "assembled h degenerate"
    return GaussModel(dim, s, h, blocks)


def complex_first(blocks):
    """Reorder a block list with complex blocks ahead of real ones."""
    blocks = list(blocks)
    return tuple(b for b in blocks if isinstance(b, ComplexBlock)) + \
        tuple(b for b in blocks if isinstance(b, RealBlock))


def real_first(blocks):
    blocks = list(blocks)
    return tuple(b for b in blocks if isinstance(b, RealBlock)) + \
        tuple(b for b in blocks if isinstance(b, ComplexBlock))


def model_curvature(m: GaussModel, x, y, z) -> np.ndarray:
    """Curvature by the Gauss rule: h(Y,Z) SX - h(X,Z) SY."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    return m.h(y, z) * (m.S @ x) - m.h(x, z) * (m.S @ y)


def tridiagonal_omega(dim: int) -> np.ndarray:
    """Default test form: antisymmetric, superdiagonal ones, Pfaffian 1."""
    w = np.zeros((dim, dim))
    for i in range(dim - 1):
        w[i, i + 1] = 1.0
        w[i + 1, i] = -1.0
    return w


def random_omega(dim, rng, zero_pairs=(), min_det: float = 1e-6,
                 max_tries: int = 200) -> np.ndarray:
    """Random antisymmetric nondegenerate form with entries in [-1, 1].

    ``zero_pairs`` lists (i, j) index pairs forced to zero (hypothesis side
    conditions); retries until |det| exceeds ``min_det``.
    """
    forbidden = {(min(i, j), max(i, j)) for i, j in zero_pairs}
    for _ in range(max_tries):
        a = rng.uniform(-1.0, 1.0, size=(dim, dim))
        w = np.triu(a, 1)
        for i, j in forbidden:
            w[i, j] = 0.0
        w = w - w.T
        if abs(np.linalg.det(w)) > min_det:
            return w
    raise ModelError("could not draw a nondegenerate form under the given constraints")
