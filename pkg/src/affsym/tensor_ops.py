"""Iterated curvature action and covariant derivatives of (0,p) tensors.

Two operator families over a curvature provider (algebraic Gauss model or
geometric induced structure):

* the iterated action, defined by the recursion
  (R.T)(X1,...,X_{q+2}) = -sum_{i>=3} T(X3,...,R(X1,X2)X_i,...,X_{q+2}),
  with R^k.T = R.(R^{k-1}.T) and R^0.T = T;
* covariant derivatives, (nabla T)(X1,...) = X1(T(X2,...)) minus the
  connection contractions, iterated as nabla^{k+1} T = nabla(nabla^k T),
  evaluated with jet-valued components so no finite differencing is needed.

Evaluation of single components uses the recursion verbatim (memoized on
basis-index tuples); full-tensor scans use an equivalent contraction form.
"""

from __future__ import annotations

import numpy as np

from .jets import Jet, jet_space
from .model import GaussModel

#: recursion caps; all catalog oracles need small powers only
K_CAP_ALGEBRAIC = 8
K_CAP_GEOMETRIC = 3
NABLA_CAP = 3

#: entry cap for materializing R^k.T as a dense array
TENSOR_ENTRY_CAP = 40_000_000


class ArityError(ValueError):
    pass


class RecursionCapError(ValueError):
    pass


class AlgebraicCurvature:
    """Curvature of a Gauss model: R(X,Y)Z = h(Y,Z) SX - h(X,Z) SY."""

    cap = K_CAP_ALGEBRAIC

    def __init__(self, m: GaussModel):
        self.model = m
        self.dim = m.dim
        self._images = {}

    def apply(self, x, y, z):
        from .model import model_curvature
        return model_curvature(self.model, x, y, z)

    def basis_image(self, i, j, t):
        """Nonzeros of R(e_i, e_j) e_t as ((index, coeff), ...)."""
        key = (i, j, t)
        out = self._images.get(key)
        if out is None:
            s, h = self.model.S, self.model.H
            vec = h[j, t] * s[:, i] - h[i, t] * s[:, j]
            out = tuple((int(m), float(vec[m])) for m in np.nonzero(vec)[0])
            self._images[key] = out
        return out

    def full_tensor(self):
        s, h = self.model.S, self.model.H
        return np.einsum("jt,li->ltij", h, s) - np.einsum("it,lj->ltij", h, s)


class GeometricCurvature:
    """Curvature provider backed by a pointwise R^l_{tij} array."""

    cap = K_CAP_GEOMETRIC

    def __init__(self, r):
        self.R = np.asarray(r, dtype=float)
        self.dim = self.R.shape[0]
        self._images = {}

    def apply(self, x, y, z):
        return np.einsum("ltij,t,i,j->l", self.R, z, x, y)

    def basis_image(self, i, j, t):
        key = (i, j, t)
        out = self._images.get(key)
        if out is None:
            vec = self.R[:, t, i, j]
            out = tuple((int(m), float(vec[m])) for m in np.nonzero(vec)[0])
            self._images[key] = out
        return out

    def full_tensor(self):
        return self.R


def _expand_arg(arg, dim):
    """An argument is a basis index or a vector; expand to (index, coeff)."""
    if isinstance(arg, (int, np.integer)):
        return ((int(arg), 1.0),)
    vec = np.asarray(arg, dtype=float)
    if vec.shape != (dim,):
        raise ArityError(f"argument vector has shape {vec.shape}, expected ({dim},)")
    return tuple((int(m), float(vec[m])) for m in np.nonzero(vec)[0])


def r_power_action(provider, tensor, k: int, args, memo: bool = True,
                   k_cap: int | None = None) -> float:
    """Evaluate (R^k . T)(args) by the defining recursion.

    ``tensor`` is a dense (0,p) component array; ``args`` are 2k+p basis
    indices or vectors (vectors expand multilinearly).  ``memo=False`` runs
    the identical recursion without caching (for cross-checks).
    """
    t = np.asarray(tensor, dtype=float)
    p = t.ndim
    if k < 0:
        raise ArityError("k must be >= 0")
    cap = provider.cap if k_cap is None else k_cap
    if k > cap:
        raise RecursionCapError(f"power {k} exceeds cap {cap} for this provider")
    if len(args) != 2 * k + p:
        raise ArityError(f"expected {2 * k + p} arguments, got {len(args)}")
    dim = provider.dim
    cache = {} if memo else None

    def eval_idx(k, idxs):
        if k == 0:
            return float(t[idxs])
        if cache is not None:
            got = cache.get((k, idxs))
            if got is not None:
                return got
        x, y = idxs[0], idxs[1]
        rest = idxs[2:]
        total = 0.0
        for slot in range(len(rest)):
            image = provider.basis_image(x, y, rest[slot])
            acc = 0.0
            for m, coeff in image:
                acc += coeff * eval_idx(k - 1, rest[:slot] + (m,) + rest[slot + 1:])
            total -= acc
        if cache is not None:
            cache[(k, idxs)] = total
        return total

    expansions = [_expand_arg(a, dim) for a in args]

    def eval_args(pos, idxs):
        if pos == len(expansions):
            return eval_idx(k, idxs)
        out = 0.0
        for m, coeff in expansions[pos]:
            out += coeff * eval_args(pos + 1, idxs + (m,))
        return out

    return eval_args(0, ())


def r_power_tensor(provider, tensor, k: int,
                   entry_cap: int = TENSOR_ENTRY_CAP) -> np.ndarray:
    """Materialize R^k . T as a dense array of arity 2k+p."""
    t = np.asarray(tensor, dtype=float)
    n = provider.dim
    if n ** (2 * k + t.ndim) > entry_cap:
        raise RecursionCapError(
            f"R^{k} tensor would hold {n ** (2 * k + t.ndim)} entries")
    r_full = provider.full_tensor()
    for _ in range(k):
        q = t.ndim
        out = np.zeros((n, n) + t.shape)
        for slot in range(q):
            contrib = np.tensordot(r_full, t, axes=([0], [slot]))
            out -= np.moveaxis(contrib, [1, 2, 0], [0, 1, slot + 2])
        t = out
    return t


# -- covariant derivatives ---------------------------------------------


class CovariantField:
    """A (0,p) tensor field given by expressions or constant components."""

    def __init__(self, arity, components, coords=None):
        self.arity = arity
        self.coords = coords
        comps = np.asarray(components, dtype=object)
        if comps.ndim != arity:
            raise ArityError(f"component array has {comps.ndim} axes, expected {arity}")
        self.components = comps

    @staticmethod
    def constant(array):
        arr = np.asarray(array, dtype=float)
        return CovariantField(arr.ndim, arr.astype(object))

    def values_at(self, point, coords):
        from .expr import evaluate
        out = np.zeros(self.components.shape)
        env = dict(zip(coords, point))
        for idx in np.ndindex(*self.components.shape):
            c = self.components[idx]
            out[idx] = float(c) if isinstance(c, (int, float)) else evaluate(c, env)
        return out

    def component_jet(self, idxs, point, order, coords):
        from .jets import eval_jet
        c = self.components[idxs]
        if isinstance(c, (int, float)):
            return Jet.constant(jet_space(len(point), order), float(c), tuple(point))
        return eval_jet(c, point, order, coords)


class NablaEvaluator:
    """Recursive jet-valued evaluation of nabla^k T components at a point.

    ``structure`` must provide coords, point, dim and gamma_jets (an object
    array [k, i, j] of jets); produced by geometry.structure_jets.
    """

    def __init__(self, field: CovariantField, structure):
        self.field = field
        self.s = structure
        self.dim = structure.dim
        self._memo = {}
        self._gamma_cache = {}

    def _gamma(self, m, i, j, order):
        key = (m, i, j, order)
        g = self._gamma_cache.get(key)
        if g is None:
            g = self.s.gamma_jets[m, i, j].truncate(order)
            self._gamma_cache[key] = g
        return g

    def _jet(self, k, idxs, order):
        key = (k, idxs, order)
        got = self._memo.get(key)
        if got is not None:
            return got
        if k == 0:
            out = self.field.component_jet(idxs, self.s.point, order, self.s.coords)
        else:
            i0, rest = idxs[0], idxs[1:]
            out = self._jet(k - 1, rest, order + 1).partial(i0)
            for slot, it in enumerate(rest):
                for m in range(self.dim):
                    g = self._gamma(m, i0, it, order)
                    if not g.c.any():
                        continue
                    out = out - g * self._jet(
                        k - 1, rest[:slot] + (m,) + rest[slot + 1:], order)
        self._memo[key] = out
        return out

    def component(self, k, idxs) -> float:
        if k > self.s.order + 1:
            raise RecursionCapError(
                f"nabla^{k} needs structure jets of order {k - 1}, have {self.s.order}")
        return self._jet(k, tuple(idxs), 0).value


def nabla_power(field: CovariantField, structure, k: int, idxs) -> float:
    """Single component of nabla^k T at the structure's base point."""
    if k < 0:
        raise ArityError("k must be >= 0")
    if len(idxs) != k + field.arity:
        raise ArityError(f"expected {k + field.arity} indices, got {len(idxs)}")
    return NablaEvaluator(field, structure).component(k, idxs)


def nabla_tensor(field: CovariantField, structure, k: int) -> np.ndarray:
    """Dense nabla^k T at the base point (arity k + p)."""
    ev = NablaEvaluator(field, structure)
    n = structure.dim
    out = np.zeros((n,) * (k + field.arity))
    for idxs in np.ndindex(*out.shape):
        out[idxs] = ev.component(k, idxs)
    return out


def nabla_S_codazzi(structure, i: int, j: int):
    """Both sides of the shape-operator Codazzi identity at a point.

    Returns ((nabla_i S)(e_j) - tau_i S e_j, (nabla_j S)(e_i) - tau_j S e_i)
    as component vectors; equality is the caller's check.
    """
    n = structure.dim
    s_val = structure.S_values()
    ds = structure.S_partials()
    gamma = structure.gamma_values()
    tau = structure.tau_values()

    def side(a, b):
        vec = np.zeros(n)
        for kk in range(n):
            term = ds[a, kk, b]
            term += sum(gamma[kk, a, m] * s_val[m, b] for m in range(n))
            term -= sum(gamma[m, a, b] * s_val[kk, m] for m in range(n))
            vec[kk] = term - tau[a] * s_val[kk, b]
        return vec

    return side(i, j), side(j, i)


def alternating_sum_identity(field: CovariantField, structure, provider,
                             k: int, x_pairs, y_idxs):
    """Both sides of the curvature-vs-derivative alternating identity.

    lhs = (R^k . T)(X^1_1, X^1_{-1}, ..., Y...);
    rhs = sum over sign assignments a of sgn(a) *
          (nabla^{2k} T)(X^1_{a(1)}, X^1_{-a(1)}, ..., Y...).
    """
    if len(x_pairs) != k:
        raise ArityError(f"need {k} argument pairs, got {len(x_pairs)}")
    if 2 * k > NABLA_CAP + 1:
        raise RecursionCapError(f"rhs needs nabla^{2 * k}, beyond the order cap")
    flat = []
    for a, b in x_pairs:
        flat.extend((a, b))
    flat.extend(y_idxs)
    t_val = field.values_at(structure.point, structure.coords)
    lhs = r_power_action(provider, t_val, k, flat)

    ev = NablaEvaluator(field, structure)
    rhs = 0.0
    for bits in range(2 ** k):
        sgn = 1.0
        idxs = []
        for t in range(k):
            a, b = x_pairs[t]
            if (bits >> t) & 1:
                sgn = -sgn
                idxs.extend((b, a))
            else:
                idxs.extend((a, b))
        idxs.extend(y_idxs)
        rhs += sgn * ev.component(2 * k, tuple(idxs))
    return lhs, rhs
