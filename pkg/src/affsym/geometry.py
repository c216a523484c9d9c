"""Induced affine structure of a parametrized hypersurface.

Given an immersion f: U in R^(2n) -> R^(2n+1) and a transversal field xi,
the flat ambient derivative splits along the moving frame
{d_1 f, ..., d_2n f, xi}:

    d_i d_j f = Gamma^k_ij d_k f + h_ij xi
    d_i xi    = -S^k_i d_k f + tau_i xi

Both splittings are obtained from one linear solve per right-hand side
against the frame matrix.  Carrying the solve over jet-valued scalars
(the constant-term LU is factored once, higher coefficients follow by a
graded convolution recursion) yields the coordinate partials of Gamma,
h, S, tau to roundoff, with no step-size tuning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import expr as ex
from .jets import Jet, eval_jet, jet_space

#: frames with condition number beyond this are rejected
FRAME_COND_LIMIT = 1e12


class GeometryError(ValueError):
    pass


class SingularFrameError(GeometryError):
    pass


class ConstraintError(GeometryError):
    def __init__(self, name, point):
        super().__init__(f"constraint '{name}' violated at sample point {tuple(point)}")
        self.name = name
        self.point = tuple(point)


@dataclass(frozen=True, eq=False)
class Scenario:
    """An immersion-with-transversal plus the data needed to check it."""

    name: str
    dim: int
    coords: tuple
    immersion: tuple        # 2n+1 expressions
    transversal: tuple      # 2n+1 expressions
    omega: np.ndarray       # (2n, 2n) object array of expressions / floats
    sample_points: tuple
    constraints: tuple = field(default=())   # (name, expression) pairs, require > 0
    checks: tuple = field(default=())

    def omega_at(self, point):
        env = dict(zip(self.coords, point))
        out = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                c = self.omega[i, j]
                out[i, j] = float(c) if isinstance(c, (int, float)) else ex.evaluate(c, env)
        return out

    def check_constraints(self, point):
        env = dict(zip(self.coords, point))
        for name, e in self.constraints:
            if ex.evaluate(e, env) <= 0.0:
                raise ConstraintError(name, point)

    def validate(self, tol: float = 1e-10):
        """Reject bad sample points up front: constraints, antisymmetry, frame."""
        for pt in self.sample_points:
            self.check_constraints(pt)
            w = self.omega_at(pt)
            if np.max(np.abs(w + w.T)) > tol:
                raise GeometryError(
                    f"omega not antisymmetric at sample point {tuple(pt)}")
            structure_jets(self, pt, order=0)  # raises SingularFrameError if bad
        return self


def _conv_groups(space):
    """Multiplication pairs grouped by target index, constant term excluded."""
    ii, jj, tt = space.mul_table
    keep = ii != 0
    groups = [[] for _ in range(space.size)]
    for a, b, t in zip(ii[keep], jj[keep], tt[keep]):
        groups[t].append((a, b))
    return groups


def _jet_matrix_solve(f0_lu, f_coeffs, rhs_coeffs, groups):
    """Solve F c = r for jet coefficient stacks, degree by degree.

    f_coeffs: (ncoeff, N, N); rhs_coeffs: (ncoeff, N).  The degree-0 system
    is the factored frame; each higher coefficient subtracts the convolution
    of lower ones.
    """
    ncoeff = rhs_coeffs.shape[0]
    sol = np.zeros_like(rhs_coeffs)
    for t in range(ncoeff):
        acc = rhs_coeffs[t].copy()
        for a, b in groups[t]:
            acc -= f_coeffs[a] @ sol[b]
        sol[t] = lu_solve(f0_lu, acc)
    return sol


class StructureJets:
    """Jet-valued Gamma, h, S, tau at one point of a scenario."""

    def __init__(self, scenario, point, order):
        n = scenario.dim
        coords = scenario.coords
        self.scenario = scenario
        self.point = tuple(float(v) for v in point)
        self.coords = coords
        self.dim = n
        self.order = order

        f_jets = [eval_jet(c, point, order + 2, coords) for c in scenario.immersion]
        xi_jets = [eval_jet(c, point, order + 1, coords) for c in scenario.transversal]
        amb = n + 1
        if len(f_jets) != amb or len(xi_jets) != amb:
            raise GeometryError("immersion/transversal must have 2n+1 components")

        space = jet_space(n, order)
        ncoeff = space.size
        frame = np.zeros((ncoeff, amb, amb))
        for j in range(n):
            for r in range(amb):
                frame[:, r, j] = f_jets[r].partial(j).truncate(order).c
        for r in range(amb):
            frame[:, r, n] = xi_jets[r].truncate(order).c

        f0 = frame[0]
        self.cond = float(np.linalg.cond(f0))
        if not np.isfinite(self.cond) or self.cond > FRAME_COND_LIMIT:
            raise SingularFrameError(
                f"frame condition {self.cond:.3e} at point {self.point}")
        f0_lu = lu_factor(f0)
        groups = _conv_groups(space)

        gamma = np.empty((n, n, n), dtype=object)
        h = np.empty((n, n), dtype=object)
        s_op = np.empty((n, n), dtype=object)
        tau = np.empty(n, dtype=object)

        for i in range(n):
            for j in range(i, n):
                rhs = np.zeros((ncoeff, amb))
                for r in range(amb):
                    rhs[:, r] = f_jets[r].partial(i).partial(j).truncate(order).c
                sol = _jet_matrix_solve(f0_lu, frame, rhs, groups)
                for k in range(n):
                    jet = Jet(space, sol[:, k].copy(), self.point)
                    gamma[k, i, j] = jet
                    gamma[k, j, i] = jet
                hij = Jet(space, sol[:, n].copy(), self.point)
                h[i, j] = hij
                h[j, i] = hij
        for i in range(n):
            rhs = np.zeros((ncoeff, amb))
            for r in range(amb):
                rhs[:, r] = xi_jets[r].partial(i).truncate(order).c
            sol = _jet_matrix_solve(f0_lu, frame, rhs, groups)
            for k in range(n):
                s_op[k, i] = Jet(space, -sol[:, k], self.point)
            tau[i] = Jet(space, sol[:, n].copy(), self.point)

        self.gamma_jets = gamma
        self.h_jets = h
        self.S_jets = s_op
        self.tau_jets = tau

    def _values(self, jets):
        out = np.zeros(jets.shape)
        for idx in np.ndindex(*jets.shape):
            out[idx] = jets[idx].value
        return out

    def _partials(self, jets):
        n = self.dim
        out = np.zeros((n,) + jets.shape)
        units = [tuple(1 if a == l else 0 for a in range(n)) for l in range(n)]
        for idx in np.ndindex(*jets.shape):
            for l in range(n):
                out[(l,) + idx] = jets[idx].coefficient(units[l])
        return out

    def gamma_values(self):
        return self._values(self.gamma_jets)

    def gamma_partials(self):
        return self._partials(self.gamma_jets)

    def h_values(self):
        return self._values(self.h_jets)

    def h_partials(self):
        return self._partials(self.h_jets)

    def S_values(self):
        return self._values(self.S_jets)

    def S_partials(self):
        return self._partials(self.S_jets)

    def tau_values(self):
        return self._values(self.tau_jets)

    def tau_partials(self):
        return self._partials(self.tau_jets)


def structure_jets(scenario, point, order: int) -> StructureJets:
    scenario.check_constraints(point)
    return StructureJets(scenario, point, order)


@dataclass(frozen=True)
class InducedStructure:
    """Pointwise induced data; gamma[k,i,j] = Gamma^k_ij, dgamma[l,...] its d_l."""

    point: tuple
    gamma: np.ndarray
    dgamma: np.ndarray
    h: np.ndarray
    S: np.ndarray
    tau: np.ndarray
    dtau: np.ndarray
    dh: np.ndarray
    dS: np.ndarray
    cond: float


def induced_structure(scenario, point) -> InducedStructure:
    sj = structure_jets(scenario, point, order=1)
    dtau_src = sj.tau_partials()  # dtau_src[l, i] = d_l tau_i
    dtau = dtau_src - dtau_src.T  # dtau[i, j] = d_i tau_j - d_j tau_i
    return InducedStructure(
        point=sj.point,
        gamma=sj.gamma_values(),
        dgamma=sj.gamma_partials(),
        h=sj.h_values(),
        S=sj.S_values(),
        tau=sj.tau_values(),
        dtau=dtau,
        dh=sj.h_partials(),
        dS=sj.S_partials(),
        cond=sj.cond,
    )


@dataclass(frozen=True)
class CurvatureTensor:
    """R[l, t, i, j] is the d_l component of R(d_i, d_j) d_t."""

    point: tuple
    R: np.ndarray


def curvature(st: InducedStructure) -> CurvatureTensor:
    g, dg = st.gamma, st.dgamma
    term1 = np.transpose(dg, (1, 3, 0, 2))   # d_i Gamma^l_{jt}
    term2 = np.transpose(dg, (1, 3, 2, 0))   # d_j Gamma^l_{it}
    term3 = np.einsum("lim,mjt->ltij", g, g)
    term4 = np.einsum("ljm,mit->ltij", g, g)
    return CurvatureTensor(st.point, term1 - term2 + term3 - term4)


def gauss_curvature_tensor(s_op, h) -> np.ndarray:
    """Algebraic curvature of a pointwise (S, h) pair, same index layout."""
    return np.einsum("jt,li->ltij", h, s_op) - np.einsum("it,lj->ltij", h, s_op)


@dataclass(frozen=True)
class FundamentalResiduals:
    gauss: float
    codazzi_h: float
    codazzi_s: float
    ricci: float

    def max(self):
        return max(self.gauss, self.codazzi_h, self.codazzi_s, self.ricci)


def fundamental_residuals(st: InducedStructure, curv: CurvatureTensor) -> FundamentalResiduals:
    """Max-abs residuals of the four structural identities.

    These hold exactly for any induced structure, so the residuals measure
    only numerical error of the frame solve and differentiation.
    """
    g, h, s_op, tau = st.gamma, st.h, st.S, st.tau

    gauss = float(np.max(np.abs(curv.R - gauss_curvature_tensor(s_op, h))))

    nabla_h = st.dh - np.einsum("mij,mk->ijk", g, h) - np.einsum("mik,jm->ijk", g, h)
    cod_h = nabla_h + np.einsum("i,jk->ijk", tau, h)
    codazzi_h = float(np.max(np.abs(cod_h - np.transpose(cod_h, (1, 0, 2)))))

    nabla_s = st.dS + np.einsum("kim,mj->ikj", g, s_op) - np.einsum("mij,km->ikj", g, s_op)
    cod_s = nabla_s - np.einsum("i,kj->ikj", tau, s_op)
    codazzi_s = float(np.max(np.abs(cod_s - np.transpose(cod_s, (2, 1, 0)))))

    # h(X, SY) - h(SX, Y) = (d_i tau_j - d_j tau_i); the shipped scenarios
    # all have tau = 0, see the ledger for the convention note.
    hs = h @ s_op
    ricci = float(np.max(np.abs(hs - hs.T - st.dtau)))

    return FundamentalResiduals(gauss, codazzi_h, codazzi_s, ricci)


def frame_residual(scenario, point) -> float:
    """Relative reconstruction error of the two splitting formulas."""
    n = scenario.dim
    coords = scenario.coords
    st = induced_structure(scenario, point)
    f_jets = [eval_jet(c, point, 2, coords) for c in scenario.immersion]
    xi_jets = [eval_jet(c, point, 1, coords) for c in scenario.transversal]
    frame = np.array([[f.partial(j).value for f in f_jets] for j in range(n)]).T
    xi = np.array([f.value for f in xi_jets])
    worst = 0.0
    for i in range(n):
        for j in range(n):
            ddf = np.array([f.partial(i).partial(j).value for f in f_jets])
            rebuilt = frame @ st.gamma[:, i, j] + st.h[i, j] * xi
            worst = max(worst, np.max(np.abs(ddf - rebuilt)) / max(1.0, np.max(np.abs(ddf))))
    for i in range(n):
        dxi = np.array([f.partial(i).value for f in xi_jets])
        rebuilt = -frame @ st.S[:, i] + st.tau[i] * xi
        worst = max(worst, np.max(np.abs(dxi - rebuilt)) / max(1.0, np.max(np.abs(dxi))))
    return worst


def is_locally_equiaffine(st: InducedStructure, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(st.dtau)) < tol)
