"""Fiberwise skew-form pencils, their kernels, and the Kronecker verdict.

At a generic point x the two compatible Poisson structures restrict to a
pencil of skew forms on the slice m(x):

    B(lambda): (y1, y2) -> -<x + lambda*a, [y1, y2]>
    B(sing):   (y1, y2) -> -<a, [y1, y2]>

The pencil is Kronecker at x exactly when the complexified kernels have the
generic dimension r for every parameter value, including the singular one.
Parameter values are tested on a deterministic structured set plus random
draws from a complex annulus; a bad parameter set is the zero locus of a
polynomial, so random draws miss it almost surely.

A standalone analyzer for arbitrary pairs of skew forms computes the minimal
real kernel dimension, the sum of kernels over minimizing parameters, its
isotropy, and the maximality verdict, side by side with the complex
constant-rank criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import LieElement, centralizer, coords_to_matrix
from .linalg import RANK_RTOL, Subspace, numeric_rank, orthonormal_columns
from .generic import GenericDims, is_in_R, m_of_x
from .orbit import OrbitSetup

SINGULAR = "singular"

_STRUCTURED_LAMBDAS = (0.0, 1.0, -1.0, 1j, -1j)


@dataclass(frozen=True)
class PencilForm:
    """The pencil of skew forms attached to one base point and one slice.

    ``form(lam)`` evaluates the family member at a (possibly complex)
    parameter; ``singular`` is the member pairing against the anchor alone.
    """

    setup: "OrbitSetup"
    base_point: LieElement
    domain: Subspace
    space: str = "m"

    def form(self, lam) -> np.ndarray:
        return form_matrix(self.setup, self.base_point, lam, self.space, self.domain)

    @property
    def singular(self) -> np.ndarray:
        return form_matrix(self.setup, self.base_point, SINGULAR, self.space,
                           self.domain)


def pencil_at(setup: OrbitSetup, x: LieElement, space: str = "m") -> PencilForm:
    return PencilForm(setup, x, m_of_x(setup, x, space), space)


def annulus_samples(rng, count: int, rmin: float = 0.5, rmax: float = 2.0) -> np.ndarray:
    """Area-uniform complex samples from the annulus rmin <= |z| <= rmax."""
    r = np.sqrt(rng.uniform(rmin * rmin, rmax * rmax, count))
    th = rng.uniform(0.0, 2.0 * np.pi, count)
    return r * np.exp(1j * th)


def form_matrix(setup: OrbitSetup, x: LieElement, lam, space: str = "m",
                domain: Subspace | None = None) -> np.ndarray:
    """Skew matrix of the pencil form at parameter ``lam`` on the slice basis.

    ``lam`` is a complex scalar, or the module constant SINGULAR for the form
    that pairs against the anchor alone.  Entries use the complex-bilinear
    trace pairing, so complex parameters give the complexified form.
    """
    if domain is None:
        domain = m_of_x(setup, x, space)
    d = domain.dim
    n = setup.n
    if lam == SINGULAR:
        w = setup.a.matrix
    else:
        lam = complex(lam)
        w = x.matrix + lam * setup.a.matrix
    mats = [coords_to_matrix(domain.basis[:, j], n) for j in range(d)]
    F = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(i + 1, d):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            # the bilinear pairing is the negated trace form, so the form
            # value -<w, [y_i, y_j]> is the plain trace of the product
            F[i, j] = np.trace(w @ comm)
    F = F - F.T
    if F.size == 0:
        return F.real
    if np.max(np.abs(F.imag)) < 1e-13 * max(1.0, float(np.max(np.abs(F)))):
        return F.real
    return F


def kernel_dim_of_form(F: np.ndarray, rtol: float = RANK_RTOL,
                       floor: float = 0.0) -> tuple[int, bool]:
    d = F.shape[0]
    if d == 0:
        return 0, False
    sv = np.linalg.svd(F, compute_uv=False)
    rank, amb = numeric_rank(sv, rtol, floor)
    return d - rank, amb


@dataclass(frozen=True)
class KroneckerVerdict:
    """Outcome of the pencil test at one point.

    generic: the point attains both generic centralizer dimensions;
    singular_ok: the singular form kernel has the generic dimension r;
    pencil_ok: the complexified centralizer dimension stays at q for every
    sampled parameter; kronecker = singular_ok and pencil_ok.
    """

    generic: bool
    singular_ok: bool
    pencil_ok: bool
    kronecker: bool
    r: int
    q: int
    singular_kernel_dim: int
    lambda_samples: tuple
    centralizer_dims: tuple
    kernel_dims: tuple
    ambiguous: bool
    forms_dependent: bool = False
    ambiguous_lambdas: tuple = ()

    def jumps(self) -> list:
        """Parameters where the observed kernel dimension leaves the generic value."""
        return [(lam, dim) for lam, dim in zip(self.lambda_samples, self.kernel_dims)
                if dim != self.r]

    def to_dict(self) -> dict:
        return {
            "generic": self.generic,
            "singular_ok": self.singular_ok,
            "pencil_ok": self.pencil_ok,
            "kronecker": self.kronecker,
            "r": self.r,
            "q": self.q,
            "singular_kernel_dim": self.singular_kernel_dim,
            "lambda_samples": [[z.real, z.imag] for z in self.lambda_samples],
            "centralizer_dims": list(self.centralizer_dims),
            "kernel_dims": list(self.kernel_dims),
            "jump_lambdas": [[z.real, z.imag] for z, _ in self.jumps()],
            "ambiguous": self.ambiguous,
            "forms_dependent": self.forms_dependent,
            "ambiguous_lambdas": [[z.real, z.imag] for z in self.ambiguous_lambdas],
        }


def kronecker_test(setup: OrbitSetup, x: LieElement, dims: GenericDims,
                   n_lambda: int = 20, seed: int = 0, space: str = "m") -> KroneckerVerdict:
    """Full pencil verdict at x for the chosen pair of algebras.

    Points outside the generic stratum are rejected with every flag false and
    no parameter sweep.  For generic points the singular-form kernel and the
    complexified centralizers at the structured plus random parameters are
    compared against the generic dimensions.
    """
    pair = setup.pair(space)
    if not is_in_R(setup, x, space, dims):
        return KroneckerVerdict(False, False, False, False, dims.r, dims.q,
                                -1, (), (), (), False)
    domain = m_of_x(setup, x, space)
    ambiguous = domain.ambiguous

    # the two generating forms can degenerate to a dependent pair (for
    # instance when the slice is commutative); reported, not classified
    F0 = form_matrix(setup, x, 0.0, space, domain)
    F1 = form_matrix(setup, x, 1.0, space, domain)
    stacked = np.stack([np.asarray(F0, dtype=complex).ravel(),
                        np.asarray(F1, dtype=complex).ravel()])
    pencil_rank, _ = numeric_rank(np.linalg.svd(stacked, compute_uv=False),
                                  setup.rank_tol,
                                  floor=float(np.linalg.norm(x.matrix)
                                              + np.linalg.norm(setup.a.matrix)))
    forms_dependent = pencil_rank < 2

    F_si = form_matrix(setup, x, SINGULAR, space, domain)
    si_dim, amb = kernel_dim_of_form(F_si.astype(complex), setup.rank_tol,
                                     floor=float(np.linalg.norm(setup.a.matrix)))
    ambiguous = ambiguous or amb
    singular_ok = si_dim == dims.r

    rng = np.random.default_rng([seed, 23])
    lams = list(_STRUCTURED_LAMBDAS) + list(annulus_samples(rng, n_lambda))
    cdims = []
    kdims = []
    fragile = []
    pencil_ok = True
    gC = pair.g.complexify()
    for lam in lams:
        w = x.matrix + complex(lam) * setup.a.matrix
        c = centralizer(w, gC, setup.rank_tol)
        cdims.append(c.dim)
        if c.dim != dims.q:
            pencil_ok = False
        F = form_matrix(setup, x, lam, space, domain)
        kd, amb = kernel_dim_of_form(F.astype(complex), setup.rank_tol,
                                     floor=float(np.linalg.norm(w)))
        kdims.append(kd)
        if amb or c.ambiguous:
            fragile.append(complex(lam))
            ambiguous = True
    return KroneckerVerdict(True, singular_ok, pencil_ok,
                            singular_ok and pencil_ok, dims.r, dims.q, si_dim,
                            tuple(complex(l) for l in lams), tuple(cdims),
                            tuple(kdims), ambiguous, forms_dependent,
                            tuple(fragile))


@dataclass(frozen=True)
class PencilReport:
    """Analyzer output for one pair of skew forms."""

    r_min: int
    kernel_sum_dim: int
    isotropic: bool
    maximal: bool
    complex_constant_rank: bool
    isotropy_residual: float
    minimizing_count: int


def pencil_isotropy_check(B1: np.ndarray, B2: np.ndarray, n_real: int = 50,
                          n_complex: int = 24, seed: int = 0,
                          rtol: float = RANK_RTOL) -> PencilReport:
    """Kernel-sum analysis of the pencil t1*B1 + t2*B2 of real skew forms.

    Scans the real projective parameter line, collects kernels at the
    parameters of minimal kernel dimension, and reports whether their sum is
    isotropic for every sampled form and whether it is maximal isotropic
    (dimension (d + r_min)/2).  The independent complex criterion, constancy
    of the complexified kernel dimension, is evaluated on random complex
    parameters and reported alongside.
    """
    B1 = np.asarray(B1, dtype=float)
    B2 = np.asarray(B2, dtype=float)
    if B1.shape != B2.shape or B1.ndim != 2 or B1.shape[0] != B1.shape[1]:
        raise ValueError("expected two square matrices of equal size")
    scale = max(np.max(np.abs(B1)), np.max(np.abs(B2)), 1e-300)
    for B in (B1, B2):
        if np.max(np.abs(B + B.T)) > 1e-10 * scale:
            raise ValueError("forms must be skew-symmetric")
    stacked = np.stack([B1.ravel(), B2.ravel()])
    sv = np.linalg.svd(stacked, compute_uv=False)
    rank2, _ = numeric_rank(sv, rtol)
    if rank2 < 2:
        raise ValueError("forms are linearly dependent; the pencil is a line, not a plane")

    d = B1.shape[0]
    rng = np.random.default_rng([seed, 41])
    thetas = np.concatenate([
        [0.0, np.pi / 2, np.pi / 4, 3 * np.pi / 4],
        np.pi * (np.arange(n_real) + 0.5) / n_real,
    ])
    params = [(np.cos(t), np.sin(t)) for t in thetas]

    floor = max(float(np.linalg.norm(B1)), float(np.linalg.norm(B2)))
    kernels = []
    dims = []
    for t1, t2 in params:
        F = t1 * B1 + t2 * B2
        K, _ = _form_kernel(F, rtol, floor)
        dims.append(K.shape[1])
        kernels.append(K)
    r_min = int(min(dims))

    vecs = [K for K, dd in zip(kernels, dims) if dd == r_min and K.shape[1] > 0]
    minimizing = sum(1 for dd in dims if dd == r_min)
    if vecs:
        L, _ = orthonormal_columns(np.hstack(vecs), rtol)
    else:
        L = np.zeros((d, 0))
    L_dim = L.shape[1]

    residual = 0.0
    for t1, t2 in params:
        F = t1 * B1 + t2 * B2
        if L_dim:
            residual = max(residual, float(np.max(np.abs(L.T @ F @ L))))
    isotropic = residual < 1e-9

    maximal = isotropic and (2 * L_dim == d + r_min)

    cc = True
    complex_params = [(1.0, 1j), (1j, 1.0), (1.0, 1.0 + 1j)]
    zs = annulus_samples(rng, n_complex)
    complex_params += [(1.0, z) for z in zs[: n_complex // 2]]
    complex_params += [(z, 1.0) for z in zs[n_complex // 2:]]
    for t1, t2 in complex_params:
        F = t1 * B1.astype(complex) + t2 * B2.astype(complex)
        kd, _ = kernel_dim_of_form(F, rtol, floor)
        if kd != r_min:
            cc = False
            break
    return PencilReport(r_min, L_dim, isotropic, maximal, cc, residual, minimizing)


def _form_kernel(F: np.ndarray, rtol: float, floor: float = 0.0) -> tuple[np.ndarray, bool]:
    d = F.shape[0]
    if d == 0:
        return np.zeros((0, 0)), False
    u, s, vh = np.linalg.svd(F)
    rank, amb = numeric_rank(s, rtol, floor)
    return vh[rank:].conj().T, amb
