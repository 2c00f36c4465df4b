"""Generic-dimension estimation, the genericity stratum membership test, the
bracket-compatible slice m(x), and the reduction to the centralizer of a
witness isotropy algebra.

Zariski-generic quantities are estimated by sampling: the bad sets are proper
algebraic subsets, so independent Gaussian samples attain the generic value
almost surely.  Estimates report whether the minimum was attained by at least
80 percent of the samples; downstream consumers refuse to run on estimates
that did not stabilize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import (LieElement, ad_in_basis, bracket_closure_residual,
                  centralizer, coords_to_matrix, derived_span, sigma_signs,
                  stacked_centralizer, subalgebra_center)
from .linalg import (Subspace, equal_spaces, intersect, kernel_basis,
                     subspace_residual)
from .orbit import AlgebraPair, OrbitSetup


@dataclass(frozen=True)
class GenericDims:
    """Generic centralizer dimensions over a sampled transversal space.

    q is the minimal ambient-centralizer dimension, p the minimal isotropy
    centralizer dimension, r = q - p their difference.
    """

    space: str
    q: int
    p: int
    r: int
    sample_count: int
    stabilized: bool


def sample_element(space: Subspace, rng, n: int) -> LieElement:
    coeffs = rng.standard_normal(space.dim)
    return LieElement.from_coords(space.basis @ coeffs, n)


def estimate_generic_dims(setup: OrbitSetup, space, samples: int = 25,
                          seed: int = 0) -> GenericDims:
    """Minimal centralizer dimensions over Gaussian samples of the space."""
    if samples < 10:
        raise ValueError("need at least 10 samples for a stable estimate")
    pair = setup.pair(space)
    qs = np.empty(samples, dtype=int)
    ps = np.empty(samples, dtype=int)
    for i in range(samples):
        rng = np.random.default_rng([seed, 7, i])
        x = sample_element(pair.m, rng, setup.n)
        qs[i] = centralizer(x, pair.g, setup.rank_tol).dim
        ps[i] = centralizer(x, pair.k, setup.rank_tol).dim
    q = int(qs.min())
    p = int(ps.min())
    hit = np.mean((qs == q) & (ps == p))
    return GenericDims(pair.name, q, p, q - p, samples, bool(hit >= 0.8))


def is_in_R(setup: OrbitSetup, x: LieElement, space, dims: GenericDims) -> bool:
    """Whether both centralizer dimensions of x attain the generic minima."""
    if not dims.stabilized:
        raise ValueError("generic dimensions did not stabilize; resample first")
    pair = setup.pair(space)
    if centralizer(x, pair.g, setup.rank_tol).dim != dims.q:
        return False
    return centralizer(x, pair.k, setup.rank_tol).dim == dims.p


def m_of_x(setup: OrbitSetup, x: LieElement, space) -> Subspace:
    """The slice {y in space : [x, y] stays in the space}.

    Computed as the kernel of the isotropy-component of ad x restricted to the
    space; complements the image of ad x on the isotropy algebra.
    """
    pair = setup.pair(space)
    A = ad_in_basis(x, pair.m)
    comp = pair.k.basis.conj().T @ A
    K, amb = kernel_basis(comp, setup.rank_tol, floor=float(np.linalg.norm(x.matrix)))
    return Subspace(pair.m.ambient_dim, pair.m.basis @ K,
                    ambiguous=amb or pair.m.ambiguous)


def perturb_into_R(setup: OrbitSetup, x0: LieElement, dims_m: GenericDims,
                   dims_mt: GenericDims, seed: int = 0, max_halvings: int = 12,
                   tries_per_radius: int = 4) -> tuple[LieElement, float]:
    """Move x0 inside the fixed part of m until it is generic for both pairs.

    Resamples on spheres of shrinking radius around x0 and returns the first
    point generic for the full pair and for the fixed pair, together with the
    radius used (0.0 when x0 itself is already generic).
    """
    if is_in_R(setup, x0, "m", dims_m) and is_in_R(setup, x0, "m_tilde", dims_mt):
        return x0, 0.0
    radius = 1.0
    for h in range(max_halvings):
        for t in range(tries_per_radius):
            rng = np.random.default_rng([seed, 19, h, t])
            d = rng.standard_normal(setup.m_tilde.dim)
            d = d / np.linalg.norm(d)
            x = x0 + LieElement.from_coords(radius * (setup.m_tilde.basis @ d), setup.n)
            if is_in_R(setup, x, "m", dims_m) and is_in_R(setup, x, "m_tilde", dims_mt):
                return x, radius
        radius *= 0.5
    raise RuntimeError("no generic point found near the witness; "
                       "the generic dimension estimates may be off")


@dataclass
class ReducedSetup:
    """Everything attached to the centralizer of the witness isotropy algebra."""

    setup: OrbitSetup
    anchor_x0: LieElement
    k_x0: Subspace
    g0: Subspace
    k0: Subspace
    m0: Subspace
    g0_tilde: Subspace
    k0_tilde: Subspace
    m0_tilde: Subspace
    k0_prime: Subspace
    z_g0: Subspace
    rank_g0: int
    dims_m0: GenericDims
    r_m: int
    checks: dict

    def pair(self, space) -> AlgebraPair:
        if space == "m0":
            return AlgebraPair("m0", self.g0, self.k0, self.m0)
        if space == "m0_tilde":
            return AlgebraPair("m0_tilde", self.g0_tilde, self.k0_tilde, self.m0_tilde)
        raise ValueError(f"unknown reduced space selector {space!r}")


def reduction_data(setup: OrbitSetup, x0: LieElement, dims_m: GenericDims,
                   dims_mt: GenericDims, samples: int = 12,
                   seed: int = 0) -> ReducedSetup:
    """Centralizer-of-isotropy reduction anchored at a doubly generic point.

    Requires x0 generic for both the full and the fixed pair; rejects other
    anchors, reporting which centralizer dimension failed.  The returned
    bundle carries consistency checks: the reduced ambient space is a
    conjugation-stable subalgebra containing the anchor element of the orbit,
    sampled generic points of the reduced transversal reproduce the witness
    isotropy algebra and the full slice, and the defect r is preserved.
    """
    pair_m = setup.pair("m")
    gx = centralizer(x0, pair_m.g, setup.rank_tol)
    kx = centralizer(x0, pair_m.k, setup.rank_tol)
    if gx.dim != dims_m.q or kx.dim != dims_m.p:
        raise ValueError(
            f"anchor is not generic for the full pair: dim g^x = {gx.dim} "
            f"(generic {dims_m.q}), dim k^x = {kx.dim} (generic {dims_m.p})")
    pair_t = setup.pair("m_tilde")
    gtx = centralizer(x0, pair_t.g, setup.rank_tol).dim
    ktx = centralizer(x0, pair_t.k, setup.rank_tol).dim
    if gtx != dims_mt.q or ktx != dims_mt.p:
        raise ValueError(
            f"anchor is not generic for the fixed pair: dim = {gtx} "
            f"(generic {dims_mt.q}), isotropy dim = {ktx} (generic {dims_mt.p})")

    n = setup.n
    gens = [coords_to_matrix(kx.basis[:, j], n) for j in range(kx.dim)]
    g0 = stacked_centralizer(gens, setup.g, setup.rank_tol)
    k0 = intersect(g0, setup.k, setup.rank_tol)
    m0 = intersect(g0, setup.m, setup.rank_tol)
    g0_tilde = intersect(g0, setup.g_tilde, setup.rank_tol)
    k0_tilde = intersect(k0, setup.g_tilde, setup.rank_tol)
    m0_tilde = intersect(m0, setup.g_tilde, setup.rank_tol)
    k0_prime = intersect(k0, setup.g_prime, setup.rank_tol)
    z_g0 = subalgebra_center(g0, setup.rank_tol)

    checks = {}
    checks["g0_is_subalgebra"] = bracket_closure_residual(g0) < 1e-10
    checks["a_in_g0"] = g0.contains(setup.a.coords, 1e-10)
    checks["sigma_invariant"] = all(_sigma_stable(S, n) for S in (g0, k0, m0))
    checks["g0_splits"] = g0.dim == k0.dim + m0.dim
    checks["g0_tilde_splits"] = g0_tilde.dim == k0_tilde.dim + m0_tilde.dim

    # rank of the reduced algebra: generic centralizer dimension inside g0
    rank_g0 = _generic_dim_within(g0, g0, setup, seed)

    pair0 = AlgebraPair("m0", g0, k0, m0)
    dims_m0 = estimate_generic_dims(setup, pair0, samples=max(10, samples), seed=seed)
    checks["r_preserved"] = dims_m0.r == dims_m.r
    checks["r_equals_rank_minus_center"] = dims_m.r == rank_g0 - z_g0.dim

    # sampled points of the reduced transversal that are generic for the full
    # pair must reproduce the isotropy algebra and the slice of the anchor
    match_k, match_slice, semis_ok = _anchor_consistency(
        setup, x0, kx, gx, pair0, dims_m, samples, seed, g0)
    checks["isotropy_constant_on_m0"] = match_k
    checks["slice_agrees_on_m0"] = match_slice
    checks["centralizer_splits_semisimple"] = semis_ok

    return ReducedSetup(setup, x0, kx, g0, k0, m0, g0_tilde, k0_tilde, m0_tilde,
                        k0_prime, z_g0, rank_g0, dims_m0, dims_m.r, checks)


def _sigma_stable(S: Subspace, n: int) -> bool:
    signs = sigma_signs(n)
    B = signs[:, None] * S.basis
    return subspace_residual(Subspace(S.ambient_dim, B), S) < 1e-10


def _generic_dim_within(space: Subspace, algebra: Subspace, setup: OrbitSetup,
                        seed: int, samples: int = 12) -> int:
    best = algebra.dim
    for i in range(samples):
        rng = np.random.default_rng([seed, 29, i])
        x = sample_element(space, rng, setup.n)
        best = min(best, centralizer(x, algebra, setup.rank_tol).dim)
    return best


def _anchor_consistency(setup, x0, kx, gx, pair0, dims_m, samples, seed, g0):
    match_k = True
    match_slice = True
    mx_full = m_of_x(setup, x0, "m")
    checked = 0
    for i in range(samples):
        rng = np.random.default_rng([seed, 37, i])
        x = sample_element(pair0.m, rng, setup.n)
        if not is_in_R(setup, x, "m", dims_m):
            continue
        checked += 1
        kxi = centralizer(x, setup.k, setup.rank_tol)
        if not equal_spaces(kxi, kx, 1e-7):
            match_k = False
        m0x = m_of_x(setup, x, pair0)
        mx = m_of_x(setup, x, "m")
        if not equal_spaces(m0x, mx, 1e-7):
            match_slice = False
        if checked >= 3:
            break
    # dim g^x0 must split as the reduced centralizer plus the semisimple part
    g0x0 = centralizer(x0, g0, setup.rank_tol)
    semis = derived_span(kx, setup.rank_tol)
    semis_ok = gx.dim == g0x0.dim + semis.dim
    return match_k and checked > 0, match_slice and checked > 0, semis_ok
