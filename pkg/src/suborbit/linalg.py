"""Rank decisions and orthonormal subspace arithmetic.

Every subspace is stored as a matrix whose columns are orthonormal coordinate
vectors over the ambient space (real or complex field).  All rank decisions in
the package go through a single relative singular-value threshold so that
dimension verdicts are consistent across modules.  Decisions that fall within
a decade of the threshold are flagged as ambiguous instead of silently
trusted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

RANK_RTOL = 1e-9
AMBIGUITY_BAND = 10.0
ORTHO_TOL = 1e-10


class RankAmbiguityWarning(UserWarning):
    """A singular value fell within a decade of the rank cutoff."""


def numeric_rank(singular_values, rtol: float = RANK_RTOL,
                 floor: float = 0.0) -> tuple[int, bool]:
    """Count singular values above ``rtol * max(sigma_max, floor)``.

    ``floor`` anchors the threshold to the scale of the input data; without
    it a matrix that is mathematically zero (all singular values round-off)
    would be measured against its own noise and look full rank.  Returns
    ``(rank, ambiguous)``; ``ambiguous`` is set when some singular value lies
    within a factor ``AMBIGUITY_BAND`` of the cutoff, i.e. when the verdict
    would flip under a modest change of the threshold.
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        return 0, False
    smax = max(float(s[0]), float(floor))
    if smax == 0.0:
        return 0, False
    cut = rtol * smax
    rank = int(np.count_nonzero(s > cut))
    near = int(np.count_nonzero((s > cut / AMBIGUITY_BAND) & (s < cut * AMBIGUITY_BAND)))
    ambiguous = near > 0
    if ambiguous:
        warnings.warn(
            "singular value within a decade of the rank cutoff, dimension verdict is fragile",
            RankAmbiguityWarning,
            stacklevel=3,
        )
    return rank, ambiguous


def kernel_basis(A, rtol: float = RANK_RTOL,
                 floor: float = 0.0) -> tuple[np.ndarray, bool]:
    """Orthonormal basis of the right null space of ``A`` (columns), with ambiguity flag."""
    A = np.asarray(A)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=A.dtype), False
    if rows == 0 or not np.any(A):
        dt = complex if np.iscomplexobj(A) else float
        return np.eye(cols, dtype=dt), False
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    rank, ambiguous = numeric_rank(s, rtol, floor)
    return vh[rank:].conj().T, ambiguous


def orthonormal_columns(A, rtol: float = RANK_RTOL,
                        floor: float = 0.0) -> tuple[np.ndarray, bool]:
    """Orthonormal basis of the column space of ``A``, with ambiguity flag."""
    A = np.asarray(A)
    if A.shape[1] == 0 or not np.any(A):
        return A[:, :0].copy(), False
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    rank, ambiguous = numeric_rank(s, rtol, floor)
    return u[:, :rank], ambiguous


@dataclass
class Subspace:
    """A subspace of R^N or C^N given by an orthonormal column basis."""

    ambient_dim: int
    basis: np.ndarray
    ambiguous: bool = False

    def __post_init__(self):
        B = np.asarray(self.basis)
        if B.ndim != 2:
            B = B.reshape(self.ambient_dim, -1)
        if B.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis has {B.shape[0]} rows, ambient dimension is {self.ambient_dim}"
            )
        if B.shape[1] > 0:
            gram = B.conj().T @ B
            if not np.allclose(gram, np.eye(B.shape[1]), atol=ORTHO_TOL):
                raise ValueError("basis columns are not orthonormal")
        B = B.copy()
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.basis))

    def coeffs(self, v: np.ndarray) -> np.ndarray:
        return self.basis.conj().T @ v

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.conj().T @ v)

    def contains(self, v: np.ndarray, tol: float = 1e-9) -> bool:
        scale = max(1.0, float(np.linalg.norm(v)))
        return float(np.linalg.norm(v - self.project(v))) <= tol * scale

    def complexify(self) -> "Subspace":
        return Subspace(self.ambient_dim, self.basis.astype(complex), self.ambiguous)


def full_space(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, np.eye(ambient_dim))


def span(vectors: np.ndarray, ambient_dim: int | None = None,
         rtol: float = RANK_RTOL) -> Subspace:
    """Subspace spanned by the columns of ``vectors``."""
    V = np.asarray(vectors)
    if V.ndim == 1:
        V = V.reshape(-1, 1)
    if ambient_dim is None:
        ambient_dim = V.shape[0]
    Q, amb = orthonormal_columns(V, rtol)
    return Subspace(ambient_dim, Q, amb)


def intersect(S: Subspace, T: Subspace, rtol: float = RANK_RTOL) -> Subspace:
    """Intersection of two subspaces of the same ambient space."""
    if S.ambient_dim != T.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if S.dim == 0 or T.dim == 0:
        dt = complex if (S.is_complex or T.is_complex) else float
        return Subspace(S.ambient_dim, np.zeros((S.ambient_dim, 0), dtype=dt),
                        S.ambiguous or T.ambiguous)
    stacked = np.hstack([S.basis, -T.basis])
    K, amb = kernel_basis(stacked, rtol)
    vecs = S.basis @ K[: S.dim]
    Q, amb2 = orthonormal_columns(vecs, rtol)
    return Subspace(S.ambient_dim, Q, S.ambiguous or T.ambiguous or amb or amb2)


def complement(S: Subspace, within: Subspace | None = None,
               rtol: float = RANK_RTOL) -> Subspace:
    """Orthogonal complement of ``S``, inside ``within`` or inside the ambient space."""
    if within is None:
        if S.dim == 0:
            return full_space(S.ambient_dim)
        K, amb = kernel_basis(S.basis.conj().T, rtol)
        return Subspace(S.ambient_dim, K, S.ambiguous or amb)
    if S.ambient_dim != within.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    overlap = S.basis.conj().T @ within.basis
    K, amb = kernel_basis(overlap, rtol)
    return Subspace(S.ambient_dim, within.basis @ K,
                    S.ambiguous or within.ambiguous or amb)


def sum_spaces(S: Subspace, T: Subspace, rtol: float = RANK_RTOL) -> Subspace:
    if S.ambient_dim != T.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    Q, amb = orthonormal_columns(np.hstack([S.basis, T.basis]), rtol)
    return Subspace(S.ambient_dim, Q, S.ambiguous or T.ambiguous or amb)


def subspace_residual(S: Subspace, T: Subspace) -> float:
    """How far S sticks out of T: largest singular value of (1 - P_T) B_S."""
    if S.dim == 0:
        return 0.0
    R = S.basis - T.basis @ (T.basis.conj().T @ S.basis)
    return float(np.linalg.norm(R, 2))


def equal_spaces(S: Subspace, T: Subspace, tol: float = 1e-8) -> bool:
    return (S.dim == T.dim
            and subspace_residual(S, T) <= tol
            and subspace_residual(T, S) <= tol)
