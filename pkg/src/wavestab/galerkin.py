"""Truncated Fourier-Galerkin form of the linearized operator M + omega - psi.

The operator acts on the orthonormal trigonometric basis
[1/sqrt(L0), sqrt(2/L0) cos_n, sqrt(2/L0) sin_n] and block-diagonalizes:
multiplication by the even profile psi maps cosines to cosines and sines to
sines, so the matrix splits into an even (cosine) block of size N+1 and an
odd (sine) block of size N.  Counting for the spectral assumption uses the
union of both blocks; the kernel direction psi' is odd, so the even block
is the invertible restriction used for the parameter-derivative solves.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .profile import FourierProfile

__all__ = [
    "GalerkinOperator",
    "SpectrumReport",
    "DegenerateOperatorError",
    "assemble",
    "spectrum",
    "solve_variations",
    "constrained_min",
    "apply_linearized",
]


class DegenerateOperatorError(RuntimeError):
    """Even-restricted operator is numerically singular."""


class GalerkinOperator:
    """Matrix form of M + omega - psi on 2N+1 trigonometric modes."""

    def __init__(self, psi, omega, sym, N):
        self.psi = psi
        self.omega = float(omega)
        self.sym = sym
        self.N = int(N)
        self.L0 = psi.L0
        xi = 2.0 * math.pi * np.arange(self.N + 1) / self.L0
        self.theta = np.asarray(sym(xi), dtype=float)
        # omega - mean(psi) combined first: a gauge shift (psi+a, omega+a)
        # cancels here before it can touch the theta-scaled diagonal, so the
        # assembled matrix is invariant to rounding level
        h = psi.psi_hat(2 * self.N)  # one-sided hat(psi)(0..2N)
        shift = self.omega - h[0]
        h0 = h.copy()
        h0[0] = 0.0
        diag = self.theta + shift

        n = np.arange(self.N + 1)
        # even (cosine) block, orthonormal basis {1/sqrt(L0), sqrt(2/L0) cos_n}
        S = h0[n[:, None] + n[None, :]] + h0[np.abs(n[:, None] - n[None, :])]
        S[0, 0] = 0.0
        S[0, 1:] = math.sqrt(2.0) * h0[1 : self.N + 1]
        S[1:, 0] = S[0, 1:]
        self.even = np.diag(diag) - S
        # odd (sine) block over sin_1..sin_N
        m = n[1:]
        T = h0[np.abs(m[:, None] - m[None, :])] - h0[m[:, None] + m[None, :]]
        self.odd = np.diag(diag[1:]) - T

    # --- coordinate helpers (orthonormal basis <-> function coefficients) ---

    def even_coords(self, profile):
        """Orthonormal cosine coordinates of an even profile (length N+1)."""
        c = profile.truncated(self.N).coeffs
        v = np.empty(self.N + 1)
        v[0] = c[0] * math.sqrt(self.L0)
        v[1:] = c[1:] * math.sqrt(self.L0 / 2.0)
        return v

    def profile_from_even(self, v):
        c = np.empty(self.N + 1)
        c[0] = v[0] / math.sqrt(self.L0)
        c[1:] = v[1:] * math.sqrt(2.0 / self.L0)
        return FourierProfile(self.L0, c)

    def odd_coords_from_sine(self, s):
        """Orthonormal sine coordinates from function sine coefficients s_1..."""
        w = np.zeros(self.N)
        upto = min(len(s), self.N)
        w[:upto] = np.asarray(s[:upto]) * math.sqrt(self.L0 / 2.0)
        return w

    def psi_prime_coords(self):
        return self.odd_coords_from_sine(self.psi.derivative_sine_coeffs())

    def psi_psi_prime_coords(self):
        """Odd coordinates of psi * psi' = (psi^2 / 2)'."""
        M = 4 * (self.psi.N + 1)
        vals = self.psi.values(M)
        sq, _ = FourierProfile.from_samples(self.L0, 0.5 * vals * vals, 2 * self.psi.N)
        return self.odd_coords_from_sine(sq.derivative_sine_coeffs())

    def embed_even(self, v):
        out = np.zeros(2 * self.N + 1)
        out[: self.N + 1] = v
        return out

    def embed_odd(self, w):
        out = np.zeros(2 * self.N + 1)
        out[self.N + 1 :] = w
        return out

    def full_matrix(self):
        H = np.zeros((2 * self.N + 1, 2 * self.N + 1))
        H[: self.N + 1, : self.N + 1] = self.even
        H[self.N + 1 :, self.N + 1 :] = self.odd
        return H

    def quadratic_form(self, coords):
        """<L f, f> for full-space coordinates."""
        v = coords[: self.N + 1]
        w = coords[self.N + 1 :]
        return float(v @ (self.even @ v) + w @ (self.odd @ w))


def assemble(psi, omega, sym, N=None):
    """Galerkin matrix of M + omega - psi on modes |n| <= N (default psi.N)."""
    if N is None:
        N = psi.N
    if psi.N > N:
        psi = psi.truncated(N)
    if psi.tail_ratio() > 1e-10:
        warnings.warn(
            f"profile tail {psi.tail_ratio():.2e} above 1e-10: operator "
            "may be under-resolved",
            stacklevel=2,
        )
    return GalerkinOperator(psi, omega, sym, N)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues with parity tags and the spectral-assumption diagnostics."""

    eigenvalues: np.ndarray      # ascending, both parity blocks merged
    parities: np.ndarray         # 0 = even block, 1 = odd block
    n_neg: int
    n_zero: int
    kernel_corr: float           # |<v0, psi'>| / (|v0||psi'|) for nearest-zero mode
    gap: float                   # distance from 0 to nearest eigenvalue outside band
    tol_zero: float

    @property
    def holds_assumption(self):
        """One simple negative eigenvalue, one simple kernel spanned by psi'."""
        return self.n_neg == 1 and self.n_zero == 1 and self.kernel_corr > 0.999


def default_tol_zero(op):
    """Zero-band width: 1e-6 times the low-frequency operator scale.

    Scaling by the largest eigenvalue would be useless here: for a
    fourth-order symbol at N = 256 it exceeds the distance between the
    kernel and its neighbors by orders of magnitude.
    """
    return 1e-6 * max(1.0, abs(op.omega), op.psi.sup_norm())


def spectrum(op, tol_zero=None):
    """Full symmetric eigendecomposition with negative/zero counts."""
    if tol_zero is None:
        tol_zero = default_tol_zero(op)
    vals_e, vecs_e = np.linalg.eigh(op.even)
    vals_o, vecs_o = np.linalg.eigh(op.odd)
    vals = np.concatenate([vals_e, vals_o])
    pars = np.concatenate([np.zeros(len(vals_e), int), np.ones(len(vals_o), int)])
    order = np.argsort(vals)
    vals, pars = vals[order], pars[order]

    n_neg = int(np.sum(vals < -tol_zero))
    in_band = np.abs(vals) <= tol_zero
    n_zero = int(np.sum(in_band))

    # nearest-to-zero mode, compared against psi'
    i_o = int(np.argmin(np.abs(vals_o)))
    i_e = int(np.argmin(np.abs(vals_e)))
    pp = op.psi_prime_coords()
    norm_pp = np.linalg.norm(pp)
    if abs(vals_o[i_o]) <= abs(vals_e[i_e]) and norm_pp > 0:
        v0 = vecs_o[:, i_o]
        kernel_corr = float(abs(v0 @ pp) / (np.linalg.norm(v0) * norm_pp))
    else:
        kernel_corr = 0.0

    outside = np.abs(vals[~in_band]) if (~in_band).any() else np.array([np.inf])
    gap = float(outside.min())
    return SpectrumReport(
        eigenvalues=vals, parities=pars, n_neg=n_neg, n_zero=n_zero,
        kernel_corr=kernel_corr, gap=gap, tol_zero=float(tol_zero),
    )


def solve_variations(op, tol=None):
    """Solve L eta = -psi and L beta = -1 in the even cosine subspace.

    The kernel of L is spanned by the odd function psi', so the even
    restriction is invertible at a clean wave; a numerically singular even
    block raises DegenerateOperatorError.
    """
    if tol is None:
        tol = default_tol_zero(op)
    ev = np.linalg.eigvalsh(op.even)
    if np.abs(ev).min() <= tol:
        raise DegenerateOperatorError(
            f"even block has eigenvalue {ev[np.abs(ev).argmin()]:.3e} within "
            f"the zero band {tol:.3e}"
        )
    rhs_eta = -op.even_coords(op.psi)
    rhs_beta = np.zeros(op.N + 1)
    rhs_beta[0] = -math.sqrt(op.L0)  # coordinates of the constant -1
    eta = op.profile_from_even(np.linalg.solve(op.even, rhs_eta))
    beta = op.profile_from_even(np.linalg.solve(op.even, rhs_beta))
    return eta, beta


def constrained_min(op, constraints):
    """Minimum Rayleigh quotient of L over the orthogonal complement.

    `constraints` is a sequence of full-space coordinate vectors (length
    2N+1).  Returns (w, argmin_coords) from the projected eigenproblem.
    """
    H = op.full_matrix()
    dim = H.shape[0]
    if not constraints:
        vals, vecs = np.linalg.eigh(H)
        return float(vals[0]), vecs[:, 0]
    C = np.column_stack([np.asarray(c, dtype=float) for c in constraints])
    if C.shape[0] != dim:
        raise ValueError("constraint vectors must have length 2N+1")
    rank = np.linalg.matrix_rank(C, tol=1e-10 * np.abs(C).max())
    if rank < C.shape[1]:
        raise ValueError("constraints are linearly dependent")
    Q, _ = np.linalg.qr(C, mode="complete")
    Q2 = Q[:, C.shape[1]:]
    Hp = Q2.T @ H @ Q2
    vals, vecs = np.linalg.eigh(Hp)
    return float(vals[0]), Q2 @ vecs[:, 0]


def apply_linearized(psi, omega, sym, f):
    """Exact action (M + omega - psi) f as a profile with N_psi + N_f modes.

    Used for residual checks beyond the Galerkin truncation; the product
    psi*f is computed alias-free on an oversampled grid.
    """
    N_out = psi.N + f.N
    M = 4 * (N_out + 1)
    prod = psi.values(M) * f.values(M)
    prod_prof, _ = FourierProfile.from_samples(psi.L0, prod, N_out)
    out = prod_prof.coeffs * (-1.0)
    xi = 2.0 * math.pi * np.arange(N_out + 1) / psi.L0
    fc = np.zeros(N_out + 1)
    fc[: f.N + 1] = f.coeffs
    out += (np.asarray(sym(xi)) + omega) * fc
    return FourierProfile(psi.L0, out)
