"""Even periodic profiles and the explicit Kawahara dnoidal family.

A FourierProfile stores an even real L0-periodic function as a truncated
cosine series.  The dnoidal builder samples the quartic-in-dn ansatz

    psi(x) = a + b (dn^2(2Kx/L, k) - E/K)
               + d (dn^4(2Kx/L, k) - (2-k^2) 2E/(3K) + (1-k^2)/3)

whose brackets are exactly mean-zero, so <psi> = a.

Coefficient note: two closed forms of `a` differing by the constant
(3584/3) K^4/L^4 are supported.  With the default (``corrected=True``) the
sampled wave satisfies psi'''' - psi'' + omega psi - psi^2/2 + A = 0 to
machine precision mode-by-mode; the b, d and period-constraint formulas
need no such adjustment.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .elliptic import complete_integrals, jacobi_sn_cn_dn
from .multiplier import builtin_symbol

__all__ = [
    "FourierProfile",
    "DnoidalParams",
    "dnoidal_coefficients",
    "build_dnoidal",
    "extract_A",
    "pi_residual",
    "csch_coefficients",
    "galilean_shift",
]

# constant subtracted from the plain closed form of `a` (times K^4/L^4)
A_COEFF_CORRECTION = 3584.0 / 3.0


class FourierProfile:
    """Even real L0-periodic function as cosine coefficients c_0..c_N.

    Represents psi(x) = c_0 + sum_{n>=1} c_n cos(2 pi n x / L0).  Evenness
    is structural: only cosine coefficients are stored.
    """

    def __init__(self, L0, coeffs):
        if L0 <= 0:
            raise ValueError("period L0 must be positive")
        self.L0 = float(L0)
        self.coeffs = np.asarray(coeffs, dtype=float).copy()
        if self.coeffs.ndim != 1 or len(self.coeffs) < 1:
            raise ValueError("coeffs must be a 1-d array with at least c_0")

    @property
    def N(self):
        return len(self.coeffs) - 1

    @classmethod
    def from_samples(cls, L0, values, N):
        """Fit cosine coefficients 0..N from equispaced samples x_j = j L0/M.

        Requires M >= 2N+1.  Returns (profile, odd_energy) where odd_energy
        is the relative l2 weight in the sine coefficients (should be at
        rounding level for genuinely even data).
        """
        values = np.asarray(values, dtype=float)
        M = len(values)
        if M < 2 * N + 1:
            raise ValueError(f"need at least 2N+1={2*N+1} samples, got {M}")
        F = np.fft.rfft(values) / M
        c = np.zeros(N + 1)
        c[0] = F[0].real
        upto = min(N, len(F) - 1)
        c[1 : upto + 1] = 2.0 * F[1 : upto + 1].real
        scale = max(np.abs(F).max(), 1e-300)
        odd_energy = float(np.abs(F[1:].imag).max() / scale)
        return cls(L0, c), odd_energy

    def grid(self, M):
        return np.arange(M) * (self.L0 / M)

    def values(self, M=None):
        """Sample on M equispaced points x_j = j L0/M (default 4(N+1))."""
        if M is None:
            M = 4 * (self.N + 1)
        if M < 2 * self.N + 1:
            raise ValueError("sampling grid too coarse for the stored modes")
        F = np.zeros(M // 2 + 1, dtype=complex)
        F[0] = self.coeffs[0] * M
        F[1 : self.N + 1] = self.coeffs[1:] * (M / 2.0)
        return np.fft.irfft(F, M)

    def mean(self):
        return float(self.coeffs[0])

    def sup_norm(self):
        return float(np.abs(self.values()).max())

    def tail_ratio(self):
        """Magnitude of the last two coefficients relative to the largest."""
        if self.N < 2:
            return 0.0
        c = np.abs(self.coeffs)
        top = c.max()
        if top == 0.0:
            return 0.0
        return float(c[-2:].max() / top)

    def psi_hat(self, n_max):
        """One-sided complex Fourier coefficients hat(psi)(n), n = 0..n_max."""
        h = np.zeros(n_max + 1)
        h[0] = self.coeffs[0]
        upto = min(self.N, n_max)
        h[1 : upto + 1] = 0.5 * self.coeffs[1 : upto + 1]
        return h

    def wavenumbers(self):
        return 2.0 * math.pi * np.arange(self.N + 1) / self.L0

    def derivative_sine_coeffs(self):
        """psi'(x) = sum_{n>=1} s_n sin(2 pi n x/L0); returns s_1..s_N."""
        xi = self.wavenumbers()[1:]
        return -self.coeffs[1:] * xi

    def shifted(self, alpha):
        c = self.coeffs.copy()
        c[0] += alpha
        return FourierProfile(self.L0, c)

    def truncated(self, N):
        if N >= self.N:
            c = np.zeros(N + 1)
            c[: self.N + 1] = self.coeffs
            return FourierProfile(self.L0, c)
        return FourierProfile(self.L0, self.coeffs[: N + 1])


@dataclass(frozen=True)
class DnoidalParams:
    """Everything defining one explicit Kawahara dnoidal wave."""

    k: float
    L: float
    omega: float
    A: float
    a: float
    b: float
    d: float
    K: float
    E: float
    Kp: float


def dnoidal_coefficients(k, L, omega, corrected=True):
    """Ansatz coefficients (a, b, d) for modulus k, period L, speed omega.

    With corrected=True (default) the constant (3584/3) K^4/L^4 is
    subtracted from `a`; this is the variant for which the sampled ansatz
    solves the traveling-wave equation to machine precision.  Use
    corrected=False for the plain formula spelled out below.
    """
    pair = complete_integrals(k)
    K, E = pair.K, pair.E
    if k <= 0.0 or L <= 0.0:
        raise ValueError("need 0 < k < 1 and L > 0")
    L2 = L * L
    L4 = L2 * L2
    a = (1.0 / (507.0 * L4)) * (
        (-(k**4) + k**2 + 1.0) * 302848.0 * K**4
        + 14560.0 * L2 * K**2 * (k**2 - 2.0)
        + 43680.0 * L2 * E * K
        + L4 * (-31.0 + 507.0 * omega)
    )
    if corrected:
        a -= A_COEFF_CORRECTION * K**4 / L4
    b = (1120.0 / (13.0 * L4)) * ((208.0 * k**2 - 416.0) * K**2 + L2) * K**2
    d = 26880.0 * K**4 / L4
    return a, b, d


def build_dnoidal(k, L, omega, N=128, sym=None, corrected=True):
    """Sample the dnoidal ansatz and return (DnoidalParams, FourierProfile).

    The integration constant A is extracted from the residual mean against
    `sym` (Kawahara by default).  The caller is responsible for choosing
    (k, L) on the period-constraint curve if an exact solution is wanted;
    off-curve input is allowed and simply yields a large residual in
    extract_A.
    """
    if N < 8:
        raise ValueError("truncation N < 8 is under-resolved")
    pair = complete_integrals(k)
    K, E = pair.K, pair.E
    a, b, d = dnoidal_coefficients(k, L, omega, corrected=corrected)
    M = 4 * (N + 1)
    x = np.arange(M) * (L / M)
    _, _, dnv = jacobi_sn_cn_dn(2.0 * K * x / L, k)
    mean2 = E / K
    mean4 = (2.0 - k**2) * (2.0 * E) / (3.0 * K) - (1.0 - k**2) / 3.0
    vals = a + b * (dnv**2 - mean2) + d * (dnv**4 - mean4)
    psi, odd_energy = FourierProfile.from_samples(L, vals, N)
    if odd_energy > 1e-12:
        raise RuntimeError(f"dnoidal sampling produced odd content {odd_energy:.2e}")
    if sym is None:
        sym = builtin_symbol("kawahara")
    A, _ = extract_A(psi, omega, sym)
    params = DnoidalParams(
        k=float(k), L=float(L), omega=float(omega), A=A,
        a=a, b=b, d=d, K=K, E=E, Kp=pair.Kp,
    )
    return params, psi


def _residual_cosine_coeffs(psi, omega, sym):
    """Cosine coefficients (length 2N+1) of M psi + omega psi - psi^2/2."""
    N = psi.N
    M = 4 * (N + 1)
    vals = psi.values(M)
    sq = vals * vals
    F = np.fft.rfft(sq) / M
    rc = np.zeros(2 * N + 1)
    rc[0] = -0.5 * F[0].real
    rc[1 : 2 * N + 1] = -0.5 * 2.0 * F[1 : 2 * N + 1].real
    xi = psi.wavenumbers()
    rc[: N + 1] += (sym(xi) + omega) * psi.coeffs
    return rc


def pi_residual(psi, omega, A, sym):
    """Residual of the traveling-wave map M psi + omega psi - psi^2/2 + A.

    Returns (coeffs, sup) with the residual's cosine coefficients (length
    2N+1) and its sup norm over one period.
    """
    rc = _residual_cosine_coeffs(psi, omega, sym)
    rc = rc.copy()
    rc[0] += A
    r = FourierProfile(psi.L0, rc)
    return rc, float(np.abs(r.values()).max())


def extract_A(psi, omega, sym):
    """Integration constant and residual of the traveling-wave equation.

    Computes r = M psi + omega psi - psi^2/2 spectrally, sets A = -mean(r),
    and returns (A, max|r + A|).  The residual is a return value, never an
    error: it is near zero exactly when psi solves the equation.
    """
    if psi.tail_ratio() > 1e-10:
        warnings.warn(
            f"profile tail {psi.tail_ratio():.2e} above 1e-10; "
            "residual may be truncation-limited",
            stacklevel=2,
        )
    rc = _residual_cosine_coeffs(psi, omega, sym)
    A = -rc[0]
    rc[0] += A
    r = FourierProfile(psi.L0, rc)
    return float(A), float(np.abs(r.values()).max())


def _csch(x):
    """1/sinh(x) for positive x without overflow."""
    x = np.asarray(x, dtype=float)
    e = np.exp(-x)
    return 2.0 * e / (1.0 - e * e)


def csch_coefficients(params, n_max, variant="derived"):
    """Closed-form Fourier coefficients sigma(n) = hat(psi)(n), n = 1..n_max.

    variant="derived": sigma(n) = (n/2) csch(n pi K'/K) (pi^2/K^2)
                        * (b + d ((4-2k^2)/3 + n^2 pi^2 / (6 K^2))),
    which matches the FFT of the sampled ansatz to rounding.  Two alternate
    prefactors are kept for comparison: variant="k2_gamma" divides the
    d-term by k^2 and uses n^2 pi^2/(6K) instead of n^2 pi^2/(6K^2);
    variant="fixed_gamma" is the same with the n-dependent term dropped,
    leaving a pure n*csch sequence.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    k, K, Kp = params.k, params.K, params.Kp
    b, d = params.b, params.d
    n = np.arange(1, n_max + 1, dtype=float)
    cs = _csch(n * math.pi * Kp / K)
    if variant == "derived":
        bracket = b + d * ((4.0 - 2.0 * k**2) / 3.0 + n**2 * math.pi**2 / (6.0 * K**2))
        gamma = (math.pi**2 / K**2) * bracket
    elif variant == "k2_gamma":
        gamma = b * math.pi**2 / K**2 + d * math.pi**2 / (k**2 * K**2) * (
            (4.0 - 2.0 * k**2) / 3.0 + n**2 * math.pi**2 / (6.0 * K)
        )
    elif variant == "fixed_gamma":
        gamma = b * math.pi**2 / K**2 + d * math.pi**2 / (k**2 * K**2) * (
            (4.0 - 2.0 * k**2) / 3.0
        )
        gamma = gamma * np.ones_like(n)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return 0.5 * gamma * n * cs


def galilean_shift(psi, omega, A, alpha):
    """Gauge map (psi, omega, A) -> (psi + alpha, omega + alpha, A - omega*alpha - alpha^2/2).

    Leaves the linearized operator (and hence its spectrum) unchanged and
    maps solutions of the traveling-wave equation to solutions.
    """
    return psi.shifted(alpha), omega + alpha, A - omega * alpha - 0.5 * alpha * alpha
