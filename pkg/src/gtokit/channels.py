"""Gaussian channels and the thermal-operation channel family.

A Gaussian channel acts on covariance matrices as ``sigma -> X sigma X^T + Y``
and on first moments as ``r -> X r + d``.  Thermal-operation channels come in
a normal form: in the frame where the system Hamiltonian is a direct sum of
frequency sectors, each sector independently undergoes passive optics, a
per-mode loss ``cos(theta)`` into a thermal environment at the background
temperature, and passive optics again.  ``dilate_and_trace`` provides the
brute-force alternative (explicit bath modes, global passive transformation,
partial trace) used as an oracle in the tests.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .states import GaussianState, FrequencySpectrum, nu_of, validate_state
from .symplectic import (
    STRUCTURAL_TOL,
    _check_unitary,
    is_passive,
    is_symplectic,
    omega,
    unitary_to_passive,
)

# Positive-semidefiniteness of the complete-positivity matrix is checked more
# loosely than structural identities: it involves eigenvalues of a difference
# of products.
CHANNEL_TOL = 1e-8


def _symplectic_inverse(S: np.ndarray) -> np.ndarray:
    """Inverse of a symplectic matrix, ``Omega S^T Omega^T`` (exact, no solve)."""
    n = S.shape[0] // 2
    Om = omega(n)
    return Om @ S.T @ Om.T


@dataclass
class GaussianChannel:
    """Completely positive Gaussian map ``(X, Y, d)``."""

    X: np.ndarray
    Y: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.Y = np.asarray(self.Y, dtype=float)
        self.d = np.asarray(self.d, dtype=float)
        dim = self.X.shape[0]
        if self.X.shape != (dim, dim) or dim % 2 != 0:
            raise ValueError(f"X must be square with even dimension, got {self.X.shape}")
        if self.Y.shape != (dim, dim):
            raise ValueError(f"Y must match X, got {self.Y.shape} vs {self.X.shape}")
        if self.d.shape != (dim,):
            raise ValueError(f"d must have length {dim}, got {self.d.shape}")

    @property
    def n_modes(self) -> int:
        return self.X.shape[0] // 2

    @classmethod
    def identity(cls, n_modes: int) -> "GaussianChannel":
        dim = 2 * n_modes
        return cls(np.eye(dim), np.zeros((dim, dim)), np.zeros(dim))

    def to_dict(self) -> dict:
        return {"X": self.X.tolist(), "Y": self.Y.tolist(), "d": self.d.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianChannel":
        return cls(
            X=np.asarray(data["X"], dtype=float),
            Y=np.asarray(data["Y"], dtype=float),
            d=np.asarray(data["d"], dtype=float),
        )


def _complex_matrix_to_json(M: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M, dtype=complex)]


def _complex_matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(pair[0], pair[1]) for pair in row] for row in rows])


@dataclass
class GTOSector:
    """One frequency sector of a thermal-operation channel.

    ``Z`` and ``W`` are the pre- and post-loss passive blocks (as unitaries on
    the sector's modes) and ``thetas`` holds one loss angle per mode:
    ``cos(theta) = 1`` leaves the mode alone, ``cos(theta) = 0`` thermalizes
    it completely.
    """

    Z: np.ndarray
    thetas: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=complex)
        self.W = np.asarray(self.W, dtype=complex)
        self.thetas = np.atleast_1d(np.asarray(self.thetas, dtype=float))

    @property
    def n_modes(self) -> int:
        return self.Z.shape[0]

    def to_dict(self) -> dict:
        return {
            "Z": _complex_matrix_to_json(self.Z),
            "thetas": self.thetas.tolist(),
            "W": _complex_matrix_to_json(self.W),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GTOSector":
        return cls(
            Z=_complex_matrix_from_json(data["Z"]),
            thetas=np.asarray(data["thetas"], dtype=float),
            W=_complex_matrix_from_json(data["W"]),
        )


@dataclass
class GTOSpec:
    """Normal-form parametrization of a thermal-operation channel.

    ``spectrum`` fixes the normal-mode frame and frequency sectors of the
    system Hamiltonian, ``beta`` the background inverse temperature, and
    ``sectors`` one :class:`GTOSector` per frequency in spectrum order.
    """

    spectrum: FrequencySpectrum
    beta: float
    sectors: list

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if len(self.sectors) != len(self.spectrum.sectors):
            raise ValueError(
                f"need one sector block per frequency sector "
                f"({len(self.spectrum.sectors)}), got {len(self.sectors)}"
            )
        for gto_sec, freq_sec in zip(self.sectors, self.spectrum.sectors):
            d = freq_sec.multiplicity
            _check_unitary(gto_sec.Z, STRUCTURAL_TOL, "Z")
            _check_unitary(gto_sec.W, STRUCTURAL_TOL, "W")
            if gto_sec.Z.shape != (d, d) or gto_sec.W.shape != (d, d):
                raise ValueError(f"sector blocks must be {d}x{d} for multiplicity {d}")
            if gto_sec.thetas.shape != (d,):
                raise ValueError(f"sector needs {d} loss angles, got {gto_sec.thetas.shape}")

    def to_dict(self) -> dict:
        return {
            "spectrum": self.spectrum.to_dict(),
            "beta": self.beta,
            "sectors": [sec.to_dict() for sec in self.sectors],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GTOSpec":
        return cls(
            spectrum=FrequencySpectrum.from_dict(data["spectrum"]),
            beta=float(data["beta"]),
            sectors=[GTOSector.from_dict(sec) for sec in data["sectors"]],
        )


@dataclass
class SingleModeGTO:
    """Single-mode thermal-operation channel parameters.

    The channel is ``sigma -> p S D_phi S^{-1} sigma S^{-T} D_phi^T S^T
    + (1-p) nu_b S S^T`` where ``S`` is the symplectic normalizing the
    system Hamiltonian and ``nu_b`` the bath symplectic eigenvalue.
    """

    p: float
    phi: float
    nu_b: float
    S: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        self.S = np.asarray(self.S, dtype=float)

    def to_channel(self) -> GaussianChannel:
        return single_mode_gto(self.p, self.phi, self.nu_b, self.S)

    def to_dict(self) -> dict:
        return {"p": self.p, "phi": self.phi, "nu_b": self.nu_b, "S": self.S.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "SingleModeGTO":
        return cls(
            p=float(data["p"]),
            phi=float(data.get("phi", 0.0)),
            nu_b=float(data["nu_b"]),
            S=np.asarray(data["S"], dtype=float) if "S" in data else np.eye(2),
        )


def validate_channel(ch: GaussianChannel, tol: float = CHANNEL_TOL) -> bool:
    """Check complete positivity of a Gaussian map.

    True iff ``Y`` is symmetric and the Hermitian matrix
    ``Y + i Omega - i X Omega X^T`` has smallest eigenvalue >= -tol.
    """
    X, Y = ch.X, ch.Y
    scale = max(1.0, np.abs(Y).max())
    if np.abs(Y - Y.T).max() > tol * scale:
        return False
    Om = omega(ch.n_modes)
    cp = Y + 1j * Om - 1j * X @ Om @ X.T
    return bool(np.linalg.eigvalsh(cp).min() >= -tol)


def gto_to_channel(spec: GTOSpec) -> GaussianChannel:
    """Build the (X, Y) pair of a thermal-operation channel from its normal form.

    In the normal-mode frame each sector contributes
    ``X_l = K(W_l) (cos theta per mode) K(Z_l)`` and
    ``Y_l = K(W_l) (nu_l sin^2 theta per mode) K(W_l)^T`` with
    ``nu_l = nu_of(beta, omega_l)``; conjugating back with the spectrum's
    symplectic gives ``X = S (sum of X_l) S^{-1}`` and
    ``Y = S (sum of Y_l) S^T``.  The displacement is zero.

    Args:
        spec: validated GTOSpec.

    Returns:
        GaussianChannel passing :func:`validate_channel`.
    """
    n = spec.spectrum.n_modes
    dim = 2 * n
    X_nm = np.zeros((dim, dim))
    Y_nm = np.zeros((dim, dim))
    for gto_sec, freq_sec in zip(spec.sectors, spec.spectrum.sectors):
        nu_l = nu_of(spec.beta, freq_sec.omega)
        KW = unitary_to_passive(gto_sec.W)
        KZ = unitary_to_passive(gto_sec.Z)
        cos2 = np.repeat(np.cos(gto_sec.thetas), 2)
        sin2 = np.repeat(np.sin(gto_sec.thetas) ** 2, 2)
        X_l = (KW * cos2) @ KZ
        Y_l = (KW * (nu_l * sin2)) @ KW.T
        rows = np.ravel([[2 * i, 2 * i + 1] for i in freq_sec.mode_indices])
        X_nm[np.ix_(rows, rows)] = X_l
        Y_nm[np.ix_(rows, rows)] = Y_l

    S = spec.spectrum.S
    S_inv = _symplectic_inverse(S)
    return GaussianChannel(X=S @ X_nm @ S_inv, Y=S @ Y_nm @ S.T, d=np.zeros(dim))


def apply_channel(ch: GaussianChannel, state: GaussianState, tol: float = CHANNEL_TOL) -> GaussianState:
    """Act with a Gaussian channel on a Gaussian state.

    Args:
        ch: channel, validated before use.
        state: input state, validated before use.
        tol: validity tolerance for both checks.

    Returns:
        GaussianState with ``cm = X cm X^T + Y`` and ``r = X r + d``.
    """
    if ch.n_modes != state.n_modes:
        raise ValueError(
            f"channel acts on {ch.n_modes} modes but state has {state.n_modes}"
        )
    if not validate_channel(ch, tol):
        raise ValueError("channel fails the complete-positivity check")
    if not validate_state(state, tol):
        raise ValueError("input state has an invalid covariance matrix")
    cm = ch.X @ state.cm @ ch.X.T + ch.Y
    r = ch.X @ state.first_moments + ch.d
    return GaussianState(state.n_modes, r, 0.5 * (cm + cm.T))


def single_mode_gto(
    p: float, phi: float, nu_b: float, S: np.ndarray | None = None
) -> GaussianChannel:
    """Single-mode thermal-operation channel.

    ``X = sqrt(p) S D_phi S^{-1}`` and ``Y = (1 - p) nu_b S S^T``: with
    probability weight ``p`` the state survives up to a phase rotation in the
    normal-mode frame, and the complement is replaced by the bath.

    Args:
        p: survival weight in [0, 1].
        phi: rotation angle in the normal-mode frame.
        nu_b: bath symplectic eigenvalue, >= 1.
        S: 2x2 symplectic normal-mode matrix (identity when omitted).

    Returns:
        GaussianChannel on one mode.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if nu_b < 1.0:
        raise ValueError(f"nu_b must be >= 1, got {nu_b}")
    if S is None:
        S = np.eye(2)
    S = np.asarray(S, dtype=float)
    if S.shape != (2, 2) or not is_symplectic(S):
        raise ValueError("S must be a 2x2 symplectic matrix")
    c, s = np.cos(phi), np.sin(phi)
    D = np.array([[c, s], [-s, c]])
    X = np.sqrt(p) * S @ D @ _symplectic_inverse(S)
    Y = (1.0 - p) * nu_b * S @ S.T
    return GaussianChannel(X=X, Y=Y, d=np.zeros(2))


def dilate_and_trace(
    system_cm: np.ndarray, O: np.ndarray, bath_nus, tol: float = STRUCTURAL_TOL
) -> np.ndarray:
    """Channel action via an explicit bath: append, transform, and pinch.

    Forms the joint covariance matrix ``system_cm + (direct sum of
    nu_j 1_2)``, applies the passive transformation ``O`` by congruence, and
    returns the leading system block (the partial trace over the bath modes).

    Args:
        system_cm: 2n x 2n system covariance matrix.
        O: passive matrix on n + m modes.
        bath_nus: m bath symplectic eigenvalues, each >= 1.
        tol: passivity tolerance.

    Returns:
        2n x 2n output covariance matrix.
    """
    system_cm = np.asarray(system_cm, dtype=float)
    bath_nus = np.asarray(bath_nus, dtype=float)
    dim_s = system_cm.shape[0]
    if system_cm.shape != (dim_s, dim_s) or dim_s % 2 != 0:
        raise ValueError(f"system_cm must be square with even dimension, got {system_cm.shape}")
    if np.any(bath_nus < 1.0 - tol):
        raise ValueError("bath symplectic eigenvalues must be >= 1")
    if not is_passive(O, tol):
        raise ValueError("O must be a passive (orthogonal symplectic) matrix")
    if O.shape[0] != dim_s + 2 * len(bath_nus):
        raise ValueError(
            f"O has dimension {O.shape[0]}, expected {dim_s + 2 * len(bath_nus)}"
        )
    joint = block_diag(system_cm, np.diag(np.repeat(bath_nus, 2)))
    out = O @ joint @ O.T
    return out[:dim_s, :dim_s]


def displaced_gto(ch: GaussianChannel, center: np.ndarray) -> GaussianChannel:
    """Recenter a channel on a displaced Hamiltonian.

    Conjugating the channel with displacements to and from ``center`` leaves
    (X, Y) alone and shifts the displacement to ``d + (1 - X) center``, so the
    fixed point moves to the Hamiltonian's center.
    """
    center = np.asarray(center, dtype=float)
    if center.shape != ch.d.shape:
        raise ValueError(f"center must have length {ch.d.shape[0]}, got {center.shape}")
    d = ch.d + (np.eye(ch.X.shape[0]) - ch.X) @ center
    return GaussianChannel(X=ch.X.copy(), Y=ch.Y.copy(), d=d)


def compose(ch2: GaussianChannel, ch1: GaussianChannel) -> GaussianChannel:
    """Channel composition ``ch2 after ch1``.

    ``X = X2 X1``, ``Y = X2 Y1 X2^T + Y2``, ``d = X2 d1 + d2``.
    """
    if ch1.n_modes != ch2.n_modes:
        raise ValueError("cannot compose channels on different mode counts")
    return GaussianChannel(
        X=ch2.X @ ch1.X,
        Y=ch2.X @ ch1.Y @ ch2.X.T + ch2.Y,
        d=ch2.X @ ch1.d + ch2.d,
    )
