"""Algorithmic-cooling simulation and the entropy floor.

Protocols alternate a single-mode Gaussian unitary with a partial
thermalization channel.  Every such step obeys
``nu_after >= p nu + (1 - p) nu_b``, so no protocol can push the symplectic
eigenvalue (hence the entropy) below ``min(nu_0, nu_b)``: the best options
are shielding the system or thermalizing it completely.  The sideband swap
with a high-frequency thermal ancilla is the permitted way around the floor —
it is a two-mode operation outside the single-mode protocol class.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channels import apply_channel, dilate_and_trace, single_mode_gto
from .states import GaussianState, entropy, nu_of, rotation, squeezer, validate_state
from .symplectic import is_symplectic

BOUND_TOL = 1e-9

# θ = π/2 beam splitter: a full state swap between the two modes.
_SWAP_4 = np.block(
    [[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]
)


@dataclass
class ProtocolStep:
    """One round: a Gaussian unitary followed by a partial thermalization."""

    unitary: np.ndarray
    gto_p: float
    gto_phi: float = 0.0

    def __post_init__(self):
        self.unitary = np.asarray(self.unitary, dtype=float)
        if self.unitary.shape != (2, 2) or not is_symplectic(self.unitary):
            raise ValueError("step unitary must be a 2x2 symplectic matrix")
        if not 0.0 <= self.gto_p <= 1.0:
            raise ValueError(f"gto_p must lie in [0, 1], got {self.gto_p}")

    @classmethod
    def from_params(cls, squeeze: float, rotate: float, p: float, phi: float = 0.0) -> "ProtocolStep":
        """Build the step unitary as rotation(rotate) @ squeezer(squeeze)."""
        return cls(unitary=rotation(rotate) @ squeezer(squeeze), gto_p=p, gto_phi=phi)

    def to_dict(self) -> dict:
        return {"unitary": self.unitary.tolist(), "p": self.gto_p, "phi": self.gto_phi}

    @classmethod
    def from_dict(cls, data: dict) -> "ProtocolStep":
        if "unitary" in data:
            return cls(
                unitary=np.asarray(data["unitary"], dtype=float),
                gto_p=float(data["p"]),
                gto_phi=float(data.get("phi", 0.0)),
            )
        return cls.from_params(
            squeeze=float(data.get("squeeze", 1.0)),
            rotate=float(data.get("rotate", 0.0)),
            p=float(data["p"]),
            phi=float(data.get("phi", 0.0)),
        )


@dataclass
class CoolingTrace:
    """Per-step (nu, entropy) history; entry 0 is the initial state."""

    steps: list
    bound: float
    violated: bool

    @property
    def nus(self) -> np.ndarray:
        return np.array([s[0] for s in self.steps])

    @property
    def entropies(self) -> np.ndarray:
        return np.array([s[1] for s in self.steps])


def _nu_of_cm(cm: np.ndarray) -> float:
    return max(math.sqrt(max(np.linalg.det(cm), 0.0)), 1.0)


def entropy_lower_bound(nu_0: float, nu_b: float) -> float:
    """Entropy floor for single-mode protocols: ``entropy(min(nu_0, nu_b))``."""
    if nu_0 < 1.0 or nu_b < 1.0:
        raise ValueError("symplectic eigenvalues must be >= 1")
    return entropy(min(nu_0, nu_b))


def run_protocol(
    initial: GaussianState,
    steps,
    nu_b: float,
    S: np.ndarray | None = None,
    tol: float = BOUND_TOL,
) -> CoolingTrace:
    """Run an alternating unitary / partial-thermalization protocol.

    Args:
        initial: single-mode starting state.
        steps: iterable of ProtocolStep.
        nu_b: bath symplectic eigenvalue shared by all thermalization steps.
        S: normal-mode symplectic of the thermalization channel (identity
           when omitted).
        tol: slack used when flagging a bound violation.

    Returns:
        CoolingTrace with the entropy floor ``entropy(min(nu_0, nu_b))`` and
        a ``violated`` flag that stays False on every physical run.
    """
    if initial.n_modes != 1:
        raise ValueError("cooling protocols act on a single mode")
    if not validate_state(initial):
        raise ValueError("initial state has an invalid covariance matrix")
    cm = initial.cm.copy()
    r = initial.first_moments.copy()

    nu_0 = _nu_of_cm(cm)
    trace = [(nu_0, entropy(nu_0))]
    for step in steps:
        U = step.unitary
        cm = U @ cm @ U.T
        r = U @ r
        ch = single_mode_gto(step.gto_p, step.gto_phi, nu_b, S)
        out = apply_channel(ch, GaussianState(1, r, cm))
        cm, r = out.cm, out.first_moments
        nu = _nu_of_cm(cm)
        trace.append((nu, entropy(nu)))

    bound = entropy_lower_bound(nu_0, nu_b)
    violated = bool(any(ent < bound - tol for _, ent in trace))
    return CoolingTrace(steps=trace, bound=bound, violated=violated)


def greedy_adversary(
    nu_0: float, nu_b: float, n_steps: int, search_grid: int = 16
) -> CoolingTrace:
    """Adversarial protocol search trying to beat the entropy floor.

    Each round grid-searches the step parameters — squeeze factor
    (``search_grid`` points log-spaced in [1, 10]), pre-squeeze rotation
    (32 points in [0, pi)) and channel weight p (64 points in [0, 1]) — and
    applies the combination minimizing the post-step symplectic eigenvalue.
    Rotations after the squeeze and the channel phase are omitted: neither
    changes the output eigenvalue.

    Args:
        nu_0: initial symplectic eigenvalue (state starts unsqueezed).
        nu_b: bath symplectic eigenvalue.
        n_steps: number of adversarial rounds.
        search_grid: resolution of the squeeze-factor grid.

    Returns:
        CoolingTrace of the greedy protocol.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if nu_0 < 1.0 or nu_b < 1.0:
        raise ValueError("symplectic eigenvalues must be >= 1")

    zs = np.logspace(0.0, 1.0, search_grid)
    phis = np.linspace(0.0, np.pi, 32, endpoint=False)
    ps = np.linspace(0.0, 1.0, 64)

    cm = nu_0 * np.eye(2)
    nu_now = _nu_of_cm(cm)
    trace = [(nu_now, entropy(nu_now))]
    cos, sin = np.cos(phis), np.sin(phis)
    for _ in range(n_steps):
        a, b, c = cm[0, 0], cm[0, 1], cm[1, 1]
        # Rotate by phi, then squeeze by z: closed-form entries of U cm U^T.
        a_r = cos**2 * a + 2.0 * cos * sin * b + sin**2 * c
        b_r = cos * sin * (c - a) + (cos**2 - sin**2) * b
        c_r = sin**2 * a - 2.0 * cos * sin * b + cos**2 * c
        a_s = zs[:, None] ** 2 * a_r[None, :]
        b_s = np.broadcast_to(b_r[None, :], a_s.shape)
        c_s = c_r[None, :] / zs[:, None] ** 2
        # det of p * cm_step + (1 - p) nu_b * identity over the p grid.
        p = ps[:, None, None]
        q = (1.0 - ps)[:, None, None] * nu_b
        det = (p * a_s[None] + q) * (p * c_s[None] + q) - (p * b_s[None]) ** 2

        k_p, k_z, k_phi = np.unravel_index(np.argmin(det), det.shape)
        U = squeezer(float(zs[k_z])) @ rotation(float(phis[k_phi]))
        cm = U @ cm @ U.T
        ch = single_mode_gto(float(ps[k_p]), 0.0, nu_b)
        cm = ch.X @ cm @ ch.X.T + ch.Y
        nu_now = _nu_of_cm(cm)
        trace.append((nu_now, entropy(nu_now)))

    bound = entropy_lower_bound(nu_0, nu_b)
    violated = bool(any(ent < bound - BOUND_TOL for _, ent in trace))
    return CoolingTrace(steps=trace, bound=bound, violated=violated)


def sideband_swap(
    system: GaussianState, beta: float, omega_ancilla: float
) -> tuple:
    """Cool by swapping in a high-frequency thermal ancilla.

    Appends an ancilla mode in the thermal state of frequency
    ``omega_ancilla`` at inverse temperature ``beta`` and exchanges it with
    the system through a full-swap beam splitter.  The achieved symplectic
    eigenvalue is ``nu_of(beta, omega_ancilla)``, which tends to 1 as the
    ancilla frequency grows — this two-mode route is how cooling below the
    single-mode floor is actually done.

    Args:
        system: single-mode state to cool.
        beta: inverse temperature of the ancilla.
        omega_ancilla: ancilla frequency, > 0.

    Returns:
        (cooled GaussianState, achieved symplectic eigenvalue).
    """
    if system.n_modes != 1:
        raise ValueError("sideband swap cools a single system mode")
    nu_a = nu_of(beta, omega_ancilla)
    out_cm = dilate_and_trace(system.cm, _SWAP_4, [nu_a])
    out = GaussianState(1, np.zeros(2), out_cm)
    return out, _nu_of_cm(out_cm)
