"""Window-averaged transfer probabilities and truncation-error integrals.

Amplitudes on the ring are finite trigonometric polynomials in tau, so every
time average over [0, T] has a closed form: for real spectral weights c_a
attached to frequencies nu_a,

    integral_0^T |sum_a c_a e^{-i nu_a tau}|^2 dtau
        = sum_{a,b} c_a c_b K(nu_a - nu_b),
    K(delta) = T            if |delta| <= DEGENERACY_TOL
             = sin(delta T) / delta   otherwise.

This module computes, per truncation radius M:

  * the window-averaged transfer probability from site 1 to a target site,
  * the relative L2 deviation of the truncated amplitude from the all-node
    amplitude over the window (the truncation error of transfer 1 -> n),
  * its parity-weighted average over the independent targets, and
  * the smallest M from which the worst-case error stays below a tolerance.

Mirror symmetry makes targets n and N+2-n equivalent, so only
n = 1..max_neighbors+1 are computed; the parity weights restore the full-ring
average.  Closed-form integration is the production path; composite-Simpson
quadrature exists only as a cross-check (see `oracle`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, CouplingProfile, max_neighbors
from .spectral import mode_eigenvalues, pair_mode_weights

__all__ = [
    "DEGENERACY_TOL",
    "ThresholdResult",
    "TimeWindow",
    "TransferMetrics",
    "accuracy_threshold",
    "avg_probability",
    "error_map",
    "independent_targets",
    "mean_truncation_error",
    "probability_map",
    "target_multiplicities",
    "transfer_metrics",
    "trig_power_integral",
    "truncation_error",
]

# frequencies closer than this are integrated as exactly degenerate
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class TimeWindow:
    """Averaging interval [0, t_max] in dimensionless time."""

    t_max: float

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max!r}")

    @classmethod
    def matched(cls, nodes: int) -> "TimeWindow":
        """The default window T = N used throughout the analysis."""
        return cls(float(nodes))


def independent_targets(nodes: int) -> tuple[int, ...]:
    """Target sites not related by ring reflection: n = 1..max_neighbors+1."""
    return tuple(range(1, max_neighbors(nodes) + 2))


def target_multiplicities(nodes: int) -> np.ndarray:
    """How many ring sites each independent target stands for; sums to N."""
    nf = max_neighbors(nodes)
    mult = np.full(nf + 1, 2, dtype=int)
    mult[0] = 1
    if nodes % 2 == 0:
        mult[-1] = 1
    return mult


def _frequency_kernel(freqs: np.ndarray, t_max: float) -> np.ndarray:
    delta = freqs[:, None] - freqs[None, :]
    near = np.abs(delta) <= DEGENERACY_TOL
    safe = np.where(near, 1.0, delta)
    return np.where(near, t_max, np.sin(delta * t_max) / safe)


def trig_power_integral(coeffs, freqs, t_max: float) -> float:
    """integral_0^T |sum_a c_a e^{-i nu_a tau}|^2 dtau, exactly.

    Coefficients must be real (spectral weights of a symmetric propagator
    always are).  Clipped at zero against rounding.
    """
    c = np.asarray(coeffs, dtype=float)
    nu = np.asarray(freqs, dtype=float)
    if c.shape != nu.shape or c.ndim != 1:
        raise ValueError("coeffs and freqs must be 1-D arrays of equal length")
    value = float(c @ _frequency_kernel(nu, t_max) @ c)
    return max(value, 0.0)


def _quad_forms(W: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Row-wise w K w^T for a stack of weight vectors."""
    return np.maximum(np.einsum("tm,mn,tn->t", W, kernel, W), 0.0)


def _target_weight_matrix(nodes: int, targets) -> np.ndarray:
    return np.stack([pair_mode_weights(nodes, 1, t) for t in targets])


def avg_probability(
    spec: ChainSpec, profile: CouplingProfile, target: int, window: TimeWindow
) -> float:
    """Transfer probability |p_{1,target}(tau)|^2 averaged over the window."""
    if not 1 <= target <= spec.nodes:
        raise ValueError(f"target must lie in [1, {spec.nodes}], got {target}")
    w = pair_mode_weights(spec.nodes, 1, target)
    lam = mode_eigenvalues(spec, profile)
    return trig_power_integral(w, lam, window.t_max) / window.t_max


def _error_from_modes(
    weights: np.ndarray,
    lam: np.ndarray,
    lam_ref: np.ndarray,
    t_max: float,
) -> float:
    """Relative L2 deviation between two spectra sharing one weight vector.

    sqrt( int |p - p_ref|^2 / int |p_ref|^2 ); the difference is itself a
    trig polynomial with coefficients (+w, -w) on the joined frequency list,
    so both integrals reduce to the closed form.
    """
    den = trig_power_integral(weights, lam_ref, t_max)
    if den <= 0.0:
        raise ValueError("degenerate window: reference amplitude has no power")
    coeffs = np.concatenate([weights, -weights])
    freqs = np.concatenate([lam, lam_ref])
    num = trig_power_integral(coeffs, freqs, t_max)
    return float(np.sqrt(num / den))


def truncation_error(
    spec: ChainSpec, profile: CouplingProfile, target: int, window: TimeWindow
) -> float:
    """Relative L2 error of the M-truncated amplitude 1 -> target against the
    all-node dynamics over the window.  Zero when spec is untruncated."""
    if not 1 <= target <= spec.nodes:
        raise ValueError(f"target must lie in [1, {spec.nodes}], got {target}")
    if len(profile) < spec.max_neighbors:
        raise ValueError("profile must cover the full range for the reference dynamics")
    if spec.untruncated:
        return 0.0  # truncated and reference dynamics coincide
    w = pair_mode_weights(spec.nodes, 1, target)
    lam = mode_eigenvalues(spec, profile)
    lam_ref = mode_eigenvalues(ChainSpec.all_neighbors(spec.nodes), profile)
    return _error_from_modes(w, lam, lam_ref, window.t_max)


def mean_truncation_error(
    spec: ChainSpec, profile: CouplingProfile, window: TimeWindow
) -> float:
    """Truncation error averaged over all N targets via mirror multiplicity:
    endpoints count once (twice for the odd-N halfway site), interior targets
    twice, total weight N."""
    targets = independent_targets(spec.nodes)
    errors = np.array([truncation_error(spec, profile, t, window) for t in targets])
    mult = target_multiplicities(spec.nodes)
    return float(mult @ errors) / spec.nodes


@dataclass(frozen=True)
class TransferMetrics:
    """Per-target window metrics of one truncated model."""

    targets: tuple[int, ...]
    avg_probabilities: np.ndarray
    errors: np.ndarray
    mean_error: float


def transfer_metrics(
    spec: ChainSpec, profile: CouplingProfile, window: TimeWindow
) -> TransferMetrics:
    targets = independent_targets(spec.nodes)
    W = _target_weight_matrix(spec.nodes, targets)
    lam = mode_eigenvalues(spec, profile)
    probs = _quad_forms(W, _frequency_kernel(lam, window.t_max)) / window.t_max
    if spec.untruncated:
        errors = np.zeros(len(targets))
    else:
        lam_ref = mode_eigenvalues(ChainSpec.all_neighbors(spec.nodes), profile)
        den = _quad_forms(W, _frequency_kernel(lam_ref, window.t_max))
        if np.any(den <= 0.0):
            raise ValueError("degenerate window: reference amplitude has no power")
        joined = np.concatenate([lam, lam_ref])
        C = np.concatenate([W, -W], axis=1)
        num = _quad_forms(C, _frequency_kernel(joined, window.t_max))
        errors = np.sqrt(num / den)
    mult = target_multiplicities(spec.nodes)
    return TransferMetrics(
        targets=targets,
        avg_probabilities=probs,
        errors=errors,
        mean_error=float(mult @ errors) / spec.nodes,
    )


def probability_map(
    nodes: int, profile: CouplingProfile, window: TimeWindow
) -> np.ndarray:
    """Averaged probabilities for every truncation radius.

    Returns an array of shape (max_neighbors, targets): row M-1 holds the
    window-averaged probabilities 1 -> n for n in independent_targets.
    """
    targets = independent_targets(nodes)
    W = _target_weight_matrix(nodes, targets)
    nf = max_neighbors(nodes)
    out = np.empty((nf, len(targets)))
    for m in range(1, nf + 1):
        lam = mode_eigenvalues(ChainSpec(nodes, m), profile)
        out[m - 1] = _quad_forms(W, _frequency_kernel(lam, window.t_max)) / window.t_max
    return out


def error_map(
    nodes: int, profile: CouplingProfile, window: TimeWindow
) -> tuple[np.ndarray, np.ndarray]:
    """Truncation errors for every radius and target.

    Returns (errors, means): errors has shape (max_neighbors, targets) and
    means the parity-weighted average per radius.  The all-node reference
    spectrum is computed once and shared.
    """
    targets = independent_targets(nodes)
    W = _target_weight_matrix(nodes, targets)
    nf = max_neighbors(nodes)
    lam_ref = mode_eigenvalues(ChainSpec.all_neighbors(nodes), profile)
    den = _quad_forms(W, _frequency_kernel(lam_ref, window.t_max))
    if np.any(den <= 0.0):
        raise ValueError("degenerate window: reference amplitude has no power")
    mult = target_multiplicities(nodes)
    errors = np.empty((nf, len(targets)))
    C = np.concatenate([W, -W], axis=1)
    for m in range(1, nf):
        lam = mode_eigenvalues(ChainSpec(nodes, m), profile)
        joined = np.concatenate([lam, lam_ref])
        num = _quad_forms(C, _frequency_kernel(joined, window.t_max))
        errors[m - 1] = np.sqrt(num / den)
    errors[nf - 1] = 0.0  # the full range reproduces the reference exactly
    means = (errors @ mult) / nodes
    return errors, means


@dataclass(frozen=True)
class ThresholdResult:
    """Smallest truncation radius meeting a worst-case error tolerance."""

    min_neighbors: int
    epsilon: float
    max_error_per_m: np.ndarray  # worst error over targets, index M-1

    def __post_init__(self):
        tail = self.max_error_per_m[self.min_neighbors - 1 :]
        if np.any(tail > self.epsilon):
            raise ValueError("threshold does not dominate its suffix")


def accuracy_threshold(
    nodes: int, profile: CouplingProfile, epsilon: float, window: TimeWindow
) -> ThresholdResult:
    """Minimal M such that the worst-case truncation error stays at or below
    epsilon for every radius from M up to all-node interaction.

    The per-radius worst errors are returned alongside so the monotonicity
    of the sweep can be audited.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    errors, _ = error_map(nodes, profile, window)
    worst = errors.max(axis=1)
    failing = np.nonzero(worst > epsilon)[0]
    m_star = int(failing.max()) + 2 if failing.size else 1
    return ThresholdResult(
        min_neighbors=m_star, epsilon=epsilon, max_error_per_m=worst
    )
