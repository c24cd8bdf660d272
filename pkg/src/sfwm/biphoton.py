"""Two-photon spectral amplitude and time-domain wave packet.

For each two-photon detuning ``delta`` the Doppler-averaged cross and self
responses C(delta) and Z(delta) combine into the pair amplitude

    A(delta) = C(delta) * sinc(Z(delta)) * exp(i * Z(delta))

with the complex sinc(z) = sin(z)/z.  The delay-time wave packet is its
squared Fourier transform,

    G2(tau) = | (1/2pi) * integral d(delta) exp(-i*delta*tau) A(delta) |^2,

evaluated by direct trapezoidal quadrature on the spectral grid.  Narrowband
etalon filters multiply A by a single-pole amplitude response per etalon, so
the squared magnitude of each factor is a Lorentzian of the stated FWHM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, DomainError, GridTooNarrowError, UsageError
from .physics import (
    DEFAULT_QUADRATURE,
    DopplerQuadrature,
    DriveParams,
    MediumParams,
    _chi_pair_raw,
)
from .units import DEFAULT_UNITS, UnitSystem

_CHUNK = 256
_TAU_CHUNK = 64  # keeps the phase matrix of the Fourier sum under ~35 MB

# Default edge-decay requirement on |A| relative to its peak.
EDGE_DECAY_TOL = 1e-3


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform, symmetric detuning grid for the pair amplitude (Gamma units).

    The cross response falls off only as 1/delta out to the Doppler width, so
    the window must be much wider than the transparency feature it resolves;
    the default covers +-64 Gamma with a spacing fine enough for sub-MHz
    features.
    """

    half_width: float = 64.0
    count: int = 32768

    def __post_init__(self):
        if self.count < 1024:
            raise UsageError("spectral grid needs at least 1024 samples")
        if self.half_width <= 0:
            raise UsageError("half_width must be positive")

    @property
    def delta(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.count)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.count - 1)


@dataclass(eq=False)
class BiphotonAmplitude:
    """Complex pair amplitude A(delta) sampled on a spectral grid."""

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.size != self.grid.count:
            raise UsageError("amplitude length does not match grid count")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("amplitude contains non-finite values")


@dataclass(frozen=True)
class EtalonChain:
    """Series of Lorentzian-line etalon filters, ordinary-frequency units."""

    fwhm_hz: tuple[float, ...] = (45e6, 60e6)
    centers_hz: tuple[float, ...] = (0.0, 0.0)

    def __post_init__(self):
        if len(self.fwhm_hz) != len(self.centers_hz):
            raise UsageError("need one center per etalon FWHM")
        if any(f <= 0 for f in self.fwhm_hz):
            raise UsageError("etalon FWHM must be positive")


DEFAULT_ETALONS = EtalonChain()


@dataclass(eq=False)
class WavePacket:
    """Unnormalized two-photon correlation G2 on a uniform delay grid (ns)."""

    tau_ns: np.ndarray
    g2: np.ndarray
    bin_ns: float

    def __post_init__(self):
        self.tau_ns = np.asarray(self.tau_ns, dtype=float)
        self.g2 = np.asarray(self.g2, dtype=float)
        if self.tau_ns.size != self.g2.size:
            raise UsageError("tau and g2 lengths differ")
        if self.tau_ns.size >= 2:
            steps = np.diff(self.tau_ns)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-9):
                raise UsageError("delay grid must be uniform")
        if np.any(self.g2 < 0):
            raise UsageError("correlation values must be nonnegative")


def complex_sinc(z):
    """sin(z)/z for complex z, with the removable singularity handled by series.

    Below |z| = 1e-4 the truncated series 1 - z^2/6 + z^4/120 is used to avoid
    cancellation; its error there is below 1e-29.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    out = np.where(small, 1.0 - z * z / 6.0 + z**4 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return complex(out)
    return out


def averaged_susceptibilities(
    grid: SpectralGrid,
    m: MediumParams,
    d: DriveParams,
    q: DopplerQuadrature = DEFAULT_QUADRATURE,
) -> tuple[np.ndarray, np.ndarray]:
    """Doppler-averaged cross and self responses on the spectral grid.

    Returns (cross_avg, self_avg).  The self average is what the sinc and
    phase factors act on; it is exactly linear in the Stokes optical depth.
    """
    deltas = grid.delta
    nodes = q.nodes(m)[None, :]
    w = q.weights(m)
    cross = np.empty(deltas.size, dtype=complex)
    self_ = np.empty(deltas.size, dtype=complex)
    for i in range(0, deltas.size, _CHUNK):
        block = deltas[i : i + _CHUNK, None]
        cross_block, self_block = _chi_pair_raw(block, nodes, m, d)
        cross[i : i + _CHUNK] = cross_block @ w
        self_[i : i + _CHUNK] = self_block @ w
    return cross, self_


def spectral_amplitude(
    grid: SpectralGrid,
    m: MediumParams,
    d: DriveParams,
    q: DopplerQuadrature = DEFAULT_QUADRATURE,
    edge_tol: float = EDGE_DECAY_TOL,
) -> BiphotonAmplitude:
    """Assemble the pair amplitude A = C * sinc(Z) * exp(iZ) on the grid.

    Raises GridTooNarrowError if the amplitude has not decayed below
    ``edge_tol`` of its peak at the grid edges (a zero amplitude, as with
    omega_p = 0, passes trivially).
    """
    cross, self_ = averaged_susceptibilities(grid, m, d, q)
    values = cross * complex_sinc(self_) * np.exp(1j * self_)
    peak = float(np.abs(values).max())
    if peak > 0.0:
        edge = max(abs(values[0]), abs(values[-1])) / peak
        if edge > edge_tol:
            raise GridTooNarrowError(
                f"|A| at the grid edge is {edge:.3e} of its peak "
                f"(limit {edge_tol:.1e}); increase SpectralGrid.half_width"
            )
    return BiphotonAmplitude(grid, values)


def apply_etalons(
    a: BiphotonAmplitude,
    e: EtalonChain = DEFAULT_ETALONS,
    units: UnitSystem = DEFAULT_UNITS,
    mode: str = "amplitude",
) -> BiphotonAmplitude:
    """Filter the amplitude through the etalon chain.

    In the default "amplitude" mode each etalon contributes the causal
    single-pole response 1 / (1 - 2i*(f - center)/FWHM), whose squared
    magnitude is a unit-peak Lorentzian of the given FWHM.  The "intensity"
    mode instead scales |A|^2 by the same Lorentzians without touching the
    phase (a zero-phase filter); physical filters act on the field, so
    amplitude mode is the default.  Filtering only sharpens the edge decay,
    so no recheck is needed.
    """
    if mode not in ("amplitude", "intensity"):
        raise UsageError(f"unknown etalon mode {mode!r}")
    f_hz = units.frequency_to_hz(a.grid.delta)
    values = a.values.copy()
    for fwhm, center in zip(e.fwhm_hz, e.centers_hz):
        lorentzian_pole = 1.0 - 2j * (f_hz - center) / fwhm
        if mode == "amplitude":
            values = values / lorentzian_pole
        else:
            values = values / np.abs(lorentzian_pole)
    return BiphotonAmplitude(a.grid, values)


def wavepacket(
    a: BiphotonAmplitude,
    tau_ns,
    onset_ns: float = 0.0,
    units: UnitSystem = DEFAULT_UNITS,
) -> WavePacket:
    """Fourier-synthesize G2 on a uniform delay grid (ns).

    ``onset_ns`` shifts the packet to later delays, standing in for the fixed
    instrumental delay between the trigger and the partner photon; samples
    before the onset probe the (essentially empty) negative-delay branch.

    The direct quadrature is valid only while one grid step of the spectral
    grid cannot wind through a full phase turn over the delay span; otherwise
    an AliasingError is raised.
    """
    tau_ns = np.asarray(tau_ns, dtype=float)
    if tau_ns.size < 2:
        raise UsageError("delay grid needs at least two samples")
    steps = np.diff(tau_ns)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9):
        raise UsageError("delay grid must be uniform and increasing")
    span = units.time_from_ns(float(tau_ns[-1] - tau_ns[0]))
    if a.grid.spacing * span > 2.0 * np.pi:
        raise AliasingError(
            f"spectral spacing {a.grid.spacing:.3e} Gamma cannot support a "
            f"{tau_ns[-1] - tau_ns[0]:.0f} ns delay span; use more samples"
        )

    tau = units.time_from_ns(tau_ns - onset_ns)
    deltas = a.grid.delta
    w = np.full(deltas.size, a.grid.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    weighted = w * a.values / (2.0 * np.pi)

    g2 = np.empty(tau.size)
    for i in range(0, tau.size, _TAU_CHUNK):
        phases = np.exp(-1j * np.outer(deltas, tau[i : i + _TAU_CHUNK]))
        g2[i : i + _TAU_CHUNK] = np.abs(weighted @ phases) ** 2
    return WavePacket(tau_ns, g2, float(steps[0]))


def wavepacket_area(w: WavePacket, baseline: float = 0.0) -> float:
    """Trapezoidal integral of g2 over delay, minus an optional flat baseline.

    Proportional to the pair generation rate for rate-normalized packets.
    """
    return float(np.trapezoid(w.g2 - baseline, w.tau_ns))


def rise_time_convolve(w: WavePacket, rc_ns: float = 35.0) -> WavePacket:
    """Convolve with the causal detector response (1/rc)*exp(-t/rc), t >= 0.

    The discrete kernel is normalized to unit sum, so the packet area is
    preserved up to truncation of the far tail.  A response time below the
    bin width collapses the kernel to a single tap, leaving the packet
    unchanged; meaningful smearing needs bin_ns < rc_ns.
    """
    if rc_ns <= 0:
        raise UsageError("response time must be positive")
    t = np.arange(0.0, 20.0 * rc_ns, w.bin_ns)
    if t.size == 0:
        t = np.zeros(1)
    kernel = np.exp(-t / rc_ns)
    kernel /= kernel.sum()
    smeared = np.convolve(w.g2, kernel)[: w.g2.size]
    return WavePacket(w.tau_ns, smeared, w.bin_ns)
