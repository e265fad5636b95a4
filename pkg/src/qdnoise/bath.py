"""Bath correlation matrices Gamma(+-) and Delta(+-) for the dot array.

The 3D acoustic-phonon mode sum is reduced to

  * a resonant-shell angular integral at |q| = qbar = E / (hbar c_s) for the
    dissipative matrices Gamma (energy-conserving delta function), and
  * a principal-value radial integral, regularized by the Gaussian in-plane
    form factor, for the coherent renormalization matrices Delta,

after performing the azimuthal average of |M_par|^2 analytically.  All
matrices are returned in meV.  A seeded Monte-Carlo shell sampler with no
analytic reduction serves as the independent oracle for Gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .constants import HBAR
from .errors import NumericsError
from .model import (
    ArrayGeometry,
    MaterialParams,
    Wavevector,
    bose_occupation,
    coupling_g,
    oscillator_length,
    shell_wavevector,
    validate_device,
    well_form_factor,
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

#: emission carries the spontaneous term, absorption does not
_THETA = {"+": 0.0, "-": 1.0}


def _check_eta(eta: str) -> None:
    if eta not in _THETA:
        raise ValueError(f"eta must be '+' or '-', got {eta!r}")


def _panels(q: float, dz: float, well_width: float, gauss_strength: float) -> np.ndarray:
    """Panel edges on mu = cos(theta) in [0, 1] for the shell integrand.

    Edges track the Gaussian in-plane suppression (sharply peaked at mu = 1
    when q l >> 1) and cap panel width at one oscillation period of the
    cos(q mu dz) and M_z(q mu)^2 factors.
    """
    edges = {0.0, 1.0}
    c = 1.0
    while c < gauss_strength:
        mu = math.sqrt(max(0.0, 1.0 - c / gauss_strength))
        if mu <= 0.0 or mu >= 1.0:
            break
        edges.add(mu)
        c *= 2.0
    base = sorted(edges)

    freq = q * (abs(dz) + well_width)  # rad per unit mu, conservative
    width_cap = 1.0 if freq < 2.0 * math.pi else 2.0 * math.pi / freq

    out = []
    for lo, hi in zip(base[:-1], base[1:]):
        n_split = max(1, math.ceil((hi - lo) / width_cap))
        out.extend(np.linspace(lo, hi, n_split + 1)[:-1])
    out.append(1.0)
    return np.asarray(out)


def angular_overlap_integral(
    q: float,
    separation: float,
    osc_length: float,
    well_width: float,
    rtol: float = 1e-8,
) -> float:
    """Direction-sphere integral of the squared coupling form factors.

    B(q, dz) = integral over the sphere of |M_par|^2 M_z^2 exp(i q_z dz),
    with the azimuthal average done analytically:

      B = pi q^2 l^2 * int_0^1 (1-mu^2) exp(-q^2 l^2 (1-mu^2)/2)
                                M_z(q mu)^2 cos(q mu dz) dmu

    Evaluated by composite 16-point Gauss-Legendre panels with one halving
    refinement; the two levels must agree to rtol or a NumericsError with
    diagnostics is raised.
    """
    if q == 0.0:
        return 0.0
    x0 = 0.5 * (q * osc_length) ** 2

    def integrand(mu: np.ndarray) -> np.ndarray:
        damp = (1.0 - mu**2) * np.exp(-x0 * (1.0 - mu**2))
        mz = well_form_factor(q * mu, well_width)
        return damp * mz**2 * np.cos(q * mu * separation)

    def level(edges: np.ndarray) -> tuple[float, float]:
        lo, hi = edges[:-1], edges[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = integrand(nodes.ravel()).reshape(nodes.shape)
        weighted = vals * _GL_WEIGHTS[None, :] * half[:, None]
        return float(weighted.sum()), float(np.abs(weighted).sum())

    edges1 = _panels(q, separation, well_width, x0)
    edges2 = np.sort(np.concatenate([edges1, 0.5 * (edges1[:-1] + edges1[1:])]))
    coarse, _ = level(edges1)
    fine, abs_fine = level(edges2)

    err = abs(fine - coarse)
    if err > max(rtol * abs(fine), 1e-2 * rtol * abs_fine):
        raise NumericsError(
            "angular shell quadrature did not converge: "
            f"q={q} dz={separation} level1={coarse!r} level2={fine!r} "
            f"abs-scale={abs_fine!r} rtol={rtol}"
        )
    return math.pi * q**2 * osc_length**2 * fine


def _gamma_profile(geometry: ArrayGeometry, materials: MaterialParams, rtol: float) -> np.ndarray:
    """Gamma_{ii'} / (n + theta) as a function of dot separation k*a, k=0..N-1."""
    qbar = shell_wavevector(geometry.splitting, materials.sound_speed)
    length = oscillator_length(geometry.splitting, materials.effective_mass_ratio)
    rho = materials.mass_density_internal
    prefactor = materials.deformation_potential**2 * qbar**3 / (
        16.0 * math.pi**2 * rho * materials.sound_speed**2
    )
    return np.array(
        [
            prefactor
            * angular_overlap_integral(qbar, k * geometry.spacing, length, geometry.well_width, rtol)
            for k in range(geometry.n_dots)
        ]
    )


def _toeplitz(values: np.ndarray) -> np.ndarray:
    n = len(values)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return values[idx].astype(complex)


def gamma_matrix(
    eta: str,
    geometry: ArrayGeometry,
    materials: MaterialParams,
    temperature: float,
    *,
    rtol: float = 1e-8,
) -> np.ndarray:
    """Dissipative correlation matrix Gamma^(eta), N x N Hermitian PSD, meV.

    eta = '+' is phonon absorption (thermal factor n), eta = '-' emission
    (n + 1).  The quantization volume cancels exactly between the coupling
    normalization and the mode-sum measure.
    """
    _check_eta(eta)
    validate_device(geometry, materials)
    thermal = bose_occupation(geometry.splitting, temperature) + _THETA[eta]
    return thermal * _toeplitz(_gamma_profile(geometry, materials, rtol))


#: fixed substream granularity so results depend only on (seed, n_samples)
_MC_CHUNK = 100_000


def gamma_bruteforce_oracle(
    eta: str,
    geometry: ArrayGeometry,
    materials: MaterialParams,
    temperature: float,
    n_samples: int,
    *,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo evaluation of Gamma^(eta) with no analytic reduction.

    Samples the resonant sphere |q| = qbar uniformly, evaluates the per-dot
    coupling amplitudes directly, and averages the Gram products.  Returns
    (matrix, standard_error).  Samples are drawn from substreams spawned at a
    fixed granularity, so the result depends only on (seed, n_samples) and
    would not change under parallel chunk execution.
    """
    _check_eta(eta)
    validate_device(geometry, materials)
    if n_samples < 100_000:
        raise ValueError(f"n_samples must be >= 1e5 for a usable error estimate, got {n_samples}")

    qbar = shell_wavevector(geometry.splitting, materials.sound_speed)
    thermal = bose_occupation(geometry.splitting, temperature) + _THETA[eta]
    prefactor = thermal * qbar**2 / (2.0 * math.pi * HBAR * materials.sound_speed)

    n = geometry.n_dots
    sum1 = np.zeros((n, n), dtype=complex)
    sum2_re = np.zeros((n, n))
    sum2_im = np.zeros((n, n))

    n_chunks = math.ceil(n_samples / _MC_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    done = 0
    for stream in streams:
        m = min(_MC_CHUNK, n_samples - done)
        done += m
        rng = np.random.default_rng(stream)
        mu = rng.uniform(-1.0, 1.0, m)
        phi = rng.uniform(0.0, 2.0 * math.pi, m)
        sin_theta = np.sqrt(1.0 - mu**2)
        q = Wavevector(qbar * sin_theta * np.cos(phi), qbar * sin_theta * np.sin(phi), qbar * mu)
        amps = np.stack([coupling_g(i, q, geometry, materials) for i in range(1, n + 1)])
        prod = amps[:, None, :] * amps.conj()[None, :, :]
        sum1 += prod.sum(axis=-1)
        sum2_re += (prod.real**2).sum(axis=-1)
        sum2_im += (prod.imag**2).sum(axis=-1)

    mean = sum1 / n_samples
    var_re = np.maximum(sum2_re / n_samples - mean.real**2, 0.0)
    var_im = np.maximum(sum2_im / n_samples - mean.imag**2, 0.0)
    stderr = prefactor * np.sqrt((var_re + var_im) / n_samples)
    return prefactor * mean, stderr


def _delta_profile(
    geometry: ArrayGeometry,
    materials: MaterialParams,
    cutoff_multiplier: float,
    rtol: float,
    window_fraction: float,
) -> np.ndarray:
    """Delta_{ii'} / (n + theta) per dot separation, via the radial PV integral."""
    qbar = shell_wavevector(geometry.splitting, materials.sound_speed)
    length = oscillator_length(geometry.splitting, materials.effective_mass_ratio)
    rho = materials.mass_density_internal
    scale = materials.deformation_potential**2 / (16.0 * math.pi**3 * rho * materials.sound_speed**2)
    q_max = cutoff_multiplier * qbar
    inner_rtol = min(rtol * 1e-2, 1e-9)

    vals = []
    for k in range(geometry.n_dots):
        dz = k * geometry.spacing

        def radial(q: float) -> float:
            if q <= 0.0:
                return 0.0
            return q**3 * angular_overlap_integral(q, dz, length, geometry.well_width, inner_rtol)

        vals.append(scale * _pv_integral(radial, qbar, q_max, rtol, window_fraction))
    return np.asarray(vals)


def _pv_integral(
    numerator,
    qbar: float,
    q_max: float,
    rtol: float,
    window_fraction: float,
) -> float:
    """P int_0^qmax numerator(q) / (qbar - q) dq.

    Symmetric-window singularity subtraction: on [qbar-w, qbar+w] integrate
    (F(q) - F(qbar)) / (qbar - q); the companion analytic term
    F(qbar) ln(w/w) vanishes for the symmetric window.  The window-halving
    self-check guards the subtraction.
    """

    def run(window: float) -> float:
        f_res = numerator(qbar)
        h = 1e-5 * qbar
        df_res = (numerator(qbar + h) - numerator(qbar - h)) / (2.0 * h)

        def outer(q: float) -> float:
            return numerator(q) / (qbar - q)

        def regular(q: float) -> float:
            if abs(q - qbar) < 1e-9 * qbar:
                return -df_res
            return (numerator(q) - f_res) / (qbar - q)

        abs_floor = 1e-12 * abs(f_res) * max(qbar, 1.0) + 1e-300
        total = 0.0
        for fn, lo, hi, pts in (
            (outer, 0.0, qbar - window, None),
            (regular, qbar - window, qbar + window, [qbar]),
            (outer, qbar + window, q_max, None),
        ):
            val, abserr, info, *rest = quad(
                fn, lo, hi, points=pts, limit=800, epsabs=abs_floor, epsrel=rtol, full_output=1
            )
            if rest:
                raise NumericsError(
                    f"radial PV quadrature failed on [{lo}, {hi}]: {rest[0]}"
                )
            if abserr > max(10.0 * rtol * abs(val), 1e3 * abs_floor):
                raise NumericsError(
                    "radial PV quadrature error estimate too large on "
                    f"[{lo}, {hi}]: value={val!r} abserr={abserr!r} rtol={rtol}"
                )
            total += val
        return total

    window = window_fraction * qbar
    full = run(window)
    halved = run(0.5 * window)
    scale = abs(full) + abs(halved)
    if scale > 0 and abs(full - halved) > max(1e-6 * scale, 1e-12):
        raise NumericsError(
            "PV window-halving check failed: "
            f"I(w)={full!r} I(w/2)={halved!r} window={window!r}"
        )
    return halved


def delta_matrix(
    eta: str,
    geometry: ArrayGeometry,
    materials: MaterialParams,
    temperature: float,
    cutoff_multiplier: float = 10.0,
    *,
    rtol: float = 1e-8,
    window_fraction: float = 0.05,
) -> np.ndarray:
    """Coherent renormalization matrix Delta^(eta), N x N Hermitian, meV.

    The radial integration extends to cutoff_multiplier * qbar; the Gaussian
    in-plane form factor makes the tail fall off faster than q^-5, so any
    cutoff >= 5 is converged well below 1e-6 relative.
    """
    _check_eta(eta)
    validate_device(geometry, materials)
    if cutoff_multiplier < 5.0:
        raise ValueError(f"cutoff_multiplier must be >= 5, got {cutoff_multiplier}")
    thermal = bose_occupation(geometry.splitting, temperature) + _THETA[eta]
    return thermal * _toeplitz(
        _delta_profile(geometry, materials, cutoff_multiplier, rtol, window_fraction)
    )


def single_dot_rate(
    splitting: float,
    geometry: ArrayGeometry,
    materials: MaterialParams,
    temperature: float,
    *,
    rtol: float = 1e-8,
) -> float:
    """Total (emission plus absorption) scattering rate of one dot, ps^-1.

    Defined as 2 (Gamma+_11 + Gamma-_11) / hbar, the population-relaxation
    rate of a single excited dot under the register dissipator.
    """
    if not 0.0 < splitting < materials.lo_phonon_energy:
        raise ValueError(
            f"splitting must lie in (0, {materials.lo_phonon_energy}) meV, got {splitting}"
        )
    single = ArrayGeometry(
        n_dots=1, well_width=geometry.well_width, splitting=splitting, spacing=0.0
    )
    base = _gamma_profile(single, materials, rtol)[0]
    n_bose = bose_occupation(splitting, temperature)
    return 2.0 * (2.0 * n_bose + 1.0) * base / HBAR


@dataclass(frozen=True)
class CorrelationSet:
    """The four bath correlation matrices plus the device they belong to."""

    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    geometry: ArrayGeometry
    materials: MaterialParams
    temperature: float

    @classmethod
    def compute(
        cls,
        geometry: ArrayGeometry,
        materials: MaterialParams,
        temperature: float,
        *,
        cutoff_multiplier: float = 10.0,
        rtol: float = 1e-8,
        window_fraction: float = 0.05,
    ) -> "CorrelationSet":
        validate_device(geometry, materials)
        if temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {temperature}")
        if cutoff_multiplier < 5.0:
            raise ValueError(f"cutoff_multiplier must be >= 5, got {cutoff_multiplier}")
        n_bose = bose_occupation(geometry.splitting, temperature)
        gamma_base = _toeplitz(_gamma_profile(geometry, materials, rtol))
        delta_base = _toeplitz(
            _delta_profile(geometry, materials, cutoff_multiplier, rtol, window_fraction)
        )
        out = cls(
            gamma_plus=n_bose * gamma_base,
            gamma_minus=(n_bose + 1.0) * gamma_base,
            delta_plus=n_bose * delta_base,
            delta_minus=(n_bose + 1.0) * delta_base,
            geometry=geometry,
            materials=materials,
            temperature=temperature,
        )
        out.validate()
        return out

    def validate(self, *, hermiticity_rtol: float = 1e-12, psd_rtol: float = 1e-10) -> None:
        """Raise NumericsError if any structural invariant is violated."""
        for name in ("gamma_plus", "gamma_minus", "delta_plus", "delta_minus"):
            m = getattr(self, name)
            scale = np.linalg.norm(m) or 1.0
            if np.linalg.norm(m - m.conj().T) > hermiticity_rtol * scale:
                raise NumericsError(f"{name} is not Hermitian to {hermiticity_rtol} relative")
        for name in ("gamma_plus", "gamma_minus"):
            m = getattr(self, name)
            diag = np.diag(m)
            if np.any(np.abs(diag.imag) > 1e-14) or np.any(diag.real < 0):
                raise NumericsError(f"{name} diagonal must be real and nonnegative")
            scale = np.linalg.norm(m)
            min_eig = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
            if min_eig < -psd_rtol * max(scale, 1e-300):
                raise NumericsError(
                    f"{name} is not PSD: min eigenvalue {min_eig!r} at norm {scale!r}"
                )
        if np.any(np.diag(self.gamma_minus).real < np.diag(self.gamma_plus).real - 1e-14):
            raise NumericsError("emission diagonal must dominate absorption diagonal")
