"""Level-curve arc length ell(E), its energy derivative, and landscapes.

``ell`` assembles the full level-curve length from per-interval quadrature,
applying the model's symmetry multiplier. ``dell_dE`` central-differences it
with a step that shrinks with the distance to the separatrix energy, so the
divergence of the derivative near critical energies can be sampled without
differencing across the cusp.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import StraddlesCritical
from .quadrature import QuadratureConfig, arclength_interval


@dataclass
class EllInfo:
    est_error: float
    evaluations: int
    converged: bool


@dataclass
class Landscape:
    """Sampled (E, ell(E)) arrays; ``derivs`` holds NaN where the derivative is skipped."""

    energies: np.ndarray
    lengths: np.ndarray
    derivs: Optional[np.ndarray] = None
    converged: Optional[np.ndarray] = None


def _panels(model, E, dom):
    """Quadrature panels: domain intervals split at interior integrand breaks."""
    breaks = sorted(model.interior_breaks(E))
    for (lo, hi), (flo, fhi) in dom.pairs():
        cuts = [b for b in breaks if lo + 1e-12 < b < hi - 1e-12]
        if not cuts:
            yield (lo, hi), (flo, fhi)
            continue
        edges = [lo, *cuts, hi]
        for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
            fa = flo if i == 0 else model._endpoint_flag(a, E)
            fb = fhi if i == len(edges) - 2 else model._endpoint_flag(b, E)
            yield (a, b), (fa, fb)


def ell(model, E, trunc=None, cfg=None, full_output=False):
    """Total arc length of the level curve H = E.

    Returns the length alone, or ``(length, EllInfo)`` with
    ``full_output=True``. Unconverged quadrature is reported through the
    info flag, never raised.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    dom = model.domain(E, trunc)
    total = 0.0
    err = 0.0
    evals = 0
    ok = True
    for interval, flags in _panels(model, E, dom):
        r = arclength_interval(model, E, interval, flags, cfg)
        total += r.value
        err += r.est_error
        evals += r.evaluations
        ok = ok and r.converged
    total *= model.multiplier
    err *= model.multiplier
    if full_output:
        return total, EllInfo(err, evals, ok)
    return total


def _default_step(model, E):
    e_min, e_sx = model.critical_energies()
    if math.isfinite(e_sx):
        return max(1e-6 * abs(E - e_sx), 1e-12)
    # no separatrix: the quadrature-noise floor dominates tiny steps, so a
    # larger proximity scale conditions the difference better
    d = abs(E - e_min) if math.isfinite(e_min) else abs(E)
    return max(1e-3 * d, 1e-12)


def dell_dE(model, E, trunc=None, h=None, cfg=None):
    """Central difference d(ell)/dE with a proximity-scaled step.

    Raises :class:`StraddlesCritical` if E +/- h would cross the separatrix
    energy or fall below the elliptic minimum.
    """
    e_min, e_sx = model.critical_energies()
    if E == e_sx:
        raise StraddlesCritical("derivative undefined at the separatrix energy")
    if h is None:
        h = _default_step(model, E)
    if E - h <= e_min:
        raise StraddlesCritical(f"E-h={E - h} falls below e_min={e_min}")
    if math.isfinite(e_sx) and (E - e_sx) * (E + h - e_sx) <= 0.0:
        raise StraddlesCritical("step straddles the separatrix energy")
    if math.isfinite(e_sx) and (E - e_sx) * (E - h - e_sx) <= 0.0:
        raise StraddlesCritical("step straddles the separatrix energy")
    hi = ell(model, E + h, trunc, cfg)
    lo = ell(model, E - h, trunc, cfg)
    return (hi - lo) / (2.0 * h)


def landscape(model, e_lo, e_hi, n, trunc=None, with_derivs=False, cfg=None):
    """Uniform ell(E) samples on [e_lo, e_hi]; the separatrix energy is
    inserted as an explicit sample when it falls strictly inside the range."""
    e_min, e_sx = model.critical_energies()
    if not e_lo < e_hi:
        raise ValueError("need e_lo < e_hi")
    if n < 2:
        raise ValueError("need at least two samples")
    if e_lo < e_min:
        # let the model raise its own error for a clearly bad range
        model.domain(e_lo, trunc)

    energies = np.linspace(e_lo, e_hi, int(n))
    if math.isfinite(e_sx) and e_lo < e_sx < e_hi and not np.any(energies == e_sx):
        energies = np.sort(np.append(energies, e_sx))

    lengths = np.empty(energies.shape)
    converged = np.ones(energies.shape, dtype=bool)
    derivs = np.full(energies.shape, math.nan) if with_derivs else None
    for i, E in enumerate(energies):
        val, info = ell(model, float(E), trunc, cfg, full_output=True)
        lengths[i] = val
        converged[i] = info.converged
        if with_derivs and E != e_sx:
            try:
                derivs[i] = dell_dE(model, float(E), trunc, cfg=cfg)
            except StraddlesCritical:
                pass
    return Landscape(energies, lengths, derivs, converged)


def ray_arc_factor(lam, q):
    """Arc-length growth factor of level curves crossed by the ray p = lam*q.

    Continuous extension 0 at q = 0; equals pi/lam at q = pi. Numerically
    nondecreasing on [0, pi] for any positive slope, which is what makes
    level-curve lengths grow monotonically with energy inside the pendulum
    cat's eye.
    """
    if lam <= 0.0:
        raise ValueError("slope must be positive")
    q = np.asarray(q, dtype=np.float64)
    s = np.sin(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = q * np.sqrt(q * q * lam * lam + s * s) / (lam * lam * q + s)
    out = np.where(q == 0.0, 0.0, out)
    return out if out.ndim else float(out)
