"""Power-law divergence rates of |d ell/dE| near critical energies.

A geometric ladder of distances eps = |E - E_c| is walked toward the
critical energy (separatrix or elliptic minimum), |d ell/dE| is sampled with
a step proportional to eps, and the exponent comes from ordinary least
squares on log-log points.

The differencing step is h = 1e-3 * eps. Quadrature noise sits near
1e-10 * ell, so a smaller step (1e-6 * eps reaches the 1e-12 floor at the
bottom of the default ladder) would amplify that noise past the local
derivative signal; at 1e-3 * eps the central-difference truncation error is
still only ~1e-7 relative for an inverse-sqrt divergence.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFit, EmptyLadder, LdkitError
from .geometric import dell_dE
from .quadrature import QuadratureConfig

CRITICALS = ("separatrix", "elliptic")
SIDES = ("below", "above")


@dataclass(frozen=True)
class RateSample:
    eps: float
    deriv_abs: float


@dataclass
class RateLadder:
    samples: list
    n_failed: int


@dataclass
class RateFit:
    exponent: float
    intercept: float
    r_squared: float
    side: str = ""
    critical: str = ""
    n_samples: int = 0


def _rate_config():
    return QuadratureConfig()


def sample_rates(model, critical, side, eps_hi=1e-2, eps_lo=1e-6,
                 pts_per_decade=25, trunc=None, cfg=None):
    """|d ell/dE| on a geometric eps ladder approaching a critical energy.

    Failed differences (straddles, domain errors, non-finite values) are
    omitted and counted in ``n_failed``.
    """
    if not 0.0 < eps_lo < eps_hi:
        raise ValueError("need 0 < eps_lo < eps_hi")
    if pts_per_decade < 3:
        raise ValueError("need at least 3 points per decade")
    if critical not in CRITICALS:
        raise ValueError(f"critical must be one of {CRITICALS}")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")

    e_min, e_sx = model.critical_energies()
    if critical == "separatrix":
        if not math.isfinite(e_sx):
            raise ValueError(f"{model.name} has no separatrix energy")
        e_c = e_sx
    else:
        if not math.isfinite(e_min):
            raise ValueError(f"{model.name} has no elliptic minimum energy")
        if side == "below":
            raise ValueError("no level curves below the elliptic minimum")
        e_c = e_min
    sign = -1.0 if side == "below" else 1.0

    if cfg is None:
        cfg = _rate_config()

    decades = math.log10(eps_hi / eps_lo)
    n = int(round(pts_per_decade * decades)) + 1
    eps = np.geomspace(eps_hi, eps_lo, n)

    samples = []
    n_failed = 0
    for e in eps:
        E = e_c + sign * float(e)
        h = max(1e-3 * float(e), 1e-12)
        try:
            d = abs(dell_dE(model, E, trunc, h=h, cfg=cfg))
        except LdkitError:
            n_failed += 1
            continue
        if not math.isfinite(d) or d <= 0.0:
            n_failed += 1
            continue
        samples.append(RateSample(float(e), d))
    if not samples:
        raise EmptyLadder(f"{model.name}: every {critical}/{side} sample failed")
    return RateLadder(samples, n_failed)


def fit_power_law(samples, critical="", side=""):
    """OLS fit of log(deriv_abs) against log(eps)."""
    if len(samples) < 5:
        raise ValueError("need at least 5 samples to fit")
    eps = np.array([s.eps for s in samples])
    dv = np.array([s.deriv_abs for s in samples])
    if math.log10(eps.max() / eps.min()) < 1.0:
        raise DegenerateFit("eps values span less than one decade")
    x = np.log(eps)
    y = np.log(dv)
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = y - (slope * x + intercept)
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / sst if sst > 0.0 else 1.0
    return RateFit(slope, intercept, r2, side=side, critical=critical,
                   n_samples=len(samples))


def rate_report(model, trunc=None, cfg=None, eps_hi=1e-2, eps_lo=1e-6,
                pts_per_decade=25):
    """Fits for every critical-energy approach the model supports.

    Returns a JSON-ready dict; entries that fail carry an ``error`` field
    instead of fit numbers (partial reports are allowed).
    """
    e_min, e_sx = model.critical_energies()
    wanted = []
    if math.isfinite(e_sx):
        wanted.append(("separatrix", "below"))
        wanted.append(("separatrix", "above"))
    if math.isfinite(e_min):
        wanted.append(("elliptic", "above"))

    fits = []
    for critical, side in wanted:
        entry = {"critical": critical, "side": side}
        try:
            ladder = sample_rates(model, critical, side, eps_hi, eps_lo,
                                  pts_per_decade, trunc, cfg)
            fit = fit_power_law(ladder.samples, critical=critical, side=side)
        except (LdkitError, ValueError) as exc:
            entry["error"] = str(exc)
        else:
            entry.update(
                exponent=fit.exponent,
                intercept=float(fit.intercept),
                r2=fit.r_squared,
                n_samples=fit.n_samples,
            )
        fits.append(entry)
    return {
        "model": model.name,
        "truncation": None if trunc is None else trunc.a,
        "fits": fits,
    }
