"""Temporal Lagrangian descriptors: trajectory arc length over a time window.

The flow is integrated with an adaptive Dormand-Prince 5(4) stepper carrying
the arc length as an augmented state component, so the step-size control
bounds the error of the descriptor itself. The forward piece integrates the
vector field from the initial condition over [0, t]; the backward piece
integrates the time-reversed field over the same window. No deviation
vectors are involved anywhere: the descriptor is orbit-based only.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels as K

STATUS_LABELS = {
    K.STATUS_OK: "ok",
    K.STATUS_BLOWUP: "blow-up",
    K.STATUS_STEP_LIMIT: "step-limit",
}


@dataclass(frozen=True)
class FlowState:
    """Phase-space point plus accumulated arc length (augmented component)."""

    q: float
    p: float
    s: float = 0.0


@dataclass
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = np.inf
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")


@dataclass
class LdResult:
    total: float
    plus: float
    minus: float
    status_plus: int = K.STATUS_OK
    status_minus: int = K.STATUS_OK

    @property
    def ok(self):
        return self.status_plus == K.STATUS_OK and self.status_minus == K.STATUS_OK


@dataclass(frozen=True)
class LineSpec:
    """One-dimensional sweep: hold ``fixed`` ('q' or 'p') at ``value`` and vary
    the other coordinate over [lo, hi] with n samples."""

    fixed: str
    value: float
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.fixed not in ("q", "p"):
            raise ValueError("fixed coordinate must be 'q' or 'p'")
        if self.n < 2:
            raise ValueError("need at least two samples")


@dataclass
class LdLine:
    coords: np.ndarray
    total: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    status: np.ndarray


def vector_field(model, q, p):
    """(dq/dt, dp/dt) of the model at (q, p)."""
    return model.vector_field(q, p)


def _one_sided(model, q0, p0, t, cfg, reverse):
    code = model.kernel_code
    if code is not None:
        s, _, _, status, _ = K.dp45_arclength(
            code, float(q0), float(p0), float(t),
            cfg.rel_tol, cfg.abs_tol, cfg.max_step, cfg.max_steps, reverse,
        )
        return s, status
    sgn = -1.0 if reverse else 1.0

    def f(q, p):
        fq, fp = model.vector_field(q, p)
        return sgn * fq, sgn * fp

    s, _, _, status, _ = K.dp45_callable(
        f, float(q0), float(p0), float(t),
        cfg.rel_tol, cfg.abs_tol, cfg.max_step, cfg.max_steps,
    )
    return s, status


def temporal_ld(model, x0, t, cfg=None):
    """Arc length of the trajectory through ``x0`` over the window [-t, t].

    Returns an :class:`LdResult` with the forward piece (over [0, t]), the
    backward piece (time-reversed field over [0, t]) and their sum. Blow-up
    (unbounded models) and step-limit conditions are flagged, not raised,
    and leave partial values in place.
    """
    if t <= 0.0:
        raise ValueError("horizon t must be positive")
    if cfg is None:
        cfg = IntegratorConfig()
    q0, p0 = float(x0[0]), float(x0[1])
    plus, st_p = _one_sided(model, q0, p0, t, cfg, reverse=False)
    minus, st_m = _one_sided(model, q0, p0, t, cfg, reverse=True)
    return LdResult(plus + minus, plus, minus, st_p, st_m)


def ld_landscape_line(model, line, t, cfg=None, threads=None):
    """Temporal LD swept along a coordinate line; deterministic point order."""
    if cfg is None:
        cfg = IntegratorConfig()
    coords = np.linspace(line.lo, line.hi, line.n)
    total = np.empty(line.n)
    plus = np.empty(line.n)
    minus = np.empty(line.n)
    status = np.zeros(line.n, dtype=np.int64)

    def work(i):
        c = float(coords[i])
        x0 = (line.value, c) if line.fixed == "q" else (c, line.value)
        r = temporal_ld(model, x0, t, cfg)
        total[i] = r.total
        plus[i] = r.plus
        minus[i] = r.minus
        status[i] = max(r.status_plus, r.status_minus)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(work, range(line.n)))
    else:
        for i in range(line.n):
            work(i)
    return LdLine(coords, total, plus, minus, status)
