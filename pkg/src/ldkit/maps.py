"""Phase-space grids of energy, ell(E), gradient norm B, and temporal LD.

Grids are row-major with the momentum index outermost (p outer, q inner),
matching the CSV layout. Node computations are independent and produce
bitwise-identical results regardless of the worker count.

Output formats:

* landscape CSV: header ``E,ell[,dell_dE]``, 17 significant digits;
* grid CSV (long format): header ``q,p,value,mask``, row-major node order,
  masked nodes carry an empty value field and mask 0;
* PGM: binary ``P5``, 16-bit big-endian, nq x np, linear min-max scaling,
  masked nodes map to 0.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import numpy as np

from .errors import LdkitError
from .geometric import ell
from .quadrature import QuadratureConfig
from .temporal import IntegratorConfig, temporal_ld

_FMT = "{:.17g}"


@dataclass(frozen=True)
class GridSpec:
    q_lo: float
    q_hi: float
    p_lo: float
    p_hi: float
    nq: int
    np: int

    def __post_init__(self):
        if not (self.q_lo < self.q_hi and self.p_lo < self.p_hi):
            raise ValueError("grid bounds must satisfy lo < hi")
        if self.nq < 2 or self.np < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    def q_nodes(self):
        return np.linspace(self.q_lo, self.q_hi, self.nq)

    def p_nodes(self):
        return np.linspace(self.p_lo, self.p_hi, self.np)


@dataclass
class GridMap:
    spec: GridSpec
    values: np.ndarray  # shape (np, nq)
    quantity: str
    mask: np.ndarray = field(default=None)  # True where valid

    def __post_init__(self):
        if self.mask is None:
            self.mask = np.ones_like(self.values, dtype=bool)


def _energy_grid(model, spec):
    qs = spec.q_nodes()
    ps = spec.p_nodes()
    Q, P = np.meshgrid(qs, ps)
    return np.asarray(model.energy(Q, P), dtype=np.float64)


def energy_map(model, spec):
    """Per-node energy values; the trivial base map."""
    return GridMap(spec, _energy_grid(model, spec), "energy")


def ell_map(model, spec, trunc=None, cfg=None, table=False, table_size=4096,
            threads=None):
    """Per-node ell(E(q, p)) over the grid.

    ``table=True`` precomputes ell on a dense 1-D energy grid (the separatrix
    energy inserted as a knot) and interpolates monotone-cubically per node;
    nodes at equal energy get equal values in either mode. Per-node failures
    are masked, not raised.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    E = _energy_grid(model, spec)
    values = np.full(E.shape, math.nan)
    mask = np.zeros(E.shape, dtype=bool)

    if table:
        values, mask = _ell_by_table(model, E, trunc, cfg, table_size)
        return GridMap(spec, values, "ell", mask)

    cache = {}

    def row(jp):
        for iq in range(spec.nq):
            e = float(E[jp, iq])
            hit = cache.get(e)
            if hit is None:
                try:
                    hit = (ell(model, e, trunc, cfg), True)
                except LdkitError:
                    hit = (math.nan, False)
                cache[e] = hit
            values[jp, iq], mask[jp, iq] = hit

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(row, range(spec.np)))
    else:
        for jp in range(spec.np):
            row(jp)
    return GridMap(spec, values, "ell", mask)


def _ell_by_table(model, E, trunc, cfg, table_size):
    from scipy.interpolate import PchipInterpolator

    e_lo = float(np.nanmin(E))
    e_hi = float(np.nanmax(E))
    _, e_sx = model.critical_energies()
    if e_hi - e_lo < 1e-15:
        val = ell(model, e_lo, trunc, cfg)
        return np.full(E.shape, val), np.ones(E.shape, dtype=bool)
    knots = np.linspace(e_lo, e_hi, int(table_size))
    if math.isfinite(e_sx) and e_lo < e_sx < e_hi and not np.any(knots == e_sx):
        knots = np.sort(np.append(knots, e_sx))
    table = np.empty(knots.shape)
    ok = np.ones(knots.shape, dtype=bool)
    for i, e in enumerate(knots):
        try:
            table[i] = ell(model, float(e), trunc, cfg)
        except LdkitError:
            table[i] = math.nan
            ok[i] = False
    if not ok.all():
        knots, table = knots[ok], table[ok]
    interp = PchipInterpolator(knots, table, extrapolate=True)
    values = interp(E)
    return values, np.isfinite(values)


def temporal_map(model, spec, t, cfg=None, threads=None):
    """Per-node temporal LD total over the grid; failed nodes keep their
    partial value but are masked."""
    if cfg is None:
        cfg = IntegratorConfig()
    qs = spec.q_nodes()
    ps = spec.p_nodes()
    values = np.empty((spec.np, spec.nq))
    mask = np.ones((spec.np, spec.nq), dtype=bool)

    def row(jp):
        p = float(ps[jp])
        for iq in range(spec.nq):
            r = temporal_ld(model, (float(qs[iq]), p), t, cfg)
            values[jp, iq] = r.total
            mask[jp, iq] = r.ok

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(row, range(spec.np)))
    else:
        for jp in range(spec.np):
            row(jp)
    return GridMap(spec, values, "temporal", mask)


def b_map(ell_grid):
    """Norm of the finite-difference gradient of an ell grid.

    Central differences on interior nodes, one-sided on edges, using the
    mesh spacings; computed from the grid values themselves (no resampling).
    Nodes adjacent to masked nodes are masked.
    """
    if ell_grid.quantity != "ell":
        raise ValueError("b_map expects a grid with quantity='ell'")
    spec = ell_grid.spec
    dq = (spec.q_hi - spec.q_lo) / (spec.nq - 1)
    dp = (spec.p_hi - spec.p_lo) / (spec.np - 1)
    vals = np.where(ell_grid.mask, ell_grid.values, math.nan)
    gp, gq = np.gradient(vals, dp, dq)
    b = np.hypot(gq, gp)

    m = ell_grid.mask
    ok = m.copy()
    ok[1:, :] &= m[:-1, :]
    ok[:-1, :] &= m[1:, :]
    ok[:, 1:] &= m[:, :-1]
    ok[:, :-1] &= m[:, 1:]
    b = np.where(ok, b, math.nan)
    return GridMap(spec, b, "bnorm", ok)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def write_landscape_csv(landscape, path):
    with open(path, "w", newline="\n") as fh:
        if landscape.derivs is not None:
            fh.write("E,ell,dell_dE\n")
            for e, l, d in zip(landscape.energies, landscape.lengths,
                               landscape.derivs):
                fh.write(f"{_FMT.format(e)},{_FMT.format(l)},{_FMT.format(d)}\n")
        else:
            fh.write("E,ell\n")
            for e, l in zip(landscape.energies, landscape.lengths):
                fh.write(f"{_FMT.format(e)},{_FMT.format(l)}\n")


def read_landscape_csv(path):
    from .geometric import Landscape

    with open(path, "r") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    energies = np.array([float(r[0]) for r in rows])
    lengths = np.array([float(r[1]) for r in rows])
    derivs = None
    if len(header) > 2:
        derivs = np.array([float(r[2]) for r in rows])
    return Landscape(energies, lengths, derivs)


def write_grid_csv(grid, path):
    qs = grid.spec.q_nodes()
    ps = grid.spec.p_nodes()
    with open(path, "w", newline="\n") as fh:
        fh.write("q,p,value,mask\n")
        for jp in range(grid.spec.np):
            p_str = _FMT.format(ps[jp])
            for iq in range(grid.spec.nq):
                if grid.mask[jp, iq]:
                    fh.write(f"{_FMT.format(qs[iq])},{p_str},"
                             f"{_FMT.format(grid.values[jp, iq])},1\n")
                else:
                    fh.write(f"{_FMT.format(qs[iq])},{p_str},,0\n")


def read_grid_csv(path, quantity="ell"):
    with open(path, "r") as fh:
        header = fh.readline()
        if header.strip() != "q,p,value,mask":
            raise ValueError(f"{path}: not a grid CSV (header {header!r})")
        qs = []
        ps = []
        vals = []
        masks = []
        for line in fh:
            if not line.strip():
                continue
            q, p, v, m = line.rstrip("\n").split(",")
            qs.append(float(q))
            ps.append(float(p))
            masks.append(m == "1")
            vals.append(float(v) if v else math.nan)
    qs = np.array(qs)
    ps = np.array(ps)
    nq = 1
    while nq < len(qs) and qs[nq] != qs[0]:
        nq += 1
    if len(qs) % nq:
        raise ValueError(f"{path}: ragged grid ({len(qs)} rows, row length {nq})")
    npts = len(qs) // nq
    spec = GridSpec(qs[0], qs[nq - 1], ps[0], ps[-1], nq, npts)
    values = np.array(vals).reshape(npts, nq)
    mask = np.array(masks).reshape(npts, nq)
    return GridMap(spec, values, quantity, mask)


def write_pgm(grid, path, scale=None):
    """16-bit binary PGM preview; ``scale`` optionally pins (vmin, vmax)."""
    valid = grid.mask & np.isfinite(grid.values)
    if scale is None:
        if valid.any():
            vmin = float(grid.values[valid].min())
            vmax = float(grid.values[valid].max())
        else:
            vmin, vmax = 0.0, 1.0
    else:
        vmin, vmax = map(float, scale)
    span = vmax - vmin if vmax > vmin else 1.0
    norm = np.clip((grid.values - vmin) / span, 0.0, 1.0)
    pix = np.where(valid, np.round(norm * 65535.0), 0.0).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{grid.spec.nq} {grid.spec.np}\n65535\n".encode("ascii"))
        fh.write(pix.tobytes())
