"""Numerical checks of the local pregluing estimates near an interior node.

Model: two holomorphic polynomial maps ``f, g`` from a small disc into the
flat target ``C^N`` with ``f(0) = g(0) = p``, glued across the neck
``{xy = t}``, ``|t| = r^2``, which is parametrized by ``z = x`` on the
annulus ``r^2/eps1 < |z| < eps1``.  The exponential map is ``exp_p(v) = p + v``.

Fields are sampled on polar grids.  Radial derivatives use second-order
finite differences in ``s = log|z|``; angular derivatives are spectral
(FFT), which is exact for the trigonometric polynomials that arise here.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .surface_types import DomainError

DEFAULT_EPS1 = 0.5


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MODULI_THREADS", "1")))
    except ValueError:
        return 1


# -- grids and sampled maps -----------------------------------------------


@dataclass
class AnnulusGrid:
    """Polar grid on ``inner <= |z| <= outer`` with polar trapezoid weights.

    Radial nodes are uniform in ``log|z|`` (``spacing="log"``) or in ``|z|``.
    The weights integrate ``f * rho`` by the trapezoid rule in ``rho``, so
    they reproduce the area exactly.
    """

    inner: float
    outer: float
    n_radial: int = 256
    n_theta: int = 256
    spacing: str = "log"

    def __post_init__(self):
        if not (0 < self.inner < self.outer):
            raise DomainError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")
        if self.n_radial < 3 or self.n_theta < 4 or self.n_theta % 2:
            raise DomainError("need n_radial >= 3 and an even n_theta >= 4")
        if self.spacing == "log":
            self.s = np.linspace(math.log(self.inner), math.log(self.outer), self.n_radial)
            self.rho = np.exp(self.s)
            self.rho[0], self.rho[-1] = self.inner, self.outer
        elif self.spacing == "linear":
            self.rho = np.linspace(self.inner, self.outer, self.n_radial)
            self.s = np.log(self.rho)
        else:
            raise DomainError(f"unknown spacing {self.spacing!r}")
        self.theta = 2 * np.pi * np.arange(self.n_theta) / self.n_theta
        self.dtheta = 2 * np.pi / self.n_theta
        dr = np.diff(self.rho)
        trap = np.zeros(self.n_radial)
        trap[:-1] += dr / 2
        trap[1:] += dr / 2
        self.radial_weights = trap * self.rho
        self.weights = np.outer(self.radial_weights, np.full(self.n_theta, self.dtheta))
        self.z = self.rho[:, None] * np.exp(1j * self.theta)[None, :]

    @property
    def area(self) -> float:
        return math.pi * (self.outer**2 - self.inner**2)


def _as_vec(p) -> np.ndarray:
    return np.atleast_1d(np.asarray(p, dtype=complex))


@dataclass
class LocalMap:
    """Map to ``C^N`` sampled on a grid: ``values`` has shape ``(N, n_radial, n_theta)``.

    ``t`` is the neck parameter when the grid parametrizes ``{xy = t}``.
    """

    grid: AnnulusGrid
    values: np.ndarray
    p: np.ndarray
    t: complex | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        self.p = _as_vec(self.p)
        if self.values.shape != (len(self.p), self.grid.n_radial, self.grid.n_theta):
            raise DomainError(f"values of shape {self.values.shape} do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("sampled map has non-finite values")

    @property
    def N(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class PolySeed:
    """Polynomial map ``C -> C^N``; ``coeffs[k]`` is the vector coefficient of ``z^k``."""

    coeffs: tuple

    @classmethod
    def of(cls, *coeffs) -> "PolySeed":
        rows = [tuple(complex(c) for c in np.atleast_1d(v)) for v in coeffs]
        if len({len(r) for r in rows}) != 1:
            raise DomainError("all coefficients need the same dimension")
        return cls(tuple(rows))

    @property
    def p(self) -> np.ndarray:
        return np.array(self.coeffs[0])

    @property
    def N(self) -> int:
        return len(self.coeffs[0])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros((self.N,) + z.shape, dtype=complex)
        for c in reversed(self.coeffs):
            out = out * z + np.asarray(c).reshape((self.N,) + (1,) * z.ndim)
        return out

    def derivative(self) -> "PolySeed":
        if self.degree == 0:
            return PolySeed((tuple(0j for _ in range(self.N)),))
        return PolySeed(tuple(tuple(k * x for x in c) for k, c in enumerate(self.coeffs) if k > 0))

    def is_real(self) -> bool:
        return all(abs(x.imag) == 0 for c in self.coeffs for x in c)


def standard_seed_pairs() -> dict[str, tuple[PolySeed, PolySeed]]:
    """Three generic seed pairs in ``C^2`` (linear, quadratic, cubic) sharing the basepoint."""
    p = (0.3 - 0.1j, -0.2 + 0.4j)
    return {
        "linear": (PolySeed.of(p, (1.0, 0.5j)), PolySeed.of(p, (0.3, 1.0 - 0.2j))),
        "quadratic": (
            PolySeed.of(p, (1.0 + 1.0j, 0.2), (0.5, -0.7j)),
            PolySeed.of(p, (-0.4, 0.8), (0.9j, 0.3)),
        ),
        "cubic": (
            PolySeed.of(p, (0.7, -0.3 + 0.2j), (0.2j, 0.5), (1.1, -0.6)),
            PolySeed.of(p, (0.2 - 0.5j, 0.9), (0.4, 0.1j), (-0.8j, 0.35)),
        ),
    }


# -- derivatives and norms ------------------------------------------------


def _d_theta(values: np.ndarray) -> np.ndarray:
    n = values.shape[-1]
    k = np.fft.fftfreq(n, d=1.0 / n)
    k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(values, axis=-1), axis=-1)


def _d_s(values: np.ndarray, grid: AnnulusGrid) -> np.ndarray:
    if grid.spacing != "log":
        return np.gradient(values, grid.s, axis=-2, edge_order=2)
    # Uniform step: differences first, so constants give exact zeros.
    h = (grid.s[-1] - grid.s[0]) / (grid.n_radial - 1)
    v = np.moveaxis(values, -2, 0)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    return np.moveaxis(out, 0, -2)


def dbar(u: LocalMap) -> np.ndarray:
    """``du/dzbar`` at every grid point, shape ``(N, n_radial, n_theta)``."""
    g = u.grid
    factor = np.exp(1j * g.theta)[None, :] / (2 * g.rho[:, None])
    return factor * (_d_s(u.values, g) + 1j * _d_theta(u.values))


def gradient_norm(u: LocalMap) -> np.ndarray:
    """``|grad u|`` with ``|grad u|^2 = sum over components of |u_x|^2 + |u_y|^2``."""
    g = u.grid
    us, ut = _d_s(u.values, g), _d_theta(u.values)
    sq = (np.abs(us) ** 2 + np.abs(ut) ** 2).sum(axis=0)
    return np.sqrt(sq) / g.rho[:, None]


def neck_conformal_factor(grid: AnnulusGrid, t: complex) -> np.ndarray:
    """``rho`` with ``rho^2 = 1 + |t|^2/|z|^4``: the metric of ``{xy = t}`` in the ``z`` chart."""
    return np.sqrt(1.0 + abs(t) ** 2 / grid.rho**4)[:, None] * np.ones(grid.n_theta)[None, :]


def dbar_lp_norm(u: LocalMap, p_exp: float, metric: str | None = None, half: bool = False) -> float:
    """``L^p`` norm of ``dbar u``.

    With ``metric="neck"`` (the default when ``u.t`` is set) the norm uses
    the metric induced on ``{xy = t}`` from ``C^2``, i.e.
    ``int |u_zbar|^p rho^(2-p) dA``; otherwise the flat metric of the chart.
    ``half=True`` integrates over the closed upper half-annulus only.
    """
    if p_exp < 1:
        raise DomainError(f"p={p_exp} must be at least 1")
    metric = metric or ("neck" if u.t is not None else "flat")
    mag = np.sqrt((np.abs(dbar(u)) ** 2).sum(axis=0))
    integrand = mag**p_exp
    if metric == "neck":
        if u.t is None:
            raise DomainError("neck metric needs the neck parameter t")
        integrand = integrand * neck_conformal_factor(u.grid, u.t) ** (2 - p_exp)
    elif metric != "flat":
        raise DomainError(f"unknown metric {metric!r}")
    w = u.grid.weights
    if half:
        w = w * _half_mask(u.grid)[None, :]
    return float(np.sum(integrand * w)) ** (1.0 / p_exp)


def _half_mask(grid: AnnulusGrid) -> np.ndarray:
    """Trapezoid weights in theta restricted to ``[0, pi]``."""
    j = np.arange(grid.n_theta)
    m = (j <= grid.n_theta // 2).astype(float)
    m[0] = m[grid.n_theta // 2] = 0.5
    return m


def sample(seed: PolySeed, grid: AnnulusGrid) -> LocalMap:
    return LocalMap(grid, seed(grid.z), seed.p)


# -- cutoffs --------------------------------------------------------------


def chi1(w) -> np.ndarray:
    """Radial cutoff: 0 for ``|w| <= 1``, 1 for ``|w| >= 2``; quintic smootherstep, slope <= 15/8."""
    x = np.clip(np.abs(w) - 1.0, 0.0, 1.0)
    return x**3 * (x * (6 * x - 15) + 10)


def chi_flat(s) -> np.ndarray:
    """Smooth, flat to all orders at 1 and 4: 0 for ``s <= 1``, 1 for ``s >= 4``, ``0 <= chi' <= 2/3``."""
    x = np.clip((np.asarray(s, dtype=float) - 1.0) / 3.0, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def dirichlet_energy(values: np.ndarray, grid: AnnulusGrid) -> float:
    """Dirichlet energy of the interpolant that is piecewise linear in ``(log|z|, theta)``.

    The energy is conformally invariant, so in these coordinates it is
    ``sum (d_s f)^2 + (d_theta f)^2`` over cells.
    """
    ds = np.diff(grid.s)
    radial = (np.diff(values, axis=0) ** 2 / ds[:, None]).sum() * grid.dtheta
    wrap = np.concatenate([values, values[:, :1]], axis=1)
    ang = (np.diff(wrap, axis=1) ** 2).sum(axis=1) / grid.dtheta
    trap = np.zeros(grid.n_radial)
    trap[:-1] += ds / 2
    trap[1:] += ds / 2
    return float(radial + (ang * trap).sum())


@dataclass
class CutoffReport:
    r: float
    energy: float
    target: float
    rel_error: float
    grid: AnnulusGrid = field(repr=False)
    values: np.ndarray = field(repr=False)


def beta_profile(r: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    lr = math.log(r)
    out = 2.0 * (np.log(rho) / lr - 1.0)
    out = np.where(rho <= r**1.5, 1.0, out)
    return np.where(rho >= r, 0.0, out)


def beta_r(r: float, n_radial: int = 1024, n_theta: int = 1024) -> CutoffReport:
    """The logarithmic cutoff ``beta_r`` sampled on ``r^2 <= |z| <= 1`` and its Dirichlet energy."""
    if not 0 < r < 1:
        raise DomainError(f"r={r} must lie in (0, 1)")
    grid = AnnulusGrid(r * r, 1.0, n_radial, n_theta, "log")
    values = np.repeat(beta_profile(r, grid.rho)[:, None], n_theta, axis=1)
    energy = dirichlet_energy(values, grid)
    target = 4 * math.pi / abs(math.log(r))
    return CutoffReport(r, energy, target, abs(energy - target) / target, grid, values)


# -- pregluing ------------------------------------------------------------


def _check_neck(t: complex, eps1: float) -> float:
    r = math.sqrt(abs(t))
    if r == 0:
        raise DomainError("t must be nonzero")
    if r >= eps1**2 / 16:
        raise DomainError(f"|t|={abs(t):g} too large: need sqrt|t| < eps1^2/16 = {eps1**2 / 16:g}")
    return r


def neck_grid(t: complex, eps1: float = DEFAULT_EPS1, n_radial: int | None = None, n_theta: int = 64) -> AnnulusGrid:
    """Log-uniform grid on ``r^2/eps1 <= |z| <= eps1`` fine enough to resolve both transition annuli."""
    r = _check_neck(t, eps1)
    span = math.log(eps1) - math.log(r * r / eps1)
    if n_radial is None:
        n_radial = int(math.ceil(span / 0.004)) + 1
    return AnnulusGrid(r * r / eps1, eps1, n_radial, n_theta, "log")


def preglue(f: PolySeed, g: PolySeed, t: complex, grid: AnnulusGrid | None = None, eps1: float = DEFAULT_EPS1) -> LocalMap:
    """Approximate solution ``u_t`` on the neck ``{xy = t}`` in the ``z = x`` chart."""
    if f.N != g.N or not np.allclose(f.p, g.p, rtol=0, atol=0):
        raise DomainError("seeds must share the basepoint f(0) = g(0)")
    r = _check_neck(t, eps1)
    grid = grid or neck_grid(t, eps1)
    z = grid.z
    p = f.p.reshape(-1, 1, 1)
    sr = math.sqrt(r)
    fz = f(z)
    gz = g(t / z)
    u = p + chi1(z / sr)[None] * (fz - p) + chi1(r * sr / z)[None] * (gz - p)
    rho = grid.rho[:, None] * np.ones(grid.n_theta)[None, :]
    g_region = rho < r * sr / 2
    plateau = (rho >= r * sr) & (rho <= sr)
    f_region = rho > 2 * sr
    u = np.where(g_region[None], gz, u)
    u = np.where(plateau[None], np.broadcast_to(p, u.shape), u)
    u = np.where(f_region[None], fz, u)
    return LocalMap(grid, u, f.p, t)


@dataclass
class ScalingFit:
    p_exp: float
    r_list: list
    norms: list
    slope: float
    intercept: float
    residual: float
    degenerate: bool = False

    def passes(self, tol: float = 0.15) -> bool:
        return not self.degenerate and self.slope >= 1.0 / self.p_exp - tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "norm"])
        for r, n in zip(self.r_list, self.norms):
            w.writerow([repr(r), repr(n)])
        return buf.getvalue()


DEFAULT_R_LIST = (1e-2, 1e-3, 1e-4, 1e-5)


def scaling_fit(
    seeds: tuple[PolySeed, PolySeed],
    r_list=DEFAULT_R_LIST,
    p_exp: float = 4.0,
    eps1: float = DEFAULT_EPS1,
    angle: float = 0.3,
    workers: int | None = None,
) -> ScalingFit:
    """Least-squares slope of ``log ||dbar u_t||_p`` against ``log r`` with ``t = r^2 e^{i angle}``."""
    f, g = seeds
    r_list = [float(r) for r in r_list]

    def one(r):
        u = preglue(f, g, r * r * np.exp(1j * angle), eps1=eps1)
        return dbar_lp_norm(u, p_exp)

    with ThreadPoolExecutor(max_workers=workers or thread_count()) as pool:
        norms = list(pool.map(one, r_list))
    scale = max(np.sqrt((np.abs(np.array(f.coeffs[1:])) ** 2).sum()) if f.degree else 0.0,
                np.sqrt((np.abs(np.array(g.coeffs[1:])) ** 2).sum()) if g.degree else 0.0)
    if scale == 0.0 or min(norms) <= 1e-12 * max(scale, 1.0):
        return ScalingFit(p_exp, r_list, norms, float("nan"), float("nan"), float("nan"), True)
    x, y = np.log(r_list), np.log(norms)
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(math.sqrt(res[0] / len(x))) if len(res) else 0.0
    return ScalingFit(p_exp, r_list, norms, float(slope), float(intercept), residual)


# -- interpolation across the node ----------------------------------------


@dataclass
class InterpReport:
    r: float
    sup_F: float
    sup_seeds: float
    sup_rel_error: float
    grad_sup: float
    grad_bound: float
    seam_grad: float
    sup_tol: float
    seam_tol: float

    @property
    def sup_ok(self) -> bool:
        return self.sup_rel_error <= self.sup_tol

    @property
    def grad_ok(self) -> bool:
        return self.grad_sup <= self.grad_bound

    @property
    def seam_ok(self) -> bool:
        return self.seam_grad < self.seam_tol

    @property
    def passed(self) -> bool:
        return self.sup_ok and self.grad_ok and self.seam_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(sup_ok=self.sup_ok, grad_ok=self.grad_ok, seam_ok=self.seam_ok, passed=self.passed)
        return d


def interpolate(f: PolySeed, g: PolySeed, t: complex, grid: AnnulusGrid) -> LocalMap:
    """``F = f(chi(|z/r|^2) z)`` for ``|z| >= r`` and ``g(chi(r^2/|z|^2) t/z)`` inside, ``r = sqrt|t|``."""
    r = math.sqrt(abs(t))
    z = grid.z
    rho = grid.rho[:, None] * np.ones(grid.n_theta)[None, :]
    outer = f(chi_flat((rho / r) ** 2) * z)
    inner = g(chi_flat((r / rho) ** 2) * t / z)
    return LocalMap(grid, np.where((rho >= r)[None], outer, inner), f.p)


def _disc_sup(seed: PolySeed, radius: float, n_radial: int = 64, n_theta: int = 1024) -> float:
    rho = np.linspace(0.0, radius, n_radial)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = rho[:, None] * np.exp(1j * th)[None, :]
    return float(np.sqrt((np.abs(seed(z)) ** 2).sum(axis=0)).max())


def interp_check(
    f: PolySeed,
    g: PolySeed,
    t: complex,
    r: float | None = None,
    n_radial: int = 1201,
    n_theta: int = 512,
    sup_tol: float = 1e-3,
    seam_tol: float = 1e-4,
    eps1: float = DEFAULT_EPS1,
) -> InterpReport:
    """Check the sup and gradient bounds for ``F`` on ``A(r/2, 2r)`` and flatness at ``|z| = r``."""
    if r is None:
        r = math.sqrt(abs(t))
    elif not math.isclose(r, math.sqrt(abs(t)), rel_tol=1e-12):
        raise DomainError(f"r={r} must equal sqrt|t|={math.sqrt(abs(t))}")
    _check_neck(t, eps1)
    if n_radial % 2 == 0:
        n_radial += 1  # keep |z| = r on the grid
    grid = AnnulusGrid(r / 2, 2 * r, n_radial, n_theta, "log")
    F = interpolate(f, g, t, grid)
    mag = np.sqrt((np.abs(F.values) ** 2).sum(axis=0))
    sup_F = float(mag.max())
    sup_seeds = max(_disc_sup(f, 2 * r, n_theta=n_theta), _disc_sup(g, 2 * r, n_theta=n_theta))
    grad = gradient_norm(F)
    bound = 9 * math.sqrt(2) * max(_disc_sup(f.derivative(), 2 * r), 4 * _disc_sup(g.derivative(), 2 * r))
    seam = float(grad[n_radial // 2].max())
    return InterpReport(
        r=r,
        sup_F=sup_F,
        sup_seeds=sup_seeds,
        sup_rel_error=abs(sup_F - sup_seeds) / max(sup_seeds, 1e-300),
        grad_sup=float(grad.max()),
        grad_bound=bound,
        seam_grad=seam,
        sup_tol=sup_tol,
        seam_tol=seam_tol,
    )


# -- cutoff times section (scaling only) ----------------------------------


def smooth_log_cutoff(r: float, rho) -> np.ndarray:
    """Smooth version of ``beta_r``: 1 for ``|z| <= r^1.5``, 0 for ``|z| >= r``."""
    x = (np.log(rho) - 1.5 * math.log(r)) / (-0.5 * math.log(r))
    x = np.clip(x, 0.0, 1.0)
    return 1.0 - x**3 * (x * (6 * x - 15) + 10)


@dataclass
class CutsectionFit:
    p_exp: float
    r_list: list
    ratios: list
    slope_loglog: float
    passed: bool


def cutsection_check(seed: PolySeed, r_list=(1e-2, 1e-4, 1e-8, 1e-16), p_exp: float = 4.0, n_radial: int = 2001, n_theta: int = 64) -> CutsectionFit:
    """Best-effort check of ``||(grad chi_r) w||_p <= C ||w||_{1,p} |log r|^(1/p - 1)``.

    ``w = seed - seed(0)``.  Only the scaling in ``|log r|`` is tested: the
    ratio of the left side to ``|log r|^(1/p - 1)`` must not grow with
    ``|log r|`` (slope of its log against ``log|log r|`` at most 0.05).
    """
    ratios = []
    for r in r_list:
        grid = AnnulusGrid(r**1.5, r, n_radial, n_theta, "log")
        w = seed(grid.z) - seed.p.reshape(-1, 1, 1)
        chi = np.repeat(smooth_log_cutoff(r, grid.rho)[:, None], n_theta, axis=1)
        dchi = np.abs(np.gradient(chi, grid.s, axis=0)) / grid.rho[:, None]
        wmag = np.sqrt((np.abs(w) ** 2).sum(axis=0))
        lhs = float(np.sum((dchi * wmag) ** p_exp * grid.weights)) ** (1 / p_exp)
        ratios.append(lhs / abs(math.log(r)) ** (1 / p_exp - 1))
    x = np.log([abs(math.log(r)) for r in r_list])
    slope = float(np.polyfit(x, np.log(ratios), 1)[0])
    return CutsectionFit(p_exp, list(r_list), ratios, slope, slope <= 0.05)


# -- report ---------------------------------------------------------------


def verify_gluing(
    r_list=DEFAULT_R_LIST,
    p_list=(2.0, 4.0),
    energy_r=(1e-2, 1e-3, 1e-4),
    energy_tol: float = 0.02,
    slope_tol: float = 0.15,
) -> dict:
    """Run every check and return a JSON-ready report with tolerance fields."""
    seeds = standard_seed_pairs()
    report: dict = {"cutoff_energy": [], "scaling": [], "interpolation": []}
    for r in energy_r:
        c = beta_r(r)
        report["cutoff_energy"].append(
            {"r": r, "energy": c.energy, "target": c.target, "rel_error": c.rel_error,
             "tolerance": energy_tol, "passed": c.rel_error < energy_tol}
        )
    for name, pair in seeds.items():
        for p in p_list:
            fit = scaling_fit(pair, r_list, p)
            report["scaling"].append(
                {"seeds": name, "p": p, "r": list(fit.r_list), "norms": fit.norms, "slope": fit.slope,
                 "residual": fit.residual, "required": 1 / p - slope_tol, "passed": fit.passes(slope_tol)}
            )
        rep = interp_check(*pair, t=1e-4 * np.exp(0.7j))
        report["interpolation"].append({"seeds": name, **rep.to_dict()})
    report["passed"] = all(x["passed"] for part in ("cutoff_energy", "scaling", "interpolation") for x in report[part])
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
