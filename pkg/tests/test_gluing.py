import math

import numpy as np
import pytest

from bordered_moduli.gluing import (
    AnnulusGrid,
    LocalMap,
    PolySeed,
    beta_profile,
    beta_r,
    chi1,
    chi_flat,
    cutsection_check,
    dbar_lp_norm,
    gradient_norm,
    interp_check,
    neck_grid,
    preglue,
    report_to_json,
    sample,
    scaling_fit,
    standard_seed_pairs,
)
from bordered_moduli.surface_types import DomainError

SEEDS = standard_seed_pairs()


def test_grid_area_and_weights():
    for spacing in ("log", "linear"):
        g = AnnulusGrid(0.1, 1.0, 200, 64, spacing)
        assert np.sum(g.weights) == pytest.approx(g.area, rel=1e-12)
    with pytest.raises(DomainError):
        AnnulusGrid(1.0, 0.5)
    with pytest.raises(DomainError):
        AnnulusGrid(0.1, 1.0, 10, 7)


def test_holomorphic_norm_small():
    g = AnnulusGrid(0.5, 1.0, 512, 512)
    assert dbar_lp_norm(sample(PolySeed.of(0, 1), g), 2) < 1e-6


def test_antiholomorphic_norm_is_area():
    g = AnnulusGrid(0.1, 1.0, 512, 512)
    u = LocalMap(g, np.conj(g.z)[None], [0])
    for p in (2, 4):
        assert dbar_lp_norm(u, p) == pytest.approx(g.area ** (1 / p), rel=0.01)


def test_holomorphic_error_second_order():
    seed = PolySeed.of(0.2, 1, 0.5, -0.3, 0.7j)
    errs = []
    for n in (33, 65, 129):
        errs.append(dbar_lp_norm(sample(seed, AnnulusGrid(0.1, 1.0, n, 64)), 2))
    assert errs[0] / errs[1] > 3.0 and errs[1] / errs[2] > 3.0


def test_cutoffs():
    w = np.linspace(0, 3, 3001)
    c = chi1(w)
    assert np.all(c[w <= 1] == 0) and np.all(c[w >= 2] == 1)
    assert np.all(np.diff(c) >= 0) and np.max(np.diff(c) / np.diff(w)) <= 2
    s = np.linspace(0, 5, 5001)
    cf = chi_flat(s)
    assert np.all(cf[s <= 1] == 0) and np.all(cf[s >= 4] == 1)
    assert np.max(np.diff(cf) / np.diff(s)) <= 2 / 3 + 1e-9


def test_beta_profile_plateaus():
    r = 1e-2
    rho = np.geomspace(r**2, 1, 1000)
    b = beta_profile(r, rho)
    assert np.all(b[rho <= r**1.5] == 1) and np.all(b[rho >= r] == 0)


@pytest.mark.parametrize("r", [1e-2, 1e-3, 1e-4])
def test_beta_energy(r):
    rep = beta_r(r)
    assert rep.target == pytest.approx(4 * math.pi / abs(math.log(r)))
    assert rep.rel_error < 0.02


def test_beta_energy_converges():
    errs = [beta_r(1e-3, n, 64).rel_error for n in (256, 512, 1024)]
    assert errs[0] / errs[1] >= 1.5 and errs[1] / errs[2] >= 1.5


def test_beta_domain():
    for r in (0, 1, 2, -0.5):
        with pytest.raises(DomainError):
            beta_r(r)


def test_preglue_regions_exact():
    f, g = SEEDS["cubic"]
    t = 1e-6 * np.exp(0.4j)
    u = preglue(f, g, t)
    r = math.sqrt(abs(t))
    z = u.grid.z
    rho = np.abs(z)
    g_reg, f_reg = rho < r * math.sqrt(r) / 2, rho > 2 * math.sqrt(r)
    plateau = (rho >= r * math.sqrt(r)) & (rho <= math.sqrt(r))
    assert g_reg.any() and f_reg.any() and plateau.any()
    assert np.array_equal(u.values[:, g_reg], g(t / z)[:, g_reg])
    assert np.array_equal(u.values[:, f_reg], f(z)[:, f_reg])
    assert np.array_equal(u.values[:, plateau], np.broadcast_to(f.p[:, None], u.values[:, plateau].shape))


def test_preglue_constant_and_linear():
    p = (1.0 + 2j,)
    const = PolySeed.of(p)
    t = 1e-5
    u = preglue(const, const, t)
    assert np.all(u.values == p[0])
    assert dbar_lp_norm(u, 2) == 0.0
    lin = PolySeed.of(p, (1,))
    u = preglue(lin, const, t)
    r = math.sqrt(t)
    expected = p[0] + chi1(u.grid.z / math.sqrt(r)) * u.grid.z
    assert np.allclose(u.values[0], expected, rtol=0, atol=1e-15)


def test_preglue_domain_errors():
    f, g = SEEDS["linear"]
    with pytest.raises(DomainError):
        preglue(f, g, 1e-3)  # sqrt|t| >= eps1^2/16
    with pytest.raises(DomainError):
        preglue(f, g, 0)
    with pytest.raises(DomainError):
        preglue(f, PolySeed.of((0, 0), (1, 0)), 1e-6)


def test_norms_decrease_with_r():
    f, g = SEEDS["linear"]
    norms = [dbar_lp_norm(preglue(f, g, r * r), 2) for r in (1e-2, 1e-3, 1e-4)]
    assert all(np.isfinite(norms)) and norms[0] > norms[1] > norms[2] > 0


def test_half_model_is_half():
    f = PolySeed.of((0.5,), (1.0,), (0.3,))
    g = PolySeed.of((0.5,), (-0.7,), (0.2,))
    u = preglue(f, g, 1e-6)
    for p in (2, 4):
        full = dbar_lp_norm(u, p) ** p
        half = dbar_lp_norm(u, p, half=True) ** p
        assert half == pytest.approx(full / 2, rel=1e-10)


@pytest.mark.parametrize("name", list(SEEDS))
@pytest.mark.parametrize("p", [2.0, 4.0])
def test_scaling_exponent(name, p):
    fit = scaling_fit(SEEDS[name], p_exp=p)
    assert fit.passes(0.15), (fit.slope, fit.norms)
    assert fit.to_csv().splitlines()[0] == "r,norm"


def test_scaling_degenerate():
    const = PolySeed.of((1.0, 0.0))
    fit = scaling_fit((const, const), r_list=(1e-2, 1e-3))
    assert fit.degenerate and not fit.passes()


@pytest.mark.parametrize("name", list(SEEDS))
def test_interp_check(name):
    rep = interp_check(*SEEDS[name], t=1e-4 * np.exp(0.7j))
    assert rep.sup_ok and rep.grad_ok and rep.seam_ok and rep.passed
    assert rep.to_dict()["passed"]


def test_interp_constant_and_identity():
    c = PolySeed.of((2.0,))
    rep = interp_check(c, c, 1e-4)
    assert rep.grad_sup == 0 and rep.passed
    ident = PolySeed.of((0.0,), (1.0,))
    rep = interp_check(ident, ident, 1e-4)
    assert rep.passed and rep.grad_sup < rep.grad_bound / 2


def test_interp_rejects_inconsistent_r():
    f, g = SEEDS["linear"]
    with pytest.raises(DomainError):
        interp_check(f, g, 1e-4, r=0.5)


def test_gradient_norm_of_linear_map():
    grid = AnnulusGrid(0.1, 1.0, 65, 32)
    grad = gradient_norm(sample(PolySeed.of(0, 1), grid))
    # angular part is exact; the radial difference of e^s is second order
    assert np.allclose(grad, math.sqrt(2), rtol=0, atol=1e-3)


def test_neck_grid_resolution():
    grid = neck_grid(1e-8)
    assert np.max(np.diff(grid.s)) <= 0.004


def test_cutsection_scaling():
    fit = cutsection_check(PolySeed.of((0.0,), (1.0,)))
    assert fit.passed and all(np.isfinite(fit.ratios))


def test_report_json_roundtrip():
    import json

    report = {"passed": True, "x": [1.5, 2]}
    assert json.loads(report_to_json(report)) == report
