import numpy as np
import pytest

import fscore as fs
from fscore.synthetic import bump_u, bump_v, smoothstep


def test_bump_u_plateau_and_support():
    t = np.array([0.0, 0.25, 0.5, 1.0])
    u = bump_u(t)
    assert u[0] == 1.0 and u[1] == 1.0
    assert u[2] == 0.0 and u[3] == 0.0
    mid = bump_u(np.array([0.3, 0.4]))
    assert np.all((0 < mid) & (mid < 1))


def test_bump_v_ramp():
    assert bump_v(np.array([-1.0]))[0] == 0.0
    assert bump_v(np.array([1.5]))[0] == 1.0
    assert 0 < bump_v(np.array([0.5]))[0] < 1


def test_smoothstep_monotone():
    t = np.linspace(-0.5, 1.5, 101)
    s = smoothstep(t)
    assert np.all(np.diff(s) >= -1e-15)


# ---------------------------------------------------------------------------
# smooth 1-d family


def test_smooth_family_fixed_point():
    fam = fs.make_smooth_1d_family()
    disc = fam.discretize(500_000)
    theta = fs.bayes_threshold(disc, fs.FBetaParams(b=1.0))
    assert theta == pytest.approx(fam.theta_star, abs=1e-5)


def test_smooth_family_margin_exponent_near_one():
    fam = fs.make_smooth_1d_family()
    rep = fs.verify_margin(fam, [0.01, 0.02, 0.05, 0.1], seed=0)
    assert rep.exponent == pytest.approx(1.0, abs=0.1)


def test_smooth_family_sampling_labels_match_eta():
    fam = fs.make_smooth_1d_family()
    data = fs.sample(fam, 50_000, seed=3, labeled=True)
    mean_eta = float(fam.eta(data.points).mean())
    assert data.labels.mean() == pytest.approx(mean_eta, abs=0.01)


def test_smooth_family_density_uniform():
    fam = fs.make_smooth_1d_family()
    rep = fs.verify_strong_density(fam)
    assert rep["within_declared_bounds"]


# ---------------------------------------------------------------------------
# constant and two-point families


def test_constant_family_threshold():
    fam = fs.make_constant_family(eta_value=0.5)
    assert fam.theta_star == pytest.approx(1 / 3, abs=1e-12)
    rep = fs.verify_margin(fam, [0.01, 0.1], seed=0)
    assert np.all(rep.probabilities == 0.0)
    assert np.isinf(fam.margin.alpha)


def test_two_point_family_exact():
    fam = fs.make_two_point_family(eta_low=0.1, eta_high=0.9)
    assert fam.theta_star == pytest.approx(0.45, abs=1e-12)
    disc = fam.discretize(10)
    assert disc.size == 2
    assert fs.bayes_threshold(disc) == pytest.approx(0.45, abs=1e-12)


# ---------------------------------------------------------------------------
# hard family


def hard_params(**kw):
    base = dict(d=1, beta=1.0, q=8, m=3, w=0.02)
    base.update(kw)
    return fs.HardFamilyParams(**base)


def test_hard_family_threshold_pinned():
    for seed in range(4):
        fam = fs.build_hard_family(hard_params(), seed=seed)
        assert fam.theta_star == 0.25
        atoms = fam.extras["exact_atoms"]
        assert fs.bayes_threshold(atoms) == pytest.approx(0.25, abs=1e-9)


def test_hard_family_tau_balance():
    fam = fs.build_hard_family(hard_params(), seed=0)
    atoms = fam.extras["exact_atoms"]
    lhs = 0.25 * float(atoms.mass @ atoms.eta)
    rhs = float(atoms.mass @ np.clip(atoms.eta - 0.25, 0.0, None))
    assert abs(lhs - rhs) < 1e-12


def test_hard_family_mean_eta_identity():
    fam = fs.build_hard_family(hard_params(), seed=1)
    atoms = fam.extras["exact_atoms"]
    assert fs.hard_family_mean_eta(fam) == pytest.approx(
        float(atoms.mass @ atoms.eta), abs=1e-12)


def test_bprime_equals_phi_peak_on_plateau():
    # the mass balls have radius 1/(4q), entirely inside the region where the
    # default bump is flat at its peak, so the cell average equals the peak
    p = hard_params()
    fam = fs.build_hard_family(p, seed=0)
    c_phi = fam.extras["phi_max"] * p.q ** p.beta
    bprime = fs.compute_bprime(p, C_phi=c_phi)
    assert bprime == pytest.approx(fam.extras["phi_max"], rel=1e-9)
    assert bprime <= 1 / 8


def test_bprime_strictly_interior_for_wide_bump():
    # a bump still decaying on the ball gives a strictly smaller average
    def u_wide(t):
        return np.clip(1.0 - np.asarray(t, dtype=float), 0.0, 1.0)

    p = hard_params()
    bprime = fs.compute_bprime(p, u_override=u_wide, C_phi=0.1)
    peak = 0.1 * p.q ** (-p.beta)
    assert 0.0 < bprime < peak


def test_hard_family_margin_two_term_bound():
    p = hard_params()
    fam = fs.build_hard_family(p, seed=2)
    phi_max = fam.extras["phi_max"]
    mw = p.m * p.w
    deltas = np.array([phi_max / 2, phi_max, 0.03, 0.1, 0.3])
    rep = fs.verify_margin(fam, deltas, seed=0)
    bound = 2 * mw * (deltas >= phi_max - 1e-12) + 12.0 * deltas
    assert np.all(rep.probabilities <= bound + 1e-9)


def test_hard_family_eta_cases():
    p = hard_params()
    fam = fs.build_hard_family(p, seed=3)
    sigma = fam.extras["sigma"]
    atoms = fam.extras["exact_atoms"]
    phi_max = fam.extras["phi_max"]
    # component atoms: m signed cells, m mirrored (opposite sign), 1 remote
    eta = atoms.eta
    for j in range(p.m):
        assert eta[j] == pytest.approx(0.25 + sigma[j] * phi_max, abs=1e-12)
        assert eta[p.m + j] == pytest.approx(0.25 - sigma[j] * phi_max, abs=1e-12)
    assert eta[-1] == pytest.approx(fam.extras["tau"], abs=1e-12)


def test_hard_family_density_levels():
    p = hard_params()
    fam = fs.build_hard_family(p, seed=0)
    levels = fam.extras["density_levels"]
    assert len(levels) == 2
    # sampled points carry positive density
    x = fs.sample(fam, 2000, seed=5, labeled=False).points
    dens = fam.density(x)
    assert np.all(dens > 0)


def test_hard_family_sampler_mass_split():
    p = hard_params()
    fam = fs.build_hard_family(p, seed=0)
    x = fs.sample(fam, 40_000, seed=9, labeled=False).points
    near = np.abs(x[:, 0]) <= np.sqrt(p.d) + 1e-9
    # the grid balls (and mirrors) carry 2mw of the mass
    assert near.mean() == pytest.approx(2 * p.m * p.w, abs=0.01)


def test_hard_family_invalid_params():
    with pytest.raises(ValueError):
        fs.HardFamilyParams(d=1, beta=1.0, q=8, m=0, w=0.02)
    with pytest.raises(ValueError):
        fs.HardFamilyParams(d=1, beta=1.0, q=2, m=1, w=0.6)  # m w >= 1/2


def test_rate_params_helper():
    p = fs.hard_family_rate_params(2000, beta=1.0, d=1, alpha=1.0)
    assert p.q == int(2000 ** (1 / 3))
    assert p.m >= 1 and p.m * p.w < 0.5
    with pytest.raises(ValueError):
        fs.hard_family_rate_params(2000, beta=2.0, d=1, alpha=1.0)  # alpha beta > d


def test_discretizer_reproducible():
    fam = fs.build_hard_family(hard_params(), seed=0)
    a = fam.discretize(5000, seed=1)
    b = fam.discretize(5000, seed=1)
    np.testing.assert_array_equal(a.support, b.support)
    np.testing.assert_array_equal(a.eta, b.eta)
