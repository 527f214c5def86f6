"""Named experiments: read a :class:`Config`, compute, write CSV tables and run metadata.

Every experiment returns its tables and a summary; :func:`run_experiment` writes
``<table>.csv`` files and ``metadata.ini``. The metadata file is itself a
complete configuration, so running it again reproduces the CSV files bit for
bit.
"""

from __future__ import annotations

import csv
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy
from scipy.stats import linregress

from . import __version__
from .band import band_analytic, band_exact, full_band_shifts
from .catalog import BUNDLED, count_relevant_modes, estimate_timescale, load_dye
from .config import Config, ConfigError
from .coupling import AggregateSpec, coupling_matrices
from .disorder import DisorderSpec, disordered_decay_experiment
from .dynamics import build_effective_hamiltonian, fit_exponential, mcwf_run
from .modes import equidistant_modes, random_modes
from .rates import (
    CONVENTIONS,
    build_rate_model,
    integrate_rate_equations,
    kasha_rate_closed_form,
    scaling_law,
    total_kasha_rate,
)
from .units import RATE_SCALE, UnitError, Units

TABLE1_FLAG_TOLERANCE = 0.10


@dataclass
class ExperimentOutput:
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    summary: dict = field(default_factory=dict)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


# ----------------------------------------------------------------- shared readers


def _aggregate(cfg: Config, N_default: int):
    N = cfg.get_int("aggregate", "N", N_default, minimum=2)
    k0d = cfg.get_float("aggregate", "k0d", 0.0126)
    if not 0 < k0d < 1:
        raise ConfigError(f"[aggregate] k0d = {k0d}: must lie in (0, 1)")
    spec = AggregateSpec.chain(N, k0d)
    return spec, coupling_matrices(spec)


def _units(cfg: Config, omega_nn: float) -> Units:
    """Optional physical gamma0 (e.g. ``455 MHz``) enables fs / THz inputs."""
    if not cfg.has("aggregate", "gamma0"):
        return Units(omega_nn=omega_nn)
    number, unit = cfg.get_quantity("aggregate", "gamma0")
    if unit not in RATE_SCALE or not number > 0:
        raise ConfigError(f"[aggregate] gamma0: expected a positive rate in one of {list(RATE_SCALE)}")
    return Units(gamma0_per_s=number * RATE_SCALE[unit], omega_nn=omega_nn)


def _modes(cfg: Config, omega_nn: float, n_default: int, s_default: float, seed: int):
    kind = cfg.get_str("modes", "spectrum", "equidistant", choices=("equidistant", "random"))
    n_max = cfg.get_int("modes", "n_max", n_default, minimum=1)
    quality = cfg.get_float("modes", "quality", 10.0)
    if not quality > 0:
        raise ConfigError(f"[modes] quality = {quality}: must be positive")
    if kind == "equidistant":
        s = cfg.get_float("modes", "s", s_default, minimum=0)
        return equidistant_modes(n_max, omega_nn, s, quality)
    s_max = cfg.get_float("modes", "s_max", 2 * s_default, minimum=0)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
    return random_modes(n_max, omega_nn, rng, s_max=s_max, quality=quality)


def _rate_options(cfg: Config):
    convention = cfg.get_str("rates", "convention", "standard", choices=list(CONVENTIONS))
    symmetric = cfg.get_str("rates", "symmetric_decay", "dicke", choices=("dicke", "band"))
    return convention, symmetric


def _horizon(cfg: Config, units: Units, kappa: float, default: str) -> float:
    number, unit = cfg.get_quantity("dynamics", "t_max", default)
    if unit == "1/kappa":
        return number / kappa
    try:
        return units.time(number, unit)
    except UnitError as exc:
        raise ConfigError(f"[dynamics] t_max: {exc} (or use '1/kappa')") from None


def _band(cfg: Config, couplings, default: str):
    kind = cfg.get_str("dynamics", "band", default, choices=("exact", "analytic"))
    if kind == "exact":
        return band_exact(couplings)
    return band_analytic(couplings.omega_nn, couplings.N)


# ----------------------------------------------------------------- experiments


def exp_band(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    spec, c = _aggregate(cfg, 100)
    om = c.omega_nn
    analytic = band_analytic(om, spec.N)
    full = full_band_shifts(c, periodic=False)
    exact = band_exact(c)
    out = ExperimentOutput()
    out.tables["band_analytic"] = (
        ["k", "q [1/d]", "shift nearest-neighbour [Omega]", "shift all neighbours [Omega]", "decay [gamma0]"],
        [
            (int(k), q, s / om, f / om, g)
            for k, q, s, f, g in zip(analytic.labels, analytic.q_values, analytic.shifts, full, analytic.decays)
        ],
    )
    out.tables["band_exact"] = (
        ["rank", "q [1/d]", "shift [Omega]", "decay [gamma0]"],
        [(int(k), q, s / om, g) for k, q, s, g in zip(exact.labels, exact.q_values, exact.shifts, exact.decays)],
    )
    out.summary = {
        "omega_nn_gamma0": om,
        "bandwidth_analytic_omega": analytic.bandwidth / om,
        "bandwidth_exact_omega": exact.bandwidth / om,
        "top_state_decay_gamma0": exact.symmetric_decay,
    }
    return out


def exp_rates(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    _, c = _aggregate(cfg, 20)
    om = c.omega_nn
    modes = _modes(cfg, om, 8, 0.1, seed)
    band = _band(cfg, c, "exact")
    convention, symmetric = _rate_options(cfg)
    model = build_rate_model(band, modes, convention, symmetric)
    S = band.symmetric_index
    out = ExperimentOutput()
    out.tables["rates"] = (
        ["label", "shift [Omega]", "radiative [gamma0]", "rate from symmetric [gamma0]", "total out [gamma0]"],
        [
            (int(band.labels[a]), band.shifts[a] / om, model.radiative[a], model.transfer[S, a], model.transfer[a].sum())
            for a in range(band.N)
        ],
    )
    n_max = len(modes)
    s_mean = float(np.mean([m.s for m in modes]))
    out.summary = {
        "kappa_pairwise_gamma0": total_kasha_rate(band, modes, convention, symmetric),
        "kappa_constant_density_gamma0": kasha_rate_closed_form(modes, om),
        "kappa_scaling_law_gamma0": scaling_law(s_mean, om, n_max),
        "omega_nn_gamma0": om,
    }
    return out


def exp_kasha_dynamics(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    spec, c = _aggregate(cfg, 100)
    om = c.omega_nn
    modes = _modes(cfg, om, 40, 0.01, seed)
    units = _units(cfg, om)
    method = cfg.get_str("dynamics", "method", "rates", choices=("rates", "mcwf"))
    band = _band(cfg, c, "analytic")
    convention, symmetric = _rate_options(cfg)
    kappa = total_kasha_rate(band, modes, convention, symmetric)
    t_max = _horizon(cfg, units, kappa, "5 1/kappa")
    n_times = cfg.get_int("dynamics", "n_times", 101, minimum=2)
    t = np.linspace(0.0, t_max, n_times)
    labels = [f"p_k={int(k)}" for k in band.labels]
    out = ExperimentOutput()
    if method == "rates":
        model = build_rate_model(band, modes, convention, symmetric)
        p0 = np.zeros(band.N)
        p0[band.symmetric_index] = 1.0
        traj = integrate_rate_equations(model, p0, t)
        out.tables["populations"] = (
            ["time [1/gamma0]", *labels, "emitted"],
            [(ti, *pi, ei) for ti, pi, ei in zip(t, traj.p, traj.emitted)],
        )
        out.summary["crosscheck_error"] = traj.meta["crosscheck_error"]
        p_bottom = traj.p[-1][np.argmin(band.shifts)]
    else:
        n_traj = cfg.get_int("dynamics", "n_traj", 500, minimum=1)
        h = build_effective_hamiltonian(spec.with_modes(modes), c)
        ens = mcwf_run(h, None, t, n_traj, seed, band=band, workers=workers)
        out.tables["populations"] = (
            ["time [1/gamma0]", *labels, "emitted"],
            [(ti, *pi, ei) for ti, pi, ei in zip(t, ens.populations, ens.emitted)],
        )
        p_bottom = ens.populations[-1][np.argmin(band.shifts)]
    out.summary.update({"kappa_pairwise_gamma0": kappa, "final_p_band_bottom": p_bottom, "t_max_gamma0": t_max})
    return out


def exp_scaling_scan(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    _, c = _aggregate(cfg, 20)
    om = c.omega_nn
    n_values = cfg.get_int_list("scan", "n_max", "1..16")
    s = cfg.get_float("scan", "s", 0.1, minimum=0)
    s_max = cfg.get_float("scan", "s_max", 0.2, minimum=0)
    quality = cfg.get_float("scan", "quality", 10.0)
    if not quality > 0:
        raise ConfigError(f"[scan] quality = {quality}: must be positive")
    R = cfg.get_int("scan", "n_realizations", 200, minimum=1)
    band = _band(cfg, c, "exact")
    convention, symmetric = _rate_options(cfg)
    rows = []
    random_mean = []
    for n in n_values:
        eq = total_kasha_rate(band, equidistant_modes(n, om, s, quality), convention, symmetric)
        draws = np.empty(R)
        for r in range(R):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, r)))
            draws[r] = total_kasha_rate(band, random_modes(n, om, rng, s_max, quality), convention, symmetric)
        se = draws.std(ddof=1) / np.sqrt(R) if R > 1 else float("nan")
        law = scaling_law(s, om, n)
        closed = kasha_rate_closed_form(equidistant_modes(n, om, s, quality), om)
        rows.append((n, eq / om, draws.mean() / om, se / om, law / om, closed / om))
        random_mean.append(draws.mean())
    out = ExperimentOutput()
    out.tables["scaling"] = (
        [
            "n_max",
            "kappa equidistant [Omega]",
            "kappa random mean [Omega]",
            "kappa random stderr [Omega]",
            "kappa scaling law [Omega]",
            "kappa constant density [Omega]",
        ],
        rows,
    )
    out.summary = linear_scaling_summary(np.array(n_values, dtype=float), np.array(random_mean), s, om)
    return out


def linear_scaling_summary(n_values, kappa, s, omega_nn) -> dict:
    """Linear regression of kappa on n_max compared with the scaling law on the same grid."""
    if n_values.size < 2:
        return {}
    fit = linregress(n_values, kappa)
    law = np.array([scaling_law(s, omega_nn, int(n)) for n in n_values])
    law_fit = linregress(n_values, law)
    return {
        "slope_gamma0": float(fit.slope),
        "r_squared": float(fit.rvalue**2),
        "scaling_law_slope_gamma0": float(law_fit.slope),
        "slope_ratio": float(fit.slope / law_fit.slope),
    }


def exp_mcwf_vs_rate(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    spec, c = _aggregate(cfg, 20)
    om = c.omega_nn
    modes = _modes(cfg, om, 8, 0.1, seed)
    units = _units(cfg, om)
    band = band_exact(c)
    convention, symmetric = _rate_options(cfg)
    kappa = total_kasha_rate(band, modes, convention, symmetric)
    t_max = _horizon(cfg, units, kappa, "3 1/kappa")
    n_times = cfg.get_int("dynamics", "n_times", 61, minimum=2)
    n_traj = cfg.get_int("dynamics", "n_traj", 2000, minimum=1)
    t = np.linspace(0.0, t_max, n_times)
    h = build_effective_hamiltonian(spec.with_modes(modes), c)
    ens = mcwf_run(h, None, t, n_traj, seed, band=band, workers=workers)
    model = build_rate_model(band, modes, convention, symmetric)
    p0 = np.zeros(band.N)
    p0[band.symmetric_index] = 1.0
    traj = integrate_rate_equations(model, p0, t)
    rate, r2 = fit_exponential(t, ens.p_symmetric)
    s_mean = float(np.mean([m.s for m in modes]))
    law = scaling_law(s_mean, om, len(modes))
    out = ExperimentOutput()
    out.tables["symmetric_decay"] = (
        ["time [1/gamma0]", "p_S quantum jumps", "p_S stderr", "p_S rate equations", "exp(-kappa t)", "emitted"],
        [
            (ti, a, b, r, np.exp(-kappa * ti), e)
            for ti, a, b, r, e in zip(t, ens.p_symmetric, ens.p_symmetric_stderr, traj.p_symmetric, ens.emitted)
        ],
    )
    out.summary = {
        "fitted_rate_gamma0": rate,
        "fit_r_squared": r2,
        "kappa_pairwise_gamma0": kappa,
        "kappa_scaling_law_gamma0": law,
        "ratio_to_pairwise": rate / kappa,
        "ratio_to_scaling_law": rate / law,
        "n_traj": n_traj,
    }
    return out


def exp_disorder(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    spec, c = _aggregate(cfg, 20)
    om = c.omega_nn
    modes = _modes(cfg, om, 8, 0.1, seed)
    units = _units(cfg, om)
    band = band_exact(c)
    convention, symmetric = _rate_options(cfg)
    kappa = total_kasha_rate(band, modes, convention, symmetric)
    t_max = _horizon(cfg, units, kappa, "3 1/kappa")
    n_times = cfg.get_int("dynamics", "n_times", 41, minimum=2)
    n_traj = cfg.get_int("dynamics", "n_traj", 100, minimum=1)
    widths = []
    for number, unit in cfg.get_quantity_list("disorder", "widths", "0 Omega, 1 Omega, 2 Omega"):
        try:
            widths.append(units.rate(number, unit))
        except UnitError as exc:
            raise ConfigError(f"[disorder] widths: {exc}") from None
    distribution = cfg.get_str("disorder", "distribution", "uniform", choices=("uniform", "normal"))
    R = cfg.get_int("disorder", "n_realizations", 30, minimum=1)
    specs = [DisorderSpec(w, distribution, R, seed) for w in widths]
    t = np.linspace(0.0, t_max, n_times)
    h = build_effective_hamiltonian(spec.with_modes(modes), c)
    results = disordered_decay_experiment(specs, h, band, t, n_traj, seed=seed, workers=workers)
    header = ["time [1/gamma0]"]
    for w in widths:
        header += [f"p_S width={w / om:.6g} Omega", f"stderr width={w / om:.6g} Omega"]
    rows = [(ti, *[v for res in results for v in (res.p_symmetric[i], res.p_symmetric_stderr[i])]) for i, ti in enumerate(t)]
    out = ExperimentOutput()
    out.tables["disorder"] = (header, rows)
    out.tables["disorder_rates"] = (
        ["width [Omega]", "fitted rate [gamma0]", "stderr [gamma0]", "r_squared", "ratio to clean"],
        [(res.spec.width / om, res.rate, res.rate_stderr, res.r_squared, res.rate / results[0].rate) for res in results],
    )
    out.summary = {"kappa_pairwise_gamma0": kappa, "realizations": R, "trajectories_per_realization": n_traj}
    return out


def exp_table1(cfg: Config, seed: int, workers: int) -> ExperimentOutput:
    names = [n.strip() for n in cfg.get_str("table1", "dyes", ", ".join(BUNDLED)).split(",") if n.strip()]
    rows = []
    flagged = []
    for name in names:
        rec = load_dye(name)
        n_max, s_mean = count_relevant_modes(rec)
        tau = estimate_timescale(rec)
        quoted = rec.quoted_timescale
        dev = tau / quoted - 1 if quoted else float("nan")
        flag = bool(quoted) and abs(dev) > TABLE1_FLAG_TOLERANCE
        if flag:
            flagged.append(rec.name)
        rows.append(
            (rec.name, rec.d, rec.dipole_debye, rec.gamma0, rec.omega_nn, n_max, s_mean, tau,
             quoted if quoted else "", dev, "discrepancy" if flag else "ok")
        )
    out = ExperimentOutput()
    out.tables["table1"] = (
        ["dye", "d [nm]", "dipole [D]", "gamma0 [MHz]", "Omega [THz]", "n_max", "s_mean",
         "timescale [fs]", "quoted timescale [fs]", "relative deviation", "status"],
        rows,
    )
    out.summary = {"flagged": ", ".join(flagged) if flagged else "none"}
    return out


EXPERIMENTS = {
    "band": exp_band,
    "rates": exp_rates,
    "kasha-dynamics": exp_kasha_dynamics,
    "scaling-scan": exp_scaling_scan,
    "mcwf-vs-rate": exp_mcwf_vs_rate,
    "disorder": exp_disorder,
    "table1": exp_table1,
}
TRAJECTORY_EXPERIMENTS = ("kasha-dynamics", "mcwf-vs-rate", "disorder")


def provenance() -> dict:
    return {
        "kasha": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def run_experiment(cfg: Config, out_dir, name: str | None = None) -> ExperimentOutput:
    """Run the experiment named in ``[run] experiment`` (or ``name``) and write its files."""
    if cfg.is_empty() and name is None:
        raise ConfigError(f"empty configuration; choose an experiment from {list(EXPERIMENTS)}")
    configured = cfg.get_str("run", "experiment", name)
    if name is not None and configured != name:
        raise ConfigError(f"[run] experiment = {configured!r} conflicts with the requested {name!r}")
    if configured not in EXPERIMENTS:
        raise ConfigError(f"[run] experiment = {configured!r}: unknown; choose from {list(EXPERIMENTS)}")
    seed = cfg.get_int("run", "seed", 0, minimum=0)
    workers = cfg.get_int("run", "workers", 1, minimum=1)
    result = EXPERIMENTS[configured](cfg, seed, workers)
    cfg.check_unused()

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for table, (header, rows) in result.tables.items():
        write_csv(out / f"{table}.csv", header, rows)
    meta = provenance()
    meta.update({f"result.{k}": _fmt(v) for k, v in result.summary.items()})
    (out / "metadata.ini").write_text(cfg.resolved_text(meta))
    return result
