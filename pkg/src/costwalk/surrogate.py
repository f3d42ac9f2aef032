"""Surrogate-data Monte Carlo: null distributions, theta estimation, robustness.

The surrogate procedure builds a parametric replica of a corpus: for each
technology it simulates a correlated-random-walk series of the same length
with the technology's own full-sample drift and volatility and a global MA
coefficient theta, then runs the identical rolling-window hindcast on the
replica. Repeating this over many noise realizations yields null
distributions for any statistic of the hindcast (error-growth curves, ECDF
deviation measures), which is the only honest way to test them: hindcast
errors overlap in time, so their correlation structure defeats textbook
sampling theory.

Everything here is deterministic given the configuration: replication r of
experiment component c draws from an independent stream derived from
(seed, c, r), so results are bit-identical no matter how many threads run.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .dataset import SeriesSummary
from .forecast import rescale_scale, variance_factors
from .hindcast import ErrorGrowthCurve, HindcastRecord, error_growth, hindcast_corpus
from .series import TechnologySeries
from .stats import derive_rng, student_t_cdf

__all__ = [
    "SurrogateConfig",
    "NullEnsemble",
    "surrogate_corpus",
    "null_xi_band",
    "DeviationTest",
    "distribution_deviation_test",
    "ThetaWeighted",
    "estimate_theta_weighted",
    "ThetaMatched",
    "estimate_theta_matched",
    "ThetaSweep",
    "theta_forecast_sweep",
    "robustness_suite",
]

DEVIATION_GRID = np.linspace(-15.0, 15.0, 1000)


@dataclass(frozen=True)
class SurrogateConfig:
    """Recipe for one surrogate experiment.

    ``template`` holds one (n_obs, mu, K) triple per technology; simulated
    series match those lengths and parameters, with innovation standard
    deviation sigma = K/sqrt(1+theta^2) so the increment variance equals
    K^2. The Student innovation family models fat-tailed shocks for the
    robustness check and is defined only for theta = 0 (plain random walk).
    """

    replications: int
    theta: float
    m: int
    tau_max: int
    seed: int
    template: tuple[tuple[int, float, float], ...]
    innovation: str = "normal"
    student_df: float | None = None
    weighting: str = "pooled"
    threads: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"need at least 1 replication, got {self.replications}")
        if not self.template:
            raise ValueError("corpus template is empty")
        if self.m < 4:
            raise ValueError(f"window m={self.m} too small; error rescaling needs m > 3")
        if self.tau_max < 1:
            raise ValueError(f"tau_max must be >= 1, got {self.tau_max}")
        if self.innovation not in ("normal", "student"):
            raise ValueError(f"unknown innovation family {self.innovation!r}")
        if self.innovation == "student":
            if self.student_df is None or self.student_df <= 2:
                raise ValueError("student innovations need df > 2")
            if self.theta != 0.0:
                raise ValueError("student innovations are defined for the theta = 0 random walk")
        if self.weighting not in ("pooled", "equal-technology"):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def lengths(self) -> np.ndarray:
        return np.array([t[0] for t in self.template], dtype=np.int64)

    @property
    def drifts(self) -> np.ndarray:
        return np.array([t[1] for t in self.template], dtype=np.float64)

    @property
    def volatilities(self) -> np.ndarray:
        return np.array([t[2] for t in self.template], dtype=np.float64)


@dataclass
class NullEnsemble:
    """Monte Carlo sample of a statistic under the surrogate null.

    ``values`` has one row per replication (columns index horizons when the
    statistic is a curve). Two p-value conventions are exposed: the raw
    share of replications at or above the observed value, and an add-one
    smoothed version (count+1)/(reps+1) that can never return 0.
    """

    statistic: str
    values: np.ndarray
    observed: np.ndarray | float | None = None
    taus: np.ndarray | None = None

    def quantile(self, q: float) -> np.ndarray | float:
        out = np.nanquantile(self.values, q, axis=0)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def quantiles(self) -> dict[str, np.ndarray | float]:
        return {
            "q025": self.quantile(0.025),
            "q500": self.quantile(0.5),
            "q975": self.quantile(0.975),
        }

    def _exceed_counts(self) -> np.ndarray:
        if self.observed is None:
            raise ValueError("no observed statistic attached")
        with np.errstate(invalid="ignore"):
            return np.nansum(self.values >= np.asarray(self.observed), axis=0)

    @property
    def p_raw(self) -> np.ndarray | float:
        p = self._exceed_counts() / self.values.shape[0]
        return float(p) if np.ndim(p) == 0 else p

    @property
    def p_smoothed(self) -> np.ndarray | float:
        p = (self._exceed_counts() + 1.0) / (self.values.shape[0] + 1.0)
        return float(p) if np.ndim(p) == 0 else p


def _innovation_blocks(rng: np.random.Generator, config: SurrogateConfig) -> list[np.ndarray]:
    """Per-series innovation draws; order and block sizes fix the stream."""
    blocks = []
    if config.innovation == "normal":
        scale = 1.0 / math.sqrt(1.0 + config.theta * config.theta)
        for n_obs, _, k in config.template:
            blocks.append(k * scale * rng.standard_normal(n_obs))
    else:
        df = float(config.student_df)
        scale = math.sqrt((df - 2.0) / df)
        for n_obs, _, k in config.template:
            blocks.append(k * scale * rng.standard_t(df, n_obs))
    return blocks


def surrogate_corpus(config: SurrogateConfig, rng: np.random.Generator) -> list[TechnologySeries]:
    """One simulated corpus matching the template lengths and parameters."""
    corpus = []
    for j, ((n_obs, mu, _), v) in enumerate(zip(config.template, _innovation_blocks(rng, config))):
        increments = (mu + v[1:]) + config.theta * v[:-1]
        y = np.concatenate(([0.0], np.cumsum(increments)))
        corpus.append(
            TechnologySeries(
                name=f"surrogate-{j:03d}",
                years=np.arange(1, n_obs + 1, dtype=np.int64),
                log_costs=y,
            )
        )
    return corpus


def _replication_errors(
    config: SurrogateConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(series_idx, tau, norm_error) for one simulated corpus (hot path)."""
    v = np.concatenate(_innovation_blocks(rng, config))
    series_idx, tau, norm, _ = _kernels.corpus_norm_errors(
        config.lengths, config.drifts, config.theta, v, config.m, config.tau_max
    )
    return series_idx, tau, norm


def _xi_from_errors(
    series_idx: np.ndarray, tau: np.ndarray, norm: np.ndarray, config: SurrogateConfig
) -> np.ndarray:
    """Per-horizon Xi (length tau_max, NaN where no records)."""
    tau_max = config.tau_max
    sq = norm * norm
    if config.weighting == "pooled":
        sums = np.bincount(tau - 1, weights=sq, minlength=tau_max)
        counts = np.bincount(tau - 1, minlength=tau_max)
        with np.errstate(invalid="ignore"):
            return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    n_series = len(config.template)
    key = series_idx * tau_max + (tau - 1)
    sums = np.bincount(key, weights=sq, minlength=n_series * tau_max).reshape(n_series, tau_max)
    counts = np.bincount(key, minlength=n_series * tau_max).reshape(n_series, tau_max)
    with np.errstate(invalid="ignore"):
        per_series = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        return np.nanmean(per_series, axis=0)


def _run_replications(
    config: SurrogateConfig,
    per_replication: Callable[[int], np.ndarray],
    width: int,
    stream_tag: int,
) -> np.ndarray:
    """Fill a (replications, width) matrix, optionally with threads.

    Each replication draws from stream (seed, stream_tag, rep), so the
    result is identical however the work is scheduled.
    """
    out = np.empty((config.replications, width))

    def worker(rep: int) -> None:
        out[rep] = per_replication(rep)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            list(pool.map(worker, range(config.replications)))
    else:
        for rep in range(config.replications):
            worker(rep)
    return out


_XI_TAG = 1
_DEVIATION_TAG = 2
_MATCH_TAG_BASE = 100


def null_xi_band(
    config: SurrogateConfig, observed_curve: ErrorGrowthCurve | None = None
) -> NullEnsemble:
    """Null ensemble of error-growth curves, with per-horizon bands.

    When an observed curve is supplied, per-horizon p-values report the
    share of replications whose Xi is at least the observed one.
    """
    if config.replications < 100:
        warnings.warn(
            f"{config.replications} replications give unstable quantile bands; "
            "100 or more are recommended",
            stacklevel=2,
        )

    def one(rep: int) -> np.ndarray:
        rng = derive_rng(config.seed, _XI_TAG, rep)
        return _xi_from_errors(*_replication_errors(config, rng), config)

    values = _run_replications(config, one, config.tau_max, _XI_TAG)
    taus = np.arange(1, config.tau_max + 1, dtype=np.int64)
    observed = None
    if observed_curve is not None:
        observed = np.full(config.tau_max, np.nan)
        for t, x in zip(observed_curve.taus, observed_curve.xi):
            if 1 <= t <= config.tau_max:
                observed[int(t) - 1] = x
    return NullEnsemble(statistic="xi", values=values, observed=observed, taus=taus)


def _rescaled_errors(tau: np.ndarray, norm: np.ndarray, m: int, theta: float) -> np.ndarray:
    scale = np.array(
        [rescale_scale(variance_factors(int(t), m, theta)) for t in range(1, int(tau.max()) + 1)]
    )
    return norm / scale[tau - 1]


def _deviation_stats(eps: np.ndarray, t_cdf_grid: np.ndarray) -> np.ndarray:
    """Three ECDF-deviation measures on the fixed grid: sum|d|, sum d^2, max d."""
    ecdf = np.searchsorted(np.sort(eps), DEVIATION_GRID, side="right") / eps.size
    delta = ecdf - t_cdf_grid
    return np.array([np.abs(delta).sum(), (delta**2).sum(), delta.max()])


@dataclass
class DeviationTest:
    """Observed ECDF deviations from Student t(m-1) and their null p-values."""

    statistic_names: tuple[str, str, str]
    observed: np.ndarray
    null: NullEnsemble

    @property
    def p_raw(self) -> np.ndarray:
        return self.null.p_raw

    @property
    def p_smoothed(self) -> np.ndarray:
        return self.null.p_smoothed


def distribution_deviation_test(
    records: Sequence[HindcastRecord], theta: float, config: SurrogateConfig
) -> DeviationTest:
    """Test whether pooled rescaled errors are as close to t(m-1) as the null.

    The pooled eps* ECDF is measured on 1000 equally spaced points of
    [-15, 15] against the Student t(m-1) CDF under three deviation measures
    (sum of |differences|, sum of squares, signed maximum); the null
    distribution of each measure comes from the full surrogate pipeline.
    """
    window_sizes = {r.m for r in records}
    if window_sizes != {config.m}:
        raise ValueError(f"records use windows {sorted(window_sizes)}, config.m={config.m}")
    t_cdf_grid = np.array([student_t_cdf(x, config.m - 1) for x in DEVIATION_GRID])
    tau_obs = np.array([r.tau for r in records], dtype=np.int64)
    norm_obs = np.array([r.norm_error for r in records])
    keep = tau_obs <= config.tau_max
    observed = _deviation_stats(
        _rescaled_errors(tau_obs[keep], norm_obs[keep], config.m, theta), t_cdf_grid
    )

    def one(rep: int) -> np.ndarray:
        rng = derive_rng(config.seed, _DEVIATION_TAG, rep)
        _, tau, norm = _replication_errors(config, rng)
        return _deviation_stats(_rescaled_errors(tau, norm, config.m, theta), t_cdf_grid)

    values = _run_replications(config, one, 3, _DEVIATION_TAG)
    null = NullEnsemble(statistic="ecdf-deviation", values=values, observed=observed)
    return DeviationTest(
        statistic_names=("sum_abs", "sum_sq", "max_signed"), observed=observed, null=null
    )


@dataclass(frozen=True)
class ThetaWeighted:
    """Forecast-count-weighted average of per-technology MA coefficients."""

    theta_w: float
    per_horizon: np.ndarray
    taus: np.ndarray
    excluded: tuple[str, ...]


def estimate_theta_weighted(
    summaries: Sequence[SeriesSummary],
    records: Sequence[HindcastRecord],
    tau_max: int = 20,
) -> ThetaWeighted:
    """Average the full-sample theta estimates, weighted by forecast counts.

    Technologies whose MA fit hit the +-1 boundary (or could not be fit) are
    excluded. At each horizon the weights are each technology's share of the
    forecast errors available at that horizon; theta_w averages the
    per-horizon means over horizons 1..tau_max.
    """
    usable = {
        s.name: s.theta_full
        for s in summaries
        if not s.theta_boundary and math.isfinite(s.theta_full)
    }
    excluded = tuple(sorted(s.name for s in summaries if s.name not in usable))
    if not usable:
        raise ValueError("every technology is boundary-flagged; theta_w is undefined")

    counts: dict[str, np.ndarray] = {}
    for r in records:
        if r.technology in usable and 1 <= r.tau <= tau_max:
            counts.setdefault(r.technology, np.zeros(tau_max, dtype=np.int64))[r.tau - 1] += 1

    per_horizon = np.full(tau_max, np.nan)
    for t in range(tau_max):
        num = 0.0
        den = 0.0
        for name, c in counts.items():
            if c[t] > 0:
                num += c[t] * usable[name]
                den += c[t]
        if den > 0:
            per_horizon[t] = num / den
    if np.all(np.isnan(per_horizon)):
        raise ValueError("no records at any horizon <= tau_max")
    theta_w = float(np.nanmean(per_horizon))
    return ThetaWeighted(
        theta_w=theta_w,
        per_horizon=per_horizon,
        taus=np.arange(1, tau_max + 1, dtype=np.int64),
        excluded=excluded,
    )


@dataclass(frozen=True)
class ThetaMatched:
    """Global theta matched to the observed error growth.

    ``z_values[i]`` is the mean over horizons of observed Xi divided by the
    null-average Xi at theta_grid[i]; the estimate minimizes |Z - 1|.
    """

    theta_m: float
    theta_grid: np.ndarray
    z_values: np.ndarray
    bracketed: bool


def estimate_theta_matched(
    observed_curve: ErrorGrowthCurve,
    config: SurrogateConfig,
    theta_grid: Sequence[float],
) -> ThetaMatched:
    """Pick theta so surrogate error growth matches the observed curve."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    if theta_grid.size == 0:
        raise ValueError("theta grid is empty")
    if np.any(np.abs(theta_grid) >= 1.0):
        raise ValueError("theta grid must lie strictly inside (-1, 1)")
    max_simulable_tau = int(max(t[0] for t in config.template)) - config.m - 1
    keep = (observed_curve.taus <= config.tau_max) & (observed_curve.taus <= max_simulable_tau)
    taus = observed_curve.taus[keep]
    xi_obs = observed_curve.xi[keep]
    if taus.size == 0:
        raise ValueError(
            "observed curve has no horizons that are both within tau_max and "
            "reachable by the template series"
        )

    z_values = np.empty(theta_grid.size)
    for gi, theta in enumerate(theta_grid):
        cfg = SurrogateConfig(
            replications=config.replications,
            theta=float(theta),
            m=config.m,
            tau_max=config.tau_max,
            seed=config.seed,
            template=config.template,
            innovation=config.innovation,
            student_df=config.student_df,
            weighting=config.weighting,
            threads=config.threads,
        )

        def one(rep: int) -> np.ndarray:
            rng = derive_rng(config.seed, _MATCH_TAG_BASE + gi, rep)
            return _xi_from_errors(*_replication_errors(cfg, rng), cfg)

        values = _run_replications(cfg, one, cfg.tau_max, _MATCH_TAG_BASE + gi)
        xi_sim = np.nanmean(values[:, taus - 1], axis=0)  # kept horizons are simulable
        z_values[gi] = float(np.mean(xi_obs / xi_sim))

    signs = np.sign(z_values - 1.0)
    bracketed = bool(np.any(signs > 0) and np.any(signs < 0))
    if not bracketed:
        warnings.warn(
            "Z(theta) - 1 does not change sign over the grid; "
            "returning the boundary argmin",
            stacklevel=2,
        )
    theta_m = float(theta_grid[int(np.argmin(np.abs(z_values - 1.0)))])
    return ThetaMatched(
        theta_m=theta_m, theta_grid=theta_grid, z_values=z_values, bracketed=bracketed
    )


@dataclass(frozen=True)
class ThetaSweep:
    """Forecast quality of the MA-adjusted point forecast across theta values.

    ``ratios[g, h]`` is the mean squared normalized error using
    theta_grid[g] at horizons[h], divided by the plain random-walk
    (theta = 0) value.
    """

    theta_grid: np.ndarray
    horizons: np.ndarray
    ratios: np.ndarray
    best_theta: np.ndarray


def theta_forecast_sweep(
    corpus: Sequence[TechnologySeries],
    m: int,
    theta_grid: Sequence[float],
    horizons: Sequence[int],
) -> ThetaSweep:
    """Sweep the MA coefficient used in point forecasts.

    Forecasts keep the rolling-window drift estimate and add the MA
    correction theta*v_hat(t0), where the innovation recursion is started at
    zero at the beginning of each window (the window is too short to infer
    the pre-window innovation). Errors are normalized per window and pooled
    per horizon.
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    horizons = np.asarray(sorted(set(int(h) for h in horizons)), dtype=np.int64)
    if horizons.size == 0 or horizons.min() < 1:
        raise ValueError("horizons must be positive integers")
    all_thetas = np.concatenate((theta_grid, [0.0]))  # last column is the baseline
    acc = np.zeros((all_thetas.size, horizons.size))
    cnt = np.zeros(horizons.size, dtype=np.int64)

    for series in corpus:
        y = series.log_costs
        T = y.size
        if T < m + 2:
            continue
        d = np.diff(y)
        for i in range(m, T - 1):
            mu = (y[i] - y[i - m]) / m
            window = d[i - m : i]
            k2 = float(((window - mu) ** 2).sum()) / (m - 1)
            if k2 <= 0.0:
                continue
            v_hat = np.zeros(all_thetas.size)
            for dt in window:
                v_hat = (dt - mu) - all_thetas * v_hat
            for hi, h in enumerate(horizons):
                if h > T - 1 - i:
                    break  # horizons are sorted; later ones are infeasible too
                e = (y[i + h] - y[i] - mu * h) - all_thetas * v_hat
                acc[:, hi] += e * e / k2
                cnt[hi] += 1
    if np.any(cnt == 0):
        missing = horizons[cnt == 0].tolist()
        raise ValueError(f"no feasible forecasts at horizons {missing}")
    mse = acc / cnt
    baseline = mse[-1]
    ratios = mse[:-1] / baseline
    best_theta = theta_grid[np.argmin(mse[:-1], axis=0)]
    return ThetaSweep(
        theta_grid=theta_grid, horizons=horizons, ratios=ratios, best_theta=best_theta
    )


def _curve_as_dict(curve: ErrorGrowthCurve, m: int, theta: float) -> dict:
    return {
        "tau": curve.taus.tolist(),
        "xi_empirical": curve.xi.tolist(),
        "n_forecasts": curve.n_forecasts.tolist(),
        "n_technologies": curve.n_technologies.tolist(),
        "xi_pred_theta0": [variance_factors(int(t), m, 0.0).xi for t in curve.taus],
        "xi_pred_theta": [variance_factors(int(t), m, theta).xi for t in curve.taus],
    }


def _vary_window(
    corpus: Sequence[TechnologySeries], ms: Sequence[int], theta: float, tau_max: int
) -> list[dict]:
    out = []
    for m in ms:
        usable = [s for s in corpus if s.n_obs >= m + 2]
        entry: dict = {"m": int(m), "n_series_used": len(usable)}
        if not usable:
            entry["note"] = f"no series has the m + 2 = {m + 2} points needed"
            out.append(entry)
            continue
        result = hindcast_corpus(usable, m, tau_max=tau_max)
        curve = error_growth(result.records)
        entry["curve"] = _curve_as_dict(curve, m, theta)
        entry["skipped_zero_volatility"] = result.skipped_zero_volatility
        out.append(entry)
    return out


def _half_corpus(
    records: Sequence[HindcastRecord], trials: int, tau_max: int, seed: int
) -> dict:
    """Subsample half the technologies many times; band the resulting curves."""
    names = sorted({r.technology for r in records})
    n_half = len(names) // 2
    if n_half < 1:
        raise ValueError("need at least 2 technologies to subsample")
    index = {name: i for i, name in enumerate(names)}
    tech = np.array([index[r.technology] for r in records])
    tau = np.array([r.tau for r in records], dtype=np.int64)
    sq = np.array([r.norm_error for r in records]) ** 2
    keep = tau <= tau_max
    tech, tau, sq = tech[keep], tau[keep], sq[keep]
    key = tech * tau_max + (tau - 1)
    sums = np.bincount(key, weights=sq, minlength=len(names) * tau_max).reshape(
        len(names), tau_max
    )
    counts = np.bincount(key, minlength=len(names) * tau_max).reshape(len(names), tau_max)

    curves = np.empty((trials, tau_max))
    for trial in range(trials):
        rng = derive_rng(seed, 3, trial)
        chosen = rng.choice(len(names), size=n_half, replace=False)
        s = sums[chosen].sum(axis=0)
        c = counts[chosen].sum(axis=0)
        with np.errstate(invalid="ignore"):
            curves[trial] = np.where(c > 0, s / np.maximum(c, 1), np.nan)
    full_counts = counts.sum(axis=0)
    with np.errstate(invalid="ignore"):
        full = np.where(full_counts > 0, sums.sum(axis=0) / np.maximum(full_counts, 1), np.nan)
    lo = np.nanquantile(curves, 0.025, axis=0)
    hi = np.nanquantile(curves, 0.975, axis=0)
    valid = ~np.isnan(full)
    inside = np.mean((full[valid] >= lo[valid]) & (full[valid] <= hi[valid]))
    return {
        "trials": trials,
        "subset_size": n_half,
        "tau": list(range(1, tau_max + 1)),
        "q025": lo.tolist(),
        "q975": hi.tolist(),
        "full_corpus_xi": full.tolist(),
        "share_inside_band": float(inside),
    }


def _fat_tails(
    template: tuple[tuple[int, float, float], ...],
    dfs: Sequence[float],
    m: int,
    tau_max: int,
    replications: int,
    seed: int,
    theta: float,
    threads: int = 1,
) -> dict:
    """Mean error growth for fat-tailed random walks vs normal RWD and IMA."""

    def mean_curve(cfg: SurrogateConfig, tag: int) -> list[float]:
        def one(rep: int) -> np.ndarray:
            rng = derive_rng(cfg.seed, tag, rep)
            return _xi_from_errors(*_replication_errors(cfg, rng), cfg)

        return np.nanmean(_run_replications(cfg, one, cfg.tau_max, tag), axis=0).tolist()

    base = dict(replications=replications, m=m, tau_max=tau_max, seed=seed, template=template,
                threads=threads)
    report: dict = {
        "tau": list(range(1, tau_max + 1)),
        "normal_rwd": mean_curve(SurrogateConfig(theta=0.0, **base), 4),
        "ima": mean_curve(SurrogateConfig(theta=theta, **base), 5),
        "student": {},
    }
    for df_i, df in enumerate(dfs):
        cfg = SurrogateConfig(theta=0.0, innovation="student", student_df=float(df), **base)
        report["student"][f"df={df:g}"] = mean_curve(cfg, 6 + df_i)
    return report


def robustness_suite(
    corpus: Sequence[TechnologySeries],
    *,
    m: int = 5,
    tau_max: int = 20,
    theta: float = 0.0,
    seed: int = 0,
    replications: int = 200,
    vary_m: Sequence[int] | None = None,
    half_dataset_trials: int | None = None,
    extended_tau_max: int | None = None,
    fat_tail_dfs: Sequence[float] | None = None,
    template: tuple[tuple[int, float, float], ...] | None = None,
    threads: int = 1,
) -> dict:
    """Run the requested robustness experiments and return a JSON-ready report.

    ``vary_m`` reruns the hindcast at each window size with the analytic
    overlay; ``half_dataset_trials`` resamples half the technologies and
    bands the error growth; ``extended_tau_max`` lifts the horizon cap;
    ``fat_tail_dfs`` compares Student-increment random walks against the
    normal and correlated baselines (needs a template, built from the corpus
    differences when not supplied).
    """
    report: dict = {
        "m": m,
        "tau_max": tau_max,
        "theta": theta,
        "seed": seed,
    }
    base_result = hindcast_corpus(corpus, m, tau_max=tau_max)
    if vary_m is not None:
        report["vary_m"] = _vary_window(corpus, vary_m, theta, tau_max)
    if half_dataset_trials is not None:
        report["half_dataset"] = _half_corpus(base_result.records, half_dataset_trials, tau_max, seed)
    if extended_tau_max is not None:
        ext = hindcast_corpus(corpus, m, tau_max=extended_tau_max)
        report["extended_tau"] = {
            "tau_max": extended_tau_max,
            "curve": _curve_as_dict(error_growth(ext.records), m, theta),
        }
    if fat_tail_dfs is not None:
        if template is None:
            template = tuple(
                (s.n_obs, float(np.mean(np.diff(s.log_costs))), float(np.std(np.diff(s.log_costs), ddof=1)))
                for s in corpus
            )
        report["fat_tails"] = _fat_tails(
            template, fat_tail_dfs, m, tau_max, replications, seed, theta, threads=threads
        )
    return report
