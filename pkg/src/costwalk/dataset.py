"""Corpus ingestion, improving-technology selection and descriptive statistics.

The input format is a long CSV with header ``technology,year,cost`` (an
optional fourth ``sector`` column is accepted as free-form metadata, never
used in computation). Costs must be strictly positive; they are transformed
to natural-log space on ingestion. If a technology's years contain gaps,
the longest contiguous run is kept (the later run on ties) with a warning,
because every formula downstream assumes unit time steps and interpolation
would fabricate data.

A technology is classified as improving when a one-sided t-test on its
first-difference log series rejects "mean change >= 0" at the chosen level
(default 10%).

The package also bundles full-sample summary parameters (drift, volatility,
MA coefficient, sample length) for a 66-technology historical corpus drawn
from the Santa Fe Institute Performance Curve DataBase and supplements; see
``load_reference_params``. These summaries parameterize surrogate corpora
and desk-scale experiments when the underlying cost series are not at hand.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import models
from .series import TechnologySeries
from .stats import OlsFit, ols_fit, one_sided_t_test

__all__ = [
    "DataFormatError",
    "DataWarning",
    "SeriesSummary",
    "MuKRegression",
    "ingest_csv",
    "write_corpus_csv",
    "select_improving",
    "summarize",
    "summarize_corpus",
    "mu_k_regression",
    "write_summary_csv",
    "ReferenceParams",
    "load_reference_params",
    "corpus_template",
]

DEFAULT_ALPHA = 0.10


class DataFormatError(ValueError):
    """Malformed or inconsistent input data."""


class DataWarning(UserWarning):
    """Non-fatal data issue (gaps dropped, degenerate rows excluded...)."""


@dataclass(frozen=True)
class SeriesSummary:
    """Full-sample descriptive statistics for one technology.

    ``mu_full`` and ``k_full`` are the mean and Bessel-corrected standard
    deviation of the annual log-cost changes; ``theta_full`` is the MA(1)
    coefficient from the IMA maximum likelihood fit (NaN when the series is
    too short to fit); ``p_value`` is the one-sided improving-trend test.
    """

    name: str
    sector: str
    n_obs: int
    mu_full: float
    k_full: float
    theta_full: float
    theta_boundary: bool
    p_value: float
    improving: bool


@dataclass(frozen=True)
class MuKRegression:
    """Volatility-vs-drift fits over the improving technologies.

    ``linear`` regresses K on mu; ``log_log`` regresses ln K on ln(-mu)
    (technologies with mu >= 0 or K = 0 are excluded from the latter).
    """

    linear: OlsFit
    log_log: OlsFit
    n_linear: int
    n_log_log: int


def _parse_positive_cost(text: str, line_no: int) -> float:
    try:
        cost = float(text)
    except ValueError:
        raise DataFormatError(f"line {line_no}: cost {text!r} is not a number") from None
    if not math.isfinite(cost) or cost <= 0.0:
        raise DataFormatError(f"line {line_no}: cost must be a finite positive number, got {text}")
    return cost


def _longest_run(years: np.ndarray) -> tuple[int, int]:
    """Bounds (start, stop) of the longest consecutive run; later run wins ties."""
    breaks = np.flatnonzero(np.diff(years) != 1)
    starts = np.concatenate(([0], breaks + 1))
    stops = np.concatenate((breaks + 1, [years.size]))
    lengths = stops - starts
    best = int(np.flatnonzero(lengths == lengths.max())[-1])
    return int(starts[best]), int(stops[best])


def ingest_csv(path: str | Path) -> list[TechnologySeries]:
    """Read a long-format cost CSV into one series per technology.

    Hard errors (``DataFormatError``): missing/invalid header, unparseable
    rows, nonpositive costs, duplicate (technology, year) pairs. Gap years
    reduce a technology to its longest contiguous run with a ``DataWarning``
    naming the dropped span; technologies left with fewer than 2 points are
    dropped entirely, also with a warning.
    """
    path = Path(path)
    by_tech: dict[str, dict[int, float]] = {}
    sectors: dict[str, str] = {}
    with open(path, encoding="utf-8-sig", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: file is empty") from None
        header = [cell.strip().lower() for cell in header]
        if header[:3] != ["technology", "year", "cost"]:
            raise DataFormatError(
                f"{path}: expected header 'technology,year,cost', got {','.join(header)}"
            )
        has_sector = len(header) > 3 and header[3] == "sector"
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 3:
                raise DataFormatError(f"line {line_no}: expected at least 3 columns, got {len(row)}")
            tech = row[0].strip()
            if not tech:
                raise DataFormatError(f"line {line_no}: empty technology name")
            try:
                year = int(row[1].strip())
            except ValueError:
                raise DataFormatError(f"line {line_no}: year {row[1]!r} is not an integer") from None
            cost = _parse_positive_cost(row[2].strip(), line_no)
            obs = by_tech.setdefault(tech, {})
            if year in obs:
                raise DataFormatError(f"line {line_no}: duplicate observation for ({tech}, {year})")
            obs[year] = math.log(cost)
            if has_sector and len(row) > 3 and row[3].strip():
                sectors[tech] = row[3].strip()

    out: list[TechnologySeries] = []
    for tech in sorted(by_tech):
        years = np.array(sorted(by_tech[tech]), dtype=np.int64)
        logs = np.array([by_tech[tech][y] for y in years])
        start, stop = _longest_run(years)
        if stop - start < years.size:
            kept = f"{years[start]}-{years[stop - 1]}"
            dropped = sorted(set(years.tolist()) - set(years[start:stop].tolist()))
            warnings.warn(
                f"{tech}: years are not contiguous; keeping {kept} and dropping {dropped}",
                DataWarning,
                stacklevel=2,
            )
            years = years[start:stop]
            logs = logs[start:stop]
        if years.size < 2:
            warnings.warn(
                f"{tech}: fewer than 2 contiguous observations, series dropped",
                DataWarning,
                stacklevel=2,
            )
            continue
        out.append(
            TechnologySeries(name=tech, years=years, log_costs=logs, sector=sectors.get(tech, ""))
        )
    return out


def write_corpus_csv(path: str | Path, corpus: Iterable[TechnologySeries]) -> None:
    """Serialize series back to the long input format (costs with full precision)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["technology", "year", "cost", "sector"])
        for series in corpus:
            for year, log_cost in zip(series.years, series.log_costs):
                writer.writerow([series.name, int(year), repr(math.exp(log_cost)), series.sector])


def select_improving(
    corpus: Sequence[TechnologySeries], alpha: float = DEFAULT_ALPHA
) -> tuple[list[TechnologySeries], list[TechnologySeries]]:
    """Partition a corpus into (improving, excluded) at significance ``alpha``."""
    improving: list[TechnologySeries] = []
    excluded: list[TechnologySeries] = []
    for series in corpus:
        if series.n_obs < 3:
            raise ValueError(f"{series.name}: need at least 3 observations to test the trend")
        p = one_sided_t_test(series.diffs())
        (improving if p < alpha else excluded).append(series)
    return improving, excluded


def summarize(series: TechnologySeries, alpha: float = DEFAULT_ALPHA) -> SeriesSummary:
    """Full-sample summary: drift, volatility, MA coefficient, trend p-value.

    The MA coefficient comes from the IMA maximum likelihood fit with its own
    free mean. Degenerate series (constant log changes, K = 0) take theta = 0
    by convention since the coefficient is unidentified; series with fewer
    than 4 points report theta as NaN.
    """
    if series.n_obs < 3:
        raise ValueError(f"{series.name}: need at least 3 observations, got {series.n_obs}")
    d = series.diffs()
    mu_full = float(d.mean())
    k_full = float(d.std(ddof=1))
    p_value = one_sided_t_test(d)
    if k_full == 0.0:
        theta, boundary = 0.0, False
    elif series.n_obs < 4:
        theta, boundary = math.nan, False
    else:
        fit = models.fit_ima_mle(series)
        theta, boundary = fit.theta, fit.boundary
    return SeriesSummary(
        name=series.name,
        sector=series.sector,
        n_obs=series.n_obs,
        mu_full=mu_full,
        k_full=k_full,
        theta_full=theta,
        theta_boundary=boundary,
        p_value=p_value,
        improving=p_value < alpha,
    )


def summarize_corpus(
    corpus: Sequence[TechnologySeries], alpha: float = DEFAULT_ALPHA
) -> list[SeriesSummary]:
    return [summarize(series, alpha=alpha) for series in corpus]


def mu_k_regression(summaries: Sequence[SeriesSummary]) -> MuKRegression:
    """Fit K on mu (linear) and ln K on ln(-mu) over improving technologies."""
    used = [s for s in summaries if s.improving]
    if len(used) < 3:
        raise ValueError(f"need at least 3 improving technologies, got {len(used)}")
    mu = np.array([s.mu_full for s in used])
    k = np.array([s.k_full for s in used])
    linear = ols_fit(mu, k)

    ok = (mu < 0) & (k > 0)
    if np.count_nonzero(~ok):
        bad = [s.name for s, good in zip(used, ok) if not good]
        warnings.warn(
            f"log-log fit excludes {len(bad)} technologies with mu >= 0 or K = 0: {bad}",
            DataWarning,
            stacklevel=2,
        )
    if np.count_nonzero(ok) < 3:
        raise ValueError("need at least 3 technologies with mu < 0 and K > 0 for the log-log fit")
    log_log = ols_fit(np.log(-mu[ok]), np.log(k[ok]))
    return MuKRegression(
        linear=linear,
        log_log=log_log,
        n_linear=len(used),
        n_log_log=int(np.count_nonzero(ok)),
    )


def write_summary_csv(path: str | Path, summaries: Iterable[SeriesSummary]) -> None:
    """Emit the descriptive-statistics table, one row per technology."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["technology", "sector", "T", "mu", "p_value", "K", "theta", "improving"])
        for s in summaries:
            writer.writerow(
                [
                    s.name,
                    s.sector,
                    s.n_obs,
                    f"{s.mu_full:.6g}",
                    f"{s.p_value:.6g}",
                    f"{s.k_full:.6g}",
                    f"{s.theta_full:.6g}",
                    int(s.improving),
                ]
            )


@dataclass(frozen=True)
class ReferenceParams:
    """One bundled technology parameter row (full-sample summaries)."""

    name: str
    sector: str
    n_obs: int
    mu: float
    p_value: float
    k: float
    theta: float

    @property
    def improving(self) -> bool:
        return self.p_value < DEFAULT_ALPHA

    @property
    def theta_boundary(self) -> bool:
        return abs(abs(self.theta) - 1.0) < models.THETA_BOUNDARY_TOL


def load_reference_params(improving_only: bool = False) -> list[ReferenceParams]:
    """Bundled 66-technology parameter table (53 improving, 13 excluded)."""
    text = resources.files("costwalk._data").joinpath("reference_params.csv").read_text("utf-8")
    rows = list(csv.DictReader(text.splitlines()))
    out = [
        ReferenceParams(
            name=r["technology"],
            sector=r["sector"],
            n_obs=int(r["T"]),
            mu=float(r["mu"]),
            p_value=float(r["p_value"]),
            k=float(r["K"]),
            theta=float(r["theta"]),
        )
        for r in rows
    ]
    if improving_only:
        out = [r for r in out if r.improving]
    return out


def corpus_template(
    entries: Sequence[ReferenceParams] | Sequence[SeriesSummary],
) -> tuple[tuple[int, float, float], ...]:
    """(n_obs, mu, K) triples for surrogate-corpus generation."""
    triples = []
    for e in entries:
        if isinstance(e, ReferenceParams):
            triples.append((e.n_obs, e.mu, e.k))
        else:
            triples.append((e.n_obs, e.mu_full, e.k_full))
    return tuple(triples)
