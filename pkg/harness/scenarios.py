"""Scenario runners: trial pools, pooled estimation, singular value traces, rate curves, audits"""

# External imports
import dataclasses
import logging
import pathlib
import time
import typing
import joblib
import numpy
import pandas

# Local imports
from estimation import (
    CMIMO,
    METHODS,
    POLARIZATIONS,
    QMIMO,
    ChannelEstimate,
    estimate_channel,
    estimation_report_frame,
)
from keyrate import (
    KeyRateParams,
    KeyRateResult,
    NumericalDomainError,
    key_rate,
    rate_curve,
)
from linalg2 import adjoint, axis_singular_values, svd2
from .artifacts import ArtifactHandle
from .config import ScenarioConfig, resolve_output_dir
from .errors import ScenarioError
from .pipeline import (
    STATUS_OK,
    FrameStatistics,
    TrialResult,
    estimate_statistics,
    replay_trial,
    report_rows,
    run_trial,
)

logger = logging.getLogger(__name__)

# Module level constants
POOLED = "pooled"
KEYRATE_COLUMNS = [
    "method", "pol", "T_prime", "eps", "I_AB", "chi_BE", "K_asy_bps", "K_fin_bps", "K_asy_raw",
]  # fmt: skip
TRIAL_COLUMNS = ["trial_index", "status", "divergence_step", "frames_used"]
RATECURVE_COLUMNS = [
    "method", "pol", "distance_km", "T", "eps", "K_asy_bps", "K_fin_bps", "I_AB", "chi_BE",
]  # fmt: skip
FIG4_SUMMARY_COLUMNS = [
    "pdl_db", "mean_delta_omega", "mean_omega_gap", "final_avg_delta_eps_x",
    "final_avg_delta_eps_y",
]  # fmt: skip


@dataclasses.dataclass(frozen=True)
class RunReport:
    """Everything a scenario produced, each statistic also written to a CSV artifact"""

    config: ScenarioConfig
    trials: typing.List[TrialResult]
    trial_estimates: typing.Dict[int, typing.Dict[str, ChannelEstimate]]
    pooled: typing.Dict[str, ChannelEstimate]
    delta_eps_pred: numpy.ndarray
    key_rates: typing.Dict[typing.Tuple[str, str], typing.Optional[KeyRateResult]]
    artifacts: typing.Dict[str, pathlib.Path]
    master_seed: int
    wall_clock_s: float

    @property
    def diverged(self) -> typing.List[TrialResult]:
        """Trials that ended in equalizer divergence"""
        return [trial for trial in self.trials if trial.status != STATUS_OK]


def key_rate_params(config: ScenarioConfig, transmittance: float, eps: float) -> KeyRateParams:
    """Key-rate parameters of a scenario at one estimated operating point"""
    settings = config.keyrate
    return KeyRateParams(
        v_a=config.modulation.v_a,
        transmittance=transmittance,
        eps=eps,
        beta=settings.beta,
        f_rep=settings.f_rep,
        overhead_alpha=config.frames.overhead,
        eta_d=settings.eta_d,
        v_el=settings.v_el,
        detection=settings.detection,
        finite_size=settings.finite_size,
    )


def _estimate(
    config: ScenarioConfig, statistics: FrameStatistics, trial_index: typing.Optional[int]
) -> typing.Tuple[typing.Dict[str, ChannelEstimate], numpy.ndarray]:
    """estimate_statistics with errors raised in scenario context"""
    try:
        return estimate_statistics(config, statistics)
    except ValueError as error:
        raise ScenarioError(f"Estimation failed: {error}", trial_index) from error


def _key_rates(
    config: ScenarioConfig, pooled: typing.Dict[str, ChannelEstimate]
) -> typing.Tuple[
    typing.Dict[typing.Tuple[str, str], typing.Optional[KeyRateResult]], pandas.DataFrame
]:
    """Key rate per method and polarization at the pooled estimates"""
    results: typing.Dict[typing.Tuple[str, str], typing.Optional[KeyRateResult]] = {}
    rows = []
    for method, estimate in pooled.items():
        for pol, pol_name in enumerate(POLARIZATIONS):
            t_prime, eps = float(estimate.t_prime[pol]), float(estimate.eps[pol])
            if numpy.isnan(t_prime):
                continue
            try:
                result: typing.Optional[KeyRateResult] = key_rate(
                    key_rate_params(config, t_prime, eps)
                )
            except (NumericalDomainError, ValueError) as error:
                logger.warning("No key rate for %s %s: %s", method, pol_name, error)
                result = None
            results[(method, pol_name)] = result
            rows.append(
                {
                    "method": method,
                    "pol": pol_name,
                    "T_prime": t_prime,
                    "eps": eps,
                    "I_AB": numpy.nan if result is None else result.i_ab,
                    "chi_BE": numpy.nan if result is None else result.chi_be,
                    "K_asy_bps": numpy.nan if result is None else result.k_asy,
                    "K_fin_bps": (
                        numpy.nan if result is None or result.k_fin is None else result.k_fin
                    ),
                    "K_asy_raw": numpy.nan if result is None else result.k_asy_raw,
                }
            )
    return results, pandas.DataFrame(rows, columns=KEYRATE_COLUMNS)


def run_scenario(
    config: ScenarioConfig, handle: typing.Optional[ArtifactHandle] = None
) -> RunReport:
    """
    Runs every trial, pools the surviving ones and evaluates the key rate
    Writes estimation_report.csv, keyrates.csv and trials.csv, plus the per-trial traces when
    run.export_traces is set.
    :param config: Scenario configuration
    :param handle: Output location, defaults to the configured output directory
    :return: The run report
    """
    handle = ArtifactHandle(resolve_output_dir(config)) if handle is None else handle
    started = time.perf_counter()
    logger.info(
        "Running %d trials of %d symbols with master seed %d",
        config.run.trials,
        config.run.symbols_per_trial,
        config.run.master_seed,
    )
    exports = [
        handle.trial_handle(index) if config.run.export_traces else None
        for index in range(config.run.trials)
    ]
    trials = joblib.Parallel(n_jobs=config.run.workers)(
        joblib.delayed(run_trial)(config, index, export=exports[index])
        for index in range(config.run.trials)
    )
    trials = sorted(trials, key=lambda trial: trial.trial_index)
    surviving = [trial for trial in trials if trial.status == STATUS_OK]
    if not surviving:
        raise ScenarioError(f"All {len(trials)} trials diverged")

    rows = []
    trial_estimates = {}
    for trial in surviving:
        estimates, delta = _estimate(config, trial.statistics, trial.trial_index)
        trial_estimates[trial.trial_index] = estimates
        rows += report_rows(trial.trial_index, estimates, delta)
    pooled_statistics = FrameStatistics.empty()
    for trial in surviving:
        pooled_statistics = pooled_statistics.merge(trial.statistics)
    pooled, delta_eps_pred = _estimate(config, pooled_statistics, None)
    rows += report_rows(POOLED, pooled, delta_eps_pred)
    handle.write("estimation_report", estimation_report_frame(rows))

    key_rates, key_rate_frame = _key_rates(config, pooled)
    handle.write("keyrates", key_rate_frame)
    trial_frame = pandas.DataFrame(
        [
            {
                "trial_index": trial.trial_index,
                "status": trial.status,
                "divergence_step": trial.divergence_step,
                "frames_used": trial.frames_used,
            }
            for trial in trials
        ],
        columns=TRIAL_COLUMNS,
    )
    handle.write("trials", trial_frame)

    wall_clock = time.perf_counter() - started
    logger.info(
        "Scenario finished in %.1f s: %d of %d trials pooled",
        wall_clock,
        len(surviving),
        len(trials),
    )
    return RunReport(
        config=config,
        trials=trials,
        trial_estimates=trial_estimates,
        pooled=pooled,
        delta_eps_pred=delta_eps_pred,
        key_rates=key_rates,
        artifacts=dict(handle.paths),
        master_seed=config.run.master_seed,
        wall_clock_s=wall_clock,
    )


def _cumulative_mean(values: numpy.ndarray, start: int) -> numpy.ndarray:
    """Running average from index start onwards, NaN before it"""
    averages = numpy.full(len(values), numpy.nan)
    tail = values[start:]
    averages[start:] = numpy.cumsum(tail) / numpy.arange(1, len(tail) + 1)
    return averages


def fig4_trace(
    config: ScenarioConfig, result: TrialResult
) -> typing.Tuple[pandas.DataFrame, typing.Dict[str, float]]:
    """
    Per-update singular value and underestimation traces of a trial's tap history
    :param config: Configuration the trial ran with
    :param result: A trial run with record_taps
    :return: The undecimated trace and its summary values
    """
    if result.taps is None or len(result.taps) == 0:
        raise ScenarioError("Singular value traces need a trained equalizer", result.trial_index)
    w_eff = adjoint(result.taps)
    left, sigma, _ = svd2(w_eff)
    normalized = sigma / sigma[:, :1]
    omega_x, omega_y = axis_singular_values(left, normalized)
    w0 = w_eff / sigma[:, :1, numpy.newaxis]
    try:
        quantum = estimate_channel(
            result.statistics.moments[QMIMO],
            config.modulation.v_a,
            QMIMO,
            skip_silent=not config.modulation.dual_pol,
        )
    except ValueError as error:
        raise ScenarioError(f"Estimation failed: {error}", result.trial_index) from error
    delta_eps = (1 - numpy.sum(numpy.abs(w0) ** 2, axis=-1)) / quantum.t_prime
    warmup = min(config.equalizer.warmup_frames * config.frames.n_train, len(w_eff) - 1)
    trace = pandas.DataFrame(
        {
            "update_index": numpy.arange(1, len(w_eff) + 1),
            "omega_x": omega_x,
            "omega_y": omega_y,
            "delta_omega": omega_y - omega_x,
            "omega_gap": normalized[:, 0] - normalized[:, 1],
            "delta_eps_x": delta_eps[:, 0],
            "delta_eps_y": delta_eps[:, 1],
            "avg_delta_eps_x": _cumulative_mean(delta_eps[:, 0], warmup),
            "avg_delta_eps_y": _cumulative_mean(delta_eps[:, 1], warmup),
        }
    )
    summary = {
        "mean_delta_omega": float(numpy.mean(trace["delta_omega"].to_numpy()[warmup:])),
        "mean_omega_gap": float(numpy.mean(trace["omega_gap"].to_numpy()[warmup:])),
        "final_avg_delta_eps_x": float(trace["avg_delta_eps_x"].iloc[-1]),
        "final_avg_delta_eps_y": float(trace["avg_delta_eps_y"].iloc[-1]),
    }
    return trace, summary


def run_fig4(
    config: ScenarioConfig, handle: typing.Optional[ArtifactHandle] = None
) -> pandas.DataFrame:
    """
    Runs trial 0 once per PDL value of the sweep, tracing the equalizer's non-unitarity
    Writes fig4_trace_pdl<value>.csv per PDL value, decimated by fig4.stride, and
    fig4_summary.csv.
    :param config: Scenario configuration
    :param handle: Output location, defaults to the configured output directory
    :return: The summary table
    """
    handle = ArtifactHandle(resolve_output_dir(config)) if handle is None else handle
    rows = []
    for pdl_db in config.fig4.pdl_sweep:
        swept = dataclasses.replace(
            config, channel=dataclasses.replace(config.channel, pdl_db=pdl_db)
        )
        result = run_trial(swept, 0, record_taps=True)
        if result.status != STATUS_OK:
            raise ScenarioError(
                f"Equalizer diverged at update {result.divergence_step} with {pdl_db} dB PDL", 0
            )
        trace, summary = fig4_trace(swept, result)
        handle.write(f"fig4_trace_pdl{pdl_db:g}", trace.iloc[:: config.fig4.stride])
        logger.info("PDL %g dB: mean delta omega %.4f", pdl_db, summary["mean_delta_omega"])
        rows.append({"pdl_db": pdl_db, **summary})
    frame = pandas.DataFrame(rows, columns=FIG4_SUMMARY_COLUMNS)
    handle.write("fig4_summary", frame)
    return frame


def run_ratecurve(
    config: ScenarioConfig, handle: typing.Optional[ArtifactHandle] = None
) -> pandas.DataFrame:
    """
    Key rate against distance for the excess noise each method reports, per polarization
    The excess noise comes from [ratecurve] or, with from_scenario set, from a scenario run.
    :param config: Scenario configuration
    :param handle: Output location, defaults to the configured output directory
    :return: The rate-curve table, also written to ratecurve.csv
    """
    handle = ArtifactHandle(resolve_output_dir(config)) if handle is None else handle
    settings = config.ratecurve
    if settings.from_scenario:
        pooled = run_scenario(config, handle).pooled
        eps_by_method = {method: list(pooled[method].eps) for method in pooled}
    else:
        configured = {CMIMO: settings.c_mimo_eps, QMIMO: settings.q_mimo_eps}
        eps_by_method = {method: configured[method] for method in METHODS}
    base = key_rate_params(config, 1.0, 0.0)
    markers = [(marker[0], marker[1]) for marker in settings.markers]
    rows = []
    for method, eps_values in eps_by_method.items():
        for pol_name, eps in zip(POLARIZATIONS, eps_values):
            if numpy.isnan(eps):
                continue
            curve = rate_curve(
                base, settings.distances_km, {method: float(eps)}, settings.loss_db_per_km, markers
            )
            for row in curve:
                row["method"] = row.pop("label")
                row["pol"] = pol_name
            rows += curve
    frame = pandas.DataFrame(rows, columns=RATECURVE_COLUMNS)
    handle.write("ratecurve", frame)
    return frame


def run_audit(
    config: ScenarioConfig,
    trace_dir: typing.Optional[typing.Union[str, pathlib.Path]] = None,
    trial_index: typing.Optional[int] = None,
) -> pandas.DataFrame:
    """
    Re-runs frame processing and estimation from exported trial traces
    :param config: Configuration the traces were produced with
    :param trace_dir: Directory holding the trial_XXX subdirectories, defaults to the output dir
    :param trial_index: Audit one trial only; all exported trials when None
    :return: The per-trial estimation rows, also written to audit_estimation_report.csv
    """
    handle = ArtifactHandle(resolve_output_dir(config) if trace_dir is None else trace_dir)
    indices = range(config.run.trials) if trial_index is None else [trial_index]
    audited = [index for index in indices if handle.has_trial(index)]
    if not audited:
        raise FileNotFoundError(f"No trial traces under {handle.directory}")
    rows = []
    for index in audited:
        try:
            statistics = replay_trial(config, handle.trial_handle(index), index)
        except (ValueError, ArithmeticError) as error:
            raise ScenarioError(f"Replay failed: {error}", index) from error
        estimates, delta = _estimate(config, statistics, index)
        rows += report_rows(index, estimates, delta)
    frame = estimation_report_frame(rows)
    handle.write("audit_estimation_report", frame)
    return frame
