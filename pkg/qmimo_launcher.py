"""A command line interface over the dual-polarization CV-QKD simulator
The click group at the top loads the scenario and applies the global overrides.
Below it, one subcommand per runner: simulate, fig4, ratecurve, keyrate and audit.
Finally, main maps failures onto exit codes."""

# External imports
import dataclasses
import json
import logging
import sys
import typing
import click

# Local imports
from estimation import POLARIZATIONS
from harness import (
    POOLED,
    ScenarioConfig,
    config_schema,
    load_config,
    run_audit,
    run_fig4,
    run_ratecurve,
    run_scenario,
)
from keyrate import (
    DETECTIONS,
    HOMODYNE,
    POLICIES,
    POLICY_BOTH,
    FiniteSizeParams,
    KeyRateParams,
    NumericalDomainError,
    holevo_cross_check,
    key_rate,
    optimal_modulation,
)

logger = logging.getLogger("qmimo")

# Module level constants
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_IO = 3
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclasses.dataclass(frozen=True)
class GlobalOptions:
    """Options shared by every subcommand"""

    config_source: typing.Optional[str]
    seed: typing.Optional[int]
    out: typing.Optional[str]
    trials: typing.Optional[int]


def scenario_from_options(options: GlobalOptions) -> ScenarioConfig:
    """
    Loads the configured scenario and applies the command line overrides
    :param options: The global options
    :return: The configuration the subcommand runs with
    """
    if options.config_source is None:
        config = ScenarioConfig()
    else:
        config = load_config(options.config_source)
    overrides: typing.Dict[str, typing.Any] = {}
    if options.seed is not None:
        overrides["master_seed"] = options.seed
    if options.trials is not None:
        overrides["trials"] = options.trials
    if options.out is not None:
        overrides["output_dir"] = options.out
    if overrides:
        config = dataclasses.replace(config, run=dataclasses.replace(config.run, **overrides))
    return config


@click.group()
@click.option("--config", "config_source", help="Preset name or path to a TOML scenario file.")
@click.option("--seed", type=int, help="Master seed, overrides [run].master_seed.")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--trials", type=int, help="Trial count, overrides [run].trials.")
@click.option("--quiet", is_flag=True, help="Log warnings and errors only.")
@click.option("--verbose", is_flag=True, help="Log per-frame detail.")
@click.pass_context
def cli(
    context: click.Context,
    config_source: typing.Optional[str],
    seed: typing.Optional[int],
    out: typing.Optional[str],
    trials: typing.Optional[int],
    quiet: bool,
    verbose: bool,
) -> None:
    """Dual-polarization CV-QKD equalization and trusted-noise correction simulator"""
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    context.obj = GlobalOptions(config_source=config_source, seed=seed, out=out, trials=trials)


@cli.command()
@click.pass_obj
def simulate(options: GlobalOptions) -> None:
    """Runs the scenario's trials and reports the pooled estimates and key rates"""
    report = run_scenario(scenario_from_options(options))
    for method, estimate in report.pooled.items():
        for pol, pol_name in enumerate(POLARIZATIONS):
            click.echo(
                f"{POOLED} {method} {pol_name}: T' = {estimate.t_prime[pol]:.4f}, "
                f"eps = {estimate.eps[pol]:.4f}"
            )
    for (method, pol_name), result in report.key_rates.items():
        rate = "n/a" if result is None else f"{result.k_asy / 1e6:.3f} Mbps"
        click.echo(f"K_asy {method} {pol_name}: {rate}")
    if report.diverged:
        click.echo(f"{len(report.diverged)} trial(s) diverged and were excluded")


@cli.command()
@click.pass_obj
def fig4(options: GlobalOptions) -> None:
    """Traces the equalizer's singular values over the configured PDL sweep"""
    summary = run_fig4(scenario_from_options(options))
    click.echo(summary.to_string(index=False))


@cli.command()
@click.pass_obj
def ratecurve(options: GlobalOptions) -> None:
    """Sweeps the key rate against distance for each method's excess noise"""
    frame = run_ratecurve(scenario_from_options(options))
    click.echo(f"{len(frame)} rate points written")


@cli.command()
@click.option("--trace-dir", type=click.Path(file_okay=False), help="Directory of trial traces.")
@click.option("--trial", "trial_index", type=int, help="Audit a single trial.")
@click.pass_obj
def audit(
    options: GlobalOptions, trace_dir: typing.Optional[str], trial_index: typing.Optional[int]
) -> None:
    """Re-runs estimation from exported trial traces"""
    frame = run_audit(scenario_from_options(options), trace_dir, trial_index)
    click.echo(frame.to_string(index=False))


@cli.command()
def schema() -> None:
    """Prints the configuration schema as JSON"""
    click.echo(json.dumps(config_schema(), indent=2))


@cli.command()
@click.option("--v-a", type=float, default=4.0, show_default=True, help="Alice variance, SNU.")
@click.option("--transmittance", type=float, default=1.0, show_default=True)
@click.option("--eps", type=float, default=0.0, show_default=True, help="Excess noise, SNU.")
@click.option("--beta", type=float, default=0.96, show_default=True)
@click.option("--f-rep", type=float, default=500e6, show_default=True, help="Symbol rate, Hz.")
@click.option("--alpha", type=float, default=0.1, show_default=True, help="Training overhead.")
@click.option("--eta-d", type=float, default=1.0, show_default=True)
@click.option("--v-el", type=float, default=0.0, show_default=True)
@click.option("--detection", type=click.Choice(DETECTIONS), default=HOMODYNE, show_default=True)
@click.option("--n-total", type=int, help="Block length N; enables the finite-size rate.")
@click.option("--n-key", type=int, help="Key symbols n.")
@click.option("--eps-pe", type=float, default=1e-10, show_default=True)
@click.option("--eps-pa", type=float, default=1e-10, show_default=True)
@click.option("--eps-bar", type=float, default=1e-10, show_default=True)
@click.option("--policy", type=click.Choice(POLICIES), default=POLICY_BOTH, show_default=True)
@click.option("--check", is_flag=True, help="Compare both Holevo bound evaluations.")
@click.option("--optimize", is_flag=True, help="Search the rate-maximizing Alice variance.")
def keyrate(**values: typing.Any) -> None:
    """Evaluates the key rate at explicit parameters, without simulation"""
    finite_size = None
    if values["n_total"] is not None or values["n_key"] is not None:
        if values["n_total"] is None or values["n_key"] is None:
            raise click.UsageError("--n-total and --n-key go together")
        finite_size = FiniteSizeParams(
            n_total=values["n_total"],
            n_key=values["n_key"],
            eps_bar=values["eps_bar"],
            eps_pe=values["eps_pe"],
            eps_pa=values["eps_pa"],
            policy=values["policy"],
        )
    params = KeyRateParams(
        v_a=values["v_a"],
        transmittance=values["transmittance"],
        eps=values["eps"],
        beta=values["beta"],
        f_rep=values["f_rep"],
        overhead_alpha=values["alpha"],
        eta_d=values["eta_d"],
        v_el=values["v_el"],
        detection=values["detection"],
        finite_size=finite_size,
    )
    result = key_rate(params)
    click.echo(f"I_AB = {result.i_ab:.6f} bit")
    click.echo(f"chi_BE = {result.chi_be:.6f} bit")
    click.echo(f"K_asy = {result.k_asy:.6e} bit/s")
    if result.k_fin is not None:
        click.echo(f"K_fin = {result.k_fin:.6e} bit/s (Delta = {result.delta:.6f})")
    if values["check"]:
        try:
            closed, numeric, difference = holevo_cross_check(params)
        except NumericalDomainError as error:
            click.echo(f"Holevo cross check skipped: {error}")
        else:
            click.echo(f"Holevo closed form {closed:.12f}, symplectic {numeric:.12f}")
            click.echo(f"Holevo difference {difference:.3e}")
    if values["optimize"]:
        best_v_a, best_rate = optimal_modulation(params)
        click.echo(f"Optimal V_A = {best_v_a:.2f} (K_asy_raw {best_rate:.6e} bit/s)")


def main(argv: typing.Optional[typing.List[str]] = None) -> int:
    """
    Runs the command line interface without exiting the interpreter
    :param argv: Arguments after the program name, sys.argv when None
    :return: 0 on success, 1 for invalid input, 2 for runtime failures, 3 for I/O failures
    """
    try:
        cli.main(args=argv, prog_name="qmimo", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return EXIT_INVALID
    except click.Abort:
        return EXIT_INVALID
    except (RuntimeError, ArithmeticError) as error:
        logger.error("%s", error)
        return EXIT_RUNTIME
    except OSError as error:
        logger.error("%s", error)
        return EXIT_IO
    except ValueError as error:
        logger.error("%s", error)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
