"""
Command-line interface: run a simulation, report coefficients, run the
identity suites or certify a ledger.

    python -m leslie run --config run.cfg --out runs/twist
    python -m leslie check-coefficients --config run.cfg
    python -m leslie verify-identities --seed 7
    python -m leslie certify-ledger runs/twist/ledger.csv
"""

import argparse
import math
import pathlib
import sys
import attr
from leslie import coefficients, diagnostics, fields, verify
from leslie.config import ConfigValidationError, load_config
from leslie.dynamics import NumericalFailure, run, step_count
from leslie.log import enable_logging, log, warn
from leslie.presets import initial_preset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECK = 4

# ParseError, ConfigValidationError, BadParams, UnknownPreset, snapshot and
# ledger format errors are all ValueErrors
CONFIG_ERRORS = (ValueError, OSError)


def coefficient_report(derived, elastic=None):
    """
    `name=value` lines for the derived coefficients and the 2-D verdict.
    """
    lines = [
        f"{name}={getattr(derived, name):.12g}"
        for name in ("gamma1", "gamma2", "mu1", "mu2", "beta1", "beta2", "beta3")
    ]
    if elastic is not None:
        lines.append(f"a={elastic.a:.12g}")
    verdict = coefficients.admissible(derived.betas, dim=2)
    lines.append("admissible (2-D)" if verdict else "inadmissible (2-D)")
    return lines


def _snapshot_name(kind, step):
    return f"{kind}_{step:06d}.el2d"


@attr.s(eq=False)
class RunRecorder:  # pylint: disable=too-many-instance-attributes
    """
    Observer writing ledger rows, snapshots and monitor samples of a run.

    Ledger rows (and the monitor samples) are taken every `ledger_stride`
    steps, so their times are uniformly spaced.
    """

    config = attr.ib()
    directory = attr.ib(converter=pathlib.Path)
    ledger_file = attr.ib()
    total_steps = attr.ib()
    entries = attr.ib(factory=list)
    rows = attr.ib(factory=list)
    snapshot_steps = attr.ib(factory=set)
    probes = attr.ib(init=False)

    @probes.default
    def _probes(self):
        config = self.config
        return [
            diagnostics.MonotonicityProbe(
                point, config.monitors.radius, config.coefficients, config.elastic
            )
            for point in config.monitors.points
        ]

    def __call__(self, step, state):
        output = self.config.output
        snapshot_stride = output.snapshot_stride
        if step == 0 or (snapshot_stride > 0 and step % snapshot_stride == 0):
            self.write_snapshot(step, state)
        if step % output.ledger_stride == 0:
            self.record(state)
            for probe in self.probes:
                probe(step, state)

    def write_snapshot(self, step, state):
        """
        Write director and velocity snapshots for `step` (once per step).
        """
        if step in self.snapshot_steps:
            return
        snapshots = self.directory / "snapshots"
        snapshots.mkdir(parents=True, exist_ok=True)
        grid = state.grid
        fields.write_snapshot(
            snapshots / _snapshot_name("director", step),
            fields.Field(grid, state.n),
            state.t,
        )
        fields.write_snapshot(
            snapshots / _snapshot_name("velocity", step),
            fields.Field(grid, state.v),
            state.t,
        )
        self.snapshot_steps.add(step)

    def record(self, state):
        """
        Append one ledger row for `state` and flush it to the CSV.
        """
        config = self.config
        entry = diagnostics.ledger(state, config.coefficients, config.elastic)
        violations = diagnostics.sign_violations(entry)
        if violations:
            warn(f"dissipation sign violation at t={state.t!r}: {violations}")
        self.entries.append(entry)
        ((conc_x, conc_y), conc_max) = diagnostics.concentration_max(
            state, config.monitors.radius, config.monitors.stride
        )
        row = diagnostics.LedgerRow(
            ledger=entry,
            residual=diagnostics.energy_law_residual(self.entries),
            blowup=diagnostics.blowup_indicator(state),
            conc_max=conc_max,
            conc_x=conc_x,
            conc_y=conc_y,
        )
        self.rows.append(row)
        self.ledger_file.write(row.to_line() + "\n")
        self.ledger_file.flush()

    def summary_lines(self):
        """
        `name=value` lines summarizing the recorded rows and monitors.
        """
        times = [row.ledger.t for row in self.rows]
        lines = [
            f"steps={self.total_steps}",
            f"t_final={diagnostics.format_float(times[-1])}",
            f"energy_law_residual={diagnostics.format_float(self.rows[-1].residual)}",
            "largest_energy_increase="
            + diagnostics.format_float(diagnostics.largest_energy_increase(self.entries)),
            "blowup_integral="
            + diagnostics.format_float(
                diagnostics.time_integral(times, [row.blowup for row in self.rows])
            ),
            "concentration_sup="
            + diagnostics.format_float(max(row.conc_max for row in self.rows)),
        ]
        for probe in self.probes:
            (x1, x2) = probe.center
            ratio = probe.report().sup_ratio
            lines.append(
                f"monotonicity_sup_ratio[{x1:g} {x2:g}]={diagnostics.format_float(ratio)}"
            )
        lines.append(f"admissible={'yes' if self.config.admissible else 'no'}")
        return lines


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as output:
        for line in lines:
            output.write(line + "\n")


def run_simulation(config, directory=None):
    """
    Run `config` and write its artifacts; returns the RunRecorder.

    The run directory receives the config echo, `coefficients.txt`,
    `ledger.csv`, `snapshots/` and `summary.txt`.
    """
    directory = pathlib.Path(directory or config.output.directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_lines(directory / "config.cfg", config.echo_lines())
    _write_lines(
        directory / "coefficients.txt", coefficient_report(config.coefficients, config.elastic)
    )
    initial = initial_preset(config.initial.preset, config.initial.params, config.grid)
    total_steps = step_count(initial.t, config.t_end, config.solver.dt)
    log(f"running {config.initial.preset} for {total_steps} steps into {directory}")
    with open(directory / "ledger.csv", "w", encoding="utf-8") as ledger_file:
        ledger_file.write(diagnostics.LEDGER_HEADER + "\n")
        recorder = RunRecorder(
            config=config,
            directory=directory,
            ledger_file=ledger_file,
            total_steps=total_steps,
        )
        trajectory = run(
            initial,
            config.solver,
            config.coefficients,
            config.elastic,
            config.t_end,
            observers=[recorder],
            stride=math.gcd(config.output.ledger_stride, config.output.snapshot_stride),
        )
    recorder.write_snapshot(trajectory.steps, trajectory.final)
    _write_lines(directory / "summary.txt", recorder.summary_lines())
    log(f"wrote {len(recorder.rows)} ledger rows to {directory / 'ledger.csv'}")
    return recorder


def certify_ledger(path, file=sys.stdout):
    """
    Print the energy-law residual and any sign violations of a ledger CSV.

    Returns EXIT_CHECK if a row has a dissipation sign violation.
    """
    with open(path, encoding="utf-8") as ledger_file:
        rows = diagnostics.read_ledger(ledger_file)
    entries = [row.ledger for row in rows]
    residual = diagnostics.energy_law_residual(entries)
    print(f"rows={len(rows)}", file=file)
    print(f"energy_law_residual={diagnostics.format_float(residual)}", file=file)
    print(
        "largest_energy_increase="
        + diagnostics.format_float(diagnostics.largest_energy_increase(entries)),
        file=file,
    )
    exit_code = EXIT_OK
    for entry in entries:
        violations = diagnostics.sign_violations(entry)
        if violations:
            print(f"t={diagnostics.format_float(entry.t)}: {','.join(violations)}", file=file)
            exit_code = EXIT_CHECK
    return exit_code


def _load(args):
    if args.config is None:
        raise ConfigValidationError("required key", "--config is required")
    return load_config(args.config)


def _command_run(args):
    config = _load(args)
    run_simulation(config, args.out)
    return EXIT_OK


def _command_check_coefficients(args):
    config = _load(args)
    for line in coefficient_report(config.coefficients, config.elastic):
        print(line)
    return EXIT_OK


def _command_verify_identities(args):
    return verify.run_suites(args.seed, args.n_points, args.cases)


def _command_certify_ledger(args):
    return certify_ledger(args.LEDGER)


def main(args):
    """
    Entrypoint for the CLI tool.
    """
    enable_logging(quiet=args.quiet)
    try:
        return args.command(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


COMMON = argparse.ArgumentParser(add_help=False)
COMMON.add_argument("--config", type=pathlib.Path, help="Run configuration file")
COMMON.add_argument("--out", type=pathlib.Path, help="Run directory (overrides output.directory)")
COMMON.add_argument("--quiet", action="store_true", help="Only log warnings and errors")

PARSER = argparse.ArgumentParser(
    description="Simulate and verify the 2-D Ericksen-Leslie system"
)
SUBPARSERS = PARSER.add_subparsers(required=True, metavar="COMMAND")

RUN = SUBPARSERS.add_parser("run", parents=[COMMON], help="Run a simulation")
RUN.set_defaults(command=_command_run)

CHECK = SUBPARSERS.add_parser(
    "check-coefficients",
    parents=[COMMON],
    help="Print the derived coefficients and the admissibility verdict",
)
CHECK.set_defaults(command=_command_check_coefficients)

VERIFY = SUBPARSERS.add_parser(
    "verify-identities",
    parents=[COMMON],
    help="Run the identity suites on seeded random states",
)
verify.add_arguments(VERIFY)
VERIFY.set_defaults(command=_command_verify_identities)

CERTIFY = SUBPARSERS.add_parser(
    "certify-ledger",
    parents=[COMMON],
    help="Report the energy-law residual and sign violations of a ledger",
)
CERTIFY.add_argument("LEDGER", type=pathlib.Path, help="ledger.csv of a run")
CERTIFY.set_defaults(command=_command_certify_ledger)
