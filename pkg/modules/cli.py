"""
Command-line interface for the QSTS simulator

Exit status: 0 on success, 1 on a usage or validation error, 2 when the
decoy check aborts the protocol.  Identical arguments and seed always
produce identical bytes.
"""
import logging
from pathlib import Path
from typing import List, Optional

import click

from modules import adversary, metrics, protocol, qstate, schema
from modules.errors import QstsError
from modules.protocol import AGENTS, EveModel, Party, ProtocolConfig
from modules.settings import get_settings, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2

AGENT_CHOICE = click.Choice([p.value for p in AGENTS], case_sensitive=False)
EVE_CHOICE = click.Choice([e.value for e in EveModel], case_sensitive=False)
FORMAT_CHOICE = click.Choice(["json", "csv"], case_sensitive=False)


def _emit(text: str, output: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _seed(seed: Optional[int]) -> int:
    return get_settings().seed if seed is None else seed


def _parties(values) -> List[Party]:
    parties = []
    for value in values:
        for name in filter(None, (p.strip().lower() for p in value.split(","))):
            try:
                parties.append(Party(name))
            except ValueError:
                raise click.BadParameter(f"unknown party {name!r}", param_hint="--missing")
    return parties


@click.group()
@click.option("--log-level", default=None, help="Logging level (defaults to QSTS_LOG_LEVEL)")
def cli(log_level):
    """Five-party quantum state sharing simulator"""
    settings = get_settings()
    setup_logging(log_level or settings.log_level)
    qstate.configure(settings)
    protocol.configure(settings)
    adversary.configure(settings)


@cli.command()
@click.option("--m", "m", type=int, default=1, show_default=True, help="Qubits in the secret")
@click.option("--receiver", type=AGENT_CHOICE, default="charlie", show_default=True)
@click.option("--seed", type=int, default=None, envvar="QSTS_SEED")
@click.option("--secret", default="random", show_default=True,
              help='"random" or comma-separated real amplitudes, e.g. 0.6,0.8')
@click.option("--phases", default=None, help="Comma-separated phases in radians")
@click.option("--eve", type=EVE_CHOICE, default="none", show_default=True)
@click.option("--decoys", type=int, default=None, help="Decoy photons per sequence")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def share(m, receiver, seed, secret, phases, eve, decoys, fmt, output):
    """Run one sharing round and print its transcript"""
    if fmt == "csv":
        raise click.UsageError("transcripts are only written as JSON")
    settings = get_settings()
    config = ProtocolConfig(
        m=m,
        receiver=Party(receiver.lower()),
        seed=_seed(seed),
        decoys_per_sequence=settings.decoys_per_sequence if decoys is None else decoys,
        eve=EveModel(eve.lower()),
        decoy_threshold=settings.decoy_threshold,
    ).validate()
    rng = protocol.derive_rng(config.seed)
    state = protocol.parse_secret(secret, m, rng, phases)
    transcript = protocol.run_protocol(config, state, rng)
    _emit(schema.transcript_doc(transcript).model_dump_json(indent=2), output)
    if not transcript.completed:
        click.echo("protocol aborted: decoy check failed", err=True)
        return EXIT_ABORT
    return EXIT_OK


@cli.command()
@click.option("--m", "m", type=int, default=1, show_default=True, help="Qubits in each secret")
@click.option("--runs", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--receiver", type=AGENT_CHOICE, default="charlie", show_default=True)
@click.option("--rotate-receiver", is_flag=True, default=False,
              help="Cycle the receiver through bob1, bob2, bob3 and charlie")
@click.option("--seed", type=int, default=None, envvar="QSTS_SEED")
@click.option("--decoys", type=int, default=None, help="Decoy photons per sequence")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def batch(m, runs, receiver, rotate_receiver, seed, decoys, workers, fmt, output):
    """Many sharing rounds with Haar-random secrets, summarized"""
    settings = get_settings()
    config = ProtocolConfig(
        m=m,
        receiver=Party(receiver.lower()),
        seed=_seed(seed),
        decoys_per_sequence=settings.decoys_per_sequence if decoys is None else decoys,
        decoy_threshold=settings.decoy_threshold,
    ).validate()
    transcripts = protocol.run_batch(
        config, runs, workers=workers or settings.workers, rotate_receiver=rotate_receiver
    )
    stats = protocol.batch_summary(transcripts, settings.fidelity_tolerance, rotate_receiver)
    logger.info("batch m=%d successes=%d/%d", m, stats.successes, stats.runs)
    doc = schema.batch_doc(stats)
    _emit(schema.stats_csv([doc]) if fmt == "csv" else doc.model_dump_json(indent=2), output)
    return EXIT_OK


@cli.command()
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--missing", multiple=True, default=("bob1",), show_default=True,
              help="Controller(s) withholding their parities; repeat or comma-separate, 'none' for the control arm")
@click.option("--receiver", type=AGENT_CHOICE, default="charlie", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=int, default=None, envvar="QSTS_SEED")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def security(m, missing, receiver, trials, seed, workers, fmt, output):
    """Success rate of a receiver missing some controllers' parities"""
    missing = [value for value in missing if value.lower() != "none"]
    rng = protocol.derive_rng(_seed(seed))
    result = adversary.missing_controller_experiment(
        m,
        _parties(missing),
        trials,
        rng,
        receiver=Party(receiver.lower()),
        workers=workers or get_settings().workers,
    )
    doc = schema.success_doc(result)
    _emit(schema.stats_csv([doc]) if fmt == "csv" else doc.model_dump_json(indent=2), output)
    return EXIT_OK


@cli.command()
@click.option("--decoys", type=click.IntRange(min=1), default=100, show_default=True,
              help="Decoy photons per check")
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--eve", type=EVE_CHOICE, multiple=True,
              help="Eavesdropper model(s); defaults to all of them")
@click.option("--seed", type=int, default=None, envvar="QSTS_SEED")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def decoy(decoys, trials, eve, seed, fmt, output):
    """Decoy mismatch rate for each eavesdropper model"""
    models = [EveModel(e.lower()) for e in eve] or list(EveModel)
    docs = []
    for index, model in enumerate(models):
        rng = protocol.derive_rng(_seed(seed), index)
        result = adversary.intercept_resend_experiment(
            decoys, model, trials, rng, threshold=get_settings().decoy_threshold
        )
        docs.append(schema.detection_doc(result))
    if fmt == "csv":
        _emit(schema.stats_csv(docs), output)
    else:
        _emit("[\n" + ",\n".join(d.model_dump_json(indent=2) for d in docs) + "\n]", output)
    return EXIT_OK


@cli.command()
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def efficiency(m, output):
    """Qubit and total efficiency for an m-qubit secret"""
    _emit(schema.efficiency_doc(metrics.efficiency(m)).model_dump_json(indent=2), output)
    return EXIT_OK


@cli.command()
@click.option("--secret", default="0.6,0.8", show_default=True,
              help="Two comma-separated real amplitudes")
@click.option("--phases", default=None)
@click.option("--receiver", type=AGENT_CHOICE, default="charlie", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def oracle(secret, phases, receiver, output):
    """All 64 single-qubit branches, forced by projection"""
    receiver = Party(receiver.lower())
    state = protocol.parse_secret(secret, 1, protocol.derive_rng(0), phases)
    results = protocol.all_branches(state, receiver)
    _emit(schema.oracle_doc(state, receiver, results).model_dump_json(indent=2), output)
    return EXIT_OK


@cli.command()
@click.option("--trials", type=click.IntRange(min=1), default=8000, show_default=True)
@click.option("--seed", type=int, default=None, envvar="QSTS_SEED")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def uniformity(trials, seed, workers, output):
    """Histogram of Alice's GHZ outcomes with a chi-square test"""
    rng = protocol.derive_rng(_seed(seed))
    result = adversary.outcome_uniformity(trials, rng, workers=workers or get_settings().workers)
    _emit(schema.uniformity_doc(result).model_dump_json(indent=2), output)
    return EXIT_OK


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map failures onto exit statuses"""
    try:
        rv = cli.main(args=argv, prog_name="qsts", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except QstsError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK
