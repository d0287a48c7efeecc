"""Command-line front door: enumerate, parse, execute, explain, generate
tasks, emit training pairs, run the oracle suites, and serve the HTTP API.

Exit codes: 0 success, 1 domain error (parse failure, no explanation), 2
usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .explain import (
    ExplanationRequest,
    NoValidExplanation,
    check_success,
    explain_naive,
    explain_no_demo,
    explain_no_utterance,
    explain_pruned,
)
from .gridworld import Action, InvalidTrajectory, Trajectory, replay, trajectory_to_dict
from .grammar import (
    ParseError,
    enumerate_sentences,
    normalize,
    parse,
    sentence_text,
    training_corpus,
)
from .programs import (
    ProgramSyntaxError,
    Unsatisfiable,
    consistent_set,
    enumerate_programs,
    execute,
    program_from_text,
    program_to_text,
)
from .service import ServiceConfig, create_app, result_to_dict
from .similarity import (
    DEFAULT_HASH_SEED,
    FluencyModel,
    load_bundled_lexicon,
    load_lexicon,
)
from .tasks import GenerationFailed, generate_tasks, task_from_dict, task_to_dict

DOMAIN_ERROR = 1


def _load_lexicon(path: str | None, hash_seed: int):
    if path:
        return load_lexicon(path, hash_seed=hash_seed)
    return load_bundled_lexicon(hash_seed=hash_seed)


def _emit(data: dict, fmt: str, text_line: str) -> None:
    if fmt == "structured":
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(text_line)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Counterfactual explanations for a grid-world command parser."""


@main.command()
@click.option("--depth", type=int, default=1, show_default=True)
def sentences(depth: int) -> None:
    """Print every bounded-depth grammar sentence, one per line."""
    for s in enumerate_sentences(depth):
        click.echo(sentence_text(s))


@main.command(name="parse")
@click.argument("text")
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text")
def parse_cmd(text: str, fmt: str) -> None:
    """Parse an utterance into a program."""
    try:
        prog = parse(normalize(text))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except ParseError as exc:
        if fmt == "structured":
            payload = {"kind": exc.reason}
            if exc.reason == "unknown_token":
                payload["token"] = exc.token
            else:
                payload["position"] = exc.position
            click.echo(json.dumps(payload))
        elif exc.reason == "unknown_token":
            click.echo(f"parse error: unknown token {exc.token!r}", err=True)
        else:
            click.echo(f"parse error: cannot parse at token {exc.position}", err=True)
        sys.exit(DOMAIN_ERROR)
    _emit({"program": program_to_text(prog)}, fmt, program_to_text(prog))


@main.command(name="execute")
@click.option("--task", "task_file", type=click.Path(exists=True), required=True)
@click.option("--program", "program_text", required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text")
def execute_cmd(task_file: str, program_text: str, fmt: str) -> None:
    """Plan a trajectory for a program in a task's initial world."""
    task = task_from_dict(json.loads(Path(task_file).read_text()))
    try:
        prog = program_from_text(program_text)
    except ProgramSyntaxError as exc:
        raise click.UsageError(str(exc))
    try:
        traj = execute(prog, task.initial)
    except Unsatisfiable as exc:
        click.echo(f"unsatisfiable: {exc}", err=True)
        sys.exit(DOMAIN_ERROR)
    _emit(
        {"trajectory": trajectory_to_dict(traj)},
        fmt,
        " ".join(a.value for a in traj.actions),
    )


@main.command(name="explain")
@click.option("--task", "task_file", type=click.Path(exists=True), required=True)
@click.option("--utterance", required=True)
@click.option("--demo", "demo_file", type=click.Path(exists=True),
              help="JSON file with an 'actions' list; defaults to the task's reference demo.")
@click.option("--method", type=click.Choice(["full", "no_demo", "no_utterance"]), default="full")
@click.option("--depth", type=int, default=None, help="Depth bound (default 2).")
@click.option("--naive", is_flag=True, help="Use the exhaustive scan instead of the pruned search.")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True))
@click.option("--hash-seed", type=int, default=DEFAULT_HASH_SEED, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text")
def explain_cmd(task_file, utterance, demo_file, method, depth, naive, lexicon_path,
                hash_seed, fmt) -> None:
    """Compute the counterfactual explanation for an utterance and a demo."""
    task = task_from_dict(json.loads(Path(task_file).read_text()))
    depth = depth if depth is not None else 2
    if demo_file:
        demo_data = json.loads(Path(demo_file).read_text())
        actions = tuple(Action(a) for a in demo_data["actions"])
        demo = Trajectory(initial=task.initial, actions=actions)
    else:
        demo = task.reference_demo
    try:
        replay(demo)
    except InvalidTrajectory as exc:
        click.echo(f"invalid demonstration at action {exc.index}", err=True)
        sys.exit(DOMAIN_ERROR)
    lex = _load_lexicon(lexicon_path, hash_seed)
    try:
        if method == "no_demo":
            result = explain_no_demo(normalize(utterance), depth, lex)
        elif method == "no_utterance":
            model = FluencyModel(enumerate_sentences(depth))
            result = explain_no_utterance(demo, depth, model)
        else:
            req = ExplanationRequest(
                utterance=normalize(utterance), demonstration=demo, depth_bound=depth
            )
            result = explain_naive(req, lex) if naive else explain_pruned(req, lex)
    except NoValidExplanation as exc:
        click.echo(f"no valid explanation: {exc}", err=True)
        sys.exit(DOMAIN_ERROR)
    _emit(result_to_dict(result), fmt, sentence_text(result.explanation))


@main.command(name="check")
@click.option("--task", "task_file", type=click.Path(exists=True), required=True)
@click.option("--utterance", required=True)
@click.option("--demo", "demo_file", type=click.Path(exists=True))
@click.option("--depth", type=int, default=2, show_default=True)
def check_cmd(task_file, utterance, demo_file, depth) -> None:
    """Check whether an utterance's parse is consistent with a demonstration."""
    task = task_from_dict(json.loads(Path(task_file).read_text()))
    if demo_file:
        demo_data = json.loads(Path(demo_file).read_text())
        demo = Trajectory(
            initial=task.initial, actions=tuple(Action(a) for a in demo_data["actions"])
        )
    else:
        demo = task.reference_demo
    ok = check_success(normalize(utterance), demo, depth)
    click.echo("success" if ok else "failure")
    sys.exit(0 if ok else DOMAIN_ERROR)


@main.command(name="gen-tasks")
@click.option("--n", type=int, default=17, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--width", type=int, default=8, show_default=True)
@click.option("--height", type=int, default=8, show_default=True)
@click.option("--out", type=click.Path(), required=True,
              help="Directory to write one JSON file per task.")
def gen_tasks_cmd(n, seed, width, height, out) -> None:
    """Generate solvable random tasks, deterministic in the seed."""
    try:
        tasks = generate_tasks(n, seed, width=width, height=height)
    except GenerationFailed as exc:
        click.echo(str(exc), err=True)
        sys.exit(DOMAIN_ERROR)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for task in tasks:
        (out_dir / f"{task.id}.json").write_text(json.dumps(task_to_dict(task), indent=2))
    click.echo(f"wrote {len(tasks)} tasks to {out_dir}")


@main.command(name="corpus")
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def corpus_cmd(n, seed) -> None:
    """Emit (sentence, program) training pairs, one JSON object per line."""
    for sentence, prog in training_corpus(n, seed):
        click.echo(json.dumps({"sentence": sentence_text(sentence), "program": program_to_text(prog)}))


@main.command()
@click.option("--seeds", type=int, default=5, show_default=True,
              help="Random (world, demo, utterance) triples for the equivalence check.")
def verify(seeds: int) -> None:
    """Run the oracle suites: enumeration counts, executor soundness, and
    naive-vs-pruned equivalence on random inputs."""
    from .verify import run_verification

    ok = run_verification(seeds=seeds, report=click.echo)
    sys.exit(0 if ok else DOMAIN_ERROR)


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--data-dir", default="data", show_default=True)
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True))
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--hash-seed", type=int, default=DEFAULT_HASH_SEED, show_default=True)
def serve(addr, data_dir, lexicon_path, depth, hash_seed) -> None:
    """Start the HTTP API."""
    import uvicorn

    host, _, port = addr.partition(":")
    config = ServiceConfig(
        data_dir=data_dir,
        lexicon_path=lexicon_path,
        default_depth=depth,
        hash_seed=hash_seed,
    )
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port or 8000))


if __name__ == "__main__":
    main()
