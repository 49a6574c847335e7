"""Command-line front end: induce, sweep, evaluate, probe, serve, export.

Exit codes: 0 success, 1 user error (bad flags, bad data, bad config),
2 internal error.
"""

from __future__ import annotations

import json
import sys
import traceback

import click
import numpy as np

from . import data_registry
from .dataset import split_train_test
from .errors import RuleLensError
from .explain import MinerConfig, induce as run_induce, sampling_rate_sweep, sweep_to_csv
from .explain import probe as run_probe
from .payload import build_matrix_payload
from .rulelist import McmcConfig
from .serialize import bundle_from_json, bundle_to_json
from .teacher_spec import resolve_teacher


def _load_split(data: str, data_dir: str | None, test_fraction: float, split_seed: int):
    table = data_registry.resolve_table(data, data_dir)
    return split_train_test(table, test_fraction, split_seed)


def _common_mcmc(iterations: int, chains: int) -> McmcConfig:
    return McmcConfig(iterations=iterations, chains=chains)


data_option = click.option("--data", required=True, help="dataset name (built-in or file pair in the data directory)")
data_dir_option = click.option("--data-dir", default=None, envvar="RULELENS_DATA_DIR",
                               help="directory holding <name>.csv + <name>.schema.json")
teacher_option = click.option("--teacher", default="mlp:50", show_default=True,
                              help="mlp:H1,H2,... | 1nn | external:COMMAND")


@click.group()
def cli():
    """Extract and inspect rule-list explanations of black-box classifiers."""


@cli.command("induce")
@data_option
@data_dir_option
@teacher_option
@click.option("--rate", default=4.0, show_default=True, help="samples per training row")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="bundle JSON path")
@click.option("--test-fraction", default=0.25, show_default=True)
@click.option("--split-seed", default=7, show_default=True)
@click.option("--teacher-seed", default=0, show_default=True)
@click.option("--epochs", default=40, show_default=True)
@click.option("--l2", default=1.0, show_default=True)
@click.option("--iterations", default=10000, show_default=True)
@click.option("--chains", default=2, show_default=True)
@click.option("--min-support", default=0.02, show_default=True)
@click.option("--max-cardinality", default=3, show_default=True)
def cmd_induce(data, data_dir, teacher, rate, seed, out, test_fraction, split_seed,
               teacher_seed, epochs, l2, iterations, chains, min_support, max_cardinality):
    """Induce a rule list and write the explanation bundle JSON."""
    train, test = _load_split(data, data_dir, test_fraction, split_seed)
    oracle = resolve_teacher(teacher, train, seed=teacher_seed, l2_penalty=l2, epochs=epochs)
    bundle = run_induce(
        train, oracle, rate, test=test, seed=seed,
        miner=MinerConfig(min_support=min_support, max_cardinality=max_cardinality),
        mcmc=_common_mcmc(iterations, chains),
    )
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(bundle_to_json(bundle, oracle), fh, sort_keys=True)
    o = bundle.overall
    click.echo(f"wrote {out}: {len(bundle.rule_list.rules) - 1} rules + default, "
               f"train fidelity {o.fidelity_train:.3f}, test fidelity {o.fidelity_test:.3f}")


@cli.command("sweep")
@data_option
@data_dir_option
@teacher_option
@click.option("--rates", default="0.25,0.5,1.0,2.0,4.0,8.0", show_default=True)
@click.option("--repeats", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="CSV path")
@click.option("--test-fraction", default=0.25, show_default=True)
@click.option("--split-seed", default=7, show_default=True)
@click.option("--teacher-seed", default=0, show_default=True)
@click.option("--epochs", default=40, show_default=True)
@click.option("--iterations", default=10000, show_default=True)
@click.option("--chains", default=2, show_default=True)
def cmd_sweep(data, data_dir, teacher, rates, repeats, seed, out, test_fraction,
              split_seed, teacher_seed, epochs, iterations, chains):
    """Benchmark fidelity and list length across sampling rates; write CSV."""
    try:
        rate_list = [float(tok) for tok in rates.split(",") if tok.strip()]
    except ValueError:
        raise click.UsageError(f"bad --rates list: {rates!r}") from None
    if not rate_list:
        raise click.UsageError("--rates must name at least one rate")
    train, test = _load_split(data, data_dir, test_fraction, split_seed)
    oracle = resolve_teacher(teacher, train, seed=teacher_seed, epochs=epochs)
    rows = sampling_rate_sweep(train, test, oracle, rate_list, repeats, seed=seed,
                               mcmc=_common_mcmc(iterations, chains))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(sweep_to_csv(rows))
    click.echo(f"wrote {out}: {len(rows)} rate rows x {repeats} repeats")


@cli.command("evaluate")
@click.option("--data", default="iris", show_default=True, help="comma-separated dataset names")
@data_dir_option
@click.option("--teacher", default="mlp:50", show_default=True, help="comma-separated teacher specs")
@click.option("--rate", default=4.0, show_default=True)
@click.option("--repeats", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--test-fraction", default=0.25, show_default=True)
@click.option("--split-seed", default=7, show_default=True)
@click.option("--epochs", default=40, show_default=True)
@click.option("--iterations", default=10000, show_default=True)
@click.option("--chains", default=2, show_default=True)
def cmd_evaluate(data, data_dir, teacher, rate, repeats, seed, test_fraction,
                 split_seed, epochs, iterations, chains):
    """Print mean (sd) test fidelity per dataset/teacher, benchmark style."""
    names = [tok.strip() for tok in data.split(",") if tok.strip()]
    specs = [tok.strip() for tok in teacher.split(",") if tok.strip()]
    click.echo(f"{'dataset':<16}" + "".join(f"{s:>18}" for s in specs))
    for name in names:
        train, test = _load_split(name, data_dir, test_fraction, split_seed)
        cells = []
        for spec in specs:
            oracle = resolve_teacher(spec, train, seed=0, epochs=epochs)
            fids = []
            for r in range(repeats):
                bundle = run_induce(train, oracle, rate, test=test, seed=seed + r,
                                    mcmc=_common_mcmc(iterations, chains))
                fids.append(bundle.overall.fidelity_test)
            sd = float(np.std(fids, ddof=1)) if repeats > 1 else 0.0
            cells.append(f"{100 * float(np.mean(fids)):.1f} ({100 * sd:.1f})")
        click.echo(f"{name:<16}" + "".join(f"{c:>18}" for c in cells))


@cli.command("probe")
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--instance", required=True, help="comma-separated raw feature values")
def cmd_probe(bundle_path, instance):
    """Predict one instance with both the teacher and the rule list."""
    with open(bundle_path, encoding="utf-8") as fh:
        bundle, teacher = bundle_from_json(json.load(fh))
    if teacher is None:
        raise click.UsageError("bundle has no embedded teacher model; probe via the service instead")
    try:
        values = [float(tok) for tok in instance.split(",")]
    except ValueError:
        raise click.UsageError(f"bad --instance: {instance!r}") from None
    result = run_probe(bundle, teacher, values)
    names = bundle.schema.class_names
    click.echo(f"teacher prediction: {names[result.teacher_prediction]}")
    click.echo(f"rule prediction:    {names[result.rule_prediction]} (rule {result.fired_rule})")
    click.echo(f"agreement:          {result.teacher_prediction == result.rule_prediction}")


@cli.command("export")
@click.option("--bundle", "bundle_path", required=True, type=click.Path(exists=True, dir_okay=False))
@data_option
@data_dir_option
@click.option("--dataset", default="train", show_default=True, type=click.Choice(["train", "test"]))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--test-fraction", default=0.25, show_default=True)
@click.option("--split-seed", default=7, show_default=True)
@click.option("--conditional", is_flag=True, default=False)
def cmd_export(bundle_path, data, data_dir, dataset, out, test_fraction, split_seed,
               conditional):
    """Render a bundle into the matrix payload JSON the UI consumes."""
    with open(bundle_path, encoding="utf-8") as fh:
        bundle, teacher = bundle_from_json(json.load(fh))
    if teacher is None:
        raise click.UsageError("bundle has no embedded teacher model")
    train, test = _load_split(data, data_dir, test_fraction, split_seed)
    if [f.name for f in train.schema.features] != [f.name for f in bundle.schema.features]:
        raise click.UsageError(
            f"dataset {data!r} does not match the schema this bundle was built from")
    table = train if dataset == "train" else test
    payload = build_matrix_payload(bundle, table, teacher, dataset_name=dataset,
                                   conditional=conditional)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
    click.echo(f"wrote {out}")


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
@data_dir_option
@click.option("--static-dir", default=None, help="built UI bundle to serve at /")
@click.option("--iterations", default=10000, show_default=True)
@click.option("--chains", default=2, show_default=True)
def cmd_serve(host, port, data_dir, static_dir, iterations, chains):
    """Run the HTTP service."""
    from .service import ServiceConfig, serve

    serve(ServiceConfig(host=host, port=port, data_dir=data_dir,
                        static_dir=static_dir, mcmc_iterations=iterations,
                        mcmc_chains=chains))


def main(argv=None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        click.echo(cli.get_help(click.Context(cli)), err=True)
        return 1
    try:
        cli.main(args=args, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_help(), err=True)
        return 1
    except click.Abort:
        return 1
    except RuleLensError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except KeyError as exc:
        click.echo(f"error: unknown dataset {exc}", err=True)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
