"""Point d'entrée unique : diffhw dgen | dsim | dopt | sweep | gen-workload."""
from __future__ import annotations

import json
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import click

from diffhw import __version__
from diffhw.dopt import load_dotproduct_config, load_objective, load_optimizer_config
from diffhw.errors import (
    EXIT_OK,
    EXIT_USAGE,
    DiffHWError,
    NonConvergence,
    ValidationError,
    error_report,
    exit_code_for,
)
from diffhw.hwmodel import render_concrete, specialize
from diffhw.mapper import load_mapper_config
from diffhw.mapper.config import load_yaml_section
from diffhw.pipelines import generate_model, make_workload, optimize_design, simulate
from diffhw.pipelines import sweep as sweep_pipeline
from diffhw.pipelines.runconfig import parse_assignments, parse_grid, run_config
from diffhw.settings import settings
from diffhw.utils.io import format_float, frame_to_csv
from diffhw.utils.logging import setup_logging
from diffhw.workload import GENERATORS

logger = logging.getLogger(__name__)


def _parsed(parser: Callable[[Sequence[str]], Dict]) -> Callable:
    """Callback click : erreurs de syntaxe des options → erreur d'usage (code 1)."""

    def callback(ctx: click.Context, param: click.Parameter, value: Sequence[str]) -> Dict:
        try:
            return parser(value or ())
        except ValidationError as exc:
            raise click.BadParameter(str(exc), ctx=ctx, param=param) from None

    return callback


set_option = click.option(
    "--set",
    "overrides",
    multiple=True,
    callback=_parsed(parse_assignments),
    metavar="NAME=VALUE",
    help="Surcharge d'un paramètre (répétable).",
)
config_option = click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Fichier YAML (sections mapper, optimizer, objective, dotproduct).",
)


def _mapper_cfg(config_path: Optional[str], overlap: Optional[bool] = None, prefetch: Optional[bool] = None):
    return load_mapper_config(config_path, overlap=overlap, prefetch=prefetch)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help="Niveau de log (défaut : DIFFHW_LOG_LEVEL).")
@click.version_option(__version__, prog_name="diffhw")
def cli(log_level: Optional[str]) -> None:
    """Modèles matériels différentiables : génération, simulation, optimisation."""
    setup_logging(log_level or settings.LOG_LEVEL)


@cli.command("dgen")
@click.option("--arch", "arch_path", required=True, type=click.Path(dir_okay=False))
@click.option("--tech", "tech_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", "model_path", type=click.Path(dir_okay=False), default=None, help="Modèle de sortie (.hw).")
@click.option("--devices", type=click.Path(dir_okay=False), default=None)
@click.option("--templates", type=click.Path(dir_okay=False), default=None)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@set_option
def dgen_command(arch_path, tech_path, model_path, devices, templates, report_path, overrides) -> None:
    """Architecture + technologie → modèle matériel H."""
    rc = run_config(
        "dgen",
        inputs={"arch": arch_path, "tech": tech_path, "devices": devices, "templates": templates},
        outputs={"model": model_path, "report": report_path},
        overrides=overrides,
    )
    h = generate_model.run(
        rc.inputs["arch"],
        rc.inputs["tech"],
        model_path,
        rc.inputs.get("devices"),
        rc.inputs.get("templates"),
        rc.overrides,
        report_path,
    )
    click.echo(render_concrete(specialize(h, *h.seed_assignment())), nl=False)


@cli.command("dsim")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--workload", "workload_path", required=True, type=click.Path(dir_okay=False))
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
@click.option("--overlap/--additive", default=None, help="Recouvrement calcul/mémoire (défaut : configuration).")
@click.option("--prefetch/--no-prefetch", default=None)
@config_option
@set_option
def dsim_command(model_path, workload_path, trace_path, report_path, overlap, prefetch, config_path, overrides) -> None:
    """Place un workload sur le modèle et estime runtime, énergie, puissance, surface."""
    rc = run_config(
        "dsim",
        inputs={"model": model_path, "workload": workload_path, "config": config_path},
        outputs={"trace": trace_path, "report": report_path},
        overrides=overrides,
    )
    sim = simulate.run(
        rc.inputs["model"],
        rc.inputs["workload"],
        rc.overrides,
        _mapper_cfg(config_path, overlap, prefetch),
        trace_path,
        report_path,
    )
    click.echo(sim.report, nl=False)


def _objective(config_path, kind, area_max, lagrange, penalty):
    return load_objective(config_path, kind=kind, area_max=area_max, lagrange=lagrange, penalty=penalty)


def _config_area_max(config_path: Optional[str]) -> float:
    """Surface maximale de la section objective, sinon pas de contrainte."""
    section = load_yaml_section(config_path, "objective") if config_path else {}
    return section.get("area_max", math.inf)


objective_options = [
    click.option("--objective", "kind", type=click.Choice(["time", "energy", "edp"]), default=None),
    click.option("--lagrange", type=float, default=None),
    click.option("--penalty", type=click.Choice(["lagrange", "exponential"]), default=None),
    click.option("--scenario", type=click.Choice(list(optimize_design.SCENARIOS)), default=None),
    click.option("--model", "model_path", type=click.Path(dir_okay=False), default=None),
    click.option("--workload", "workload_path", type=click.Path(dir_okay=False), default=None),
]


def with_options(options: List[Callable]) -> Callable:
    def decorator(f: Callable) -> Callable:
        for option in reversed(options):
            f = option(f)
        return f

    return decorator


@cli.command("dopt")
@with_options(objective_options)
@click.option("--area-max", type=float, default=None, help="Surface maximale A (mm2).")
@click.option("--epochs", type=int, default=None)
@click.option("--lr", "learning_rate", type=float, default=None)
@click.option("--param", "params", multiple=True, help="Paramètre optimisé (répétable ; défaut : tous).")
@click.option("--history", "history_path", type=click.Path(dir_okay=False), default=None)
@click.option("--out", "result_path", type=click.Path(dir_okay=False), default=None)
@click.option("--ranking", "ranking_path", type=click.Path(dir_okay=False), default=None)
@click.option("--resume", "resume_path", type=click.Path(dir_okay=False), default=None, help="Reprend depuis un résultat JSON (--out).")
@config_option
@set_option
def dopt_command(
    kind, lagrange, penalty, scenario, model_path, workload_path, area_max, epochs,
    learning_rate, params, history_path, result_path, ranking_path, resume_path, config_path, overrides,
) -> None:
    """Descente de gradient sur les paramètres sous contrainte de surface."""
    rc = run_config(
        "dopt",
        inputs={"model": model_path, "workload": workload_path, "config": config_path, "resume": resume_path},
        outputs={"history": history_path, "result": result_path, "ranking": ranking_path},
        overrides=overrides,
    )
    objective = _objective(config_path, kind or ("time" if scenario else None), area_max, lagrange, penalty)
    opt_cfg = load_optimizer_config(config_path, max_epochs=epochs, learning_rate=learning_rate)
    result = optimize_design.run(
        objective,
        opt_cfg,
        rc.inputs.get("model"),
        rc.inputs.get("workload"),
        scenario,
        load_dotproduct_config(config_path) if scenario else None,
        _mapper_cfg(config_path),
        rc.overrides,
        list(params) or None,
        history_path,
        result_path,
        ranking_path,
        rc.inputs.get("resume"),
    )
    _echo_result(result)


def _echo_result(result) -> None:
    for name, value in result.values.items():
        click.echo(f"{name} = {format_float(value)}")
    click.echo(f"objective = {format_float(result.best_objective)}")
    click.echo(f"area = {format_float(result.best_area)} # mm2")
    click.echo(f"status = {result.status.value}")


@cli.command("sweep")
@with_options(objective_options)
@click.option("--area-max", type=float, default=None, help="Surface maximale A (mm2 ; défaut : sans contrainte).")
@click.option(
    "--grid",
    "grid",
    multiple=True,
    required=True,
    callback=_parsed(parse_grid),
    metavar="NAME=AXIS",
    help="Axe : v1,v2,... | lo:hi:n | pow2:lo:hi (répétable).",
)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None)
@config_option
@set_option
def sweep_command(
    kind, lagrange, penalty, scenario, model_path, workload_path, area_max, grid, jobs, output_path, config_path, overrides,
) -> None:
    """Évaluation exhaustive d'une grille de paramètres."""
    rc = run_config(
        "sweep",
        inputs={"model": model_path, "workload": workload_path, "config": config_path},
        outputs={"out": output_path},
        overrides=overrides,
    )
    objective = _objective(
        config_path,
        kind or ("time" if scenario else None),
        area_max if area_max is not None else _config_area_max(config_path),
        lagrange,
        penalty,
    )
    df = sweep_pipeline.run(
        grid,
        objective,
        rc.inputs.get("model"),
        rc.inputs.get("workload"),
        scenario,
        load_dotproduct_config(config_path) if scenario else None,
        _mapper_cfg(config_path),
        rc.overrides,
        jobs,
        output_path,
    )
    if output_path is None:
        click.echo(frame_to_csv(df), nl=False)
    else:
        best = df[df["is_min"]]
        for _, row in best.iterrows():
            click.echo(", ".join(f"{n} = {format_float(row[n])}" for n in grid) + f" -> {format_float(row['objective'])}")


@cli.command("gen-workload")
@click.argument("kind", type=click.Choice(sorted(GENERATORS)))
@click.option("--out", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Graine des générateurs aléatoires.")
@set_option
def gen_workload_command(kind, output_path, seed, overrides) -> None:
    """Génère un workload synthétique (cnn, mlp, dot, transformer, random)."""
    rc = run_config("gen-workload", outputs={"out": output_path}, overrides=overrides, seed=seed)
    w = make_workload.run(kind, output_path, rc.overrides, rc.seed)
    click.echo(f"{kind}: {len(w)} sommets -> {output_path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Exécute la CLI ; retourne le code de sortie (0, 1 usage ou erreur interne, 2 entrée, 3 non-convergence)."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="diffhw", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("Interrompu.", err=True)
        return EXIT_USAGE
    except NonConvergence as exc:
        if exc.result is not None:
            _echo_result(exc.result)
        click.echo(json.dumps(error_report(exc), ensure_ascii=False), err=True)
        return exc.exit_code
    except (DiffHWError, FileNotFoundError) as exc:
        click.echo(json.dumps(error_report(exc), ensure_ascii=False), err=True)
        return exit_code_for(exc)
    except Exception as exc:  # noqa: BLE001
        click.echo(json.dumps(error_report(exc), ensure_ascii=False), err=True)
        return exit_code_for(exc)
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
