"""Command-line interface.

A thin client over the HTTP service: each subcommand assembles a request,
sends it through `ServiceClient` (in-process by default, `--server` for a
remote instance) and formats the response as JSON or CSV.  Exit codes:
0 success, 1 validation/usage error, 2 runtime error.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .client import ServiceClient, ServiceError
from .errors import QqvqeError
from .hamiltonian import CSV_HEADER, HAMILTONIAN_STRINGS, load_table_csv

_OPTIMIZERS = ("nelder-mead", "powell", "cobyla")


def _server_option(fn):
    return click.option(
        "--server", default=None, metavar="URL",
        help="Base URL of a running service; default runs in-process.",
    )(fn)


def _common_run_options(fn):
    for deco in reversed(
        [
            click.option("--shots", default=4000, show_default=True,
                         help="Shots per measurement setting."),
            click.option("--lambda", "lam", type=float, default=None,
                         help="Polarization depolarizing strength."),
            click.option("--qem/--no-qem", default=False, show_default=True,
                         help="Enable confusion-matrix error mitigation."),
            click.option("--gamma-source", type=click.Choice(["analytic", "tomography"]),
                         default="analytic", show_default=True),
            click.option("--gamma-file", type=click.Path(exists=True, dir_okay=False),
                         default=None, help="JSON file with precomputed gamma matrices."),
            click.option("--tomo-shots", default=10_000, show_default=True,
                         help="Tomography shots per eigenstate."),
            click.option("--optimizer", type=click.Choice(_OPTIMIZERS),
                         default="cobyla", show_default=True),
            click.option("--ftol", default=0.01, show_default=True,
                         help="Optimizer stopping tolerance (MJ/mol)."),
            click.option("--max-evals", default=300, show_default=True),
            click.option("--seed", default=0, show_default=True),
            click.option("--mode", type=click.Choice(["sampled", "analytic"]),
                         default="sampled", show_default=True),
            click.option("--table", "table_path", envvar="QQVQE_TABLE",
                         type=click.Path(exists=True, dir_okay=False), default=None,
                         help="Hamiltonian CSV replacing the built-in table "
                              "(env: QQVQE_TABLE)."),
            click.option("--out", "out_path", type=click.Path(dir_okay=False),
                         default=None, help="Write output to this file."),
            click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                         default=None, help="Output format (default depends on command)."),
        ]
    ):
        fn = deco(fn)
    return fn


def _table_payload(table_path):
    if table_path is None:
        return None
    rows = load_table_csv(table_path)
    return [
        {"R": h.distance, **{s: h.weights[s] for s in HAMILTONIAN_STRINGS}}
        for h in rows
    ]


def _gammas_payload(gamma_file):
    if gamma_file is None:
        return None
    with open(gamma_file) as fh:
        data = json.load(fh)
    return data["gammas"]


def _run_payload(shots, lam, qem, gamma_source, gamma_file, tomo_shots,
                 optimizer, ftol, max_evals, seed, mode, table_path, **extra):
    payload = {
        "shots_per_setting": shots,
        "noise": {"depolarizing_lambda": lam} if lam is not None else None,
        "qem": qem,
        "gamma_source": gamma_source,
        "gammas": _gammas_payload(gamma_file),
        "tomography_shots": tomo_shots,
        "optimizer": {"method": optimizer, "ftol": ftol, "max_evals": max_evals},
        "seed": seed,
        "mode": mode,
        "table": _table_payload(table_path),
    }
    payload.update(extra)
    return payload


def _emit(text: str, out_path):
    if out_path is None:
        click.echo(text, nl=False)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


def _to_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


@click.group()
def cli():
    """Ground-state energy estimation on a simulated photonic ququart."""


@cli.command()
@click.option("--r", "distance", default=0.9, show_default=True,
              help="Interatomic distance in angstrom.")
@_common_run_options
@_server_option
def run(distance, out_path, fmt, server, **opts):
    """Single VQE run; emits the full trace and final statistics (JSON)."""
    payload = _run_payload(**opts, distance=distance)
    data = ServiceClient(server).post("/run", payload)
    if fmt == "csv":
        rows = [(i, *pt["theta"], pt["energy"]) for i, pt in enumerate(data["trace"])]
        text = _to_csv(("iteration", "H1", "Q1", "H2", "Q2", "H3", "Q3", "energy"), rows)
    else:
        text = _to_json(data)
    _emit(text, out_path)


@cli.command()
@click.option("--r-list", "r_list", default=None,
              help="Comma-separated distances; default: all table rows.")
@_common_run_options
@_server_option
def curve(r_list, out_path, fmt, server, **opts):
    """Dissociation curve: one run per distance (CSV by default)."""
    distances = None
    if r_list is not None and r_list.strip():
        distances = [float(x) for x in r_list.split(",")]
    elif r_list is not None:
        distances = []
    payload = _run_payload(**opts, distances=distances)
    data = ServiceClient(server).post("/curve", payload)
    if fmt == "json":
        text = _to_json(data)
    else:
        text = _to_csv(
            ("R", "energy", "std", "oracle", "success"),
            [(r["R"], repr(r["energy"]), repr(r["std"]), repr(r["oracle"]),
              int(r["success"])) for r in data["rows"]],
        )
    _emit(text, out_path)


@cli.command("noise-sweep")
@click.option("--r", "distance", default=0.9, show_default=True)
@click.option("--lambdas", default="0.1,0.2,0.4,0.8", show_default=True,
              help="Comma-separated depolarizing strengths.")
@click.option("--tomo-reps", default=5, show_default=True,
              help="Tomography repetitions for the lambda error bar.")
@_common_run_options
@_server_option
def noise_sweep(distance, lambdas, tomo_reps, out_path, fmt, server, **opts):
    """Mitigated/unmitigated energies across noise strengths (CSV by default)."""
    payload = _run_payload(
        **opts,
        distance=distance,
        lambdas=[float(x) for x in lambdas.split(",")],
        tomography_repetitions=tomo_reps,
    )
    data = ServiceClient(server).post("/noise-sweep", payload)
    if fmt == "json":
        text = _to_json(data)
    else:
        text = _to_csv(
            ("lambda", "lambda_std", "E_unmitigated", "E_mitigated",
             "E_expected_noisy", "oracle"),
            [(r["lambda"], repr(r["lambda_std"]), repr(r["E_unmitigated"]),
              repr(r["E_mitigated"]), repr(r["E_expected_noisy"]), repr(r["oracle"]))
             for r in data["rows"]],
        )
    _emit(text, out_path)


@cli.command()
@click.option("--lambda", "lam", type=float, default=None,
              help="Polarization depolarizing strength.")
@click.option("--tomo-shots", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--analytic", is_flag=True, default=False,
              help="Infinite-shot (exact) confusion matrices.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@_server_option
def tomography(lam, tomo_shots, seed, analytic, out_path, server):
    """Estimate the four confusion matrices; emits reusable gamma JSON."""
    payload = {
        "noise": {"depolarizing_lambda": lam} if lam is not None else None,
        "shots_per_eigenstate": tomo_shots,
        "seed": seed,
        "analytic": analytic,
    }
    data = ServiceClient(server).post("/tomography", payload)
    _emit(_to_json(data), out_path)


@cli.command("bench-optimizers")
@click.option("--r", "distance", default=0.9, show_default=True)
@click.option("--trials", default=1000, show_default=True)
@_common_run_options
@_server_option
def bench_optimizers(distance, trials, out_path, fmt, server, **opts):
    """Success statistics of the three optimizers (CSV by default)."""
    opts.setdefault("mode", "sampled")
    payload = _run_payload(**opts, distance=distance, trials=trials)
    data = ServiceClient(server).post("/bench-optimizers", payload)
    if fmt == "json":
        text = _to_json(data)
    else:
        text = _to_csv(
            ("optimizer", "P_S", "mean_evals", "median_evals"),
            [(r["optimizer"], repr(r["P_S"]), repr(r["mean_evals"]),
              repr(r["median_evals"])) for r in data["rows"]],
        )
    _emit(text, out_path)


@cli.command()
@click.option("--r", "distance", type=float, default=None,
              help="Single distance; default prints the whole table.")
@click.option("--table", "table_path", envvar="QQVQE_TABLE",
              type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@_server_option
def oracle(distance, table_path, out_path, fmt, server):
    """Exact ground-state energies from diagonalizing the table Hamiltonians."""
    params = {} if distance is None else {"r": distance}
    data = ServiceClient(server).post("/oracle", _table_payload(table_path), params=params)
    if fmt == "json":
        text = _to_json(data)
    elif fmt == "csv":
        text = _to_csv(("R", "oracle_e0"),
                       [(row["R"], repr(row["oracle_e0"])) for row in data["rows"]])
    else:
        lines = [f"R={row['R']:<5} oracle E0 = {row['oracle_e0']:.6f} MJ/mol"
                 for row in data["rows"]]
        lines.append(
            f"published reference at R=0.9: "
            f"{data['published_reference_e0_r09']} MJ/mol"
        )
        lines.append(f"note: {data['note']}")
        text = "\n".join(lines) + "\n"
    _emit(text, out_path)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ServiceError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1 if exc.status_code < 500 else 2
    except QqvqeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        click.echo(f"runtime error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
