"""Command-line client for the spectral toolkit.

Configs are JSON documents validated against the same request models the
HTTP service uses; the ``command`` may come from the subcommand or from the
config's own ``command`` field (``sturmspec run``).  By default each command
executes in-process; with ``--server URL`` the CLI posts the config to a
running service instead and renders the response identically.

Exit codes: 0 success; 1 a verification experiment returned the verdict
``inconsistent``; 2 invalid input (bad JSON, schema violation, bad values);
3 numerical failure (overflow, non-convergence, too few roots) or transport
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx
import pydantic

from . import __version__
from .errors import InputError, NumericsError
from .serialize import dump_json, emit_plot_data, write_csv, write_with_sidecar
from .service import handlers
from .service import schemas as sm

COMMANDS = ("spectrum", "compare", "verify", "kernel", "oracle", "identities", "trajectory")

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_NUMERICS = 3


def _diagnostic(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _load_config(path: str, command: str | None) -> dict:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    if command is not None:
        stated = data.get("command")
        if stated is not None and stated != command:
            raise InputError(f"config command {stated!r} does not match subcommand {command!r}")
        data["command"] = command
    elif "command" not in data:
        raise InputError("config must carry a 'command' field when using 'run'")
    return data


def _validate(data: dict):
    adapter = pydantic.TypeAdapter(sm.RunConfig)
    try:
        return adapter.validate_python(data)
    except pydantic.ValidationError as exc:
        raise InputError(f"config validation failed: {exc.errors()[0]}") from exc


def _make_client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=600.0)


def _remote_call(server: str, cfg) -> dict:
    payload = json.loads(cfg.model_dump_json())
    try:
        with _make_client(server) as client:
            resp = client.post(f"/{cfg.command}", json=payload)
    except httpx.HTTPError as exc:
        raise NumericsError(f"server request failed: {exc}") from exc
    if resp.status_code == 200:
        return resp.json()
    detail = resp.json().get("detail", resp.text) if resp.content else resp.text
    if resp.status_code in (400, 422):
        raise InputError(f"server rejected config: {detail}")
    raise NumericsError(f"server error {resp.status_code}: {detail}")


def _execute(cfg, server: str | None):
    if server:
        data = _remote_call(server, cfg)
        return sm.RESPONSE_TYPES[cfg.command].model_validate(data)
    _, handler = handlers.HANDLERS[cfg.command]
    return handler(cfg)


def _csv_rows(cfg, response):
    if cfg.command == "spectrum":
        return "index,mu,mult", [
            (i + 1, e.mu, e.mult) for i, e in enumerate(response.eigenvalues)
        ]
    if cfg.command == "compare":
        return "index,mu_a,mu_b,gap", [
            (i + 1, p.mu_a, p.mu_b, p.gap) for i, p in enumerate(response.pairs)
        ]
    if cfg.command == "verify":
        pairs = response.details.get("pairs")
        if pairs:
            return "index,mu_a,mu_b,gap", [
                (i + 1, a, b, g) for i, (a, b, g) in enumerate(pairs)
            ]
        eigen = response.details.get("eigenvalues")
        if eigen:
            return "index,mu,mult", [(i + 1, m, int(k)) for i, (m, k) in enumerate(eigen)]
        rows = response.details.get("rows", [])
        return _identity_csv(rows)
    if cfg.command == "kernel":
        if response.values is None:
            raise InputError("kernel CSV output needs include_values=true in the config")
        return "x,t,K", [tuple(v) for v in response.values]
    if cfg.command == "oracle":
        n = min(len(response.shooting), len(response.fd))
        return "index,mu_shooting,mu_fd,gap", [
            (
                i + 1,
                response.shooting[i].mu,
                response.fd[i].mu,
                abs(response.shooting[i].mu - response.fd[i].mu),
            )
            for i in range(n)
        ]
    if cfg.command == "identities":
        return _identity_csv(response.rows)
    # trajectory
    return "x,c,cp,s,sp", list(
        zip(response.x, response.c, response.cp, response.s, response.sp)
    )


def _identity_csv(rows):
    if not rows:
        return "mu", []
    keys = [k for k in rows[0] if k != "mu"]
    header = "mu," + ",".join(keys)
    return header, [tuple([r["mu"]] + [r[k] for k in keys]) for r in rows]


def _emit(cfg, response, args) -> None:
    if args.format == "csv":
        header, rows = _csv_rows(cfg, response)
        if args.out:
            write_csv(args.out, header, rows)
            _write_sidecar_for(args.out)
        elif not args.quiet:
            sys.stdout.write("\n".join([header] + [",".join(map(repr_cell, r)) for r in rows]) + "\n")
    else:
        text = dump_json(response.model_dump())
        if args.out:
            write_with_sidecar(args.out, text, {"command": cfg.command, "version": __version__})
        elif not args.quiet:
            sys.stdout.write(text)
    if getattr(args, "plot_out", None):
        scan = getattr(response, "scan", None)
        if scan is None:
            raise InputError("--plot-out needs a 'scan' window in the spectrum config")
        emit_plot_data([(scan.label, scan.mu, scan.value)], args.plot_out)


def repr_cell(v):
    return repr(v) if isinstance(v, float) else str(v)


def _write_sidecar_for(path) -> None:
    from datetime import datetime, timezone

    sidecar = Path(str(path) + ".meta.json")
    sidecar.write_text(
        json.dumps(
            {"generated_at": datetime.now(timezone.utc).isoformat(), "version": __version__},
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sturmspec",
        description="Spectral computations for -y'' + q(x) y = mu y on an interval.",
    )
    parser.add_argument("--version", action="version", version=f"sturmspec {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(sp):
        sp.add_argument("--config", required=True, help="path to a JSON config")
        sp.add_argument("--out", default=None, help="write the result to this file")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--quiet", action="store_true", help="suppress stdout output")
        sp.add_argument("--server", default=None, help="run against a service at this base URL")

    for name, blurb in (
        ("spectrum", "eigenvalues of one boundary condition"),
        ("compare", "pair the spectra of two boundary conditions"),
        ("verify", "run a named verification experiment"),
        ("kernel", "solve the transformation kernel"),
        ("oracle", "cross-check eigenvalues against the finite-difference oracle"),
        ("identities", "evaluate midpoint product identities"),
        ("trajectory", "dump the fundamental solutions along the grid"),
        ("run", "run the command named inside the config"),
    ):
        sp = sub.add_parser(name, help=blurb)
        add_common(sp)
        if name == "spectrum":
            sp.add_argument(
                "--plot-out", default=None, help="write the characteristic scan as label,x,y CSV"
            )

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def run_cli(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.subcommand == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    command = None if args.subcommand == "run" else args.subcommand
    try:
        cfg = _validate(_load_config(args.config, command))
        response = _execute(cfg, args.server)
        _emit(cfg, response, args)
    except (InputError, OSError) as exc:
        _diagnostic("input", str(exc))
        return EXIT_INPUT
    except NumericsError as exc:
        _diagnostic("numerics", str(exc))
        return EXIT_NUMERICS
    if cfg.command == "verify" and response.verdict == "inconsistent":
        return EXIT_INCONSISTENT
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
