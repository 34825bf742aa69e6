"""Command-line client for the simulation service.

Every subcommand speaks HTTP to the service layer.  Without ``--server``
the app is mounted in-process, so the CLI works standalone; with it, the
same requests go to a remote instance.  File reading and CSV writing stay
on the client side.

Exit codes: 0 success, 1 configuration error, 2 I/O or transport error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import httpx

from . import __version__
from .results import MetricsRow, read_csv, rows_to_csv, write_csv


class _Client:
    """Small wrapper that normalizes transport and config failures."""

    def __init__(self, server: Optional[str]):
        if server:
            self._http = httpx.Client(base_url=server.rstrip("/"), timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._http = TestClient(create_app())

    def close(self):
        self._http.close()

    def post(self, path: str, payload: dict) -> dict:
        response = self._http.post(path, json=payload)
        if response.status_code == 422:
            detail = response.json().get("detail", "invalid configuration")
            raise ConfigFailure(str(detail))
        response.raise_for_status()
        return response.json()

    def get(self, path: str) -> dict:
        response = self._http.get(path)
        response.raise_for_status()
        return response.json()


class ConfigFailure(Exception):
    pass


def _read_config(path: str) -> str:
    with open(path, "r") as handle:
        return handle.read()


def _parse_int_list(text: str) -> list[int]:
    """Accept '200,300' and '1..10' style lists."""
    values: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            values.append(int(chunk))
    if not values:
        raise ValueError(f"empty list: {text!r}")
    return values


def _rows_from_payload(payload_rows: list[dict]) -> list[MetricsRow]:
    from .service.schemas import MetricsRowModel

    return [MetricsRowModel(**r).to_row() for r in payload_rows]


def _emit_rows(rows: list[MetricsRow], out: Optional[str]) -> None:
    if out:
        write_csv(rows, out)
        print(f"wrote {len(rows)} row(s) to {out}")
    else:
        sys.stdout.write(rows_to_csv(rows))


def _cmd_run(args, client: _Client) -> int:
    payload = {"config_text": _read_config(args.config)}
    if args.protocol:
        payload["protocol"] = args.protocol
    if args.seed is not None:
        payload["seed"] = args.seed
    data = client.post("/run", payload)
    _emit_rows(_rows_from_payload([data["row"]]), args.out)
    return 0


def _cmd_sweep(args, client: _Client) -> int:
    payload = {
        "config_text": _read_config(args.config),
        "node_counts": _parse_int_list(args.nodes),
        "placements": [p.strip() for p in args.placements.split(",") if p.strip()],
        "protocols": [p.strip() for p in args.protocols.split(",") if p.strip()],
        "seeds": _parse_int_list(args.seeds),
    }
    if args.workers is not None:
        payload["workers"] = args.workers
    data = client.post("/sweep", payload)
    _emit_rows(_rows_from_payload(data["rows"]), args.out)
    return 0


def _cmd_summarize(args, client: _Client) -> int:
    rows = read_csv(getattr(args, "in"))
    from .service.schemas import MetricsRowModel

    payload = {"rows": [MetricsRowModel.from_row(r).model_dump() for r in rows]}
    data = client.post("/summarize", payload)
    sys.stdout.write(data["report"])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("fearsim.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fearsim", description="Energy-aware WSN routing simulator client"
    )
    parser.add_argument("--version", action="version", version=f"fearsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario from a config file")
    run.add_argument("--config", required=True, help="scenario config file")
    run.add_argument("--protocol", help="override: d-fear, s-fear or seer")
    run.add_argument("--seed", type=int, help="override the config's seed")
    run.add_argument("--out", help="write the CSV here instead of stdout")
    run.add_argument("--server", help="base URL of a running service")

    swp = sub.add_parser("sweep", help="run the Cartesian product of axes")
    swp.add_argument("--config", required=True)
    swp.add_argument("--nodes", required=True, help="e.g. 200,300,500,1000,2000")
    swp.add_argument("--placements", required=True, help="e.g. random,uniform")
    swp.add_argument("--protocols", required=True, help="e.g. d-fear,s-fear,seer")
    swp.add_argument("--seeds", required=True, help="e.g. 1..10 or 1,2,3")
    swp.add_argument("--workers", type=int, help="process pool size")
    swp.add_argument("--out", help="write the CSV here instead of stdout")
    swp.add_argument("--server", help="base URL of a running service")

    summ = sub.add_parser("summarize", help="compare protocols from a sweep CSV")
    summ.add_argument("--in", required=True, help="sweep CSV produced by this tool")
    summ.add_argument("--server", help="base URL of a running service")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)

    try:
        client = _Client(getattr(args, "server", None))
    except httpx.HTTPError as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "run":
            return _cmd_run(args, client)
        if args.command == "sweep":
            return _cmd_sweep(args, client)
        if args.command == "summarize":
            return _cmd_summarize(args, client)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigFailure as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return 2
    finally:
        client.close()


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
