"""Command-line client.

Each subcommand builds the same request model the HTTP API accepts and runs
it in process by default; with --server URL the request is POSTed to a
running service instance instead.  Exit codes: 0 when every report row
verifies, 1 on a verification failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from .reporting import payload_exit_code, render_payload
from .service.handlers import COMMANDS
from .service.models import load_graph_model


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwp",
        description=(
            "Moments, free cumulants, R-transforms and operator-relation "
            "checks for directed-graph creation/annihilation algebras"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, help="graph JSON file")
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("--server", help="POST the request to a running service")

    element = argparse.ArgumentParser(add_help=False)
    element.add_argument("--vertex", help="base vertex of the state")
    element.add_argument("--expr", help="operator expression (default: generating operator)")
    element.add_argument("--mode", choices=["symbolic", "numeric", "both"], default="both")
    element.add_argument("--scale", default="1", help="rational generator scale")
    element.add_argument(
        "--paper-normalization",
        action="store_true",
        help="scale generators by 1/sqrt(2)",
    )

    p = sub.add_parser("moments", parents=[common, element], help="state moments of an element")
    p.add_argument("--order", type=int, default=8)

    p = sub.add_parser("cumulants", parents=[common, element], help="free cumulants of an element")
    p.add_argument("--order", type=int, default=8)

    p = sub.add_parser("rtransform", parents=[common, element], help="free cumulant series")
    p.add_argument("--order", type=int, default=8)

    p = sub.add_parser(
        "verify-catalan",
        parents=[common, element],
        help="check the Catalan moment law for the generating operator",
    )
    p.add_argument("--max-order", type=int, default=10)

    p = sub.add_parser("freeness", parents=[common], help="diagram verdict plus mixed-cumulant scan")
    p.add_argument("--w1", required=True, help="word: comma-separated edge ids or a vertex id")
    p.add_argument("--w2", required=True)
    p.add_argument("--scan-order", type=int, default=4)

    p = sub.add_parser("relations", parents=[common], help="numeric generator-relation checks")
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--max-word-len", type=int, default=None)

    p = sub.add_parser(
        "embed-check",
        parents=[common],
        help="verify a free semicircular system on loops at a vertex",
    )
    p.add_argument("--vertex", help="base vertex hosting the loops")
    p.add_argument("--loops", type=int, default=None, help="system rank (default: all loops)")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--compress-order", type=int, default=6)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _request_body(args: argparse.Namespace) -> dict:
    body: dict = {"graph": load_graph_model(args.graph).model_dump()}
    cmd = args.command
    if cmd in ("moments", "cumulants", "rtransform"):
        body.update(
            vertex=args.vertex,
            order=args.order,
            expr=args.expr,
            mode=args.mode,
            scale=args.scale,
            paper_normalization=args.paper_normalization,
        )
    elif cmd == "verify-catalan":
        body.update(
            vertex=args.vertex,
            max_order=args.max_order,
            mode=args.mode,
            scale=args.scale,
            paper_normalization=args.paper_normalization,
        )
    elif cmd == "freeness":
        body.update(w1=args.w1, w2=args.w2, scan_order=args.scan_order)
    elif cmd == "relations":
        body.update(cutoff=args.cutoff, max_word_len=args.max_word_len)
    elif cmd == "embed-check":
        body.update(
            vertex=args.vertex,
            loops=args.loops,
            max_order=args.max_order,
            compress_order=args.compress_order,
        )
    return body


def _execute_local(command: str, body: dict) -> dict:
    model_cls, handler = COMMANDS[command]
    req = model_cls.model_validate(body)
    return handler(req).to_payload()


def _execute_remote(server: str, command: str, body: dict) -> dict:
    import httpx

    url = f"{server.rstrip('/')}/{command}"
    resp = httpx.post(url, json=body, timeout=600.0)
    if resp.status_code != 200:
        raise ValueError(f"server returned {resp.status_code}: {resp.text}")
    return resp.json()


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("gwp.service.app:app", host=args.host, port=args.port)
        return 0

    try:
        body = _request_body(args)
        if args.server:
            payload = _execute_remote(args.server, args.command, body)
        else:
            payload = _execute_local(args.command, body)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render_payload(payload, args.json))
    return payload_exit_code(payload)


if __name__ == "__main__":
    sys.exit(main())
