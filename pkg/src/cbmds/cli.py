"""Command line front end.

Every data-bearing subcommand is a thin HTTP client. With --server it talks
to a running instance; without it the same ASGI app is mounted in-process, so
single-machine use needs no daemon but exercises the identical request path.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx


def _call(server: str | None, method: str, path: str, payload: dict | None = None) -> dict:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            response = client.request(method, path, json=payload)
    else:
        from .service import create_app

        async def _inprocess():
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://cbmds.internal", timeout=None
            ) as client:
                return await client.request(method, path, json=payload)

        response = asyncio.run(_inprocess())
    if response.status_code != 200:
        try:
            doc = response.json()
            message = f"{doc.get('error', 'error')}: {doc.get('detail', '')}"
        except ValueError:
            message = response.text
        print(f"error (HTTP {response.status_code}): {message}", file=sys.stderr)
        raise SystemExit(1)
    return response.json()


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, newline="")


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def cmd_sweep(args) -> int:
    payload = {}
    if args.config:
        payload = json.loads(Path(args.config).read_text())
    doc = _call(args.server, "POST", "/sweep", payload)
    out = Path(args.out)
    _write_text(out / "raw.csv", doc["raw_csv"])
    _write_text(out / "summary.csv", doc["summary_csv"])
    print(f"rows: {doc['rows']}  failures: {doc['failures']}")
    print(f"wrote {out / 'raw.csv'}")
    print(f"wrote {out / 'summary.csv'}")
    return 0


def cmd_demo(args) -> int:
    payload = {
        "shape": args.shape,
        "placement": args.placement,
        "nodes": args.nodes,
        "radio_range": args.radio,
        "cluster_count": args.k,
        "anchors": args.anchors,
        "seed": args.seed,
        "include_svg": args.svg is not None,
    }
    doc = _call(args.server, "POST", "/demo", payload)
    print(
        f"{doc['shape']}/{doc['placement']}: {doc['nodes']} nodes, "
        f"R={doc['radio_range']}r, connectivity {doc['connectivity']:.2f}, "
        f"anchors {doc['anchor_ids']}"
    )
    if doc["actual_k"] != doc["cluster_count"]:
        print(f"cluster count reduced: k={doc['cluster_count']} -> k={doc['actual_k']}")
    for name in sorted(doc["runs"]):
        run = doc["runs"][name]
        print(
            f"  {name:8s} mean_err/R = {run['mean_err_over_R']:.4f} "
            f"({run['runtime_ms']:.1f} ms)"
        )
    if doc["tags"]:
        print(f"notes: {'; '.join(doc['tags'])}")
    if args.svg:
        _write_text(Path(args.svg), doc["svg"])
        print(f"wrote {args.svg}")
    if args.positions:
        base = Path(args.positions)
        for name, text in doc["positions_csv"].items():
            target = base.with_name(f"{base.stem}_{name}{base.suffix or '.csv'}")
            _write_text(target, text)
            print(f"wrote {target}")
    return 0


def cmd_validate(args) -> int:
    doc = _call(args.server, "GET", "/validate")
    for check in doc["checks"]:
        flag = "PASS" if check["passed"] else "FAIL"
        print(f"{flag}  {check['name']}: {check['detail']}")
    return 0 if doc["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbmds",
        description="Range-based node localization with cluster-wise multidimensional scaling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=cmd_serve)

    def add_server(p):
        p.add_argument(
            "--server", metavar="URL", default=None,
            help="send the request to a running service instead of in-process",
        )

    sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep and write CSV tables")
    sweep.add_argument("--config", metavar="FILE", help="JSON experiment config (defaults used if omitted)")
    sweep.add_argument("--out", required=True, metavar="DIR", help="output directory for raw.csv and summary.csv")
    add_server(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    demo = sub.add_parser("demo", help="run one trial of both algorithms and report errors")
    demo.add_argument("--shape", default="c", choices=["square", "c", "l", "h"])
    demo.add_argument("--placement", default="random", choices=["grid", "random"])
    demo.add_argument("--nodes", type=int, default=None, help="node count for random placement")
    demo.add_argument("--radio", type=float, default=2.0, help="radio range in multiples of grid spacing")
    demo.add_argument("--k", type=int, default=15, help="cluster count for the cluster-based solver")
    demo.add_argument("--anchors", type=int, default=4)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--svg", metavar="FILE", default=None, help="write a figure of the run")
    demo.add_argument("--positions", metavar="FILE", default=None,
                      help="write per-algorithm position CSVs next to this path")
    add_server(demo)
    demo.set_defaults(handler=cmd_demo)

    validate = sub.add_parser("validate", help="run the deterministic self-checks")
    add_server(validate)
    validate.set_defaults(handler=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
