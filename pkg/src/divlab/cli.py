"""Command-line front end.

A thin client over the service layer: every subcommand builds a request
model, posts it to the FastAPI app (in process by default, or to a running
server via --server-url), and renders the response as stdout text plus
optional CSV/JSON artifacts.

Exit codes: 0 success, 1 usage or config error, 2 mathematical contradiction
(a probe violated a Known label, or an identity suite failed), 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

USAGE_ERROR = 1
CONTRADICTION = 2
NUMERICAL_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


class ServiceError(RuntimeError):
    def __init__(self, status_code: int, detail):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


def call_service(path: str, payload: dict, server_url: str | None = None) -> dict:
    """POST a JSON payload to the service, in process unless a URL is given."""
    if server_url:
        with httpx.Client(base_url=server_url, timeout=None) as client:
            response = client.post(path, json=payload)
    else:
        from .service import create_app

        async def _post():
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://divlab", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        response = asyncio.run(_post())
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise ServiceError(response.status_code, detail)
    return response.json()


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _parse_n_values(text: str) -> list[int]:
    """Either a comma list '2,4,8' or an inclusive range 'start:stop:step'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"bad range {text!r}, want start:stop[:step]")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        return list(range(start, stop + 1, step))
    return [int(v) for v in text.split(",") if v != ""]


def _point_payload(args) -> dict:
    if args.alpha is not None or args.z is not None:
        if args.alpha is None or args.z is None:
            raise SystemExit(USAGE_ERROR)
        return {"alpha": args.alpha, "z": args.z}
    if args.p is None or args.q is None or args.s is None:
        print("error: provide --p --q --s or --alpha --z", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    return {"p": args.p, "q": args.q, "s": args.s}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divlab", description=__doc__)
    parser.add_argument("--server-url", default=None, help="talk to a running service")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_point_args(p, with_alpha=True):
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--q", type=float, default=None)
        p.add_argument("--s", type=float, default=None)
        if with_alpha:
            p.add_argument("--alpha", type=float, default=None)
            p.add_argument("--z", type=float, default=None)

    c = sub.add_parser("classify", help="place a point in the phase diagram")
    add_point_args(c)
    c.add_argument("--family", choices=["psi", "upsilon"], default="psi")

    pr = sub.add_parser("probe", help="midpoint convexity/concavity probe")
    add_point_args(pr)
    pr.add_argument("--functional", choices=["psi", "hiai"], default="psi")
    pr.add_argument("--direction", choices=["auto", "convex", "concave"], default="auto")
    pr.add_argument("--dim", type=int, default=3)
    pr.add_argument("--samples", type=int, default=200)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--k-mode", choices=["identity", "haar", "ginibre"], default="identity")
    pr.add_argument("--theta", type=float, default=0.5)
    pr.add_argument("--t", type=float, default=None, help="hiai scale parameter")
    pr.add_argument(
        "--seed-path",
        default=None,
        help="comma-separated sub-stream path, e.g. the point,dim indices of a sweep row",
    )
    pr.add_argument("--output", default=None, help="write the JSON report here")

    d = sub.add_parser("dpi", help="data processing inequality probe")
    d.add_argument("--alpha", type=float, required=True)
    d.add_argument("--z", type=float, required=True)
    d.add_argument("--dim", type=int, default=2)
    d.add_argument("--channels", type=int, default=20)
    d.add_argument("--pairs", type=int, default=20)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--output", default=None)

    sw = sub.add_parser("sweep", help="grid sweep from a JSON config file")
    sw.add_argument("--config", required=True)
    sw.add_argument("--output", default=None, help="CSV path (default stdout)")
    sw.add_argument("--witness-dir", default=None, help="directory for witness JSON files")

    st = sub.add_parser("stein", help="error exponent curve")
    st.add_argument("--r", type=_parse_float_list, required=True)
    st.add_argument("--s", type=_parse_float_list, required=True)
    st.add_argument("--eps", type=float, required=True)
    st.add_argument("--N", type=_parse_n_values, required=True)
    st.add_argument("--output", default=None, help="CSV path (default stdout)")

    ce = sub.add_parser(
        "counterexample", help="witness search in the near-singular contraction family"
    )
    ce.add_argument("--family", choices=["upsilon", "psi"], default="upsilon")
    ce.add_argument("--p", type=float, required=True)
    ce.add_argument("--q", type=float, default=None)
    ce.add_argument("--s", type=float, required=True)
    ce.add_argument("--direction", choices=["convex", "concave"], required=True)
    ce.add_argument("--output", default=None)

    v = sub.add_parser("verify", help="run named identity suites")
    v.add_argument("suites", nargs="*", help=f"subset of: symmetries variational "
                   f"lieb-thirring uhlmann opconv integral-rep (default all)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--output", default=None)

    return parser


def _cmd_classify(args) -> int:
    if args.family == "upsilon":
        if args.p is None or args.s is None:
            print("error: upsilon classification needs --p and --s", file=sys.stderr)
            return USAGE_ERROR
        data = call_service(
            "/classify-upsilon", {"p": args.p, "s": args.s}, args.server_url
        )
    else:
        data = call_service("/classify", _point_payload(args), args.server_url)
    print(f"{data['kind']} {data['citation']}".rstrip())
    return 0


def _cmd_probe(args) -> int:
    payload = _point_payload(args)
    payload.update(
        {
            "functional": args.functional,
            "direction": args.direction,
            "dim": args.dim,
            "samples": args.samples,
            "seed": args.seed,
            "k_mode": args.k_mode,
            "theta": args.theta,
        }
    )
    if args.t is not None:
        payload["t"] = args.t
    if args.seed_path:
        payload["path"] = [int(v) for v in args.seed_path.split(",")]
    data = call_service("/probe", payload, args.server_url)
    if args.output:
        _write_text(args.output, _canonical_json(data) + "\n")
    print(
        f"{data['label']} {data['citation']}: direction={data['direction']} "
        f"dim={data['dim']} samples={data['samples']} "
        f"worst_margin={data['worst_margin']!r} violations={data['violations']}"
    )
    if data["violations"] and data["label"] in ("ConcaveKnown", "ConvexKnown"):
        print("contradiction: probe violates a Known label", file=sys.stderr)
        return CONTRADICTION
    return 0


def _cmd_dpi(args) -> int:
    payload = {
        "alpha": args.alpha,
        "z": args.z,
        "dim": args.dim,
        "n_channels": args.channels,
        "n_state_pairs": args.pairs,
        "seed": args.seed,
    }
    data = call_service("/dpi", payload, args.server_url)
    if args.output:
        _write_text(args.output, _canonical_json(data) + "\n")
    print(
        f"dpi alpha={args.alpha} z={args.z} dim={args.dim}: "
        f"samples={data['samples']} violations={data['violations']} "
        f"worst_margin={data['worst_margin']!r} skipped={data['skipped_infinite']}"
    )
    if data["violations"] and data["label"] in ("ConcaveKnown", "ConvexKnown"):
        print("contradiction: DPI violated on a Known slice point", file=sys.stderr)
        return CONTRADICTION
    return 0


def _cmd_sweep(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return USAGE_ERROR
    data = call_service("/sweep", config, args.server_url)
    if data.get("contradiction"):
        from .sweep import write_witness

        message = data["contradiction"]["message"]
        witness = data["contradiction"]["witness"]
        print(f"contradiction: {message}", file=sys.stderr)
        if witness is not None:
            directory = args.witness_dir or "."
            path = write_witness(witness, directory)
            print(f"witness written to {path}", file=sys.stderr)
        return CONTRADICTION
    if args.output:
        _write_text(args.output, data["csv"])
        print(f"{data['rows']} rows written to {args.output}")
    else:
        sys.stdout.write(data["csv"])
    if args.witness_dir and data["witnesses"]:
        from .sweep import write_witness

        for witness in data["witnesses"]:
            write_witness(witness, args.witness_dir)
        print(f"{len(data['witnesses'])} witnesses written to {args.witness_dir}")
    return 0


def _cmd_stein(args) -> int:
    payload = {"r": args.r, "s": args.s, "epsilon": args.eps, "n_values": args.N}
    data = call_service("/stein", payload, args.server_url)
    if args.output:
        _write_text(args.output, data["csv"])
        print(f"{len(data['rows'])} rows written to {args.output}")
    else:
        sys.stdout.write(data["csv"])
    return 0


def _cmd_counterexample(args) -> int:
    payload = {
        "family": args.family,
        "p": args.p,
        "s": args.s,
        "direction": args.direction,
    }
    if args.q is not None:
        payload["q"] = args.q
    data = call_service("/counterexample", payload, args.server_url)
    if args.output:
        _write_text(args.output, _canonical_json(data) + "\n")
    state = "certified violation" if data["certified"] else "no violation found"
    print(
        f"{args.family} {data['params']}: {state} "
        f"(direction={args.direction}, margin={data['margin']!r}, "
        f"grid={data['grid_size']})"
    )
    return 0


def _cmd_verify(args) -> int:
    payload = {"seed": args.seed}
    if args.suites:
        payload["suites"] = args.suites
    data = call_service("/verify", payload, args.server_url)
    for suite in data["suites"]:
        status = "PASS" if suite["passed"] else "FAIL"
        print(f"  {suite['name']}: {status} ({suite['n_checks']} checks)")
        for failure in suite["failures"]:
            print(f"    {failure}", file=sys.stderr)
    print(data["summary"])
    if args.output:
        _write_text(args.output, _canonical_json(data) + "\n")
    return 0 if data["passed"] == data["total"] else CONTRADICTION


_COMMANDS = {
    "classify": _cmd_classify,
    "probe": _cmd_probe,
    "dpi": _cmd_dpi,
    "sweep": _cmd_sweep,
    "stein": _cmd_stein,
    "counterexample": _cmd_counterexample,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.status_code == 422:
            return USAGE_ERROR
        return NUMERICAL_FAILURE
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
