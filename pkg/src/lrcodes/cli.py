"""Batch command-line front end.

Exit codes: 0 success, 1 usage or invalid parameters, 2 verification
failure, 3 I/O or storage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, flownet, storesim, verifier
from .codeview import GeneratorView
from .field import GF
from .lrc import CodeParams, generator_view
from .rs import InsufficientSymbolsError

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class Output:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def line(self, text: str) -> None:
        """Free-form text, shown only in human mode."""
        if self.fmt == "human":
            print(text, file=self.stream)

    def kv(self, pairs: dict, human: str | None = None) -> None:
        if self.fmt == "kv":
            for k, v in pairs.items():
                print(f"{k}={_fmt(v)}", file=self.stream)
        else:
            print(human if human is not None else " ".join(f"{k}={_fmt(v)}" for k, v in pairs.items()),
                  file=self.stream)

    def warn(self, text: str) -> None:
        if self.fmt == "kv":
            print(f"warning={text}", file=self.stream)
        else:
            print(f"warning: {text}", file=self.stream)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple, set, frozenset)):
        return ",".join(str(x) for x in sorted(v)) if isinstance(v, (set, frozenset)) else ",".join(str(x) for x in v)
    return str(v)


def _params(a) -> CodeParams:
    for name in ("n", "k", "r"):
        if getattr(a, name) is None:
            raise UsageError(f"--{name} is required")
    return CodeParams(a.n, a.k, a.r, GF(a.p))


def _node_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad node list {text!r}") from exc


def cmd_bound(a, out: Output) -> int:
    if a.n is None or a.r is None:
        raise UsageError("bound needs --n and --r")
    if a.M is None or a.alpha is None:
        if a.k is None:
            raise UsageError("bound needs --M and --alpha, or --k")
        M, alpha = a.r * a.k, a.r + 1
    else:
        M, alpha = a.M, a.alpha
    d = bounds.distance_bound(a.n, a.r, M, alpha)
    out.kv({"d_bound": d}, human=f"d<={d}")
    if a.k is not None:
        sb = bounds.scalar_bound(a.n, a.k, a.r)
        out.kv({"scalar_bound": sb}, human=f"scalar d<={sb}")
        if (a.n % (a.r + 1)) == 0 and a.k <= a.n:
            rate = bounds.effective_rate(CodeParams(a.n, a.k, a.r, GF(a.p)))
            out.kv({"rate": rate})
        if a.k % (a.r + 1) == 0:
            out.warn("r+1 divides k; bound not tight here: the explicit code is only guaranteed d >= n-k+1")
    return EXIT_OK


def cmd_encode(a, out: Output) -> int:
    if a.input is None or a.dir is None:
        raise UsageError("encode needs --input and --dir")
    params = _params(a)
    m = storesim.store(Path(a.input).read_bytes(), params, a.dir)
    out.kv({"nodes": m.n, "file_len": m.file_len, "pad_len": m.pad_len, "block_len": m.block_len})
    return EXIT_OK


def cmd_repair(a, out: Output) -> int:
    if a.dir is None or a.node is None:
        raise UsageError("repair needs --dir and --node")
    storesim.Manifest.load(a.dir)
    if storesim.node_path(a.dir, a.node).exists():
        rep = storesim.fail_and_repair(a.dir, a.node)
    else:
        rep = storesim.repair(a.dir, a.node)
    out.kv({
        "failed": rep.failed,
        "contacted": rep.contacted,
        "blocks": rep.blocks_transferred,
        "bytes": rep.bytes_transferred,
        "success": rep.success,
    })
    return EXIT_OK if rep.success else EXIT_VERIFY


def cmd_retrieve(a, out: Output) -> int:
    if a.dir is None:
        raise UsageError("retrieve needs --dir")
    nodes = _node_list(a.nodes) if a.nodes else None
    data = storesim.retrieve(a.dir, nodes, a.out)
    out.kv({"bytes": len(data), "out": a.out or "-"})
    return EXIT_OK


def cmd_simulate(a, out: Output) -> int:
    params = _params(a)
    rep = storesim.compare_schemes(params, a.failures, seed=a.seed)
    out.kv({"failures": len(rep.failures), "trace": rep.failures})
    for name, s in (("lrc", rep.lrc), ("rs", rep.rs)):
        out.kv({
            f"{name}_overhead": s.storage_overhead,
            f"{name}_contacted": s.nodes_contacted,
            f"{name}_repair_bytes": s.repair_bytes,
        })
    out.kv({"overhead_ratio": rep.overhead_ratio})
    return EXIT_OK


def _size_guard(n: int, limit: int, force: bool, out: Output) -> int:
    if n <= limit:
        return limit
    if not force:
        raise UsageError(f"n={n} exceeds the default limit {limit}; pass --force to run anyway")
    out.warn(f"n={n} above {limit}: exhaustive search cost grows as 2^n")
    return verifier.HARD_LIMIT


def _witness_lines(gen: GeneratorView, groups, out: Output) -> None:
    w = bounds.witness_search(gen, groups)
    for i, st in enumerate(w.steps, 1):
        out.line(f"  step {i}: add {list(st.nodes)} s={st.size} h={st.gain}"
                 f"{'' if st.full_group else ' (partial)'}")
    out.kv({"witness": sorted(w.nodes), "witness_bound": w.bound, "exit_line": w.exit_line})


def cmd_verify(a, out: Output) -> int:
    params = _params(a)
    limit = _size_guard(params.n, verifier.PRACTICAL_LIMIT, a.force, out)
    cert = verifier.certify(params, limit)
    verdict = "PASS" if cert.passed else "FAIL"
    out.kv(
        {"distance": cert.distance, "bound": cert.bound, "locality": cert.locality,
         "any_k": cert.any_k_decodes, "result": verdict},
        human=f"distance={cert.distance} bound={cert.bound} locality={cert.locality} {verdict}",
    )
    if not cert.bound_expected_tight:
        out.warn("r+1 divides k; bound not expected tight (only d >= n-k+1 is guaranteed)")
    _witness_lines(generator_view(params), params.groups, out)
    return EXIT_OK if cert.passed else EXIT_VERIFY


def cmd_flowgraph(a, out: Output) -> int:
    if None in (a.n, a.r, a.M, a.alpha):
        raise UsageError("flowgraph needs --n, --r, --M and --alpha")
    limit = _size_guard(a.n, 10, a.force, out)
    net = flownet.build_flownet(a.n, a.r, a.M, a.alpha)
    if a.out:
        with open(a.out, "w") as fh:
            net.write_edges(fh)
    cut = flownet.min_cut_all_dcs(net)
    closed = flownet.closed_form_capacity(a.n, a.r, a.M, a.alpha)
    out.kv({"d": net.d, "collectors": len(net.collectors), "vertices": len(net.vertices),
            "min_cut": cut, "closed_form": closed})
    status = EXIT_OK if cut == closed else EXIT_VERIFY
    if not a.rlnc:
        return status
    q = a.q if a.q is not None else 1 << a.p
    rep = flownet.rlnc_verify(net, q, a.trials, a.seed)
    out.kv({"q": q, "trials": a.trials, "success_rate": rep.success_rate,
            "dc_rate": rep.dc_success_rate, "local_rate": rep.local_success_rate})
    passing = [t for t in rep.trials if t.passed]
    if not passing:
        out.warn("no trial met every requirement; nothing to extract")
        return EXIT_VERIFY
    gen = flownet.extract_code(passing[0])
    d = verifier.exact_distance(gen, limit)
    loc = max(verifier.exact_locality(gen, i, limit) for i in range(gen.n))
    ok = d >= net.d and loc <= a.r
    out.kv({"extracted_distance": d, "extracted_locality": loc,
            "extracted": "PASS" if ok else "FAIL"})
    return status if ok else EXIT_VERIFY


COMMANDS = {
    "bound": (cmd_bound, "distance bound, scalar bound and rate"),
    "encode": (cmd_encode, "encode a file into node files"),
    "repair": (cmd_repair, "fail (if present) and locally repair one node"),
    "retrieve": (cmd_retrieve, "decode the stored file from a node subset"),
    "simulate": (cmd_simulate, "compare repair traffic against an RS baseline"),
    "verify": (cmd_verify, "exhaustively certify the explicit code"),
    "flowgraph": (cmd_flowgraph, "flow-graph min-cut and RLNC achievability"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--M", type=int)
        p.add_argument("--alpha", type=int)
        p.add_argument("--p", type=int, default=8, help="field bit width (default 8)")
        p.add_argument("--q", type=int, help="RLNC field order (default 2^p)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--input")
        p.add_argument("--out")
        p.add_argument("--dir")
        p.add_argument("--nodes", help="comma-separated node ids")
        p.add_argument("--node", type=int)
        p.add_argument("--failures", type=int, default=10)
        p.add_argument("--format", choices=("human", "kv"), default="human")
        p.add_argument("--force", action="store_true")
        p.add_argument("--rlnc", action="store_true")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        out = Output(args.format, stdout)
        return COMMANDS[args.command][0](args, out)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except (storesim.StorageError, OSError, InsufficientSymbolsError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
