"""Command-line interface.

Exit codes: 0 success, 2 I/O or parse error, 3 channel is not subspace
local (``classify``), 4 domain error (including a failed ``verify``).
Reports go to stdout as JSON, messages to stderr.

``compose A B`` applies A first and B second, i.e. writes ``B o A``.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import channels, io, secondq
from .channels import KrausChannel
from .errors import ConsistencyError, DomainError, FormatError, ShapeError
from .linalg import DEFAULT_TOL
from .sl import classify, dilate_lsp, hamiltonian_demo, random_member, sp_residual, transfer_signature
from .spaces import ChannelShape, random_density, random_hermitian

EXIT_OK = 0
EXIT_IO = 2
EXIT_NOT_SL = 3
EXIT_DOMAIN = 4

DEFAULT_RANDOM_KRAUS = 4


class _Parser(argparse.ArgumentParser):
    """Report usage errors with the I/O exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> ChannelShape:
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be four integers, got {text!r}") from None
    if len(dims) != 4 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"dims must be four positive integers ds1,ds2,dt1,dt2, got {text!r}")
    return ChannelShape.from_dims(*dims)


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(_jsonable(obj)) + "\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    return x


def channel_report(ch: KrausChannel, tol: float, with_class: bool = False) -> dict:
    rep = channels.verify_channel(ch, tol)
    out = rep.as_dict()
    if ch.shape is not None:
        res = sp_residual(ch)
        out["sp"] = {"ok": res <= tol, "residual": res}
        if rep.tp:
            out["signature"] = transfer_signature(ch, tol).w.tolist()
    if with_class:
        c = classify(ch, tol)
        out["class"] = {"tag": c.tag, "diagnostics": c.diagnostics}
    return out


def _generate(tag: str, shape: ChannelShape, seed: int, kraus: int):
    if tag == "random":
        return channels.random_channel(shape, kraus, seed), {"seed": seed, "class": "random"}
    tag = tag.upper()
    ch, p = random_member(tag, shape, seed)
    return ch, {"seed": seed, "class": tag, "generator_params": io.params_to_dict(tag, p)}


def cmd_gen(args) -> int:
    ch, meta = _generate(args.cls, args.dims, args.seed, args.kraus)
    io.write_channel(ch, args.out, meta)
    _emit({"out": args.out, "class": meta["class"], "kraus_count": len(ch)})
    return EXIT_OK


def cmd_verify(args) -> int:
    ch, _ = io.read_channel(args.file)
    report = channel_report(ch, args.tol)
    ok = report["tp"]["ok"] and report["cp"]["ok"]
    if args.against:
        other, _ = io.read_channel(args.against)
        dist = channels.channel_distance(ch, other)
        report["against"] = {"file": args.against, "distance": dist, "ok": dist <= args.tol}
        ok = ok and dist <= args.tol
    _emit(report)
    if not ok:
        print("verification failed", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_classify(args) -> int:
    ch, _ = io.read_channel(args.file)
    report = channel_report(ch, args.tol, with_class=True)
    _emit(report)
    return EXIT_OK if report["class"]["tag"] != "NotSL" else EXIT_NOT_SL


def cmd_compose(args) -> int:
    a, _ = io.read_channel(args.first)
    b, _ = io.read_channel(args.second)
    out = channels.compose(b, a)
    io.write_channel(out, args.out)
    _emit({"out": args.out, "kraus_count": len(out)})
    return EXIT_OK


def _classified(ch: KrausChannel, tol: float):
    c = classify(ch, tol)
    if not c.is_sl:
        raise DomainError(f"channel is not subspace local: {c.diagnostics.get('reason', '')}")
    return c


def cmd_dilate(args) -> int:
    ch, _ = io.read_channel(args.file)
    if ch.shape.source != ch.shape.target:
        raise DomainError("dilation needs identical source and target splits")
    c = _classified(ch, args.tol)
    if c.tag != "C1":
        raise DomainError(f"dilation needs a weight-preserving (C1) channel, got {c.tag}")
    res = dilate_lsp(c.params, ch.shape.source, args.tol)
    io.save_json(io.dilation_to_dict(res), args.out)
    _emit({
        "out": args.out,
        "dim_a1": res.dim_a1,
        "dim_a2": res.dim_a2,
        "unitarity_residual": res.unitarity_residual(),
        "reproduction_distance": channels.channel_distance(res.channel(), ch),
    })
    return EXIT_OK


def cmd_lift(args) -> int:
    ch, _ = io.read_channel(args.file)
    c = _classified(ch, args.tol)
    pair = secondq.lift(c.tag, c.params, ch.shape, args.tol)
    io.save_json(io.pair_to_dict(pair), args.out)
    _emit({"out": args.out, "class": c.tag})
    return EXIT_OK


def cmd_restrict(args) -> int:
    pair = io.pair_from_dict(io.load_json(args.file))
    out = secondq.one_restriction(pair.tensor(), pair.embeddings())
    io.write_channel(out, args.out)
    _emit({"out": args.out, "respects_1_states": secondq.respects_n_states(pair, 1, tol=args.tol)})
    return EXIT_OK


def cmd_demo(args) -> int:
    shape = args.dims
    s, t = shape.source, shape.target
    rng = np.random.default_rng(args.seed)
    h1 = random_hermitian(s.dim1 * t.dim1, rng)
    h2 = random_hermitian(s.dim2 * t.dim2, rng)
    rho_t = np.zeros((t.total, t.total), dtype=complex)
    rho_t[t.block(1), t.block(1)] = random_density(t.dim1, t.dim1, rng)
    ch = hamiltonian_demo(h1, h2, rho_t, args.time, shape, args.tol)
    io.write_channel(ch, args.out, {"seed": args.seed, "time": args.time})
    _emit({"out": args.out, "class": classify(ch, args.tol).tag})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sublocal", description="Subspace-local quantum channel toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default 1e-9)")
        p.set_defaults(func=func)
        return p

    p = add("gen", cmd_gen, "generate a channel of a given class")
    p.add_argument("--class", dest="cls", required=True, choices=["c1", "c2", "c3", "c4", "random"])
    p.add_argument("--dims", type=_dims, required=True, help="ds1,ds2,dt1,dt2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kraus", type=int, default=DEFAULT_RANDOM_KRAUS, help="Kraus count for --class random")
    p.add_argument("--out", required=True)

    p = add("verify", cmd_verify, "check trace preservation and complete positivity")
    p.add_argument("file")
    p.add_argument("--against", help="also require Choi distance <= tol to this channel")

    p = add("classify", cmd_classify, "classify as C1-C4 or NotSL")
    p.add_argument("file")

    p = add("compose", cmd_compose, "apply the first channel, then the second")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", required=True)

    p = add("dilate", cmd_dilate, "unitary dilation of a C1 channel on equal splits")
    p.add_argument("file")
    p.add_argument("--out", required=True)

    p = add("lift", cmd_lift, "write the product pair of factor channels")
    p.add_argument("file")
    p.add_argument("--out", required=True)

    p = add("restrict", cmd_restrict, "single-particle restriction of a lifted pair")
    p.add_argument("file")
    p.add_argument("--out", required=True)

    p = add("demo", cmd_demo, "channel induced by a location-local interaction")
    p.add_argument("--dims", type=_dims, default=ChannelShape.from_dims(2, 2, 2, 2))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.tol <= 0:
            raise DomainError("--tol must be positive")
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ShapeError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
