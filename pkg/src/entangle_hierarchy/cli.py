"""Command-line front end.

    entangle-hierarchy classify --builtin antisym3 --cut AB
    entangle-hierarchy verify --suite all --samples 200 --seed 42
    entangle-hierarchy demo [--json]
    entangle-hierarchy sample --dims 2,2 --samples 1000 --rank 4
    entangle-hierarchy channel --builtin-channel tiles

Tolerances can be overridden with ``--tol.<name>=<value>`` (herm, psd,
trace, eig, rank, maj, ent). Exit codes: 0 success, 1 a verification
failed, 2 invalid input, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import channels
from .config import MAX_DIM, RunConfig, Tolerances
from .criteria import CriterionClass, classify
from .demo import demo_rows, format_table
from .errors import ConsistencyError, DimensionError, InvalidStateError, NumericError, UsageError
from .linalg import PureVector, QuantumState, partial_trace
from .states import builtin, derive_seed, random_density, random_separable, reduce_all
from .statefile import load_state
from .sweeps import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2, 3


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2,3") from None
    if any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("dimensions must be >= 1")
    return dims


def split_tolerances(argv: list[str]) -> tuple[list[str], dict[str, float]]:
    """Pull ``--tol.<name>=<value>`` / ``--tol.<name> <value>`` out of argv."""
    rest, tol = [], {}
    it = iter(argv)
    for arg in it:
        if arg.startswith("--tol."):
            key, eq, val = arg[len("--tol."):].partition("=")
            if not eq:
                val = next(it, None)
                if val is None:
                    raise UsageError(f"missing value for --tol.{key}")
            try:
                tol[key] = float(val)
            except ValueError:
                raise UsageError(f"bad tolerance value {val!r} for {key}") from None
        else:
            rest.append(arg)
    return rest, tol


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entangle-hierarchy", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a bipartite state against the nine classes")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", help="bell, maxent:d, ghz3, locking:d, antisym3, tiles")
    src.add_argument("--state", help="path to a JSON state file")
    c.add_argument("--cut", choices=("AB", "AC", "BC"), default=None,
                   help="bipartition of a tripartite state (default AB)")
    c.add_argument("--dims", type=_dims, help="reinterpret the subsystem dimensions")

    v = sub.add_parser("verify", help="run a property/theorem sweep, JSONL on stdout")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dims", type=_dims)

    d = sub.add_parser("demo", help="reproduce the worked-example table")
    d.add_argument("--json", action="store_true")

    s = sub.add_parser("sample", help="verdict frequencies over a random ensemble")
    s.add_argument("--dims", type=_dims, default=(2, 2))
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rank", type=int, help="fixed rank for random density matrices")
    s.add_argument("--ensemble", choices=("mixed", "density", "separable"), default="mixed")

    ch = sub.add_parser("channel", help="classify a channel given by its isometry")
    csrc = ch.add_mutually_exclusive_group(required=True)
    csrc.add_argument("--channel", help="path to a JSON channel file")
    csrc.add_argument("--builtin-channel",
                      help="identity:d, depolarizing:d, dephasing:d, tiles")
    ch.add_argument("--samples", type=int, default=64)
    ch.add_argument("--seed", type=int, default=0)
    return p


def _select(state, cut: str | None) -> QuantumState:
    if isinstance(state, PureVector):
        if state.nsys == 3:
            return reduce_all(state).cut(cut or "AB").with_certificate(
                state.marginal_certs.get(cut or "AB"))
        state = state.density()
    if state.nsys == 3:
        keep = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}[cut or "AB"]
        return partial_trace(state, keep)
    if state.nsys != 2:
        raise UsageError(f"need a bipartite or tripartite state, got dims {state.dims}")
    if cut not in (None, "AB"):
        raise UsageError("--cut only applies to tripartite states")
    return state


def _resolve(args, tol: Tolerances) -> QuantumState:
    if args.builtin:
        state = builtin(args.builtin).state
    else:
        state = load_state(args.state, tol)
    if args.dims:
        if isinstance(state, PureVector):
            state = PureVector(state.amplitudes, args.dims, tol=tol)
        else:
            state = QuantumState(state.matrix, args.dims, state.certificate, tol=tol)
    return _select(state, args.cut)


def cmd_classify(args, tol: Tolerances, out) -> int:
    rho = _resolve(args, tol)
    report = classify(rho, tol=tol)
    print(_dump(report.to_json()), file=out)
    return EXIT_OK


def cmd_verify(args, tol: Tolerances, out) -> int:
    cfg = RunConfig(seed=args.seed, samples=args.samples, dims=args.dims, tol=tol)
    last = None
    for rec in run_suite(args.suite, cfg.samples, cfg.seed, cfg.dims, cfg.tol):
        print(_dump(rec), file=out)
        last = rec
    return EXIT_OK if last["ok"] else EXIT_FAIL


def cmd_demo(args, tol: Tolerances, out) -> int:
    rows = demo_rows(tol)
    if args.json:
        print(_dump({"rows": [r.to_json() for r in rows], "ok": all(r.ok for r in rows)}), file=out)
    else:
        print(format_table(rows), file=out)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def sample_summary(dims, samples: int, seed: int, ensemble: str = "mixed", rank=None,
                   tol: Tolerances = Tolerances()) -> dict:
    dA, dB = dims
    n = dA * dB
    if rank is not None and not 1 <= rank <= n:
        raise UsageError(f"rank must lie in [1, {n}]")
    counts = {c: Counter() for c in CriterionClass}
    for i in range(samples):
        si = derive_seed(seed, i)
        kind = ensemble if ensemble != "mixed" else ("density", "separable")[i % 2]
        if kind == "density":
            r = rank if rank is not None else 1 + si % n
            rho = random_density(n, r, si, (dA, dB))
        else:
            rho = random_separable(dA, dB, 1 + si % (n + 1), si)
        report = classify(rho, tol=tol)
        for c in CriterionClass:
            counts[c][report.value(c).value] += 1
    return {
        "dims": [dA, dB], "samples": samples, "seed": seed, "ensemble": ensemble, "rank": rank,
        "fractions": {c.value: {k: counts[c][k] / samples for k in ("Yes", "No", "Unknown")}
                      for c in CriterionClass},
    }


def cmd_sample(args, tol: Tolerances, out) -> int:
    cfg = RunConfig(seed=args.seed, samples=args.samples, dims=args.dims, tol=tol)
    if len(cfg.dims) != 2:
        raise UsageError("sample needs bipartite --dims dA,dB")
    print(_dump(sample_summary(cfg.dims, cfg.samples, cfg.seed, args.ensemble, args.rank, tol)),
          file=out)
    return EXIT_OK


def _builtin_channel(spec: str) -> channels.ChannelIsometry:
    name, _, arg = spec.partition(":")
    if name == "tiles":
        return channels.tiles_channel()
    makers = {"identity": channels.identity_channel, "depolarizing": channels.completely_depolarizing,
              "dephasing": channels.dephasing_to_environment}
    if name not in makers:
        raise UsageError(f"unknown builtin channel {spec!r}")
    try:
        d = int(arg or 2)
    except ValueError:
        raise UsageError(f"bad dimension in {spec!r}") from None
    if not 1 <= d or d**4 > MAX_DIM:
        raise UsageError(f"dimension {d} out of range")
    return makers[name](d)


def cmd_channel(args, tol: Tolerances, out) -> int:
    v = channels.load_channel(args.channel, tol) if args.channel else _builtin_channel(args.builtin_channel)
    report = channels.classify_channel(v, args.samples, args.seed, tol)
    print(_dump(report.to_json()), file=out)
    return EXIT_FAIL if report.corollary2.violated else EXIT_OK


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "demo": cmd_demo,
            "sample": cmd_sample, "channel": cmd_channel}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, overrides = split_tolerances(argv)
        tol = Tolerances().override(**overrides)
    except (UsageError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, tol, out)
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (UsageError, InvalidStateError, DimensionError, NumericError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
