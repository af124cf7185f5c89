"""Command-line entry point.

Subcommands: paths, encode, solve, split, campaign, bounds.
Exit codes: 0 success / ALL-UNSAT, 1 REFUTED / SAT, 2 usage error,
3 incomplete / timeout, 4 internal error.  Machine-readable output on
stdout; logs and diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from polydiam import __version__

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3
EXIT_INTERNAL = 4


def _eprint(*args):
    print(*args, file=sys.stderr)


def _log_invocation(cmd: str, **kv):
    parts = " ".join(f"{k}={v}" for k, v in kv.items())
    _eprint(f"polydiam {__version__} | {cmd} | {parts}")


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _parse_range(text: str) -> tuple[int, int]:
    a, _, b = text.partition(":")
    return int(a), int(b if b else a)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polydiam",
        description="Facet-path enumeration, chirotope SAT instances, "
        "proof campaigns, and diameter bound tables.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("paths", help="enumerate path instances for (d, n, k)")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--class", dest="cls", help="restrict to one m,l class")
    p.add_argument("--out", help="write JSONL path file here")
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("encode", help="encode one path instance to DIMACS")
    p.add_argument("paths_file")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--min-distance", type=int, default=None)
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("solve", help="run the SAT backend on a DIMACS file")
    p.add_argument("cnf_file")
    p.add_argument("--solver", default=None)
    p.add_argument("--timeout", type=float, default=3600.0)
    p.add_argument("--assume", default="", help="space-separated literals")

    p = sub.add_parser("split", help="cube-split a DIMACS instance")
    p.add_argument("cnf_file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--order", default="occurrence", choices=["occurrence", "index"])
    p.add_argument("--out")

    p = sub.add_parser("campaign", help="run a (d,n,k) nonexistence campaign")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--workdir", required=True)
    p.add_argument("--solver", default=None)
    p.add_argument("--timeout", type=float, default=600.0)
    p.add_argument("--split-depth", type=int, default=4)
    p.add_argument("--max-depth", type=int, default=12)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--ledger", default=None)
    p.add_argument("--keep-cnf", action="store_true")
    p.add_argument("--max-records", type=int, default=None)

    p = sub.add_parser("bounds", help="render the diameter bound table")
    p.add_argument("--facts", default=None)
    p.add_argument("--hypotheses", default=None)
    p.add_argument("--d-range", default="4:8")
    p.add_argument("--offsets", default="0:4")

    return ap


def cmd_paths(args) -> int:
    from polydiam.paths import PathDomainError, enumerate_all, write_paths

    try:
        grouped = enumerate_all(args.d, args.n, args.k)
    except PathDomainError as e:
        _eprint(f"error: {e}")
        return EXIT_USAGE
    if args.cls:
        try:
            m, l = (int(x) for x in args.cls.split(","))
        except ValueError:
            _eprint(f"error: bad --class {args.cls!r}, expected m,l")
            return EXIT_USAGE
        if (m, l) not in grouped:
            _eprint(f"error: class ({m},{l}) not admissible for these parameters")
            return EXIT_USAGE
        grouped = {(m, l): grouped[(m, l)]}
    if args.out:
        if os.path.exists(args.out) and not args.force:
            _eprint(f"note: {args.out} exists, not rewriting (use --force)")
        else:
            with open(args.out, "w") as f:
                write_paths(grouped, f)
            _eprint(f"wrote {args.out} digest={_file_digest(args.out)}")
    print("d n k m l count")
    total = 0
    for (m, l), paths in sorted(grouped.items()):
        print(f"{args.d} {args.n} {args.k} {m} {l} {len(paths)}")
        total += len(paths)
    print(f"total {total}")
    return EXIT_OK


def cmd_encode(args) -> int:
    from polydiam.encoder import encode_instance, write_dimacs
    from polydiam.paths import read_paths

    with open(args.paths_file) as f:
        rows = read_paths(f)
    if not 0 <= args.index < len(rows):
        _eprint(f"error: index {args.index} outside 0..{len(rows) - 1}")
        return EXIT_USAGE
    path, cls = rows[args.index]
    cnf = encode_instance(path, cls.n, min_distance=args.min_distance)
    _eprint(
        f"instance {args.index}: class ({cls.m},{cls.l}) vars={cnf.nvars} "
        f"clauses={len(cnf.clauses)} digest={cnf.digest()}"
    )
    if args.out:
        if os.path.exists(args.out) and not args.force:
            _eprint(f"note: {args.out} exists, not rewriting (use --force)")
            return EXIT_OK
        with open(args.out, "wb") as f:
            write_dimacs(cnf, f)
    else:
        write_dimacs(cnf, sys.stdout.buffer)
    return EXIT_OK


def cmd_solve(args) -> int:
    import shlex

    from polydiam.encoder import CnfFormula, read_dimacs
    from polydiam.solving import SolverConfig, solve

    with open(args.cnf_file, "rb") as f:
        nvars, clauses = read_dimacs(f)
    cnf = CnfFormula(nvars, clauses)
    backend = shlex.split(args.solver) if args.solver else None
    cfg = SolverConfig(backend=backend, timeout=args.timeout)
    assumptions = [int(t) for t in args.assume.split()] if args.assume.strip() else []
    res = solve(cnf, cfg, assumptions=assumptions)
    print(f"verdict {res.verdict}")
    print(f"wall_time {res.wall_time:.3f}")
    if res.model is not None:
        print("model " + " ".join(map(str, res.model)))
    if res.detail:
        _eprint(res.detail)
    return {
        "SAT": EXIT_REFUTED,
        "UNSAT": EXIT_OK,
        "TIMEOUT": EXIT_INCOMPLETE,
    }.get(res.verdict, EXIT_INTERNAL)


def cmd_split(args) -> int:
    from polydiam.encoder import CnfFormula, read_dimacs
    from polydiam.solving import split

    if args.depth < 1:
        _eprint("error: --depth must be >= 1")
        return EXIT_USAGE
    with open(args.cnf_file, "rb") as f:
        nvars, clauses = read_dimacs(f)
    cnf = CnfFormula(nvars, clauses)
    leaves = split(cnf, args.depth, order=args.order)
    sink = open(args.out, "w") if args.out else sys.stdout
    try:
        for n in leaves:
            sink.write(
                json.dumps(
                    {"cube": list(n.cube), "depth": n.depth, "implied": len(n.implied)}
                )
                + "\n"
            )
    finally:
        if args.out:
            sink.close()
    _eprint(f"{len(leaves)} leaves (depth {args.depth})")
    return EXIT_OK


def cmd_campaign(args) -> int:
    import shlex

    from polydiam.campaign import (
        CampaignError,
        Ledger,
        prepare_manifest,
        run_campaign,
        status,
    )
    from polydiam.paths import PathDomainError

    backend = shlex.split(args.solver) if args.solver else None
    try:
        manifest = prepare_manifest(
            args.d,
            args.n,
            args.k,
            args.workdir,
            backend=backend,
            timeout=args.timeout,
            split_depth=args.split_depth,
            max_depth=args.max_depth,
            jobs=args.jobs,
            keep_cnf=args.keep_cnf,
        )
    except PathDomainError as e:
        _eprint(f"error: {e}")
        return EXIT_USAGE
    ledger_path = args.ledger or os.path.join(args.workdir, "ledger.jsonl")
    _eprint(
        f"campaign ({args.d},{args.n},{args.k}) paths_digest={manifest.paths_digest} "
        f"ledger={ledger_path} backend={backend or 'auto'} jobs={args.jobs}"
    )

    def progress(rec, state):
        _eprint(
            f"[{rec['seq']}] path {rec['path_id']} class {tuple(rec['class'])} "
            f"cube={rec['cube'] or '-'} -> {rec['verdict']} ({rec['wall_time']}s)"
        )

    try:
        verdict = run_campaign(
            manifest,
            ledger_path=ledger_path,
            max_records=args.max_records,
            progress=progress,
        )
    except CampaignError as e:
        _eprint(f"error: {e}")
        return EXIT_USAGE
    summary = status(Ledger.load(ledger_path))
    print("d n k m l count unsat verdict")
    for cls, bucket in summary["per_class"].items():
        m, l = cls.split(",")
        print(
            f"{args.d} {args.n} {args.k} {m} {l} {bucket['records']} "
            f"{bucket['unsat']} {verdict}"
        )
    print(f"difficult {summary['difficult']}")
    print(f"verdict {verdict}")
    if verdict == "REFUTED":
        for rec in reversed(Ledger.load(ledger_path)):
            if rec.get("verdict") == "SAT":
                print(f"model {rec['model_file']}")
                break
        return EXIT_REFUTED
    return EXIT_OK if verdict == "ALL-UNSAT" else EXIT_INCOMPLETE


def cmd_bounds(args) -> int:
    from polydiam.bounds import (
        apply_hypothesis,
        apply_klee_walkup,
        apply_nonexistence,
        load_facts,
        load_hypotheses,
        render,
        seed_known,
    )

    table = seed_known()
    try:
        if args.facts:
            for fact in load_facts(args.facts):
                apply_nonexistence(
                    table,
                    fact["d"],
                    fact["n"],
                    fact["k"],
                    source=fact.get("source", "facts-file"),
                )
        apply_klee_walkup(table)
        if args.hypotheses:
            for hyp in load_hypotheses(args.hypotheses):
                apply_hypothesis(table, hyp["d"], hyp["n"], hyp["value"])
            apply_klee_walkup(table)
        d_range = _parse_range(args.d_range)
        offsets = _parse_range(args.offsets)
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        _eprint(f"error: {e}")
        return EXIT_USAGE
    print(render(table, d_range, offsets))
    for note in table.notes:
        _eprint(f"note: {note}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    _log_invocation(args.command, argv=" ".join(argv or sys.argv[1:]))
    handler = {
        "paths": cmd_paths,
        "encode": cmd_encode,
        "solve": cmd_solve,
        "split": cmd_split,
        "campaign": cmd_campaign,
        "bounds": cmd_bounds,
    }[args.command]
    try:
        return handler(args)
    except FileNotFoundError as e:
        _eprint(f"error: {e}")
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
    except Exception as e:  # internal failure contract
        _eprint(f"internal error: {type(e).__name__}: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
