"""Campaign orchestration: enumerate path instances for a (d, n, k)
nonexistence claim, solve them with timeout-driven cube splitting, and
keep an auditable append-only ledger so interrupted runs resume without
recomputing finished work.

A campaign is ALL-UNSAT when the recorded verdicts cover every instance
(every split subtree fully UNSAT); one verified SAT model refutes the
claim and is stored.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass

from polydiam.encoder import encode_instance, write_dimacs
from polydiam.paths import (
    KNOWN_CLASS_COUNTS,
    PathType,
    enumerate_all,
    read_paths,
    write_paths,
)
from polydiam.solving import SolverConfig, resplit, solve, split, SplitNode

__all__ = [
    "CampaignManifest",
    "CampaignError",
    "LedgerError",
    "Ledger",
    "prepare_manifest",
    "load_manifest",
    "run_campaign",
    "resume",
    "status",
]


class CampaignError(RuntimeError):
    pass


class LedgerError(RuntimeError):
    def __init__(self, msg, record_index=None):
        self.record_index = record_index
        super().__init__(msg if record_index is None else f"{msg} (record {record_index})")


@dataclass
class CampaignManifest:
    d: int
    n: int
    k: int
    workdir: str
    paths_file: str
    paths_digest: str
    backend: list[str] | None = None
    flags: tuple[str, ...] = ()
    timeout: float = 600.0
    split_depth: int = 4
    max_depth: int = 12
    jobs: int = 1
    keep_cnf: bool = False

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            backend=self.backend, flags=tuple(self.flags), timeout=self.timeout
        )

    def identity_digest(self) -> str:
        """Digest of what a ledger binds to: the claim and its instance
        list, not tunable solver knobs (those may change across resumes)."""
        blob = json.dumps(
            {"d": self.d, "n": self.n, "k": self.k, "paths": self.paths_digest},
            sort_keys=True,
        ).encode()
        return hashlib.sha256(blob).hexdigest()

    def save(self) -> str:
        path = os.path.join(self.workdir, "manifest.json")
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=1, sort_keys=True)
            f.write("\n")
        return path


def load_manifest(path: str) -> CampaignManifest:
    with open(path) as f:
        data = json.load(f)
    data["flags"] = tuple(data.get("flags", ()))
    return CampaignManifest(**data)


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def prepare_manifest(
    d: int,
    n: int,
    k: int,
    workdir: str,
    paths: dict | None = None,
    **kwargs,
) -> CampaignManifest:
    """Enumerate (or accept) the instance list, write the path file, and
    persist a manifest binding its digest."""
    os.makedirs(workdir, exist_ok=True)
    paths_file = os.path.join(workdir, "paths.jsonl")
    if not os.path.exists(paths_file):
        grouped = paths if paths is not None else enumerate_all(d, n, k)
        with open(paths_file, "w") as f:
            write_paths(grouped, f)
    manifest = CampaignManifest(
        d=d,
        n=n,
        k=k,
        workdir=workdir,
        paths_file=paths_file,
        paths_digest=_file_digest(paths_file),
        **kwargs,
    )
    manifest.save()
    return manifest


class Ledger:
    """Append-only JSONL record store, fsynced per record."""

    def __init__(self, path: str):
        self.path = path
        self._fh = None
        self._seq = 0

    def open(self):
        existing = self.load(self.path) if os.path.exists(self.path) else []
        self._seq = existing[-1]["seq"] + 1 if existing else 0
        self._fh = open(self.path, "a")
        return existing

    def append(self, record: dict) -> dict:
        record = {"seq": self._seq, **record}
        self._seq += 1
        self._fh.write(json.dumps(record, sort_keys=True) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        return record

    def close(self):
        if self._fh:
            self._fh.close()
            self._fh = None

    @staticmethod
    def load(path: str) -> list[dict]:
        records = []
        with open(path) as f:
            for i, line in enumerate(f):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as e:
                    raise LedgerError(f"corrupt ledger line: {e}", record_index=i)
                if rec.get("seq") != len(records):
                    raise LedgerError("non-contiguous sequence", record_index=i)
                records.append(rec)
        return records


# ------------------------------------------------------------------ worker


def _solve_unit(args: dict) -> dict:
    """Encode and solve one (path, cube) unit; runs in a worker process."""
    path = PathType(args["d"], args["n"], tuple(tuple(f) for f in args["facets"]))
    cnf = encode_instance(path, args["n"])
    cfg = SolverConfig(
        backend=args["backend"], flags=tuple(args["flags"]), timeout=args["timeout"]
    )
    cube = tuple(args["cube"])
    res = solve(cnf, cfg, assumptions=cube)
    digest = res.instance_digest
    job_id = digest[:16] + (f"-c{hashlib.sha256(repr(cube).encode()).hexdigest()[:8]}" if cube else "")
    jobdir = os.path.join(args["workdir"], "jobs", job_id)
    os.makedirs(jobdir, exist_ok=True)
    with open(os.path.join(jobdir, "result.json"), "w") as f:
        json.dump(
            {
                "path_id": args["path_id"],
                "class": args["cls"],
                "cube": list(cube),
                "verdict": res.verdict,
                "wall_time": res.wall_time,
                "backend": res.backend,
                "instance_digest": digest,
                "detail": res.detail,
            },
            f,
            indent=1,
        )
    if cube:
        with open(os.path.join(jobdir, "cube.json"), "w") as f:
            json.dump(list(cube), f)
    if args["keep_cnf"]:
        with gzip.open(os.path.join(jobdir, "instance.cnf.gz"), "wb") as f:
            write_dimacs(cnf, f, extra_units=cube)
    model_file = None
    if res.verdict == "SAT":
        model_file = os.path.join(jobdir, "model.json")
        with open(model_file, "w") as f:
            json.dump(res.model, f)
    return {
        "path_id": args["path_id"],
        "class": args["cls"],
        "cube": list(cube) if cube else None,
        "depth": args["depth"],
        "verdict": res.verdict,
        "wall_time": round(res.wall_time, 3),
        "backend": res.backend,
        "instance_digest": digest,
        "model_file": model_file,
        "timestamp": time.time(),
    }


# ---------------------------------------------------------------- campaign


class _State:
    """Replayable aggregation of ledger records into campaign state."""

    def __init__(self, manifest: CampaignManifest, rows):
        self.manifest = manifest
        self.rows = rows  # list of (PathType, PathClass)
        self.replaying = False
        self.resolved: set[tuple[int, tuple[int, ...]]] = set()
        self.pending: dict[tuple[int, tuple[int, ...]], dict] = {}
        self.outstanding = [1] * len(rows)
        self.stuck: set[int] = set()
        self.split_paths: set[int] = set()
        self.sat_record: dict | None = None
        self._cnf_cache: dict[int, object] = {}
        for pid, (p, cls) in enumerate(rows):
            self.pending[(pid, ())] = self._unit(pid, p, cls, (), 0)

    def _unit(self, pid, p, cls, cube, depth) -> dict:
        m = self.manifest
        return {
            "d": p.d,
            "n": m.n,
            "facets": [list(f) for f in p.facets],
            "path_id": pid,
            "cls": [cls.m, cls.l],
            "cube": list(cube),
            "depth": depth,
            "backend": m.backend,
            "flags": list(m.flags),
            "timeout": m.timeout,
            "workdir": m.workdir,
            "keep_cnf": m.keep_cnf,
        }

    def _cnf(self, pid):
        if pid not in self._cnf_cache:
            p, _ = self.rows[pid]
            self._cnf_cache[pid] = encode_instance(p, self.manifest.n)
        return self._cnf_cache[pid]

    def apply(self, rec: dict) -> None:
        pid = rec["path_id"]
        cube = tuple(rec["cube"] or ())
        key = (pid, cube)
        if key in self.resolved or key not in self.pending:
            return
        verdict = rec["verdict"]
        if verdict not in ("SAT", "UNSAT", "TIMEOUT") and self.replaying:
            return  # transient failure: leave the slot schedulable
        del self.pending[key]
        self.resolved.add(key)
        p, cls = self.rows[pid]
        if verdict == "SAT":
            self.sat_record = rec
            return
        if verdict == "UNSAT":
            self.outstanding[pid] -= 1
            return
        if verdict == "TIMEOUT":
            depth = rec.get("depth", len(cube))
            m = self.manifest
            new_depth = min(depth + m.split_depth, m.max_depth)
            if new_depth <= depth:
                self.stuck.add(pid)
                self.outstanding[pid] -= 1
                return
            cnf = self._cnf(pid)
            if cube:
                node = SplitNode(cube, depth, cube)
                children = resplit(node, cnf, new_depth - depth)
            else:
                children = split(cnf, new_depth)
            self.split_paths.add(pid)
            self.outstanding[pid] += len(children) - 1
            for ch in children:
                self.pending[(pid, ch.cube)] = self._unit(pid, p, cls, ch.cube, ch.depth)
            return
        # ERROR or anything else: leave unresolved for a future resume
        self.stuck.add(pid)
        self.outstanding[pid] -= 1

    def verdict(self) -> str:
        if self.sat_record is not None:
            return "REFUTED"
        if not self.pending and not self.stuck and all(o == 0 for o in self.outstanding):
            return "ALL-UNSAT"
        return "INCOMPLETE"


def _load_rows(manifest: CampaignManifest):
    if _file_digest(manifest.paths_file) != manifest.paths_digest:
        raise CampaignError("path file digest does not match manifest")
    with open(manifest.paths_file) as f:
        rows = read_paths(f)
    key = (manifest.d, manifest.n, manifest.k)
    if key in KNOWN_CLASS_COUNTS:
        got: dict[tuple[int, int], int] = {}
        for _, cls in rows:
            got[(cls.m, cls.l)] = got.get((cls.m, cls.l), 0) + 1
        want = KNOWN_CLASS_COUNTS[key]
        if got != want:
            raise CampaignError(
                f"enumeration regression for {key}: got {got}, published {want}"
            )
    return rows


def run_campaign(
    manifest: CampaignManifest,
    ledger_path: str | None = None,
    max_records: int | None = None,
    progress=None,
) -> str:
    """Run (or resume) a campaign; returns ALL-UNSAT, REFUTED, or
    INCOMPLETE.  max_records bounds ledger appends (budget control)."""
    rows = _load_rows(manifest)
    ledger_path = ledger_path or os.path.join(manifest.workdir, "ledger.jsonl")
    ledger = Ledger(ledger_path)
    existing = ledger.open()
    try:
        state = _State(manifest, rows)
        state.replaying = True
        for rec in existing:
            if rec.get("kind") == "header":
                if rec.get("identity") != manifest.identity_digest():
                    raise CampaignError("ledger belongs to a different campaign")
                continue
            state.apply(rec)
        state.replaying = False
        if not existing:
            ledger.append(
                {
                    "kind": "header",
                    "identity": manifest.identity_digest(),
                    "paths_digest": manifest.paths_digest,
                    "timestamp": time.time(),
                }
            )
        if state.sat_record is not None:
            return "REFUTED"

        # easiest classes first: highest revisit count m
        def unit_order(item):
            (pid, cube), unit = item
            return (-unit["cls"][0], pid, unit["depth"])

        appended = 0
        with ProcessPoolExecutor(max_workers=manifest.jobs) as pool:
            futures = {}

            def submit_ready():
                for key, unit in sorted(state.pending.items(), key=unit_order):
                    if key not in futures:
                        futures[key] = pool.submit(_solve_unit, unit)

            submit_ready()
            while futures:
                done, _ = wait(list(futures.values()), return_when=FIRST_COMPLETED)
                done_keys = [k for k, f in futures.items() if f in done]
                for key in done_keys:
                    rec = futures.pop(key).result()
                    rec = ledger.append(rec)
                    appended += 1
                    state.apply(rec)
                    if progress:
                        progress(rec, state)
                if state.sat_record is not None:
                    for f in futures.values():
                        f.cancel()
                    return "REFUTED"
                if max_records is not None and appended >= max_records:
                    for f in futures.values():
                        f.cancel()
                    return state.verdict()
                submit_ready()
        return state.verdict()
    finally:
        ledger.close()


def resume(manifest: CampaignManifest, ledger_path: str, **kwargs) -> str:
    """Re-schedule only unresolved slots of an interrupted campaign."""
    if not os.path.exists(ledger_path):
        raise CampaignError(f"no ledger at {ledger_path}")
    return run_campaign(manifest, ledger_path=ledger_path, **kwargs)


def status(records: list[dict]) -> dict:
    """Summarize ledger records: per-class progress and difficult
    instances (those that required splitting)."""
    per_class: dict[tuple[int, int], dict] = {}
    split_paths = set()
    solved_paths = {}
    refuted = False
    for rec in records:
        if rec.get("kind") == "header":
            continue
        cls = tuple(rec["class"])
        bucket = per_class.setdefault(
            cls, {"records": 0, "unsat": 0, "sat": 0, "timeout": 0, "error": 0}
        )
        bucket["records"] += 1
        v = rec["verdict"].lower()
        bucket[v if v in ("unsat", "sat", "timeout") else "error"] += 1
        if rec.get("cube") or v == "timeout":
            split_paths.add(rec["path_id"])
        if v == "sat":
            refuted = True
        solved_paths.setdefault(rec["path_id"], []).append(rec["verdict"])
    return {
        "per_class": {f"{m},{l}": v for (m, l), v in sorted(per_class.items())},
        "paths_touched": len(solved_paths),
        "difficult": len(split_paths),
        "refuted": refuted,
    }
