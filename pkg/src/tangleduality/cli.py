"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 malformed input graph, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .blocks import find_k_blocks, orientation_from_block
from .corpus import corpus, load_manifest, random_graph
from .duality import FAMILIES, MODES, stree_to_dot, verify_duality
from .families import find_f_tangle, orientation_flags
from .graphsep import GraphParseError, enumerate_Sk, load_graph, universe
from .sepsys import DomainError, InvariantError, validate_universe
from .widths import MAX_SEARCH_N, verify_inequalities, width_report

OUTPUT_ENV = "TANGLEDUALITY_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3
COMMANDS = ("widths", "find", "blocks", "duality", "corpus", "validate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    family: str = "block"
    k: int | None = None
    mode: str = "canonical_all"
    format: str = "json"
    max_n: int = 5
    manifest: str | None = None
    output: str | None = None
    seed: int = 0
    random: int = 0
    jobs: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in ("widths", "find", "blocks", "duality", "validate") and not self.input:
            raise UsageError(f"{self.command} needs an input graph")
        if self.family not in FAMILIES:
            raise UsageError(f"family must be one of {FAMILIES}")
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}")
        if self.command in ("find", "blocks", "duality"):
            if self.k is None:
                raise UsageError(f"{self.command} needs --k")
            if self.k < 1:
                raise UsageError("k must be at least 1")
            if self.command != "blocks" and self.family != "block" and self.k < 3:
                print(
                    f"warning: duality claims for {self.family} start at k = 3; running k = {self.k} anyway",
                    file=sys.stderr,
                )
        allowed = {
            "widths": ("json", "csv"),
            "find": ("json",),
            "blocks": ("json",),
            "duality": ("json", "dot"),
            "corpus": ("json", "csv"),
            "validate": ("json",),
        }[self.command]
        if self.format not in allowed:
            raise UsageError(f"{self.command} supports formats {allowed}")
        if self.command == "corpus" and not 1 <= self.max_n <= 8:
            raise UsageError("corpus sweeps need 1 <= max-n <= 8")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tangleduality", description="Tangles, blocks, profiles and their dual trees.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("input", help="graph file (JSON or edge list)")
        sp.add_argument("--format", default="json")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")

    sp = sub.add_parser("widths", help="tw, brw, pw and bw of a graph")
    common(sp)
    sp.add_argument("--mode", default="lean", choices=MODES)

    sp = sub.add_parser("find", help="search a k-tangle, k-profile or k-block orientation")
    common(sp)
    sp.add_argument("--family", default="block", choices=FAMILIES)
    sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("blocks", help="list the k-blocks")
    common(sp)
    sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("duality", help="run both sides of the duality theorem")
    common(sp)
    sp.add_argument("--family", default="block", choices=FAMILIES)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", default="canonical_all", choices=MODES)

    sp = sub.add_parser("corpus", help="sweep all connected graphs up to max-n vertices")
    common(sp, graph=False)
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--manifest", help="JSON list of graphs with expected values")
    sp.add_argument("--mode", default="lean", choices=MODES)
    sp.add_argument("--seed", type=int, default=0, help="seed for --random graphs")
    sp.add_argument("--random", type=int, default=0, help="add this many random graphs")
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("validate", help="check the separation universe axioms of a graph")
    common(sp)
    return p


def _config(ns) -> RunConfig:
    d = {k: v for k, v in vars(ns).items() if v is not None}
    if "max_n" in d:
        d["max_n"] = int(d["max_n"])
    return RunConfig(**d)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_widths(cfg, G):
    rep = width_report(G, mode=cfg.mode)
    ineq = verify_inequalities(G, rep) if rep.pw is not None else None
    if cfg.format == "csv":
        return rep.to_csv()
    out = rep.to_json()
    if ineq is not None:
        out["inequalities"] = ineq["chains"]
    return _dump(out)


def cmd_find(cfg, G):
    from .duality import family_for

    S = enumerate_Sk(G, cfg.k)
    O = find_f_tangle(S, family_for(cfg.family, cfg.k), require_regular=True)
    out = {"schema": "1", "family": cfg.family, "k": cfg.k, "found": O is not None}
    if O is not None:
        out["orientation"] = O.to_json()
        out["flags"] = orientation_flags(O)
    return _dump(out)


def cmd_blocks(cfg, G):
    blocks = find_k_blocks(G, cfg.k)
    S = enumerate_Sk(G, cfg.k) if G.n <= 9 else None
    for b in blocks:
        if S is not None:
            flags = orientation_flags(orientation_from_block(b, S))
            if not all(flags.values()):
                raise InvariantError(f"O(b) is not a regular consistent orientation for {b}")
    return _dump({"schema": "1", "k": cfg.k, "blocks": [b.to_json() for b in blocks]})


def _large_block_duality(cfg, G):
    # beyond the search envelope only the block side is decided, by the
    # pairwise-cut block finder; no S-tree is built
    blocks = find_k_blocks(G, cfg.k)
    if cfg.format == "dot":
        return "// beyond the search envelope: no S-tree is built\n"
    return _dump(
        {
            "schema": "1",
            "graph": G.to_json(),
            "k": cfg.k,
            "family": "block",
            "mode": cfg.mode,
            "holds": "tangle" if blocks else "tree",
            "block": sorted(blocks[0].vertices) if blocks else None,
            "blocks": len(blocks),
            "stree": None,
            "note": f"n = {G.n} exceeds the search envelope (n <= {MAX_SEARCH_N}); only the block side was computed",
        }
    )


def cmd_duality(cfg, G):
    if G.n > MAX_SEARCH_N:
        if cfg.family != "block":
            raise DomainError(f"{cfg.family} duality is limited to n <= {MAX_SEARCH_N}")
        return _large_block_duality(cfg, G)
    rep = verify_duality(G, cfg.k, cfg.family, cfg.mode)
    if cfg.format == "dot":
        if rep.tree is None:
            return "// no S-tree: a tangle side witness exists\n"
        return stree_to_dot(rep.tree) + rep.treedec.to_dot()
    return _dump(rep.to_json())


def cmd_validate(cfg, G):
    U = universe(G)
    problems = validate_universe(U)
    out = {
        "schema": "1",
        "n": G.n,
        "separations": len(U),
        "violations": [{"axiom": v.axiom, "witnesses": [repr(w) for w in v.witnesses]} for v in problems],
        "submodular": {str(k): enumerate_Sk(G, k).is_submodular() for k in range(1, G.n + 2)},
    }
    if problems or not all(out["submodular"].values()):
        raise InvariantError(_dump(out))
    return _dump(out)


def _corpus_entry(args):
    name, G, mode, expect = args
    row = {"name": name, "n": G.n, "m": len(G.edges), "ok": True, "failures": []}
    try:
        for fam, ks in (("block", (1, 2, 3, 4)), ("profile", (3, 4)), ("tangle", (3, 4))):
            for k in ks:
                rep = verify_duality(G, k, fam, mode, check_bar_tangle=False)
                row[f"{fam}{k}"] = rep.side
        ineq = verify_inequalities(G)
        row.update({key: ineq[key] for key in ("tw", "brw", "pw", "bw")})
        for key, want in expect.items():
            got = row.get(key)
            if got != want:
                row["ok"] = False
                row["failures"].append({"check": key, "expected": want, "got": got})
    except InvariantError as e:
        row["ok"] = False
        row["failures"].append({"check": "invariant", "detail": str(e)})
    return row


def cmd_corpus(cfg):
    entries = []
    if cfg.manifest:
        for e in load_manifest(Path(cfg.manifest).read_text()):
            entries.append((e["name"], e["graph"], cfg.mode, e["expect"]))
    else:
        for i, G in enumerate(corpus(cfg.max_n)):
            entries.append((f"n{G.n}_{i}", G, cfg.mode, {}))
        for j in range(cfg.random):
            G = random_graph(cfg.max_n, 0.5, seed=cfg.seed + j)
            entries.append((f"random{cfg.seed + j}", G, cfg.mode, {}))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            rows = list(ex.map(_corpus_entry, entries))
    else:
        rows = [_corpus_entry(e) for e in entries]
    failed = [r for r in rows if not r["ok"]]
    if cfg.format == "csv":
        fields = sorted({k for r in rows for k in r if k != "failures"})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k) for k in fields})
        text = buf.getvalue()
    else:
        text = _dump({"schema": "1", "graphs": len(rows), "failures": len(failed), "rows": rows})
    return text, bool(failed)


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute a validated configuration; returns the exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    failed = False
    try:
        if cfg.command == "corpus":
            text, failed = cmd_corpus(cfg)
        else:
            G = load_graph(cfg.input)
            text = {
                "widths": cmd_widths,
                "find": cmd_find,
                "blocks": cmd_blocks,
                "duality": cmd_duality,
                "validate": cmd_validate,
            }[cfg.command](cfg, G)
    except GraphParseError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except DomainError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(cfg, text, stdout)
    return EXIT_INVARIANT if failed else EXIT_OK


def _emit(cfg, text, stdout):
    target = cfg.output
    if target is None and os.environ.get(OUTPUT_ENV):
        target = str(Path(os.environ[OUTPUT_ENV]) / f"{cfg.command}.{cfg.format}")
    if target is None:
        stdout.write(text)
        return
    Path(target).parent.mkdir(parents=True, exist_ok=True)
    Path(target).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(_config(ns))


if __name__ == "__main__":
    sys.exit(main())
