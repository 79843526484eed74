"""Command-line front end: ``pohpp solve | gen | verify | bench``."""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import blocklike, cliquemod, gadgets, oracle, planar, sparse
from .core import (
    CYCLE,
    DECISION,
    MIN,
    PATH,
    Instance,
    PohppError,
    Solution,
    TooLarge,
    load_instance,
    read_instance,
    to_mask,
    validate_solution,
    write_instance,
)
from .generate import random_instance

EXIT_OK = 0
EXIT_NO = 1
EXIT_PRECONDITION = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 64

ALGOS = (
    "auto",
    "oracle",
    "fes",
    "block",
    "edge-block",
    "dist-block",
    "clique-module",
    "planar-inner",
    "dist-outerplanar",
)
DECISION_ONLY = {"block", "edge-block", "dist-block", "clique-module"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ solving


def _run_oracle(inst: Instance, max_n: int) -> Solution | None:
    if inst.n > max_n:
        raise TooLarge(f"oracle limited to n <= {max_n} here, got {inst.n}")
    return oracle.solve_exact(inst)


def _find_certificate(inst: Instance, algo: str, k: int) -> Instance:
    g = inst.graph
    certs = dict(inst.certificates)
    if algo == "edge-block" and inst.deletion_edges is None:
        F = blocklike.find_block_deletion_edges(g, k)
        if F is None:
            raise PohppError(f"no edge deletion set of size <= {k} to a block graph")
        certs["deletion_edges"] = tuple(F)
    elif algo == "dist-block" and inst.deletion_vertices is None:
        W = blocklike.find_block_deletion_set(g, k)
        if W is None:
            raise PohppError(f"no vertex deletion set of size <= {k} to a block graph")
        certs["deletion_vertices"] = tuple(W)
    elif algo == "clique-module" and inst.deletion_vertices is None:
        W, _ = cliquemod.find_clique_module_set(g)
        certs["deletion_vertices"] = tuple(W)
    elif algo == "dist-outerplanar" and inst.deletion_vertices is None:
        W = planar.find_outerplanar_deletion_set(g, k)
        if W is None:
            raise PohppError(f"no vertex deletion set of size <= {k} to a connected outerplanar graph")
        certs["deletion_vertices"] = tuple(W)
    return inst.replace(certificates=certs)


# certificate sizes up to which ``auto`` prefers the parameterized solver
AUTO_MAX_F = 4
AUTO_MAX_W = 3
AUTO_MAX_W_CLIQUE = 8


def _outerplanar_host(g, host: int) -> bool:
    return bool(host) and g.is_connected(host) and planar._recognize_host(g, host) is not None


def _auto_algo(inst: Instance, max_n: int) -> str:
    g = inst.graph
    decision = inst.objective == DECISION
    F = inst.deletion_edges
    W = inst.deletion_vertices
    if F is not None and decision and len(F) <= AUTO_MAX_F:
        return "edge-block"
    if W is not None:
        host = g.all_mask & ~to_mask(W)
        if decision and len(W) <= AUTO_MAX_W and blocklike.is_block_graph(g, host):
            return "dist-block"
        C = [v for v in range(g.n) if host >> v & 1]
        if decision and len(W) <= AUTO_MAX_W_CLIQUE and cliquemod.is_clique_module(g, C):
            return "clique-module"
        if len(W) <= AUTO_MAX_W and (inst.embedding is not None or _outerplanar_host(g, host)):
            return "dist-outerplanar"
    elif inst.embedding is not None:
        return "planar-inner"
    if inst.n <= max_n:
        return "oracle"
    raise PohppError(f"no usable certificate and n = {inst.n} exceeds --max-n {max_n}")


def solve_with(inst: Instance, algo: str, max_n: int = oracle.EXACT_MAX_N, fes_max_k: int = 20) -> Solution | None:
    """Run one solver by CLI name; precondition failures raise PohppError."""
    if algo == "auto":
        algo = _auto_algo(inst, max_n)
    if algo in DECISION_ONLY and inst.objective == MIN:
        raise PohppError(f"algorithm {algo!r} solves the decision problem only")
    if algo == "oracle":
        return _run_oracle(inst, max_n)
    if algo == "fes":
        k = sparse.feedback_edge_number(inst.graph)
        if k > fes_max_k:
            raise PohppError(f"feedback edge number {k} exceeds --fes-max-k {fes_max_k}")
        return sparse.solve_fes(inst)
    if algo == "block":
        return blocklike.solve_block_graph(inst)
    if algo == "edge-block":
        return blocklike.solve_edge_distance_block(inst)
    if algo == "dist-block":
        return blocklike.solve_distance_block(inst)
    if algo == "clique-module":
        return cliquemod.solve_clique_module(inst)
    if algo == "planar-inner":
        return planar.solve_inner_vertices(inst)
    if algo == "dist-outerplanar":
        return planar.solve_distance_outerplanar(inst)
    raise ValueError(f"unknown algorithm {algo!r}")


def _result_doc(sol: Solution | None, algo: str, elapsed_ms) -> dict:
    return {
        "feasible": sol is not None,
        "order": None if sol is None else list(sol.order),
        "cost": None if sol is None else sol.cost,
        "algo": algo,
        "elapsed_ms": elapsed_ms,
    }


def _same_verdict(inst: Instance, a: Solution | None, b: Solution | None) -> bool:
    if (a is None) != (b is None):
        return False
    if a is None:
        return True
    if inst.objective == MIN and a.cost != b.cost:
        return False
    return validate_solution(inst, a.order).ok


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    algo = args.algo
    if args.find_certificate:
        if algo == "auto":
            raise UsageError("--find-certificate needs an explicit --algo")
        inst = _find_certificate(inst, algo, args.cert_max_k)
    if algo == "auto":
        algo = _auto_algo(inst, args.max_n)
    start = time.perf_counter()
    sol = solve_with(inst, algo, args.max_n, args.fes_max_k)
    elapsed = None if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
    doc = _result_doc(sol, algo, elapsed)
    text = json.dumps(doc, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    if args.verify_with_oracle:
        ref = oracle.solve_exact(inst)
        if not _same_verdict(inst, sol, ref):
            print(f"mismatch: {algo} says {doc['feasible']}, oracle says {ref is not None}", file=sys.stderr)
            return EXIT_MISMATCH
    if args.expect == "yes" and sol is None:
        return EXIT_NO
    if args.expect == "no" and sol is not None:
        return EXIT_NO
    return EXIT_OK


# --------------------------------------------------------------- generation


def _gen_instance(args) -> Instance:
    rng = random.Random(args.seed)
    kind = args.kind
    if kind in ("mcp-d2p", "mcp-d2c"):
        m = gadgets.random_mcp(rng, args.k, args.q, args.density, plant=args.plant)
        if kind == "mcp-d2p":
            inst = gadgets.gen_w1_d2p(m, args.variant or "path", pad=not args.no_pad)
        else:
            inst = gadgets.gen_w1_d2c(m, args.variant or "clique", pad=not args.no_pad)
        seed_doc = {"k": m.k, "q": m.q, "edges": sorted(sorted(list(x) for x in e) for e in m.edges)}
    elif kind == "ecc":
        if args.constraints_file:
            doc = json.loads(Path(args.constraints_file).read_text())
            n = int(doc["n"])
            a = gadgets.AlepInstance(n, tuple((int(i), n + int(j)) for i, j in doc["constraints"]))
        else:
            a = gadgets.random_alep(rng, args.n, args.density)
        inst = gadgets.gen_ecc(a)
        seed_doc = {"n": a.n, "constraints": [[i, j - a.n] for i, j in a.constraints]}
    else:
        objective = args.objective or DECISION
        d = args.d if args.d is not None else args.n
        inst = random_instance(rng, args.n, args.p, d, args.variant or PATH, objective, args.max_weight)
        seed_doc = {"n": args.n, "p": args.p, "d": d}
    meta = dict(inst.meta or {})
    meta.update(generator=kind, seed=args.seed, source=seed_doc)
    return inst.replace(meta=meta)


def cmd_gen(args) -> int:
    if args.kind in ("mcp-d2p", "mcp-d2c") and (args.k is None or args.q is None):
        raise UsageError(f"gen {args.kind} needs --k and --q")
    if args.kind in ("ecc", "random") and args.n is None and not args.constraints_file:
        raise UsageError(f"gen {args.kind} needs --n")
    variants = {
        "mcp-d2p": ("path", "modules"),
        "mcp-d2c": ("clique", "cluster-modules"),
        "random": (PATH, CYCLE),
        "ecc": (),
    }[args.kind]
    if args.variant is not None and args.variant not in variants:
        raise UsageError(f"--variant for {args.kind} must be one of {', '.join(variants) or 'nothing'}")
    data = write_instance(_gen_instance(args))
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    if args.order is not None:
        try:
            order = [int(x) for x in args.order.replace(",", " ").split()]
        except ValueError as exc:
            raise UsageError(f"--order must list vertex ids: {exc}") from exc
    else:
        doc = json.loads(Path(args.solution).read_text())
        order = doc["order"] if isinstance(doc, dict) else doc
        if order is None:
            raise UsageError("solution file holds no order")
    rep = validate_solution(inst, order)
    print(
        json.dumps(
            {
                "ok": rep.ok,
                "is_permutation": rep.is_permutation,
                "edges_present": rep.edges_present,
                "cycle_closed": rep.cycle_closed,
                "extends_poset": rep.extends_poset,
                "cost": rep.cost,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK if rep.ok else EXIT_NO


# -------------------------------------------------------------------- bench


BENCH_COLUMNS = ("instance", "algo", "feasible", "cost", "elapsed_ms", "verdict_matches_oracle")


def _corpus(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.rglob("*.json")))
        else:
            files.append(p)
    return files


def _bench_one(job) -> list[dict]:
    path, algos, max_n, fes_max_k = job
    inst = read_instance(Path(path).read_bytes())
    try:
        ref = oracle.solve_exact(inst)
        have_ref = True
    except TooLarge:
        ref, have_ref = None, False
    rows = []
    for algo in algos:
        start = time.perf_counter()
        try:
            sol = solve_with(inst, algo, max_n, fes_max_k)
            feasible = "yes" if sol is not None else "no"
            cost = "" if sol is None else sol.cost
            match = _same_verdict(inst, sol, ref) if have_ref else ""
        except PohppError as exc:
            feasible, cost, match = f"error:{type(exc).__name__}", "", ""
        elapsed = round((time.perf_counter() - start) * 1000, 3)
        rows.append(
            {
                "instance": str(path),
                "algo": algo,
                "feasible": feasible,
                "cost": cost,
                "elapsed_ms": elapsed,
                "verdict_matches_oracle": match,
            }
        )
    return rows


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGOS]
    if bad or not algos:
        raise UsageError(f"unknown algorithm(s): {', '.join(bad) or '(none)'}")
    files = _corpus(args.corpus)
    if not files:
        raise UsageError("empty corpus")
    jobs = [(str(f), algos, args.max_n, args.fes_max_k) for f in files]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, jobs))
    else:
        results = [_bench_one(j) for j in jobs]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for rows in results:
            writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pohpp", description="Hamiltonian paths and cycles under precedence constraints.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGOS, default="auto")
    s.add_argument("--max-n", type=int, default=oracle.EXACT_MAX_N, help="largest n handed to the oracle")
    s.add_argument("--expect", choices=("yes", "no"))
    s.add_argument("--verify-with-oracle", action="store_true")
    s.add_argument("--fes-max-k", type=int, default=20)
    s.add_argument("--find-certificate", action="store_true", help="search a deletion set when none is given")
    s.add_argument("--cert-max-k", type=int, default=3, help="size cap for --find-certificate")
    s.add_argument("--no-timing", action="store_true", help="write elapsed_ms as null for byte-stable output")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("mcp-d2p", "mcp-d2c", "ecc", "random"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--plant", action="store_true", help="plant a multicolored clique in the seed")
    g.add_argument("--no-pad", action="store_true", help="emit the gadget without seed padding")
    g.add_argument("--variant")
    g.add_argument("--constraints-file", help="ecc seed as JSON {n, constraints: [[i, j], ...]} meaning a_i before b_j")
    g.add_argument("--p", type=float, default=0.5, help="edge probability (random)")
    g.add_argument("--d", type=int, help="number of precedence constraints (random)")
    g.add_argument("--objective", choices=(DECISION, MIN))
    g.add_argument("--max-weight", type=int, default=9)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check an order against an instance")
    v.add_argument("instance")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--order", help="vertex ids separated by commas or spaces")
    src.add_argument("--solution", help="JSON file with an 'order' field, e.g. solve output")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run solvers over a corpus and write CSV")
    b.add_argument("corpus", nargs="+", help="instance files or directories")
    b.add_argument("--algos", default="oracle")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--max-n", type=int, default=oracle.EXACT_MAX_N)
    b.add_argument("--fes-max-k", type=int, default=20)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, usage errors EXIT_USAGE
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pohpp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PohppError, ValueError, KeyError, OSError) as exc:
        print(f"pohpp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
