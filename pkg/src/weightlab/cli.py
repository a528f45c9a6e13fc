"""``weightlab`` command line.

    weightlab weights|pages|complete|verify|plumbing <file>
              [--pair Y|XY|X_XmY|XmY|dU] [--r R] [--seed s,t,i] [--json out]

Exit codes: 0 ok, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .double_complex import PAIRS, build_pair, oracle_homology, total
from .duality import gysin_square_check, pd_identity_check, pd_isomorphism_check, transverse_model
from .errors import InputError, NotInKernelD1, NotVerticalCycle, ObstructedCompletion, WeightlabError
from .homology import homology_all
from .io import SCHEMA, dumps, exact, load_model
from .ncd import NCDModel, dual_graph, level
from .plumbing import PlumbingGraph, boundary_weight_ranks, e1_boundary_from_plumbing, h1_formula_check
from .spectral import (
    check_degeneration,
    class_of_completion,
    complete_cycle,
    completion_support_ok,
    kernel_d1_seeds,
    les_and_truncation_checks,
    page,
    purity_report,
    support_aware_completion,
    weight_table,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class _Failure(Exception):
    """A report whose verification outcome is negative."""

    def __init__(self, report: dict):
        self.report = report


def _header(cmd: str, args, M) -> dict:
    return {
        "schema": SCHEMA,
        "tool": f"weightlab {__version__}",
        "command": cmd,
        "input": {"file": Path(args.file).name, "kind": "plumbing" if isinstance(M, PlumbingGraph) else "ncd"},
    }


def _graph_of(M) -> PlumbingGraph:
    if isinstance(M, PlumbingGraph):
        return M
    if M.n != 2:
        raise InputError("the plumbing path needs a model with n = 2")
    return dual_graph(M)


def _pair_of(args, M) -> str:
    pair = args.pair or ("dU" if isinstance(M, PlumbingGraph) else "Y")
    if pair not in PAIRS:
        raise InputError(f"unknown pair {pair!r}")
    if isinstance(M, PlumbingGraph) and pair != "dU":
        raise InputError("plumbing files only support --pair dU")
    if isinstance(M, NCDModel) and M.X is None and pair != "Y":
        raise InputError(f"pair {pair} needs the ambient space X (divisor-only model)")
    return pair


def _table_rows(W: dict) -> list:
    rows = []
    for k in sorted(W):
        w = W[k]
        if not w.rank and not w.torsion:
            continue
        rows.append({"k": k, "rank": w.rank, "torsion": list(w.torsion),
                     "graded": [{"weight": l, "rank": r} for l, r in sorted(w.graded.items())]})
    return rows


def cmd_weights(args, M) -> dict:
    pair = _pair_of(args, M)
    rep = _header("weights", args, M)
    rep["pair"] = pair
    if isinstance(M, PlumbingGraph):
        table = boundary_weight_ranks(M)
        e1 = e1_boundary_from_plumbing(M)
        rows = []
        for k in range(4):
            graded = [{"weight": l, "rank": r} for l, r in sorted(table[k].items()) if r]
            total_k = sum(table[k].values())
            tors = list(e1.torsion_h1) if k == 1 else []
            if total_k or tors:
                rows.append({"k": k, "rank": total_k, "torsion": tors, "graded": graded})
        rep["table"] = rows
        rep["method"] = "plumbing"
        return rep
    A = build_pair(M, pair)
    rep["table"] = _table_rows(weight_table(A))
    rep["degeneration"] = check_degeneration(A)["passed"]
    rep["method"] = "double_complex"
    return rep


def _parse_r(r: str):
    if r in ("inf", "infinity", "∞"):
        return float("inf")
    try:
        v = int(r)
    except ValueError:
        raise InputError(f"--r must be a positive integer or 'inf', got {r!r}") from None
    if v < 1:
        raise InputError("--r must be at least 1")
    return v


def cmd_pages(args, M) -> dict:
    pair = _pair_of(args, M)
    r = _parse_r(args.r)
    rep = _header("pages", args, M)
    rep.update(pair=pair, r="inf" if r == float("inf") else r)
    if isinstance(M, PlumbingGraph):
        e1 = e1_boundary_from_plumbing(M)
        from .linalg import rank
        if r == 1:
            ent = e1.entries
            d = {st: rank(m) for st, m in e1.d1.items()}
        else:
            ent, d = e1.e2, {}
        rep["entries"] = [{"s": s, "t": t, "rank": v} for (s, t), v in sorted(ent.items()) if v]
        rep["differentials"] = [{"s": s, "t": t, "rank": v} for (s, t), v in sorted(d.items()) if v]
        return rep
    A = build_pair(M, pair)
    P = page(A, r)
    rep["entries"] = [{"s": s, "t": t, "rank": v} for (s, t), v in P.ranks().items()]
    rep["differentials"] = [{"s": s, "t": t, "rank": v} for (s, t), v in sorted(P.differential_ranks().items())]
    return rep


def _parse_seed(seed: str) -> tuple[int, int, int]:
    try:
        s, t, i = (int(x) for x in seed.split(","))
    except (ValueError, AttributeError):
        raise InputError(f"--seed must be s,t,i with integers, got {seed!r}") from None
    return s, t, i


def cmd_complete(args, M) -> dict:
    if isinstance(M, PlumbingGraph):
        raise InputError("completion needs an ncd model")
    if args.seed is None:
        raise InputError("complete needs --seed s,t,i")
    pair = _pair_of(args, M)
    s, t, i = _parse_seed(args.seed)
    A = build_pair(M, pair)
    total(A)
    seeds = kernel_d1_seeds(A, s, t)
    if not 0 <= i < len(seeds):
        raise InputError(f"seed index {i} out of range: ker d¹ at ({s},{t}) has dimension {len(seeds)}")
    rep = _header("complete", args, M)
    rep.update(pair=pair, seed={"s": s, "t": t, "index": i})
    try:
        if pair in ("Y", "XY"):
            c = support_aware_completion(M, A, pair, s, t, seeds[i])
        else:
            c = complete_cycle(A, s, t, seeds[i])
    except (NotVerticalCycle, NotInKernelD1) as exc:
        raise InputError(str(exc)) from None
    except ObstructedCompletion as exc:
        rep["completed"] = False
        rep["error"] = str(exc)
        raise _Failure(rep) from None
    T = A.tot
    cls = class_of_completion(A, c)
    closed = not T.D(c.degree).apply(c.total)
    rep["completed"] = closed
    rep["degree"] = c.degree
    rep["tail"] = [{"s": st[0], "t": st[1], "support_size": n} for st, n in sorted(c.tail_sizes(T).items())]
    rep["class"] = {"coordinates": cls["coordinates"], "weight": cls["weight"],
                    "in_W_minus_t": cls["in_W_minus_t"]}
    if pair in ("Y", "XY"):
        rep["support_bound"] = completion_support_ok(M, A, pair, c)
    if not closed or not cls["in_W_minus_t"]:
        raise _Failure(rep)
    return rep


def _verify_plumbing(G: PlumbingGraph) -> dict:
    e1 = e1_boundary_from_plumbing(G)
    table = boundary_weight_ranks(G)
    b = {k: sum(table[k].values()) for k in range(4)}
    checks = {"h1_formula": h1_formula_check(G)}
    if G.n_components == 1:
        checks["duality_symmetry"] = b[0] == b[3] == 1 and b[1] == b[2]
    checks["e2_totals"] = all(b[k] == e1.homology_ranks().get(k, 0) for k in range(4))
    out = {"checks": checks}
    flags = getattr(G, "flags", {}) or {}
    if flags.get("isolated_singularity"):
        pr = purity_report(G)
        out["purity"] = pr
        checks["purity"] = pr["status"] == "pass"
    return out


def _verify_ncd(M: NCDModel) -> dict:
    checks: dict = {}
    details: dict = {}
    pairs = PAIRS if M.X is not None else ("Y",)
    axioms, degen, oracles = {}, {}, {}
    for pair in pairs:
        A = build_pair(M, pair)
        rep = A.check_axioms()
        ok = rep["ok"]
        if ok:
            try:
                total(A)
            except WeightlabError:
                ok = False
        axioms[pair] = ok
        degen[pair] = check_degeneration(A)["passed"] if ok else False
        if pair != "dU" and ok:
            o = {k: v for k, v in oracle_homology(M, pair).items() if v != (0, ())}
            h = {k: v for k, v in homology_all(A.tot.chain_complex()).items() if v != (0, ())}
            oracles[pair] = o == h
    checks["double_complex_axioms"] = all(axioms.values())
    checks["degeneration"] = all(degen.values())
    checks["oracle_homology"] = all(oracles.values())
    details.update(axioms=axioms, degeneration=degen, oracle_homology=oracles)
    if M.X is not None:
        pd_ok, gysin = {}, {}
        strata = [((), M.X)] + [x for p in range(1, M.max_level + 1) for x in level(M, p)]
        for sid, _ in strata:
            TM = transverse_model(M, sid)
            pd_ok[",".join(map(str, sid)) or "X"] = pd_identity_check(TM) and pd_isomorphism_check(TM).passed
            for a in M.index_set:
                if a not in sid:
                    key = f"{','.join(map(str, sid)) or 'X'}|{a}"
                    gysin[key] = gysin_square_check(M, sid, a).passed
        checks["pd_identities"] = all(pd_ok.values())
        checks["gysin_squares"] = all(gysin.values())
        details.update(pd=pd_ok, gysin=gysin)
        les = les_and_truncation_checks(M)
        checks["les_and_truncation"] = les["passed"]
    if M.n == 2 and M.flags.get("self_intersections") is not None:
        G = dual_graph(M)
        checks["plumbing_h1_formula"] = h1_formula_check(G)
        if M.X is not None:
            W = weight_table(build_pair(M, "dU"), integral=False)
            simp = {k: {l: r for l, r in W[k].graded.items() if r} for k in range(4) if k in W}
            plum = {k: {l: r for l, r in v.items() if r} for k, v in boundary_weight_ranks(G).items()}
            checks["plumbing_matches_simplicial"] = all(simp.get(k, {}) == plum[k] for k in range(4))
    if M.flags.get("isolated_singularity"):
        pr = purity_report(M)
        details["purity"] = pr
        checks["purity"] = pr["status"] == "pass"
    return {"checks": checks, "details": details}


def cmd_verify(args, M) -> dict:
    rep = _header("verify", args, M)
    rep.update(_verify_plumbing(M) if isinstance(M, PlumbingGraph) else _verify_ncd(M))
    rep["passed"] = all(rep["checks"].values())
    if not rep["passed"]:
        raise _Failure(rep)
    return rep


def cmd_plumbing(args, M) -> dict:
    G = _graph_of(M)
    rep = _header("plumbing", args, M)
    e1 = e1_boundary_from_plumbing(G)
    table = boundary_weight_ranks(G)
    rep["graph"] = {"genera": G.genera, "self_intersections": G.self_ints,
                    "edges": [list(e) for e in G.edges], "c_gamma": G.c_gamma}
    rep["e2"] = [{"s": s, "t": t, "rank": v} for (s, t), v in sorted(e1.e2.items()) if v]
    rep["weights"] = [{"k": k, "graded": [{"weight": l, "rank": r} for l, r in sorted(table[k].items()) if r]}
                      for k in range(4)]
    rep["h1_torsion"] = list(e1.torsion_h1)
    rep["h1_formula"] = h1_formula_check(G)
    if not rep["h1_formula"]:
        raise _Failure(rep)
    return rep


COMMANDS = {
    "weights": cmd_weights,
    "pages": cmd_pages,
    "complete": cmd_complete,
    "verify": cmd_verify,
    "plumbing": cmd_plumbing,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors, not verification failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"weightlab: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weightlab", description="Weight spectral sequences of normal crossing pairs.")
    p.add_argument("--version", action="version", version=f"weightlab {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--pair", choices=PAIRS)
    p.add_argument("--r", default="1", help="page index (integer ≥ 1 or 'inf')")
    p.add_argument("--seed", help="bidegree and kernel-class index: s,t,i")
    p.add_argument("--json", dest="json_out", help="write the report to this file instead of stdout")
    return p


def _emit(rep: dict, out: str | None) -> None:
    rep = exact(rep)
    rep["schema"] = SCHEMA
    text = dumps(rep)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        M = load_model(args.file)
        rep = COMMANDS[args.command](args, M)
    except InputError as exc:
        _emit({"schema": SCHEMA, "command": args.command, "error": {"type": type(exc).__name__, "message": str(exc)}},
              None if not args.json_out else args.json_out)
        sys.stderr.write(f"weightlab: {exc}\n")
        return EXIT_INPUT
    except _Failure as f:
        _emit(f.report, args.json_out)
        return EXIT_VERIFY
    _emit(rep, args.json_out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
