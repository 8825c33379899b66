"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 parse error, 3 soundness violation.
Node indices in all output are 1-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .bounds import (LIT, T, T1, T2, T2V, literature_bounds, scheme_bounds)
from .core import BOTTOM, DivergentStarError, Matrix, kleene_star, mat_power
from .csr import SCHEME_ALIASES, SCHEMES, csr_terms, run_scheme
from .digraph import (DEFAULT_NODE_LIMIT, SearchLimitExceeded, from_matrix,
                      is_nontrivial, is_strongly_connected)
from .generators import (SeparatorError, random_irreducible, scheme_separator,
                         wielandt_matrix)
from .harness import fuzz
from .io import ParseError, format_scalar, load_instance, serialize_matrix
from .oracle import exact_t1, exact_t2, exact_transient
from .spectral import critical_graph, max_cycle_mean, select_representing

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_UNSOUND = 0, 1, 2, 3
SHORT = {v: k for k, v in SCHEME_ALIASES.items()}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# JSON-friendly values

def _val(x):
    if x is None:
        return None
    if x is BOTTOM:
        return "*"
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, (frozenset, set)):
        return sorted(_val(i) for i in x)
    if isinstance(x, (list, tuple)):
        return [_val(i) for i in x]
    if isinstance(x, dict):
        return {str(k): _val(v) for k, v in x.items()}
    return x


def _nodes(s) -> list:
    return sorted(i + 1 for i in s)


def _bound_rows(rep) -> list:
    rows = []
    for e in rep.entries:
        rows.append({"name": e.name, "family": e.family, "formula": e.formula,
                     "value": _val(e.value), "ceiling": e.ceiling,
                     "fallback_params": e.fallback, "inapplicable": e.reason,
                     "excluded": e.excluded, "params": _val(e.params)})
    return rows


# --------------------------------------------------------------------------
# analyze

def _schemes_arg(s: str) -> list:
    return list(SCHEMES) if s == "all" else [SCHEME_ALIASES[s]]


def analyze(A: Matrix, v=None, schemes=SCHEMES, oracle: bool = True,
            node_limit: int = DEFAULT_NODE_LIMIT, exact_params: bool = True) -> dict:
    G = from_matrix(A)
    irreducible = is_strongly_connected(G) and is_nontrivial(G, G.nodes)
    rep = {"instance": {"n": A.n, "all_finite": A.all_finite, "irreducible": irreducible,
                        "edges": len(G.weights), "vector": _val(v.values()) if v else None}}
    lam = max_cycle_mean(A)
    rep["lambda"] = _val(lam)
    if lam is BOTTOM:
        rep["note"] = "no eigenvalue, powers nilpotent"
        return rep
    crit = critical_graph(A)
    rep["critical"] = {"nodes": _nodes(crit.nodes),
                       "edges": sorted([i + 1, j + 1] for i, j in crit.edges),
                       "components": [_nodes(c) for c in crit.components],
                       "cyclicity": crit.cyclicity()}
    triple = csr_terms(A, select_representing(crit, "min_cycle"))
    rep["schemes"], rep["bounds"], rep["oracle"], rep["verdicts"] = {}, {}, {}, []
    TA = None
    if oracle and irreducible:
        TA = exact_transient(A)
        rep["oracle"]["T"] = {"value": TA.value, "gamma": TA.gamma_used,
                              "scan_ceiling": TA.scan_ceiling}
    elif oracle:
        rep["oracle"]["skipped"] = "oracle scans need an irreducible matrix"
    for s in schemes:
        key = SHORT[s]
        try:
            r = run_scheme(A, s, node_limit)
        except (SearchLimitExceeded, ValueError) as exc:
            rep["schemes"][key] = {"refused": str(exc)}
            continue
        rep["schemes"][key] = {"removed_nodes": _nodes(r.removed_nodes),
                               "lambda_B": _val(r.lambda_B), "mu": _val(r.mu)}
        if not irreducible:
            rep["bounds"][key] = {"refused": "bounds on T2 need an irreducible matrix"}
            continue
        b = scheme_bounds(A, r, exact_params, node_limit, v)
        rep["bounds"][key] = {"entries": _bound_rows(b), "best": {
            f: b.best(f) for f in (T1, T2, T2V, T) if b.best_entry(f) is not None}}
        if TA is not None:
            t2 = exact_t2(A, r, triple)
            t1 = exact_t1(A, r, triple, t_ceiling=max(TA.value, t2.value))
            o = {"T1": {"value": t1.value, "scan_ceiling": t1.scan_ceiling},
                 "T2": {"value": t2.value, "scan_ceiling": t2.scan_ceiling}}
            exact = {T1: t1.value, T2: t2.value, T: TA.value}
            if v is not None:
                t2v = exact_t2(A, r, triple, v)
                o["T2v"] = {"value": t2v.value, "scan_ceiling": t2v.scan_ceiling}
                exact[T2V] = t2v.value
            rep["oracle"][key] = o
            for e in b.entries:
                if e.applicable and e.family in exact:
                    rep["verdicts"].append({"scheme": key, "bound": e.name,
                                            "ceiling": e.ceiling, "exact": exact[e.family],
                                            "sound": e.ceiling >= exact[e.family],
                                            "excluded": e.excluded})
    return rep


def compare(A: Matrix, v=None, node_limit: int = DEFAULT_NODE_LIMIT) -> dict:
    """Best combined bound per scheme next to the earlier literature bounds."""
    G = from_matrix(A)
    if not (is_strongly_connected(G) and is_nontrivial(G, G.nodes)):
        raise UsageError("compare needs an irreducible matrix")
    results = {}
    ours = {}
    for s in SCHEMES:
        try:
            results[s] = run_scheme(A, s, node_limit)
        except SearchLimitExceeded as exc:
            ours[SHORT[s]] = {"refused": str(exc)}
            continue
        b = scheme_bounds(A, results[s], True, node_limit, v)
        ours[SHORT[s]] = {"T1": b.best(T1), "T2": _val(b.best_value(T2)),
                          "combined": _val(b.best_value(T)), "ceiling": b.best(T),
                          "T2v": b.best(T2V) if v is not None else None}
    lit = literature_bounds(A, v, results)
    values = [Fraction(o["combined"]) for o in ours.values() if "combined" in o]
    best = min(values)
    out = {"ours": ours, "best": _val(best), "literature": _bound_rows(lit), "verdicts": {}}
    for e in lit.entries:
        if e.name == "lit_ha_vector":
            mine = min(Fraction(max(o["T1"], o["T2v"])) for o in ours.values() if "T1" in o)
        else:
            mine = best
        if e.applicable:
            out["verdicts"][e.name] = ("strictly lower" if mine < e.value else
                                       "equal" if mine == e.value else "higher")
        else:
            out["verdicts"][e.name] = f"inapplicable: {e.reason}"
    return out


# --------------------------------------------------------------------------
# text rendering

def _table(rows, headers) -> str:
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_analysis(rep: dict) -> str:
    out = [f"n = {rep['instance']['n']}   irreducible = {rep['instance']['irreducible']}"
           f"   all finite = {rep['instance']['all_finite']}",
           f"lambda(A) = {rep['lambda']}"]
    if "note" in rep:
        out.append(rep["note"])
        return "\n".join(out) + "\n"
    c = rep["critical"]
    out.append(f"critical nodes {c['nodes']}, components {c['components']}, "
               f"cyclicity {c['cyclicity']}")
    out.append("")
    out.append(_table([[k, s.get("removed_nodes", s.get("refused")), s.get("lambda_B"),
                        s.get("mu")] for k, s in rep["schemes"].items()],
                      ["scheme", "removed", "lambda(B)", "mu"]))
    for k, b in rep["bounds"].items():
        out.append("")
        if "refused" in b:
            out.append(f"[{k}] {b['refused']}")
            continue
        out.append(f"[{k}] bounds")
        rows = []
        for e in b["entries"]:
            note = e["inapplicable"] or e["excluded"] or ("fallback c/d" if e["fallback_params"] else "")
            rows.append([e["name"], e["family"], e["value"] if e["value"] is not None else "-",
                         e["ceiling"] if e["ceiling"] is not None else "-", note])
        out.append(_table(rows, ["bound", "family", "value", "ceiling", "note"]))
        out.append("best: " + ", ".join(f"{f}={v}" for f, v in b["best"].items()))
    if rep.get("oracle"):
        out.append("")
        o = rep["oracle"]
        if "skipped" in o:
            out.append(f"oracle: {o['skipped']}")
        else:
            rows = [["T(A)", "-", o["T"]["value"], o["T"]["scan_ceiling"]]]
            for k, x in o.items():
                if k == "T":
                    continue
                for f, w in x.items():
                    rows.append([f, k, w["value"], w["scan_ceiling"]])
            out.append(_table(rows, ["quantity", "scheme", "exact", "scan ceiling"]))
            bad = [x for x in rep["verdicts"] if not x["sound"]]
            used = [x for x in bad if not x["excluded"]]
            out.append(f"bound checks: {len(rep['verdicts'])}, below exact: {len(bad)}"
                       f" (in use: {len(used)})")
    return "\n".join(out) + "\n"


def render_compare(rep: dict) -> str:
    rows = [[k, o.get("T1"), o.get("T2"), o.get("combined"), o.get("ceiling")]
            if "refused" not in o else [k, o["refused"], "", "", ""] for k, o in rep["ours"].items()]
    out = [_table(rows, ["scheme", "best T1", "best T2", "max", "ceiling"]),
           f"best combined: {rep['best']}", ""]
    out.append(_table([[e["name"], e["value"] if e["value"] is not None else "-",
                        rep["verdicts"][e["name"]]] for e in rep["literature"]],
                      ["literature bound", "value", "ours is"]))
    return "\n".join(out) + "\n"


def render_fuzz(s) -> str:
    out = [f"seed {s.seed}: {s.count} instances, n <= {s.n_max}, weights {list(s.weights)}",
           f"all-finite instances: {s.finite_instances}, Boolean instances: {s.boolean_instances}",
           f"literature comparison defined on {s.dominance_defined}, "
           f"strictly lower on {s.strict_dominance}",
           f"violations: {len(s.failures)}"]
    for name, count in sorted(s.falsified.items()):
        out.append(f"excluded formula {name} below the exact value on {count} instances")
    for k, o, m in s.failures:
        out.append(f"\ninstance {k}:")
        out.extend(f"  {x.check} [{x.scheme}] {x.detail}" for x in o.violations)
        out.append("  minimized:")
        out.extend("    " + line for line in serialize_matrix(m).splitlines())
    return "\n".join(out) + "\n"


def fuzz_json(s) -> dict:
    return {"seed": s.seed, "count": s.count, "n_max": s.n_max, "weights": list(s.weights),
            "finite_instances": s.finite_instances, "boolean_instances": s.boolean_instances,
            "dominance_defined": s.dominance_defined, "strict_dominance": s.strict_dominance,
            "excluded_formula_failures": s.falsified,
            "violations": [{"instance": k, "details": [vars(x) for x in o.violations],
                            "minimized": serialize_matrix(m)} for k, o, m in s.failures]}


# --------------------------------------------------------------------------
# argument parsing

def _common(p, oracle=False):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT, metavar="K",
                   help="largest graph for exponential searches (default %(default)s)")
    if oracle:
        p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True,
                       help="compute exact transients by scanning powers")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weakcsr", description="Max-plus matrix powers: weak CSR "
                "expansions and transience bounds.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="full report for one matrix file")
    a.add_argument("path")
    a.add_argument("--scheme", choices=["nacht", "ha", "ct", "all"], default="all")
    a.add_argument("--fallback-params", action="store_true",
                   help="use |G| and |G|-1 instead of exact circumference and path length")
    _common(a, oracle=True)

    c = sub.add_parser("compare", help="best bounds next to earlier literature bounds")
    c.add_argument("path")
    _common(c)

    f = sub.add_parser("fuzz", help="soundness check on seeded random matrices")
    f.add_argument("--count", type=int, default=500)
    f.add_argument("--n-max", type=int, default=6)
    f.add_argument("--weights", type=int, nargs=2, default=[-9, 9], metavar=("LO", "HI"))
    f.add_argument("--seed", type=int, default=1)
    f.add_argument("--finite-fraction", type=float, default=0.2,
                   help="share of instances without BOTTOM entries")
    f.add_argument("--jobs", type=int, default=1, help="worker processes")
    _common(f)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("kind", choices=["separator", "random", "wielandt"])
    g.add_argument("--sizes", type=int, nargs=4, default=[2, 1, 1, 1],
                   metavar=("NC", "NN", "NHA", "NCT"))
    g.add_argument("--lambdas", type=Fraction, nargs=4, default=[0, -1, -2, -3],
                   metavar=("LC", "LN", "LHA", "LCT"))
    g.add_argument("--delta-ha", type=Fraction)
    g.add_argument("--delta-ct", type=Fraction)
    g.add_argument("-n", type=int, default=5)
    g.add_argument("--weights", type=int, nargs=2, default=[-9, 9], metavar=("LO", "HI"))
    g.add_argument("--finite", action="store_true")
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("-o", "--output")

    w = sub.add_parser("power", help="print A^t")
    w.add_argument("path")
    w.add_argument("t", type=int)

    s = sub.add_parser("star", help="print A*")
    s.add_argument("path")
    return p


def _emit(obj, as_json, render):
    if as_json:
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render(obj))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, SeparatorError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    if args.cmd == "analyze":
        inst = load_instance(args.path)
        rep = analyze(inst.matrix, inst.vector, _schemes_arg(args.scheme), args.oracle,
                      args.node_limit, not args.fallback_params)
        _emit(rep, args.json, render_analysis)
        used_bad = [x for x in rep.get("verdicts", []) if not x["sound"] and not x["excluded"]]
        return EXIT_UNSOUND if used_bad else EXIT_OK
    if args.cmd == "compare":
        inst = load_instance(args.path)
        _emit(compare(inst.matrix, inst.vector, args.node_limit), args.json, render_compare)
        return EXIT_OK
    if args.cmd == "fuzz":
        if args.count < 1 or args.n_max < 1 or args.weights[0] > args.weights[1]:
            raise UsageError("need count >= 1, n-max >= 1 and LO <= HI")
        s = fuzz(args.count, args.n_max, tuple(args.weights), args.seed,
                 args.finite_fraction, args.jobs, args.node_limit)
        if args.json:
            _emit(fuzz_json(s), True, None)
        else:
            sys.stdout.write(render_fuzz(s))
        return EXIT_OK if s.ok else EXIT_UNSOUND
    if args.cmd == "gen":
        import random
        if args.kind == "separator":
            A = scheme_separator(args.sizes, args.lambdas, args.delta_ha, args.delta_ct)
            note = (f"scheme separator: sizes {args.sizes}, "
                    f"cycle means {[format_scalar(Fraction(x)) for x in args.lambdas]}")
        elif args.kind == "wielandt":
            A, note = wielandt_matrix(args.n), f"Wielandt digraph, n = {args.n}"
        else:
            A = random_irreducible(args.n, random.Random(args.seed), tuple(args.weights),
                                   args.finite)
            note = f"random irreducible, n = {args.n}, seed = {args.seed}"
        text = serialize_matrix(A, comment=note)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.cmd == "power":
        if args.t < 0:
            raise UsageError("t must be nonnegative")
        sys.stdout.write(serialize_matrix(mat_power(load_instance(args.path).matrix, args.t)))
        return EXIT_OK
    if args.cmd == "star":
        try:
            S = kleene_star(load_instance(args.path).matrix)
        except DivergentStarError as exc:
            raise UsageError(str(exc))
        sys.stdout.write(serialize_matrix(S))
        return EXIT_OK
    raise UsageError(f"unknown command {args.cmd}")
