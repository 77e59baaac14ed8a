"""The ``kl`` command line.

Every subcommand builds a JSON-ready result dict and a text rendering of the
same values; ``--format`` only picks which one is printed.

Exit codes: 0 success, 2 usage error (bad arguments, malformed permutation,
v not below w), 3 invariant violation, 4 S-pair budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Callable, Optional, Sequence

from . import __version__
from .complex import PipeComplex, left_multiply_w0
from .errors import BudgetExceeded, InvariantViolation
from .ideal import (buchberger_verify, build_specialized_matrix, default_budget,
                    essential_minors, initial_ideal_primes, interreduce,
                    is_standardly_homogeneous, leading_term_ideal, stanley_reisner_ideal)
from .ktheory import (KKCache, WeightAssignment, double_grothendieck, double_schubert,
                      grothendieck_product_form, kostant_kumar, kostant_kumar_multidegree,
                      specialize_buch_rimanyi, unspecialized_grothendieck,
                      unspecialized_schubert)
from .mult import gamma_statistics, multiplicity, multiplicity_routes, _map
from .perm import (MAX_N, Permutation, bruhat_leq, canonical_labeling, essential_set,
                   gamma, rank_matrix, reading_order, render_diagram, rothe_diagram, v_max)
from .pipedreams import PipeDream, cross_sets, flatten, render_dream, render_strands
from .poly import DIAGONAL, KL_LEX, z
from .sampler import TrialConfig, estimate_success

EXIT_USAGE, EXIT_INVARIANT, EXIT_BUDGET = 2, 3, 4

Result = tuple[dict, str]


class UsageError(Exception):
    pass


def load_schema() -> dict:
    """The JSON schema every ``--format json`` output validates against."""
    from importlib.resources import files
    return json.loads(files("klideals").joinpath("schema/cli_output.schema.json").read_text())


def _perm(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _pair(args) -> tuple[Permutation, Permutation]:
    v, w = args.v, args.w
    if len(v) != len(w):
        raise UsageError(f"{v} and {w} have different sizes")
    if not bruhat_leq(v, w):
        raise UsageError(f"{v} is not below {w} in Bruhat order")
    return v, w


def _boxes(bs) -> list:
    return [list(b) for b in reading_order(bs)]


def _cache(args) -> Optional[KKCache]:
    return KKCache(args.cache_dir) if args.cache_dir else None


def _budget(args) -> int:
    return default_budget() if args.budget is None else args.budget


def _jobs(args) -> int:
    return args.jobs or os.cpu_count() or 1


# ---------------------------------------------------------------- handlers

def cmd_diagram(args) -> Result:
    v = args.v
    lab = canonical_labeling(v)
    res = {"v": str(v), "n": len(v),
           "boxes": [list(b) for b, _ in lab],
           "labels": [k for _, k in lab],
           "essential": _boxes(essential_set(v))}
    if args.ascii:
        text = render_diagram(v, labels=not args.no_labels)
    else:
        text = "\n".join([f"D({v}): {len(lab)} boxes",
                          "boxes:  " + " ".join(f"({r},{c})" for (r, c), _ in lab),
                          "labels: " + " ".join(str(k) for _, k in lab),
                          "essential: " + " ".join(f"({r},{c})" for r, c in res["essential"])])
    return res, text


def cmd_essential(args) -> Result:
    ess = _boxes(essential_set(args.v))
    return {"v": str(args.v), "essential": ess}, " ".join(f"({r},{c})" for r, c in ess)


def cmd_matrix(args) -> Result:
    v = args.v
    if args.rank:
        rm = rank_matrix(v)
        rows = rm.rows_top_down()
        return {"v": str(v), "kind": "rank", "rows": rows}, str(rm)
    M = build_specialized_matrix(v)
    rows = [[str(e) for e in row] for row in M.rows_top_down()]
    return {"v": str(v), "kind": "specialized", "rows": rows}, str(M)


def _order(args):
    return DIAGONAL if args.order == "diagonal" else KL_LEX


def cmd_minors(args) -> Result:
    v, w = _pair(args)
    G = essential_minors(v, w, order=_order(args), all_minors=args.all_minors)
    res = G.to_json()
    res["leading_terms"] = [str(p) for p in G.leading_terms()]
    lines = [f"{len(G)} generators ({G.raw_count} minors, {G.zero_count} vanish)"]
    lines += [f"  {p}    [lead {lt}]" for p, lt in zip(G.minors, res["leading_terms"])]
    return res, "\n".join(lines)


def _verify_pair(item) -> tuple[str, str, str, int]:
    v, w, budget = Permutation.parse(item[0]), Permutation.parse(item[1]), item[2]
    try:
        rep = buchberger_verify(essential_minors(v, w), budget=budget)
    except BudgetExceeded as e:
        return item[0], item[1], "budget", e.spairs
    return item[0], item[1], "ok" if rep.is_groebner else "fail", rep.spairs_checked


def cmd_groebner(args) -> Result:
    budget = _budget(args)
    if args.all:
        if args.n is None:
            raise UsageError("--all needs --n")
        if not 1 <= args.n <= 6:
            raise UsageError("exhaustive sweeps are limited to n <= 6")
        items = [(str(a), str(b), budget) for a, b in gamma(args.n)]
        rows = _map(_verify_pair, items, _jobs(args))
        fails = [[a, b] for a, b, s, _ in rows if s == "fail"]
        over = [[a, b] for a, b, s, _ in rows if s == "budget"]
        res = {"n": args.n, "pairs": len(rows), "verified": len(rows) - len(fails) - len(over),
               "failures": fails, "budget_exceeded": over,
               "spairs_checked": sum(r[3] for r in rows)}
        if fails:
            raise InvariantViolation(f"{len(fails)} pairs of Gamma_{args.n} fail Buchberger's "
                                     f"criterion, first {fails[0]}")
        if over:
            text = (f"{res['verified']} of {len(rows)} Γ_{args.n} pairs Gröbner-verified; "
                    f"{len(over)} exceeded the S-pair budget")
        else:
            text = f"all Γ_{args.n} pairs Gröbner-verified ({len(rows)} pairs, 0 failures)"
        return res, text
    if args.v is None or args.w is None:
        raise UsageError("give v and w, or --all --n N")
    v, w = _pair(args)
    G = essential_minors(v, w)
    rep = buchberger_verify(G, budget=budget)
    if not rep.is_groebner:
        raise InvariantViolation(f"essential minors of ({v}, {w}) are not a Groebner basis")
    res = {"v": str(v), "w": str(w), **rep.to_json()}
    text = (f"({v}, {w}): Gröbner basis verified; {rep.generators} generators, "
            f"{rep.spairs_checked} S-pairs reduced to 0, {rep.spairs_skipped} skipped (coprime)")
    return res, text


def cmd_initial(args) -> Result:
    v, w = _pair(args)
    J = leading_term_ideal(essential_minors(v, w))
    primes = initial_ideal_primes(v, w)
    pipes = {frozenset(str(z(r, c)) for r, c in cs)
             for cs in cross_sets(v, left_multiply_w0(w), True)}
    prime_names = {frozenset(str(x) for x in p) for p in primes}
    sr = stanley_reisner_ideal(PipeComplex(v, w))
    same_pipes = prime_names == pipes
    same_sr = sr == J
    if not (same_pipes and same_sr):
        raise InvariantViolation(f"leading-term ideal of ({v}, {w}) disagrees with the pipe complex")
    plist = sorted(sorted(p) for p in prime_names)
    res = {"v": str(v), "w": str(w), "generators": J.sorted_generators(),
           "primes": plist, "matches_redpipes": same_pipes, "matches_stanley_reisner": same_sr}
    lines = ["in(I) = <" + ", ".join("*".join(g) for g in res["generators"]) + ">",
             "minimal primes (one per reduced pipe dream):"]
    lines += ["  <" + ", ".join(p) + ">" for p in plist]
    lines.append("equal to the Stanley-Reisner ideal of the pipe complex: yes")
    return res, "\n".join(lines)


def cmd_complex(args) -> Result:
    v, w = _pair(args)
    C = PipeComplex(v, w)
    res = C.to_json()
    if args.dot:
        return res, C.to_dot()
    topo = res["topology"]
    lines = [f"pipe complex of ({v}, {w}) on {len(C.vertex_set)} vertices",
             f"{topo['kind']} of dimension {topo['dim']}, {topo['facets']} facets, "
             f"{res['interior_faces']} interior faces, reduced Euler characteristic "
             f"{topo['reduced_euler']}",
             "facets:"]
    lines += ["  {" + ", ".join(f"({r},{c})" for r, c in f) + "}" for f in res["facets"]]
    if args.decompose and len(C.vertex_set) and C.word:
        try:
            d = C.vertex_decompose()
        except ValueError as e:
            lines.append(f"no vertex decomposition: {e}")
        else:
            res["decomposition"] = {"ascent": d.ascent, "vertex": list(d.vertex), "cone": d.cone}
            kind = "cone point" if d.cone else "link and deletion"
            lines.append(f"vertex decomposition at {d.vertex} (ascent {d.ascent}): {kind}")
    return res, "\n".join(lines)


def cmd_pipes(args) -> Result:
    v, target = args.v, args.w
    if len(v) != len(target):
        raise UsageError("permutations have different sizes")
    sets = cross_sets(v, target, args.reduced)
    dreams = [PipeDream(v, frozenset(c)) for c in sets]
    res = {"v": str(v), "target": str(target), "reduced": args.reduced,
           "count": len(dreams), "dreams": [p.to_json() for p in dreams]}
    kind = "RedPipes" if args.reduced else "Pipes"
    lines = [f"|{kind}({v}, {target})| = {len(dreams)}"]
    if args.ascii or args.strands:
        for p in dreams:
            lines.append("")
            lines.append(render_dream(p))
            if args.strands:
                try:
                    lines.append(render_strands(flatten(p)))
                except ValueError:
                    lines.append("(not reduced; no strand diagram)")
    return res, "\n".join(lines)


def _weights(args, v) -> Optional[WeightAssignment]:
    kind = args.weights
    if kind == "rescaling":
        return None
    return WeightAssignment(kind, v)


def cmd_gpoly(args) -> Result:
    v, w = _pair(args)
    p = unspecialized_grothendieck(v, w, _weights(args, v))
    res = {"v": str(v), "w": str(w), "weights": args.weights,
           "polynomial": str(p), "terms": p.to_json()}
    text = str(p)
    if args.product_form:
        summands = grothendieck_product_form(v, w)
        rendered = []
        for sign, crosses in summands:
            factors = "".join(f"(1-t{r}{c})" if max(r, c) < 10 else f"(1-t[{r},{c}])"
                              for r, c in reading_order(crosses))
            rendered.append(("+ " if sign > 0 else "- ") + (factors or "1"))
        res["product_form"] = rendered
        text = "\n".join([" ".join(rendered).lstrip("+ "), "= " + str(p)])
    return res, text


def cmd_spoly(args) -> Result:
    v, w = _pair(args)
    p = unspecialized_schubert(v, w, _weights(args, v))
    return {"v": str(v), "w": str(w), "weights": args.weights,
            "polynomial": str(p), "terms": p.to_json()}, str(p)


def cmd_double(args) -> Result:
    w = args.w
    p = double_grothendieck(w) if args.kind == "grothendieck" else double_schubert(w)
    return {"w": str(w), "kind": args.kind, "polynomial": str(p), "terms": p.to_json()}, str(p)


def cmd_specialize(args) -> Result:
    v, w = _pair(args)
    cache = _cache(args)
    rep = specialize_buch_rimanyi(v, w, cache=cache)
    if cache is not None:
        cache.save()
    res = rep.to_json()
    text = "\n".join([f"K-polynomial: {rep.groth}", f"multidegree:  {rep.schub}",
                      "agreeing routes: " + ", ".join(sorted(rep.members))])
    return res, text


def cmd_kk(args) -> Result:
    v, w = _pair(args)
    cache = _cache(args)
    p = kostant_kumar(v, w, choice=args.choice, cache=cache)
    if cache is not None:
        cache.save()
    res = {"v": str(v), "w": str(w), "choice": args.choice, "kpoly": str(p)}
    text = str(p)
    if args.multidegree:
        m = kostant_kumar_multidegree(v, w)
        res["multidegree"] = str(m)
        text += "\nmultidegree: " + str(m)
    return res, text


def cmd_mult(args) -> Result:
    v, w = _pair(args)
    out = multiplicity(v, w)
    routes = multiplicity_routes(v, w)
    res = {"v": str(v), "w": str(w), **out.to_json(), "routes": routes}
    lines = [f"mult_{{e_{v}}}(X_{w}) = {out.value if out.value is not None else 'unresolved'}",
             f"route: {out.route} (v used: {out.v_used})"]
    lines += [f"  {k}: {val}" for k, val in routes.items()]
    return res, "\n".join(lines)


def cmd_vmax(args) -> Result:
    v, w = _pair(args)
    vm = v_max(v, w)
    return {"v": str(v), "w": str(w), "vmax": str(vm)}, str(vm)


def cmd_homog(args) -> Result:
    v, w = _pair(args)
    h = is_standardly_homogeneous(v, w)
    res = {"v": str(v), "w": str(w), "homogeneous": h}
    text = f"({v}, {w}): standardly homogeneous: {'yes' if h else 'no'}"
    if args.basis:
        basis = [str(p) for p in interreduce(essential_minors(v, w)).minors]
        res["reduced_basis"] = basis
        text += "\nreduced Gröbner basis:\n" + "\n".join("  " + b for b in basis)
    return res, text


def cmd_gamma(args) -> Result:
    if args.n is None:
        raise UsageError("gamma needs --n")
    if not 2 <= args.n <= 6:
        raise UsageError("exhaustive sweeps are limited to 2 <= n <= 6")
    rep = gamma_statistics(args.n, jobs=_jobs(args), keep_records=bool(args.csv or args.records))
    res = rep.summary()
    if args.records:
        res["records"] = [r.to_json() for r in rep.records]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["v", "w", "route", "value", "facet_count", "homogeneous",
                         "vmax", "vmax_homogeneous"])
            for r in rep.records:
                wr.writerow([r.v, r.w, r.route, "unresolved" if r.value is None else r.value,
                             r.facet_count, int(r.homogeneous), r.vmax, int(r.vmax_homogeneous)])
    verdict = ("no counterexamples" if not rep.counterexamples
               else f"{len(rep.counterexamples)} counterexamples")
    text = "\n".join([f"|Γ_{args.n}| = {rep.total}",
                      f"route (1) homogeneous:          {rep.route1} ({res['pct_route1']}%)",
                      f"routes (1)+(2) with v_max:      {rep.route12} ({res['pct_route12']}%)",
                      f"budget exceeded:                {rep.budget_exceeded}",
                      f"parabolic-maximality conjecture: {verdict}"])
    return res, text


def cmd_sample(args) -> Result:
    if args.n is None:
        raise UsageError("sample needs --n")
    if args.n >= 8 and not args.long:
        raise UsageError("n >= 8 runs for a long time; pass --long to confirm")
    if not 2 <= args.n <= MAX_N:
        raise UsageError(f"n must be in 2..{MAX_N}")
    cfg = TrialConfig(args.n, args.trials, args.seed)
    rep = estimate_success(cfg, jobs=_jobs(args), verify=args.verify, budget=args.budget)
    res = rep.to_json()
    text = (f"n={rep.n}: {rep.successes}/{rep.trials - rep.budget_exceeded} resolved = "
            f"{res['pct']}% (95% CI {res['ci'][0]}-{res['ci'][1]}%), "
            f"mean rejections {res['mean_rejections']}")
    return res, text


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    p.add_argument("--budget", type=int, default=None, help="S-pair budget (default $KL_BUDGET or 10^6)")
    p.add_argument("--cache-dir", default=None, help="persist Kostant-Kumar results here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kl", description="Kazhdan-Lusztig ideal toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, args: Sequence[str] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        for a in args:
            p.add_argument(a, type=_perm)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("diagram", cmd_diagram, "Rothe diagram and canonical labels", ["v"])
    p.add_argument("--ascii", action="store_true", help="draw the diagram with hooks")
    p.add_argument("--no-labels", action="store_true")
    add("essential", cmd_essential, "essential set", ["v"])
    p = add("matrix", cmd_matrix, "specialized matrix Z^(v)", ["v"])
    p.add_argument("--rank", action="store_true", help="print the rank matrix instead")
    p = add("minors", cmd_minors, "generating minors of I_{v,w}", ["v", "w"])
    p.add_argument("--all-minors", action="store_true", help="use every rank condition, not only essential ones")
    p.add_argument("--order", choices=("kl_lex", "diagonal"), default="kl_lex")
    p = sub.add_parser("groebner", help="verify the minors form a Groebner basis")
    p.add_argument("v", type=_perm, nargs="?")
    p.add_argument("w", type=_perm, nargs="?")
    p.add_argument("--all", action="store_true", help="sweep all of Gamma_n")
    p.add_argument("--n", type=int)
    _common(p)
    p.set_defaults(func=cmd_groebner)
    add("initial", cmd_initial, "leading-term ideal and its primes", ["v", "w"])
    p = add("complex", cmd_complex, "pipe complex facets and topology", ["v", "w"])
    p.add_argument("--dot", action="store_true", help="facet-ridge graph in DOT")
    p.add_argument("--decompose", action="store_true", help="report the vertex decomposition")
    p = add("pipes", cmd_pipes, "pipe dreams on D(v) with Demazure product >= target", ["v", "w"])
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--ascii", action="store_true")
    p.add_argument("--strands", action="store_true", help="also draw flattened strand diagrams")
    weights = ("rescaling", "usual", "matrix_schubert", "dilation")
    p = add("gpoly", cmd_gpoly, "unspecialized Grothendieck polynomial", ["v", "w"])
    p.add_argument("--weights", choices=weights, default="rescaling")
    p.add_argument("--product-form", action="store_true")
    p = add("spoly", cmd_spoly, "unspecialized Schubert polynomial", ["v", "w"])
    p.add_argument("--weights", choices=weights, default="rescaling")
    p = add("double", cmd_double, "double Schubert or Grothendieck polynomial", ["w"])
    p.add_argument("--kind", choices=("schubert", "grothendieck"), default="schubert")
    add("specialize", cmd_specialize, "cross-check K-polynomial and multidegree routes", ["v", "w"])
    p = add("kk", cmd_kk, "Kostant-Kumar recursion", ["v", "w"])
    p.add_argument("--choice", choices=("last", "first", "middle"), default="last")
    p.add_argument("--multidegree", action="store_true")
    add("mult", cmd_mult, "multiplicity of X_w at e_v", ["v", "w"])
    add("vmax", cmd_vmax, "parabolic maximal representative", ["v", "w"])
    p = add("homog", cmd_homog, "standard homogeneity test", ["v", "w"])
    p.add_argument("--basis", action="store_true", help="print the reduced Groebner basis")
    p = add("gamma", cmd_gamma, "route statistics over Gamma_n")
    p.add_argument("--n", type=int)
    p.add_argument("--csv", help="write per-pair records to this CSV file")
    p.add_argument("--records", action="store_true", help="include per-pair records in JSON")
    p = add("sample", cmd_sample, "Monte Carlo success estimate")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="also run Buchberger on each sample")
    p.add_argument("--long", action="store_true", help="allow n >= 8")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        res, text = args.func(args)
    except (UsageError, ValueError) as e:
        print(f"kl {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as e:
        print(f"kl {args.command}: INVARIANT VIOLATED: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except BudgetExceeded as e:
        print(f"kl {args.command}: budget exceeded after {e.spairs} S-pairs: {e}", file=sys.stderr)
        return EXIT_BUDGET
    if args.format == "json":
        json.dump({"command": args.command, "version": __version__, "result": res}, out, indent=2)
        out.write("\n")
    else:
        out.write(text + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
