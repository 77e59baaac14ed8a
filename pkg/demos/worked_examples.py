"""Walk through the standard small examples: diagrams, minors, pipe dreams, complexes, multiplicities."""

from klideals.complex import PipeComplex
from klideals.ideal import build_specialized_matrix, essential_minors, interreduce, is_standardly_homogeneous
from klideals.ktheory import specialize_buch_rimanyi
from klideals.mult import multiplicity, multiplicity_routes
from klideals.perm import Permutation, essential_set, rank_matrix, render_diagram, v_max
from klideals.pipedreams import PipeDream, cross_sets, render_dream

P = Permutation.parse


def section(title: str) -> None:
    print()
    print(title)
    print("-" * len(title))


def main() -> None:
    section("Rank matrix of 365124")
    print(rank_matrix(P("365124")))

    section("Rothe diagram of 31524 with canonical labels")
    print(render_diagram(P("31524")))
    print("essential set:", sorted(essential_set(P("31524"))))

    section("Specialized matrix Z^(261345) and its essential minors for w = 365124")
    print(build_specialized_matrix(P("261345")))
    G = essential_minors(P("261345"), P("365124"))
    print(f"{G.raw_count} minors, {G.zero_count} vanish, {len(G)} distinct generators:")
    for p in G.minors:
        print("  ", p)

    section("Reduced pipe dreams on D(31524) for 13254")
    for c in cross_sets(P("31524"), P("13254"), True):
        print(render_dream(PipeDream(P("31524"), frozenset(c))))
        print()

    section("Pipe complex of (31452, 53142)")
    C = PipeComplex(P("31452"), P("53142"))
    topo = C.topology_check()
    print(f"{topo.kind} of dimension {topo.dim} with {topo.facets} facets, "
          f"{len(C.interior_faces())} interior faces")
    rep = specialize_buch_rimanyi(P("31452"), P("53142"))
    print("multidegree:", rep.schub)

    section("Homogeneity and parabolic moving")
    v, w = P("31524"), P("43512")
    print(f"I_({v},{w}) homogeneous: {is_standardly_homogeneous(v, w)}")
    print("reduced basis:", [str(p) for p in interreduce(essential_minors(v, w)).minors])
    vm = v_max(v, w)
    print(f"v_max = {vm}, I_({vm},{w}) homogeneous: {is_standardly_homogeneous(vm, w)}")

    section("Multiplicity of X_975286431 at e_743198652")
    v, w = P("743198652"), P("975286431")
    out = multiplicity(v, w)
    print(f"value {out.value} by {out.route}; every route: {multiplicity_routes(v, w)}")


if __name__ == "__main__":
    main()
