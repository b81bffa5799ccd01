"""Walk through the 2-valued Klein bottle map: induced data, both Nielsen routes, fixed points, lifting."""

from nvnielsen.exact import fmt
from nvnielsen.lattice import IntLattice
from nvnielsen.nielsen import fixpoint_enumerate, nielsen_averaging, nielsen_via_classes
from nvnielsen.nmap import analyze, lift_check
from nvnielsen.zoo import klein, klein_map


def main():
    K, f = klein(), klein_map()
    ind, sig = analyze(K, f)
    for name, s, phi in zip(ind.names, ind.sigma, ind.phi):
        images = ", ".join(K.describe(d) for d in phi)
        print(f"{name:4s} sigma={[j + 1 for j in s]} phi=({images})")
    print("orbit sizes:", sig.orbit_size)

    avg = nielsen_averaging(K, f)
    for (c, i), d in sorted(avg.determinants.items()):
        print(f"det(I - A_{K.coset_names[c]} Phi_{i + 1}) = {fmt(d)}")
    print("averaging:", avg.value)
    cls = nielsen_via_classes(K, f, ind, sig)
    print("classes:", cls.value, cls.per_factor())

    fp = fixpoint_enumerate(K, f)
    print("fixed points in the cell:", [[fmt(x) for x in p] for p in fp.points])

    for m in range(1, 5):
        sub = IntLattice.standard(2).scaled(m)
        ob = lift_check(K, f, ind, sub)
        verdict = "lifts" if ob is None else f"blocked at {ob.name} -> {K.describe(ob.image)}"
        print(f"cover {m}Z^2: {verdict}")


if __name__ == "__main__":
    main()
