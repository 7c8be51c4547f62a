"""A walk through intersection homology duality on the suspended torus.

The suspension of a torus has two singular points, each with a torus link,
so ordinary Poincare duality fails.  Intersection homology restores it: for
a perversity p the groups I^pH_i and I^(Dp)H_(n-i) have equal rank, and the
pairing nu agrees with evaluation after capping with the fundamental class.

Run:  python3 demos/duality_tour.py
"""

from ihdual.corpus import get_space, perversity_grid
from ihdual.diagrams import check_triangle_I
from ihdual.exactfield import QQ
from ihdual.ichains import ih_dims

X = get_space("ST2")
n = X.dim
print("space %s, dimension %d, f-vector %s" % (X.name, n, X.f_vector))
print("ordinary Betti numbers", X.simplicial_betti(), "(no duality: b1 = 0 but b2 = 2)")
print()

print("%-10s %-14s %-14s" % ("p", "IH_p", "IH_Dp reversed"))
for p in perversity_grid(X):
    a = ih_dims(X, p)
    b = ih_dims(X, p.dual())
    print("%-10s %-14s %-14s %s" % (p.label, a, b[::-1], "ok" if a == b[::-1] else "MISMATCH"))
print()

# triangle I: nu versus kappa composed with cap product against Gamma
p = perversity_grid(X)[0]
rep = check_triangle_I(X, p, QQ)
for deg, status in rep.status.items():
    print("degree %s: %s" % (deg, status))
    if deg in rep.details:
        d = rep.details[deg]
        print("   subdivisions used %d, nu = %s" % (d["subdivisions"], d["nu"]))
