"""The cone formula: intersection homology of a cone is a truncation.

For a link L of dimension n - 1 the cone cL has IH_i(cL) = IH_i(L) below a
cutoff n - 1 - p(apex) and zero from there on.  This script prints the computed groups next to the formula.

Run:  python3 demos/cone_formula.py
"""

from ihdual.complex import cone
from ihdual.corpus import cone_links
from ihdual.ichains import cone_formula_oracle, ih_dims
from ihdual.perversity import Perversity
from ihdual.exactfield import QQ

for name, L in cone_links().items():
    cL = cone(L)
    apex = cL.stratum_of[(0,)]
    print("cone on %s (dimension %d)" % (name, cL.dim))
    for v in range(-1, L.dim + 2):
        vals = {st.index: 0 for st in cL.singular_strata}
        vals[apex] = v
        p = Perversity(cL, vals, "apex%d" % v)
        got = ih_dims(cL, p)
        want = cone_formula_oracle(L, p, QQ, cL)
        print("  p(apex) = %2d  computed %s  formula %s" % (v, got, want))
    print()
