"""Moving a product across a degree-n isomorphism, and the signs it costs.

Take a small graded-commutative algebra A, a random chain isomorphism
f: A -> B of degree n, and push the product over.  The naive transfer Q is
a chain map but only associative and commutative up to sign.  Dold's bullet
product is associative and unital but not a chain map for odd n.  Shifting
B by n repairs everything at once.

Run:  python3 demos/sign_calculus.py
"""

import random

from ihdual.corpus import get_space
from ihdual.diagrams import manifold_product_system
from ihdual.signcalc import defect_report, random_system, square_defects

rng = random.Random(0)
for n in (1, 2):
    S = random_system(n, rng)
    print("n = %d, A has dimensions %s" % (n, dict(sorted(S.A.dims.items()))))
    for which in ("Q", "Q'", "bullet", "R"):
        rep = defect_report(S, which)
        signs = sorted(set(rep.associativity.values()))
        comm = sorted(set(rep.commutativity.values()))
        print("  %-7s chain map %-5s associativity signs %-8s commutativity signs %s"
              % (which, rep.chain_map, signs, comm))
    print()

# the same machinery applied to cup product and Poincare duality on S^3
_, S = manifold_product_system(get_space("S3"))
print("S3: PD has degree %d" % S.n)
for which in ("Q", "Q'", "bullet"):
    print("  square signs for %-7s %s" % (which, dict(sorted(square_defects(S, which).items()))))
