"""Three families of plane circles enclosing areas 1, 9 and 4.

The nesting decides the leaf: the left and right families put the 1-curve
inside the 9-curve and share region areas (8, 1, 4), so they lie on one
isodrastic leaf even though the right one is drawn with ellipses.  The
middle family nests the 4-curve instead and lands on another leaf.
"""

import numpy as np

from curveorbits.geometry import CurveFamily, meridian, region_areas, torus
from curveorbits.leaves import codim_rank, leaf_invariants, same_leaf
from curveorbits.scenes import load_shipped

panels = {p: load_shipped(f"nesting_{p}") for p in ("left", "middle", "right")}
inv = {}
for p, sc in panels.items():
    inv[p] = leaf_invariants(sc.family)
    areas = np.round(region_areas(sc.family).finite_areas(), 4)
    print(f"{p:>6}: region areas {areas.tolist()}  signature {inv[p].signature[1]}  "
          f"codim {codim_rank(sc.family)}")

print("left vs right :", same_leaf(inv["left"], inv["right"]))
print("left vs middle:", same_leaf(inv["left"], inv["middle"]))

# on the torus the isovolume leaf only remembers heights up to a common shift
T = torus()
fam = lambda hs: leaf_invariants(CurveFamily(tuple(meridian(h, 32, T) for h in hs)), "isovolume")
print("meridians (0.1,0.4,0.7) vs (0.3,0.6,0.9):", same_leaf(fam((0.1, 0.4, 0.7)), fam((0.3, 0.6, 0.9))))
print("meridians (0.1,0.4,0.7) vs (0.1,0.45,0.7):", same_leaf(fam((0.1, 0.4, 0.7)), fam((0.1, 0.45, 0.7))))
