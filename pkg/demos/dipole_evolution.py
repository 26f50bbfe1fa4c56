"""Advect a vortex dipole loop by an offset Gaussian Hamiltonian.

The curve moves with X_h and u is carried by the tangent map.  Area a,
density length l and the pairing <J, X_h> stay fixed up to RK4 error,
which drops by about 2^4 when the step halves.
"""

from curveorbits.dipoles import evolve, invariant_report, side_classify
from curveorbits.moments import moment_dipole
from curveorbits.scenes import load_shipped

sc = load_shipped("standard_dipole")
d = sc.dipole_loops()[0]
h = sc.hamiltonians[0]
print(f"u points {side_classify(d)}; a = {d.area:.6f}, l = {d.length:.6f}")

prev = None
for dt in (4e-3, 2e-3, 1e-3, 5e-4):
    rep = invariant_report(evolve(d, h, 1.0, dt))
    ratio = "" if prev is None else f"  ratio {prev / rep.max():5.1f}"
    print(f"dt={dt:7.1e}  drift a {rep.area:.2e}  l {rep.length:.2e}  J {rep.moment:.2e}{ratio}")
    prev = rep.max()

# the class [u] matters, not u: shifting along t_C leaves every pairing alone
for c in (-1.0, 0.5, 2.0):
    print(f"shift c={c:+.1f}: <J, X_h> changes by {abs(moment_dipole(d.shifted_class(c), h) - moment_dipole(d, h)):.1e}")
