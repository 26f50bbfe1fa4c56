"""Probe the two moment maps at an augmented unit circle.

theta(zeta) reproduces each moment, d<J, g> = omega(zeta_g, .) holds to
O(h^2), and the omega-orthogonal of the reparametrisation directions moves
closer to the Hamiltonian directions as the Gaussian grid is refined.
"""

from curveorbits.dualpair import build_battery, enrichment_curve, hamiltonian_property_check
from curveorbits.prequant import certificate, verify_generator_pairing
from curveorbits.densities import OneFormDensity
from curveorbits.scenes import load_shipped

sc = load_shipped("unit_circle")
p = sc.point()
bat = build_battery(p)
hc = hamiltonian_property_check(p, bat)
print(f"theta residual {hc.theta_residual:.1e}")
for h, r in zip(hc.fd_steps, hc.fd_residuals):
    print(f"  FD step {h:.2e}: residual {r:.2e}")
print("  ratios", [round(r, 3) for r in hc.ratios])

for grid, rep in zip(("3x3", "5x5", "9x9"), enrichment_curve(p)):
    print(f"grid {grid}: mean principal angle {rep.mean_angle:.3f}  flux rank {rep.flux_rank} "
          f"(expected {rep.expected_codim})  bracket residual {rep.bracket_residual:.1e}")

rho = OneFormDensity(tuple(sc.densities[j] for j in sorted(sc.densities)))
rep = verify_generator_pairing(rho)
print(f"density length {rep.lengths[0]:.12f}, pairing {rep.pairings[0]:.12f}")
print("certificate for l^2 = (4, 6, 10):", certificate([4, 6, 10]))
