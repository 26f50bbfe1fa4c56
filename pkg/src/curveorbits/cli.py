"""Command-line driver: ``curveorbits <command> --scene FILE [...]``.

Exit codes: 0 when every checked quantity is within tolerance, 2 for an
invalid scene, 3 when a numerical tolerance fails.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

from .densities import DensityError, OneFormDensity, Reparametrization, length_spectrum
from .geometry import point_in_polygon
from .moments import TangencyError
from .scene_io import ReportRow, SceneError, emit_report, load_scene, report_passed, svg_scene, trajectory_csv

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 2, 3


def _label_points(family, inv_regions):
    """A point inside each bounded plane region, for SVG labels."""
    out = []
    for i, c in enumerate(family.curves):
        centre = c.nodes.mean(axis=0)
        kids = [family.curves[j] for j in family.children(i)]
        for f in np.linspace(0.9, 0.0, 19):
            q = centre + f * (c.nodes[0] - centre)
            inside = point_in_polygon(q[None], c.nodes)[0]
            if inside and not any(point_in_polygon(q[None], k.nodes)[0] for k in kids):
                out.append((q[0], q[1], f"{inv_regions[i]:.4g}"))
                break
    return out


def cmd_classify(scenes, args):
    from .leaves import leaf_invariants, same_leaf
    rows, svgs = [], []
    invs = []
    for sc in scenes:
        inv = leaf_invariants(sc.family, sc.run.kind)
        invs.append((sc, inv))
        rows.append(ReportRow(f"{sc.name}:signature", str(inv.signature)))
        rows.append(ReportRow(f"{sc.name}:region_areas", list(inv.areas)))
        if inv.heights:
            rows.append(ReportRow(f"{sc.name}:heights", list(inv.heights)))
        if inv.ambiguous:
            rows.append(ReportRow(f"{sc.name}:ambiguous_matching", True))
        labels = _label_points(sc.family, inv.curve_regions) if inv.curve_regions and not sc.ambient.is_torus else ()
        svgs.append((sc.name, svg_scene(sc.curves, labels=labels, title=sc.name)))
    for (a, ia), (b, ib) in itertools.combinations(invs, 2):
        verdict = same_leaf(ia, ib, 1e-9, ly=a.ambient.moduli[1] if a.ambient.is_torus else 1.0)
        text = {"same": "same leaf (invariants match)", "different": "different leaves",
                "incomparable": "incomparable (combinatorics differ)"}[verdict]
        rows.append(ReportRow(f"{a.name}~{b.name}", text))
    return rows, svgs


def cmd_moment(scenes, args):
    from .moments import moment_left, moment_right, moment_dipole, standard_battery
    from .phase import reparametrize
    rows, svgs = [], []
    rng = np.random.default_rng(args.seed)
    for sc in scenes:
        lo, hi = np.vstack([c.nodes for c in sc.curves]).min(axis=0), np.vstack([c.nodes for c in sc.curves]).max(axis=0)
        battery = standard_battery(lo, hi)
        if sc.augmentations and len(sc.augmentations) == sc.family.k:
            p = sc.point()
            vals = np.array([moment_left(p, h.field) for h in battery])
            rows.append(ReportRow(f"{sc.name}:J_L", vals.tolist()))
            rho = moment_right(p)
            try:
                rows.append(ReportRow(f"{sc.name}:J_R_lengths", list(length_spectrum(rho).lengths)))
            except DensityError as err:
                rows.append(ReportRow(f"{sc.name}:J_R_lengths", str(err)))
            psi = Reparametrization.random(rng, 2, 0.2)
            q = reparametrize(p, psi)
            res = max(abs(moment_left(q, h.field) - v) for h, v in zip(battery, vals))
            rows.append(ReportRow.check(f"{sc.name}:J_L_reparam_invariance", res, max(sc.run.tol, 1e-8)))
        for j, d in sc.dipole_loops().items():
            vals = [moment_dipole(d, h) for h in battery]
            rows.append(ReportRow(f"{sc.name}:dipole{j}", vals))
        svgs.append((sc.name, svg_scene(sc.curves, quivers=sc.dipoles, title=sc.name)))
    return rows, svgs


def cmd_moser(scenes, args):
    from .leaves import moser_cylinder_flow
    rows = []
    for sc in scenes:
        f = sc.graph()
        if f is None:
            raise SceneError(f"{sc.name}: scene has no 'graph' entry")
        _, rep = moser_cylinder_flow(f, 64, sc.run.dt)
        rows.append(ReportRow.check(f"{sc.name}:max_divergence", rep.max_divergence, 1e-10))
        rows.append(ReportRow.check(f"{sc.name}:endpoint_error", rep.max_endpoint_error, sc.run.tol))
    return rows, []


def cmd_evolve(scenes, args):
    from .dipoles import evolve, invariant_report, side_classify
    rows, svgs = [], []
    out = Path(args.out) if args.out else None
    for sc in scenes:
        if not sc.hamiltonians:
            raise SceneError(f"{sc.name}: evolve needs a Hamiltonian")
        h = sc.hamiltonians[0]
        for j, d in sc.dipole_loops().items():
            tr = evolve(d, h, sc.run.T, sc.run.dt)
            rep = invariant_report(tr)
            tag = f"{sc.name}:dipole{j}"
            rows.append(ReportRow(f"{tag}:side", side_classify(d)))
            rows.append(ReportRow.check(f"{tag}:area_drift", rep.area, sc.run.tol))
            rows.append(ReportRow.check(f"{tag}:length_drift", rep.length, sc.run.tol))
            rows.append(ReportRow.check(f"{tag}:moment_drift", rep.moment, sc.run.tol))
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
                (out / f"{sc.name}_dipole{j}_trajectory.csv").write_text(trajectory_csv(tr))
            last = tr.loop(len(tr) - 1)
            svgs.append((f"{sc.name}_dipole{j}_final",
                         svg_scene([last.curve], quivers={0: last.u}, title=f"{tag} t={tr.times[-1]:g}")))
    return rows, svgs


def cmd_prequant(scenes, args):
    from .prequant import certificate, verify_generator_pairing
    rows = []
    for sc in scenes:
        if sc.densities:
            rho = OneFormDensity(tuple(sc.densities[j] for j in sorted(sc.densities)))
            rep = verify_generator_pairing(rho)
            rows.append(ReportRow(f"{sc.name}:lengths", list(rep.lengths)))
            for j, r in enumerate(rep.residuals):
                rows.append(ReportRow.check(f"{sc.name}:pairing_residual[{j}]", r, 1e-10))
            if rep.certificate is None:
                rows.append(ReportRow(f"{sc.name}:certificate", "hypothesis not satisfied"))
            else:
                c = rep.certificate
                rows.append(ReportRow(f"{sc.name}:certificate", f"n={c.n} m={list(c.m)} bezout={list(c.bezout)}"))
                rows.append(ReportRow.check(f"{sc.name}:combined_pairing_minus_one", rep.combined - 1.0, 1e-10))
        if "lsq" in sc.raw:
            c = certificate(sc.raw["lsq"])
            rows.append(ReportRow(f"{sc.name}:lsq_certificate", f"n={c.n} m={list(c.m)} bezout={list(c.bezout)}",
                                  None, c.check()))
    return rows, []


def cmd_lab(scenes, args):
    from .dualpair import build_battery, enrichment_curve, hamiltonian_property_check
    rows = []
    for sc in scenes:
        p = sc.point()
        bat = build_battery(p)
        hc = hamiltonian_property_check(p, bat, seed=args.seed)
        rows.append(ReportRow.check(f"{sc.name}:theta_residual", hc.theta_residual, 1e-10))
        for h, r in zip(hc.fd_steps, hc.fd_residuals):
            rows.append(ReportRow(f"{sc.name}:fd_residual[h={h:g}]", r))
        fine = hamiltonian_property_check(p, bat, steps=(1e-4,), seed=args.seed)
        rows.append(ReportRow.check(f"{sc.name}:fd_residual_at_1e-4", fine.fd_residuals[0], 1e-6))
        for i, ratio in enumerate(hc.ratios):
            rows.append(ReportRow(f"{sc.name}:fd_ratio[{i}]", ratio, 3.0, ratio >= 3.0))
        curve = enrichment_curve(p, kind=sc.run.kind)
        for g, rep in zip(("3x3", "5x5", "9x9"), curve):
            rows.append(ReportRow(f"{sc.name}:mean_angle[{g}]", rep.mean_angle))
        means = [r.mean_angle for r in curve]
        mono = all(b <= 1.05 * a for a, b in zip(means, means[1:]))
        rows.append(ReportRow(f"{sc.name}:angles_monotone", mono, None, mono))
        rep = curve[-1]
        rows.append(ReportRow(f"{sc.name}:flux_rank", rep.flux_rank, None, rep.codim_ok))
        rows.append(ReportRow.check(f"{sc.name}:bracket_residual", rep.bracket_residual, 1e-6))
    return rows, []


COMMANDS = {
    "classify": (cmd_classify, "leaf invariants and pairwise same-leaf verdicts"),
    "moment": (cmd_moment, "moment maps against the standard Hamiltonian battery"),
    "moser": (cmd_moser, "verify the Moser flow for the scene's graph"),
    "evolve": (cmd_evolve, "evolve dipole loops and report invariant drift"),
    "prequant": (cmd_prequant, "prequantization certificate and generator pairings"),
    "lab": (cmd_lab, "dual-pair probes at the scene's augmented point"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="curveorbits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scene", action="append", required=True, metavar="PATH",
                       help="scene JSON file (repeatable)")
        p.add_argument("--out", metavar="DIR", help="write report files here instead of stdout")
        p.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
        p.add_argument("--seed", type=int, default=None, help="overrides the scene seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenes = [load_scene(p) for p in args.scene]
    except (OSError, SceneError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    if args.seed is None:
        args.seed = scenes[0].run.seed
    func = COMMANDS[args.command][0]
    try:
        rows, svgs = func(scenes, args)
    except TangencyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    text = emit_report(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.format in ("csv", "both"):
            (out / f"{args.command}.csv").write_text(text)
        if args.format in ("svg", "both"):
            for name, svg in svgs:
                (out / f"{args.command}_{name}.svg").write_text(svg)
    elif args.format in ("csv", "both"):
        sys.stdout.write(text)
    return EXIT_OK if report_passed(rows) else EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
