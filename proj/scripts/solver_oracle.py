#!/usr/bin/env python3
"""Solve the exported test instances with cvxpy and freeze the optimal
objectives that the solver tests compare against.

Usage:
    tests' dump_instances 50 instances.json
    python3 scripts/solver_oracle.py instances.json tests/data/solver_oracle.json
"""

import json
import sys

import cvxpy as cp
import numpy as np

SOLVER_OPTS = dict(solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11,
                   tol_feas=1e-11)


def box_constraints(expr, lo, hi):
    """Per-entry bounds with None meaning unconstrained on that side."""
    cons = []
    lo = [(-np.inf if v is None else v) for v in lo]
    hi = [(np.inf if v is None else v) for v in hi]
    lo = np.asarray(lo)
    hi = np.asarray(hi)
    finite_lo = np.isfinite(lo)
    finite_hi = np.isfinite(hi)
    if finite_lo.any():
        cons.append(expr[finite_lo] >= lo[finite_lo])
    if finite_hi.any():
        cons.append(expr[finite_hi] <= hi[finite_hi])
    return cons


def weighted_l1(weights, re, im):
    mags = cp.norm(cp.vstack([re, im]), axis=0)
    return cp.sum(cp.multiply(weights, mags))


def solve_analysis(inst):
    A_re = np.asarray(inst["A_re"])
    A_im = np.asarray(inst["A_im"])
    w = np.asarray(inst["weights"])
    P = inst["P"]
    x = cp.Variable(P)
    c_re = A_re @ x
    c_im = A_im @ x
    cons = box_constraints(x, inst["time_lo"], inst["time_hi"])
    if "tf_re_lo" in inst:
        cons += box_constraints(c_re, inst["tf_re_lo"], inst["tf_re_hi"])
        cons += box_constraints(c_im, inst["tf_im_lo"], inst["tf_im_hi"])
    prob = cp.Problem(cp.Minimize(weighted_l1(w, c_re, c_im)), cons)
    prob.solve(**SOLVER_OPTS)
    assert prob.status == cp.OPTIMAL, prob.status
    return float(prob.value)


def solve_synthesis(inst):
    A_re = np.asarray(inst["A_re"])
    A_im = np.asarray(inst["A_im"])
    w = np.asarray(inst["weights"])
    Q = inst["Q"]
    zr = cp.Variable(Q)
    zi = cp.Variable(Q)
    signal = A_re.T @ zr + A_im.T @ zi  # Re(A^H z)
    cons = box_constraints(signal, inst["time_lo"], inst["time_hi"])
    if "tf_re_lo" in inst:
        cons += box_constraints(zr, inst["tf_re_lo"], inst["tf_re_hi"])
        cons += box_constraints(zi, inst["tf_im_lo"], inst["tf_im_hi"])
    prob = cp.Problem(cp.Minimize(weighted_l1(w, zr, zi)), cons)
    prob.solve(**SOLVER_OPTS)
    assert prob.status == cp.OPTIMAL, prob.status
    return float(prob.value)


def solve_generic(g):
    d = g["dim"]
    L = np.asarray(g["L"]).reshape(d, d)
    z = cp.Variable(d)
    cons = [L @ z >= np.asarray(g["lo"]), L @ z <= np.asarray(g["hi"])]
    prob = cp.Problem(cp.Minimize(cp.norm1(z)), cons)
    prob.solve(**SOLVER_OPTS)
    assert prob.status == cp.OPTIMAL, prob.status
    return float(prob.value)


def main():
    in_path = sys.argv[1] if len(sys.argv) > 1 else "instances.json"
    out_path = sys.argv[2] if len(sys.argv) > 2 else "solver_oracle.json"
    with open(in_path) as f:
        root = json.load(f)

    out = {"generic": solve_generic(root["generic"]), "objectives": []}
    for k, inst in enumerate(root["instances"]):
        entry = {
            "seed": inst["seed"],
            "analysis": solve_analysis(inst),
            "synthesis": solve_synthesis(inst),
        }
        out["objectives"].append(entry)
        print(f"[{k + 1}/{len(root['instances'])}] seed {inst['seed']}: "
              f"analysis {entry['analysis']:.9f} "
              f"synthesis {entry['synthesis']:.9f}")

    with open(out_path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
