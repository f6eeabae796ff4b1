#!/usr/bin/env python3
"""Regenerates qcbp_oracle.json, the frozen reference set for the solver
tests: small BP/QCBP instances solved offline with an interior-point method
(cvxpy + CLARABEL, tolerances 1e-12) whose optimal objectives the iterative
solver must reproduce to 1e-7.

Only needed when the instance set itself changes; the JSON in this directory
is the durable artifact and the tests never invoke this script.
"""
import json
import math
import os

import cvxpy as cp
import numpy as np

rng = np.random.default_rng(77)


def solve_qcbp(A, y, eta, complex_data):
    N = A.shape[1]
    z = cp.Variable(N, complex=complex_data)
    cons = [cp.norm2(A @ z - y) <= eta] if eta > 0 else [A @ z == y]
    prob = cp.Problem(cp.Minimize(cp.norm1(z)), cons)
    for tol in (1e-12, 1e-10, 1e-9):
        try:
            prob.solve(solver=cp.CLARABEL, tol_gap_abs=tol, tol_gap_rel=tol,
                       tol_feas=tol, max_iter=200000)
        except Exception:
            continue
        if prob.status == "optimal":
            return float(prob.value)
    return None


def cplx_pairs(arr):
    return [[float(np.real(v)), float(np.imag(v))]
            for v in np.asarray(arr).ravel(order="C")]


specs = []
# real BP instances (eta = 0), underdetermined and square
for (m, N) in [(4, 8), (5, 10), (6, 12), (8, 16), (10, 20), (7, 7), (12, 18),
               (6, 20), (9, 12), (3, 9), (10, 15), (5, 25)]:
    specs.append((m, N, 0.0, False))
# real QCBP instances
for (m, N, eta) in [(4, 8, 0.1), (5, 10, 0.05), (6, 12, 0.3), (8, 16, 0.02),
                    (10, 20, 0.5), (7, 14, 1.0), (12, 18, 0.2), (6, 20, 0.05),
                    (9, 12, 0.1), (10, 15, 0.05), (8, 8, 0.1), (12, 8, 0.3),
                    (15, 10, 0.5), (5, 25, 0.01)]:
    specs.append((m, N, eta, False))
# more real instances so the real subset alone covers the correctness suite
for k in range(24):
    m = int(rng.integers(3, 13))
    N = int(rng.integers(m, 2 * m + 9))
    eta = 0.0 if k % 2 == 0 else float(10.0 ** rng.uniform(-2, 0))
    specs.append((m, N, eta, False))
# complex BP
for (m, N) in [(4, 8), (6, 12), (8, 16), (5, 15), (10, 20), (7, 7), (9, 18),
               (3, 12), (11, 16), (6, 10)]:
    specs.append((m, N, 0.0, True))
# complex QCBP
for (m, N, eta) in [(4, 8, 0.1), (6, 12, 0.2), (8, 16, 0.05), (5, 15, 0.3),
                    (10, 20, 0.1), (7, 14, 0.5), (9, 18, 0.02), (12, 9, 0.2),
                    (16, 10, 0.4), (6, 10, 0.05), (8, 12, 1.5), (10, 10, 0.3),
                    (5, 20, 0.01), (14, 20, 0.25)]:
    specs.append((m, N, eta, True))

instances = []
iid = 0
for (m, N, eta, cx) in specs:
    if cx:
        A = (rng.standard_normal((m, N)) +
             1j * rng.standard_normal((m, N))) / math.sqrt(2 * m)
        s = max(1, N // 4)
        x0 = np.zeros(N, dtype=complex)
        idx = rng.choice(N, s, replace=False)
        x0[idx] = rng.standard_normal(s) + 1j * rng.standard_normal(s)
        noise = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    else:
        A = rng.standard_normal((m, N)) / math.sqrt(m)
        s = max(1, N // 4)
        x0 = np.zeros(N)
        idx = rng.choice(N, s, replace=False)
        x0[idx] = rng.standard_normal(s)
        noise = rng.standard_normal(m)
    y = A @ x0
    if eta > 0:
        noise = noise / np.linalg.norm(noise) * (0.5 * eta)
        y = y + noise
    # overdetermined eta cases may be infeasible; check the LS floor
    if m > N or (m == N and eta > 0):
        zls, *_ = np.linalg.lstsq(A, y, rcond=None)
        floor = np.linalg.norm(A @ zls - y)
        if eta > 0 and floor > eta:
            # shift y so the problem is feasible with margin
            y = A @ zls + (y - A @ zls) * (0.8 * eta / floor)
    obj = solve_qcbp(A, y, eta, cx)
    if obj is None:
        print(f"skip m={m} N={N} eta={eta} cx={cx}: not optimal")
        continue
    instances.append({
        "id": iid, "m": m, "N": N, "eta": eta, "complex": cx,
        "A": cplx_pairs(A), "y": cplx_pairs(y), "objective": obj,
    })
    iid += 1

# two deliberately infeasible QCBP instances: eta below the LS residual floor
for (m, N) in [(10, 4), (12, 6)]:
    A = rng.standard_normal((m, N)) / math.sqrt(m)
    y = rng.standard_normal(m)
    zls, *_ = np.linalg.lstsq(A, y, rcond=None)
    floor = float(np.linalg.norm(A @ zls - y))
    instances.append({
        "id": iid, "m": m, "N": N, "eta": 0.5 * floor, "complex": False,
        "A": cplx_pairs(A), "y": cplx_pairs(y), "objective": None,
        "infeasible": True, "ls_floor": floor,
    })
    iid += 1

# frozen polylog factor value: N=1000, s=10, delta=0.5, eps=0.5, K=1
lead = 1.0 / 0.25
lnN = math.log(1000.0)
first = math.log(10.0) ** 2 * math.log(lead * 10 * lnN) * lnN
L = lead * max(first, math.log(2.0))
print("log_factor_L(1000,10,0.5,0.5,1) =", repr(L))

out = {
    "generator": "offline interior-point reference (tolerances 1e-12)",
    "objective_tol": 1e-7,
    "log_factor_L": {"N": 1000, "s": 10, "delta": 0.5, "eps": 0.5, "K": 1.0,
                     "value": L},
    "instances": instances,
}
here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "qcbp_oracle.json"), "w") as f:
    json.dump(out, f)
print("instances:", len(instances))
