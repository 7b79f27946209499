#!/usr/bin/env python3
"""Regenerate the packing fixtures under crates/linepack/fixtures/.

The d=6 files for n in 8..12 are reconstructed by smoothed minimax descent on
the coherence (log-sum-exp over squared inner products with an increasing
sharpness parameter, multi-start, deterministic seeds). They stand in for
database downloads so the figure pipeline is testable offline; any unit-norm
configuration is a valid data point, and these sit close to the best known
coherences. The remaining files are closed-form constructions.

Run from the repository root:  python3 tools/make_fixtures.py
"""

import numpy as np
from scipy.optimize import minimize

OUT = "crates/linepack/fixtures"


def coherence(X):
    G = X.conj().T @ X
    np.fill_diagonal(G, 0.0)
    return np.abs(G).max()


def objective(v, d, n, beta, iu):
    V = v.reshape(d, n)
    norms = np.linalg.norm(V, axis=0)
    X = V / norms
    G = X.T @ X
    g = G[iu]
    t = beta * g * g
    tmax = t.max()
    w = np.exp(t - tmax)
    Z = w.sum()
    E = (tmax + np.log(Z)) / beta

    # dE/dG_ij = 2 g_ij p_ij with softmax weights p; grad_X = 2 X F.
    p = w / Z
    F = np.zeros((n, n))
    F[iu] = p * g
    F = F + F.T
    GX = 2.0 * X @ F
    # Chain rule through column normalization.
    GV = (GX - X * np.sum(GX * X, axis=0)) / norms
    return E, GV.ravel()


def optimize_packing(d, n, restarts=60, master_seed=2024):
    best_X, best_mu = None, np.inf
    for r in range(restarts):
        rng = np.random.default_rng(master_seed * 1000 + 17 * n + r)
        V = rng.standard_normal((d, n))
        iu = np.triu_indices(n, 1)
        for beta in (40, 120, 360, 1080, 3240, 9720, 29160):
            res = minimize(
                objective,
                V.ravel(),
                args=(d, n, float(beta), iu),
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": 600, "ftol": 1e-14, "gtol": 1e-12},
            )
            V = res.x.reshape(d, n)
        X = V / np.linalg.norm(V, axis=0)
        mu = coherence(X)
        if mu < best_mu:
            best_mu, best_X = mu, X.copy()
    return best_X, best_mu


def write_real(path, X):
    d, n = X.shape
    with open(path, "w") as fh:
        for j in range(n):
            fh.write(" ".join(f"{X[i, j]:.17e}" for i in range(d)) + "\n")


def write_complex(path, X):
    d, n = X.shape
    with open(path, "w") as fh:
        for j in range(n):
            parts = []
            for i in range(d):
                parts.append(f"{X[i, j].real:.17e}")
                parts.append(f"{X[i, j].imag:.17e}")
            fh.write(" ".join(parts) + "\n")


def helmert_simplex(d):
    n = d + 1
    H = np.zeros((d, n))
    for m in range(1, d + 1):
        s = 1.0 / np.sqrt(m * (m + 1))
        H[m - 1, :m] = s
        H[m - 1, m] = -m * s
    return H * np.sqrt(n / d)


def sic2():
    w = np.exp(2j * np.pi / 3)
    cols = [np.array([1.0, 0.0], dtype=complex)]
    for a in range(3):
        cols.append(np.array([1.0 / np.sqrt(3.0), np.sqrt(2.0 / 3.0) * w**a]))
    return np.stack(cols, axis=1)


def main():
    import os

    os.makedirs(OUT, exist_ok=True)

    eye6 = np.eye(6)
    write_real(f"{OUT}/packing_d6_n5.txt", eye6[:, :5])
    write_real(f"{OUT}/packing_d6_n6.txt", eye6)
    write_real(f"{OUT}/packing_d6_n7.txt", helmert_simplex(6))
    print("n=7 simplex coherence:", coherence(helmert_simplex(6)))

    for n in range(8, 13):
        X, mu = optimize_packing(6, n)
        write_real(f"{OUT}/packing_d6_n{n}.txt", X)
        print(f"n={n} optimized coherence: {mu:.9f}")

    r3 = np.sqrt(3.0)
    mercedes = np.array([[1.0, -0.5, -0.5], [0.0, r3 / 2, -r3 / 2]])
    write_real(f"{OUT}/mercedes_d2_n3.txt", mercedes)

    write_real(f"{OUT}/ortho_d4_n4.txt", np.eye(4))

    Z = sic2()
    write_complex(f"{OUT}/sic_d2_n4.txt", Z)
    write_complex(f"{OUT}/sic2x2_d2_n8.txt", np.concatenate([Z, Z], axis=1))
    print("sic2 coherence:", coherence(Z))


if __name__ == "__main__":
    main()
