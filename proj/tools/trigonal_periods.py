#!/usr/bin/env python3
"""Period file for a cyclic trigonal curve y^3 = (x-e1)(x-e2)(x-e3)(x-e4) with real e1 < e2 < e3 < e4.

Closed cycles are lifts of [e_j, e_{j+1}] on sheet k minus the lift on sheet k+1
(sheet k: y = w^k * real cube root, w = exp(2 pi i / 3)). Their intersection form
is recovered from the Legendre relation, checked to be integral and unimodular,
and reduced to a canonical symplectic basis.

Differentials (matching the C++ library):
  u1 = dx/(3y), u2 = x dx/(3y^2), u3 = dx/(3y^2)
  r1 = x^2 dx/(3y^2), r2 = 2x dx/(3y), r3 = (5x^2 + 3 b3 x + b6) dx/(3y)
Output: {"g":3,"A","B","S","T2"} with A = oint_a u, B = oint_b u, S = -oint_a r, T2 = -oint_b r.
"""

import argparse
import json
import sys

import mpmath as mp
import numpy as np


def poly_from_roots(e):
    c = [mp.mpf(1)]
    for r in e:
        c = [a - r * b for a, b in zip(c + [0], [0] + c)]
    return c  # highest degree first: x^4 + b3 x^3 + b6 x^2 + b9 x + b12


def differentials(beta):
    b3, b6 = beta[0], beta[1]
    third = mp.mpf(1) / 3
    # (numerator coefficients by power of x, power of y in the denominator)
    u = [({0: third}, 1), ({1: third}, 2), ({0: third}, 2)]
    r = [({2: third}, 2), ({1: 2 * third}, 1), ({2: 5 * third, 1: b3, 0: b6 * third}, 1)]
    return u, r


def segment_integrals(e, f, diffs):
    """I[d][j] = integral over [e_j, e_{j+1}] of num_d(x) / y0(x)^m_d, y0 the real cube root of f."""

    def y0(x):
        v = f(x)
        return mp.sign(v) * mp.cbrt(abs(v))

    out = []
    for num, m in diffs:
        row = []
        for j in range(3):
            g = lambda x: sum(c * x**k for k, c in num.items()) / y0(x) ** m
            row.append(mp.quad(g, [e[j], (e[j] + e[j + 1]) / 2, e[j + 1]], maxdegree=10))
        out.append((row, m))
    return out


def cycle_periods(ints):
    """Rows: differentials, columns: cycles gamma_{j,k}, j = 0..2, k = 0..1."""
    w = mp.exp(2j * mp.pi / 3)
    P = []
    for row, m in ints:
        P.append([(w ** (-m * k) - w ** (-m * (k + 1))) * row[j] for j in range(3) for k in range(2)])
    return mp.matrix(P)


def symplectic_basis(H):
    """Integer M with M^T H M = [[0, I], [-I, 0]] for antisymmetric unimodular H."""
    n = H.shape[0]
    form = lambda x, y: int(x @ H @ y)
    basis = [np.eye(n, dtype=np.int64)[:, i] for i in range(n)]
    a_list, b_list = [], []
    while basis:
        x = basis.pop(0)
        # Euclid on the values form(x, v) so that exactly one v pairs with x
        while True:
            nz = [i for i, v in enumerate(basis) if form(x, v) != 0]
            if len(nz) <= 1:
                break
            i = min(nz, key=lambda i: abs(form(x, basis[i])))
            hi = form(x, basis[i])
            for j in nz:
                if j != i:
                    basis[j] = basis[j] - (form(x, basis[j]) // hi) * basis[i]
        if len(nz) != 1:
            raise RuntimeError("intersection form is degenerate")
        y = basis.pop(nz[0])
        h = form(x, y)
        if abs(h) != 1:
            raise RuntimeError("intersection form is not unimodular")
        if h == -1:
            y = -y
        basis = [v - form(v, y) * x - form(x, v) * y for v in basis]
        a_list.append(x)
        b_list.append(y)
    return np.column_stack(a_list + b_list)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--roots", default="-1,0,1,2", help="four real roots, comma separated")
    ap.add_argument("--curve-out", required=True)
    ap.add_argument("--periods-out", required=True)
    ap.add_argument("--dps", type=int, default=30)
    args = ap.parse_args()
    mp.mp.dps = args.dps

    e = sorted(mp.mpf(s) for s in args.roots.split(","))
    if len(e) != 4 or any(e[i] >= e[i + 1] for i in range(3)):
        sys.exit("need four distinct real roots")
    c = poly_from_roots(e)
    beta = c[1:]
    f = lambda x: sum(ci * x ** (4 - i) for i, ci in enumerate(c))

    u, r = differentials(beta)
    Pu = cycle_periods(segment_integrals(e, f, u))
    Pr = cycle_periods(segment_integrals(e, f, r))
    X = mp.matrix(6, 6)
    for i in range(3):
        for j in range(6):
            X[i, j] = Pu[i, j]
            X[i + 3, j] = -Pr[i, j]

    J = mp.zeros(6, 6)
    for i in range(3):
        J[i, i + 3] = -1
        J[i + 3, i] = 1
    Xi = mp.inverse(X)
    G = Xi * (-2j * mp.pi * J) * Xi.T
    Gr = np.array([[int(mp.nint(mp.re(G[i, j]))) for j in range(6)] for i in range(6)], dtype=np.int64)
    err = max(abs(G[i, j] - Gr[i, j]) for i in range(6) for j in range(6))
    if err > 1e-9:
        sys.exit(f"cycle intersection form is not integral (deviation {mp.nstr(err, 5)})")
    if round(abs(np.linalg.det(Gr))) != 1:
        sys.exit("cycle intersection form is not unimodular")
    H = np.rint(np.linalg.inv(Gr)).astype(np.int64)
    M = symplectic_basis(H)
    Mm = mp.matrix(M.tolist())
    P = X * Mm

    def block(r0, c0):
        return [[[float(mp.re(P[r0 + i, c0 + j])), float(mp.im(P[r0 + i, c0 + j]))] for j in range(3)] for i in range(3)]

    A = mp.matrix([[P[i, j] for j in range(3)] for i in range(3)])
    B = mp.matrix([[P[i, j + 3] for j in range(3)] for i in range(3)])
    T = mp.inverse(A) * B
    im = np.array([[float(mp.im(T[i, j])) for j in range(3)] for i in range(3)])
    if np.linalg.eigvalsh(0.5 * (im + im.T)).min() <= 0:
        sys.exit("Im T is not positive definite for the reduced basis")

    curve = {"type": "cyclic_trigonal", "beta": [float(b) for b in beta]}
    periods = {"g": 3, "A": block(0, 0), "B": block(0, 3), "S": block(3, 0), "T2": block(3, 3)}
    with open(args.curve_out, "w") as fh:
        json.dump(curve, fh, indent=1)
        fh.write("\n")
    with open(args.periods_out, "w") as fh:
        json.dump(periods, fh, indent=1)
        fh.write("\n")
    print(f"beta = {curve['beta']}, intersection deviation {mp.nstr(err, 3)}")


if __name__ == "__main__":
    main()
