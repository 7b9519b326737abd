"""Independent reference values frozen into the test suite.

Nothing here imports catenoid_lab. Routes: mpmath at 30 digits (quadrature,
bisection, Taylor ODE solver), dense composite Simpson, and a Chebyshev
collocation eigen-solver for the Robin problems. Run once; paste the output
into tests/oracle_values.py.
"""
import math

import mpmath as mp
import numpy as np
from scipy.linalg import eig

mp.mp.dps = 30


def B2(a, s):
    return a * mp.cosh(2 * s) - mp.mpf(1) / 2


def phi(a, s):
    K = mp.sqrt(a * a - mp.mpf(1) / 4)
    return mp.quad(lambda t: K / ((B2(a, t) + 1) * mp.sqrt(B2(a, t))), [0, s])


def fbc(a, s):
    K = mp.sqrt(a * a - mp.mpf(1) / 4)
    return mp.tanh(phi(a, s)) - mp.sqrt(B2(a, s)) * K / (a * mp.sinh(2 * s))


def s0_bisect(a, lo, hi, iters=100):
    flo = fbc(a, lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = fbc(a, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def geometry(a, lo, hi):
    a = mp.mpf(a)
    s0 = s0_bisect(a, mp.mpf(lo), mp.mpf(hi))
    K = mp.sqrt(a * a - mp.mpf(1) / 4)
    b2 = B2(a, s0)
    ph = phi(a, s0)
    sinh_r = mp.sqrt((b2 + 1) * mp.sinh(ph) ** 2 + b2)
    return dict(s0=s0, r=mp.asinh(sinh_r), H=sinh_r / K, y=b2 / K ** 2, phi_s0=ph,
                coth_r=mp.sqrt(1 + sinh_r ** 2) / sinh_r)


def simpson_phi(a, s, panels=10 ** 6):
    t = np.linspace(0.0, s, panels + 1)
    b2 = a * np.cosh(2 * t) - 0.5
    f = math.sqrt(a * a - 0.25) / ((b2 + 1) * np.sqrt(b2))
    h = s / panels
    return h / 3 * (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum())


def cheb(n):
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.hstack([2, np.ones(n - 1), 2]) * (-1) ** np.arange(n + 1)
    X = np.tile(x, (n + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1 / c) / (dX + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    return D, x


def collocation_eigs(a, k, parity, s0, coth_r, n=80, count=3):
    """Chebyshev collocation of -(B u')' - B W_k u = mu B u on [0, s0]."""
    D, x = cheb(n)
    s = (x + 1) * s0 / 2  # s[0] = s0, s[-1] = 0
    D = D * 2 / s0
    b2 = a * np.cosh(2 * s) - 0.5
    b = np.sqrt(b2)
    k2 = a * a - 0.25
    w = 2 * k2 / b2 ** 2 - 2 - k * k / b2
    L = -D @ np.diag(b) @ D - np.diag(b * w)
    M = np.diag(b).astype(float)
    # right end (row 0): u' - coth r u = 0
    L[0] = D[0] - coth_r * np.eye(n + 1)[0]
    M[0] = 0
    # left end (last row)
    L[-1] = D[-1] if parity == "even" else np.eye(n + 1)[-1]
    M[-1] = 0
    vals = eig(L, M, right=False)
    vals = vals[np.isfinite(vals)]
    vals = np.sort(vals.real[np.abs(vals.imag) < 1e-8])
    return vals[:count]


def main():
    out = {}
    out["B2_075_03"] = mp.nstr(mp.mpf("0.75") * mp.cosh(mp.mpf("0.6")) - mp.mpf("0.5"), 20)
    out["phi_075_04_mp"] = mp.nstr(phi(mp.mpf("0.75"), mp.mpf("0.4")), 20)
    out["phi_075_04_simpson"] = repr(float(simpson_phi(0.75, 0.4)))
    c = mp.findroot(lambda x: x - mp.coth(x), 1.2)
    out["sigma_star"] = mp.nstr(c, 20)
    s = mp.sinh(c) ** 2
    out["rho_star"] = mp.nstr(mp.sinh(c), 20)
    cs = c * mp.cosh(c)
    out["C0"] = mp.nstr(cs * (s - 1) * (3 * s - 2) / (12 * s), 20)
    out["xi1"] = mp.nstr((s - 1) * (s - 4) * (s + 1) / (12 * s * cs), 20)
    out["I_star_integral"] = mp.nstr(-mp.quad(lambda t: (7 * mp.cosh(t) ** 4 + mp.cosh(t) ** 2 - 5)
                                            / (6 * mp.cosh(t) ** 2), [0, c]), 20)
    out["gamma_quarter"] = mp.nstr(mp.gamma(mp.mpf(1) / 4), 20)
    out["d_inf"] = mp.nstr(mp.log(mp.sqrt(2) * mp.gamma(mp.mpf(1) / 4) ** 2 / mp.pi ** 1.5), 20)
    geoms = {}
    for a, lo, hi in [(1, "1.0", "1.05"), (0.6, "0.45", "0.5"), (2, "1.6", "1.7"),
                      ("0.501", "0.04", "0.05"), (200, "6.1", "6.2"), (1.5, "1.3", "1.5")]:
        g = geometry(a, lo, hi)
        geoms[str(a)] = g
        for key, v in g.items():
            out[f"{key}_{a}"] = mp.nstr(v, 20)
    # u = 1 in the k=0 even form at a = 1
    g = geoms["1"]
    a = mp.mpf(1)
    K2 = a * a - mp.mpf(1) / 4
    integral = mp.quad(lambda t: mp.sqrt(B2(a, t)) * (2 * K2 / B2(a, t) ** 2 - 2), [0, g["s0"]])
    out["form_const_1"] = mp.nstr(-2 * integral - 2 * g["coth_r"] * mp.sqrt(B2(a, g["s0"])), 20)
    # phi_a(s0) at a = 0.6 by Taylor-series ODE integration
    a = mp.mpf("0.6")
    K = mp.sqrt(a * a - mp.mpf(1) / 4)

    def rhs(t, y):
        b2 = B2(a, t)
        return [y[1], -(a * mp.sinh(2 * t) / b2) * y[1] - (2 * K ** 2 / b2 ** 2 - 2) * y[0]]

    sol = mp.odefun(rhs, 0, [1 / (2 * K), mp.mpf(0)], tol=mp.mpf(10) ** -20)
    out["phi_a_s0_0.6"] = mp.nstr(sol(geoms["0.6"]["s0"])[0], 20)
    # Hardy integrals at a = 1.5
    a = mp.mpf("1.5")
    K2 = a * a - mp.mpf(1) / 4
    sV = mp.acosh((2 * a * a + 1) / (3 * a)) / 2
    s0 = geoms["1.5"]["s0"]
    vb = lambda t: (3 * B2(a, t) - 2 * K2) / mp.sqrt(B2(a, t))
    out["hardy_1.5_I_V"] = mp.nstr(mp.quad(lambda t: abs(vb(t)), [0, sV]), 15)
    out["hardy_1.5_K_star"] = mp.nstr(mp.quad(lambda t: mp.quad(lambda u: abs(vb(u)), [0, t]) / B2(a, t) ** 1.5,
                                              [0, sV]), 15)
    out["hardy_1.5_I_V_plus"] = mp.nstr(mp.quad(vb, [sV, s0]), 15)
    out["hardy_1.5_K_star_plus"] = mp.nstr(mp.quad(lambda t: mp.quad(vb, [t, s0]) / B2(a, t) ** 1.5, [sV, s0]), 15)
    # collocation eigenvalues
    for a in ["1", "0.6", "2"]:
        g = geoms[a]
        for k, par in [(0, "even"), (0, "odd"), (1, "even"), (1, "odd"), (2, "even"), (2, "odd")]:
            vals = collocation_eigs(float(a), k, par, float(g["s0"]), float(g["coth_r"]))
            out[f"eig_{a}_k{k}_{par}"] = [float(v) for v in vals[:2]]
    for key, v in out.items():
        print(f"{key} = {v!r}")


if __name__ == "__main__":
    main()
