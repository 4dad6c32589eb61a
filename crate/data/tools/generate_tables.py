"""Regenerates the bundled helium property tables in ../.

Sources combined here:
  * ITS-90 helium vapour-pressure equations (3He: 0.65-3.2 K, 4He: 1.25-5.0 K).
  * 4He specific heat: phonon + roton excitation gas below 1.8 K
    (v_s = 238 m/s, Delta/k = 8.62 K, p0/hbar = 1.91 A^-1, mu = 0.16 m4);
    saturated-vapour values of the standard compilations above 1.8 K.
  * 3He specific heat: saturated-vapour C/R values of the standard
    compilations, Fermi-liquid C/R = 2.72 T below 0.05 K.
  * Below the ITS-90 ranges the vapour pressure follows from equating the
    ideal-vapour and liquid chemical potentials, mu_l = -E0 + U - T S,
    rescaled by a constant to join the ITS-90 curve continuously.
  * Latent heat: Clapeyron relation with a second-virial vapour inside the
    ITS-90 range, E0 + 5/2 kT - U below it.

Requires numpy and scipy.  Run from this directory.
"""
import warnings

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

warnings.filterwarnings("ignore")

K_B = 1.380649e-23
HBAR = 1.054571817e-34
N_A = 6.02214076e23
M4 = 4.002602e-3 / N_A
M3 = 3.0160293e-3 / N_A
E0_4 = 7.14
E0_3 = 2.5

ITS_3 = ([1.053447, 0.980106, 0.676380, 0.372692, 0.151656, -0.002263,
          0.006596, 0.088966, -0.004770, -0.054943], 7.3, 4.3)
ITS_4_LOW = ([1.392408, 0.527153, 0.166756, 0.050988, 0.026514, 0.001975,
              -0.017976, 0.005409, 0.013259], 5.6, 2.9)
ITS_4_HIGH = ([3.146631, 1.357655, 0.413923, 0.091159, 0.016349, 0.001826,
               -0.004325, -0.004973], 10.3, 1.9)


def its_temperature(coeffs, p):
    a, b, c = coeffs
    x = (np.log(p) - b) / c
    return sum(ai * x**i for i, ai in enumerate(a))


def its_pressure(coeffs, t, lo, hi):
    return np.exp(brentq(lambda lp: its_temperature(coeffs, np.exp(lp)) - t,
                         np.log(lo), np.log(hi), xtol=1e-14))


def p4_its(t):
    if t < 2.1768:
        return its_pressure(ITS_4_LOW, t, 5.0, 6000.0)
    return its_pressure(ITS_4_HIGH, t, 4000.0, 3e5)


def p3_its(t):
    return its_pressure(ITS_3, t, 10.0, 3e5)


# --- specific heat per atom, units of k_B
def _excitation_free_energy(t):
    n4 = 145.0 / M4
    kt = K_B * t
    f_ph = -(np.pi**2 / 90) * kt * (kt / (HBAR * 238.0))**3 / n4
    delta = 8.62 * K_B
    p0 = 1.91e10 * HBAR
    mu = 0.16 * M4
    n_rot = 2 * np.sqrt(mu * kt) * p0**2 / ((2 * np.pi)**1.5 * HBAR**3) * np.exp(-delta / kt)
    return f_ph - kt * n_rot / n4


C4_HIGH = [(1.8, 1.75), (1.9, 2.25), (2.0, 2.95), (2.05, 3.45), (2.1, 4.3),
           (2.15, 6.0), (2.17, 8.5), (2.18, 3.3), (2.2, 2.9), (2.3, 2.45),
           (2.5, 2.15), (2.8, 2.02), (3.0, 2.05), (3.3, 2.2), (3.6, 2.45),
           (4.0, 2.8), (4.2, 3.05), (4.4, 3.4)]  # J/(g K)

C3 = [(0.0, 0.0), (0.05, 0.136), (0.07, 0.185), (0.1, 0.25), (0.15, 0.33),
      (0.2, 0.385), (0.25, 0.42), (0.3, 0.445), (0.4, 0.475), (0.5, 0.49),
      (0.6, 0.50), (0.8, 0.515), (1.0, 0.535), (1.2, 0.56), (1.5, 0.61),
      (1.8, 0.67), (2.0, 0.72), (2.2, 0.78), (2.5, 0.90), (2.8, 1.08),
      (3.0, 1.25), (3.2, 1.5)]  # C/R


def c4(t):
    if t <= 1.8:
        h = 1e-4
        f = _excitation_free_energy
        return -t * (f(t + h) - 2 * f(t) + f(t - h)) / h**2 / K_B
    ts, cs = zip(*C4_HIGH)
    return np.interp(t, ts, cs) * M4 * 1000 / K_B


def c3(t):
    if t < 0.05:
        return 2.72 * t
    ts, cs = zip(*C3)
    return np.interp(t, ts, cs)


def internal_energy(c, t):
    return quad(c, 0.0, t, limit=400)[0]


def entropy(c, t):
    return quad(lambda s: c(s) / s if s > 0 else 0.0, 0.0, t, limit=400)[0]


def p_thermo(t, m, e0, g, c):
    kt = K_B * t
    n_q = (m * kt / (2 * np.pi * HBAR**2))**1.5
    f = internal_energy(c, t) - t * entropy(c, t)
    return g * kt * n_q * np.exp((-e0 + f) / t)


def rho4(t):
    return 145.0 if t < 2.2 else 145.0 - (t - 2.2) * 10.0


def rho3(t):
    return 81.0 if t < 1.0 else 81.0 - (t - 1.0) * (22.0 / 2.19)


def latent_clapeyron(pf, t, b, vl):
    h = 1e-4
    dp = (pf(t + h) - pf(t - h)) / (2 * h)
    p = pf(t)
    return t * dp * (K_B * t / p + b(t) / N_A - vl)


# second virial B = b0 - b1/T, b1 fixed by L(4He, 4.222 K) = 83.0 J/mol and
# L(3He, 3.19 K) = 26.0 J/mol
B1_4 = brentq(lambda b: latent_clapeyron(p4_its, 4.222, lambda t: 23.05e-6 - b / t,
                                         M4 / rho4(4.222)) * N_A - 83.0, 0, 2e-3)
B1_3 = brentq(lambda b: latent_clapeyron(p3_its, 3.19, lambda t: 20e-6 - b / t,
                                         M3 / rho3(3.19)) * N_A - 26.0, 0, 2e-3)
S4 = p4_its(1.25) / p_thermo(1.25, M4, E0_4, 1, c4)
S3 = p3_its(0.65) / p_thermo(0.65, M3, E0_3, 2, c3)


def p4(t):
    return p4_its(t) if t >= 1.25 else S4 * p_thermo(t, M4, E0_4, 1, c4)


def p3(t):
    return p3_its(t) if t >= 0.65 else S3 * p_thermo(t, M3, E0_3, 2, c3)


def l4(t):
    if t >= 1.25:
        return latent_clapeyron(p4_its, t, lambda s: 23.05e-6 - B1_4 / s, M4 / rho4(t))
    return K_B * (E0_4 + 2.5 * t - internal_energy(c4, t))


def l3(t):
    if t >= 0.65:
        return latent_clapeyron(p3_its, t, lambda s: 20e-6 - B1_3 / s, M3 / rho3(t))
    return K_B * (E0_3 + 2.5 * t - internal_energy(c3, t))


def grid(parts):
    g = np.unique(np.round(np.concatenate(parts), 4))
    return g


G4 = grid([np.arange(0.1, 1.0, 0.05), np.arange(1.0, 2.0, 0.1),
           [2.05, 2.1, 2.15, 2.17, 2.18, 2.2], np.arange(2.3, 4.21, 0.1)])
G4P = G4[G4 >= 0.65]
G3 = grid([[0.05, 0.07], np.arange(0.1, 1.0, 0.05), np.arange(1.0, 3.01, 0.1)])


def write(name, header, ts, f):
    with open(f"../{name}", "w") as out:
        out.write(f"# {header}\n")
        out.write("T_K,value\n")
        for t in ts:
            out.write(f"{t:.4g},{f(t):.6e}\n")


if __name__ == "__main__":
    write("he4_vapor_pressure.csv",
          "vapor_pressure, Pa, ITS-90 4He equation above 1.25 K; ideal-vapour "
          "chemical-potential balance (E0/k = 7.14 K) rescaled to join ITS-90 below",
          G4P, p4)
    write("he4_latent_heat.csv",
          "latent_heat, J/atom, Clapeyron slope of ITS-90 curve with second-virial "
          "vapour above 1.25 K; E0 + 5/2 kT - U(T) below",
          G4, l4)
    write("he4_specific_heat.csv",
          "specific_heat, J/(K atom), phonon+roton gas below 1.8 K; saturated-vapour "
          "compilation values through the lambda peak and He I to 4.2 K",
          G4, lambda t: c4(t) * K_B)
    write("he3_vapor_pressure.csv",
          "vapor_pressure, Pa, ITS-90 3He equation above 0.65 K; Fermi-liquid "
          "chemical-potential balance (E0/k = 2.5 K, spin 1/2 vapour) rescaled below",
          G3, p3)
    write("he3_latent_heat.csv",
          "latent_heat, J/atom, Clapeyron slope of ITS-90 curve with second-virial "
          "vapour above 0.65 K; E0 + 5/2 kT - U(T) below",
          G3, l3)
    write("he3_specific_heat.csv",
          "specific_heat, J/(K atom), saturated-vapour compilation C/R values; "
          "Fermi-liquid gamma T below 0.05 K",
          G3, lambda t: c3(t) * K_B)
