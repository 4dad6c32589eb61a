"""Independent evaluation of closed-form golden values.

Writes crates/core/tests/fixtures/golden.json. Run from the repository root:

    python3 data/tools/oracles.py
"""
import json
import math
from pathlib import Path

HBAR = 1.054571817e-34
KB = 1.380649e-23

HE4 = dict(rho=145.0, sigma=3.75e-4, eps=1.057)
HE3 = dict(rho=81.0, sigma=1.52e-4, eps=1.042)


def rayleigh(l, m, r):
    return math.sqrt(l * (l - 1) * (l + 2) * m["sigma"] / (m["rho"] * r**3))


def chandrasekhar_q(l, r, t):
    mu = 3e-6 * (1.0 / t) ** 2
    w = rayleigh(l, HE3, r)
    return w * r * r * HE3["rho"] / (mu * (l - 1) * (2 * l + 1))


def x_zpf(m, r):
    return math.sqrt(HBAR * rayleigh(2, m, r) / (8 * m["sigma"]))


def q_surface(r, t, sigma, eps, lam):
    k0 = 2 * math.pi / lam
    return 2 * r / (math.pi * k0 * math.sqrt(eps - 1)) * sigma / (KB * t)


def bulge(m, r, omega):
    return m["rho"] * r**4 * omega**2 / (24 * m["sigma"])


def h2_conf(path):
    vals = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#")[0].strip()
        if line:
            k, v = line.split("=")
            vals[k.strip()] = float(v)
    return vals


def main():
    root = Path(__file__).resolve().parents[2]
    h2 = h2_conf(root / "data" / "h2_drop.conf")
    golden = {
        "chandrasekhar_q_he3_1mm_l2_1K": chandrasekhar_q(2, 1e-3, 1.0),
        "omega_vib_he4_1mm": rayleigh(2, HE4, 1e-3),
        "omega_vib_he3_1mm": rayleigh(2, HE3, 1e-3),
        "x_zpf_he4_1mm": x_zpf(HE4, 1e-3),
        "q_surface_he4_1mm_300mK_1um": q_surface(1e-3, 0.3, HE4["sigma"], HE4["eps"], 1e-6),
        "q_surface_h2_fixture": q_surface(
            h2["radius_m"], h2["temperature_K"], h2["surface_tension_N_per_m"], h2["dielectric"], h2["wavelength_m"]
        ),
        "bulge_he3_1mm_1Hz": bulge(HE3, 1e-3, 2 * math.pi),
    }
    out = root / "crates" / "core" / "tests" / "fixtures" / "golden.json"
    out.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    print(json.dumps(golden, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
