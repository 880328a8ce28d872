#!/usr/bin/env python3
"""Write the futile-cycle golden file from the closed-form equilibrium.

With every rate constant 1 and sigma = (1,0,1,1,0,0) the equilibrium flux is
(C, C, C, C), so C solves 2C^2 - 7C + 1 = 0 on (0, 1), D = C, E = F = 1 - C
and P = Q = 2C / (1 - C).
"""
import argparse
import json
import math
import pathlib


def closed_form():
    c = (7.0 - math.sqrt(41.0)) / 4.0
    p = 2.0 * c / (1.0 - c)
    zeta = [p, p, 1.0 - c, 1.0 - c, c, c]
    a = -c - p / 2.0
    xi = [a + 2.0 * c + p, a + c + p, a + c, a]
    return c, zeta, xi


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "golden" / "v1" / "futile_cycle.json"))
    args = parser.parse_args()

    c, zeta, xi = closed_form()
    doc = {
        "example": "futile-cycle",
        "species": ["P", "Q", "E", "F", "C", "D"],
        "sigma": [1.0, 0.0, 1.0, 1.0, 0.0, 0.0],
        "rate_constants": {"k1": 1.0, "k-1": 1.0, "k2": 1.0, "k3": 1.0, "k-3": 1.0, "k4": 1.0},
        "seed": 42,
        "integrator": {"method": "dopri5", "rel_tol": 1e-8, "abs_tol": 1e-10},
        "source": "closed form",
        "zeta": zeta,
        "xi": xi,
        "r": 2.0 * c,
        "v": [0.5, 0.5, 0.5, 0.5],
        "tolerance": 1e-6,
    }
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
