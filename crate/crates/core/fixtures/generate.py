#!/usr/bin/env python3
"""Regenerate the reference tables for the Airy (example 4) and Bessel
(example 5) problems.

Values are computed with mpmath at 40 decimal digits and rounded to 17
significant digits. Run from this directory:

    python3 generate.py
"""
import datetime

import mpmath as mp

mp.mp.dps = 40
GRID = 200


def airy_reference():
    ai, bi = mp.airyai, mp.airybi
    a1, b1 = ai(1), bi(1)
    c4 = mp.power(3, mp.mpf(5) / 6) * mp.gamma(mp.mpf(2) / 3) ** 2 / (
        3 * a1**2 + b1**2 - 2 * mp.sqrt(3) * a1 * b1
    )
    c1 = -3 * a1 * b1 * c4
    c2 = (3 * a1**2 + b1**2) * c4
    c3 = -a1 * b1 * c4
    return lambda x: c1 * ai(x) ** 2 + c2 * ai(x) * bi(x) + c3 * bi(x) ** 2


def bessel_reference():
    q = mp.mpf(1) / 4
    j, y = mp.besselj, mp.bessely
    return lambda x: mp.sqrt(x + 2) * (j(q, (x + 2) ** 2 / 2) + y(q, (x + 2) ** 2 / 2))


def bessel_boundary():
    q = mp.mpf(1) / 4
    j, y = mp.besselj, mp.bessely
    a0 = mp.sqrt(2) * (j(q, 2) + y(q, 2))
    a1 = 2 * mp.sqrt(2) * (j(-3 * q, 2) + y(-3 * q, 2))
    return a0, a1


def fmt(v):
    return mp.nstr(v, 17, min_fixed=1, max_fixed=0, strip_zeros=False)


def write(path, header, func):
    with open(path, "w", newline="\n") as out:
        for line in header:
            out.write("# " + line + "\n")
        for i in range(GRID + 1):
            x = mp.mpf(i) / GRID
            out.write("%.6f %s\n" % (i / GRID, fmt(func(x))))


def main():
    today = datetime.date.today().isoformat()
    write(
        "example4.txt",
        [
            "y''' = 4 x y' + 2 y, y(0) = 1, y'(0) = 0, y(1) = 0",
            "y = c1 Ai^2 + c2 Ai Bi + c3 Bi^2 (Airy functions)",
            "oracle: mpmath %s airyai/airybi/gamma at 40 digits" % mp.__version__,
            "generated: %s" % today,
            "left: 1, 0",
            "right: 0",
        ],
        airy_reference(),
    )
    a0, a1 = bessel_boundary()
    write(
        "example5.txt",
        [
            "y'' = -(x + 2)^2 y, y(0) = a0, y'(0) = a1",
            "y = sqrt(x + 2) [J_{1/4}((x + 2)^2 / 2) + Y_{1/4}((x + 2)^2 / 2)]",
            "oracle: mpmath %s besselj/bessely at 40 digits" % mp.__version__,
            "generated: %s" % today,
            "left: %s, %s" % (fmt(a0), fmt(a1)),
            "right:",
        ],
        bessel_reference(),
    )


if __name__ == "__main__":
    main()
