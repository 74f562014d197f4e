#!/usr/bin/env python3
"""Derive the frozen constants used by the exp and sin/cos circuits.

Each polynomial is fitted with a Remez exchange in 60-digit arithmetic, then
rounded once to FP32. Output is the coefficient data file (hex bit patterns
plus a CRC-32 checksum) consumed by data/poly_coeffs.txt and mirrored in
include/spikegate/poly_coeffs.hpp.

usage: derive_poly_coeffs.py [out_path]
"""
import struct
import sys
import zlib

import mpmath as mp

mp.mp.dps = 60


def remez(f, basis, a, b, iters=40):
    """Minimax fit of f on [a, b] by sum(c_i * basis_i(x)) (absolute error)."""
    n = len(basis)
    # Chebyshev extrema as the initial reference set (n + 1 points).
    xs = [(a + b) / 2 + (b - a) / 2 * mp.cos(mp.pi * k / n) for k in range(n + 1)]
    xs.sort()
    coeffs = None
    for _ in range(iters):
        rows = [[bf(x) for bf in basis] + [(-1) ** i] for i, x in enumerate(xs)]
        rhs = [f(x) for x in xs]
        sol = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
        coeffs = [sol[i] for i in range(n)]

        def err(x):
            return f(x) - sum(c * bf(x) for c, bf in zip(coeffs, basis))

        # Locate extrema of the error on a dense grid, one per sign run.
        grid = [a + (b - a) * k / 4000 for k in range(4001)]
        vals = [err(x) for x in grid]
        ext = []
        run_best = (grid[0], vals[0])
        for x, v in zip(grid[1:], vals[1:]):
            if mp.sign(v) == mp.sign(run_best[1]):
                if abs(v) > abs(run_best[1]):
                    run_best = (x, v)
            else:
                ext.append(run_best)
                run_best = (x, v)
        ext.append(run_best)
        while len(ext) > n + 1:
            # drop the smallest end extremum
            if abs(ext[0][1]) < abs(ext[-1][1]):
                ext.pop(0)
            else:
                ext.pop()
        if len(ext) < n + 1:
            break
        xs = [x for x, _ in ext]
    return coeffs


def f32_bits(x):
    return struct.unpack("<I", struct.pack("<f", float(x)))[0]


def exp_tail():
    # e^r = 1 + r + r^2 * q(r), q of degree 4 (overall degree 6).
    half_ln2 = mp.log(2) / 2 * mp.mpf("1.02")

    def q(r):
        if abs(r) < mp.mpf("1e-20"):
            return mp.mpf(1) / 2
        return (mp.exp(r) - 1 - r) / (r * r)

    basis = [lambda r, k=k: r ** k for k in range(5)]
    return remez(q, basis, -half_ln2, half_ln2)


def sin_tail():
    # sin r = r + r^3 * s(r^2), s of degree 3 in z = r^2.
    zmax = (mp.pi / 4 * mp.mpf("1.02")) ** 2

    def s(z):
        if z < mp.mpf("1e-30"):
            return -mp.mpf(1) / 6
        r = mp.sqrt(z)
        return (mp.sin(r) - r) / (r * z)

    basis = [lambda z, k=k: z ** k for k in range(4)]
    return remez(s, basis, mp.mpf(0), zmax)


def cos_tail():
    # cos r = 1 - r^2/2 + r^4 * c(r^2), c of degree 3 in z = r^2.
    zmax = (mp.pi / 4 * mp.mpf("1.02")) ** 2

    def c(z):
        if z < mp.mpf("1e-30"):
            return mp.mpf(1) / 24
        r = mp.sqrt(z)
        return (mp.cos(r) - 1 + z / 2) / (z * z)

    basis = [lambda z, k=k: z ** k for k in range(4)]
    return remez(c, basis, mp.mpf(0), zmax)


def half_pi_chunks(n=7, bits=8):
    # Truncated pieces of pi/2 with `bits` significant bits each, so that
    # k * chunk is exact in FP32 for |k| < 2^(24 - bits).
    rest = mp.pi / 2
    chunks = []
    for _ in range(n):
        q = mp.ldexp(1, int(mp.floor(mp.log(rest, 2))) - (bits - 1))
        c = mp.floor(rest / q) * q
        chunks.append(c)
        rest -= c
    return chunks


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "poly_coeffs.txt"
    tables = {
        "exp_q": exp_tail(),
        "sin_s": sin_tail(),
        "cos_c": cos_tail(),
        "half_pi": half_pi_chunks(),
    }
    lines = []
    for name, cs in tables.items():
        for i, c in enumerate(cs):
            lines.append(f"{name} {i} 0x{f32_bits(c):08X}")
    body = "\n".join(lines) + "\n"
    crc = zlib.crc32(body.encode()) & 0xFFFFFFFF
    with open(out, "w") as fh:
        fh.write(body)
        fh.write(f"crc32 0x{crc:08X}\n")
    print(body, end="")
    print(f"crc32 0x{crc:08X}")


if __name__ == "__main__":
    main()
