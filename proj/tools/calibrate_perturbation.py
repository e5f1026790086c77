#!/usr/bin/env python3
"""Brute-force calibration of E[Re Tr exp(i eps H) / n] for the perturbation
distribution (traceless Hermitian H, off-diagonal E|H_ij|^2 = 1/n).

Writes CSV rows: epsilon,mean,std_error,samples. Independent of the C++ code.
"""
import argparse
import sys

import numpy as np


def sample_trace(n, eps, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (g + g.conj().T) / np.sqrt(n)
    h -= np.eye(n) * (np.trace(h).real / n)
    w = np.linalg.eigvalsh(h)
    return np.cos(eps * w).sum() / n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = sys.stdout
    out.write("epsilon,mean,std_error,samples\n")
    for k in range(11):
        eps = 0.05 * k
        xs = np.array([sample_trace(args.n, eps, rng) for _ in range(args.samples)])
        se = xs.std(ddof=1) / np.sqrt(len(xs)) if eps > 0 else 0.0
        out.write(f"{eps:.2f},{xs.mean():.12f},{se:.3e},{len(xs)}\n")


if __name__ == "__main__":
    main()
