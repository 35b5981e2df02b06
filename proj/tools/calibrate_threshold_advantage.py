#!/usr/bin/env python3
"""Calibrate the constant of the threshold-advantage bound.

For a profile of thresholds t_b with advantages s_b (s = |(s_b)|) the bound
reads

    sum_b p(t_b - s_b) <= C (1 + s^2/t_min^2 (1/ell + p(t_min) t_max^4 / p(t_max)^(3 ell)))

This script evaluates lhs / (bracket with C = 1) over random profiles drawn
like the C++ sampler (thresholds from p_b = (r_b/sqrt(R) + 1/R)/2, floored
at sqrt(ln R)/2; s^2 half uniform, half log-uniform on [1e-4, 1] * 400 ln R)
and over adversarial profiles (uniform norms, advantage concentrated on the
lowest threshold, s^2 swept on a log grid). It prints the supremum per R.

    calibrate_threshold_advantage.py [--profiles N] [--seed S] [--ell L]
"""
import argparse

import numpy as np
from scipy.special import ndtr, ndtri


def tail(t):
    return ndtr(-t)


def inv_tail(p):
    return -ndtri(p)


def unit_ratio(t, s, ell):
    """lhs / bracket for a batch: t, s have shape (batch, R)."""
    lhs = tail(t - s).sum(axis=1)
    tmin, tmax = t.min(axis=1), t.max(axis=1)
    medium = tail(tmin) * tmax**4 / tail(tmax) ** (3 * ell)
    s2 = (s * s).sum(axis=1)
    return lhs / (1 + s2 / tmin**2 * (1 / ell + medium))


def directions(rng, batch, R):
    k = rng.integers(1, R + 1, size=batch)
    x = np.abs(rng.standard_normal((batch, R))) + 1e-12
    order = rng.permuted(np.tile(np.arange(R), (batch, 1)), axis=1)
    keep = np.argsort(order, axis=1) < k[:, None]
    x = np.where(keep, x, 0.0)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def thresholds_from(r, R):
    p = 0.5 * (r / np.sqrt(R) + 1.0 / R)
    return np.maximum(inv_tail(p), 0.5 * np.sqrt(np.log(R)))


def random_profiles(rng, R, batch):
    t = thresholds_from(directions(rng, batch, R), R)
    cap = 400 * np.log(R)
    u = rng.random(batch)
    s2 = np.where(rng.random(batch) < 0.5, cap * u, cap * 1e-4**u)
    s = np.sqrt(s2)[:, None] * directions(rng, batch, R)
    return t, s


def adversarial_profiles(R):
    cap = 400 * np.log(R)
    s2 = cap * np.logspace(-8, 0, 400)
    r = np.full(R, 1 / np.sqrt(R))
    t = np.tile(thresholds_from(r, R), (len(s2), 1))
    out = []
    # Everything on one coordinate, and spread evenly.
    one = np.zeros((len(s2), R))
    one[:, 0] = np.sqrt(s2)
    out.append((t, one))
    out.append((t, np.sqrt(s2 / R)[:, None] * np.ones((1, R))))
    # Lopsided norms: one large vector, the rest equal.
    for big in (0.5, 0.9, 0.99):
        r = np.full(R, np.sqrt((1 - big * big) / (R - 1)))
        r[0] = big
        tt = np.tile(thresholds_from(r, R), (len(s2), 1))
        low = np.zeros((len(s2), R))
        low[:, np.argmin(tt[0])] = np.sqrt(s2)
        out.append((tt, low))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--profiles", type=int, default=200000, help="random profiles per R")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--ell", type=float, default=0.1)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    overall = 0.0
    for R in (4, 8, 16, 32, 64, 128, 256):
        sup_rand = 0.0
        done = 0
        while done < args.profiles:
            batch = min(50000, args.profiles - done)
            t, s = random_profiles(rng, R, batch)
            sup_rand = max(sup_rand, unit_ratio(t, s, args.ell).max())
            done += batch
        sup_adv = max(unit_ratio(t, s, args.ell).max() for t, s in adversarial_profiles(R))
        overall = max(overall, sup_rand, sup_adv)
        print(f"R={R:4d} sup_random={sup_rand:.6f} sup_adversarial={sup_adv:.6f}")
    print(f"overall_sup={overall:.6f}")


if __name__ == "__main__":
    main()
