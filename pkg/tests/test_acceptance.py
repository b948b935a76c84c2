"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines, or
execute this file directly.
"""

import itertools
import json
import os
import subprocess
import sys
import time
from collections import Counter

import numpy as np

from ffgrowth import heis, incidence, matgrp, setalg
from ffgrowth.field import check_subfield_condition, generated_subfield, list_subfields, make_field
from ffgrowth.harness import ExperimentConfig, SplitMix64, generate_set, run_experiment
from ffgrowth.heis import HeisElem
from ffgrowth.setalg import FSet

SEED = 20240611


def verdict(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, detail


def rand_set(rng, ctx, size, nonzero=False):
    pool = list(range(1, ctx.q)) if nonzero else list(range(ctx.q))
    return FSet(ctx, tuple(rng.sample(pool, size)))


# 1 -----------------------------------------------------------------------------

def literal_q(p, A, B, C, D):
    n = 0
    for a1, b1, c1, d1, a2, b2, c2, d2 in itertools.product(A, B, C, D, A, B, C, D):
        n += (a1 * b1 + c1 * d1 - a2 * b2 - c2 * d2) % p == 0
    return n


def test_c1_q_oracle():
    t0 = time.time()
    rng = SplitMix64(SEED + 1)
    checked = mismatches = literal = 0
    for p in (7, 101):
        ctx = make_field(p)
        for _ in range(110):
            sets = [rand_set(rng, ctx, 1 + rng.below(6)) for _ in range(4)]
            conv = setalg.bilinear_energy_Q(*sets).value
            brute = setalg.bilinear_energy_Q(*sets, method="brute_force").value
            mismatches += conv != brute
            if all(len(S) <= 3 for S in sets):
                literal += 1
                mismatches += conv != literal_q(p, *sets)
            checked += 1
    dt = time.time() - t0
    verdict(1, checked >= 200 and mismatches == 0 and dt < 60,
            f"{checked} quadruples ({literal} also by literal 8-loop), {mismatches} mismatches, {dt:.1f}s")


# 2 -----------------------------------------------------------------------------

def as_matrix(p, g):
    n = len(g.x)
    M = np.eye(n + 2, dtype=np.int64)
    M[0, 1:n + 1] = g.x
    M[1:n + 1, n + 1] = g.y
    M[0, n + 1] = g.z
    return M


def matrix_product(p, g, h):
    P = as_matrix(p, g) @ as_matrix(p, h) % p
    n = len(g.x)
    return tuple(int(v) for v in P[0, 1:n + 1]), tuple(int(v) for v in P[1:n + 1, n + 1]), int(P[0, n + 1])


def test_c2_heisenberg_law():
    bad = pairs = 0
    F3 = make_field(3)
    for n in (1, 2):
        vecs = list(itertools.product(range(3), repeat=n))
        elems = [HeisElem(F3, x, y, z) for x in vecs for y in vecs for z in range(3)]
        for g in elems:
            for h in elems:
                prod = g * h
                bad += (prod.x, prod.y, prod.z) != matrix_product(3, g, h)
                pairs += 1
    F101 = make_field(101)
    rng = SplitMix64(SEED + 2)
    draw = lambda: HeisElem(F101, (rng.below(101), rng.below(101)), (rng.below(101), rng.below(101)), rng.below(101))
    for _ in range(10_000):
        g, h = draw(), draw()
        prod = g * h
        bad += (prod.x, prod.y, prod.z) != matrix_product(101, g, h)
        pairs += 1
    verdict(2, bad == 0, f"{pairs} pairs checked against matrix multiplication, {bad} mismatches")


# 3 -----------------------------------------------------------------------------

def test_c3_collision_cross_check():
    rng = SplitMix64(SEED + 3)
    inst = bad = 0
    for p in (7, 101):
        ctx = make_field(p)
        for size in range(1, 6):
            cands = [FSet(ctx, tuple(range(1, size + 1))), FSet(ctx, tuple(range(size)))]
            cands += [rand_set(rng, ctx, size) for _ in range(4)]
            for A in cands:
                bad += heis.collision_count_direct(A).N != heis.collision_count_fiber(A).N
                inst += 1
    verdict(3, inst >= 50 and bad == 0, f"{inst} instances, {bad} disagreements between direct and fiber counts")


# 4 -----------------------------------------------------------------------------

def test_c4_certificates():
    t0 = time.time()
    rng = SplitMix64(SEED + 4)
    primes = (7, 11, 13, 31, 101, 401)
    names = ("containment", "cs_sl2", "cs_heis", "bilinear", "thm4")
    fails = Counter()
    inst = 0
    while inst < 500:
        p = primes[rng.below(len(primes))]
        ctx = make_field(p)
        size = 1 + rng.below(min(5, p - 1))
        A = rand_set(rng, ctx, size, nonzero=True)
        R = matgrp.build_R(A)
        prod = matgrp.product_set(R, R)
        K = heis.HeisCube(A, A, None, 2)
        hsize = heis.cube_product_set(K, K).size
        verdicts = (
            matgrp.containment_certificate(A, prod=prod).ok,
            matgrp.cs_lower_bound_certificate(A, prod=prod).ok,
            heis.cs_certificate_heis(A, size=hsize).ok,
            heis.bilinear_image_certificate(A, size=hsize).ok,
            heis.thm4_certificate(A).ok,
        )
        for name, ok in zip(names, verdicts):
            if not ok:
                fails[name] += 1
                print(f"  failing input p={p} A={list(A)} certificate={name}")
        inst += 1
    dt = time.time() - t0
    verdict(4, sum(fails.values()) == 0 and dt < 300,
            f"{inst} instances x {len(names)} certificates, failures={dict(fails) or 0}, {dt:.1f}s")


# 5 -----------------------------------------------------------------------------

def test_c5_plunnecke_ruzsa():
    rng = SplitMix64(SEED + 5)
    ctx = make_field(101)
    bad = 0
    for _ in range(1000):
        k = 1 + rng.below(4)
        X, *Bs = [rand_set(rng, ctx, 1 + rng.below(20)) for _ in range(k + 1)]
        rep = setalg.pr_inequality_check(X, Bs)
        if not rep.ok:
            bad += 1
            print(f"  failing input X={list(X)} Bs={[list(B) for B in Bs]}")
    verdict(5, bad == 0, f"1000 instances, {bad} violations")


# 6 -----------------------------------------------------------------------------

def _random_config(rng, p):
    m = 1 + rng.below(200)
    n = m + rng.below(200 - m + 1)
    pts = set()
    while len(pts) < m:
        pts.add((rng.below(p), rng.below(p), rng.below(p)))
    planes = set()
    while len(planes) < n:
        f = (rng.below(p), rng.below(p), rng.below(p), rng.below(p))
        if any(f[:3]):
            planes.add(incidence._canonical(f, p))
    return incidence.PointSet(p, 3, tuple(pts)), incidence.PlaneSet(p, planes)


def _structured_config(rng, p):
    # grid points against planes with coefficients from a small set, so incidences are dense
    while True:
        A = rand_set(rng, make_field(p), 2 + rng.below(3))
        B = rand_set(rng, make_field(p), 2 + rng.below(3))
        P = incidence.PointSet.grid(A, A, B)
        planes = incidence.PlaneSet(p, [(a, b, 1, c) for a in A for b in B for c in setalg.sumset(A, B)])
        if len(P) <= len(planes) <= 200:
            return P, planes


def _q_config(rng, p):
    while True:
        sets = [rand_set(rng, make_field(p), 1 + rng.below(3)) for _ in range(4)]
        cfg = incidence.q_configuration(*sets)
        if len(cfg.points) <= len(cfg.planes) <= 200:
            return cfg.points, cfg.planes


def test_c6_rudnev():
    rng = SplitMix64(SEED + 6)
    bad = inst = 0
    worst = 0.0
    makers = (_random_config, _structured_config, _q_config)
    for i in range(200):
        p = (11, 101)[i % 2]
        P, planes = makers[i % 3](rng, p)
        assert len(P) <= len(planes) <= 200
        rep = incidence.rudnev_bound_report(P, planes)
        worst = max(worst, rep.ratio)
        if not rep.ok:
            bad += 1
            print(f"  violation p={p} |P|={len(P)} |Pi|={len(planes)} I={rep.I} bound={rep.bound:.1f}")
        inst += 1
    verdict(6, bad == 0, f"{inst} configurations, {bad} violations, max I/bound = {worst:.3f}")


# 7 -----------------------------------------------------------------------------

def test_c7_sl2_cross_path():
    rng = SplitMix64(SEED + 7)
    inst = bad = 0
    for p in (7, 11, 13, 101):
        ctx = make_field(p)
        for size in range(1, min(8, p - 1) + 1):
            for A in (FSet(ctx, tuple(range(1, size + 1))), rand_set(rng, ctx, size, nonzero=True)):
                bad += not matgrp.cross_path_identity(A).ok
                inst += 1
    verdict(7, bad == 0, f"{inst} sets with 0 not in A and |A| <= 8, {bad} identity failures")


# 8 -----------------------------------------------------------------------------

def test_c8_measurement():
    t0 = time.time()
    cfg = ExperimentConfig(experiment="sl2_product", p=401, seed=SEED, sizes=(6, 8, 10, 12),
                           families=("interval", "uniform_random"), trials=1)
    results, fits = run_experiment(cfg)
    certs_ok = all(not r.failed_certificates() for r in results)
    slopes = {f.family: f.slope for f in fits if f.quantity == "RR_size"}
    ref = fits[0].reference
    dt = time.time() - t0
    ok = certs_ok and all(s is not None and s >= 3.0 for s in slopes.values()) and len(slopes) == 2 and dt < 600
    shown = ", ".join(f"{k}={v:.3f}" for k, v in slopes.items())
    verdict(8, ok, f"|R(A)R(A)| slopes {shown} (reference {ref:.4f}, reported only), {dt:.1f}s")


# 9 -----------------------------------------------------------------------------

def test_c9_determinism(tmp_path):
    configs = [
        {"experiment": "sl2_product", "seed": 3, "field": {"p": 101},
         "sets": {"families": ["uniform_random", "geometric_progression"], "sizes": [2, 3, 4], "trials": 2}},
        {"experiment": "heis2_zero", "seed": 9, "field": {"p": 101},
         "sets": {"families": ["uniform_random"], "sizes": [2, 3], "trials": 2}},
        {"experiment": "energies", "seed": 1, "field": {"p": 3, "n": 4},
         "sets": {"families": ["uniform_random", "subfield_coset"], "sizes": [8], "trials": 3}},
        {"experiment": "inequalities", "seed": 17, "field": {"p": 101},
         "sets": {"families": ["uniform_random"], "sizes": [5, 9], "trials": 4}},
    ]
    same = 0
    total = 0
    for i, cfg in enumerate(configs):
        path = tmp_path / f"c{i}.json"
        path.write_text(json.dumps(cfg))
        for fmt in ("csv", "json"):
            outs = []
            for run, hashseed in enumerate(("0", "12345")):
                out = tmp_path / f"o{i}{fmt}{run}"
                env = {**os.environ, "PYTHONHASHSEED": hashseed}
                subprocess.run([sys.executable, "-m", "ffgrowth.cli", "run", "--config", str(path),
                                "--format", fmt, "--out", str(out)], check=True, env=env)
                outs.append(b"".join(f.read_bytes() for f in sorted(out.iterdir())))
            same += outs[0] == outs[1] and len(outs[0]) > 0
            total += 1
    verdict(9, same == total, f"{same}/{total} config/format pairs byte-identical across separate processes")


# 10 ----------------------------------------------------------------------------

def frobenius_closure(F, B):
    """Smallest d | n with b^(p^d) = b on B, and that subfield as a fixed-point set."""
    for d in (1, 2, 4):
        if all(F.pow(b, F.p**d) == b for b in B):
            return d, {a for a in range(F.q) if F.pow(a, F.p**d) == a}


def condition_by_scan(F, A):
    for sub in list_subfields(F)[:-1]:
        for lam in range(1, F.q):
            coset = {F.mul(lam, f) for f in sub.elements}
            if len(A & coset) ** 2 > sub.size:
                return False
    return True


def test_c10_subfields():
    F = make_field(3, 4)
    degrees = [s.degree for s in list_subfields(F)]
    rng = SplitMix64(SEED + 10)
    gen_ok = planted_bad = planted_good = 0
    f9 = next(s for s in list_subfields(F) if s.degree == 2).elements
    for _ in range(20):
        B = rng.sample(list(range(F.q)), 2)
        d, fixed = frobenius_closure(F, B)
        g = generated_subfield(FSet(F, tuple(B)))
        gen_ok += g.degree == d and set(g.elements) == fixed

        lam = 1 + rng.below(F.q - 1)
        coset = [F.mul(lam, f) for f in f9 if f]
        A = FSet(F, tuple(rng.sample(coset, 4 + rng.below(5))))
        planted_bad += not check_subfield_condition(A).ok

        # grow a set one element at a time while the exhaustive scan still accepts it
        G = set()
        for a in rng.sample(list(range(1, F.q)), F.q - 1):
            if len(G) == 6:
                break
            if condition_by_scan(F, G | {a}):
                G.add(a)
        planted_good += len(G) == 6 and check_subfield_condition(FSet(F, tuple(G))).ok
    ok = degrees == [1, 2, 4] and gen_ok == 20 and planted_bad == 20 and planted_good == 20
    verdict(10, ok, f"degrees {degrees}; generated subfield {gen_ok}/20; "
                    f"planted coset flagged {planted_bad}/20; planted generic set passes {planted_good}/20")


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main([__file__, "-v", "-s"]))
