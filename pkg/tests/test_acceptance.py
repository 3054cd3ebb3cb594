"""The ten acceptance criteria, one test each.

Each test prints a ``criterion N: PASS|FAIL`` line; pytest repeats them in its
terminal summary.
"""

import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import gcd

from levelzero.alcove import Building
from levelzero.classes import (
    ClassContext,
    ClassLabel,
    TorusPair,
    frobenius_matrix,
    s_to_theta,
    theta_to_s,
    trace_map,
    wf_minus_one,
)
from levelzero.classical import (
    SignedPermutation,
    compose_tags,
    factor_tags,
    minus_one_set,
    parity_f,
    preserves,
    rational_tag,
    sign_pattern,
    unip_cuspidal_exists,
)
from levelzero.labels import alpha_index, canonical_inertial_form, h_map, kottwitz_group, levi_embed_label, levi_scope
from levelzero.lattice import QmodZVector, cokernel_group, mat_mul, mat_vec
from levelzero.rootdatum import build, rank_le_3_data
from levelzero.weyl import WeylGroup

HALF = ["1/2", "1/2"]


def _decompose_json(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "levelzero.cli", "decompose", *args, "--json"],
        capture_output=True,
        check=True,
    )
    return proc.stdout


def _golden(q):
    doc = json.loads(_decompose_json("--group", "Sp", "--n", "2", "--q", str(q)))
    facets = {f["id"]: f for f in doc["facets"]}
    y = next(i for i, f in facets.items() if f["dim"] == 0 and not f["hyperspecial"])
    xs = sorted(i for i, f in facets.items() if f["dim"] == 0 and f["hyperspecial"])
    entry = next(p for p in doc["per_label"] if p["label"] == {"s": HALF, "w": []})
    systems = [doc["systems"][i] for i in entry["system_ids"]]
    problems = []
    if len(systems) != 2:
        problems.append(f"q={q}: {len(systems)} systems")
    y_locals = {
        (json.dumps(l["label"], sort_keys=True), l["elliptic"])
        for s in systems
        for l in s["local_labels"]
        if l["facet"] == y
    }
    if sorted(e for _, e in y_locals) != [False, True]:
        problems.append(f"q={q}: y carries {sorted(y_locals)}")
    full = [s for s in systems if {*xs, y} <= set(s["facets"])]
    lone = [
        s for s in systems
        if s["facets"] == [y] and len(s["local_labels"]) == 1 and s["local_labels"][0]["elliptic"]
    ]
    if len(full) != 1 or len(lone) != 1 or full[0] is lone[0]:
        problems.append(f"q={q}: system shapes {[s['facets'] for s in systems]}")
    return problems


def test_criterion_1_golden_example(criterion):
    t0 = time.perf_counter()
    problems = _golden(3) + _golden(5)
    dt = time.perf_counter() - t0
    if dt >= 10:
        problems.append(f"runtime {dt:.1f}s")
    criterion(1, not problems, "; ".join(problems) or f"Sp4 q=3,5 match in {dt:.2f}s")


def _systems_per_label(ctx):
    b = Building(ctx)
    counts: dict = {}
    for sysm in b.minimal_systems():
        f = min(sysm)
        g = alpha_index(b, f, min(sysm[f]))[0]
        counts[g] = counts.get(g, 0) + 1
    return counts


def test_criterion_2_kernel_matches_systems(criterion):
    t0 = time.perf_counter()
    cases = [(build("Sp", 2), N) for N in (1, 2, 4, 8)] + [(build("SL", 2), None), (build("SOodd", 2), None)]
    bad, total = [], 0
    for rd, N in cases:
        ctx = ClassContext(rd, 3, N=N)
        counts = _systems_per_label(ctx)
        for lab in ctx.rational_classes():
            total += 1
            k = h_map(ctx, lab).kernel_size
            if counts.get(lab, 0) != k:
                bad.append(f"{rd.name} N={ctx.N} s={lab.s_strings()}: {counts.get(lab, 0)} vs {k}")
        if set(counts) - set(ctx.rational_classes()):
            bad.append(f"{rd.name}: systems with labels outside the class list")
    dt = time.perf_counter() - t0
    if dt >= 60:
        bad.append(f"runtime {dt:.1f}s")
    criterion(2, not bad, "; ".join(bad[:3]) or f"{total} labels agree in {dt:.2f}s")


def test_criterion_3_trivial_parameter(criterion):
    ctx = ClassContext(build("Sp", 2), 3)
    lab = ctx.canonical_label(ctx.qmodz([0, 0]), 0)
    k = h_map(ctx, lab).kernel_size
    criterion(3, k == 1, f"|ker h| = {k}")


def test_criterion_4_kottwitz_sizes(criterion):
    expected = {("Sp", n): 1 for n in range(1, 5)}
    expected.update({("SOeven_split", n): 2 for n in range(2, 5)})
    expected.update({("PGL", n): n for n in range(1, 5)})
    expected.update({("SL", n): 1 for n in range(1, 5)})
    got = {k: kottwitz_group(build(*k)).order for k in expected}
    bad = [f"{f}{n}: {got[(f, n)]}" for (f, n), v in expected.items() if got[(f, n)] != v]
    criterion(4, not bad, ", ".join(bad) or f"{len(expected)} groups")


def _contains(big, small):
    return all(c in big.get(f, ()) for f, cs in small.items() for c in cs)


def test_criterion_5_partition_and_closure(criterion):
    t0 = time.perf_counter()
    rng = random.Random(20240)
    bad = []
    for family, n in (("Sp", 2), ("SL", 2), ("Sp", 3)):
        rd = build(family, n)
        W = WeylGroup(rd)
        for N in (2, 4, 5, 7, 8):
            b = Building(ClassContext(rd, 3, N=N, W=W))
            systems = b.minimal_systems()
            seen = []
            for sysm in systems:
                ok, viol = b.coherence_check(sysm)
                if not ok:
                    bad.append(f"{rd.name} N={N}: incoherent system {viol[:1]}")
                seen += [(f, c) for f, cs in sysm.items() for c in cs]
            if len(seen) != len(set(seen)) or set(seen) != set(b.universe):
                bad.append(f"{rd.name} N={N}: systems do not partition the universe")
        b = Building(ClassContext(rd, 3, N=8, W=W))
        universe = b.universe
        for _ in range(200):
            picks = rng.sample(universe, rng.randint(1, min(3, len(universe))))
            extra = rng.sample(universe, rng.randint(0, min(2, len(universe))))
            seed, seed2 = {}, {}
            for f, c in picks:
                seed.setdefault(f, set()).add(c)
                seed2.setdefault(f, set()).add(c)
            for f, c in extra:
                seed2.setdefault(f, set()).add(c)
            cl = b.coherent_closure(seed)
            if not _contains(cl, seed):
                bad.append(f"{rd.name}: closure not extensive")
            if b.coherent_closure(cl) != cl:
                bad.append(f"{rd.name}: closure not idempotent")
            if not _contains(b.coherent_closure(seed2), cl):
                bad.append(f"{rd.name}: closure not monotone")
            if not b.coherence_check(cl)[0]:
                bad.append(f"{rd.name}: closure not coherent")
    dt = time.perf_counter() - t0
    if dt >= 300:
        bad.append(f"runtime {dt:.1f}s")
    criterion(5, not bad, "; ".join(bad[:3]) or f"Sp4, SL2, Sp6 in {dt:.1f}s")


def test_criterion_6_oracle_equivalence(criterion):
    bad, runs = [], 0
    for rd in rank_le_3_data():
        W = WeylGroup(rd)
        for q in (2, 3):
            for N in range(1, 13):
                if gcd(N, q) != 1:
                    continue
                ctx = ClassContext(rd, q, N=N, W=W)
                runs += 1
                if ctx.brute_force_counts() != ctx.canonical_counts():
                    bad.append(f"{rd.name} q={q} N={N}")
    criterion(6, not bad, ", ".join(bad[:5]) or f"{runs} (datum, q, N) runs agree")


def test_criterion_7_duality_and_trace(criterion):
    rng = random.Random(7)
    data = [(rd, WeylGroup(rd)) for rd in rank_le_3_data()]
    bad = []
    for _ in range(500):
        rd, W = rng.choice(data)
        q = rng.choice((2, 3, 4, 5, 7, 8, 9))
        w = rng.randrange(len(W))
        G = cokernel_group(wf_minus_one(W, w, q))
        c = tuple(rng.randrange(d) for d in G.invariant_factors)
        s = theta_to_s(W, TorusPair(w, c), q)
        if s_to_theta(W, w, s, q) != TorusPair(w, c):
            bad.append(f"{rd.name} q={q} w={w} c={c}")
    trace_runs = 0
    for rd, W in data:
        if rd.rank > 2:
            continue
        for q in (2, 3, 4):
            for w in range(len(W)):
                F = mat_mul(W.elements[w], frobenius_matrix(rd, q))
                G1 = cokernel_group(wf_minus_one(W, w, q))
                for m in (1, 2, 3):
                    images, Gm = set(), None
                    for c in G1.elements():
                        img, Gm = trace_map(F, G1.lift(c), m)
                        images.add(img)
                    trace_runs += 1
                    if Gm is None:
                        continue
                    fixed = {e for e in Gm.elements() if Gm.coords(mat_vec(F, Gm.lift(e))) == e}
                    if len(images) != G1.order or images != fixed:
                        bad.append(f"trace {rd.name} q={q} w={w} m={m}")
    criterion(7, not bad, "; ".join(bad[:3]) or f"500 round trips, {trace_runs} trace cases")


def _parity_invariances(rd):
    W = WeylGroup(rd)
    n = rd.rank
    bad = 0
    mats = [SignedPermutation.from_matrix(m) for m in W.elements]
    for bits in itertools.product((0, 1), repeat=n):
        s = QmodZVector(tuple(Fraction(b, 2) for b in bits))
        pat = sign_pattern(s)
        idx = minus_one_set(pat)
        conn = W.global_scope.conn(s)
        for w in range(len(W)):
            f = parity_f(pat, mats[w])
            bad += sum(parity_f(pat, mats[W.mul(h, w)]) != f for h in conn)
            if not preserves(mats[w], idx):
                continue
            for u in range(len(W)):
                w2 = W.mul(W.mul(u, w), W.inv(u))
                bad += parity_f(sign_pattern(W.act_s(u, s)), mats[w2]) != f
    return bad


def test_criterion_8_parity_invariances(criterion):
    bad = []
    for family, n, name in (("Sp", 2, "B2"), ("Sp", 3, "B3"), ("SOeven_split", 3, "D3")):
        k = _parity_invariances(build(family, n))
        if k:
            bad.append(f"{name}: {k} failures")
    ctx = ClassContext(build("Sp", 2), 3)
    b = Building(ctx)
    y = next(f.id for f in b.vertices if not f.hyperspecial)
    checked = 0
    for sysm in b.minimal_systems():
        for c in sysm.get(y, ()):
            pat = sign_pattern(c.s)
            if None in pat:
                continue
            g = alpha_index(b, y, c)[0]
            local = factor_tags(pat, ctx.W.elements[c.w], [[0], [1]])
            checked += 1
            if compose_tags(*local) != rational_tag(ctx, g):
                bad.append(f"y-class s={c.s_strings()} w={c.w}")
    if not checked:
        bad.append("no sign-pattern classes at y")
    table = {2 * m * m: ("split" if m % 2 == 0 else "nonsplit") for m in range(0, 6)}
    for N in range(51):
        for form in ("split", "nonsplit"):
            if unip_cuspidal_exists(N, form) != (table.get(N) == form):
                bad.append(f"unip N={N} {form}")
    criterion(8, not bad, "; ".join(bad[:3]) or f"B2, B3, D3 exhaustive; {checked} y-classes; N <= 50")


def test_criterion_9_levi_compatibility(criterion):
    rd = build("Sp", 2)
    ctx = ClassContext(rd, 3)
    W = ctx.W
    bad, checked = [], 0
    for subset in ([0], [1]):
        levi = rd.levi(subset)
        M = levi_scope(W, levi)
        for s0, labs in ctx.classes(M).items():
            for lab in labs:
                checked += 1
                g = levi_embed_label(ctx, lab)
                if ctx.geometric_class(g) != ctx.geometric_class(ctx.canonical_label(s0, lab.w)):
                    bad.append(f"{subset} geometric {lab}")
                if ctx.geometric_class(g) != ctx.scope.orbit_min(ctx.geometric_class(lab, M))[0]:
                    bad.append(f"{subset} geometric orbit {lab}")
        for w in M.elems:
            for s in ctx.fixed_points(w):
                m = canonical_inertial_form(ctx, s, w, M)
                if levi_embed_label(ctx, m) != canonical_inertial_form(ctx, s, w):
                    bad.append(f"{subset} inertial s={s.coords} w={w}")
    criterion(9, not bad and checked > 0, "; ".join(bad[:3]) or f"{checked} Levi labels, both Levis")


def test_criterion_10_determinism(criterion):
    a = _decompose_json("--group", "Sp", "--n", "2", "--q", "3")
    b = _decompose_json("--group", "Sp", "--n", "2", "--q", "3")
    criterion(10, a == b and len(a) > 0, f"{len(a)} bytes, identical={a == b}")
