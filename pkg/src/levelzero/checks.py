"""Invariant suite run by ``levelzero check``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .alcove import Building
from .classes import ClassContext, TorusPair, frobenius_matrix, s_to_theta, theta_to_s, trace_map, wf_minus_one
from .classical import parity_f, preserves, minus_one_set, rational_tag, sign_pattern
from .labels import alpha_index, h_map, kottwitz_group
from .lattice import cokernel_group, det, mat_mul, mat_pow, mat_vec
from .rootdatum import SIGNED_PERMUTATION_FAMILIES
from .weyl import signed_permutation_elements


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _run(name: str, fn: Callable[[], str | None]) -> CheckResult:
    try:
        detail = fn() or ""
        return CheckResult(name, True, detail)
    except AssertionError as exc:
        return CheckResult(name, False, str(exc) or "assertion failed")


def run_checks(ctx: ClassContext, base_vertex: int | None = None, seed: int = 0) -> list[CheckResult]:
    rd, W, q = ctx.datum, ctx.W, ctx.q
    rng = random.Random(seed)
    out: list[CheckResult] = []

    def datum_checks():
        rd.validate()
        rd.dual().validate()
        assert rd.dual().dual() == rd, "dual is not an involution"
        return f"{rd.nroots} roots, rank {rd.rank}"

    def weyl_checks():
        n = len(W)
        for _ in range(min(200, n * n)):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            assert W.mul(W.mul(a, b), c) == W.mul(a, W.mul(b, c)), "associativity"
            assert W.mul(a, W.inv(a)) == 0, "inverse"
        for a in range(n):
            for i, (r, co) in enumerate(zip(rd.roots, rd.coroots)):
                img = W.act(a, r)
                assert img in rd.root_index, "W does not permute roots"
                assert W.act_y(a, co) == rd.coroots[rd.root_index[img]], "coroot mismatch"
        if rd.spec is not None and rd.spec.family in SIGNED_PERMUTATION_FAMILIES:
            assert set(W.elements) == signed_permutation_elements(rd.spec.family, rd.spec.n), "signed permutation model differs"
        parts = W.twisted_classes()
        assert sorted(x for p in parts for x in p) == list(range(n)), "twisted classes do not partition W"
        return f"|W| = {n}, {len(parts)} twisted classes"

    def class_checks():
        total = 0
        for s0, labs in ctx.classes().items():
            for lab in labs:
                ctx.check_label(lab)
                assert ctx.geometric_class(lab) == s0, "geometric class mismatch"
                total += 1
        if ctx.N ** max(W.rank, 1) * len(W) <= 2 * 10**6:
            assert ctx.brute_force_counts() == ctx.canonical_counts(), "brute force disagrees with canonical route"
            return f"{total} rational classes, brute force agrees"
        return f"{total} rational classes (brute force skipped: grid too large)"

    def duality_checks():
        if W.rank == 0:
            return "rank 0"
        for w in range(len(W)):
            G = cokernel_group(wf_minus_one(W, w, q))
            assert G.order == abs(det(wf_minus_one(W, w, q))), "cokernel order"
            for c in list(G.elements())[:50]:
                s = theta_to_s(W, TorusPair(w, c), q)
                assert s_to_theta(W, w, s, q) == TorusPair(w, c), "round trip failed"
        return "theta/s round trip exact"

    def trace_checks():
        if W.rank > 2:
            return "skipped above rank 2"
        for w in range(len(W)):
            F = mat_mul(W.elements[w], frobenius_matrix(rd, q))
            G1 = cokernel_group(wf_minus_one(W, w, q))
            for m in (1, 2, 3):
                images = set()
                Gm = None
                for c in G1.elements():
                    img, Gm = trace_map(F, G1.lift(c), m)
                    images.add(img)
                assert len(images) == G1.order, "trace map not injective"
                fixed = {e for e in Gm.elements() if Gm.coords(mat_vec(F, Gm.lift(e))) == e}
                assert images == fixed, "trace image differs from the fixed subgroup"
        return "injective onto fixed points for m <= 3"

    def kottwitz_check():
        return kottwitz_group(rd).describe()

    def hmap_checks():
        for lab in ctx.rational_classes():
            hm = h_map(ctx, lab)
            assert sum(len(v) for v in hm.fibers.values()) == len(hm.orbits), "fibers do not partition"
            conn = ctx.scope.conn(lab.s)
            for h in conn[:3]:
                other = h_map(ctx, type(lab)(lab.s, W.mul(h, lab.w)))
                assert other.domain.invariant_factors == hm.domain.invariant_factors, "domain depends on the coset representative"
                assert other.kernel_size == hm.kernel_size, "kernel depends on the coset representative"
        return "fibers partition, coset independence"

    out += [_run("root-datum", datum_checks), _run("weyl", weyl_checks), _run("classes", class_checks),
            _run("duality", duality_checks), _run("trace", trace_checks), _run("kottwitz", kottwitz_check),
            _run("h-map", hmap_checks)]

    if rd.is_split:
        def building_checks():
            b = Building(ctx)
            systems = b.minimal_systems()
            seen = set()
            for sysm in systems:
                ok, viol = b.coherence_check(sysm)
                assert ok, f"minimal system not coherent: {viol[:1]}"
                pairs = {(f, c) for f, cs in sysm.items() for c in cs}
                assert not (pairs & seen), "systems overlap"
                seen |= pairs
                f0 = min(sysm)
                c0 = min(sysm[f0])
                assert b.coherent_closure({f0: [c0]}) == sysm, "closure of a singleton differs from its system"
            assert seen == set(b.universe), "systems do not cover the universe"
            per: dict = {}
            cache: dict = {}
            for sysm in systems:
                vals = {alpha_index(b, f, c, base_vertex, cache)[:2] for f, cs in sysm.items() for c in cs}
                assert len(vals) == 1, "global label or alpha not constant on a system"
                g, a = vals.pop()
                per.setdefault(g, []).append(a)
            for lab in ctx.rational_classes():
                hm = cache.get(lab) or h_map(ctx, lab)
                assert sorted(per.get(lab, [])) == sorted(hm.kernel), f"kernel mismatch at {lab.s}"
            return f"{len(systems)} minimal systems match kernels of h"

        out.append(_run("building", building_checks))

    if rd.spec is not None and rd.spec.family in ("Sp", "SOeven_split", "SOeven_quasisplit"):
        def classical_checks():
            G = ctx.scope
            for s0, labs in ctx.classes().items():
                tags = sorted(rational_tag(ctx, lab) for lab in labs)
                if len(labs) == 2:
                    assert tags == [0, 1], "tags do not separate the two rational classes"
                pat = sign_pattern(s0)
                idx = minus_one_set(pat)
                for w in range(len(W)):
                    if not ctx.is_fixed(s0, w):
                        continue
                    for h in G.conn(s0):
                        assert parity_f(pat, W.elements[w]) == parity_f(pat, W.elements[W.mul(h, w)]), "f not W°_s invariant"
                    for u in range(len(W)):
                        w2 = W.mul(W.mul(u, w), W.inv(u))
                        if preserves(W.elements[w], idx):
                            assert parity_f(pat, W.elements[w]) == parity_f(sign_pattern(W.act_s(u, s0)), W.elements[w2]), "f not conjugation invariant"
            return "parity invariances and tag separation"

        out.append(_run("classical", classical_checks))
    return out
