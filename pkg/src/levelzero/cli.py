"""Command-line interface: ``levelzero <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

from .alcove import Building
from .checks import run_checks
from .classes import REGIMES, ClassContext, ClassLabel, is_elliptic
from .errors import ConfigError, InvalidEll, InvalidPrimePower, InvalidSize, InvalidThreads, LevelZeroError
from .labels import alpha_index, h_map, kottwitz_group, pi0
from .lattice import is_prime_power
from .rootdatum import FAMILIES, GroupSpec, RootDatum, build_classical
from .weyl import WeylGroup

SCHEMA = "levelzero/1"
COMMANDS = ("datum", "classes", "decompose", "hmap", "kottwitz", "check")
CONFIG_KEYS = ("group", "n", "q", "p", "ell", "regime", "order_bound", "base_vertex", "datum_file")


@dataclass
class JobConfig:
    group: str = "Sp"
    n: int = 2
    q: int | None = None
    p: int | None = None
    ell: int | None = None
    regime: str = "ql"
    order_bound: int | None = None
    base_vertex: int | None = None
    datum_file: str | None = None
    threads: int = 1

    def validate(self, needs_q: bool) -> None:
        if self.group not in FAMILIES:
            GroupSpec(self.group, self.n)
        if self.group != "custom" and self.n < 1:
            raise InvalidSize("--n must be at least 1")
        if self.regime not in REGIMES:
            raise ConfigError(f"--regime must be one of {', '.join(REGIMES)}")
        if self.p is not None and is_prime_power(self.p) != self.p:
            raise InvalidPrimePower(f"p = {self.p} is not prime")
        if needs_q and self.q is None:
            raise InvalidPrimePower("--q is required for this command")
        if self.q is not None:
            pq = is_prime_power(self.q)
            if pq is None:
                raise InvalidPrimePower(f"q = {self.q} is not a prime power")
            if self.p is not None and pq != self.p:
                raise InvalidPrimePower(f"q = {self.q} is not a power of p = {self.p}")
        if self.ell is not None:
            if is_prime_power(self.ell) != self.ell:
                raise InvalidEll(f"ell = {self.ell} is not prime")
            if self.q is not None and self.ell == is_prime_power(self.q):
                raise InvalidEll("ell must differ from p")
        if self.regime == "zl" and self.ell is None:
            raise InvalidEll("--regime zl needs --ell")

    def public(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        d.pop("datum_file")
        return d


def _threads() -> int:
    raw = os.environ.get("LEVELZERO_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        v = int(raw)
    except ValueError:
        raise InvalidThreads(f"LEVELZERO_THREADS must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise InvalidThreads(f"LEVELZERO_THREADS must be a positive integer, got {raw!r}")
    return v


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=FAMILIES)
    common.add_argument("--n", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--p", type=int)
    common.add_argument("--ell", type=int)
    common.add_argument("--regime", choices=REGIMES)
    common.add_argument("--order-bound", dest="order_bound", type=int)
    common.add_argument("--base-vertex", dest="base_vertex", type=int)
    common.add_argument("--datum-file", dest="datum_file", help="JSON root datum for --group custom")
    common.add_argument("--config", help="JSON file with the same keys as the flags")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="levelzero", description="Level-zero class, system and label tables for unramified groups.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "datum": "print the root datum and its dual",
        "classes": "geometric and rational semisimple classes of the dual group",
        "decompose": "minimal coherent systems with their labels",
        "hmap": "kernel and fiber tables of h for every label",
        "kottwitz": "the Kottwitz group",
        "check": "run the invariant suite",
    }
    for c in COMMANDS:
        sub.add_parser(c, parents=[common], help=helps[c])
    return p


def load_config(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - set(CONFIG_KEYS) - {"order-bound", "base-vertex", "datum-file"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            key = k.replace("-", "_")
            if key in ("group", "regime", "datum_file"):
                if not isinstance(v, str):
                    raise ConfigError(f"config key {k} must be a string")
            elif v is not None and (not isinstance(v, int) or isinstance(v, bool)):
                raise ConfigError(f"config key {k} must be an integer")
            setattr(cfg, key, v)
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    cfg.threads = _threads()
    return cfg


def _datum(cfg: JobConfig) -> RootDatum:
    if cfg.group == "custom":
        if not cfg.datum_file:
            raise ConfigError("--group custom needs --datum-file")
        try:
            with open(cfg.datum_file, encoding="utf-8") as fh:
                rd = RootDatum.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read datum file: {exc}") from exc
        return build_classical(GroupSpec("custom", rd.rank, rd))
    return build_classical(GroupSpec(cfg.group, cfg.n))


def _ctx(cfg: JobConfig, rd: RootDatum) -> ClassContext:
    return ClassContext(rd, cfg.q, cfg.order_bound, cfg.regime, cfg.ell)


def _label_json(ctx: ClassContext, lab: ClassLabel) -> dict:
    return {"s": lab.s_strings(), "w": list(ctx.W.words[lab.w])}


def _fmt_label(ctx: ClassContext, lab: ClassLabel) -> str:
    word = "".join(f"s{i + 1}" for i in ctx.W.words[lab.w]) or "1"
    return f"s=({', '.join(lab.s_strings())}) w={word}"


def _coords(c: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in c) + ")"


# -- commands ----------------------------------------------------------------


def cmd_datum(cfg: JobConfig):
    rd = _datum(cfg)
    W = WeylGroup(rd)
    data = {
        "datum": rd.to_json_obj(),
        "dual": rd.dual().to_json_obj(),
        "weyl_order": len(W),
        "twisted_classes": len(W.twisted_classes()),
        "kottwitz": list(kottwitz_group(rd).invariant_factors),
    }
    lines = [
        f"group {rd.name}: rank {rd.rank}, {rd.nroots} roots, |W| = {len(W)}",
        f"simple roots: {[list(r) for r in rd.simple_roots]}",
        f"simple coroots: {[list(r) for r in rd.simple_coroots]}",
        f"theta: {[list(r) for r in rd.theta]}",
        f"twisted classes in W: {data['twisted_classes']}",
        f"Kottwitz group: {kottwitz_group(rd).describe()}",
    ]
    return data, lines, 0


def cmd_kottwitz(cfg: JobConfig):
    rd = _datum(cfg)
    K = kottwitz_group(rd)
    data = {"invariant_factors": list(K.invariant_factors), "order": K.order, "group_name": K.describe()}
    return data, [f"Kottwitz group of {rd.name}: {K.describe()} (order {K.order})"], 0


def cmd_classes(cfg: JobConfig):
    rd = _datum(cfg)
    ctx = _ctx(cfg, rd)
    geo = []
    lines = [f"{rd.name}, q = {ctx.q}, N = {ctx.N}, regime {ctx.regime}"]
    total = 0
    for s0, labs in ctx.classes().items():
        entries = []
        for lab in labs:
            p0 = pi0(ctx, lab)
            e = _label_json(ctx, lab)
            e.update({"pi0_order": p0.order, "elliptic": ctx.is_elliptic(lab)})
            entries.append(e)
        total += len(labs)
        geo.append({"s": [str(c) for c in s0.coords], "rational_classes": entries})
        lines.append(f"geometric ({', '.join(str(c) for c in s0.coords)}): {len(labs)} rational")
        for lab, e in zip(labs, entries):
            lines.append(f"    {_fmt_label(ctx, lab)}  pi0={e['pi0_order']}  elliptic={e['elliptic']}")
    lines.append(f"total: {len(geo)} geometric, {total} rational")
    data = {"geometric_classes": geo, "geometric_count": len(geo), "rational_count": total}
    return data, lines, 0


def _hmap_entry(ctx: ClassContext, lab: ClassLabel) -> dict:
    hm = h_map(ctx, lab)
    entry = {
        "label": _label_json(ctx, lab),
        "pi0_order": hm.pi0.order,
        "pi0_fixed_order": hm.pi0.fixed_order,
        "domain_invariant_factors": list(hm.domain.invariant_factors),
        "target_invariant_factors": list(hm.target.invariant_factors),
        "kernel_size": hm.kernel_size,
        "fibers": {_coords(k): v for k, v in sorted(hm.fiber_sizes().items())},
    }
    if not hm.target.is_trivial:
        entry["nontrivial_omega"] = "conjectural count outside the quasi-split form"
    return entry


def cmd_hmap(cfg: JobConfig):
    rd = _datum(cfg)
    ctx = _ctx(cfg, rd)
    labs = ctx.rational_classes()
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            entries = list(ex.map(lambda lab: _hmap_entry(ctx, lab), labs))
    else:
        entries = [_hmap_entry(ctx, lab) for lab in labs]
    lines = [f"{rd.name}, q = {ctx.q}, N = {ctx.N}: Kottwitz group {kottwitz_group(rd).describe()}"]
    for lab, e in zip(labs, entries):
        fib = " ".join(f"{k}:{v}" for k, v in e["fibers"].items())
        lines.append(
            f"{_fmt_label(ctx, lab)}  pi0={e['pi0_order']}  domain={e['domain_invariant_factors']}  |ker|={e['kernel_size']}  fibers {fib}"
        )
    return {"labels": entries}, lines, 0


def cmd_decompose(cfg: JobConfig):
    rd = _datum(cfg)
    ctx = _ctx(cfg, rd)
    b = Building(ctx)
    base = b.base_vertex(cfg.base_vertex)
    cache: dict = {}
    systems = []
    per_label: dict = {}
    for k, sysm in enumerate(b.minimal_systems()):
        locs = []
        vals = set()
        for f, cs in sysm.items():
            for c in sorted(cs):
                g, a, hm = alpha_index(b, f, c, base.id, cache)
                vals.add((g, a))
                locs.append({"facet": f, "label": _label_json(ctx, c), "elliptic": _elliptic_local(b, f, c)})
        (g, a), = vals
        hm = cache[g]
        systems.append({
            "id": k,
            "facets": sorted(sysm),
            "local_labels": locs,
            "global_label": _label_json(ctx, g),
            "alpha": {"orbit": list(a), "omega": list(hm.image[a]) if a in hm.image else []},
        })
        per_label.setdefault(g, []).append(k)
    facets = [
        {"id": f.id, "nodes": [list(t) for t in f.nodes], "dim": f.dim,
         "barycenter": [str(x) for x in f.barycenter], "hyperspecial": f.hyperspecial,
         "local_weyl_order": len(b.scopes[f.id])}
        for f in b.facets
    ]
    summary = []
    labs = ctx.rational_classes()
    for lab in labs:
        hm = cache.get(lab) or h_map(ctx, lab)
        summary.append({"label": _label_json(ctx, lab), "systems": len(per_label.get(lab, [])),
                        "kernel_size": hm.kernel_size, "system_ids": per_label.get(lab, [])})
    data = {"base_vertex": base.id, "facets": facets, "systems": systems, "per_label": summary,
            "system_count": len(systems)}
    lines = [f"{rd.name}, q = {ctx.q}, N = {ctx.N}: {len(b.facets)} facets, {len(systems)} minimal systems, base vertex {base.id}"]
    for lab, row in zip(labs, summary):
        lines.append(f"{_fmt_label(ctx, lab)}: {row['systems']} systems, |ker h| = {row['kernel_size']}")
    for sysm in systems:
        locs = ", ".join(f"F{x['facet']}:[{','.join(x['label']['s'])}|{''.join(map(str, x['label']['w'])) or 'e'}]" for x in sysm["local_labels"])
        lines.append(f"  system {sysm['id']} alpha={_coords(sysm['alpha']['orbit'])}: {locs}")
    return data, lines, 0


def _elliptic_local(b: Building, f: int, c: ClassLabel) -> bool:
    return is_elliptic(b.W, c, b.scopes[f])


def cmd_check(cfg: JobConfig):
    rd = _datum(cfg)
    ctx = _ctx(cfg, rd)
    results = run_checks(ctx, cfg.base_vertex)
    ok = all(r.passed for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
    lines.append("all invariants hold" if ok else "invariant failures")
    return {"checks": [r.to_json() for r in results], "passed": ok}, lines, 0 if ok else 1


HANDLERS = {
    "datum": (cmd_datum, False),
    "classes": (cmd_classes, True),
    "decompose": (cmd_decompose, True),
    "hmap": (cmd_hmap, True),
    "kottwitz": (cmd_kottwitz, False),
    "check": (cmd_check, True),
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args)
        fn, needs_q = HANDLERS[args.command]
        cfg.validate(needs_q)
        data, lines, code = fn(cfg)
    except LevelZeroError as exc:
        if args.json:
            payload = {"schema": SCHEMA, "command": args.command, "error": type(exc).__name__,
                       "exit_code": exc.exit_code, "message": str(exc)}
            out.write(json.dumps(payload, sort_keys=True) + "\n")
        else:
            print(f"levelzero: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        payload = {"schema": SCHEMA, "command": args.command, "config": cfg.public()}
        payload.update(data)
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
