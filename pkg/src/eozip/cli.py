"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 resource
guard.  Errors are written to stderr as one JSON object.  Global options can
also come from ``EOZIP_FORMAT``, ``EOZIP_CACHE_DIR``, ``EOZIP_JOBS``,
``EOZIP_SEED`` and ``EOZIP_MAX_POINTS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, acceptance, brokemper, cache, eo_classes, gf, taut_ring, weyl, zip_oracle
from .poly_core import Polynomial

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
FORMATS = ("text", "json", "csv")


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, module: str | None = None):
        super().__init__(message)
        self.code, self.kind, self.module = code, kind, module

    def to_json(self) -> dict:
        err = {"kind": self.kind, "message": str(self), "exit_code": self.code}
        if self.module:
            err["module"] = self.module
        return {"error": err}


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, "usage", message)


@dataclass(frozen=True)
class Config:
    fmt: str = "text"
    cache_dir: Path = Path("~/.cache/eozip").expanduser()
    jobs: int = 1
    seed: int = 0
    max_points: int = zip_oracle.DEFAULT_MAX_POINTS

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise CliError(EXIT_USAGE, "usage", f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise CliError(EXIT_USAGE, "usage", "--jobs must be at least 1")
        if self.max_points < 1:
            raise CliError(EXIT_USAGE, "usage", "--max-points must be positive")


GLOBALS = {
    "format": ("EOZIP_FORMAT", str, "text"),
    "cache_dir": ("EOZIP_CACHE_DIR", str, None),
    "jobs": ("EOZIP_JOBS", int, 1),
    "seed": ("EOZIP_SEED", int, 0),
    "max_points": ("EOZIP_MAX_POINTS", int, zip_oracle.DEFAULT_MAX_POINTS),
}


def _global_options(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--format", choices=FORMATS, default=s, help="output format (default text)")
    parser.add_argument("--cache-dir", default=s, help="oracle cache directory")
    parser.add_argument("--jobs", type=int, default=s, help="worker processes for the oracle")
    parser.add_argument("--seed", type=int, default=s, help="seed for randomized spot checks")
    parser.add_argument("--max-points", type=int, default=s, help="oracle enumeration limit")


def resolve_config(args: argparse.Namespace, env=os.environ) -> Config:
    vals = {}
    for name, (var, typ, default) in GLOBALS.items():
        if hasattr(args, name):
            vals[name] = getattr(args, name)
        elif var in env:
            try:
                vals[name] = typ(env[var])
            except ValueError:
                raise CliError(EXIT_USAGE, "usage", f"bad value for {var}: {env[var]!r}") from None
        else:
            vals[name] = default
    cache_dir = vals["cache_dir"]
    if cache_dir is None:
        base = env.get("XDG_CACHE_HOME") or os.path.expanduser("~/.cache")
        cache_dir = os.path.join(base, "eozip")
    return Config(vals["format"], Path(cache_dir), vals["jobs"], vals["seed"], vals["max_points"])


def build_parser() -> Parser:
    common = Parser(add_help=False)
    _global_options(common)
    p = Parser(prog="eozip", description="Tautological ring, zip oracle and EO class toolkit.", parents=[common])
    p.add_argument("--version", action="version", version=f"eozip {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    c = add("ring", "presentation, Hilbert function and the identities for u1^2, u_g^2")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--d-max", type=int)

    c = add("hilbert", "graded dimensions of the ring")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--d-max", type=int)

    c = add("weyl", "minimal coset representatives and their strict partitions")
    c.add_argument("--g", type=int, required=True)

    c = add("borel-check", "compare Borel and twisted ideals degree by degree")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--d-max", type=int)

    c = add("prank", "classes of p-rank loci")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--f", type=int)

    c = add("oracle", "enumerate zips over F_p and decompose into orbits")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--r", type=int, help="also derive the degeneration map along an r-dim isotropic subspace")
    c.add_argument("--use-cache", action="store_true", help="read a cached report if present")
    c.add_argument("--refresh", action="store_true", help="recompute and overwrite the cached report")

    c = add("iota", "embedding of strata indices under degeneration")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--p", type=int, nargs="*", help="derive the table over these primes")

    c = add("selftest", "run the acceptance criteria")
    c.add_argument("--profile", choices=acceptance.PROFILES, default="quick")
    c.add_argument("--fixture", choices=("none", "corrupted-relation"), default="none")
    c.add_argument("--criteria", type=int, nargs="*", help="only these criterion numbers")
    return p


# --- helpers ------------------------------------------------------------------


def _genus(g: int, hi: int = taut_ring.MAX_GENUS) -> None:
    if not 1 <= g <= hi:
        raise CliError(EXIT_USAGE, "usage", f"--g must be in 1..{hi}, got {g}")


def _prime(p: int) -> None:
    if not gf.is_prime(p):
        raise CliError(EXIT_USAGE, "usage", f"--p must be prime, got {p}")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


@dataclass
class Result:
    payload: dict
    text: str
    csv: str | None = None
    ok: bool = True
    module: str | None = None


# --- commands -----------------------------------------------------------------


def cmd_ring(args, cfg: Config) -> Result:
    g = args.g
    _genus(g)
    r = taut_ring.ring(g)
    hf = r.hilbert_function(args.d_max)
    w = r.weights
    u1 = r.element(Polynomial.generator(1, w) ** 2).to_text()
    ug = r.element(Polynomial.generator(g, w) ** 2).to_text()
    pres = r.presentation
    forms = {"u1^2": u1, f"u{g}^2": ug}
    payload = {
        "g": g,
        "presentation": pres.to_json(),
        "hilbert": hf,
        "dimension": sum(hf),
        "normal_forms": forms,
    }
    gens = ",".join(f"u{i}" for i in range(1, g + 1))
    lines = [f"Q[{gens}]/I, deg u_i = i", "relations:"]
    lines += [f"  degree {rel.degree()}: {rel.to_text()}" for rel in pres.relations]
    lines += [f"hilbert: {hf}", f"dimension: {sum(hf)}"]
    lines += [f"{k} = {v}" for k, v in forms.items()]
    ok = sum(r.hilbert_function()) == 2**g
    return Result(payload, "\n".join(lines), _csv(["degree", "dim"], enumerate(hf)), ok, "taut_ring")


def cmd_hilbert(args, cfg: Config) -> Result:
    _genus(args.g)
    hf = taut_ring.ring(args.g).hilbert_function(args.d_max)
    payload = {"g": args.g, "hilbert": hf, "dimension": sum(hf)}
    return Result(payload, f"{hf}  (total {sum(hf)})", _csv(["degree", "dim"], enumerate(hf)))


def cmd_weyl(args, cfg: Config) -> Result:
    _genus(args.g)
    table = weyl.min_coset_reps(args.g)
    payload = dict(table.to_json(), poincare=weyl.coefficients(weyl.poincare_WP(args.g)))
    lines = [f"{len(table)} minimal coset representatives (|W| = {weyl.group_order(args.g)})"]
    lines += [f"  {str(r.rep):<24} length {r.length:<3} {r.eo_type}" for r in table.rows]
    lines.append(f"length polynomial coefficients: {payload['poincare']}")
    return Result(payload, "\n".join(lines), table.to_csv())


def cmd_borel_check(args, cfg: Config) -> Result:
    _genus(args.g)
    _prime(args.p)
    cmp = brokemper.ideals_equal_by_degree(args.g, args.p, args.d_max)
    chern = brokemper.chern_map_check(args.g, args.d_max)
    d_max = cmp.degrees[-1].d
    payload = {"g": args.g, "p": args.p, "d_max": d_max, "comparison": cmp.to_json(), "chern_map": chern.to_json()}
    if cmp.ok:
        head = f"equal in all degrees <= {d_max}"
    else:
        head = "differ in degrees " + ", ".join(str(r.d) for r in cmp.degrees if not r.equal)
    lines = [head]
    lines += [f"  d={r.d}: rank {r.rank_borel} / {r.rank_twisted}" for r in cmp.degrees]
    lines.append(f"chern map: image ok={chern.image_matches}, in ideal={chern.in_ideal}, dims {chern.quotient_dims}")
    rows = [(r.d, r.rank_borel, r.rank_twisted, r.rank_joint, r.equal) for r in cmp.degrees]
    csv_text = _csv(["d", "rank_borel", "rank_twisted", "rank_joint", "equal"], rows)
    return Result(payload, "\n".join(lines), csv_text, cmp.ok and chern.ok, "brokemper")


def cmd_prank(args, cfg: Config) -> Result:
    _genus(args.g)
    _prime(args.p)
    if args.f is not None and not 0 <= args.f <= args.g:
        raise CliError(EXIT_USAGE, "usage", f"--f must be in 0..{args.g}")
    if args.f is None:
        table = eo_classes.class_table(args.g, args.p)
    else:
        table = eo_classes.ClassTable(args.g, args.p, [eo_classes.p_rank_locus_class(args.g, args.f, args.p)])
    eff = eo_classes.effectivity_check(args.g, args.p, with_oracle=False)
    payload = dict(table.to_json(), effectivity=eff.to_json())
    lines = []
    for r in table.rows:
        factors = "*".join(str(args.p**i - 1) for i in range(1, r.codimension + 1)) or "1"
        lines.append(f"[V_{r.f}] = {r.cls.to_text()}   coefficient {r.coefficient} = {factors}, codim {r.codimension}")
    lines.append("(u_i is lambda_i)")
    return Result(payload, "\n".join(lines), table.to_csv(), eff.ok, "eo_classes")


def _oracle_payload(g: int, p: int, r: int | None, cfg: Config) -> dict:
    rep = zip_oracle.orbit_decomposition(g, p, cfg.max_points, cfg.jobs)
    payload = rep.to_json()
    if r is not None:
        payload["iota"] = zip_oracle.derive_iota(g, r, p, cfg.max_points).to_json()
    payload["toolkit_version"] = __version__
    return payload


def cmd_oracle(args, cfg: Config) -> Result:
    g, p, r = args.g, args.p, args.r
    _prime(p)
    if r is not None and not 1 <= r <= g - 1:
        raise CliError(EXIT_USAGE, "usage", f"--r must be in 1..g-1, got {r}")
    payload = None
    if args.use_cache and not args.refresh:
        payload = cache.load(cfg.cache_dir, g, p, r)
    if payload is None:
        payload = _oracle_payload(g, p, r, cfg)
        if args.use_cache or args.refresh:
            cache.store(cfg.cache_dir, g, p, payload, r)
            payload = cache.load(cfg.cache_dir, g, p, r)
    lines = [
        f"g={g} p={p}: {payload['zip_count']} zips (closed form {payload['expected_count']}), "
        f"{payload['distinct_invariants']} invariant classes, {payload['orbit_count']} orbits"
    ]
    for c in payload["classes"]:
        sizes = "/".join(str(x) for x in c["orbit_sizes"])
        parts = "[" + ",".join(map(str, c["eo_type"])) + "]"
        lines.append(f"  {parts:<8} points {c['points']:<7} orbit sizes {sizes:<16} p-rank {c['p_rank']}")
    if "iota" in payload:
        it = payload["iota"]
        lines.append(f"degeneration along r={it['r']}: {it['points']} zips, fiber sizes {it['fiber_sizes']}")
        for a, b in it["eo_table"]:
            lines.append(f"  {a} -> {b}")
    ok = (
        payload["zip_count"] == payload["expected_count"]
        and payload["invariant_constant_on_orbits"]
        and payload["distinct_invariants"] <= 2**g
    )
    rows = [
        (c["invariant"], "[" + ",".join(map(str, c["eo_type"])) + "]", c["codim"], c["points"], c["orbits"], c["p_rank"])
        for c in payload["classes"]
    ]
    csv_text = _csv(["invariant", "eo_type", "codim", "points", "orbits", "p_rank"], rows)
    return Result(payload, "\n".join(lines), csv_text, ok, "zip_oracle")


def cmd_iota(args, cfg: Config) -> Result:
    g, r = args.g, args.r
    if not 1 <= r <= g - 1:
        raise CliError(EXIT_USAGE, "usage", f"--r must be in 1..g-1, got {r}")
    ok = True
    if args.p:
        for p in args.p:
            _prime(p)
        tables = [zip_oracle.derive_iota(g, r, p, cfg.max_points).parts_table() for p in args.p]
        ok = all(t == tables[0] for t in tables)
        table, source, primes = tables[0], "derived", list(args.p)
    elif weyl.iota_is_verified(g, r):
        table, source, primes = weyl.iota_table()[(g, r)], "table", None
    else:
        table = {t.parts: weyl.iota_conjectured(g, r, t).parts for t in weyl.EOType.all(g - r)}
        source, primes = "conjecture", None
    entries = sorted(table.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    payload = {
        "g": g,
        "r": r,
        "source": source,
        "primes": primes,
        "prime_independent": ok,
        "map": [[list(a), list(b)] for a, b in entries],
    }
    fmt = lambda t: "[" + ",".join(map(str, t)) + "]"  # noqa: E731
    lines = [f"iota for g={g}, r={r} ({source})"]
    if source == "conjecture":
        lines.append("  CONJECTURE: not verified by enumeration for this (g, r)")
    lines += [f"  {fmt(a)} -> {fmt(b)}" for a, b in entries]
    csv_text = _csv(["source", "target"], [(fmt(a), fmt(b)) for a, b in entries])
    return Result(payload, "\n".join(lines), csv_text, ok, "zip_oracle")


def cmd_selftest(args, cfg: Config) -> Result:
    pres = taut_ring.corrupted_presentation if args.fixture == "corrupted-relation" else taut_ring.build_presentation
    settings = acceptance.Settings(profile=args.profile, seed=cfg.seed, jobs=cfg.jobs, presentation=pres)
    results = acceptance.run_all(settings, args.criteria)
    passed = all(r.passed for r in results)
    payload = {
        "profile": args.profile,
        "fixture": args.fixture,
        "passed": passed,
        "results": [r.to_json() for r in results],
    }
    failing = sorted({r.module for r in results if not r.passed})
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    rows = [(r.number, r.module, r.passed, f"{r.seconds:.3f}") for r in results]
    csv_text = _csv(["criterion", "module", "passed", "seconds"], rows)
    return Result(payload, "\n".join(lines), csv_text, passed, ",".join(failing) or None)


COMMANDS = {
    "ring": cmd_ring,
    "hilbert": cmd_hilbert,
    "weyl": cmd_weyl,
    "borel-check": cmd_borel_check,
    "prank": cmd_prank,
    "oracle": cmd_oracle,
    "iota": cmd_iota,
    "selftest": cmd_selftest,
}


def render(res: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(res.payload, indent=2, sort_keys=True)
    if fmt == "csv":
        if res.csv is None:
            raise CliError(EXIT_USAGE, "usage", "csv output is not available for this command")
        return res.csv.rstrip("\n")
    return res.text


def main(argv=None, env=None) -> int:
    env = os.environ if env is None else env
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args, env)
        res = COMMANDS[args.command](args, cfg)
        print(render(res, cfg.fmt))
        if not res.ok:
            raise CliError(EXIT_VERIFY, "verification", f"{args.command} reported a failed check", res.module)
        return EXIT_OK
    except CliError as e:
        err = e
    except zip_oracle.ResourceGuardError as e:
        err = CliError(EXIT_GUARD, "resource_guard", str(e), "zip_oracle")
    except (ValueError, LookupError) as e:
        err = CliError(EXIT_USAGE, "usage", str(e))
    except AssertionError as e:
        err = CliError(EXIT_VERIFY, "verification", str(e))
    print(json.dumps(err.to_json(), sort_keys=True), file=sys.stderr)
    return err.code

if __name__ == "__main__":
    sys.exit(main())
