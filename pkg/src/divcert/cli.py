"""Command-line surface: subcommands fab, verify, conj, primes, qbinom, theta.

Output is line-delimited JSON: one record per grid point (stable key order)
followed by a summary record; --table renders the same records for humans.
Long grid runs can be checkpointed to an append-only log and resumed; a
resumed run produces byte-identical records to an uninterrupted one, so
wall-clock timing is reported on stderr rather than inside the records.

Exit codes: 0 success / all expected verdicts true, 2 inconclusive or
exhausted search, 3 partial results due to a budget, 64 usage error.
"""

from __future__ import annotations

import argparse
import functools
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__, core, divisibility, qdivisibility, qpoly
from .errors import BudgetExceededError, SearchExhaustedError

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_PARTIAL = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _record_dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _fingerprint(command: str, parameters: dict) -> str:
    blob = _record_dumps({"command": command, "parameters": parameters,
                          "engine_version": __version__})
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Grid workers (module level so they pickle for the process pool).

def _w_thm0(point):
    a, b, n = point
    return {"a": a, "b": b, "n": n,
            "ok": divisibility.verify_reduced_modulus(a, b, n)}


def _w_thm3(point):
    (n,) = point
    v = divisibility.verify_congruence_families(n)
    return {"n": n, "ok": v.all_ok,
            "checks": [{"label": c.label, "ok": c.ok} for c in v.checks]}


def _w_thm4(point, expand=True):
    (n,) = point
    verdicts = qdivisibility.verify_q_families(n, expand_coefficients=expand)
    families = [{"family": v.family_id, "polynomial": v.polynomial,
                 "nonneg": v.nonneg, "degree": v.degree,
                 "negative_positions": list(v.negative_positions)}
                for v in verdicts]
    # The composite-denominator family asserts polynomiality only.
    ok = all(v.polynomial and v.nonneg is not False for v in verdicts)
    partial = expand and any(
        v.polynomial and v.nonneg is None for v in verdicts[:-1])
    return {"n": n, "ok": ok, "partial": partial, "families": families}


def _w_thm_kn(point):
    n, k = point
    v = qdivisibility.verify_gcd_central_quotient(n, k)
    return {"n": n, "k": k, "ok": bool(v.polynomial and v.nonneg),
            "degree": v.degree}


def _w_andrews(point):
    a, b = point
    v = qdivisibility.gcd_binomial_quotient_check(a, b)
    return {"a": a, "b": b, "ok": bool(v.polynomial and v.nonneg),
            "degree": v.degree}


def _w_anbn(point):
    a, b, n = point
    v = qdivisibility.verify_gcd_catalan_family(a, b, n)
    return {"a": a, "b": b, "n": n,
            "ok": bool(v.polynomial and v.nonneg), "degree": v.degree}


def _w_decomposition(point):
    a, b, n = point
    return {"a": a, "b": b, "n": n,
            "ok": divisibility.verify_quotient_decomposition(a, b, n)}


def _w_conj2(point, p_cap=divisibility.CONJ2_PRIME_CAP_DEFAULT):
    a, b = point
    try:
        w = divisibility.negative_valuation_witness(a, b, p_cap)
    except SearchExhaustedError:
        return {"a": a, "b": b, "found": False, "p_cap": p_cap}
    return {"a": a, "b": b, "found": True, "p": w.p, "n": w.n, "e": w.e,
            "valuation": w.valuation}


def _w_oddp(point, p=3, n_max=100):
    a, b = point
    n = divisibility.first_failing_n(p, a, b, n_max)
    return {"a": a, "b": b, "p": p, "first_failing_n": n,
            "survives": n is None}


def _w_oddp2(point, m=1, n_max=50):
    a, b = point
    survives = divisibility._pair_survives(m, a, b, n_max)
    return {"a": a, "b": b, "m": m, "survives": survives}


def _w_c330(point):
    (n,) = point
    degree, negatives = qdivisibility.check_c330n88n(n)
    expected = qdivisibility.conjectured_pattern(n)
    return {"n": n, "degree": degree, "negatives": [list(t) for t in negatives],
            "matches_pattern": [list(t) for t in expected] ==
                               [list(t) for t in negatives]}


# ---------------------------------------------------------------------------
# Grid running, checkpointing, reporting.

def _parallel_width(args) -> int:
    if getattr(args, "par", None):
        return args.par
    return int(os.environ.get("DIVCERT_PAR", "1"))


def _map_ordered(worker, points, width):
    if width <= 1:
        for p in points:
            yield worker(p)
        return
    with ProcessPoolExecutor(max_workers=width) as ex:
        chunk = max(1, len(points) // (width * 8)) if points else 1
        yield from ex.map(worker, points, chunksize=chunk)


def _load_checkpoint(path: str, fingerprint: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return []
    header = json.loads(lines[0])
    if header.get("engine_version") != __version__:
        raise SystemExit(EXIT_USAGE)
    if header.get("fingerprint") != fingerprint:
        print("error: checkpoint belongs to a different command", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    records = []
    corrupt_from = None
    for i, line in enumerate(lines[1:], start=1):
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            corrupt_from = i
            break
    if corrupt_from is not None:
        print(f"warning: dropping corrupt checkpoint tail at line {corrupt_from + 1}",
              file=sys.stderr)
        _atomic_write(path, "\n".join(lines[:corrupt_from]) + "\n")
    return records


def _atomic_write(path: str, content: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(content)
    os.replace(tmp, path)


def _run_grid(args, command: str, parameters: dict, points: list, worker) -> list[dict]:
    """Run a grid, optionally resuming from and appending to a checkpoint."""
    fingerprint = _fingerprint(command, parameters)
    records: list[dict] = []
    checkpoint = getattr(args, "checkpoint", None)
    if checkpoint and os.path.exists(checkpoint):
        records = _load_checkpoint(checkpoint, fingerprint)
    fh = None
    if checkpoint:
        fresh = not os.path.exists(checkpoint)
        fh = open(checkpoint, "a", encoding="utf-8")
        if fresh:
            fh.write(_record_dumps({"engine_version": __version__,
                                    "fingerprint": fingerprint}) + "\n")
            fh.flush()
    try:
        for rec in _map_ordered(worker, points[len(records):], _parallel_width(args)):
            if fh:
                fh.write(_record_dumps(rec) + "\n")
                fh.flush()
            records.append(rec)
    finally:
        if fh:
            fh.close()
    return records


def _emit(args, command: str, parameters: dict, records: list[dict],
          summary_extra: dict) -> None:
    summary = {"record": "summary", "command": command,
               "parameters": parameters, "engine_version": __version__,
               "record_count": len(records)}
    summary.update(summary_extra)
    lines = [_record_dumps(r) for r in records] + [_record_dumps(summary)]
    output = getattr(args, "output", None)
    if output:
        _atomic_write(output, "\n".join(lines) + "\n")
        print(f"wrote {len(lines)} records to {output}", file=sys.stderr)
    elif getattr(args, "table", False):
        _print_table(records, summary)
    else:
        for line in lines:
            print(line)


def _print_table(records: list[dict], summary: dict) -> None:
    if records:
        keys = sorted({k for r in records for k in r})
        print("\t".join(keys))
        for r in records:
            print("\t".join(_cell(r.get(k)) for k in keys))
    print("summary:", _record_dumps(summary))


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


# ---------------------------------------------------------------------------
# Subcommand implementations.

def _cmd_fab(args) -> int:
    params = {"a": args.a, "b": args.b, "n_cap": args.n_cap}
    cache = _FabCache(args.cache) if args.cache else None
    cached = cache.get(args.a, args.b) if cache else None
    if cached is not None:
        record = cached
    else:
        result = divisibility.f_ab(args.a, args.b, n_cap=args.n_cap)
        info = divisibility.fab_bound(args.a, args.b)
        record = {"a": args.a, "b": args.b, "verdict": result.verdict,
                  "n": result.n, "n_max": result.n_max,
                  "bound": None if info is None else
                           {"p": info.p, "bound": info.bound, "s": info.s}}
        if cache:
            cache.put(record)
    _emit(args, "fab", params, [record], {"verdict": record["verdict"]})
    return EXIT_OK if record["verdict"] in ("found", "proven_zero") else EXIT_INCONCLUSIVE


class _FabCache:
    """Append-only (a, b) -> result log with a compaction pass.

    Versioned header; refuses caches from another engine version.  Corrupt
    tail lines are dropped with a warning on load.
    """

    def __init__(self, path: str):
        self.path = path
        self.entries: dict[tuple[int, int], dict] = {}
        if os.path.exists(path):
            self._load()
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_record_dumps({"engine_version": __version__,
                                        "kind": "fab-cache"}) + "\n")

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        header = json.loads(lines[0]) if lines else {}
        if header.get("engine_version") != __version__:
            print("error: cache written by a different engine version",
                  file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        good = [lines[0]]
        for line in lines[1:]:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                print("warning: dropping corrupt cache tail", file=sys.stderr)
                break
            self.entries[(rec["a"], rec["b"])] = rec
            good.append(line)
        if len(good) != len(lines):
            _atomic_write(self.path, "\n".join(good) + "\n")

    def get(self, a: int, b: int) -> dict | None:
        return self.entries.get((a, b))

    def put(self, record: dict) -> None:
        self.entries[(record["a"], record["b"])] = record
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(_record_dumps(record) + "\n")

    def compact(self) -> None:
        lines = [_record_dumps({"engine_version": __version__, "kind": "fab-cache"})]
        lines += [_record_dumps(rec) for _, rec in sorted(self.entries.items())]
        _atomic_write(self.path, "\n".join(lines) + "\n")


def _cmd_verify(args) -> int:
    n_max, a_max, b_max = args.n_max, args.a_max, args.b_max
    tid = args.theorem_id
    if tid == "thm0":
        points = [(a, b, n) for a in range(1, a_max + 1)
                  for b in range(1, b_max + 1) for n in range(1, n_max + 1)]
        worker = _w_thm0
    elif tid == "thm3":
        points = [(n,) for n in range(1, n_max + 1)]
        worker = _w_thm3
    elif tid == "thm4":
        points = [(n,) for n in range(1, n_max + 1)]
        worker = functools.partial(_w_thm4, expand=args.expand)
    elif tid == "thm_kn":
        points = [(n, k) for n in range(1, n_max + 1) for k in range(0, n + 1)]
        worker = _w_thm_kn
    elif tid == "andrews":
        points = [(a, b) for a in range(1, a_max + 1) for b in range(1, b_max + 1)]
        worker = _w_andrews
    elif tid == "anbn":
        points = [(a, b, n) for a in range(1, a_max + 1)
                  for b in range(1, b_max + 1) for n in range(1, n_max + 1)]
        worker = _w_anbn
    elif tid == "decomposition":
        points = [(a, b, n) for a in range(1, a_max + 1)
                  for b in range(1, b_max + 1) for n in range(1, n_max + 1)
                  if a * n >= 2]
        worker = _w_decomposition
    else:  # pragma: no cover - argparse choices guard this
        return EXIT_USAGE
    params = {"theorem_id": tid, "n_max": n_max, "a_max": a_max,
              "b_max": b_max, "expand": getattr(args, "expand", False)}
    records = _run_grid(args, "verify", params, points, worker)
    all_ok = all(r.get("ok", False) for r in records)
    partial = any(r.get("partial") for r in records)
    _emit(args, "verify", params, records,
          {"all_ok": all_ok, "partial": partial})
    if partial:
        return EXIT_PARTIAL
    return EXIT_OK if all_ok else EXIT_INCONCLUSIVE


def _cmd_conj(args) -> int:
    cid = args.conjecture_id
    if cid == "conj2witness":
        points = [(a, b) for a in range(1, args.a_max + 1)
                  for b in range(1, args.b_max + 1)]
        worker = functools.partial(_w_conj2, p_cap=args.p_cap)
        params = {"conjecture_id": cid, "a_max": args.a_max,
                  "b_max": args.b_max, "p_cap": args.p_cap}
        records = _run_grid(args, "conj", params, points, worker)
        ok = all(r["found"] for r in records)
        _emit(args, "conj", params, records, {"all_found": ok})
        return EXIT_OK if ok else EXIT_INCONCLUSIVE
    if cid == "oddp":
        points = [(a, b) for a in range(2, args.a_max + 1)
                  for b in range(1, min(args.b_max, a - 1) + 1)]
        worker = functools.partial(_w_oddp, p=args.p, n_max=args.n_max)
        params = {"conjecture_id": cid, "p": args.p, "a_max": args.a_max,
                  "b_max": args.b_max, "n_max": args.n_max}
        records = _run_grid(args, "conj", params, points, worker)
        survivors = [r for r in records if r["survives"]]
        _emit(args, "conj", params, records,
              {"survivor_count": len(survivors)})
        return EXIT_OK if not survivors else EXIT_INCONCLUSIVE
    if cid == "oddp2":
        points = [(a, b) for a in range(1, args.a_max + 1)
                  for b in range(1, args.b_max + 1) if a * args.m > b]
        worker = functools.partial(_w_oddp2, m=args.m, n_max=args.n_max)
        params = {"conjecture_id": cid, "m": args.m, "a_max": args.a_max,
                  "b_max": args.b_max, "n_max": args.n_max}
        records = _run_grid(args, "conj", params, points, worker)
        survivors = [[r["a"], r["b"]] for r in records if r["survives"]]
        _emit(args, "conj", params, records, {"survivors": survivors})
        return EXIT_OK if survivors else EXIT_INCONCLUSIVE
    if cid == "c330n88n":
        ns = [args.n] if args.n else list(range(1, args.n_max + 1))
        points = [(n,) for n in ns]
        params = {"conjecture_id": cid, "n": args.n, "n_max": args.n_max}
        try:
            records = _run_grid(args, "conj", params, points, _w_c330)
        except BudgetExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARTIAL
        ok = all(r["matches_pattern"] for r in records)
        _emit(args, "conj", params, records, {"all_match": ok})
        return EXIT_OK if ok else EXIT_INCONCLUSIVE
    return EXIT_USAGE  # pragma: no cover


def _cmd_primes(args) -> int:
    params = {"lo": args.lo, "hi": args.hi}
    report = divisibility.prime_window_verify(args.lo, args.hi)
    records = [{"x": x, "witness_prime": p} for x, p in report.entries]
    records += [{"x": x, "witness_prime": None} for x in report.failures]
    records.sort(key=lambda r: r["x"])
    _emit(args, "primes", params, records,
          {"failures": list(report.failures)})
    return EXIT_OK if not report.failures else EXIT_INCONCLUSIVE


def _cmd_qbinom(args) -> int:
    params = {"m": args.m, "k": args.k, "exponents": args.exponents}
    if args.exponents:
        f = qpoly.qbinom_factorization(args.m, args.k)
        record = {"m": args.m, "k": args.k,
                  "exponents": {str(d): e for d, e in sorted(f.exponents.items())}}
    else:
        try:
            poly = qpoly.qbinom_poly(args.m, args.k)
        except BudgetExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARTIAL
        record = {"m": args.m, "k": args.k, "degree": poly.degree,
                  "coeffs": list(poly.coeffs)}
    _emit(args, "qbinom", params, [record], {})
    return EXIT_OK


def _cmd_theta(args) -> int:
    params = {"x": args.x}
    try:
        theta = divisibility.chebyshev_theta_3_2(args.x)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    record = {"x": theta.x, "theta": theta.value,
              "error_bound": theta.error_bound,
              "prime_count": theta.prime_count}
    _emit(args, "theta", params, [record], {})
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--table", action="store_true",
                        help="render records as a table instead of JSON lines")
    parser.add_argument("--output", help="write the report to a file")
    parser.add_argument("--par", type=int,
                        help="worker pool width (default DIVCERT_PAR or 1)")
    parser.add_argument("--checkpoint",
                        help="append-only checkpoint log; resumable")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divcert")
    parser.add_argument("--budget-degree", type=int,
                        help="expansion degree budget (DIVCERT_BUDGET_DEGREE)")
    parser.add_argument("--budget-prime", type=int,
                        help="sieve budget (DIVCERT_BUDGET_PRIME)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fab", help="first n with (bn+1) not dividing binom((a+b)n, an)")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--n-cap", type=int, default=None)
    p.add_argument("--cache", help="append-only result cache file")
    _add_common(p)
    p.set_defaults(func=_cmd_fab)

    p = sub.add_parser("verify", help="grid-run a theorem verifier")
    p.add_argument("theorem_id",
                   choices=["thm0", "thm3", "thm4", "thm_kn", "andrews",
                            "anbn", "decomposition"])
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--a-max", type=int, default=10)
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--expand", action="store_true",
                   help="also expand coefficients where budgets allow")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("conj", help="conjecture explorers and witness searches")
    p.add_argument("conjecture_id",
                   choices=["conj2witness", "oddp", "oddp2", "c330n88n"])
    p.add_argument("--a-max", type=int, default=10)
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--p-cap", type=int,
                   default=divisibility.CONJ2_PRIME_CAP_DEFAULT)
    _add_common(p)
    p.set_defaults(func=_cmd_conj)

    p = sub.add_parser("primes",
                       help="witness primes == 2 (mod 3) in windows (x, 20x/19)")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_primes)

    p = sub.add_parser("qbinom", help="dump a Gaussian polynomial or exponent vector")
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--exponents", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_qbinom)

    p = sub.add_parser("theta", help="Chebyshev theta on the class 2 mod 3")
    p.add_argument("x", type=int)
    _add_common(p)
    p.set_defaults(func=_cmd_theta)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget_degree:
        os.environ["DIVCERT_BUDGET_DEGREE"] = str(args.budget_degree)
    if args.budget_prime:
        os.environ["DIVCERT_BUDGET_PRIME"] = str(args.budget_prime)
    start = time.monotonic()
    try:
        code = args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"elapsed {time.monotonic() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
