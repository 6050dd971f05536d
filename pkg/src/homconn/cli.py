"""Command line front end.

Every command reads one JSON object (from a file argument or stdin) and
writes one JSON result record::

    {"status": "ok" | "error", "data": {...}, "diagnostics": [...]}

``batch`` applies one command to a stream of JSON lines.  Exit codes:
0 success, 1 domain error (or any failed batch line), 2 parse/usage error.
"""

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import moduli, wang
from .errors import HomConnError, NotEquivariant, SuiteFailure
from .numerics import SAMPLE_KINDS, ToleranceConfig, procrustes_align, sample_array

COMMANDS = (
    "canonicalize",
    "chart",
    "classify",
    "equiv",
    "solve-basis",
    "axial-canonical",
    "su2-modulus",
    "iso-modulus",
    "sample",
    "selftest",
)


class ParseError(HomConnError):
    code = "ParseError"


# -- serialization -------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj):
    """Compact JSON with floats at 17 significant digits."""
    obj = _plain(obj)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("cannot serialize non-finite float")
        text = format(obj, ".17g")
        return text if any(ch in text for ch in ".e") else text + ".0"
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, list):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(k) + ":" + dumps(v) for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def ok_record(data, diagnostics=()):
    return {"status": "ok", "data": data, "diagnostics": list(diagnostics)}


def error_record(exc, diagnostics=()):
    data = {"code": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
    if isinstance(exc, NotEquivariant):
        data["residual"] = exc.residual
        witness = exc.witness
        data["witness"] = getattr(witness, "theta", witness)
    if isinstance(exc, SuiteFailure):
        data["failed"] = exc.failed
    diagnostics = list(diagnostics) or list(getattr(exc, "diagnostics", ()))
    return {"status": "error", "data": data, "diagnostics": diagnostics}


# -- payload parsing -----------------------------------------------------------


def _get(payload, key, default=...):
    if key in payload:
        return payload[key]
    if default is ...:
        raise ParseError(f"missing field {key!r}")
    return default


def _matrix(payload, key):
    value = _get(payload, key)
    ok = (
        isinstance(value, list)
        and len(value) == 3
        and all(isinstance(row, list) and len(row) == 3 for row in value)
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for row in value for x in row)
    )
    if not ok:
        raise ParseError(f"field {key!r} must be a 3x3 array of numbers")
    arr = np.array(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"field {key!r} has non-finite entries")
    return arr


def _number(payload, key, default=...):
    value = _get(payload, key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ParseError(f"field {key!r} must be a finite number")
    return float(value)


def _integer(payload, key, default=...):
    value = _get(payload, key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"field {key!r} must be an integer")
    return value


def _choice(payload, key, choices, default=...):
    value = _get(payload, key, default)
    if value not in choices:
        raise ParseError(f"field {key!r} must be one of {list(choices)}, got {value!r}")
    return value


def _isotropy(payload):
    kind = _choice(payload, "isotropy", ("bianchi", "axial", "axial+", "axial-", "isotropic"))
    if kind.startswith("axial"):
        sign = kind[5:] or _choice(payload, "sign", ("+", "-"), "+")
        return wang.IsotropyClass("axial", sign)
    return wang.IsotropyClass(kind)


def _lift(payload):
    flavor = _choice(payload, "lift", ("metric", "su2"), "metric")
    if flavor == "metric":
        return wang.METRIC
    return wang.su2_lift(_integer(payload, "n", 0))


# -- command handlers ----------------------------------------------------------


def _canonical_data(c):
    return {"p_psd": c.p_psd, "sign": c.sign}


def cmd_canonicalize(payload, cfg, seed):
    case = _choice(payload, "case", ("bianchi", "axial", "isotropic"), "bianchi")
    m = _matrix(payload, "matrix")
    if case == "axial":
        mod = moduli.axial_canonical(*moduli.axial_coefficients(m, cfg))
        return {"a": mod.a, "r": mod.r}, []
    if case == "isotropic":
        return {"c": moduli.iso_modulus(m, cfg)}, []
    c = moduli.bianchi_canonical(m, cfg)
    return _canonical_data(c), []


def cmd_chart(payload, cfg, seed):
    if "matrix" in payload:
        c = moduli.bianchi_canonical(_matrix(payload, "matrix"), cfg)
        p = moduli.bianchi_chart(c, cfg)
        return {"A": p.a, "lambda": p.lam, "sign": c.sign}, []
    point = moduli.ChartPoint(_matrix(payload, "A"), _number(payload, "lambda"))
    c = moduli.bianchi_chart_inv(point, cfg)
    return {"p_psd": c.p_psd, "sign": c.sign, "representative": c.representative()}, []


def cmd_classify(payload, cfg, seed):
    if "matrix" in payload:
        point = moduli.bianchi_chart(moduli.bianchi_canonical(_matrix(payload, "matrix"), cfg), cfg)
    else:
        point = moduli.ChartPoint(_matrix(payload, "A"), _number(payload, "lambda"))
    s = moduli.classify_stratum(point, cfg)
    diags = [f"discriminant={s.discriminant:.17g}", f"discriminant_s1={s.discriminant_s1}"]
    if not s.checks_agree:
        diags.append("discriminant test disagrees with spectral test; spectral decision kept")
    return {"stratum": s.index}, diags


def cmd_equiv(payload, cfg, seed):
    m, n = _matrix(payload, "M"), _matrix(payload, "N")
    if _choice(payload, "flavor", ("so3", "su2"), "so3") == "su2":
        m, n = moduli.su2_to_so3_class(m), moduli.su2_to_so3_class(n)
    _, residual = procrustes_align(m, n)
    return {"equivalent": moduli.bianchi_equiv(m, n, cfg)}, [f"procrustes_residual={residual:.17g}"]


def cmd_solve_basis(payload, cfg, seed):
    isotropy, lift = _isotropy(payload), _lift(payload)
    b = wang.solve_equivariant_basis(isotropy, lift, cfg)
    diags = []
    if isotropy.kind == "axial" and lift.flavor == "su2" and lift.n == 0:
        diags.append(wang.DISCREPANCY_NOTE)
    return {"dimension": b.dimension, "basis": [np.where(np.abs(m) < 1e-15, 0.0, m) for m in b.basis]}, diags


def cmd_axial_canonical(payload, cfg, seed):
    if "matrix" in payload:
        a, b, c = moduli.axial_coefficients(_matrix(payload, "matrix"), cfg)
    else:
        a, b, c = (_number(payload, k) for k in "abc")
    mod = moduli.axial_canonical(a, b, c)
    return {"a": mod.a, "r": mod.r}, []


def cmd_su2_modulus(payload, cfg, seed):
    n = _integer(payload, "n")
    mod = moduli.axial_su2_modulus(n, _matrix(payload, "matrix"), _choice(payload, "sign", ("+", "-"), "+"), cfg)
    diags = ["n = 0: coordinate is the norm of the first column (half-line)"] if n == 0 else []
    return {"n": mod.n, "c": mod.c}, diags


def cmd_iso_modulus(payload, cfg, seed):
    m = _matrix(payload, "matrix")
    if _choice(payload, "lift", ("metric", "su2"), "metric") == "su2":
        return {"point": moduli.iso_su2_modulus(m, cfg)}, []
    return {"c": moduli.iso_modulus(m, cfg)}, []


def cmd_sample(payload, cfg, seed):
    kind = _choice(payload, "kind", SAMPLE_KINDS, "rotation")
    count = _integer(payload, "count", 1)
    if count < 0:
        raise ParseError("count must be nonnegative")
    return {"kind": kind, "seed": seed, "count": count, "values": sample_array(kind, seed, count)}, []


def cmd_selftest(payload, cfg, seed):
    from .suites import run_all

    scale = _choice(payload, "scale", ("quick", "full"), "quick")
    results = run_all(seed, scale)
    diags = [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    if failed:
        exc = SuiteFailure(failed)
        exc.diagnostics = diags
        raise exc
    data = {
        "scale": scale,
        "suites": [
            {"name": r.name, "passed": r.passed, "worst": r.worst, "samples": r.samples, "detail": r.detail}
            for r in results
        ],
    }
    return data, diags


HANDLERS = {
    "canonicalize": cmd_canonicalize,
    "chart": cmd_chart,
    "classify": cmd_classify,
    "equiv": cmd_equiv,
    "solve-basis": cmd_solve_basis,
    "axial-canonical": cmd_axial_canonical,
    "su2-modulus": cmd_su2_modulus,
    "iso-modulus": cmd_iso_modulus,
    "sample": cmd_sample,
    "selftest": cmd_selftest,
}


def execute(command, payload, cfg=None, seed=0):
    """Run one command; returns ``(record, exit_code)``."""
    cfg = cfg or ToleranceConfig()
    try:
        if command not in HANDLERS:
            raise ParseError(f"unknown command {command!r}")
        if not isinstance(payload, dict):
            raise ParseError("payload must be a JSON object")
        data, diags = HANDLERS[command](payload, cfg, seed)
        return ok_record(data, diags), 0
    except ParseError as exc:
        return error_record(exc), 2
    except SuiteFailure as exc:
        return error_record(exc), 1
    except (HomConnError, ValueError) as exc:
        return error_record(exc), 1


def execute_line(command, line, cfg=None, seed=0):
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        return dumps(error_record(ParseError(f"invalid JSON: {exc}"))), 2
    record, code = execute(command, payload, cfg, seed)
    return dumps(record), code


def _batch_worker(args):
    return execute_line(*args)


def batch(lines, command, cfg=None, seed=0, jobs=1):
    """Process JSON lines; returns ``(output_lines, exit_code)`` in input order."""
    items = [(command, line, cfg, seed) for line in lines if line.strip()]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_batch_worker, items, chunksize=max(1, len(items) // (4 * jobs))))
    else:
        results = [_batch_worker(item) for item in items]
    out = [text for text, _ in results]
    return out, (1 if any(code for _, code in results) else 0)


def determinism_lines(seed, count):
    mats = sample_array("gaussian_mat3", (int(seed), 11), count)
    return [dumps({"case": "bianchi", "matrix": m}) for m in mats]


def determinism_check(seed, count):
    """Run the same canonicalize batch twice; returns ``(identical, sha256)``."""
    lines = determinism_lines(seed, count)
    digests = []
    for _ in range(2):
        out, _ = batch(lines, "canonicalize", seed=seed)
        digests.append(hashlib.sha256("\n".join(out).encode()).hexdigest())
    return digests[0] == digests[1], digests[0]


# -- argument parsing ----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="homconn",
        description="Canonical forms and moduli coordinates for homogeneous connections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-8, help="equivalence tolerance eps_eq (default 1e-8)")
        p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")

    for name in COMMANDS:
        p = sub.add_parser(name)
        common(p)
        if name == "sample":
            p.add_argument("--kind", choices=SAMPLE_KINDS, default=None)
            p.add_argument("--count", type=int, default=None, help="number of samples (default 1)")
        elif name == "selftest":
            p.add_argument("--scale", choices=("quick", "full"), default="quick")
        else:
            p.add_argument("file", nargs="?", default="-", help="JSON payload file, '-' for stdin")

    p = sub.add_parser("batch", help="apply one command to line-delimited JSON")
    common(p)
    p.add_argument("--command", dest="batch_command", required=True, choices=COMMANDS)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("file", nargs="?", default="-")
    return parser


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = ToleranceConfig(eps_eq=args.tol)
    except ValueError as exc:
        print(dumps(error_record(ParseError(str(exc)))))
        return 2

    if args.command == "batch":
        try:
            text = _read(args.file)
        except OSError as exc:
            print(dumps(error_record(ParseError(str(exc)))))
            return 2
        out, code = batch(text.splitlines(), args.batch_command, cfg, args.seed, args.jobs)
        sys.stdout.write("".join(line + "\n" for line in out))
        return code

    if args.command == "sample":
        payload = {}
        if args.kind is not None:
            payload["kind"] = args.kind
        if args.count is not None:
            payload["count"] = args.count
        record, code = execute("sample", payload, cfg, args.seed)
    elif args.command == "selftest":
        record, code = execute("selftest", {"scale": args.scale}, cfg, args.seed)
    else:
        try:
            text = _read(args.file)
        except OSError as exc:
            print(dumps(error_record(ParseError(str(exc)))))
            return 2
        line, code = execute_line(args.command, text, cfg, args.seed)
        print(line)
        return code
    print(dumps(record))
    return code


if __name__ == "__main__":
    sys.exit(main())
