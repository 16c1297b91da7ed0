"""Command line front end: classify, canon, equiv and stabilizer on JSON state files.

A state file holds ``n`` and exactly one of

    {"n": 3, "pauli": {"iii": 0.125, "zzz": 0.07}}
    {"n": 4, "preset": {"kind": "dicke", "k": 2}}
    {"n": 2, "mixture": [{"weight": 0.5, "state": {...}}, [0.5, {...}]]}

Pauli labels use ``ixyz`` (or ``0123``).  Complex preset parameters may be
given as a number, a ``[re, im]`` pair or a string such as ``"0.6+0.8j"``.

Exit codes: 0 success or equivalent, 1 inequivalent, 2 bad input,
3 state not permutation invariant, 4 numerical abort, 5 unknown / unsupported.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ._tol import (
    DEFAULT_TOL,
    NotSymmetric,
    NumericalAbort,
    ResourceLimit,
    SymstabError,
    ZeroClassUnsupported,
)
from .classify import canonical_form, classify, lu_equivalent
from .pauli import LocalUnitary, PauliOperator
from .stabilizer import decompose_algebra, stabilizer_basis, verify_block_relations
from .states import PRESET_KINDS, preset

EXIT_OK = 0
EXIT_INEQUIVALENT = 1
EXIT_PARSE = 2
EXIT_NOT_SYMMETRIC = 3
EXIT_NUMERICAL = 4
EXIT_UNKNOWN = 5

WEIGHT_TOL = 1e-6


class StateFileError(SymstabError, ValueError):
    pass


# --------------------------------------------------------------------------
# state files
# --------------------------------------------------------------------------

def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise StateFileError(f"complex pair must have two entries: {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise StateFileError(f"not a number: {value!r}")


def _real(value) -> float:
    z = _complex(value)
    if abs(z.imag) > 0:
        raise StateFileError(f"Pauli coefficients must be real, got {value!r}")
    return z.real


def _preset(spec: dict, n) -> PauliOperator:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise StateFileError("preset needs a 'kind'")
    params = dict(spec)
    kind = params.pop("kind")
    if kind not in PRESET_KINDS:
        raise StateFileError(f"unknown preset kind {kind!r}; choose from {', '.join(PRESET_KINDS)}")
    n = params.pop("n", n)
    for key in ("alpha", "beta"):
        if key in params:
            params[key] = _complex(params[key])
    if "c" in params:
        params["c"] = [_real(v) for v in params["c"]]
    for key in ("d", "a"):
        if key in params:
            params[key] = _real(params[key])
    if "k" in params:
        params["k"] = int(params["k"])
    return preset(kind, None if n is None else int(n), **params)


def parse_state(doc, n=None) -> PauliOperator:
    """Build an operator from a decoded state file (nested mixtures inherit ``n``)."""
    if not isinstance(doc, dict):
        raise StateFileError("a state must be a JSON object")
    n = doc.get("n", n)
    payloads = [k for k in ("pauli", "preset", "mixture") if k in doc]
    if len(payloads) != 1:
        raise StateFileError(f"need exactly one of pauli/preset/mixture, found {payloads or 'none'}")
    kind = payloads[0]
    if kind == "preset":
        op = _preset(doc["preset"], n)
    elif n is None:
        raise StateFileError("missing 'n'")
    elif kind == "pauli":
        terms = doc["pauli"]
        if not isinstance(terms, dict):
            raise StateFileError("'pauli' must map index strings to numbers")
        for label in terms:
            if len(label) != int(n):
                raise StateFileError(f"index {label!r} does not have length n={n}")
        op = PauliOperator(int(n), {k: _real(v) for k, v in terms.items()})
    else:
        entries = doc["mixture"]
        if not isinstance(entries, list) or not entries:
            raise StateFileError("'mixture' must be a non-empty list")
        op = PauliOperator(int(n))
        total = 0.0
        for entry in entries:
            if isinstance(entry, dict):
                w, sub = entry.get("weight"), entry.get("state")
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                w, sub = entry
            else:
                raise StateFileError(f"bad mixture entry {entry!r}")
            w = _real(w)
            if w < 0:
                raise StateFileError("mixture weights must be non-negative")
            total += w
            part = parse_state(sub, n)
            if part.n != int(n):
                raise StateFileError(f"mixture component has n={part.n}, expected {n}")
            op = op + w * part
        if abs(total - 1) > WEIGHT_TOL:
            raise StateFileError(f"mixture weights sum to {total}, not 1")
    if n is not None and op.n != int(n):
        raise StateFileError(f"state has n={op.n} but the file says n={n}")
    return op


def load_state(path) -> PauliOperator:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return parse_state(doc)
    except SymstabError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: {exc!r}") from exc


# --------------------------------------------------------------------------
# report formatting
# --------------------------------------------------------------------------

def _num(x: float) -> float:
    x = float(x)
    if not np.isfinite(x):
        return x
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.12g}")


def clean(obj):
    """Round floats to 12 significant digits so reports are reproducible."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, complex):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    return obj


def _unitary(g: LocalUnitary) -> list:
    return [{"a": f.a, "b": f.b} for f in g.factors]


def _coefficients(tag: str, coeffs: dict | None):
    if coeffs is None:
        return "unique"
    if tag == "Dicke":
        return {"b": [[r, s, v] for (r, s), v in sorted(coeffs["b"].items())]}
    return dict(coeffs)


def _tolerances(tol) -> dict:
    return asdict(tol)


def _canonical_block(form) -> dict:
    rep = form.representative()
    return {
        "coefficients": _coefficients(form.tag, form.coefficients),
        "twin": _coefficients(form.tag, form.twin),
        "aligner": _unitary(form.aligner),
        "expansion_residual": form.residual,
        "representative": {"n": form.n, "pauli": clean(rep.terms())},
    }


def _stabilizer_block(rho, tol) -> tuple[dict, object]:
    cls = classify(rho, tol)
    diag = cls.basis.diagnostics
    return (
        {
            "class": cls.tag,
            "stabilizer_dim": cls.dim,
            "projection_dims": list(cls.projection_dims),
            "diagnostics": {
                "singular_values": diag.get("singular_values", []),
                "nullspace_residual": diag.get("residual", 0.0),
                "singular_gap": diag.get("gap"),
            },
        },
        cls,
    )


def _finite(obj):
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    return obj


def render(report: dict, fmt: str) -> str:
    report = _finite(clean(report))
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        else:
            lines.append(f"{prefix}: {json.dumps(obj, sort_keys=True)}")

    walk("", report)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_classify(args, tol) -> tuple[dict, int]:
    rho = load_state(args.file)
    body, cls = _stabilizer_block(rho, tol)
    report = {"command": {"name": "classify", "file": str(args.file)}, "n": rho.n, **body}
    if cls.tag != "Zero":
        report["canonical"] = _canonical_block(canonical_form(rho, tol, cls))
    return report, EXIT_OK


def cmd_canon(args, tol) -> tuple[dict, int]:
    rho = load_state(args.file)
    cls = classify(rho, tol)
    report = {"command": {"name": "canon", "file": str(args.file)}, "n": rho.n, "class": cls.tag}
    if cls.tag == "Zero":
        report["error"] = "zero stabilizer: no canonical form"
        return report, EXIT_UNKNOWN
    report["canonical"] = _canonical_block(canonical_form(rho, tol, cls))
    return report, EXIT_OK


def cmd_equiv(args, tol) -> tuple[dict, int]:
    rho = load_state(args.file_a)
    rho2 = load_state(args.file_b)
    result = lu_equivalent(rho, rho2, tol)
    report = {
        "command": {"name": "equiv", "files": [str(args.file_a), str(args.file_b)]},
        "n": rho.n,
        "verdict": result.verdict,
        "route": result.route,
        "note": result.note,
    }
    if result.witness is not None:
        report["witness"] = _unitary(result.witness)
        report["witness_residual"] = result.residual
    code = {"Equivalent": EXIT_OK, "Inequivalent": EXIT_INEQUIVALENT}.get(result.verdict, EXIT_UNKNOWN)
    return report, code


def _element_rows(M) -> list:
    return [list(row) for row in np.asarray(M)]


def cmd_stabilizer(args, tol) -> tuple[dict, int]:
    rho = load_state(args.file)
    K = stabilizer_basis(rho, tol)
    report = {
        "command": {"name": "stabilizer", "file": str(args.file), "decompose": bool(args.decompose)},
        "n": rho.n,
        "stabilizer_dim": K.dim,
        "basis": [_element_rows(M) for M in K.elements],
        "diagnostics": {
            "singular_values": K.diagnostics.get("singular_values", []),
            "nullspace_residual": K.diagnostics.get("residual", 0.0),
            "singular_gap": K.diagnostics.get("gap"),
        },
    }
    if args.decompose:
        D = decompose_algebra(K, tol)
        checks = verify_block_relations(D, tol)
        report["decomposition"] = {
            "blocks": [
                {
                    "qubits": [q + 1 for q in b.qubits],
                    "U": _element_rows(b.U),
                    "V": _element_rows(b.V),
                    "W": _element_rows(b.W),
                    "relation_residuals": [c.uv_w, c.vw_u, c.wu_v],
                    "orthonormality": c.orthonormality,
                }
                for b, c in zip(D.blocks, checks)
            ],
            "s_qubits": [q + 1 for q in D.s_qubits],
            "s_basis": [_element_rows(M) for M in D.s_basis.elements],
            "r_qubits": [q + 1 for q in D.r_qubits],
            "aligner": _unitary(D.aligner),
        }
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank-tol", type=float, default=None, help=f"relative SVD rank threshold (default {DEFAULT_TOL.rank:g})")
    common.add_argument("--num-tol", type=float, default=None, help=f"absolute coefficient tolerance (default {DEFAULT_TOL.num:g})")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="symstab", description="Local unitary stabilizers of symmetric multiqubit states.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="stabilizer class, dimensions and canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("canon", parents=[common], help="canonical coefficients and twin")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)
    p = sub.add_parser("equiv", parents=[common], help="decide local unitary equivalence")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_equiv)
    p = sub.add_parser("stabilizer", parents=[common], help="stabilizer algebra basis (any state)")
    p.add_argument("file")
    p.add_argument("--decompose", action="store_true", help="also print the block decomposition")
    p.set_defaults(func=cmd_stabilizer)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    tol = DEFAULT_TOL.with_overrides(rank=args.rank_tol, num=args.num_tol)
    try:
        report, code = args.func(args, tol)
    except NotSymmetric as exc:
        print(f"symstab: state is not permutation invariant: {exc}", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    except (NumericalAbort, ResourceLimit) as exc:
        print(f"symstab: numerical abort ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ZeroClassUnsupported as exc:
        print(f"symstab: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except SymstabError as exc:
        print(f"symstab: bad input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report["tolerances"] = _tolerances(tol)
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
