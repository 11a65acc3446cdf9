"""Command-line driver.

    hmf-theta weights lambda-index --shape s.json
    hmf-theta weights ptwt0 --p 5 --e 2 --f 1
    hmf-theta qexp apply --op theta --tau P:0 f.json
    hmf-theta qexp verify --identity theta-v-zero --random 50 --seed 7

Reports are JSON on stdout. Exit status: 0 pass, 1 a check failed,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import qexp as Q
from .builtin import BUILTIN_MODELS, builtin_model, default_bound
from .errors import HMFThetaError, NonDivisibleWeight, NotInKernel, TruncationTooSmall
from .identities import IDENTITIES, run_on_inputs, run_random
from .io import (
    dump_json,
    graded_from_json,
    graded_to_json,
    load_json,
    parse_fraction,
    qexp_from_json,
    qexp_to_json,
)
from .qexp import QExpansion
from .ring import GradedElement
from .shape import FieldShape, ThetaIndex, parse_tau
from .weights import (
    WeightVector,
    frob_weight_shift,
    hbasis_decompose,
    in_min_cone,
    lambda_contains,
    lambda_index,
    leq_hasse,
    ptwt0_feasible,
    rho,
    theta_weight_shift,
)


class UsageError(Exception):
    pass


def _digest(obj: Any) -> str:
    blob = json.dumps(obj, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _vector(text: str, shape: FieldShape | None, what: str) -> WeightVector | list[int]:
    text = text.strip()
    try:
        if text.startswith("["):
            values = json.loads(text)
        else:
            values = [int(x) for x in text.split(",") if x.strip()]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
            raise ValueError
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"{what}: expected an integer vector, got {text!r}") from None
    if shape is None:
        return values
    if len(values) != shape.d:
        raise UsageError(f"{what}: expected {shape.d} entries, got {len(values)}")
    return WeightVector(shape, values)


def _strs(xs) -> list[str]:
    return [str(x) for x in xs]


class Report:
    def __init__(self, argv: list[str]):
        self.command = argv
        self.checks: list[dict] = []
        self.result: Any = None
        self.digests: dict[str, str] = {}
        self._start = time.perf_counter()

    def check(self, name: str, status: str, **details) -> None:
        self.checks.append({"name": name, "status": status, "details": details})

    @property
    def failed(self) -> bool:
        return any(c["status"] == "fail" for c in self.checks)

    def emit(self) -> int:
        out = {
            "command": self.command,
            "status": "fail" if self.failed else "pass",
            "result": self.result,
            "checks": self.checks,
            "config_digests": self.digests,
            "timing": {"seconds": f"{time.perf_counter() - self._start:.3f}"},
        }
        sys.stdout.write(json.dumps(out, indent=2) + "\n")
        return 1 if self.failed else 0


# weights
def _load_shape(args, report: Report) -> FieldShape:
    if not args.shape:
        raise UsageError("--shape is required")
    data = load_json(args.shape)
    report.digests[args.shape] = _digest(data)
    return FieldShape.from_json(data)


def cmd_weights(args, report: Report) -> None:
    sub = args.wcmd
    if sub == "ptwt0":
        cmd_ptwt0(args, report)
        return
    shape = _load_shape(args, report)
    if sub == "cone-check":
        k = _vector(args.k, shape, "k")
        report.result = str(in_min_cone(k)).lower()
    elif sub == "shift-theta":
        tau = shape.normalize_tau(parse_tau(args.tau))
        k2, l2 = theta_weight_shift(tau, _vector(args.k, shape, "k"), _vector(args.l, shape, "l"))
        report.result = {"k": _strs(k2), "l": _strs(l2)}
    elif sub == "shift-frob":
        shape.prime(args.prime)
        k2, l2 = frob_weight_shift(args.prime, _vector(args.k, shape, "k"), _vector(args.l, shape, "l"))
        report.result = {"k": _strs(k2), "l": _strs(l2)}
    elif sub == "rho":
        k = _vector(args.k, shape, "k")
        chi = rho(k)
        report.result = {
            "classes": _strs(chi.classes),
            "moduli": _strs(chi.moduli),
            "in_lambda": str(lambda_contains(k)).lower(),
        }
    elif sub == "lambda-index":
        report.result = str(lambda_index(shape))
        report.check("index equals prod(p^f - 1)", "pass")
    elif sub == "hbasis":
        report.result = _strs(hbasis_decompose(_vector(args.k, shape, "k")))
    elif sub == "leq-hasse":
        m = leq_hasse(_vector(args.k, shape, "k"), _vector(args.k2, shape, "k'"))
        report.result = None if m is None else _strs(m)


def cmd_ptwt0(args, report: Report) -> None:
    if args.grid:
        cases = [(p, e, f) for p in (2, 3, 5, 7, 11, 13) for e in range(1, 5) for f in range(1, 5)]
    else:
        if args.p is None or args.e is None or args.f is None:
            raise UsageError("ptwt0 needs --p, --e and --f (or --grid)")
        cases = [(args.p, args.e, args.f)]
    results = []
    for p, e, f in cases:
        found = sorted(ptwt0_feasible(p, e, f))
        results.append({"p": str(p), "e": str(e), "f": str(f), "solutions": [_strs(m) for m in found]})
        if p ** f > 3 and e * f > 1:
            status = "pass" if not found else "fail"
            report.check(f"ptwt0 empty for p={p} e={e} f={f}", status,
                         **({"witness": _strs(found[0])} if found else {}))
        elif e * f == 1:
            status = "pass" if (0,) in found else "fail"
            report.check(f"ptwt0 contains 0 for p={p} e={e} f={f}", status)
    report.result = results if args.grid else results[0]


# qexp
def _model_names(args) -> list[str]:
    names = args.model or list(BUILTIN_MODELS)
    for n in names:
        if n not in BUILTIN_MODELS:
            raise UsageError(f"unknown model {n!r}; known: {', '.join(BUILTIN_MODELS)}")
    return names


def _serialize_input(x: Any) -> Any:
    if isinstance(x, QExpansion):
        return qexp_to_json(x)
    if isinstance(x, GradedElement):
        return graded_to_json(x)
    return x


def _size(inputs: list) -> int:
    total = 0
    for x in inputs:
        if isinstance(x, QExpansion):
            total += len(x.terms)
        elif isinstance(x, GradedElement):
            total += sum(len(f.terms) for f in x)
    return total


def cmd_qexp_apply(args, report: Report) -> QExpansion:
    data = load_json(args.file)
    report.digests[args.file] = _digest(data)
    f = qexp_from_json(data)
    shape = f.model.shape
    op = args.op
    if op == "theta":
        if not args.tau:
            raise UsageError("--tau is required for theta")
        return Q.apply_theta(shape.normalize_tau(parse_tau(args.tau)), f)
    if op in ("v", "v0", "v0-preimage"):
        if not args.prime:
            raise UsageError(f"--prime is required for {op}")
        shape.prime(args.prime)
        if op == "v":
            return Q.apply_v(args.prime, f)
        if op == "v0":
            return Q.apply_v0(args.prime, f)
        return Q.v0_preimage(args.prime, f)
    if op in ("hasse", "g"):
        if not args.theta:
            raise UsageError(f"--theta PRIME:i,j is required for {op}")
        pid, _, rest = args.theta.rpartition(":")
        try:
            i, j = (int(x) for x in rest.split(","))
        except ValueError:
            raise UsageError(f"bad --theta {args.theta!r}") from None
        theta = shape.normalize(ThetaIndex(pid, i, j))
        fn = Q.mul_hasse if op == "hasse" else Q.mul_g
        return fn(theta, f, args.power)
    return Q.frob_coeffs(f)


def cmd_qexp_verify(args, report: Report) -> None:
    ident = args.identity
    if args.files:
        inputs = _file_inputs(ident, args, report)
        model = inputs[0].model
        ok, details = run_on_inputs(ident, model, inputs)
        report.check(f"{ident} on files", "pass" if ok else "fail", **_stringify(details))
        return
    count = 20 if args.random is None else args.random
    for name in _model_names(args):
        model = builtin_model(name)
        bound = parse_fraction(args.bound) if args.bound else default_bound(name)
        report.digests[name] = _digest(model.to_json())
        results = run_random(ident, model, bound, count, args.seed)
        failures = [r for r in results if not r.ok]
        details = {"cases": str(count), "failures": str(len(failures)), "bound": str(bound)}
        if failures:
            worst = min(failures, key=lambda r: (_size(r.inputs), r.case))
            details["counterexample"] = {
                "case": str(worst.case),
                "details": _stringify(worst.details),
                "inputs": [_serialize_input(x) for x in worst.inputs],
            }
        report.check(f"{ident} on {name}", "fail" if failures else "pass", **details)


def _stringify(d: dict) -> dict:
    return {k: (v if isinstance(v, (str, list, dict)) else str(v)) for k, v in d.items()}


def _file_inputs(ident: str, args, report: Report) -> list:
    loaded = []
    for path in args.files:
        data = load_json(path)
        report.digests[path] = _digest(data)
        loaded.append(data)
    if ident == "exactness":
        if not args.prime:
            raise UsageError("--prime is required for exactness on files")
        x = graded_from_json(loaded[0])
        # the file holds a candidate kernel element; probe it directly
        return [_ExactnessInput(x, args.prime)]
    exps = [qexp_from_json(d) for d in loaded]
    if ident == "derivation":
        return exps[:2] if len(exps) > 1 else [exps[0], exps[0]]
    if len(exps) != 1:
        raise UsageError(f"{ident} takes one expansion file")
    return exps


class _ExactnessInput:
    """Marker so that file-based exactness probes the given element itself."""

    def __init__(self, x: GradedElement, pid: str):
        self.x = x
        self.pid = pid
        self.model = x.model


def _verify_exactness_file(report: Report, inp: _ExactnessInput) -> None:
    from .ring import exactness_probe
    from .shape import Tau

    verdict = exactness_probe(inp.pid, Tau(inp.pid, 0), inp.x)
    report.result = {"verdict": verdict.status, **_stringify(verdict.detail)}
    if verdict.y is not None:
        report.result["preimage"] = graded_to_json(verdict.y) if not verdict.y.is_zero() else []
    report.check("exactness probe", "pass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmf-theta", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="cmd", required=True)

    w = top.add_parser("weights", help="weight lattice computations")
    wsub = w.add_subparsers(dest="wcmd", required=True)
    shape_opt = argparse.ArgumentParser(add_help=False)
    shape_opt.add_argument("--shape", help="shape config JSON file")
    p = wsub.add_parser("cone-check", parents=[shape_opt])
    p.add_argument("k")
    p = wsub.add_parser("shift-theta", parents=[shape_opt])
    p.add_argument("tau")
    p.add_argument("k")
    p.add_argument("l")
    p = wsub.add_parser("shift-frob", parents=[shape_opt])
    p.add_argument("prime")
    p.add_argument("k")
    p.add_argument("l")
    p = wsub.add_parser("rho", parents=[shape_opt])
    p.add_argument("k")
    wsub.add_parser("lambda-index", parents=[shape_opt])
    p = wsub.add_parser("hbasis", parents=[shape_opt])
    p.add_argument("k")
    p = wsub.add_parser("leq-hasse", parents=[shape_opt])
    p.add_argument("k")
    p.add_argument("k2")
    p = wsub.add_parser("ptwt0")
    p.add_argument("--p", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--grid", action="store_true", help="run p <= 13, e, f <= 4")

    q = top.add_parser("qexp", help="q-expansion operators and identity suites")
    qsub = q.add_subparsers(dest="qcmd", required=True)
    a = qsub.add_parser("apply")
    a.add_argument("--op", required=True,
                   choices=["theta", "v", "v0", "v0-preimage", "hasse", "g", "frob"])
    a.add_argument("--tau", help="PRIME:i")
    a.add_argument("--prime")
    a.add_argument("--theta", help="PRIME:i,j")
    a.add_argument("--power", type=int, default=1)
    a.add_argument("-o", "--output")
    a.add_argument("file")
    v = qsub.add_parser("verify")
    v.add_argument("--identity", required=True, choices=list(IDENTITIES))
    v.add_argument("--model", action="append", help="builtin model (repeatable; default all)")
    v.add_argument("--bound", help="truncation bound override, e.g. 60 or 121/2")
    v.add_argument("--random", type=int, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--prime", help="prime for exactness on a file")
    v.add_argument("files", nargs="*")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(argv)
    try:
        if args.cmd == "weights":
            cmd_weights(args, report)
        elif args.qcmd == "apply":
            out = cmd_qexp_apply(args, report)
            text = dump_json(qexp_to_json(out), args.output)
            if not args.output:
                sys.stdout.write(text)
                return 0
            report.result = {"written": args.output}
        elif args.identity == "exactness" and args.files:
            inputs = _file_inputs("exactness", args, report)
            _verify_exactness_file(report, inputs[0])
        else:
            cmd_qexp_verify(args, report)
    except (NotInKernel, NonDivisibleWeight, TruncationTooSmall) as exc:
        report.check("operation", "fail", error=type(exc).__name__, message=str(exc))
    except (UsageError, HMFThetaError, ValueError) as exc:
        sys.stderr.write(f"hmf-theta: error: {exc}\n")
        return 2
    return report.emit()


if __name__ == "__main__":
    sys.exit(main())
