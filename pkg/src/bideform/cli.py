"""Command-line driver.

Exit codes: 0 on success, 1 when a verification fails or an obstruction is
nonzero, 2 on malformed input.  ``--machine`` switches the output to a JSON
object carrying the same data as the text rendering.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import deformation as dfm
from .bialgebra import (
    builtin_example,
    emit_bialgebra,
    parse_bialgebra,
    parse_lifting_tables,
    verify_bialgebra,
)
from .cohomology import cohomology, emit_total_cochain
from .errors import BideformError, ParseError
from .fields import GF, QQ

_USAGE_ERROR = 2
_CHECK_FAILED = 1


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


class _Output:
    def __init__(self, command, machine: bool):
        self.machine = machine
        self.data = {"command": command, "inputs": {}}
        self.lines = []

    def add_input(self, path):
        self.data["inputs"][os.path.basename(path)] = _digest(path)

    def say(self, text):
        self.lines.append(text)

    def put(self, key, value):
        self.data[key] = value

    def flush(self):
        if self.machine:
            print(json.dumps(self.data, sort_keys=True))
        else:
            for name, digest in sorted(self.data["inputs"].items()):
                print(f"# input {name} sha256={digest}")
            for line in self.lines:
                print(line)


def _load_bialgebra(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bialgebra(fh.read())


def _load_deformation(B, path):
    with open(path, "r", encoding="utf-8") as fh:
        return dfm.parse_deformation(B, fh.read())


def _report_out(out, report):
    out.put("report", report.to_dict())
    out.say(report.render_text())


def _cmd_verify(args) -> int:
    out = _Output("verify", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    report = verify_bialgebra(B)
    _report_out(out, report)
    out.flush()
    return 0 if report.passed else _CHECK_FAILED


def _cmd_cohomology(args) -> int:
    out = _Output("cohomology", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    limit = (args.n + 1) * B.top_degree
    if abs(args.degree) > limit:
        print(
            f"degree {args.degree} is outside the admissible window "
            f"[-{limit}, {limit}] for level {args.n} over this bialgebra",
            file=sys.stderr,
        )
        return _USAGE_ERROR
    res = cohomology(B, args.n, args.degree, with_representatives=args.representatives)
    data = res.to_dict()
    if res.dim_cocycles == 0 and res.dim_coboundaries == 0 and res.dimension == 0:
        data["reason"] = "empty cochain spaces"
    out.put("result", data)
    out.say(
        f"h^{args.n} at degree {args.degree}: dimension {res.dimension} "
        f"(cocycles {res.dim_cocycles}, coboundaries {res.dim_coboundaries})"
    )
    if "reason" in data:
        out.say(f"reason: {data['reason']}")
    if args.representatives:
        reps = [emit_total_cochain(tc) for tc in res.representatives]
        out.put("representatives", reps)
        for k, text in enumerate(reps):
            out.say(f"representative {k}:")
            out.say(text.rstrip())
    out.flush()
    return 0


def _cmd_rigid(args) -> int:
    out = _Output("rigid", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    report = dfm.rigidity_check(B)
    _report_out(out, report)
    out.say(f"graded-rigid: {report.numbers['graded_rigid']}")
    out.flush()
    return 0 if report.passed else _CHECK_FAILED


def _cmd_classify(args) -> int:
    out = _Output("classify", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    res = cohomology(B, 2, -1, with_representatives=True)
    stem = os.path.splitext(os.path.basename(args.bialgebra))[0]
    outdir = args.out_dir
    os.makedirs(outdir, exist_ok=True)
    files = []
    for k, rep in enumerate(res.representatives):
        d = dfm.deformation_from_cocycle(B, rep)
        path = os.path.join(outdir, f"{stem}.class{k}.def")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dfm.emit_deformation(d, over=os.path.basename(args.bialgebra)))
        files.append(path)
    out.put("dimension", res.dimension)
    out.put("files", files)
    out.say(f"first-order classes: dimension {res.dimension}")
    for path in files:
        out.say(f"wrote {path}")
    out.flush()
    return 0


def _cmd_deform(args) -> int:
    out = _Output(f"deform {args.action}", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    d = _load_deformation(B, args.deformation)
    out.add_input(args.deformation)

    if args.action == "verify":
        report = dfm.verify_deformation(d)
        _report_out(out, report)
        out.flush()
        return 0 if report.passed else _CHECK_FAILED

    if args.action == "oracle":
        report = dfm.truncated_ring_oracle(d)
        _report_out(out, report)
        out.flush()
        return 0 if report.passed else _CHECK_FAILED

    if args.action == "obstruct":
        obs = dfm.obstruction(d)
        obstructed = obs.is_obstructed()
        out.put("obstructed", obstructed)
        out.put("class", emit_total_cochain(obs.canonical))
        if obstructed:
            out.say("obstruction class is nonzero:")
            out.say(emit_total_cochain(obs.canonical).rstrip())
        else:
            out.put("solution", emit_total_cochain(obs.solution))
            out.say("obstruction vanishes; a solving pair:")
            out.say(emit_total_cochain(obs.solution).rstrip())
        out.flush()
        return _CHECK_FAILED if obstructed else 0

    if args.action == "extend":
        res = dfm.extend(d, all_extensions=args.all)
        if not res.extended:
            out.put("obstructed", True)
            out.put("class", emit_total_cochain(res.obstruction.canonical))
            out.say("cannot extend; obstruction class:")
            out.say(emit_total_cochain(res.obstruction.canonical).rstrip())
            out.flush()
            return _CHECK_FAILED
        text = dfm.emit_deformation(res.deformation, over=os.path.basename(args.bialgebra))
        out.put("obstructed", False)
        out.put("deformation", text)
        if res.family is not None:
            particular, kernel = res.family
            out.put(
                "family",
                {
                    "particular": emit_total_cochain(particular),
                    "kernel": [emit_total_cochain(tc) for tc in kernel],
                },
            )
            out.say(f"extension family: particular plus {len(kernel)} kernel directions")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            out.say(f"wrote {args.out}")
        else:
            out.say(text.rstrip())
        out.flush()
        return 0

    if args.action == "trivialize":
        res = dfm.trivialize(d)
        if not res.trivialized:
            out.put("trivial", False)
            out.put("order", res.order)
            out.put("class", emit_total_cochain(res.obstruction_class))
            out.say(f"nontrivial at order {res.order}; class:")
            out.say(emit_total_cochain(res.obstruction_class).rstrip())
            out.flush()
            return _CHECK_FAILED
        morph = res.morphism
        labels = B.space.labels
        lines = [f"morphism level {morph.level}"]
        parts_data = []
        for s, gm in enumerate(morph.parts, start=1):
            entries = [
                f"{labels[i]} <- {labels[j]} : {B.field.format(v)}"
                for i, j, v in gm.entries()
            ]
            parts_data.append(entries)
            if entries:
                lines.append(f"part order {s}")
                lines.extend(entries)
        out.put("trivial", True)
        out.put("morphism", parts_data)
        for line in lines:
            out.say(line)
        out.flush()
        return 0

    raise AssertionError(args.action)


def _cmd_lift(args) -> int:
    out = _Output("lift decompose", args.machine)
    B = _load_bialgebra(args.bialgebra)
    out.add_input(args.bialgebra)
    with open(args.tables, "r", encoding="utf-8") as fh:
        tables = parse_lifting_tables(fh.read())
    out.add_input(args.tables)
    d = dfm.lifting_decompose(B, tables)
    text = dfm.emit_deformation(d, over=os.path.basename(args.bialgebra))
    out.put("deformation", text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.say(f"wrote {args.out}")
    else:
        out.say(text.rstrip())
    out.flush()
    return 0


def _cmd_example(args) -> int:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise ParseError(f"parameters look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    kwargs = {}
    if "n" in params:
        kwargs["n"] = int(params.pop("n"))
    if "p" in params:
        kwargs["p"] = int(params.pop("p"))
    if "q" in params:
        field = GF(kwargs["p"]) if "p" in kwargs else QQ
        kwargs["q"] = field.parse(params.pop("q"))
    if params:
        raise ParseError(f"unknown parameters: {sorted(params)}")
    B = builtin_example(args.name, **kwargs)
    text = emit_bialgebra(B)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.out}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bideform",
        description="exact graded bialgebra deformations and cohomology",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="check the bialgebra axioms of a definition file")
    p.add_argument("bialgebra")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("cohomology", help="graded cohomology dimensions and representatives")
    p.add_argument("bialgebra")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--representatives", action="store_true")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_cohomology)

    p = sub.add_parser("rigid", help="graded rigidity criterion")
    p.add_argument("bialgebra")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_rigid)

    p = sub.add_parser("classify", help="first-order deformations up to equivalence")
    p.add_argument("bialgebra")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("deform", help="operations on deformation files")
    p.add_argument("action", choices=["verify", "oracle", "obstruct", "extend", "trivialize"])
    p.add_argument("bialgebra")
    p.add_argument("deformation")
    p.add_argument("--all", action="store_true", help="with extend: emit the affine family")
    p.add_argument("--out", help="with extend: write the extended deformation here")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_deform)

    p = sub.add_parser("lift", help="decompose filtered tables into a deformation")
    p.add_argument("what", choices=["decompose"])
    p.add_argument("bialgebra")
    p.add_argument("tables")
    p.add_argument("--out")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("example", help="emit a built-in example bialgebra")
    p.add_argument("name")
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_example)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    except BideformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
