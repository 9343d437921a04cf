"""Command-line front end.

Exit status: 0 success, 1 bad input, 2 regime violation, 3 verification found violations.

Instances come either from ``--input FILE`` (JSON) or from inline flags::

    {"dimension": 3,
     "cone": {"apex": [0, 0, 0], "axis": [1, 0, 1],
              "half_aperture": 0.5235987755982988, "flavor": "closed"},
     "subspace": "coords:0,1",
     "offset": [0, 0, 2]}

``subspace`` is either a list of spanning vectors or ``"coords:i,j,..."``
(0-based coordinate axes).  ``offset`` is optional.  All angles are radians
unless ``--degrees`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__, kernels
from .cone import Flavor, RoundCone
from .errors import RegimeError
from .linalg import SubspaceBasis, angle_to_complement, orthonormalize
from .oracle import (
    SampleMode,
    SamplerConfig,
    empirical_projection_check,
    l2_counterexample,
    l2_discretized_experiment,
)
from .projection import (
    ClassifierPolicy,
    classify,
    classify_affine,
    inverse_aperture,
    l2_threshold,
    orthant_max_aperture,
    project_open_cone,
    projected_aperture,
)
from .reverse_cbs import check_projection_implication, check_sign_lemma, enhanced_cbs_condition
from .witnesses import antipodal_witness, border_witness, equality_witness

EXIT_OK, EXIT_BAD_INPUT, EXIT_REGIME, EXIT_VIOLATIONS = 0, 1, 2, 3


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise BadInput(f"cannot parse vector {text!r}") from exc


@dataclass
class InstanceDescriptor:
    dimension: int
    apex: list[float]
    axis: list[float]
    half_aperture: float
    flavor: str
    subspace: Any  # "coords:..." string or list of spanning vectors
    offset: list[float] | None = None

    @classmethod
    def parse(cls, doc: dict) -> InstanceDescriptor:
        try:
            cone = doc["cone"]
            axis = [float(x) for x in cone["axis"]]
            dim = int(doc.get("dimension", len(axis)))
            apex = [float(x) for x in cone.get("apex", [0.0] * dim)]
            phi = float(cone["half_aperture"])
            flavor = Flavor(cone.get("flavor", "closed")).value
            sub = doc["subspace"]
            if isinstance(sub, str):
                if not sub.startswith("coords:"):
                    raise BadInput(f"unknown subspace shorthand {sub!r}")
            else:
                sub = [[float(x) for x in row] for row in sub]
            offset = doc.get("offset")
            offset = None if offset is None else [float(x) for x in offset]
        except (KeyError, TypeError, ValueError) as exc:
            raise BadInput(f"malformed instance: {exc}") from exc
        if len(axis) != dim or len(apex) != dim or (offset is not None and len(offset) != dim):
            raise BadInput("vector lengths do not match the instance dimension")
        return cls(dim, apex, axis, phi, flavor, sub, offset)

    def serialize(self) -> dict:
        doc = {
            "dimension": self.dimension,
            "cone": {
                "apex": self.apex,
                "axis": self.axis,
                "half_aperture": self.half_aperture,
                "flavor": self.flavor,
            },
            "subspace": self.subspace,
        }
        if self.offset is not None:
            doc["offset"] = self.offset
        return doc

    @staticmethod
    def normalize(doc: dict) -> dict:
        """Canonical form of a raw document: defaults filled, numbers as floats."""
        return InstanceDescriptor.parse(doc).serialize()

    def cone(self) -> RoundCone:
        return RoundCone(self.apex, self.axis, self.half_aperture, Flavor(self.flavor))

    def basis(self) -> SubspaceBasis:
        if isinstance(self.subspace, str):
            text = self.subspace[len("coords:"):]
            try:
                idx = [int(i) for i in text.split(",") if i.strip()]
            except ValueError as exc:
                raise BadInput(f"bad coordinate list {text!r}") from exc
            return SubspaceBasis.coordinate(idx, self.dimension)
        return orthonormalize(self.subspace, self.dimension)


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _instance(args) -> InstanceDescriptor:
    if args.input:
        try:
            with open(args.input) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise BadInput(f"cannot read {args.input}: {exc}") from exc
        inst = InstanceDescriptor.parse(doc)
        if args.phi is not None:
            inst.half_aperture = _angle(args, args.phi)
        elif args.degrees:
            inst.half_aperture = math.radians(inst.half_aperture)
    else:
        if args.axis is None or args.subspace is None or args.phi is None:
            raise BadInput("give --input FILE, or all of --axis, --subspace and --phi")
        axis = _floats(args.axis)
        dim = args.dim or len(axis)
        if args.subspace.startswith("coords:"):
            sub: Any = args.subspace
        else:
            sub = [_floats(row) for row in args.subspace.split(";") if row.strip()]
        doc = {
            "dimension": dim,
            "cone": {
                "axis": axis,
                "half_aperture": _angle(args, args.phi),
                "flavor": args.flavor,
            },
            "subspace": sub,
        }
        if args.apex:
            doc["cone"]["apex"] = _floats(args.apex)
        if args.offset:
            doc["offset"] = _floats(args.offset)
        inst = InstanceDescriptor.parse(doc)
    if args.dim and args.dim != inst.dimension:
        raise BadInput(f"--dim {args.dim} disagrees with instance dimension {inst.dimension}")
    return inst


def _policy(args) -> ClassifierPolicy:
    return ClassifierPolicy(args.angle_tol)


def cmd_classify(args):
    inst = _instance(args)
    cone, V = inst.cone(), inst.basis()
    if inst.offset is not None:
        result = classify_affine(cone, V, inst.offset, _policy(args))
    elif cone.flavor is Flavor.CLOSED:
        result = classify(cone, V, _policy(args))
    else:
        result = project_open_cone(cone, V, _policy(args))
    return {"instance": inst.serialize(), **result.to_dict()}, EXIT_OK


def cmd_project_open(args):
    args.flavor = Flavor.APEX_OPEN.value
    inst = _instance(args)
    inst.flavor = Flavor.APEX_OPEN.value
    result = project_open_cone(inst.cone(), inst.basis(), _policy(args))
    return {"instance": inst.serialize(), **result.to_dict()}, EXIT_OK


def cmd_aperture(args):
    if args.sweep:
        rows = []
        m = args.sweep
        for i in range(1, m + 1):
            psi = 0.5 * math.pi * i / m
            for j in range(m + 1):
                phi = psi * j / m
                rows.append({"phi": phi, "psi": psi, "projected_aperture": projected_aperture(phi, psi)})
        return rows, EXIT_OK
    if args.phi is None or args.psi is None:
        raise BadInput("aperture needs --phi and --psi (or --sweep N)")
    phi, psi = _angle(args, args.phi), _angle(args, args.psi)
    return {"phi": phi, "psi": psi, "projected_aperture": projected_aperture(phi, psi)}, EXIT_OK


def cmd_inverse_aperture(args):
    if args.phi1 is None or args.psi is None:
        raise BadInput("inverse-aperture needs --phi1 and --psi")
    phi1, psi = _angle(args, args.phi1), _angle(args, args.psi)
    return {"phi1": phi1, "psi": psi, "half_aperture": inverse_aperture(phi1, psi)}, EXIT_OK


def cmd_witness(args):
    inst = _instance(args)
    V = inst.basis()
    if args.kind == "equality":
        w = equality_witness(inst.axis, V, inst.half_aperture, seed=args.seed)
    elif args.kind == "antipodal":
        w = antipodal_witness(inst.axis, V, inst.half_aperture, seed=args.seed)
    else:
        w = border_witness(inst.axis, V, args.epsilon, seed=args.seed)
    return {"instance": inst.serialize(), "kind": args.kind, **w.to_dict()}, EXIT_OK


def cmd_verify(args):
    inst = _instance(args)
    cfg = SamplerConfig(args.seed, args.samples, SampleMode(args.mode))
    report = empirical_projection_check(
        inst.cone(), inst.basis(), cfg, _policy(args), workers=args.workers
    )
    doc = report.to_dict()
    doc["instance"] = inst.serialize()
    return doc, EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_orthant(args):
    ns = [args.n] if args.n else range(2, args.max_n + 1)
    rows = [{"n": n, "half_aperture": orthant_max_aperture(n)} for n in ns]
    return rows if len(rows) > 1 else rows[0], EXIT_OK


def cmd_l2_demo(args):
    threshold = l2_discretized_experiment(args.alpha, args.grid)
    t = args.t if args.t is not None else threshold - 1.0 / args.grid
    doc = {
        "alpha": args.alpha,
        "grid": args.grid,
        "threshold": threshold,
        "analytic_threshold": l2_threshold(args.alpha),
    }
    if t * args.grid >= 1:
        doc["counterexample"] = l2_counterexample(args.alpha, args.grid, t).to_dict()
    return doc, EXIT_OK


def cmd_cbs_check(args):
    inst = _instance(args)
    V = inst.basis()
    if args.u is None:
        raise BadInput("cbs-check needs --u")
    u = _floats(args.u)
    if len(u) != inst.dimension:
        raise BadInput("--u has the wrong dimension")
    if args.lemma == "implication":
        check = check_projection_implication(u, inst.axis, V, inst.half_aperture, args.tol)
        doc = check.to_dict()
    elif args.lemma == "sign":
        doc = check_sign_lemma(u, inst.axis, V, args.tol).to_dict()
    else:
        alpha = math.cos(inst.half_aperture)
        doc = {"alpha": alpha, "condition": enhanced_cbs_condition(u, inst.axis, V, alpha)}
    doc["psi"] = angle_to_complement(inst.axis, V)
    return {"instance": inst.serialize(), "lemma": args.lemma, **doc}, EXIT_OK


def _add_common(p):
    g = p.add_argument_group("instance")
    g.add_argument("--input", help="JSON instance file")
    g.add_argument("--axis", help="cone axis, comma separated")
    g.add_argument("--apex", help="cone apex, comma separated (default origin)")
    g.add_argument("--subspace", help='"coords:i,j" or spanning vectors "a,b,c;d,e,f"')
    g.add_argument("--offset", help="affine offset orthogonal to the subspace")
    g.add_argument("--flavor", default="closed", choices=[f.value for f in Flavor])
    g.add_argument("--dim", type=int, help="expected ambient dimension")
    g.add_argument("--phi", type=float, help="half aperture")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12, help="inequality tolerance")
    p.add_argument("--angle-tol", type=float, default=1e-9, help="boundary band for phi == psi")
    p.add_argument("--degrees", action="store_true", help="angles on input are in degrees")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="roundcone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        p.set_defaults(func=func)
        return p

    add("classify", cmd_classify, "classify the projection of a cone")
    add("project-open", cmd_project_open, "projection of an apex-open cone")
    p = add("aperture", cmd_aperture, "projected half aperture from phi and psi")
    p.add_argument("--psi", type=float)
    p.add_argument("--sweep", type=int, help="grid resolution for a (phi, psi) sweep")
    p = add("inverse-aperture", cmd_inverse_aperture, "widest phi with projected aperture phi1")
    p.add_argument("--phi1", type=float)
    p.add_argument("--psi", type=float)
    p = add("witness", cmd_witness, "construct an extremal vector")
    p.add_argument("--kind", choices=["equality", "antipodal", "border"], default="equality")
    p.add_argument("--epsilon", type=float, default=0.5)
    p = add("verify", cmd_verify, "check a classification against sampled cone members")
    p.add_argument("--mode", choices=[m.value for m in SampleMode], default="boundary")
    p.add_argument("--workers", type=int, default=1)
    p = add("orthant", cmd_orthant, "widest cone inside an orthant of R^n")
    p.add_argument("--n", type=int)
    p.add_argument("--max-n", type=int, default=10)
    p = add("l2-demo", cmd_l2_demo, "discretized L2(0,1) threshold experiment")
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--t", type=float, help="cut point for the counterexample")
    p = add("cbs-check", cmd_cbs_check, "evaluate a projected reverse CBS inequality")
    p.add_argument("--u", help="test vector (u1 for --lemma enhanced)")
    p.add_argument("--lemma", choices=["implication", "sign", "enhanced"], default="implication")
    return parser


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not serializable: {type(x)}")


def render(doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, default=_jsonable) + "\n"
    rows = doc if isinstance(doc, list) else [doc]
    keys = list(dict.fromkeys(k for r in rows for k in r))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(
            {k: json.dumps(v, default=_jsonable) if isinstance(v, (dict, list)) else v for k, v in r.items()}
        )
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, status = args.func(args)
    except RegimeError as exc:
        print(f"roundcone: regime violation: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (BadInput, ValueError) as exc:
        print(f"roundcone: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
