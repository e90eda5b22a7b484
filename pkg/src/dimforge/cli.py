"""Command-line driver.

Exit codes: 0 success, 1 malformed arguments, 2 configuration invariant
failure, 3 a certificate failed to replay or an internal contract broke.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field

from . import pell
from .config import Config, load_config
from .dimgroup import (
    DimGroupParams, congruence_failure, is_positive, make_elem, trace_state, validate_params,
)
from .exceptions import ContractViolation, InvalidParams
from .fungroup import fundamental_group, parse_supernatural, uhf_fundamental_group, verify_witness
from .orderauto import (
    IntMat2, Obstruction, ObstructionRow, classify_residues, commutation_obstruction,
    replay_obstruction,
)
from .quad import QuadRat, RingParams, parse_quad
from .sunits import positive_unit_generators

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_CONTRACT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Output:
    """Records for structured mode, lines for text mode."""

    records: list[dict] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def emit(self, line: str = "", **record):
        if line is not None:
            self.lines.append(line)
        if record:
            self.records.append(record)


# -- serialization helpers ---------------------------------------------------


def _obstruction_certificate(obs: Obstruction) -> dict:
    return {
        "kind": "residue-obstruction",
        "modulus": obs.modulus,
        "table": [row.to_record() for row in obs.table],
    }


def _obstruction_from_certificate(cert: dict, verdict: str) -> Obstruction:
    rows = tuple(ObstructionRow.parse(r) for r in cert["table"])
    witness = next(((r.c1, r.c2) for r in rows if r.mismatch is None), None)
    return Obstruction(cert["modulus"], verdict == "possible", witness, rows)


def replay_records(records: list[dict]) -> list[str]:
    """Re-verify every certificate embedded in structured output; return failures."""
    failures = []
    for rec in records:
        cert = rec.get("certificate")
        if not cert:
            continue
        if cert.get("kind") == "residue-obstruction":
            ok = replay_obstruction(_obstruction_from_certificate(cert, rec["verdict"]))
        else:
            ok = pell.replay_certificate(pell.Certificate.from_record(cert["record"]))
        if not ok:
            failures.append(f"{rec.get('result')}: certificate {cert} failed replay")
    return failures


def _pell_cert(cert: pell.Certificate) -> dict:
    return {**cert.as_dict(), "record": cert.to_record()}


def _lam(text: str, ring: RingParams) -> QuadRat:
    try:
        return parse_quad(text, ring)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _gens(lams) -> str:
    return "{" + ", ".join(lam.pretty() for lam in lams) + "}"


# -- subcommands -------------------------------------------------------------


def cmd_pell(args, cfg: Config, out: Output):
    v = pell.solve_norm_equation(args.d, args.n, args.sieve_cap or cfg.sieve_cap)
    eq = f"x^2-{args.d}*y^2={args.n}"
    if v.solvable:
        sols = [list(s) for s in v.solutions]
        out.emit(f"{eq}: solvable", result="pell", d=args.d, n=args.n, verdict="solvable",
                 solutions=sols, bound=v.bound)
        out.emit(f"  solutions (x>=0, 0<=y<={v.bound}): "
                 + ", ".join(f"({x},{y})" for x, y in v.solutions))
    else:
        out.emit(f"{eq}: unsolvable", result="pell", d=args.d, n=args.n, verdict="unsolvable",
                 certificate=_pell_cert(v.certificate))
        out.emit(f"  certificate: {v.certificate.to_record()}")


def cmd_unit(args, cfg: Config, out: Output):
    cf = pell.cf_expand(args.d)
    x, y, sgn = pell.fundamental_unit(args.d)
    out.emit(f"sqrt({args.d}) = {cf}", result="unit", d=args.d, verdict=f"norm{sgn:+d}",
             cf=[cf.a0, list(cf.period)], unit=[x, y], norm=sgn)
    out.emit(f"fundamental unit {x}+{y}*sqrt({args.d}), norm {sgn:+d}")


def cmd_implus(args, cfg: Config, out: Output):
    ring = RingParams(args.d or cfg.d, args.p or cfg.p)
    group = positive_unit_generators(ring)
    st = group.splitting
    certs = [_pell_cert(c) for c in st.certificates]
    out.emit(
        f"positive units of Z[1/{ring.p}][sqrt({ring.d})]: generators {_gens(group.generators)} rank {group.rank}",
        result="implus", d=ring.d, p=ring.p, verdict=st.kind,
        generators=[g.to_string() for g in group.generators], rank=group.rank,
        witness=st.witness.to_string() if st.witness is not None else None,
    )
    out.emit(f"  {group.to_record()}")
    out.emit(f"  {ring.p} is {st}")
    for c in certs:
        out.emit(f"  certificate: {c['record']}", result="implus-certificate", verdict="unsolvable",
                 certificate=c)


def cmd_dimcheck(args, cfg: Config, out: Output):
    params = cfg.params
    validate_params(params)
    if args.elem is None:
        out.emit(f"{params.describe()}: parameters ok", result="dimcheck", verdict="ok")
        return
    try:
        i, j, k, x, y = (int(v) for v in args.elem.split(","))
    except ValueError as exc:
        raise UsageError(f"--elem expects i,j,k,x,y: {exc}") from exc
    reason = congruence_failure(params, j, k, x, y)
    if reason:
        out.emit(f"NOT A MEMBER: {reason}", result="dimcheck", verdict="not-a-member", reason=reason)
        return
    e = make_elem(params, i, j, k, x, y)
    tr = trace_state(e)
    out.emit(f"MEMBER: {e}", result="dimcheck", verdict="member", element=e.to_string(),
             positive=is_positive(e), trace=tr.to_string())
    out.emit(f"  positive={is_positive(e)} trace={tr.pretty()}")


def cmd_classify(args, cfg: Config, out: Output):
    params = cfg.params
    lam = _lam(args.lam, params.ring)
    classes = classify_residues(params, lam, args.mod, args.det_sign)
    mod = classes[0].modulus if classes else (args.mod or _default_mod(params))
    out.emit(f"lambda={lam.pretty()}: {len(classes)} residue classes mod {mod}",
             result="classify", verdict=f"{len(classes)} classes", modulus=mod,
             classes=[str(c) for c in classes])
    for c in classes:
        out.emit(f"  {c}")


def cmd_verify_witness(args, cfg: Config, out: Output):
    params = cfg.params
    lam = _lam(args.lam, params.ring)
    try:
        M = IntMat2.parse(args.matrix)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    chk = verify_witness(params, lam, M)
    if chk:
        img = chk.image_of_unit
        out.emit(
            f"verified: lambda={lam.pretty()} M={M} phi(u)=({trace_state(img).pretty()},({img.x},{img.y}))",
            result="verify-witness", verdict="verified", matrix=str(M),
            image=[trace_state(img).to_string(), img.x, img.y],
        )
    else:
        out.emit(f"rejected: {chk.reason}", result="verify-witness", verdict="rejected",
                 reason=chk.reason)


def _default_mod(params: DimGroupParams) -> int:
    from math import lcm
    return lcm(params.m1, params.m2)


def _emit_obstruction(out: Output, obs: Obstruction, l1: QuadRat, l2: QuadRat):
    out.emit(
        f"obstruction {l1.pretty()} vs {l2.pretty()} mod {obs.modulus}: {obs.verdict}"
        f" ({len(obs.table)} class pairs)",
        result="obstruction", l1=l1.to_string(), l2=l2.to_string(), verdict=obs.verdict,
        modulus=obs.modulus,
        witness=[str(c) for c in obs.witness] if obs.witness else None,
        certificate=_obstruction_certificate(obs),
    )
    out.emit("  class1 | class2 | class1*class2 | class2*class1 | first mismatch")
    for row in obs.table:
        out.emit(f"  {row.to_record()}")


def cmd_obstruction(args, cfg: Config, out: Output):
    params = cfg.params
    l1, l2 = _lam(args.l1, params.ring), _lam(args.l2, params.ring)
    obs = commutation_obstruction(params, l1, l2, args.mod)
    _check_obstruction(params, l1, l2, obs)
    _emit_obstruction(out, obs, l1, l2)


def _check_obstruction(params, l1, l2, obs):
    full = replay_obstruction(obs, classify_residues(params, l1, obs.modulus),
                              classify_residues(params, l2, obs.modulus))
    if not full:
        raise ContractViolation("obstruction table failed replay")


def cmd_fungroup(args, cfg: Config, out: Output):
    if args.uhf is not None:
        try:
            n = parse_supernatural(args.uhf)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        primes = uhf_fundamental_group(n)
        out.emit("UHF fundamental group: free abelian on {" + ", ".join(map(str, primes)) + "}",
                 result="fungroup-uhf", verdict="free-abelian", generators=primes)
        return
    _fungroup(cfg, cfg.params, args.search_bound or cfg.search_bound, out)


def _fungroup(cfg, params, bound, out: Output):
    report = fundamental_group(params, bound)
    gens = report.upper_bound.generators
    out.emit(
        f"upper bound IM+: {_gens(gens)} ({report.upper_bound.splitting.kind})",
        result="fungroup", verdict=report.equality,
        generators=[g.to_string() for g in gens],
        witnesses=[[lam.to_string(), str(f.M)] for lam, f in report.witnessed],
        search_bound=bound,
    )
    for lam, f in report.witnessed:
        out.emit(f"  witness for {lam.pretty()}: M={f.M}")
    for lam in report.missing:
        out.emit(f"  no witness for {lam.pretty()} with entries <= {bound}")
    out.emit(f"equality={report.equality}")
    return report


def cmd_report(args, cfg: Config, out: Output):
    params = cfg.params
    validate_params(params)
    p, s = params.ring.p, params.s
    out.emit(f"dimforge report for {params.describe()}", result="params", verdict="ok",
             params=[params.ring.d, p, s, params.m1, params.m2])
    out.emit(f"  {p}^{s} = 1 mod {params.m1} and mod {params.m2}: congruence coupling well defined")
    report = _fungroup(cfg, params, args.search_bound or cfg.search_bound, out)
    lams = [lam for lam, _ in report.witnessed]
    if report.equality != "established":
        out.emit("  note: equality open; the verdict below concerns the witnessed generators only")
    modulus = _default_mod(params)
    for lam in lams:
        classes = classify_residues(params, lam, modulus)
        out.emit(f"residue classes for {lam.pretty()} mod {modulus}: {len(classes)}",
                 result="classify", l=lam.to_string(), verdict=f"{len(classes)} classes",
                 modulus=modulus, classes=[str(c) for c in classes])
        for c in classes:
            out.emit(f"  {c}")
    blocked = None
    escalated = modulus
    for l1, l2 in itertools.combinations(lams, 2):
        obs = commutation_obstruction(params, l1, l2, modulus)
        if obs.possible:
            escalated = modulus * params.m1
            obs = commutation_obstruction(params, l1, l2, escalated)
        _check_obstruction(params, l1, l2, obs)
        _emit_obstruction(out, obs, l1, l2)
        if not obs.possible and blocked is None:
            blocked = (l1, l2)
    if blocked is not None:
        line = f"NO commuting trace-scaling pair at K0 level for generators {_gens(lams)}"
        verdict = "no-commuting-pair"
    else:
        line = f"OBSTRUCTION NOT FOUND (residue level) at modulus {escalated}"
        verdict = "obstruction-not-found"
    out.emit(line, result="report", verdict=verdict, generators=[lam.to_string() for lam in lams],
             modulus=escalated, blocking_pair=[x.to_string() for x in blocked] if blocked else None)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="key=value config file (default: $DIMFORGE_CONFIG, then paper.cfg)")
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS,
                        help="output mode; overrides outputMode from the config")
    common.add_argument("--replay", action="store_true", default=argparse.SUPPRESS,
                        help="re-verify every certificate in the produced output")

    parser = _Parser(prog="dimforge", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("pell", parents=[common], help="decide x^2 - d*y^2 = n")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sieve-cap", type=int)
    sp.set_defaults(func=cmd_pell)

    sp = sub.add_parser("unit", parents=[common], help="continued fraction and fundamental unit")
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(func=cmd_unit)

    sp = sub.add_parser("implus", parents=[common], help="positive units of Z[1/p][sqrt d]")
    sp.add_argument("--d", type=int)
    sp.add_argument("--p", type=int)
    sp.set_defaults(func=cmd_implus)

    sp = sub.add_parser("dimcheck", parents=[common], help="validate parameters or an element of E")
    sp.add_argument("--elem", help="i,j,k,x,y")
    sp.set_defaults(func=cmd_dimcheck)

    sp = sub.add_parser("classify", parents=[common], help="residue classes of automorphism matrices")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--mod", type=int)
    sp.add_argument("--det-sign", type=int, choices=(1, -1))
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify-witness", parents=[common], help="check a (lambda, M) witness")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--matrix", required=True, help="a,b,c,d or [[a,b],[c,d]]")
    sp.set_defaults(func=cmd_verify_witness)

    sp = sub.add_parser("obstruction", parents=[common], help="residue-level commutation test")
    sp.add_argument("--l1", required=True)
    sp.add_argument("--l2", required=True)
    sp.add_argument("--mod", type=int)
    sp.set_defaults(func=cmd_obstruction)

    sp = sub.add_parser("fungroup", parents=[common], help="fundamental group report")
    sp.add_argument("--uhf", help="supernatural number such as 2:inf,3:inf")
    sp.add_argument("--search-bound", type=int)
    sp.set_defaults(func=cmd_fungroup)

    sp = sub.add_parser("report", parents=[common], help="end-to-end trace-scaling obstruction report")
    sp.add_argument("--search-bound", type=int)
    sp.set_defaults(func=cmd_report)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(getattr(args, "config", None))
    except InvalidParams as exc:
        print(f"dimforge: configuration error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"dimforge: cannot read configuration: {exc}", file=stderr)
        return EXIT_USAGE
    mode = getattr(args, "format", None) or cfg.output_mode
    out = Output()
    try:
        args.func(args, cfg, out)
    except UsageError as exc:
        print(f"dimforge: {exc}", file=stderr)
        return EXIT_USAGE
    except InvalidParams as exc:
        print(f"dimforge: invalid parameters: {exc}", file=stderr)
        return EXIT_CONFIG
    except (ContractViolation, AssertionError) as exc:
        print(f"dimforge: contract violation: {exc}", file=stderr)
        return EXIT_CONTRACT
    except ValueError as exc:
        print(f"dimforge: {exc}", file=stderr)
        return EXIT_USAGE

    if mode == "structured":
        for rec in out.records:
            print(json.dumps(rec, sort_keys=True), file=stdout)
    else:
        for line in out.lines:
            print(line, file=stdout)

    if getattr(args, "replay", False):
        # round-trip through the serialized form so the replay sees only the output
        records = [json.loads(json.dumps(r)) for r in out.records]
        failures = replay_records(records)
        for f in failures:
            print(f"dimforge: replay failed: {f}", file=stderr)
        if failures:
            return EXIT_CONTRACT
        n = sum(1 for r in records if r.get("certificate"))
        print(f"replay: {n} certificate(s) re-verified", file=stderr)
    return EXIT_OK


def main():
    sys.exit(run())
