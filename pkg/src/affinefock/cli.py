"""Command-line driver: act on states, run verification sweeps, emit tables.

Exit codes: 0 all checks passed, 1 an algebraic identity failed, 2 input could
not be parsed, 3 inputs parse but are semantically incompatible.

The config file is JSON:

    {
      "algebra": {"n": 1, "sigma": []},
      "module":  {"kind": "heisenberg_fock", "level": "1", "lam": ["1"]},
      "engine":  "general",
      "window":  {"max_mode": 3, "max_degree": 3, "samples": 20},
      "seed":    2024,
      "output":  "text"
    }

Module descriptors:
    {"kind": "character", "level": "0",
     "assignments": [{"element": "h1", "mode": 0, "value": "2"}]}
    {"kind": "evaluation", "level": "0", "rep": "block", "block": 1, "s": "1"}
    {"kind": "evaluation", "level": "0", "rep": "trivial", "dim": 1, "s": "1"}
    {"kind": "heisenberg_fock", "level": "1", "lam": ["1", "-2"]}

Generator names: `c` (central), `hI` (Cartan coroot), `wR` (center of the
Levi), `fK` / `eK` (1-based nilradical enumeration), `EI.J` (matrix unit).
Rationals are always "p/q" strings; state files use the canonical Fock format.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .fock import (
    FockState,
    mono_from_pairs,
    mono_mode_sum,
    state_from_text,
    state_to_text,
)
from .formal_dist import delta_identity_suite
from .inducing import (
    character_module,
    evaluation_module,
    heisenberg_fock,
    levi_blocks,
    natural_block_rep,
)
from .lie import ParabolicData, as_scalar, cartan_h, matrix_unit, parabolic_decompose
from .realization import (
    CENTRAL,
    Realization,
    bracket_sweep,
    build_operator_explicit_sl,
    build_operator_general,
)
from .sampling import Sampler

Q = Fraction


class ParseError(Exception):
    pass


class SemanticError(Exception):
    pass


@dataclass
class Job:
    pd: ParabolicData
    module: object
    engine: str
    max_mode: int
    max_degree: int
    samples: int
    seed: int
    output: str


def parse_generator(pd: ParabolicData, name: str):
    if name == "c":
        return CENTRAL
    m = re.fullmatch(r"h(\d+)", name)
    if m:
        i = int(m.group(1))
        if not 1 <= i <= pd.n:
            raise ParseError(f"Cartan index out of range in {name!r}")
        return cartan_h(pd.n, i)
    m = re.fullmatch(r"w(\d+)", name)
    if m:
        label = f"w{int(m.group(1))}"
        if label not in pd.center_names:
            raise ParseError(f"{name!r} is not a center direction for this parabolic")
        return pd.center_basis[pd.center_names.index(label)]
    m = re.fullmatch(r"([fe])(\d+)", name)
    if m:
        k = int(m.group(2))
        if not 1 <= k <= pd.num_alpha:
            raise ParseError(f"nilradical index out of range in {name!r}")
        return (pd.f_basis if m.group(1) == "f" else pd.e_basis)[k - 1]
    m = re.fullmatch(r"E(\d+)\.(\d+)", name)
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        if i == j or not (1 <= i <= pd.n + 1 and 1 <= j <= pd.n + 1):
            raise ParseError(f"bad matrix unit {name!r}")
        return matrix_unit(pd.n, i, j)
    raise ParseError(f"unknown generator name {name!r}")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"missing {key!r} in {where}")
    return obj[key]


def _scalar(text, where: str) -> Fraction:
    try:
        return as_scalar(text if isinstance(text, str) else int(text))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad rational in {where}: {text!r}") from exc


def build_module(pd: ParabolicData, desc: dict):
    kind = _require(desc, "kind", "module descriptor")
    level = _scalar(desc.get("level", "0"), "module level")
    try:
        if kind == "character":
            assignments = []
            for rec in desc.get("assignments", []):
                elem = parse_generator(pd, _require(rec, "element", "assignment"))
                if elem is CENTRAL:
                    raise ParseError("assign the level through 'level', not 'c'")
                assignments.append((elem, int(_require(rec, "mode", "assignment")),
                                    _scalar(_require(rec, "value", "assignment"),
                                            "assignment")))
            return character_module(pd, assignments, level)
        if kind == "evaluation":
            s = _scalar(_require(desc, "s", "evaluation module"), "evaluation point")
            rep = desc.get("rep", "block")
            if rep == "block":
                block = int(desc.get("block", 0))
                if not 0 <= block < len(levi_blocks(pd)):
                    raise SemanticError(f"no Levi block {block} for this parabolic")
                rho = natural_block_rep(pd, block)
            elif rep == "trivial":
                dim = int(desc.get("dim", 1))
                rho = [[[Q(0)] * dim for _ in range(dim)] for _ in pd.levi_basis]
            else:
                raise ParseError(f"unknown evaluation rep {rep!r}")
            return evaluation_module(pd, rho, s, level)
        if kind == "heisenberg_fock":
            lam = [_scalar(v, "highest weight") for v in _require(desc, "lam", "module")]
            return heisenberg_fock(pd, lam, level)
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc
    raise ParseError(f"unknown module kind {kind!r}")


def load_config(path: str) -> Job:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}") from exc
    alg = _require(obj, "algebra", "config")
    try:
        pd = parabolic_decompose(int(_require(alg, "n", "algebra")),
                                 [int(s) for s in alg.get("sigma", [])])
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc
    module = build_module(pd, _require(obj, "module", "config"))
    engine = obj.get("engine", "general")
    if engine not in ("general", "explicit"):
        raise ParseError(f"unknown engine {engine!r}")
    window = obj.get("window", {})
    max_mode = int(window.get("max_mode", 3))
    max_degree = int(window.get("max_degree", 3))
    samples = int(window.get("samples", 20))
    if max_mode < 0 or max_degree < 0 or samples < 1:
        raise SemanticError("window parameters must be nonnegative (samples >= 1)")
    output = obj.get("output", "text")
    if output not in ("text", "records"):
        raise ParseError(f"unknown output mode {output!r}")
    return Job(pd=pd, module=module, engine=engine, max_mode=max_mode,
               max_degree=max_degree, samples=samples,
               seed=int(obj.get("seed", 0)), output=output)


def make_realization(job: Job, operator_hook=None) -> Realization:
    try:
        return Realization(job.pd, job.module, job.engine, operator_hook)
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc


def load_state(job: Job, spec: str) -> FockState:
    if spec == "vacuum" or spec.startswith("vacuum:"):
        v = int(spec.split(":", 1)[1]) if ":" in spec else 0
        try:
            job.module.check_v_index(v)
        except ValueError as exc:
            raise SemanticError(str(exc)) from exc
        return FockState.vacuum(v)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read state file: {exc}") from exc
    try:
        return state_from_text(text, job.module)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed state file: {exc}") from exc
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc


def _emit(text: str, out_path: str | None):
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _header(job: Job) -> str:
    return (f"config: n={job.pd.n} sigma={sorted(job.pd.sigma)} "
            f"module={job.module.describe()} engine={job.engine} seed={job.seed}")


def _parse_flip(job: Job, flip: str):
    try:
        gen, mode, idx = flip.split(":")
        elem = parse_generator(job.pd, gen)
        mode, idx = int(mode), int(idx)
    except (ValueError, ParseError) as exc:
        raise ParseError(f"bad --flip spec {flip!r}: {exc}") from exc

    def hook(a, m, op):
        if a == elem and m == mode:
            return op.with_flipped_term(idx)
        return op

    return hook


# --- commands ---------------------------------------------------------------------

def cmd_act(job: Job, generator: str, mode: int, state_spec: str,
            out_path: str | None) -> int:
    elem = parse_generator(job.pd, generator)
    state = load_state(job, state_spec)
    real = make_realization(job)
    result = real.act(elem, mode, state)
    _emit(state_to_text(result, job.module), out_path)
    return 0


def cmd_dump(job: Job, generator: str, mode: int, out_path: str | None) -> int:
    elem = parse_generator(job.pd, generator)
    if elem is CENTRAL:
        raise SemanticError("the central element has no operator dump; it scales by the level")
    real = make_realization(job)
    op = real.operator(elem, mode)
    _emit(op.render() + "\n", out_path)
    return 0


def cmd_check_bracket(job: Job, records_path: str | None, flip: str | None) -> int:
    hook = _parse_flip(job, flip) if flip else None
    real = make_realization(job, operator_hook=hook)
    smp = Sampler(job.seed)
    states = smp.fock_states(job.module, job.samples, job.max_degree, job.max_mode)
    basis = job.pd.homogeneous_basis
    n_modes = 2 * job.max_mode + 1
    records = []
    lines = [_header(job)]

    on_check = None
    if records_path or job.output == "records":
        def on_check(a, b, m, n, si, ok):
            records.append({"check": "bracket", "a": a, "b": b, "m": m, "n": n,
                            "state": si, "status": "pass" if ok else "fail"})

    checks, failure = bracket_sweep(real, job.max_mode, states, on_check)
    if job.output == "records":
        lines.extend(json.dumps(rec, sort_keys=True, separators=(",", ":"))
                     for rec in records)
    if failure is not None:
        lines.append(f"FAIL at a={failure['a']} b={failure['b']} "
                     f"m={failure['m']} n={failure['n']} state={failure['state']}")
        lines.append("witness: "
                     + state_to_text(failure["residual"], job.module).strip())
        _finish(lines, records, records_path)
        return 1
    lines.append(f"PASS {len(basis) ** 2} basis pairs x {n_modes * n_modes} mode "
                 f"pairs x {len(states)} states ({checks} checks)")
    _finish(lines, records, records_path)
    return 0


def _finish(lines, records, records_path):
    if records_path:
        with open(records_path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_compare_engines(job: Job) -> int:
    try:
        gen = Realization(job.pd, job.module, "general")
        exp = Realization(job.pd, job.module, "explicit")
    except ValueError as exc:
        raise SemanticError(str(exc)) from exc
    smp = Sampler(job.seed)
    states = smp.fock_states(job.module, job.samples, job.max_degree, job.max_mode)
    lines = [_header(job)]
    bad = 0
    for name, elem, _ in job.pd.homogeneous_basis:
        structural = all(
            build_operator_general(job.pd, elem, m).terms
            == build_operator_explicit_sl(job.pd, elem, m).terms
            for m in range(-job.max_mode, job.max_mode + 1))
        action = all(gen.act(elem, m, s) == exp.act(elem, m, s)
                     for m in range(-job.max_mode, job.max_mode + 1)
                     for s in states)
        verdict = "structural=%s action=%s" % ("OK" if structural else "MISMATCH",
                                               "OK" if action else "MISMATCH")
        lines.append(f"{name}: {verdict}")
        if not (structural and action):
            bad += 1
    lines.append(("PASS all %d generators agree" % len(job.pd.homogeneous_basis))
                 if bad == 0 else ("FAIL %d generators disagree" % bad))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if bad == 0 else 1


def cmd_weights(job: Job) -> int:
    pd, mod = job.pd, job.module
    v_weights = []
    missing = []
    for h in pd.cartan:
        w = mod.v_weight(0, h)
        if w is None:
            if "weight" not in missing:
                missing.append("weight")
            v_weights.append(Q(0))
        else:
            v_weights.append(w)
    v_mode = mod.v_mode(0)
    if v_mode is None:
        missing.append("mode")
        v_mode = 0
    variables = [(alpha, mode) for alpha in range(pd.num_alpha)
                 for mode in range(-job.max_mode, job.max_mode + 1)]
    cells: dict[tuple, int] = {}
    for degree in range(job.max_degree + 1):
        for combo in combinations_with_replacement(variables, degree):
            mono = mono_from_pairs([(a, n, 1) for a, n in combo])
            weight = tuple(
                vw - sum(e * pd.delta_u[a].value_on(h) for a, _n, e in mono)
                for vw, h in zip(v_weights, pd.cartan))
            mode = mono_mode_sum(mono) + v_mode
            key = (degree, mode, weight)
            cells[key] = cells.get(key, 0) + 1
    lines = [_header(job)]
    lines.append("note: true weight spaces are infinite-dimensional; this census "
                 f"is truncated to degree<={job.max_degree}, |mode|<={job.max_mode}, "
                 "and counts monomials tensored with the first basis vector of V")
    if missing:
        lines.append(f"note: V carries no {' or '.join(missing)} grading; "
                     "those V contributions were treated as zero")
    for degree, mode, weight in sorted(cells):
        wtxt = ",".join(str(w) for w in weight)
        lines.append(f"degree={degree} mode={mode} weight=({wtxt}) "
                     f"count={cells[(degree, mode, weight)]}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_delta_selftest() -> int:
    lines = []
    ok_all = True
    for idx, (desc, ok) in enumerate(delta_identity_suite(window=8), start=1):
        ok_all = ok_all and ok
        lines.append(f"item {idx} {'PASS' if ok else 'FAIL'}: {desc}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok_all else 1


# --- entry point -----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affinefock",
        description="exact free field realization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_act = sub.add_parser("act", help="apply a realized generator to a state")
    p_act.add_argument("--config", required=True)
    p_act.add_argument("--generator", required=True)
    p_act.add_argument("--mode", type=int, default=0)
    p_act.add_argument("--state", required=True,
                       help="state file, or 'vacuum' / 'vacuum:K'")
    p_act.add_argument("--out", default=None)

    p_dump = sub.add_parser("dump", help="print the canonical operator form")
    p_dump.add_argument("--config", required=True)
    p_dump.add_argument("--generator", required=True)
    p_dump.add_argument("--mode", type=int, default=0)
    p_dump.add_argument("--out", default=None)

    p_chk = sub.add_parser("check-bracket",
                           help="sweep the bracket identity over basis pairs")
    p_chk.add_argument("--config", required=True)
    p_chk.add_argument("--records", default=None,
                       help="write one JSON record per check to this file")
    p_chk.add_argument("--flip", default=None, metavar="GEN:MODE:IDX",
                       help="negative-control hook: negate one operator term")

    p_cmp = sub.add_parser("compare-engines",
                           help="general series engine vs closed forms")
    p_cmp.add_argument("--config", required=True)

    p_w = sub.add_parser("weights", help="windowed weight-space census")
    p_w.add_argument("--config", required=True)

    sub.add_parser("delta-selftest", help="run the six delta-kernel identities")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "delta-selftest":
            return cmd_delta_selftest()
        job = load_config(args.config)
        if args.command == "act":
            return cmd_act(job, args.generator, args.mode, args.state, args.out)
        if args.command == "dump":
            return cmd_dump(job, args.generator, args.mode, args.out)
        if args.command == "check-bracket":
            return cmd_check_bracket(job, args.records, args.flip)
        if args.command == "compare-engines":
            return cmd_compare_engines(job)
        if args.command == "weights":
            return cmd_weights(job)
        raise ParseError(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
