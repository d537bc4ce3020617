"""Command-line surface: construct, grow, verify, and decode from files.

Every run with identical flags and inputs writes byte-identical output.
Exit codes: 0 = ok, 1 = property does not hold / decoding impossible,
2 = bad parameters or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cff import (
    IncidenceMatrix,
    Outcome,
    build_polynomial_cff,
    decode,
    max_d,
    restrict_blocks,
    simulate_outcomes,
    verify_cff_exhaustive,
    verify_intersection_certificate,
)
from .designs import DesignArray, SepHashFamily, bush_oa, pa_restrict_columns, pa_to_shf, shf_to_cff, verify_design, verify_shf
from .embedding import (
    EmbeddingSequence,
    LevelParams,
    SequenceLevel,
    build_embedding_family,
    build_monotone_family,
    check_embedding_family,
    check_monotone,
    check_nested,
)
from .errors import CffkitError, InconsistentOutcome, ParamViolation, TooManyCandidates
from .fields import field_create, prime_power
from .metrics import TABLE_NAMES, emit_table

import random


def _json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _field_from_args(q: int, m: int | None):
    if m is not None:
        return field_create(q, m)
    pm = prime_power(q)
    if pm is None:
        raise ParamViolation(f"q={q} is not a prime power")
    return field_create(*pm)


def _write_matrix(matrix: IncidenceMatrix, path: str | None, extra_sidecar: dict | None = None) -> None:
    text = matrix.to_text()
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
    sidecar = matrix.sidecar()
    if extra_sidecar:
        sidecar.update(extra_sidecar)
    Path(path + ".json").write_text(_json(sidecar))


# --- gen ---


def _cmd_gen(args) -> int:
    field = _field_from_args(args.q, args.m)
    matrix = build_polynomial_cff(field, args.k)
    if args.blocks is not None:
        matrix = restrict_blocks(matrix, args.blocks)
    if args.d is not None:
        if args.d > matrix.d_claimed:
            raise ParamViolation(
                f"d={args.d} above the certified {matrix.d_claimed} for these rows"
            )
        matrix.d_claimed = args.d
    _write_matrix(matrix, args.output)
    return 0


# --- embed ---


def _parse_schedule(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        k, _, d = part.strip().partition(":")
        if not d:
            raise ParamViolation(f"schedule entries look like k:d, got {part!r}")
        out.append((int(k), int(d)))
    return out


def _cmd_embed(args) -> int:
    field = _field_from_args(args.q, args.m)
    if args.monotone:
        if args.k is None or args.d is None:
            raise ParamViolation("--monotone needs --k and --d")
        seq = build_monotone_family(field, args.k, args.d, args.levels or 2)
    else:
        if not args.schedule:
            raise ParamViolation("need --schedule k:d,... or --monotone")
        schedule = _parse_schedule(args.schedule)
        if args.levels:
            if len(schedule) == 1:
                schedule = schedule * args.levels
            elif len(schedule) != args.levels:
                raise ParamViolation("--levels disagrees with schedule length")
        seq = build_embedding_family(field, schedule)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[str | None] = []
    for lv in seq.levels:
        if lv.matrix is None:
            files.append(None)
            continue
        fname = f"level{lv.params.i}.txt"
        (outdir / fname).write_text(lv.matrix.to_text())
        sidecar = lv.matrix.sidecar()
        if lv.row_perm is not None:
            sidecar["row_perm"] = lv.row_perm
        if lv.col_perm is not None:
            sidecar["col_perm"] = lv.col_perm
        (outdir / (fname + ".json")).write_text(_json(sidecar))
        files.append(fname)
    (outdir / "manifest.json").write_text(_json(seq.manifest(matrix_files=files)))
    summary = [
        {"i": lv.params.i, "t": lv.params.t, "n": lv.params.n, "d": lv.params.d,
         "materialized": lv.matrix is not None}
        for lv in seq.levels
    ]
    if args.format == "json":
        sys.stdout.write(_json({"outdir": str(outdir), "levels": summary}))
    else:
        for s in summary:
            tag = "" if s["materialized"] else "  (params only)"
            print(f"level {s['i']}: {s['t']} x {s['n']}  d={s['d']}{tag}")
    return 0


# --- verify ---


def _load_sequence_from_manifest(path: Path) -> EmbeddingSequence:
    manifest = json.loads(path.read_text())
    levels = []
    for entry in manifest["levels"]:
        matrix = None
        if entry.get("matrix_file"):
            matrix = IncidenceMatrix.from_text((path.parent / entry["matrix_file"]).read_text())
        params = LevelParams(
            i=entry["i"], q=entry.get("q"), k=entry.get("k"),
            d=entry["d"], t=entry["t"], n=entry["n"],
        )
        if matrix is not None and (matrix.t, matrix.n) != (params.t, params.n):
            raise ParamViolation(
                f"level {params.i}: file is {matrix.t}x{matrix.n}, manifest says {params.t}x{params.n}"
            )
        levels.append(SequenceLevel(params, matrix=matrix))
    return EmbeddingSequence(kind=manifest.get("kind", "external"), levels=levels)


def _report(args, ok: bool, payload: dict) -> int:
    if args.format == "json":
        sys.stdout.write(_json({"ok": ok, **payload}))
    else:
        if ok:
            print("ok" if not payload else f"ok {json.dumps(payload, sort_keys=True)}")
        else:
            print(f"violation {json.dumps(payload, sort_keys=True)}")
    return 0 if ok else 1


def _matrix_pair(args) -> list[IncidenceMatrix]:
    if len(args.paths) == 2:
        return [IncidenceMatrix.from_text(Path(p).read_text()) for p in args.paths]
    # single manifest: check consecutive materialized levels (a one-level
    # family is vacuously fine)
    seq = _load_sequence_from_manifest(Path(args.paths[0]))
    return [lv.matrix for lv in seq.levels if lv.matrix is not None]


def _cmd_verify(args) -> int:
    mode = args.mode
    if mode in ("exhaustive", "certificate"):
        path = Path(args.paths[0])
        matrix = IncidenceMatrix.from_text(path.read_text())
        if mode == "exhaustive":
            d = args.d if args.d is not None else matrix.d_claimed
            if d < 1:
                raise ParamViolation("give --d (file carries no claim)")
            witness = verify_cff_exhaustive(matrix, d, budget=args.budget)
            if witness is None:
                return _report(args, True, {"d": d})
            return _report(args, False, {"d": d, "witness": witness.as_dict()})
        k = args.k
        b = args.b
        sidecar = Path(str(path) + ".json")
        if (k is None or b is None) and sidecar.exists():
            prov = json.loads(sidecar.read_text()).get("provenance", {})
            k = k if k is not None else prov.get("k")
            b = b if b is not None else prov.get("blocks")
        if b is None and matrix.n:
            b = matrix.col_weight(0)
        if k is None or b is None:
            raise ParamViolation("certificate mode needs --k and --b (no sidecar found)")
        pair = verify_intersection_certificate(matrix, k=k, b=b, workers=args.workers)
        if pair is None:
            return _report(args, True, {"k": k, "b": b, "certifies_d": (b - 1) // k})
        return _report(args, False, {"k": k, "b": b, "pair": list(pair)})

    if mode == "embedding":
        seq = _load_sequence_from_manifest(Path(args.paths[0]))
        violation = check_embedding_family(seq)
        if violation is None:
            return _report(args, True, {"levels": len(seq.levels)})
        return _report(args, False, violation.as_dict())

    if mode in ("monotone", "nested"):
        mats = _matrix_pair(args)
        checker = check_monotone if mode == "monotone" else check_nested
        for lo, hi in zip(mats, mats[1:]):
            violation = checker(lo, hi)
            if violation is not None:
                return _report(args, False, violation.as_dict())
        return _report(args, True, {"pairs": len(mats) - 1})

    if mode in ("oa", "pa"):
        design = DesignArray.from_text(Path(args.paths[0]).read_text())
        design.kind = mode.upper()
        bad = verify_design(design)
        if bad is None:
            return _report(args, True, {"kind": design.kind, "n": design.n, "k": design.k})
        return _report(args, False, {"columns": list(bad[0]), "tuple": list(bad[1])})

    if mode == "shf":
        family = SepHashFamily.from_text(Path(args.paths[0]).read_text())
        if args.w is not None:
            family.w = args.w
        bad = verify_shf(family, budget=args.budget)
        if bad is None:
            return _report(args, True, {"w": family.w})
        return _report(args, False, {"column": bad[0], "others": list(bad[1])})

    raise ParamViolation(f"unknown mode {mode!r}")


# --- decode ---


def _cmd_decode(args) -> int:
    matrix = IncidenceMatrix.from_text(Path(args.matrix).read_text())
    d = args.d if args.d is not None else matrix.d_claimed
    if d < 1:
        raise ParamViolation("give --d (file carries no claim)")
    if args.selftest:
        rng = random.Random(args.seed)
        for _ in range(args.trials):
            size = rng.randrange(d + 1)
            defectives = sorted(rng.sample(range(matrix.n), size))
            got = decode(matrix, simulate_outcomes(matrix, defectives), d)
            if got != defectives:
                print(f"selftest FAILED: planted {defectives}, decoded {got}")
                return 1
        print(f"selftest ok: {args.trials} random rounds")
        return 0
    if args.outcome is None:
        raise ParamViolation("need --outcome (or --selftest)")
    outcome = Outcome.from_string(args.outcome)
    try:
        defectives = decode(matrix, outcome, d)
    except (TooManyCandidates, InconsistentOutcome) as exc:
        if args.format == "json":
            sys.stdout.write(_json({"ok": False, "error": type(exc).__name__, "message": str(exc)}))
        else:
            print(f"undecodable: {exc}")
        return 1
    one_based = [j + 1 for j in defectives]
    if args.format == "json":
        sys.stdout.write(_json({"ok": True, "defectives": one_based}))
    else:
        print(" ".join(str(j) for j in one_based))
    return 0


# --- tables ---


def _cmd_tables(args) -> int:
    table = emit_table(args.name)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = _json(table.to_json_dict())
    else:
        text = table.to_text()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --- design ---


def _cmd_design_bush(args) -> int:
    field = _field_from_args(args.q, args.m)
    oa = bush_oa(field, args.t)
    text = oa.to_text()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_design_convert(args) -> int:
    text = Path(args.input).read_text()
    head = text.split(None, 1)[0]
    if head == "DESIGN":
        design = DesignArray.from_text(text)
        if args.restrict is not None:
            design = pa_restrict_columns(design, args.restrict)
        w = args.w
        if w is None:
            w = (design.k - 1) // (design.strength - 1)
        out = pa_to_shf(design, w).to_text()
    elif head == "SHF":
        family = SepHashFamily.from_text(text)
        out = shf_to_cff(family).to_text()
    else:
        raise ParamViolation(f"cannot convert file starting with {head!r}")
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_design_verify(args) -> int:
    text = Path(args.input).read_text()
    head = text.split(None, 1)[0]
    if head == "DESIGN":
        design = DesignArray.from_text(text)
        bad = verify_design(design)
        if bad is None:
            return _report(args, True, {"kind": design.kind})
        return _report(args, False, {"columns": list(bad[0]), "tuple": list(bad[1])})
    if head == "SHF":
        family = SepHashFamily.from_text(text)
        bad = verify_shf(family, budget=args.budget)
        if bad is None:
            return _report(args, True, {"w": family.w})
        return _report(args, False, {"column": bad[0], "others": list(bad[1])})
    raise ParamViolation(f"cannot verify file starting with {head!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cffkit",
        description="Cover-free families: construction, growth, verification, decoding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("gen", help="polynomial-evaluation matrix")
    p.add_argument("--q", type=int, required=True, help="field order (prime power), or prime when --m is given")
    p.add_argument("--m", type=int, help="extension degree over the prime --q")
    p.add_argument("--k", type=int, required=True, help="polynomial degree cap")
    p.add_argument("--d", type=int, help="claimed d to record (default (q-1)//k)")
    p.add_argument("--blocks", type=int, help="restrict to the first BLOCKS row blocks")
    p.add_argument("-o", "--output", help="matrix file (sidecar JSON written next to it)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("embed", help="nested family of matrices")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--schedule", help="comma-separated k:d per level, e.g. 1:2,2:4")
    p.add_argument("--monotone", action="store_true", help="constant (k, d), zero lower-left block")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--outdir", required=True)
    add_format(p)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("verify", help="check a cover-free/family/design property")
    p.add_argument("paths", nargs="+", help="matrix / manifest / design / family file(s)")
    p.add_argument(
        "--mode",
        required=True,
        choices=("exhaustive", "certificate", "embedding", "monotone", "nested", "oa", "pa", "shf"),
    )
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--budget", type=int, default=10**9)
    p.add_argument("--workers", type=int, default=1)
    add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("decode", help="identify defectives from an outcome vector")
    p.add_argument("matrix")
    p.add_argument("--outcome", help="bitstring ('001011') or comma-separated bits; char i = test i")
    p.add_argument("--d", type=int)
    p.add_argument("--selftest", action="store_true", help="random simulate+decode rounds")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("tables", help="built-in parameter tables")
    p.add_argument("name", choices=TABLE_NAMES)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("design", help="orthogonal-array pipeline")
    dsub = p.add_subparsers(dest="design_command", required=True)

    pb = dsub.add_parser("bush", help="polynomial-evaluation orthogonal array")
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--m", type=int)
    pb.add_argument("--t", type=int, required=True, help="strength (>= 2)")
    pb.add_argument("-o", "--output")
    pb.set_defaults(func=_cmd_design_bush)

    pc = dsub.add_parser("convert", help="DESIGN file -> SHF file -> CFF matrix")
    pc.add_argument("input")
    pc.add_argument("--w", type=int, help="separation parameter (default (k-1)//(t-1))")
    pc.add_argument("--restrict", type=int, help="restrict array to i*(t-1)+1 columns first")
    pc.add_argument("-o", "--output")
    pc.set_defaults(func=_cmd_design_convert)

    pv = dsub.add_parser("verify", help="verify a DESIGN or SHF file")
    pv.add_argument("input")
    pv.add_argument("--budget", type=int, default=10**9)
    add_format(pv)
    pv.set_defaults(func=_cmd_design_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CffkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
