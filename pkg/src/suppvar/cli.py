"""Command-line driver: `gen` writes algebra and module files, `run` computes reports."""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from typing import Optional

from .algebra import (algebra_from_json, algebra_to_json, decompose, is_projective, module_from_json,
                      module_to_json, simples, validate)
from .carlson import build_L_zeta, connectedness_report, realize, split_by_variety
from .cohomology import engine_for
from .config import read_config
from .corpus import parse_zeta, run_corpus
from .errors import InvalidParams, SuppVarError
from .generators import group_algebra, sweedler
from .growth import (complexity, fixture_report, fpdim_module, fpdims_of_simples, load_fixture,
                     variety_dim)
from .reports import RunConfig, emit, run_config_from, stamp
from .resolve import ResolutionStore, minimal_resolution, set_default_store
from .utils.jsonio import read_json, write_json_atomic

logger = logging.getLogger(__name__)

logging_config = read_config()['Logging']

RUN_COMMANDS = ["resolve", "ext", "ring", "fpdim", "complexity", "lzeta", "split", "connectedness", "corpus"]


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")


def _type(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"group type must look like 2,2 (got {text!r})") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="suppvar", description="Support varieties of finite tensor categories")
    parser.add_argument("--log-level", default=logging_config.get('level', 'INFO'))
    sub = parser.add_subparsers(dest="action", required=True)

    gen = sub.add_parser("gen", help="write algebra and simple-module files")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    group = gen_sub.add_parser("group-algebra")
    group.add_argument("--p", type=int, required=True)
    group.add_argument("--type", type=_type, required=True, dest="orders")
    sw = gen_sub.add_parser("sweedler")
    sw.add_argument("--p", type=int, required=True)
    for p in (group, sw):
        p.add_argument("--out", default=".")

    run = sub.add_parser("run", help="compute a report")
    run.add_argument("command", choices=RUN_COMMANDS)
    run.add_argument("--algebra")
    run.add_argument("--module")
    run.add_argument("--zeta", action="append", default=[], help="ring class as DEG:INDEX")
    run.add_argument("--fixture")
    run.add_argument("--depth", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--cache-dir")
    run.add_argument("--out")
    run.add_argument("--format", choices=["json", "text"])
    return parser


def cmd_gen(args) -> dict:
    if args.kind == "group-algebra":
        A = group_algebra(args.p, args.orders)
    else:
        A = sweedler(args.p)
    base = os.path.join(args.out, _slug(A.name))
    written = [f"{base}.algebra.json"]
    write_json_atomic(written[0], algebra_to_json(A))
    for S in simples(A):
        path = f"{base}.{_slug(S.label)}.module.json"
        write_json_atomic(path, module_to_json(S))
        written.append(path)
    return {"algebra": A.name, "dim": A.dim, "algebra_hash": A.content_hash,
            "valid": validate(A).valid, "files": written}


def _load(cfg: RunConfig):
    if not cfg.algebra:
        raise InvalidParams(f"{cfg.command} needs --algebra")
    A = algebra_from_json(read_json(cfg.algebra))
    report = validate(A)
    if not report.valid:
        raise InvalidParams("algebra file fails the axioms", failures=[f.model_dump() for f in report.failures[:10]])
    if cfg.module:
        label = os.path.basename(cfg.module).split(".")[-3] if cfg.module.endswith(".module.json") else "M"
        M = module_from_json(read_json(cfg.module), A, label=label)
    else:
        M = engine_for(A).unit
    return A, M


def _zetas(engine, cfg: RunConfig, count: Optional[int] = None) -> list:
    parsed = [parse_zeta(engine, token) for token in cfg.zeta]
    if count is not None and len(parsed) != count:
        raise InvalidParams(f"{cfg.command} needs exactly {count} --zeta classes", got=len(parsed))
    return parsed


def run_command(cfg: RunConfig, store: ResolutionStore) -> tuple:
    """(report, ok) for one run command."""
    D = cfg.depth
    if cfg.command == "corpus":
        report = run_corpus(D, cfg.seed, store)
        return stamp(report.model_dump(), cfg), report.holds
    if cfg.command == "fpdim" and cfg.fixture:
        report = fixture_report(load_fixture(cfg.fixture), D + 1)
        return stamp(report, cfg), report["consistent"]

    A, M = _load(cfg)
    engine = engine_for(A, store)
    if cfg.command == "resolve":
        res = minimal_resolution(M, D, store)
        res.verify()
        payload = {"module": M.label, "dims": res.dims,
                   "multiplicities": [res.multiplicities(n) for n in range(D + 1)],
                   "fpdims": [str(v) for v in res.fpdims], "verified": True}
        return stamp(payload, cfg, A.content_hash), True
    if cfg.command == "ext":
        payload = {"module": M.label,
                   "self": engine.ext_dims(M, M, D),
                   "simples": [{"simple": S.label, "dims": engine.ext_dims(M, S, D)} for S in simples(A)]}
        return stamp(payload, cfg, A.content_hash), True
    if cfg.command == "ring":
        table = engine.ring_table(D)
        return stamp(table.to_dict(), cfg, A.content_hash), table.graded_commutative
    if cfg.command == "fpdim":
        roots = fpdims_of_simples(A)
        payload = {"simples": [{"simple": S.label, **r.model_dump()} for S, r in zip(simples(A), roots)],
                   "module": M.label, "fpdim": str(fpdim_module(M))}
        return stamp(payload, cfg, A.content_hash), True
    if cfg.command == "complexity":
        cx, vd = complexity(M, D, store), variety_dim(M, D, store)
        payload = {"module": M.label, "complexity": cx.model_dump(), "variety_dim": vd.model_dump(),
                   "projective": is_projective(M)}
        return stamp(payload, cfg, A.content_hash), cx.gamma == vd.gamma
    if cfg.command == "lzeta":
        zetas = _zetas(engine, cfg)
        records = [build_L_zeta(z, label, store) for label, z in zetas]
        X = realize([z for _, z in zetas], [label for label, _ in zetas], A, store)
        cx, vd = complexity(X, D, store), variety_dim(X, D, store)
        payload = {"records": [r.to_dict() for r in records], "product_dim": X.dim,
                   "complexity": cx.gamma, "variety_dim": vd.gamma, "projective": is_projective(X),
                   "summand_dims": decompose(X, cfg.seed).dims}
        return stamp(payload, cfg, A.content_hash), cx.gamma == vd.gamma
    if cfg.command == "split":
        (l1, z1), (l2, z2) = _zetas(engine, cfg, 2)
        report = split_by_variety(M, z1, z2, D, cfg.seed, (l1, l2), store)
        return stamp(report.to_dict(), cfg, A.content_hash), True
    report = connectedness_report(M, D, cfg.seed, store)
    return stamp(report.model_dump(), cfg, A.content_hash), report.connected


def _run_config(args) -> RunConfig:
    given = {k: v for k, v in {"algebra": args.algebra, "module": args.module, "zeta": args.zeta,
                               "fixture": args.fixture, "depth": args.depth, "seed": args.seed,
                               "cache_dir": args.cache_dir, "out": args.out, "format": args.format}.items()
             if v is not None}
    return run_config_from(command=args.command, **given)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.action == "gen":
            print(json.dumps(cmd_gen(args), indent=1))
            return 0
        cfg = _run_config(args)
        store = ResolutionStore(cfg.cache_dir)
        set_default_store(store)
        report, ok = run_command(cfg, store)
        print(emit(report, cfg, f"{cfg.command}-{cfg.seed}"))
        return 0 if ok else 1
    except SuppVarError as e:
        print(json.dumps(e.to_json(), default=str), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
