"""Command-line experiment runner.

Subcommands cover the headline measurements (risk, adv-risk, separation,
c3), CNF bundle emission (np-forge), the frozen-oracle self-check
(oracle-check), and a plain-text summary of a results directory (report).
Outputs are deterministic given (config, seed): same inputs, byte-identical
results.csv.

Exit codes: 0 success, 2 configuration error, 3 runtime invariant
violation (including a failed oracle check).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from . import attackers as atk
from .base_problems import (MajorityNoiseParams, analytic_adv_risk,
                            brute_force_adv_risk, majority_hypothesis,
                            majority_noise_problem, uniform_balanced_problem)
from .bitstring import BitString
from .circuits import circuit_of_majority
from .cnf import CnfFormula, encode_hamming_ball, write_dimacs
from .config import ExperimentConfig, parse_config
from .constructions import (c3_problem, classifier_c1, classifier_c3,
                            wrapped_problem_c1)
from .errors import ConfigError, InvariantViolation, ParseError
from .game import (GameOutcome, Problem, binomial_half_width, estimate_risk,
                   game_transcript, mix_seed)
from .samplers import check_witness, sample_s1, sample_s2, sample_s_final
from .solver import Status, solve_small

CSV_HEADER = "experiment,params,point,half_width,trials,seed"


def thread_cap() -> int:
    raw = os.environ.get("COMPGAP_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"COMPGAP_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise ConfigError("COMPGAP_THREADS must be >= 1")
    return n


def _csv_row(experiment: str, params: str, point: float, half_width: float,
             trials: int, seed: int) -> str:
    return (f"{experiment},{params},{point:.6f},{half_width:.6f},"
            f"{trials},{seed}")


def _write_out(out_dir: Path, rows: List[str],
               transcript: List[str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.csv").write_text(
        CSV_HEADER + "\n" + "".join(r + "\n" for r in rows))
    (out_dir / "transcript.log").write_text(
        "".join(line + "\n" for line in transcript))


def _transcript_lines(outcomes: List[GameOutcome], seed: int) -> List[str]:
    return [
        f"trial={i} seed={mix_seed(seed, i)} won={int(o.won)} "
        f"reason={o.reason.value} dist={o.perturbation_used} "
        f"queries={o.queries_used}"
        for i, o in enumerate(outcomes)]


def _build_attacker(cfg: ExperimentConfig, name: str) -> Tuple:
    """Returns (problem, hypothesis, attacker, budget, params string)."""
    p = cfg.problem_params()
    base = majority_noise_problem(p)
    base_h = majority_hypothesis(p.d)
    tag = f"d={p.d} alpha={p.alpha} b={cfg.problem.b} attacker={name}"
    if name == "identity":
        return base, base_h, atk.identity_attacker(), cfg.problem.b, tag
    if name == "greedy":
        return (base, base_h, atk.greedy_majority_attacker(cfg.problem.b),
                cfg.problem.b, tag)
    if name.endswith("_c1"):
        ots, ecc = cfg.ots_params(), cfg.ecc_params()
        prob = wrapped_problem_c1(base, ots, ecc)
        h = classifier_c1(base_h, ots, ecc)
        budget = cfg.problem.b + ots.sig_bits
        tag += f" hlen={ots.hlen} slen={ots.slen} budget={budget}"
        if name == "bounded_c1":
            a = atk.bounded_c1_attacker(p.d, cfg.problem.b, ots, ecc,
                                        cfg.attacker.query_budget)
            tag += f" queries={cfg.attacker.query_budget}"
        else:
            a = atk.unbounded_c1_attacker(p.d, cfg.problem.b, ots, ecc)
        return prob, h, a, budget, tag
    # *_c3
    ots, ecc = cfg.c3_ots_params(), cfg.c3_ecc_params()
    prob = c3_problem(uniform_balanced_problem(cfg.c3.d), ots, ecc)
    h = classifier_c3(ots, ecc)
    budget = ots.sig_bits
    tag = (f"d={cfg.c3.d} hlen={ots.hlen} slen={ots.slen} "
           f"budget={budget} attacker={name}")
    if name == "bounded_c3":
        a = atk.bounded_c3_attacker(ots, ecc, cfg.c3.query_budget)
        tag += f" queries={cfg.c3.query_budget}"
    else:
        a = atk.unbounded_c3_attacker(ots, ecc)
    return prob, h, a, budget, tag


def _run_games(prob: Problem, h, attacker, budget: int, trials: int,
               seed: int) -> Tuple[float, List[GameOutcome]]:
    outcomes = game_transcript(prob, h, attacker, budget, trials, seed)
    return sum(o.won for o in outcomes) / trials, outcomes


def cmd_risk(cfg: ExperimentConfig, out_dir: Path) -> int:
    p = cfg.problem_params()
    est = estimate_risk(majority_noise_problem(p), majority_hypothesis(p.d),
                        cfg.trials, cfg.seed)
    rows = [_csv_row("risk", f"d={p.d} alpha={p.alpha}", est.point,
                     est.half_width, cfg.trials, cfg.seed)]
    _write_out(out_dir, rows, [f"risk point={est.point:.6f}"])
    print(rows[0])
    return 0


def cmd_adv_risk(cfg: ExperimentConfig, out_dir: Path) -> int:
    prob, h, attacker, budget, tag = _build_attacker(cfg, cfg.attacker.name)
    point, outcomes = _run_games(prob, h, attacker, budget, cfg.trials,
                                 cfg.seed)
    rows = [_csv_row("adv-risk", tag, point,
                     binomial_half_width(point, cfg.trials), cfg.trials,
                     cfg.seed)]
    _write_out(out_dir, rows, _transcript_lines(outcomes, cfg.seed))
    print(rows[0])
    return 0


def cmd_separation(cfg: ExperimentConfig, out_dir: Path) -> int:
    p = cfg.problem_params()
    oracle = float(analytic_adv_risk(p, cfg.problem.b))
    rows = [_csv_row("separation-oracle",
                     f"d={p.d} alpha={p.alpha} b={cfg.problem.b}",
                     oracle, 0.0, 0, cfg.seed)]
    transcript: List[str] = []
    points = {}
    for name in ("bounded_c1", "unbounded_c1"):
        prob, h, attacker, budget, tag = _build_attacker(cfg, name)
        point, outcomes = _run_games(prob, h, attacker, budget, cfg.trials,
                                     cfg.seed)
        points[name] = point
        rows.append(_csv_row("separation", tag, point,
                             binomial_half_width(point, cfg.trials),
                             cfg.trials, cfg.seed))
        transcript.append(f"# {name}")
        transcript.extend(_transcript_lines(outcomes, cfg.seed))
    gap = points["unbounded_c1"] - points["bounded_c1"]
    rows.append(_csv_row("separation-gap",
                         f"d={p.d} alpha={p.alpha} b={cfg.problem.b}",
                         gap, 0.0, cfg.trials, cfg.seed))
    _write_out(out_dir, rows, transcript)
    for r in rows:
        print(r)
    return 0


def cmd_c3(cfg: ExperimentConfig, out_dir: Path) -> int:
    ots, ecc = cfg.c3_ots_params(), cfg.c3_ecc_params()
    prob = c3_problem(uniform_balanced_problem(cfg.c3.d), ots, ecc)
    h = classifier_c3(ots, ecc)
    est = estimate_risk(prob, h, cfg.trials, cfg.seed)
    rows = [_csv_row("c3-risk", f"d={cfg.c3.d} hlen={ots.hlen} slen={ots.slen}",
                     est.point, est.half_width, cfg.trials, cfg.seed)]
    transcript: List[str] = [f"c3 honest risk point={est.point:.6f}"]
    for name in ("unbounded_c3", "bounded_c3"):
        prob, h, attacker, budget, tag = _build_attacker(cfg, name)
        point, outcomes = _run_games(prob, h, attacker, budget, cfg.trials,
                                     cfg.seed)
        rows.append(_csv_row("c3", tag, point,
                             binomial_half_width(point, cfg.trials),
                             cfg.trials, cfg.seed))
        transcript.append(f"# {name}")
        transcript.extend(_transcript_lines(outcomes, cfg.seed))
    _write_out(out_dir, rows, transcript)
    for r in rows:
        print(r)
    return 0


def cmd_np_forge(cfg: ExperimentConfig, out_dir: Path) -> int:
    fc = cfg.forge
    p = MajorityNoiseParams(fc.d, cfg.problem.alpha)
    prob = majority_noise_problem(p)
    circuit = circuit_of_majority(fc.d)
    beta = float(analytic_adv_risk(p, fc.b))
    tau = fc.tau if fc.tau > 0 else (p.alpha + beta) / 2

    def build(i: int):
        seed = mix_seed(cfg.seed, i)
        if fc.stage == "s1":
            return sample_s1(prob, circuit, fc.b, seed)
        if fc.stage == "s2":
            return sample_s2(prob, circuit, fc.b, fc.k, tau, seed)
        return sample_s_final(prob, circuit, fc.b, fc.k, tau, fc.reps, seed)

    bundles = [build(i) for i in range(fc.count)]
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        results = list(pool.map(
            lambda bdl: solve_small(bdl.formula, fc.var_cap), bundles))

    out_dir.mkdir(parents=True, exist_ok=True)
    manifest, transcript = [], []
    sat = witness_ok = 0
    for i, (bundle, res) in enumerate(zip(bundles, results)):
        if res.status is Status.CAP_EXCEEDED:
            raise InvariantViolation(
                f"bundle {i} exceeds forge.var_cap={fc.var_cap}")
        name = f"{fc.stage}_{i:04d}.cnf"
        (out_dir / name).write_text(write_dimacs(bundle.formula))
        manifest.append(f"{name} stage={bundle.stage.value} seed={bundle.seed} "
                        f"d={fc.d} b={fc.b} k={fc.k} tau={tau:.6f}")
        if res.status is Status.SAT:
            sat += 1
            good = check_witness(bundle, circuit, res.assignment)
            witness_ok += good
            if not good:
                raise InvariantViolation(f"bundle {i} witness failed round-trip")
        transcript.append(f"bundle={i} status={res.status.value}")
    (out_dir / "manifest.txt").write_text(
        "".join(line + "\n" for line in manifest))
    frac = sat / fc.count
    rows = [_csv_row("np-forge",
                     f"stage={fc.stage} d={fc.d} b={fc.b} k={fc.k} "
                     f"tau={tau:.6f} witnesses={witness_ok}",
                     frac, binomial_half_width(frac, fc.count), fc.count,
                     cfg.seed)]
    _write_out(out_dir, rows, transcript)
    print(rows[0])
    return 0


def cmd_oracle_check(cfg: ExperimentConfig, out_dir: Path) -> int:
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        failures += not ok

    p15 = MajorityNoiseParams(15, 0.05)
    a15 = analytic_adv_risk(p15, 2)
    check("closed-form adversarial risk d=15 b=2 equals 0.713330078125",
          float(a15) == 0.713330078125)
    p11 = MajorityNoiseParams(11, 0.05)
    check("closed-form equals ball enumeration at d=11 b=2",
          analytic_adv_risk(p11, 2) ==
          brute_force_adv_risk(p11, majority_hypothesis(11), 2))
    check("budget 0 collapses to the noise rate",
          analytic_adv_risk(p15, 0) == Fraction(0.05))

    from .ecc import EccParams, reed_solomon
    ecc = EccParams(k_sym=2, n_sym=6, bits_per_symbol=8)
    rs = reed_solomon(ecc)
    ok = True
    msg = BitString(0xA53C, 16)
    cw = rs.encode(msg)
    from itertools import combinations
    for t in range(ecc.t_max + 1):
        for pos in combinations(range(cw.length), t):
            if rs.decode(cw.flip(*pos) if pos else cw) != msg:
                ok = False
    check("exhaustive corruption sweep at (k_sym=2, n_sym=6)", ok)

    f = CnfFormula()
    iv = f.new_vars(6)
    encode_hamming_ball(f, BitString(0b101010, 6), iv, 2)
    from .solver import count_projected_models
    check("radius-2 ball over 6 bits has 22 points",
          count_projected_models(f, iv) == 22)

    if failures:
        print(f"{failures} oracle check(s) failed")
        return 3
    print("all oracle checks passed")
    return 0


def cmd_report(cfg: ExperimentConfig, out_dir: Path) -> int:
    csv_path = out_dir / "results.csv"
    if not csv_path.exists():
        raise ConfigError(f"no results.csv under {out_dir}")
    lines = csv_path.read_text().splitlines()
    rows = [line.split(",") for line in lines[1:] if line]
    widths = [max(len(r[i]) for r in rows + [lines[0].split(",")])
              for i in range(6)]
    header = lines[0].split(",")
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return 0


_COMMANDS: dict = {
    "risk": cmd_risk,
    "adv-risk": cmd_adv_risk,
    "separation": cmd_separation,
    "c3": cmd_c3,
    "np-forge": cmd_np_forge,
    "oracle-check": cmd_oracle_check,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compgap",
        description="Tampering-game experiments with seeded reproducibility")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=str, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--out", type=str, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = parse_config(Path(args.config).read_text())
        else:
            cfg = ExperimentConfig()
        if args.seed is not None:
            cfg.seed = args.seed
        if args.trials is not None:
            cfg.trials = args.trials
        if args.out is not None:
            cfg.out = args.out
        kind = args.command if args.command != "report" else "risk"
        cfg.validate(kind)
        return _COMMANDS[args.command](cfg, Path(cfg.out))
    except ParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
