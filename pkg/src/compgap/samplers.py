"""Distributions over CNF formulas built from the tampering game.

Stage 1 compiles one drawn example into "there is an adversarial example in
the Hamming ball".  Stage 2 conjoins k independent stage-1 formulas behind
selector variables and requires a tau fraction of selectors.  The final
stage conjoins several disjoint stage-2 formulas.  Bundles keep enough
provenance to decode any satisfying assignment back into concrete
adversarial examples and check them against the real hypothesis.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .bitstring import BitString, hamming_distance
from .circuits import BoolCircuit, eval_circuit
from .cnf import CnfFormula, at_least, encode_hamming_ball, tseitin
from .errors import ConfigError, SamplerError
from .game import Problem, mix_seed
from .solver import Status, solve_small


class Stage(enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S = "S"


@dataclass(frozen=True)
class BlockInfo:
    """One embedded stage-1 formula: its selector (0 for none), variable
    offsets, and the example it was compiled from."""

    selector: int
    input_vars: Tuple[int, ...]
    x: BitString
    y: int


@dataclass(frozen=True)
class SamplerBundle:
    formula: CnfFormula
    stage: Stage
    seed: int
    b: int
    blocks: Tuple[BlockInfo, ...]
    witness_decoder: Callable[[dict], List[Tuple[int, BitString]]]


def _decode_inputs(assignment: dict, input_vars: Tuple[int, ...]) -> BitString:
    return BitString.from_bits(int(assignment[v]) for v in input_vars)


def _compile_block(x: BitString, y: int, circuit: BoolCircuit,
                   b: int) -> CnfFormula:
    """CNF for: exists x' with HD(x,x') <= b, h(x') != y, h(x') not star."""
    f = tseitin(circuit)
    inputs = f.annotations["inputs"]
    flips = encode_hamming_ball(f, x, inputs, b)
    label = f.annotations["outputs"][0]
    f.add_clause([label] if y == 0 else [-label])
    star = f.annotations.get("star")
    if star:
        f.add_clause([-star[0]])
    # branch on flip indicators, zeros first: the ball constraint then
    # prunes, and the XOR channel fixes the inputs by unit propagation
    f.branch_order = list(flips)
    return f


def sample_s1(problem: Problem, circuit: BoolCircuit, b: int,
              seed: int) -> SamplerBundle:
    """One drawn example compiled to a formula, SAT iff the example admits
    an in-ball adversarial perturbation (the untampered x counts when it is
    already misclassified)."""
    if circuit.n_inputs != problem.instance_len:
        raise ConfigError("circuit does not match the problem's instance length")
    x, y = problem.sample(seed)
    if not isinstance(y, int):
        raise SamplerError("stage-1 compilation needs integer labels")
    f = _compile_block(x, y, circuit, b)
    inputs = f.annotations["inputs"]
    block = BlockInfo(0, inputs, x, y)

    def decode(assignment: dict) -> List[Tuple[int, BitString]]:
        return [(0, _decode_inputs(assignment, inputs))]

    return SamplerBundle(f, Stage.S1, seed, b, (block,), decode)


def _merge_guarded(f: CnfFormula, sub: CnfFormula,
                   selector: Optional[int]) -> int:
    """Append sub's clauses on fresh variables; guard them behind the
    selector when one is given.  Returns the variable offset used."""
    off = f.num_vars
    f.num_vars += sub.num_vars
    guard = [] if selector is None else [-selector]
    for clause in sub.clauses:
        f.add_clause(guard + [l + off if l > 0 else l - off for l in clause])
    f.branch_order.extend(v + off for v in sub.branch_order)
    f.prefer_true.extend(v + off for v in sub.prefer_true)
    return off


def sample_s2(problem: Problem, circuit: BoolCircuit, b: int, k: int,
              tau: float, seed: int) -> SamplerBundle:
    """k independent stage-1 formulas on disjoint variables, of which at
    least ceil(tau*k) must hold, chosen by selector variables."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    if not 0 < tau <= 1:
        raise ConfigError("tau must be in (0, 1]")
    f = CnfFormula()
    selectors: List[int] = []
    blocks: List[BlockInfo] = []
    for j in range(k):
        x, y = problem.sample(mix_seed(seed, j))
        sub = _compile_block(x, y, circuit, b)
        s = f.new_var()
        selectors.append(s)
        # decide each selector right before its block's variables; a set
        # selector is then refuted or satisfied locally before moving on
        f.branch_order.append(s)
        f.prefer_true.append(s)
        off = _merge_guarded(f, sub, s)
        blocks.append(BlockInfo(
            s, tuple(v + off for v in sub.annotations["inputs"]), x, y))
    at_least(f, selectors, math.ceil(tau * k))
    f.annotate("selectors", selectors)

    def decode(assignment: dict) -> List[Tuple[int, BitString]]:
        return [(j, _decode_inputs(assignment, blk.input_vars))
                for j, blk in enumerate(blocks) if assignment[blk.selector]]

    return SamplerBundle(f, Stage.S2, seed, b, tuple(blocks), decode)


def sample_s_final(problem: Problem, circuit: BoolCircuit, b: int, k: int,
                   tau: float, reps: int, seed: int) -> SamplerBundle:
    """Conjunction of reps disjoint stage-2 formulas; every one must hold."""
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    f = CnfFormula()
    blocks: List[BlockInfo] = []
    for r in range(reps):
        sub_bundle = sample_s2(problem, circuit, b, k, tau,
                               mix_seed(seed, 0x5346 + r))
        off = _merge_guarded(f, sub_bundle.formula, None)
        for blk in sub_bundle.blocks:
            blocks.append(BlockInfo(blk.selector + off,
                                    tuple(v + off for v in blk.input_vars),
                                    blk.x, blk.y))
    def decode(assignment: dict) -> List[Tuple[int, BitString]]:
        return [(j, _decode_inputs(assignment, blk.input_vars))
                for j, blk in enumerate(blocks) if assignment[blk.selector]]

    return SamplerBundle(f, Stage.S, seed, b, tuple(blocks), decode)


def check_witness(bundle: SamplerBundle, circuit: BoolCircuit,
                  assignment: dict) -> bool:
    """True iff every decoded perturbation is a genuine adversarial example:
    within the ball of its block's x and flipping the classifier off y
    without tripping the star output."""
    for j, x_prime in bundle.witness_decoder(assignment):
        blk = bundle.blocks[j]
        if hamming_distance(blk.x, x_prime) > bundle.b:
            return False
        labels, star = eval_circuit(circuit, x_prime)
        if star or labels[0] == blk.y:
            return False
    return True


@dataclass(frozen=True)
class PlantedDemoResult:
    planted_slot: int
    solved: bool
    planted_selected: bool
    selected_slots: Tuple[int, ...]


def planted_slot_demo(problem: Problem, circuit: BoolCircuit, b: int, k: int,
                      tau: float, seed: int, var_cap: int,
                      max_resample: int = 200) -> PlantedDemoResult:
    """Plant a known-satisfiable stage-1 slot inside a stage-2 formula.

    Re-draws the planted slot's example until its standalone formula is
    satisfiable, splices it over a random slot, solves the composite, and
    reports whether the planted slot ended up among the selected-and-
    satisfied blocks.  This measures per-slot solve rates only; it makes no
    claim about hardness.
    """
    rng = random.Random(mix_seed(seed, 0x504C54))
    planted = None
    for t in range(max_resample):
        cand = sample_s1(problem, circuit, b, mix_seed(seed, 0x5031 + t))
        if solve_small(cand.formula, var_cap).status is Status.SAT:
            planted = cand
            break
    if planted is None:
        raise SamplerError("no satisfiable stage-1 draw found to plant")
    slot = rng.randrange(k)

    f = CnfFormula()
    selectors: List[int] = []
    blocks: List[BlockInfo] = []
    for j in range(k):
        if j == slot:
            sub, x, y = planted.formula, planted.blocks[0].x, planted.blocks[0].y
        else:
            x, y = problem.sample(mix_seed(seed, j))
            sub = _compile_block(x, y, circuit, b)
        s = f.new_var()
        selectors.append(s)
        f.branch_order.append(s)
        f.prefer_true.append(s)
        off = _merge_guarded(f, sub, s)
        blocks.append(BlockInfo(
            s, tuple(v + off for v in sub.annotations["inputs"]), x, y))
    at_least(f, selectors, math.ceil(tau * k))
    f.annotate("selectors", selectors)

    res = solve_small(f, var_cap)
    if res.status is not Status.SAT:
        return PlantedDemoResult(slot, False, False, ())
    chosen = tuple(j for j, blk in enumerate(blocks)
                   if res.assignment[blk.selector])
    return PlantedDemoResult(slot, True, slot in chosen, chosen)
