"""Explicit Boolean circuits for the shipped hypotheses.

Everything downstream of the CNF compiler needs the hypothesis as a gate
list rather than a Python callable.  The builder does constant folding and
structural deduplication, so the arithmetic-heavy circuits (ripple adders,
shift-add constant multipliers inside the hash) stay as small as the
construction allows.

Wire references during construction are either a bool (a folded constant)
or an int wire index; emitted circuits contain no constant wires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from .bitstring import BitString
from .ecc import EccParams, reed_solomon
from .errors import ConfigError, FormatError
from .ots import OtsParams

Ref = Union[bool, int]

_NOT = "NOT"
_AND = "AND"
_OR = "OR"
_XOR = "XOR"

GATE_OPS = (_NOT, _AND, _OR, _XOR)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INIT = 0x6A09E667F3BCC909
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class BoolCircuit:
    """Topologically ordered gate list over {AND, OR, NOT, XOR}.

    Wires 0..n_inputs-1 are the inputs; gate i drives wire n_inputs+i.
    `outputs` lists one wire per label bit; `star` is an optional extra
    output wire meaning "input rejected".
    """

    n_inputs: int
    gates: Tuple[Tuple[str, int, Optional[int]], ...]
    outputs: Tuple[int, ...]
    star: Optional[int] = None

    def __post_init__(self) -> None:
        for gi, (op, a, b) in enumerate(self.gates):
            wire = self.n_inputs + gi
            if op not in GATE_OPS:
                raise FormatError(f"unknown gate op {op!r}")
            if not 0 <= a < wire or (b is not None and not 0 <= b < wire):
                raise FormatError(f"gate {gi} reads a later wire")
            if (b is None) != (op == _NOT):
                raise FormatError(f"gate {gi} has wrong arity for {op}")
        n_wires = self.n_inputs + len(self.gates)
        for w in self.outputs:
            if not 0 <= w < n_wires:
                raise FormatError(f"output wire {w} out of range")
        if self.star is not None and not 0 <= self.star < n_wires:
            raise FormatError(f"star wire {self.star} out of range")

    @property
    def n_gates(self) -> int:
        return len(self.gates)


def eval_batch(circuit: BoolCircuit,
               xs: Sequence[BitString]) -> List[Tuple[Tuple[int, ...], bool]]:
    """Evaluate many inputs at once, one integer bit-lane per input."""
    m = len(xs)
    mask = (1 << m) - 1
    wires = []
    for i in range(circuit.n_inputs):
        v = 0
        for t, x in enumerate(xs):
            if x.length != circuit.n_inputs:
                raise FormatError(
                    f"input is {x.length} bits, circuit wants {circuit.n_inputs}")
            v |= x[i] << t
        wires.append(v)
    for op, a, b in circuit.gates:
        if op == _NOT:
            wires.append(~wires[a] & mask)
        elif op == _AND:
            wires.append(wires[a] & wires[b])
        elif op == _OR:
            wires.append(wires[a] | wires[b])
        else:
            wires.append(wires[a] ^ wires[b])
    out = []
    for t in range(m):
        labels = tuple((wires[w] >> t) & 1 for w in circuit.outputs)
        star = bool((wires[circuit.star] >> t) & 1) \
            if circuit.star is not None else False
        out.append((labels, star))
    return out


def eval_circuit(circuit: BoolCircuit,
                 x: BitString) -> Tuple[Tuple[int, ...], bool]:
    return eval_batch(circuit, [x])[0]


class CircuitBuilder:
    """Gate emitter with constant folding and structural dedup."""

    def __init__(self, n_inputs: int) -> None:
        if n_inputs < 1:
            raise ConfigError("circuits need at least one input")
        self.n_inputs = n_inputs
        self.gates: List[Tuple[str, int, Optional[int]]] = []
        self._cache: dict = {}

    def input(self, i: int) -> Ref:
        if not 0 <= i < self.n_inputs:
            raise ConfigError(f"input {i} out of range")
        return i

    def _emit(self, op: str, a: int, b: Optional[int]) -> int:
        if b is not None and op != _NOT and a > b:
            a, b = b, a  # commutative ops: canonical operand order
        key = (op, a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.gates.append((op, a, b))
        wire = self.n_inputs + len(self.gates) - 1
        self._cache[key] = wire
        return wire

    def not_(self, a: Ref) -> Ref:
        if isinstance(a, bool):
            return not a
        return self._emit(_NOT, a, None)

    def and_(self, a: Ref, b: Ref) -> Ref:
        if isinstance(a, bool):
            return b if a else False
        if isinstance(b, bool):
            return a if b else False
        if a == b:
            return a
        return self._emit(_AND, a, b)

    def or_(self, a: Ref, b: Ref) -> Ref:
        if isinstance(a, bool):
            return True if a else b
        if isinstance(b, bool):
            return True if b else a
        if a == b:
            return a
        return self._emit(_OR, a, b)

    def xor(self, a: Ref, b: Ref) -> Ref:
        if isinstance(a, bool):
            return self.not_(b) if a else b
        if isinstance(b, bool):
            return self.not_(a) if b else a
        if a == b:
            return False
        return self._emit(_XOR, a, b)

    def xnor(self, a: Ref, b: Ref) -> Ref:
        return self.not_(self.xor(a, b))

    def mux(self, sel: Ref, if0: Ref, if1: Ref) -> Ref:
        return self.xor(if0, self.and_(sel, self.xor(if0, if1)))

    def and_all(self, refs: Sequence[Ref]) -> Ref:
        acc: Ref = True
        for r in refs:
            acc = self.and_(acc, r)
        return acc

    def xor_all(self, refs: Sequence[Ref]) -> Ref:
        acc: Ref = False
        for r in refs:
            acc = self.xor(acc, r)
        return acc

    def materialize(self, ref: Ref) -> int:
        """Turn a folded constant into a real wire (outputs must be wires)."""
        if not isinstance(ref, bool):
            return ref
        t = self._emit(_OR, 0, self._emit(_NOT, 0, None))
        return t if ref else self._emit(_NOT, t, None)

    def inline(self, sub: BoolCircuit, inputs: Sequence[Ref]) -> List[Ref]:
        """Splice another circuit's gates onto the given input refs.

        Returns the refs for the sub-circuit's output wires (star excluded).
        """
        if len(inputs) != sub.n_inputs:
            raise ConfigError("inline input count mismatch")
        refs: List[Ref] = list(inputs)
        for op, a, b in sub.gates:
            if op == _NOT:
                refs.append(self.not_(refs[a]))
            elif op == _AND:
                refs.append(self.and_(refs[a], refs[b]))
            elif op == _OR:
                refs.append(self.or_(refs[a], refs[b]))
            else:
                refs.append(self.xor(refs[a], refs[b]))
        return [refs[w] for w in sub.outputs]

    def build(self, outputs: Sequence[Ref],
              star: Optional[Ref] = None) -> BoolCircuit:
        outs = tuple(self.materialize(o) for o in outputs)
        star_w = None if star is None else self.materialize(star)
        return BoolCircuit(self.n_inputs, tuple(self.gates), outs, star_w)


# ---------------------------------------------------------------------------
# Word-level helpers (LSB-first wire lists)
# ---------------------------------------------------------------------------

def _const_word(value: int, width: int = 64) -> List[Ref]:
    return [bool((value >> j) & 1) for j in range(width)]

def _xor_words(b: CircuitBuilder, u: List[Ref], v: List[Ref]) -> List[Ref]:
    return [b.xor(x, y) for x, y in zip(u, v)]

def _add_words(b: CircuitBuilder, u: List[Ref], v: List[Ref]) -> List[Ref]:
    """Ripple-carry addition truncated to the common width."""
    out: List[Ref] = []
    carry: Ref = False
    for x, y in zip(u, v):
        s = b.xor(x, y)
        out.append(b.xor(s, carry))
        carry = b.or_(b.and_(x, y), b.and_(carry, s))
    return out

def _shift_left(u: List[Ref], k: int) -> List[Ref]:
    return ([False] * k + u)[: len(u)]

def _xorshift_right(b: CircuitBuilder, u: List[Ref], k: int) -> List[Ref]:
    n = len(u)
    return [b.xor(u[j], u[j + k]) if j + k < n else u[j] for j in range(n)]

def _mul_const(b: CircuitBuilder, u: List[Ref], c: int) -> List[Ref]:
    acc: Optional[List[Ref]] = None
    for k in range(len(u)):
        if (c >> k) & 1:
            term = _shift_left(u, k)
            acc = term if acc is None else _add_words(b, acc, term)
    return acc if acc is not None else [False] * len(u)


def _hash_round(b: CircuitBuilder, z: List[Ref]) -> List[Ref]:
    z = _xorshift_right(b, z, 30)
    z = _mul_const(b, z, _MUL1)
    z = _xorshift_right(b, z, 27)
    z = _mul_const(b, z, _MUL2)
    return _xorshift_right(b, z, 31)


def hash_circuit(b: CircuitBuilder, bits_msb: Sequence[Ref], length: int,
                 out_bits: int, rounds: int) -> List[Ref]:
    """Gate-level toy_hash for messages that fit one 64-bit word.

    Mirrors ots.toy_hash operation for operation; returns out_bits refs
    MSB-first.
    """
    if length > 64 or out_bits > 64:
        raise ConfigError("hash circuit limited to one 64-bit word")
    state = _const_word(_INIT ^ ((length * _GOLDEN) & _MASK64))
    word: List[Ref] = [False] * 64
    for j in range(length):
        word[j] = bits_msb[length - 1 - j]
    state = _xor_words(b, state, word)
    for _ in range(rounds):
        state = _add_words(b, state, _const_word(_GOLDEN))
        state = _hash_round(b, state)
    state = _add_words(b, state, _const_word(_GOLDEN))
    state = _hash_round(b, state)
    return [state[63 - j] for j in range(out_bits)]


# ---------------------------------------------------------------------------
# Hypothesis circuits
# ---------------------------------------------------------------------------

MAJORITY_D_CAP = 63


def circuit_of_majority(d: int) -> BoolCircuit:
    """Adder-tree popcount compared against the majority threshold."""
    if d < 1 or d % 2 == 0:
        raise ConfigError(f"d must be odd and positive, got {d}")
    if d > MAJORITY_D_CAP:
        raise ConfigError(f"d={d} exceeds circuit cap {MAJORITY_D_CAP}")
    b = CircuitBuilder(d)
    nums: List[List[Ref]] = [[b.input(i)] for i in range(d)]
    while len(nums) > 1:
        nxt = []
        for i in range(0, len(nums) - 1, 2):
            u, v = nums[i], nums[i + 1]
            w = max(len(u), len(v)) + 1
            u = u + [False] * (w - len(u))
            v = v + [False] * (w - len(v))
            nxt.append(_add_words(b, u, v))
        if len(nums) % 2:
            nxt.append(nums[-1])
        nums = nxt
    total = nums[0]
    # total >= (d+1)/2, constant comparison from the MSB down
    t = (d + 1) // 2
    gt: Ref = False
    eq: Ref = True
    for j in reversed(range(len(total))):
        tb = (t >> j) & 1
        if tb == 0:
            gt = b.or_(gt, b.and_(eq, total[j]))
        eq = b.and_(eq, b.xnor(total[j], bool(tb)))
    return b.build([b.or_(gt, eq)])


def _parity_masks(ecc: EccParams) -> List[int]:
    """GF(2) dependence of each parity bit on the data bits, by unit probes.

    Systematic Reed-Solomon encoding is linear over the bit level, so
    parity(m) = XOR of parity(e_i) over the set bits of m.
    """
    rs = reed_solomon(ecc)
    k = ecc.data_bits
    p = ecc.n_bits - k
    masks = [0] * p
    for i in range(k):
        cw = rs.encode(BitString(1 << (k - 1 - i), k))
        for j in range(p):
            if cw[k + j]:
                masks[j] |= 1 << i
    return masks


C1_CIRCUIT_HLEN_CAP = 4
C1_CIRCUIT_SLEN_CAP = 8


def circuit_of_classifier_c1(base: BoolCircuit, ots: OtsParams,
                             ecc: EccParams) -> BoolCircuit:
    """Gate-level form of the tamper-detecting classifier at tiny parameters.

    Two outputs: the base label, and a star wire raised when the key
    codeword has inconsistent parity or the signature fails to verify.
    Restricted to codes with t_max = 0: their decoder accepts exactly the
    codewords, which makes decoding a parity re-check, a pure XOR network.
    """
    if ots.hlen > C1_CIRCUIT_HLEN_CAP or ots.slen > C1_CIRCUIT_SLEN_CAP:
        raise ConfigError(
            f"circuit emission capped at hlen<={C1_CIRCUIT_HLEN_CAP}, "
            f"slen<={C1_CIRCUIT_SLEN_CAP}")
    if ecc.t_max != 0:
        raise ConfigError(
            "classifier circuit requires a t_max=0 code (decode == parity check)")
    if ecc.data_bits != ots.vk_bits:
        raise ConfigError(
            f"code data width {ecc.data_bits} != verification-key width "
            f"{ots.vk_bits}")
    d = base.n_inputs
    hlen, slen = ots.hlen, ots.slen
    b = CircuitBuilder(d + ots.sig_bits + ecc.n_bits)
    x = [b.input(i) for i in range(d)]
    sig = [b.input(d + i) for i in range(ots.sig_bits)]
    code = [b.input(d + ots.sig_bits + i) for i in range(ecc.n_bits)]
    data, parity = code[: ecc.data_bits], code[ecc.data_bits:]

    checks: List[Ref] = []
    for j, mask in enumerate(_parity_masks(ecc)):
        pred = b.xor_all([data[i] for i in range(ecc.data_bits)
                          if (mask >> i) & 1])
        checks.append(b.xnor(pred, parity[j]))

    dig = hash_circuit(b, x, d, hlen, ots.hash_rounds)
    for i in range(hlen):
        pre = sig[i * slen: (i + 1) * slen]
        h = hash_circuit(b, pre, slen, hlen, ots.hash_rounds)
        vk0 = data[2 * i * hlen: (2 * i + 1) * hlen]
        vk1 = data[(2 * i + 1) * hlen: (2 * i + 2) * hlen]
        for j in range(hlen):
            target = b.mux(dig[i], vk0[j], vk1[j])
            checks.append(b.xnor(h[j], target))

    verified = b.and_all(checks)
    label = b.inline(base, x)[0]
    return b.build([label], star=b.not_(verified))
