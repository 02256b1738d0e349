"""The two signature-wrapped problem families.

The wrapper (C1) attaches a per-sample one-time signature and an
error-coded verification key to each base instance; its classifier rejects
with STAR when the chain (decode vk, verify signature) fails.  The second
family (C3) must always output a label: instances carry an error-coded
instance, n identical signature slots, and an error-coded key; the
classifier outputs 1 iff any slot verifies.

A fresh key pair is generated for every sample; no global key exists
anywhere, which is what makes the distributions publicly samplable.
"""

from __future__ import annotations

from dataclasses import dataclass

import random

from .bitstring import BitString, concat_all
from .ecc import EccParams, reed_solomon
from .errors import ConfigError, DecodeFailure, SamplerError
from .game import STAR, Hypothesis, Label, Problem, mix_seed
from .ots import (OtsParams, Signature, digest, kgen, sign, verify,
                  vk_from_bits, vk_to_bits)

_KGEN_STREAM = 0x4B47454E
_SIGMA_STREAM = 0x5349474D

C3_REJECTION_CAP = 1000


# ---------------------------------------------------------------------------
# Construction with tamper detection (wrapper around an arbitrary problem)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class WrappedInstance:
    """Concatenated as (x, sigma, vk_code), x at the low indices."""

    x: BitString
    sigma: BitString
    vk_code: BitString

    def to_bits(self) -> BitString:
        return concat_all([self.x, self.sigma, self.vk_code])

    @classmethod
    def from_bits(cls, bits: BitString, d: int, ots: OtsParams,
                  ecc: EccParams) -> "WrappedInstance":
        if bits.length != d + ots.sig_bits + ecc.n_bits:
            raise ConfigError(
                f"instance must be {d + ots.sig_bits + ecc.n_bits} bits")
        return cls(bits.extract(0, d),
                   bits.extract(d, ots.sig_bits),
                   bits.extract(d + ots.sig_bits, ecc.n_bits))


def _check_c1_params(ots: OtsParams, ecc: EccParams) -> None:
    if ecc.data_bits != ots.vk_bits:
        raise ConfigError(
            f"code data width {ecc.data_bits} != verification-key width "
            f"{ots.vk_bits}")


def wrap_sample_c1(base: Problem, ots: OtsParams, ecc: EccParams, seed: int):
    """Sample ((x, sigma, Encode(vk)), y) with a fresh key pair.

    Draws the base example with the caller's seed unchanged, so risk
    estimates on the wrapped problem share base examples trial-for-trial
    with estimates on the base problem.  The signing key is discarded.
    """
    _check_c1_params(ots, ecc)
    x, y = base.sample(seed)
    keys = kgen(ots, mix_seed(seed, _KGEN_STREAM))
    sigma = sign(keys.sk, x, ots).to_bits()
    vk_code = reed_solomon(ecc).encode(vk_to_bits(keys.vk))
    return WrappedInstance(x, sigma, vk_code), y


def wrapped_problem_c1(base: Problem, ots: OtsParams,
                       ecc: EccParams) -> Problem:
    _check_c1_params(ots, ecc)
    return Problem(
        instance_len=base.instance_len + ots.sig_bits + ecc.n_bits,
        label_set=base.label_set,
        sampler=lambda seed: (
            lambda inst_y: (inst_y[0].to_bits(), inst_y[1])
        )(wrap_sample_c1(base, ots, ecc, seed)),
    )


def classifier_c1(base_h: Hypothesis, ots: OtsParams,
                  ecc: EccParams) -> Hypothesis:
    """h(x, sigma, c) = base_h(x) if decode+verify succeed, else STAR."""
    _check_c1_params(ots, ecc)
    rs = reed_solomon(ecc)
    d = base_h.instance_len

    def classify(bits: BitString) -> Label:
        inst = WrappedInstance.from_bits(bits, d, ots, ecc)
        try:
            vk = vk_from_bits(rs.decode(inst.vk_code), ots)
        except DecodeFailure:
            return STAR
        if not verify(vk, inst.x, Signature.from_bits(inst.sigma, ots), ots):
            return STAR
        return base_h(inst.x)

    return Hypothesis(instance_len=d + ots.sig_bits + ecc.n_bits,
                      classify=classify)


# ---------------------------------------------------------------------------
# Construction without tamper detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class C3Instance:
    """Concatenated as (x_code, slot_0 .. slot_{n-1}, vk_code)."""

    x_code: BitString
    slots: tuple
    vk_code: BitString

    def to_bits(self) -> BitString:
        return concat_all([self.x_code, *self.slots, self.vk_code])


def _check_c3_params(base: Problem, ots: OtsParams, ecc: EccParams) -> None:
    if ecc.data_bits != base.instance_len:
        raise ConfigError(
            f"code data width {ecc.data_bits} != base instance length "
            f"{base.instance_len}")
    if ecc.data_bits != ots.vk_bits:
        raise ConfigError(
            "no-detection construction shares one code for instance and key; "
            f"need base length == vk width, got {base.instance_len} vs "
            f"{ots.vk_bits}")


def c3_slot_count(ecc: EccParams) -> int:
    return ecc.n_bits


def c3_instance_len(ots: OtsParams, ecc: EccParams) -> int:
    return 2 * ecc.n_bits + c3_slot_count(ecc) * ots.sig_bits


def sample_c3(base: Problem, ots: OtsParams, ecc: EccParams, seed: int):
    """Honest sample: y=1 carries a valid signature in every slot, y=0 an
    invalid one (rejection-sampled uniform) in every slot."""
    _check_c3_params(base, ots, ecc)
    rs = reed_solomon(ecc)
    x, y = base.sample(seed)
    keys = kgen(ots, mix_seed(seed, _KGEN_STREAM))
    if y == 1:
        sigma = sign(keys.sk, x, ots).to_bits()
    else:
        rng = random.Random(mix_seed(seed, _SIGMA_STREAM))
        x_digest = digest(x, ots)
        for _ in range(C3_REJECTION_CAP):
            sigma = BitString.random(rng, ots.sig_bits)
            if not verify(keys.vk, x, Signature.from_bits(sigma, ots), ots,
                          message_digest=x_digest):
                break
        else:
            raise SamplerError(
                "could not sample an invalid signature; OTS parameters are "
                "degenerate")
    n = c3_slot_count(ecc)
    return C3Instance(rs.encode(x), (sigma,) * n,
                      rs.encode(vk_to_bits(keys.vk))), y


def c3_problem(base: Problem, ots: OtsParams, ecc: EccParams) -> Problem:
    _check_c3_params(base, ots, ecc)
    return Problem(
        instance_len=c3_instance_len(ots, ecc),
        label_set=frozenset({0, 1}),
        sampler=lambda seed: (
            lambda inst_y: (inst_y[0].to_bits(), inst_y[1])
        )(sample_c3(base, ots, ecc, seed)),
    )


def classifier_c3(ots: OtsParams, ecc: EccParams) -> Hypothesis:
    """Output 1 iff any slot verifies against the decoded instance and key.

    Decode failure on either codeword yields 0: the classifier has no STAR,
    and an undecodable input cannot satisfy the verification branch.
    Identical slots are deduplicated before verifying; verification is
    deterministic, so this does not change the decision.
    """
    rs = reed_solomon(ecc)
    n = c3_slot_count(ecc)
    ell = ots.sig_bits
    total = c3_instance_len(ots, ecc)

    def classify(bits: BitString) -> Label:
        if bits.length != total:
            raise ConfigError(f"instance must be {total} bits")
        x_code = bits.extract(0, ecc.n_bits)
        vk_code = bits.extract(ecc.n_bits + n * ell, ecc.n_bits)
        try:
            x = rs.decode(x_code)
            vk = vk_from_bits(rs.decode(vk_code), ots)
        except DecodeFailure:
            return 0
        x_digest = digest(x, ots)
        raw = bits.extract(ecc.n_bits, n * ell)
        seen = set()
        for i in range(n):
            v = (raw.value >> ((n - 1 - i) * ell)) & ((1 << ell) - 1)
            if v in seen:
                continue
            seen.add(v)
            if verify(vk, x, Signature.from_bits(BitString(v, ell), ots), ots,
                      message_digest=x_digest):
                return 1
        return 0

    return Hypothesis(instance_len=total, classify=classify)
