import pytest

from compgap.base_problems import (MajorityNoiseParams, majority_hypothesis,
                                   majority_noise_problem,
                                   uniform_balanced_problem)
from compgap.bitstring import BitString
from compgap.constructions import (C3Instance, WrappedInstance, c3_problem,
                                   c3_slot_count, classifier_c1,
                                   classifier_c3, sample_c3, wrap_sample_c1,
                                   wrapped_problem_c1)
from compgap.ecc import EccParams
from compgap.errors import ConfigError
from compgap.game import STAR, estimate_risk
from compgap.ots import OtsParams, Signature, verify

# small but fully functional parameters to keep unit tests quick
OTS = OtsParams(hlen=4, slen=8)          # vk 32 bits, sig 32 bits
ECC = EccParams(k_sym=4, n_sym=12, bits_per_symbol=8)   # data 32, t_max=4
BASE = majority_noise_problem(MajorityNoiseParams(7, 0.1))
BASE_H = majority_hypothesis(7)

C3_OTS = OtsParams(hlen=4, slen=8)       # vk 32 bits
C3_BASE = uniform_balanced_problem(32)
C3_ECC = EccParams(k_sym=4, n_sym=10, bits_per_symbol=8)  # data 32, n 80


def test_wrapped_layout_roundtrip():
    inst, y = wrap_sample_c1(BASE, OTS, ECC, seed=1)
    back = WrappedInstance.from_bits(inst.to_bits(), 7, OTS, ECC)
    assert back == inst


def test_honest_sample_classifies_like_base():
    h = classifier_c1(BASE_H, OTS, ECC)
    for seed in range(30):
        inst, y = wrap_sample_c1(BASE, OTS, ECC, seed)
        assert h(inst.to_bits()) == BASE_H(inst.x)


def test_risk_preserved_exactly_per_trial():
    prob = wrapped_problem_c1(BASE, OTS, ECC)
    h = classifier_c1(BASE_H, OTS, ECC)
    r_base = estimate_risk(BASE, BASE_H, 400, seed=9)
    r_wrap = estimate_risk(prob, h, 400, seed=9)
    assert r_base.point == r_wrap.point


def test_signature_tamper_yields_star():
    h = classifier_c1(BASE_H, OTS, ECC)
    inst, _ = wrap_sample_c1(BASE, OTS, ECC, seed=2)
    bits = inst.to_bits()
    hit_star = False
    for pos in range(7, 7 + OTS.sig_bits):
        out = h(bits.flip(pos))
        hit_star |= out is STAR
        # a flipped preimage may still verify only by hash collision
    assert hit_star


def test_instance_tamper_without_new_signature_yields_star():
    h = classifier_c1(BASE_H, OTS, ECC)
    for seed in range(20):
        inst, _ = wrap_sample_c1(BASE, OTS, ECC, seed)
        out = h(inst.to_bits().flip(0))
        sig = Signature.from_bits(inst.sigma, OTS)
        from compgap.ots import vk_from_bits
        from compgap.ecc import reed_solomon
        vk = vk_from_bits(reed_solomon(ECC).decode(inst.vk_code), OTS)
        if not verify(vk, inst.x.flip(0), sig, OTS):
            assert out is STAR


def test_codeword_corruption_within_radius_is_transparent():
    h = classifier_c1(BASE_H, OTS, ECC)
    inst, _ = wrap_sample_c1(BASE, OTS, ECC, seed=3)
    bits = inst.to_bits()
    off = 7 + OTS.sig_bits
    # flip t_max bits in distinct symbols of the key codeword
    flips = [off + s * 8 for s in range(ECC.t_max)]
    assert h(bits.flip(*flips)) == h(bits)


def test_mismatched_params_rejected():
    with pytest.raises(ConfigError):
        classifier_c1(BASE_H, OTS, EccParams(k_sym=3, n_sym=12,
                                             bits_per_symbol=8))


def test_c3_param_checks():
    with pytest.raises(ConfigError):
        c3_problem(uniform_balanced_problem(16), C3_OTS, C3_ECC)


def test_c3_sample_shapes():
    inst, y = sample_c3(C3_BASE, C3_OTS, C3_ECC, seed=4)
    assert len(inst.slots) == c3_slot_count(C3_ECC) == C3_ECC.n_bits
    assert all(s == inst.slots[0] for s in inst.slots)


def test_c3_classifier_recovers_label():
    h = classifier_c3(C3_OTS, C3_ECC)
    seen = set()
    for seed in range(60):
        inst, y = sample_c3(C3_BASE, C3_OTS, C3_ECC, seed)
        assert h(inst.to_bits()) == y
        seen.add(y)
    assert seen == {0, 1}


def test_c3_classifier_never_stars():
    import random
    h = classifier_c3(C3_OTS, C3_ECC)
    rng = random.Random(0)
    prob = c3_problem(C3_BASE, C3_OTS, C3_ECC)
    for _ in range(20):
        junk = BitString.random(rng, prob.instance_len)
        assert h(junk) in (0, 1)


def test_c3_forged_slot_flips_zero_to_one():
    from compgap.ots import PreimageIndex
    from compgap.ecc import reed_solomon
    from compgap.ots import vk_from_bits
    h = classifier_c3(C3_OTS, C3_ECC)
    rs = reed_solomon(C3_ECC)
    index = PreimageIndex(C3_OTS)
    found = False
    for seed in range(40):
        inst, y = sample_c3(C3_BASE, C3_OTS, C3_ECC, seed)
        if y != 0:
            continue
        found = True
        x = rs.decode(inst.x_code)
        vk = vk_from_bits(rs.decode(inst.vk_code), C3_OTS)
        sigma = index.forge(vk, x).to_bits()
        slots = (sigma,) + inst.slots[1:]
        assert h(C3Instance(inst.x_code, slots, inst.vk_code).to_bits()) == 1
    assert found
