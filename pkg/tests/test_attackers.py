import pytest

from compgap.attackers import (bounded_c1_attacker, bounded_c3_attacker,
                               greedy_majority_attacker, identity_attacker,
                               unbounded_c1_attacker, unbounded_c3_attacker)
from compgap.base_problems import (MajorityNoiseParams, analytic_adv_risk,
                                   majority_hypothesis,
                                   majority_noise_problem,
                                   uniform_balanced_problem)
from compgap.constructions import (c3_problem, classifier_c1, classifier_c3,
                                   wrapped_problem_c1)
from compgap.ecc import EccParams
from compgap.game import (binomial_half_width, estimate_adv_risk,
                          estimate_risk, game_transcript)
from compgap.ots import OtsParams

P = MajorityNoiseParams(11, 0.05)
BASE = majority_noise_problem(P)
BASE_H = majority_hypothesis(11)

OTS = OtsParams(hlen=4, slen=8)
ECC = EccParams(k_sym=4, n_sym=12, bits_per_symbol=8)
P7 = MajorityNoiseParams(7, 0.1)
BASE7 = majority_noise_problem(P7)
BASE7_H = majority_hypothesis(7)

C3_OTS = OtsParams(hlen=4, slen=8)
C3_ECC = EccParams(k_sym=4, n_sym=10, bits_per_symbol=8)
C3_BASE = uniform_balanced_problem(32)


def test_identity_attacker_matches_plain_risk_exactly():
    r = estimate_risk(BASE, BASE_H, 400, seed=2)
    a = estimate_adv_risk(BASE, BASE_H, identity_attacker(), 2, 400, seed=2)
    assert r.point == a.point


def test_greedy_matches_analytic_oracle():
    oracle = float(analytic_adv_risk(P, 2))
    est = estimate_adv_risk(BASE, BASE_H, greedy_majority_attacker(2), 2,
                            2000, seed=5)
    assert abs(est.point - oracle) <= 3 * est.half_width


def test_greedy_never_overshoots_budget():
    for b in (0, 1, 3):
        outs = game_transcript(BASE, BASE_H, greedy_majority_attacker(b), b,
                               200, seed=1)
        assert all(o.perturbation_used <= b for o in outs)


def test_unbounded_c1_recovers_base_adv_risk():
    prob = wrapped_problem_c1(BASE7, OTS, ECC)
    h = classifier_c1(BASE7_H, OTS, ECC)
    budget = 2 + OTS.sig_bits
    atk = unbounded_c1_attacker(7, 2, OTS, ECC)
    est = estimate_adv_risk(prob, h, atk, budget, 800, seed=6)
    oracle = float(analytic_adv_risk(P7, 2))
    assert abs(est.point - oracle) <= 3 * est.half_width


def test_bounded_c1_collapses_to_noise_rate():
    # a 12-bit digest makes each guessed preimage hit with chance 2^-12,
    # far below the 256-query budget; wins reduce to the noise rate
    ots = OtsParams(hlen=12, slen=16)
    ecc = EccParams(k_sym=36, n_sym=48, bits_per_symbol=8)
    prob = wrapped_problem_c1(BASE7, ots, ecc)
    h = classifier_c1(BASE7_H, ots, ecc)
    budget = 2 + ots.sig_bits
    atk = bounded_c1_attacker(7, 2, ots, ecc, query_budget=256)
    est = estimate_adv_risk(prob, h, atk, budget, 400, seed=7)
    assert est.point <= 0.1 + 3 * binomial_half_width(0.1, 400)


def test_bounded_c1_respects_query_budget():
    ots = OtsParams(hlen=4, slen=16)
    ecc = EccParams(k_sym=4, n_sym=12, bits_per_symbol=8)
    prob = wrapped_problem_c1(BASE7, ots, ecc)
    h = classifier_c1(BASE7_H, ots, ecc)
    atk = bounded_c1_attacker(7, 2, ots, ecc, query_budget=256)
    outs = game_transcript(prob, h, atk, 2 + ots.sig_bits, 100, seed=8)
    assert all(o.queries_used <= 256 for o in outs)


def test_unbounded_budget_monotonicity():
    # more flip budget never hurts the exhaustive attacker
    prob = wrapped_problem_c1(BASE7, OTS, ECC)
    h = classifier_c1(BASE7_H, OTS, ECC)
    prev = None
    for b in (0, 1, 2, 3):
        atk = unbounded_c1_attacker(7, b, OTS, ECC)
        est = estimate_adv_risk(prob, h, atk, b + OTS.sig_bits, 400, seed=9)
        if prev is not None:
            assert est.point >= prev - 1e-12
        prev = est.point


def test_unbounded_c3_wins_half():
    prob = c3_problem(C3_BASE, C3_OTS, C3_ECC)
    h = classifier_c3(C3_OTS, C3_ECC)
    atk = unbounded_c3_attacker(C3_OTS, C3_ECC)
    est = estimate_adv_risk(prob, h, atk, C3_OTS.sig_bits, 600, seed=10)
    assert abs(est.point - 0.5) <= 3 * est.half_width


def test_unbounded_c3_stays_in_budget():
    prob = c3_problem(C3_BASE, C3_OTS, C3_ECC)
    h = classifier_c3(C3_OTS, C3_ECC)
    atk = unbounded_c3_attacker(C3_OTS, C3_ECC)
    outs = game_transcript(prob, h, atk, C3_OTS.sig_bits, 200, seed=11)
    assert all(o.perturbation_used <= C3_OTS.sig_bits for o in outs)


def test_bounded_c3_nearly_never_wins():
    prob = c3_problem(C3_BASE, C3_OTS, C3_ECC)
    h = classifier_c3(C3_OTS, C3_ECC)
    atk = bounded_c3_attacker(C3_OTS, C3_ECC, query_budget=128)
    est = estimate_adv_risk(prob, h, atk, C3_OTS.sig_bits, 300, seed=12)
    assert est.point <= 0.05


def test_bounded_c3_query_accounting():
    prob = c3_problem(C3_BASE, C3_OTS, C3_ECC)
    h = classifier_c3(C3_OTS, C3_ECC)
    atk = bounded_c3_attacker(C3_OTS, C3_ECC, query_budget=128)
    outs = game_transcript(prob, h, atk, C3_OTS.sig_bits, 100, seed=13)
    # each verification inside the loop can add up to hlen charges after
    # the last budget check
    assert all(o.queries_used <= 128 + C3_OTS.hlen for o in outs)
