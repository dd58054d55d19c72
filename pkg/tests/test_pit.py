import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_instance
from skewpit.circuit import eval_mod, parse_circuit
from skewpit.oracle import expand_circuit
from skewpit.pit import (
    PitParams, choose_ell, coefficient_bits, find_r, pit, pit_fp, pit_z, primes_for_bits,
    trial_rng,
)
from skewpit.polyring import ZZ, PrimeField, build_test_modulus, is_prime


def circ(text):
    return parse_circuit(text)


def test_params_validation():
    with pytest.raises(ValueError):
        PitParams(epsilon=Fraction(1))
    with pytest.raises(ValueError):
        PitParams(epsilon=0)
    with pytest.raises(ValueError):
        PitParams(trials=0)
    with pytest.raises(ValueError):
        PitParams(seed=-1)
    assert PitParams(epsilon="1/3").epsilon == Fraction(1, 3)


def test_choose_ell_examples():
    assert choose_ell(circ("a = INPUT x\nOUTPUT a")) == 1
    assert choose_ell(circ(f"a = INPUT x^{2**40}\nOUTPUT a")) == 41
    assert choose_ell(circ("a = INPUT x^1000\nOUTPUT a")) == 10
    assert choose_ell(circ("a = INPUT 5\nOUTPUT a")) == 1


def test_find_r_examples():
    assert find_r(2, 1) == 3
    assert find_r(3, 1) == 2
    assert find_r(2, 2) == 3
    assert find_r(2, 3) == 5  # 3 divides 2^2 - 1
    with pytest.raises(RuntimeError):
        find_r(2, 40, cap_constant=0.01)


@settings(max_examples=100)
@given(st.sampled_from([p for p in range(2, 400) if is_prime(p)] + [65521, 2**31 - 1]),
       st.integers(1, 70))
def test_find_r_conditions(p, ell):
    r = find_r(p, ell)
    assert is_prime(r) and r != p
    assert all((p**i - 1) % r for i in range(1, ell))
    assert r <= 64 * ell * ell * max(1, math.log2(p))
    # smallest: every smaller prime fails some condition
    for q in range(2, r):
        if is_prime(q) and q != p:
            assert any((p**i - 1) % q == 0 for i in range(1, ell))


def test_transcript_invariants():
    c = circ(f"a = INPUT x^{3**30} + 2\nb = INPUT -1*x^{3**30} + -2\ns = ADD a b\nOUTPUT s")
    res = pit(c, PitParams(epsilon=Fraction(1, 7), trials=4, ring=PrimeField(5)))
    assert res.zero and len(res.transcripts) == 4
    for tr in res.transcripts:
        assert tr.accepted
        assert tr.t == max(tr.ell, 7)
        assert tr.modulus_degree == tr.t * (tr.r - 1)
        assert len(tr.b) == tr.ell
        assert is_prime(tr.r) and tr.r != tr.prime
        assert all((tr.prime**i - 1) % tr.r for i in range(1, tr.ell))


def test_forced_trial_rejects_x_plus_one():
    # x + 1 over F_2 with b = (1), t = 1, r = 3: T = x^2 + 1 ... reduced by hand
    F = PrimeField(2)
    ctx = build_test_modulus(3, (1,), 1, F)
    assert list(ctx.modulus.coeffs) == [1, 1, 1]  # (x+1)^2 + (x+1) + 1 = x^2 + x + 1 over F_2
    rem = eval_mod(circ("a = INPUT x + 1\nOUTPUT a"), ctx)
    assert list(rem.coeffs) == [1, 1]


def test_zero_circuits():
    c = circ("a = INPUT x^5 + 3\nb = INPUT -1*x^5 + -3\ns = ADD a b\nOUTPUT s")
    res = pit(c, PitParams(trials=5))
    assert res.zero and all(t.accepted for t in res.transcripts)
    c = circ("a = INPUT x1*x2\nb = INPUT -1*x2*x1\ns = ADD a b\nOUTPUT s")
    assert pit_fp(c, PitParams(trials=5), field=PrimeField(3)).zero
    assert pit_z(c, PitParams(trials=5)).zero


def test_six_x_over_z():
    c = circ("a = INPUT 6*x\nOUTPUT a")
    assert len(primes_for_bits(coefficient_bits(c))) >= 3
    res = pit(c, PitParams(trials=3))
    assert not res.zero
    assert [t.prime for t in res.transcripts] == [2, 2, 2, 3, 3, 3, 5]
    assert pit(c, PitParams(ring=PrimeField(3))).zero


def test_big_power_over_f3_is_nonzero():
    c = circ(f"a = INPUT x^{10**9}\nOUTPUT a")
    for seed in range(20):
        assert not pit(c, PitParams(trials=20, seed=seed, ring=PrimeField(3))).zero


def test_coefficient_bound_covers_true_coefficients():
    rng = random.Random(19)
    for _ in range(200):
        c = random_instance(rng, rng.randint(1, 2))
        bits = coefficient_bits(c)
        poly = expand_circuit(c)
        assert all(abs(a) < 2**bits for a in poly.coeffs.values())
        prod = math.prod(primes_for_bits(bits))
        assert prod > 2 ** (bits + 1)


def test_determinism():
    c = circ("a = INPUT 6*x^77 + x\nb = INPUT -1*x\ns = ADD a b\nOUTPUT s")
    a = pit(c, PitParams(trials=5, seed=42)).to_dict()
    b = pit(c, PitParams(trials=5, seed=42)).to_dict()
    assert a == b
    r1 = trial_rng(7, (0, 1)).integers(0, 2, size=64)
    r2 = trial_rng(7, (0, 2)).integers(0, 2, size=64)
    assert list(r1) != list(r2)


def test_ring_dispatch_and_json():
    c = circ("a = INPUT 7*x\nOUTPUT a")
    assert pit(c, PitParams(ring=PrimeField(7))).zero
    res = pit(c, PitParams(ring=ZZ, trials=2))
    d = res.to_dict()
    assert d["verdict"] == "nonzero" and d["ring"] == "Z" and d["epsilon"] == "1/2"
    assert set(d["transcripts"][0]) >= {"prime", "ell", "t", "r", "b", "accepted"}


def test_matches_oracle_small():
    rng = random.Random(23)
    for i in range(60):
        c = random_instance(rng, rng.randint(1, 3))
        want = expand_circuit(c).is_zero()
        assert pit(c, PitParams(trials=20, seed=i)).zero == want
        p = rng.choice([2, 3, 5])
        want_p = expand_circuit(c, modulus=p).is_zero()
        assert pit(c, PitParams(trials=20, seed=i, ring=PrimeField(p))).zero == want_p
