import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewpit.circuit import parse_circuit
from skewpit.errors import BudgetExceeded
from skewpit.oracle import (
    ExplicitPoly, WreathElem, expand_circuit, generator, simulate_word, wreath_mul, wreath_poly,
)
from skewpit.wreath import GroupSpec, parse_group

ZWRZ = GroupSpec()


def test_expand_examples():
    assert expand_circuit(parse_circuit("a = INPUT 3*x^2\nOUTPUT a")).coeffs == {(2,): 3}
    c = parse_circuit("a = INPUT x + 1\nb = INPUT x + -1\nm = MUL a b\nOUTPUT m")
    assert expand_circuit(c).coeffs == {(2,): 1, (0,): -1}
    lines = ["g0 = INPUT 1"]
    for i in range(1, 6):
        lines += [f"f{i} = INPUT x^{2**i} + 1", f"g{i} = MUL g{i-1} f{i}"]
    assert len(expand_circuit(parse_circuit("\n".join(lines + ["OUTPUT g5"])))) == 32
    with pytest.raises(BudgetExceeded):
        expand_circuit(parse_circuit("\n".join(lines + ["OUTPUT g5"])), budget=16)


def test_expand_mod_p():
    c = parse_circuit("a = INPUT x + 1\nm = MUL a a\nOUTPUT m")
    assert expand_circuit(c, modulus=2).coeffs == {(2,): 1, (0,): 1}
    assert ExplicitPoly(1, {}) == ExplicitPoly(1, {})


def test_wreath_mul_examples():
    t, a = generator("t", ZWRZ), generator("a", ZWRZ)
    u = wreath_mul(t, a, ZWRZ)
    assert wreath_mul(u, WreathElem.identity(ZWRZ), ZWRZ) == u
    assert wreath_mul(t, a, ZWRZ) != wreath_mul(a, t, ZWRZ)


def _random_elem(rng, spec):
    word = [rng.choice(spec.alphabet()) for _ in range(rng.randint(0, 12))]
    return simulate_word(word, spec)


@given(st.integers(0, 2**32), st.sampled_from(["Z wr Z", "Z_3 wr Z", "Z x Z_2 wr Z^2"]))
def test_associativity(seed, group):
    spec = parse_group(group)
    rng = random.Random(seed)
    x, y, z = (_random_elem(rng, spec) for _ in range(3))
    assert wreath_mul(wreath_mul(x, y, spec), z, spec) == wreath_mul(x, wreath_mul(y, z, spec), spec)


@given(st.integers(0, 2**32), st.sampled_from(["Z wr Z", "Z_2 wr Z", "Z x Z_2 wr Z^2"]))
def test_simulation_is_a_homomorphism(seed, group):
    spec = parse_group(group)
    rng = random.Random(seed)
    u = [rng.choice(spec.alphabet()) for _ in range(rng.randint(0, 30))]
    v = [rng.choice(spec.alphabet()) for _ in range(rng.randint(0, 30))]
    assert simulate_word(u + v, spec) == wreath_mul(simulate_word(u, spec), simulate_word(v, spec), spec)


def test_simulate_examples():
    assert simulate_word(["t", "T"], ZWRZ).is_identity()
    e = simulate_word(["a", "t", "A", "T"], ZWRZ)
    assert dict(e.f) == {(1,): (1,), (0,): (-1,)} and e.cursor == (0,)
    assert str(wreath_poly(e)) == "1*x + -1"
    z5 = parse_group("Z_5 wr Z")
    assert simulate_word(["t"] * 5, z5).is_identity()
    assert not simulate_word(["t"] * 4, z5).is_identity()
    with pytest.raises(BudgetExceeded):
        simulate_word(["t"] * 10, ZWRZ, budget=5)
