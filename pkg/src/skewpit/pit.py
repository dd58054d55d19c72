"""Randomized identity testing for powerful skew circuits.

Each trial draws a random bit vector b, builds the test modulus
T = Q_r(x^t + sum b_i x^i) over F_p and accepts iff val(C) mod T = 0.
A zero polynomial is accepted by every trial; a nonzero one is rejected
by each trial with probability at least epsilon.  Over Z the circuit is
tested modulo enough small primes to pin every coefficient down by CRT.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuit import Semiring, degree_bound, eval_mod, evaluate, kronecker_substitute
from .polyring import ZZ, PrimeField, build_test_modulus, first_primes

DEFAULT_R_CAP = 64


@dataclass(frozen=True)
class PitParams:
    epsilon: Fraction = Fraction(1, 2)
    trials: int = 40
    seed: int = 0
    ring: object = ZZ
    r_cap: int = DEFAULT_R_CAP

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned value")

    def with_ring(self, ring):
        return PitParams(self.epsilon, self.trials, self.seed, ring, self.r_cap)


@dataclass(frozen=True)
class TrialTranscript:
    prime: int
    trial: int
    ell: int
    t: int
    r: int
    b: tuple
    modulus_degree: int
    accepted: bool

    def to_dict(self):
        return {
            "prime": self.prime,
            "trial": self.trial,
            "ell": self.ell,
            "t": self.t,
            "r": self.r,
            "b": "".join(map(str, self.b)),
            "degree": self.modulus_degree,
            "accepted": self.accepted,
        }


@dataclass
class PitResult:
    zero: bool
    ring: str
    params: PitParams
    transcripts: list = field(default_factory=list)

    @property
    def verdict(self):
        return "zero" if self.zero else "nonzero"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "ring": self.ring,
            "epsilon": str(self.params.epsilon),
            "trials": self.params.trials,
            "seed": self.params.seed,
            "transcripts": [t.to_dict() for t in self.transcripts],
        }


def trial_rng(seed, key):
    """Independent PCG64 stream for the sub-stream ``key`` of ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def choose_ell(c):
    return max(1, degree_bound(c, 1).bit_length())


def find_r(p, ell, cap_constant=DEFAULT_R_CAP):
    """Smallest prime r != p dividing none of p^i - 1 for 1 <= i < ell."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    cap = int(cap_constant * ell * ell * max(1.0, math.log2(p)))
    for r in first_primes():
        if r > cap:
            raise RuntimeError(f"no suitable r <= {cap} for p={p}, ell={ell}; the search bound is violated")
        if r == p:
            continue
        x, ok = 1, True
        for _ in range(1, ell):
            x = x * p % r
            if x == 1:
                ok = False
                break
        if ok:
            return r


def run_trial(c, field, ell, t, r, rng, trial=0):
    b = tuple(int(v) for v in rng.integers(0, 2, size=ell))
    ctx = build_test_modulus(r, b, t, field)
    rem = eval_mod(c, ctx)
    return TrialTranscript(field.p, trial, ell, t, r, b, ctx.degree, rem.is_zero())


def reduce_circuit(c, p):
    """Coefficients reduced into [0, p); vanishing monomials dropped."""
    return c.map_inputs(lambda poly: poly.reduce_mod(p))


def _test_univariate(c, field, params, key):
    ell = choose_ell(c)
    t = max(ell, math.ceil(1 / params.epsilon))
    r = find_r(field.p, ell, params.r_cap)
    transcripts = []
    for i in range(params.trials):
        tr = run_trial(c, field, ell, t, r, trial_rng(params.seed, key + (i,)), trial=i)
        transcripts.append(tr)
        if not tr.accepted:
            return False, transcripts
    return True, transcripts


def pit_fp(c, params, field=None, stream=()):
    """Test val(c) = 0 over F_p.  Stops at the first rejecting trial.

    ``stream`` prefixes the RNG sub-stream key, so callers running several
    tests from one seed keep them independent.
    """
    field = field or params.ring
    if not isinstance(field, PrimeField):
        raise ValueError("pit_fp needs a prime field")
    c1 = reduce_circuit(c, field.p)
    if c1.nvars > 1:
        _, c1 = kronecker_substitute(c1)
    zero, transcripts = _test_univariate(c1, field, params, tuple(stream) + (0,))
    return PitResult(zero, str(field), params.with_ring(field), transcripts)


_BITS = Semiring("coefficient-bits", 0, 0, lambda a, b: max(a, b) + 1, lambda a, b: a + b)


def coefficient_bits(c):
    """B with every coefficient of val(c) below 2^B in absolute value.

    Structural bound on the l1 norm: inputs bitlen(max|a| * #monomials),
    additions max + 1, multiplications sum.
    """
    return evaluate(c, _BITS, lambda poly: (poly.max_abs_coeff() * len(poly.terms)).bit_length())


def primes_for_bits(bits):
    """First primes whose product exceeds 2^(bits+1)."""
    out, prod = [], 1
    for p in first_primes():
        if prod > 2 ** (bits + 1):
            return out
        out.append(p)
        prod *= p


def pit_z(c, params, stream=()):
    primes = primes_for_bits(coefficient_bits(c))
    lifted = c.map_inputs(lambda poly: poly.lift())
    if lifted.nvars > 1:
        _, lifted = kronecker_substitute(lifted)
    transcripts = []
    for idx, p in enumerate(primes):
        field = PrimeField(p)
        zero, trs = _test_univariate(reduce_circuit(lifted, p), field, params, tuple(stream) + (idx,))
        transcripts.extend(trs)
        if not zero:
            return PitResult(False, "Z", params.with_ring(ZZ), transcripts)
    return PitResult(True, "Z", params.with_ring(ZZ), transcripts)


def pit(c, params):
    if isinstance(params.ring, PrimeField):
        return pit_fp(c, params)
    return pit_z(c, params)
