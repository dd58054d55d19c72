"""Brute-force reference semantics: explicit circuit expansion and direct
simulation of wreath product words.  Desk-scale only."""

from dataclasses import dataclass

from .circuit import Add, Input
from .errors import BudgetExceeded
from .sparse import SparsePoly, format_poly

DEFAULT_MONOMIALS = 10_000
DEFAULT_SYMBOLS = 100_000


@dataclass(frozen=True, eq=False)
class ExplicitPoly:
    """Exponent vector -> nonzero coefficient."""

    nvars: int
    coeffs: dict
    modulus: int | None = None

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, ExplicitPoly) and self.nvars == other.nvars
                and self.modulus == other.modulus and self.coeffs == other.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def to_sparse(self):
        return SparsePoly(self.nvars, tuple(self.coeffs.items()), self.modulus)

    def __str__(self):
        return format_poly(self.to_sparse())


def _clean(acc, modulus):
    if modulus is not None:
        return {e: c % modulus for e, c in acc.items() if c % modulus}
    return {e: c for e, c in acc.items() if c}


def _add(a, b, modulus):
    acc = dict(a)
    for e, c in b.items():
        acc[e] = acc.get(e, 0) + c
    return _clean(acc, modulus)


def _mul(a, b, modulus):
    acc = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            acc[e] = acc.get(e, 0) + c1 * c2
    return _clean(acc, modulus)


def expand_circuit(c, budget=DEFAULT_MONOMIALS, modulus=None):
    """Exact val(c); raises BudgetExceeded once a gate's support tops ``budget``."""
    vals = {}
    for g in c.order():
        rhs = c.gates[g]
        if isinstance(rhs, Input):
            val = _clean(dict(rhs.value.terms), modulus)
        elif isinstance(rhs, Add):
            val = _add(vals[rhs.left], vals[rhs.right], modulus)
        else:
            left, right = vals[rhs.left], vals[rhs.right]
            if len(left) * len(right) > budget * budget:
                raise BudgetExceeded(f"gate {g!r}: product of {len(left)} and {len(right)} monomials")
            val = _mul(left, right, modulus)
        if len(val) > budget:
            raise BudgetExceeded(f"gate {g!r} has {len(val)} monomials, budget is {budget}")
        vals[g] = val
    return ExplicitPoly(c.nvars, vals[c.output], modulus)


# -- wreath products ---------------------------------------------------------------


@dataclass(frozen=True)
class WreathElem:
    """(f, cursor): f maps Z^k positions to base-group tuples, identity values omitted."""

    f: tuple  # sorted ((position, value), ...)
    cursor: tuple

    @classmethod
    def make(cls, fmap, cursor):
        return cls(tuple(sorted((p, v) for p, v in fmap.items() if any(v))), tuple(cursor))

    @classmethod
    def identity(cls, spec):
        return cls((), (0,) * spec.k)

    def is_identity(self):
        return not self.f and not any(self.cursor)

    def to_dict(self):
        return {
            "support": [[list(p), list(v)] for p, v in self.f],
            "cursor": list(self.cursor),
            "identity": self.is_identity(),
        }


def _reduce_value(v, spec):
    return tuple(x if p is None else x % p for x, p in zip(v, spec.factors))


def wreath_mul(u, v, spec):
    """(f1, g1)(f2, g2) = (a -> f1(a) f2(a - g1), g1 + g2)."""
    acc = dict(u.f)
    for pos, val in v.f:
        q = tuple(x + y for x, y in zip(pos, u.cursor))
        old = acc.get(q, (0,) * spec.m)
        acc[q] = _reduce_value(tuple(x + y for x, y in zip(old, val)), spec)
    return WreathElem.make(acc, tuple(x + y for x, y in zip(u.cursor, v.cursor)))


def generator(sym, spec):
    kind, idx, sign = spec.decode(sym)
    if kind == "cursor":
        cur = [0] * spec.k
        cur[idx] = sign
        return WreathElem((), tuple(cur))
    val = [0] * spec.m
    val[idx] = sign
    return WreathElem.make({(0,) * spec.k: _reduce_value(tuple(val), spec)}, (0,) * spec.k)


def simulate_word(word, spec, budget=DEFAULT_SYMBOLS):
    """Left-to-right product of the generators in ``word``."""
    word = list(word)
    if len(word) > budget:
        raise BudgetExceeded(f"word has {len(word)} symbols, budget is {budget}")
    decoded = {s: spec.decode(s) for s in set(word)}
    cursor = [0] * spec.k
    f = {}
    for sym in word:
        kind, idx, sign = decoded[sym]
        if kind == "cursor":
            cursor[idx] += sign
            continue
        pos = tuple(cursor)
        val = list(f.get(pos, (0,) * spec.m))
        val[idx] += sign
        p = spec.factors[idx]
        if p is not None:
            val[idx] %= p
        f[pos] = tuple(val)
    return WreathElem.make(f, cursor)


def wreath_poly(elem, factor=0):
    """p_w for a Z wr Z element: coefficient f(e) on x^e.  Negative positions
    are kept as-is, so call this on words whose cursor stays >= 0."""
    coeffs = {pos: val[factor] for pos, val in elem.f if val[factor]}
    return ExplicitPoly(len(elem.cursor), coeffs)
