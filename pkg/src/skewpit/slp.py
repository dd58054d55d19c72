"""n-dimensional straight-line programs and picture equality via PIT over F_2.

A picture is encoded as f_p = sum over cells of p(e) * prod x_i^(e_i - 1),
i.e. coordinates are shifted to 0-based exponents so the first cell is the
constant term.  Two pictures of equal shape are equal iff f_p + f_q = 0
over F_2.
"""

import re
from dataclasses import dataclass

import numpy as np

from .circuit import Add, CircuitError, Input, Mul, PowerfulSkewCircuit, _topo
from .errors import BudgetExceeded, ParseError, SLPError
from .pit import pit_fp
from .polyring import PrimeField
from .sparse import SparsePoly


@dataclass(frozen=True)
class Terminal:
    symbol: str


@dataclass(frozen=True)
class Concat:
    left: str
    axis: int  # 1-based
    right: str


@dataclass(frozen=True, eq=False)
class NdSLP:
    dim: int
    alphabet: tuple
    rules: dict
    start: str

    def _succ(self, v):
        rule = self.rules.get(v)
        if rule is None:
            return None
        return () if isinstance(rule, Terminal) else (rule.left, rule.right)

    def order(self, everything=False):
        roots = sorted(self.rules) if everything else [self.start]
        try:
            return _topo(self._succ, roots)
        except CircuitError as exc:
            raise SLPError("; ".join(exc.problems)) from None

    def shape(self):
        return lengths(self)[self.start]


def validate(s):
    if s.dim < 1:
        raise SLPError("dimension must be >= 1")
    if s.start not in s.rules:
        raise SLPError(f"start variable {s.start!r} is undefined")
    alpha = set(s.alphabet)
    for v, rule in s.rules.items():
        if isinstance(rule, Terminal):
            if rule.symbol not in alpha:
                raise SLPError(f"variable {v!r}: symbol {rule.symbol!r} not in the alphabet")
        else:
            if not 1 <= rule.axis <= s.dim:
                raise SLPError(f"variable {v!r}: axis {rule.axis} out of range 1..{s.dim}")
            for child in (rule.left, rule.right):
                if child not in s.rules:
                    raise SLPError(f"variable {v!r} references undefined {child!r}")
    lengths(s, everything=True)
    return s


def lengths(s, everything=False):
    """Map each variable to its tuple of side lengths (big integers)."""
    out = {}
    for v in s.order(everything):
        rule = s.rules[v]
        if isinstance(rule, Terminal):
            out[v] = (1,) * s.dim
            continue
        lb, lc = out[rule.left], out[rule.right]
        i = rule.axis - 1
        for j in range(s.dim):
            if j != i and lb[j] != lc[j]:
                raise SLPError(
                    f"variable {v!r}: operands disagree on axis {j + 1} "
                    f"({lb[j]} vs {lc[j]}) for concatenation along axis {i + 1}")
        out[v] = lb[:i] + (lb[i] + lc[i],) + lb[i + 1:]
    return out


def cells(s):
    return int(np.prod([int(n) for n in s.shape()], dtype=object))


def expand(s, budget=100_000):
    """The picture as an object ndarray (1-dimensional for words)."""
    shape = s.shape()
    total = 1
    for n in shape:
        total *= n
    if total > budget:
        raise BudgetExceeded(f"picture has {total} cells, budget is {budget}")
    memo = {}
    for v in s.order():
        rule = s.rules[v]
        if isinstance(rule, Terminal):
            arr = np.empty((1,) * s.dim, dtype=object)
            arr[(0,) * s.dim] = rule.symbol
            memo[v] = arr
        else:
            memo[v] = np.concatenate([memo[rule.left], memo[rule.right]], axis=rule.axis - 1)
    return memo[s.start]


def expand_word(s, budget=100_000):
    if s.dim != 1:
        raise SLPError("not a one-dimensional program")
    return list(expand(s, budget))


class SLPBuilder:
    """Incremental SLP construction with hash-consing of right-hand sides."""

    def __init__(self, dim=1, taken=(), prefix="V"):
        self.dim = dim
        self.rules = {}
        self._index = {}
        self._taken = set(taken)
        self._prefix = prefix
        self._count = 0

    def _fresh(self):
        while True:
            name = f"{self._prefix}{self._count}"
            self._count += 1
            if name not in self._taken and name not in self.rules:
                return name

    def add(self, rule, name=None):
        if name is None:
            hit = self._index.get(rule)
            if hit is not None:
                return hit
            name = self._fresh()
            self._index[rule] = name
        self.rules[name] = rule
        return name

    def terminal(self, symbol):
        return self.add(Terminal(symbol))

    def cat(self, x, y, axis=1):
        if x is None:
            return y
        if y is None:
            return x
        return self.add(Concat(x, axis, y))

    def concat(self, parts, axis=1):
        acc = None
        for part in parts:
            acc = self.cat(acc, part, axis)
        return acc

    def power(self, x, n, axis=1):
        """x repeated n times along ``axis`` by repeated doubling; None when n == 0."""
        if n < 0:
            raise ValueError("negative power")
        if n == 0 or x is None:
            return None
        acc, sq = None, x
        while True:
            if n & 1:
                acc = self.cat(acc, sq, axis)
            n >>= 1
            if not n:
                return acc
            sq = self.cat(sq, sq, axis)

    def build(self, start, alphabet):
        return NdSLP(self.dim, tuple(alphabet), dict(self.rules), start)


def rewrite_symbols(s, image, alphabet, prefix="V"):
    """Apply a symbol homomorphism to a one-dimensional program.

    ``image(builder, symbol)`` returns the builder variable for the image of
    ``symbol``, or None to erase it.  Returns None if the whole word is erased.
    """
    b = SLPBuilder(s.dim, prefix=prefix)
    sym_var, var = {}, {}
    for v in s.order():
        rule = s.rules[v]
        if isinstance(rule, Terminal):
            if rule.symbol not in sym_var:
                sym_var[rule.symbol] = image(b, rule.symbol)
            var[v] = sym_var[rule.symbol]
        else:
            var[v] = b.cat(var[rule.left], var[rule.right], rule.axis)
    start = var[s.start]
    return None if start is None else b.build(start, alphabet)


def encode_binary(s, alphabet=None):
    """Replace the i-th symbol (1-based, of k) by the axis-1 block 0^i 1^(k-i).

    Programs already over {0, 1} are returned unchanged.
    """
    alphabet = tuple(alphabet or s.alphabet)
    if set(alphabet) <= {"0", "1"}:
        return s
    k = len(alphabet)
    b = SLPBuilder(s.dim, taken=s.rules, prefix="_bit")
    zero = b.add(Terminal("0"))
    one = b.add(Terminal("1"))
    rules = dict(s.rules)
    for v, rule in s.rules.items():
        if not isinstance(rule, Terminal):
            continue
        i = alphabet.index(rule.symbol) + 1
        parts = [zero] * i + [one] * (k - i)
        if len(parts) == 1:
            rules[v] = Terminal("0" if i else "1")
        else:
            rules[v] = Concat(parts[0], 1, b.concat(parts[1:]))
    rules.update(b.rules)
    return NdSLP(s.dim, ("0", "1"), rules, s.start)


def to_poly_circuit(s1, s2):
    """Circuit over F_2[x_1..x_n] computing f_val(s1) + f_val(s2).

    Both programs must be over {0, 1} and have the same shape.
    """
    if s1.dim != s2.dim:
        raise SLPError("dimension mismatch")
    if s1.shape() != s2.shape():
        raise SLPError("pictures have different shapes")
    n = s1.dim
    gates = {}
    for tag, s in (("1", s1), ("2", s2)):
        lens = lengths(s)
        for v in s.order():
            rule = s.rules[v]
            g = f"{tag}:{v}"
            if isinstance(rule, Terminal):
                if rule.symbol not in ("0", "1"):
                    raise SLPError(f"symbol {rule.symbol!r} is not binary")
                gates[g] = Input(SparsePoly.constant(int(rule.symbol), n, 2))
                continue
            shift = [0] * n
            shift[rule.axis - 1] = lens[rule.left][rule.axis - 1]
            gates[g + "^"] = Input(SparsePoly.monomial(1, shift, 2))
            gates[g + "*"] = Mul(f"{tag}:{rule.right}", g + "^")
            gates[g] = Add(f"{tag}:{rule.left}", g + "*")
    gates["S"] = Add(f"1:{s1.start}", f"2:{s2.start}")
    return PowerfulSkewCircuit(n, gates, "S")


@dataclass
class SlpEqResult:
    equal: bool
    reason: str  # "shape" or "pit"
    pit: object = None

    @property
    def verdict(self):
        return "equal" if self.equal else "not-equal"

    def to_dict(self):
        out = {"verdict": self.verdict, "reason": self.reason}
        if self.pit is not None:
            d = self.pit.to_dict()
            d.pop("verdict")
            out.update(d)
        return out


def slp_equal(s1, s2, params):
    """Randomized picture equality.  "not-equal" is always correct; "equal"
    is wrong with probability at most (1 - epsilon)^trials."""
    if s1.dim != s2.dim:
        raise SLPError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    if set(s1.alphabet) != set(s2.alphabet):
        raise SLPError("alphabet mismatch")
    if s1.shape() != s2.shape():
        return SlpEqResult(False, "shape")
    alphabet = tuple(s1.alphabet)
    c = to_poly_circuit(encode_binary(s1, alphabet), encode_binary(s2, alphabet))
    res = pit_fp(c, params, field=PrimeField(2))
    return SlpEqResult(res.zero, "pit", res)


# -- text format ------------------------------------------------------------------

_TERMINAL = re.compile(r"^(\S+)\s*->\s*'([^']+)'$")
_CONCAT = re.compile(r"^(\S+)\s*->\s*(\S+)\s+(?:\.(\d+)\s+)?(\S+)$")


def parse_slp(text):
    dim, alphabet, start = None, None, None
    rules = {}
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "DIM":
            try:
                dim = int(parts[1])
            except (IndexError, ValueError):
                raise ParseError("DIM needs an integer", num) from None
            continue
        if parts[0] == "ALPHABET":
            alphabet = tuple(parts[1:])
            continue
        if parts[0] == "START":
            if len(parts) != 2:
                raise ParseError("START needs one variable", num)
            start = parts[1]
            continue
        m = _TERMINAL.match(line)
        if m:
            name, rule = m.group(1), Terminal(m.group(2))
        else:
            m = _CONCAT.match(line)
            if not m:
                raise ParseError(f"cannot parse rule {line!r}", num)
            name = m.group(1)
            rule = Concat(m.group(2), int(m.group(3) or 1), m.group(4))
        if name in rules:
            raise ParseError(f"variable {name!r} defined twice", num)
        rules[name] = rule
    if start is None:
        raise ParseError("missing START line")
    if dim is None:
        dim = 1
    if alphabet is None:
        alphabet = tuple(sorted({r.symbol for r in rules.values() if isinstance(r, Terminal)}))
    s = NdSLP(dim, alphabet, rules, start)
    try:
        validate(s)
    except SLPError as exc:
        raise ParseError(str(exc)) from None
    return s


def format_slp(s):
    lines = [f"DIM {s.dim}", "ALPHABET " + " ".join(s.alphabet)]
    for v in s.order():
        rule = s.rules[v]
        if isinstance(rule, Terminal):
            lines.append(f"{v} -> '{rule.symbol}'")
        else:
            lines.append(f"{v} -> {rule.left} .{rule.axis} {rule.right}")
    lines.append(f"START {s.start}")
    return "\n".join(lines) + "\n"
