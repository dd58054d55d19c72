"""Compressed word problems for wreath products G wr Z^k with G abelian.

Over Z wr Z a word w in {a, A, t, T} (A, T the inverses) is read with a
cursor starting at 0: ``a`` moves it right, ``t`` adds 1 at the cursor.
For a word whose cursor never goes negative before a t,
p_w(x) = sum of +-x^pos over its t-letters, and w = 1 iff p_w = 0 and the
cursor returns to 0.  This module turns word SLPs into powerful skew
circuits for q_w with p_w = x^m q_w, and back again.
"""

import re
from dataclasses import dataclass, field

from .circuit import Add, Input, Mul, PowerfulSkewCircuit, kronecker_substitute
from .errors import ParseError, SLPError
from .pit import pit_fp, pit_z
from .polyring import PrimeField, is_prime
from .slp import Concat, NdSLP, SLPBuilder, Terminal, lengths, rewrite_symbols
from .sparse import SparsePoly

WORD_ALPHABET = ("a", "A", "t", "T")

# -- groups ------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """G wr Z^k with G a direct product of copies of Z (None) and Z_p (p)."""

    factors: tuple = (None,)
    k: int = 1

    def __post_init__(self):
        if not self.factors:
            raise ValueError("the base group needs at least one factor")
        if self.k < 1:
            raise ValueError("the right factor needs rank >= 1")
        for p in self.factors:
            if p is not None and not is_prime(p):
                raise ValueError(f"Z_{p}: only prime moduli are supported")

    @property
    def m(self):
        return len(self.factors)

    def cursor_symbols(self):
        return [(f"a{i}", f"A{i}") for i in range(1, self.k + 1)]

    def coeff_symbols(self):
        return [(f"g{j}", f"G{j}") for j in range(1, self.m + 1)]

    def alphabet(self):
        out = []
        for pair in self.cursor_symbols() + self.coeff_symbols():
            out.extend(pair)
        return tuple(out)

    def decode(self, sym):
        """('cursor' | 'coeff', 0-based index, +1 | -1) for a generator symbol."""
        m = re.fullmatch(r"([aAgG])(\d+)", sym)
        if m:
            kind, idx = m.group(1), int(m.group(2))
        elif sym in ("a", "A") and self.k == 1:
            kind, idx = sym, 1
        elif sym in ("t", "T") and self.m == 1:
            kind, idx = "g" if sym == "t" else "G", 1
        else:
            raise SLPError(f"symbol {sym!r} is not a generator of {self}")
        bound = self.k if kind in "aA" else self.m
        if not 1 <= idx <= bound:
            raise SLPError(f"symbol {sym!r} is not a generator of {self}")
        return ("cursor" if kind in "aA" else "coeff", idx - 1, 1 if kind.islower() else -1)

    def __str__(self):
        base = " x ".join("Z" if p is None else f"Z_{p}" for p in self.factors)
        return f"{base} wr Z" + (f"^{self.k}" if self.k > 1 else "")


_FACTOR = re.compile(r"Z(?:_(\d+))?$")


def parse_group(text):
    """Parse ``(Z|Z_p)(x(Z|Z_p))* wr Z^k``; a bare ``Z^k`` means Z wr Z^k."""
    s = text.replace("≀", " wr ").replace("×", " x ").replace("(", " ").replace(")", " ")
    parts = s.split(" wr ")
    if len(parts) == 1:
        base, right = "Z", parts[0]
    elif len(parts) == 2:
        base, right = parts
    else:
        raise ParseError(f"bad group {text!r}")
    m = re.fullmatch(r"Z(?:\^(\d+))?", right.strip())
    if not m:
        raise ParseError(f"bad right factor in {text!r}")
    k = int(m.group(1) or 1)
    factors = []
    for tok in base.split(" x "):
        fm = _FACTOR.match(tok.strip())
        if not fm:
            raise ParseError(f"bad factor {tok.strip()!r} in {text!r}")
        factors.append(int(fm.group(1)) if fm.group(1) else None)
    try:
        return GroupSpec(tuple(factors), k)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- Z wr Z: SLP -> circuit -----------------------------------------------------------


def _symbol_delta(sym):
    return {"a": 1, "A": -1}.get(sym, 0)


def delta(w):
    """Net cursor movement of val(w) (additive evaluation, big integers)."""
    d = {}
    for v in w.order():
        rule = w.rules[v]
        if isinstance(rule, Terminal):
            if rule.symbol not in WORD_ALPHABET:
                raise SLPError(f"symbol {rule.symbol!r} is not in a, A, t, T")
            d[v] = _symbol_delta(rule.symbol)
        else:
            d[v] = d[rule.left] + d[rule.right]
    return d[w.start]


def conjugate_positive(w):
    """(w', k) with val(w') = a^k val(w) a^-k letter-wise inside every t.

    Each rule X -> t^(+-1) becomes X -> a^k t^(+-1) A^k with k = |val(w)|,
    so every variable of w' has a value whose t-letters sit at cursor
    positions >= 0.
    """
    k = lengths(w)[w.start][0]
    b = SLPBuilder(1, taken=w.rules, prefix="_c")
    ak = b.power(b.terminal("a"), k)
    aki = b.power(b.terminal("A"), k)
    rules = dict(w.rules)
    for v, rule in w.rules.items():
        if isinstance(rule, Terminal) and rule.symbol in ("t", "T"):
            inner = b.cat(b.terminal(rule.symbol), aki)
            rules[v] = Concat(ak, 1, inner)
    rules.update(b.rules)
    return NdSLP(1, WORD_ALPHABET, rules, w.start), k


@dataclass(frozen=True)
class WreathStats:
    d: int  # net cursor movement
    m: int  # x^m divides p of the value; can be negative, since a t-free left part counts as 0
    has_t: bool


def wreath_stats(w, k=None):
    """Per-variable stats of the conjugated program, computed on w itself.

    t-rules are read as their conjugates a^k t A^k (d = 0, m = k); for
    concatenations BC, m = min(m_B, d_B + m_C) if C contains t, else m_B.
    """
    if k is None:
        k = lengths(w)[w.start][0]
    out = {}
    for v in w.order():
        rule = w.rules[v]
        if isinstance(rule, Terminal):
            sym = rule.symbol
            if sym not in WORD_ALPHABET:
                raise SLPError(f"symbol {sym!r} is not in a, A, t, T")
            out[v] = WreathStats(_symbol_delta(sym), k if sym in "tT" else 0, sym in "tT")
            continue
        sb, sc = out[rule.left], out[rule.right]
        m = min(sb.m, sb.d + sc.m) if sc.has_t else sb.m
        out[v] = WreathStats(sb.d + sc.d, m, sb.has_t or sc.has_t)
    return out


def slp_to_circuit(w):
    """(circuit for q_w over Z[x], Δ(val(w)), stats) with p_w' = x^m q_w for the
    conjugated word w'.  val(w) = 1 in Z wr Z iff q_w = 0 and Δ = 0."""
    k = lengths(w)[w.start][0]
    stats = wreath_stats(w, k)
    gates = {}
    gate_of = {}
    consts = {}

    def const(c):
        name = consts.get(c)
        if name is None:
            name = consts[c] = f"c{c}" if c >= 0 else f"cm{-c}"
            gates[name] = Input(SparsePoly.constant(c))
        return name

    def shifted(g, e):
        if e == 0:
            return g
        mono = f"x^{e}"
        if mono not in gates:
            gates[mono] = Input(SparsePoly.monomial(1, (e,)))
        name = f"{g}*x^{e}"
        gates[name] = Mul(g, mono)
        return name

    for v in w.order():
        rule = w.rules[v]
        if isinstance(rule, Terminal):
            gate_of[v] = const({"t": 1, "T": -1}.get(rule.symbol, 0))
            continue
        B, C = rule.left, rule.right
        sb, sc, sa = stats[B], stats[C], stats[v]
        if not sc.has_t:
            gate_of[v] = gate_of[B]
            continue
        right = shifted(gate_of[C], sb.d + sc.m - sa.m)
        if not sb.has_t:
            # q_B is zero, so only the C part survives
            gate_of[v] = right
            continue
        left = shifted(gate_of[B], sb.m - sa.m)
        name = f"v:{v}"
        gates[name] = Add(left, right)
        gate_of[v] = name
    return PowerfulSkewCircuit(1, gates, gate_of[w.start]), stats[w.start].d, stats


# -- circuit -> Z wr Z word SLP -----------------------------------------------------


def circuit_to_wordslp(c):
    """Word SLP over a, A, t, T whose p-polynomial is val(c).

    The word is well-formed: cursor never negative, net movement zero.
    Multivariate circuits are made univariate by Kronecker substitution first.
    """
    if c.nvars > 1:
        _, c = kronecker_substitute(c)
    b = SLPBuilder(1, prefix="W")
    a, ai = b.terminal("a"), b.terminal("A")
    t, ti = b.terminal("t"), b.terminal("T")
    zero = b.cat(a, ai)

    def wrap(n, inner):
        return b.concat([b.power(a, n), inner, b.power(ai, n)])

    def input_words(poly):
        pos = b.concat(wrap(e[0], b.power(t if cf > 0 else ti, abs(cf))) for e, cf in poly.terms)
        neg = b.concat(wrap(e[0], b.power(ti if cf > 0 else t, abs(cf))) for e, cf in poly.terms)
        return (pos or zero), (neg or zero)

    word, primed = {}, {}
    for g in c.order():
        rhs = c.gates[g]
        if isinstance(rhs, Input):
            word[g], primed[g] = input_words(rhs.value.lift())
        elif isinstance(rhs, Add):
            word[g] = b.cat(word[rhs.left], word[rhs.right])
            primed[g] = b.cat(primed[rhs.left], primed[rhs.right])
        else:
            if c.is_input(rhs.right):
                factor, other = c.gates[rhs.right].value.lift(), rhs.left
            else:
                factor, other = c.gates[rhs.left].value.lift(), rhs.right
            u, u_neg = word[other], primed[other]
            word[g] = b.concat(
                wrap(e[0], b.power(u if cf > 0 else u_neg, abs(cf))) for e, cf in factor.terms) or zero
            primed[g] = b.concat(
                wrap(e[0], b.power(u_neg if cf > 0 else u, abs(cf))) for e, cf in factor.terms) or zero
    return b.build(word[c.output], WORD_ALPHABET)


# -- general G wr Z^k -----------------------------------------------------------------


def project(w, spec, j, d):
    """The Z wr Z word for coefficient factor j, with a_i -> a^(d^(i-1)).

    Foreign coefficient generators are erased.  Returns None when nothing
    is left.
    """
    def image(b, sym):
        kind, idx, sign = spec.decode(sym)
        if kind == "coeff":
            if idx != j:
                return None
            return b.terminal("t" if sign > 0 else "T")
        return b.power(b.terminal("a" if sign > 0 else "A"), d ** idx)

    return rewrite_symbols(w, image, WORD_ALPHABET, prefix="P")


@dataclass
class CwpResult:
    identity: bool
    group: GroupSpec
    reason: str  # "empty", "cursor" or "pit"
    cursor: tuple = ()
    factors: list = field(default_factory=list)

    @property
    def verdict(self):
        return "identity" if self.identity else "not-identity"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "group": str(self.group),
            "reason": self.reason,
            "cursor": list(self.cursor),
            "factors": [
                {"factor": j + 1, **r.to_dict()} for j, r in self.factors
            ],
        }


def cursor_of(w, spec):
    """Net cursor movement in Z^k."""
    memo = {}
    for v in w.order():
        rule = w.rules[v]
        if isinstance(rule, Terminal):
            vec = [0] * spec.k
            kind, idx, sign = spec.decode(rule.symbol)
            if kind == "cursor":
                vec[idx] = sign
            memo[v] = tuple(vec)
        else:
            memo[v] = tuple(x + y for x, y in zip(memo[rule.left], memo[rule.right]))
    return memo[w.start]


def cwp(w, spec, params):
    """Decide val(w) = 1 in G wr Z^k.  ``w`` is None for the empty word.

    "not-identity" is always correct; "identity" errs with probability at
    most (1 - epsilon)^trials per factor.
    """
    if w is None:
        return CwpResult(True, spec, "empty", (0,) * spec.k)
    if w.dim != 1:
        raise SLPError("word problems need a one-dimensional program")
    cursor = cursor_of(w, spec)
    if any(cursor):
        return CwpResult(False, spec, "cursor", cursor)
    d = 2 * (lengths(w)[w.start][0] + 1)
    results = []
    for j, p in enumerate(spec.factors):
        proj = project(w, spec, j, d)
        if proj is None:
            continue
        circ, _, _ = slp_to_circuit(proj)
        if p is None:
            res = pit_z(circ, params, stream=(j,))
        else:
            res = pit_fp(circ, params, field=PrimeField(p), stream=(j,))
        results.append((j, res))
        if not res.zero:
            return CwpResult(False, spec, "pit", cursor, results)
    return CwpResult(True, spec, "pit", cursor, results)
