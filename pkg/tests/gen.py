"""Random instance generators shared by the test modules."""

import random

from skewpit.circuit import Add, Input, Mul, PowerfulSkewCircuit, check
from skewpit.slp import SLPBuilder
from skewpit.sparse import SparsePoly


def random_poly(rng, nvars, max_terms=3, max_exp=6, max_coeff=3, big=False):
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        if big and rng.random() < 0.3:
            exps = tuple(e + (1 << rng.randint(20, 40)) for e in exps)
        terms.append((exps, rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c])))
    return SparsePoly(nvars, tuple(terms))


def random_circuit(rng, nvars=1, gates=6, **poly_kw):
    """A random powerful skew circuit; the output is the last gate."""
    g = {}
    names = []

    def inp(poly=None):
        name = f"i{len(g)}"
        g[name] = Input(poly or random_poly(rng, nvars, **poly_kw))
        return name

    names.append(inp())
    for _ in range(gates):
        u = rng.choice(names)
        if rng.random() < 0.5:
            v = rng.choice(names + [inp()])
            name = f"a{len(g)}"
            g[name] = Add(u, v)
        else:
            name = f"m{len(g)}"
            g[name] = Mul(u, inp())
        names.append(name)
    return check(PowerfulSkewCircuit(nvars, g, names[-1]))


def split_inputs(rng, c):
    """Same polynomial, different shape: split inputs and distribute products."""
    g = {}
    # inputs feeding a product must stay inputs to keep the circuit skew
    pinned = {x for rhs in c.gates.values() if isinstance(rhs, Mul) for x in (rhs.left, rhs.right)}
    for name, rhs in c.gates.items():
        if (isinstance(rhs, Input) and name not in pinned and len(rhs.value.terms) > 1
                and rng.random() < 0.7):
            terms = list(rhs.value.terms)
            cut = rng.randint(1, len(terms) - 1)
            g[name + "_l"] = Input(SparsePoly(c.nvars, tuple(terms[:cut])))
            g[name + "_r"] = Input(SparsePoly(c.nvars, tuple(terms[cut:])))
            g[name] = Add(name + "_r", name + "_l")
        elif isinstance(rhs, Mul) and isinstance(c.gates[rhs.left], Add) and rng.random() < 0.7:
            a = c.gates[rhs.left]
            g[name + "_l"] = Mul(a.left, rhs.right)
            g[name + "_r"] = Mul(a.right, rhs.right)
            g[name] = Add(name + "_r", name + "_l")
        else:
            g[name] = rhs
    return check(PowerfulSkewCircuit(c.nvars, g, c.output))


def difference(c1, c2, extra=None):
    """Circuit for val(c1) - val(c2) (+ extra) with c2's gates renamed."""
    g = {f"p:{k}": _rename(v, "p:") for k, v in c1.gates.items()}
    g.update({f"q:{k}": _rename(v, "q:") for k, v in c2.gates.items()})
    g["neg"] = Input(SparsePoly.constant(-1, c1.nvars))
    g["negq"] = Mul(f"q:{c2.output}", "neg")
    g["out"] = Add(f"p:{c1.output}", "negq")
    if extra is not None:
        g["extra"] = Input(extra)
        g["out2"] = Add("out", "extra")
        return check(PowerfulSkewCircuit(c1.nvars, g, "out2"))
    return check(PowerfulSkewCircuit(c1.nvars, g, "out"))


def _rename(rhs, prefix):
    if isinstance(rhs, Input):
        return rhs
    return type(rhs)(prefix + rhs.left, prefix + rhs.right)


def random_instance(rng, nvars=1, **kw):
    """Roughly half zero, half nonzero-but-nearly-cancelling circuits."""
    c = random_circuit(rng, nvars, gates=rng.randint(1, 7), **kw)
    twin = split_inputs(rng, c)
    roll = rng.random()
    if roll < 0.45:
        return difference(c, twin)
    if roll < 0.8:
        return difference(c, twin, random_poly(rng, nvars, max_terms=1))
    return c


# -- SLPs -------------------------------------------------------------------------


def random_slp(rng, dim, alphabet, shape, prefix="V"):
    """Random NdSLP producing a picture of the given shape (by random splits)."""
    b = SLPBuilder(dim, prefix=prefix)
    cache = {}

    def build(shape):
        if all(n == 1 for n in shape):
            return b.terminal(rng.choice(alphabet))
        key = shape
        if key in cache and rng.random() < 0.6:
            return rng.choice(cache[key])
        axes = [i for i, n in enumerate(shape) if n > 1]
        i = rng.choice(axes)
        cut = rng.randint(1, shape[i] - 1)
        left = shape[:i] + (cut,) + shape[i + 1:]
        right = shape[:i] + (shape[i] - cut,) + shape[i + 1:]
        v = b.cat(build(left), build(right), i + 1)
        cache.setdefault(key, []).append(v)
        return v

    start = build(tuple(shape))
    return b.build(start, alphabet)


def slp_from_picture(arr, alphabet, rng, prefix="P"):
    """An SLP for an explicit ndarray picture, splitting along random axes."""
    b = SLPBuilder(arr.ndim, prefix=prefix)

    def build(sub):
        if sub.size == 1:
            return b.terminal(sub.flat[0])
        axes = [i for i, n in enumerate(sub.shape) if n > 1]
        i = rng.choice(axes)
        cut = rng.randint(1, sub.shape[i] - 1)
        lo = sub.take(range(cut), axis=i)
        hi = sub.take(range(cut, sub.shape[i]), axis=i)
        return b.cat(build(lo), build(hi), i + 1)

    return b.build(build(arr), alphabet)


def word_slp(word, alphabet=None, rng=None):
    """A balanced (or randomly split) SLP for an explicit word."""
    rng = rng or random.Random(0)
    b = SLPBuilder(1, prefix="W")

    def build(lo, hi):
        if hi - lo == 1:
            return b.terminal(word[lo])
        mid = rng.randint(lo + 1, hi - 1)
        return b.cat(build(lo, mid), build(mid, hi))

    return b.build(build(0, len(word)), alphabet or tuple(sorted(set(word))))


def power_word_slp(parts):
    """SLP for a concatenation of (symbols, repeat) blocks with doubling."""
    b = SLPBuilder(1, prefix="B")
    pieces = []
    for syms, times in parts:
        block = b.concat(b.terminal(s) for s in syms)
        pieces.append(b.power(block, times))
    return b.build(b.concat(pieces), tuple(sorted({s for syms, _ in parts for s in syms})))

