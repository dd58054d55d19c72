"""Powerful skew circuits and powerful branching programs.

Gates are addressed by opaque string ids.  Input gates carry a
:class:`~skewpit.sparse.SparsePoly`; every multiplication gate must have at
least one input-gate operand.  Evaluation is always done in a recomputed
topological order, never in file order.
"""

import re
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import CircuitError, ParseError
from .sparse import SparsePoly, build_poly, format_poly, parse_terms, terms_nvars


@dataclass(frozen=True)
class Input:
    value: Any


@dataclass(frozen=True)
class Add:
    left: str
    right: str


@dataclass(frozen=True)
class Mul:
    left: str
    right: str


def _children(rhs):
    return () if isinstance(rhs, Input) else (rhs.left, rhs.right)


def _topo(succ, roots):
    """Children-first DFS order of everything reachable from ``roots``.

    ``succ`` maps a node to its successors; raises ``CircuitError`` on a
    cycle or a dangling reference.
    """
    order, state = [], {}
    for root in roots:
        if state.get(root) == 2:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                state[node] = 2
                order.append(node)
                continue
            st = state.get(node)
            if st == 2:
                continue
            if st == 1:
                raise CircuitError([f"cycle through {node!r}"])
            nxt = succ(node)
            if nxt is None:
                raise CircuitError([f"undefined gate {node!r}"])
            state[node] = 1
            stack.append((node, True))
            for child in reversed(nxt):
                cs = state.get(child)
                if cs == 1:
                    raise CircuitError([f"cycle through {child!r}"])
                if cs != 2:
                    stack.append((child, False))
    return order


@dataclass(frozen=True, eq=False)
class PowerfulSkewCircuit:
    nvars: int
    gates: dict
    output: str

    def _succ(self, g):
        rhs = self.gates.get(g)
        return None if rhs is None else _children(rhs)

    def order(self):
        """Gates reachable from the output, children before parents."""
        return _topo(self._succ, [self.output])

    def is_input(self, g):
        return isinstance(self.gates.get(g), Input)

    def size(self):
        return sum(rhs.value.size() if isinstance(rhs, Input) else 1
                   for rhs in self.gates.values())

    def inputs(self):
        return {g: rhs.value for g, rhs in self.gates.items() if isinstance(rhs, Input)}

    def map_inputs(self, fn, nvars=None):
        gates = {g: Input(fn(rhs.value)) if isinstance(rhs, Input) else rhs
                 for g, rhs in self.gates.items()}
        return PowerfulSkewCircuit(self.nvars if nvars is None else nvars, gates, self.output)


def validate(c):
    """List of problems with ``c``; empty when the circuit is well formed."""
    problems = []
    if c.output not in c.gates:
        problems.append(f"output gate {c.output!r} is undefined")
    for g, rhs in c.gates.items():
        if isinstance(rhs, Input):
            poly = rhs.value
            if not isinstance(poly, SparsePoly):
                problems.append(f"gate {g!r}: input is not a polynomial")
            elif poly.nvars != c.nvars:
                problems.append(f"gate {g!r}: polynomial over {poly.nvars} variables, circuit has {c.nvars}")
            elif SparsePoly(poly.nvars, poly.terms, poly.modulus).terms != poly.terms:
                problems.append(f"gate {g!r}: monomials not canonical")
            continue
        for child in _children(rhs):
            if child not in c.gates:
                problems.append(f"gate {g!r} references undefined gate {child!r}")
        if isinstance(rhs, Mul) and not (c.is_input(rhs.left) or c.is_input(rhs.right)):
            problems.append(f"gate {g!r}: multiplication without an input operand (not skew)")
    if not problems:
        try:
            _topo(c._succ, sorted(c.gates))
        except CircuitError as exc:
            problems.extend(exc.problems)
    return problems


def check(c):
    problems = validate(c)
    if problems:
        raise CircuitError(problems)
    return c


# -- semirings -------------------------------------------------------------------

class _Infinity:
    def __init__(self, sign):
        self.sign = sign

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


INF = _Infinity(1)
NEG_INF = _Infinity(-1)


@dataclass(frozen=True)
class Semiring:
    name: str
    zero: Any
    one: Any
    add: Callable
    mul: Callable


def _min(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def _max(a, b):
    if a is NEG_INF:
        return b
    if b is NEG_INF:
        return a
    return max(a, b)


def _plus_min(a, b):
    return INF if a is INF or b is INF else a + b


def _plus_max(a, b):
    return NEG_INF if a is NEG_INF or b is NEG_INF else a + b


MIN_PLUS = Semiring("min-plus", INF, 0, _min, _plus_min)
MAX_PLUS = Semiring("max-plus", NEG_INF, 0, _max, _plus_max)


def polynomial_semiring(ring):
    from .polyring import DensePoly
    return Semiring(f"{ring}[x]", DensePoly(ring), DensePoly.const(ring, 1),
                    lambda a, b: a + b, lambda a, b: a * b)


def _arr_add(p):
    def add(a, b):
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return out % p
    return add


def residue_semiring(ctx):
    """F_p[x]/(T) on int64 coefficient arrays."""
    return Semiring(f"F_{ctx.p}[x]/(T)", np.zeros(0, dtype=np.int64),
                    np.ones(1, dtype=np.int64), _arr_add(ctx.p), ctx.mul_arr)


def evaluate(c, semiring, leaf):
    """Value of the output gate, with input gates mapped through ``leaf``."""
    val = {}
    for g in c.order():
        rhs = c.gates[g]
        if isinstance(rhs, Input):
            val[g] = leaf(rhs.value)
        elif isinstance(rhs, Add):
            val[g] = semiring.add(val[rhs.left], val[rhs.right])
        else:
            val[g] = semiring.mul(val[rhs.left], val[rhs.right])
    return val[c.output]


def tropical_eval(c, semiring=MAX_PLUS, leaf=lambda v: v):
    """Evaluate a circuit whose inputs are tropical values; Add is min/max, Mul is +."""
    return evaluate(c, semiring, leaf)


def degree_bound(c, i=1):
    """Upper bound on the degree of val(c) in variable ``i`` via max-plus evaluation.

    Exact unless cancellation occurs.  The zero polynomial gets bound 0.
    """
    v = evaluate(c, MAX_PLUS, lambda poly: NEG_INF if poly.is_zero() else poly.degree(i))
    return 0 if v is NEG_INF else v


def kronecker_substitute(c):
    """Map x_i to y^(d^(i-1)) with d = 1 + max_i degree_bound(c, i).

    Returns ``(d, univariate_circuit)``.
    """
    k = c.nvars
    d = 1 + max(degree_bound(c, i) for i in range(1, k + 1))
    if k == 1:
        return d, c
    weights = [d**j for j in range(k)]

    def subst(poly):
        return poly.map_exponents(lambda e: (sum(n * w for n, w in zip(e, weights)),), 1)

    return d, c.map_inputs(subst, nvars=1)


def eval_mod(c, ctx):
    """val(c) mod T for a univariate circuit, as a DensePoly over ctx.field.

    Big powers x^N at the leaves go through modular powering; every
    multiplication is reduced immediately.
    """
    if c.nvars != 1:
        raise ValueError("eval_mod needs a univariate circuit")
    p = ctx.p
    powers = {}

    def leaf(poly):
        acc = np.zeros(0, dtype=np.int64)
        for (n,), a in poly.terms:
            a %= p
            if not a:
                continue
            xn = powers.get(n)
            if xn is None:
                xn = powers[n] = ctx.xpow_arr(n)
            if len(acc) < len(xn):
                acc = np.concatenate([acc, np.zeros(len(xn) - len(acc), dtype=np.int64)])
            acc[: len(xn)] = (acc[: len(xn)] + a * xn) % p
        return acc

    return ctx.to_poly(evaluate(c, residue_semiring(ctx), leaf))


# -- branching programs ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PowerfulBP:
    nvars: int
    nodes: tuple
    edges: tuple  # (u, v, SparsePoly); parallel edges allowed
    source: str
    sink: str

    def out_edges(self):
        out = {v: [] for v in self.nodes}
        for u, v, lab in self.edges:
            out[u].append((v, lab))
        return out

    def order(self):
        """Nodes reachable from the source, successors first."""
        out = self.out_edges()
        return _topo(lambda v: None if v not in out else tuple(w for w, _ in out[v]),
                     [self.source])

    def size(self):
        return sum(lab.size() for _, _, lab in self.edges)


def validate_bp(b):
    problems = []
    nodes = set(b.nodes)
    if len(nodes) != len(b.nodes):
        problems.append("duplicate node ids")
    for v in (b.source, b.sink):
        if v not in nodes:
            problems.append(f"node {v!r} is undefined")
    if b.source == b.sink and len(nodes) != 1:
        problems.append("source equals sink in a program with more than one node")
    for u, v, lab in b.edges:
        if u not in nodes or v not in nodes:
            problems.append(f"edge {u!r}->{v!r} uses an undefined node")
        elif lab.nvars != b.nvars:
            problems.append(f"edge {u!r}->{v!r}: label over {lab.nvars} variables")
    if not problems:
        out = b.out_edges()
        try:
            _topo(lambda v: tuple(w for w, _ in out[v]), sorted(nodes))
        except CircuitError as exc:
            problems.extend(exc.problems)
    return problems


def check_bp(b):
    problems = validate_bp(b)
    if problems:
        raise CircuitError(problems)
    return b


def circuit_to_bp(c):
    """Program whose source-to-sink path sum equals val(c).

    One node per reachable gate plus a sink: input gates get an edge to the
    sink, additions two unit edges, multiplications one edge labelled by the
    input operand.
    """
    order = c.order()
    sink = "sink"
    while sink in c.gates:
        sink = "_" + sink
    one = SparsePoly.constant(1, c.nvars)
    edges = []
    for g in order:
        rhs = c.gates[g]
        if isinstance(rhs, Input):
            edges.append((g, sink, rhs.value))
        elif isinstance(rhs, Add):
            edges.append((g, rhs.left, one))
            edges.append((g, rhs.right, one))
        elif c.is_input(rhs.right):
            edges.append((g, rhs.left, c.gates[rhs.right].value))
        else:
            edges.append((g, rhs.right, c.gates[rhs.left].value))
    return PowerfulBP(c.nvars, tuple(order) + (sink,), tuple(edges), c.output, sink)


def bp_to_circuit(b):
    nv = b.nvars
    one = SparsePoly.constant(1, nv)
    gates = {}
    counter = [0]

    def fresh(rhs):
        name = f"g{counter[0]}"
        counter[0] += 1
        gates[name] = rhs
        return name

    if b.source == b.sink:
        return PowerfulSkewCircuit(nv, {"g0": Input(one)}, "g0")
    out = b.out_edges()
    gate_of = {}
    for v in b.order():
        if v == b.sink:
            gate_of[v] = fresh(Input(one))
            continue
        terms = []
        for w, lab in out[v]:
            if w == b.sink:
                terms.append(fresh(Input(lab)))
            elif lab == one:
                terms.append(gate_of[w])
            else:
                terms.append(fresh(Mul(gate_of[w], fresh(Input(lab)))))
        if not terms:
            gate_of[v] = fresh(Input(SparsePoly(nv)))
            continue
        acc = terms[0]
        for t in terms[1:]:
            acc = fresh(Add(acc, t))
        gate_of[v] = acc
    return PowerfulSkewCircuit(nv, gates, gate_of[b.source])


def bp_eval(b, semiring, label):
    """Path-sum value by dynamic programming over a topological order."""
    out = b.out_edges()
    val = {}
    for v in b.order():
        if v == b.sink:
            val[v] = semiring.one
            continue
        acc = semiring.zero
        for w, lab in out[v]:
            acc = semiring.add(acc, semiring.mul(label(lab), val[w]))
        val[v] = acc
    return val[b.source]


def bp_eval_matrix(b, semiring, label):
    """Path-sum value as entry (source, sink) of sum_{i=0..n} M^i.

    Cross-check evaluator only; matrices are stored sparsely (missing = zero).
    """
    idx = {v: i for i, v in enumerate(b.nodes)}
    n = len(b.nodes)
    m = {}
    for u, v, lab in b.edges:
        row = m.setdefault(idx[u], {})
        j = idx[v]
        lv = label(lab)
        row[j] = semiring.add(row[j], lv) if j in row else lv
    s, t = idx[b.source], idx[b.sink]
    # only row s of each power M^i is needed
    power = {s: {s: semiring.one}}
    total = power[s].get(t, semiring.zero)
    for _ in range(n):
        nxt = {}
        for i, row in power.items():
            acc = {}
            for k, x in row.items():
                for j, y in m.get(k, {}).items():
                    prod = semiring.mul(x, y)
                    acc[j] = semiring.add(acc[j], prod) if j in acc else prod
            if acc:
                nxt[i] = acc
        power = nxt
        if s in power and t in power[s]:
            total = semiring.add(total, power[s][t])
    return total


# -- text formats -------------------------------------------------------------------

_GATE = re.compile(r"(\S+)\s*=\s*(INPUT|ADD|MUL)\s+(.*)$")


def _lines(text):
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield num, line


def parse_circuit(text):
    """Parse the one-gate-per-line circuit format and validate the result."""
    nvars = None
    raw_gates, lineno, output = {}, {}, None
    for num, line in _lines(text):
        head = line.split()[0]
        if head == "VARS":
            try:
                nvars = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError("VARS needs an integer", num) from None
            continue
        if head == "OUTPUT":
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("OUTPUT needs exactly one gate", num)
            output = parts[1]
            continue
        m = _GATE.match(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", num)
        name, op, rest = m.groups()
        if name in raw_gates:
            raise ParseError(f"gate {name!r} defined twice", num)
        if op == "INPUT":
            raw_gates[name] = ("INPUT", parse_terms(rest, num))
        else:
            args = rest.split()
            if len(args) != 2:
                raise ParseError(f"{op} needs two operands", num)
            raw_gates[name] = (op, tuple(args))
        lineno[name] = num
    if output is None:
        raise ParseError("missing OUTPUT line")
    need = max([1] + [terms_nvars(v) for op, v in raw_gates.values() if op == "INPUT"])
    if nvars is None:
        nvars = need
    elif need > nvars:
        raise ParseError(f"a polynomial uses x{need} but VARS is {nvars}")
    gates = {}
    for name, (op, v) in raw_gates.items():
        if op == "INPUT":
            gates[name] = Input(build_poly(v, nvars))
        else:
            for arg in v:
                if arg not in raw_gates:
                    raise ParseError(f"gate {name!r} references undefined gate {arg!r}", lineno[name])
            gates[name] = (Add if op == "ADD" else Mul)(*v)
    if output not in gates:
        raise ParseError(f"OUTPUT gate {output!r} is undefined")
    return check(PowerfulSkewCircuit(nvars, gates, output))


def format_circuit(c):
    lines = []
    if c.nvars > 1:
        lines.append(f"VARS {c.nvars}")
    for g in c.order():
        rhs = c.gates[g]
        if isinstance(rhs, Input):
            lines.append(f"{g} = INPUT {format_poly(rhs.value)}")
        else:
            op = "ADD" if isinstance(rhs, Add) else "MUL"
            lines.append(f"{g} = {op} {rhs.left} {rhs.right}")
    lines.append(f"OUTPUT {c.output}")
    return "\n".join(lines) + "\n"


def parse_bp(text):
    nvars = None
    nodes, raw_edges = [], []
    source = sink = None
    for num, line in _lines(text):
        parts = line.split(None, 3)
        head = parts[0]
        if head == "VARS" and len(parts) == 2:
            if not parts[1].isdigit():
                raise ParseError("VARS needs an integer", num)
            nvars = int(parts[1])
        elif head == "NODE" and len(parts) == 2:
            nodes.append(parts[1])
        elif head == "EDGE" and len(parts) == 4:
            raw_edges.append((parts[1], parts[2], parse_terms(parts[3], num), num))
        elif head == "SOURCE" and len(parts) == 2:
            source = parts[1]
        elif head == "SINK" and len(parts) == 2:
            sink = parts[1]
        else:
            raise ParseError(f"cannot parse {line!r}", num)
    if source is None or sink is None:
        raise ParseError("missing SOURCE or SINK line")
    need = max([1] + [terms_nvars(t) for _, _, t, _ in raw_edges])
    if nvars is None:
        nvars = need
    elif need > nvars:
        raise ParseError(f"a label uses x{need} but VARS is {nvars}")
    known = set(nodes)
    for u, v, _, num in raw_edges:
        for x in (u, v):
            if x not in known:
                raise ParseError(f"undefined node {x!r}", num)
    edges = tuple((u, v, build_poly(t, nvars)) for u, v, t, _ in raw_edges)
    return check_bp(PowerfulBP(nvars, tuple(nodes), edges, source, sink))


def format_bp(b):
    """Text form with nodes renumbered 1..n in topological order."""
    out = b.out_edges()
    order = _topo(lambda v: tuple(w for w, _ in out[v]), list(b.nodes))[::-1]
    num = {v: i + 1 for i, v in enumerate(order)}
    lines = [f"VARS {b.nvars}"] if b.nvars > 1 else []
    lines += [f"NODE {num[v]}" for v in order]
    lines += [f"EDGE {num[u]} {num[v]} {format_poly(lab)}" for u, v, lab in b.edges]
    lines += [f"SOURCE {num[b.source]}", f"SINK {num[b.sink]}"]
    return "\n".join(lines) + "\n"
