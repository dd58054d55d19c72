"""Succinct multivariate polynomials: integer coefficients, exponents of
unbounded size, and the shared text syntax ``3*x1^17 + -1*x2^100``."""

import re
from dataclasses import dataclass

from .errors import ParseError

Exponents = tuple  # tuple[int, ...], one entry per variable


@dataclass(frozen=True)
class SparsePoly:
    """A polynomial stored as a sorted tuple of ``(exponents, coefficient)``.

    ``modulus`` is ``None`` over Z, otherwise coefficients are kept in
    ``[0, modulus)``.  Terms are canonical: no zero coefficients, distinct
    exponent vectors, ascending lexicographic order.
    """

    nvars: int
    terms: tuple = ()
    modulus: int | None = None

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        acc = {}
        for exps, coeff in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError(f"exponent vector {exps} has wrong arity, expected {self.nvars}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            acc[exps] = acc.get(exps, 0) + int(coeff)
        if self.modulus is not None:
            acc = {e: c % self.modulus for e, c in acc.items()}
        terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def constant(cls, c, nvars=1, modulus=None):
        return cls(nvars, (((0,) * nvars, c),), modulus)

    @classmethod
    def monomial(cls, c, exps, modulus=None):
        exps = tuple(exps)
        return cls(len(exps), ((exps, c),), modulus)

    def is_zero(self):
        return not self.terms

    def degree(self, i=1):
        """Degree in variable ``i`` (1-based); -1 for the zero polynomial."""
        return max((e[i - 1] for e, _ in self.terms), default=-1)

    def max_abs_coeff(self):
        return max((abs(c) for _, c in self.terms), default=0)

    def size(self):
        # bit-length version of the succinct size measure
        return sum(abs(c).bit_length() + sum(e.bit_length() for e in exps)
                   for exps, c in self.terms)

    def reduce_mod(self, p):
        return SparsePoly(self.nvars, self.terms, p)

    def lift(self):
        """Same terms, viewed over Z."""
        return SparsePoly(self.nvars, self.terms, None)

    def map_exponents(self, fn, nvars):
        return SparsePoly(nvars, tuple((fn(e), c) for e, c in self.terms), self.modulus)

    def __str__(self):
        return format_poly(self)


def _var_name(i, nvars):
    return "x" if nvars == 1 else f"x{i + 1}"


def format_poly(poly):
    """Canonical text: terms in descending lexicographic exponent order."""
    if poly.is_zero():
        return "0"
    out = []
    for exps, c in reversed(poly.terms):
        parts = [str(c)]
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(_var_name(i, poly.nvars))
            elif e > 1:
                parts.append(f"{_var_name(i, poly.nvars)}^{e}")
        out.append("*".join(parts))
    return " + ".join(out)


_TERM = re.compile(r"([+-]*)([^+-]+)")
_FACTOR_VAR = re.compile(r"x(\d*)(?:\^(\d+))?$")
_INT = re.compile(r"\d+$")


def parse_terms(text, line=None):
    """Parse polynomial text into ``[(coeff, {var_index: exponent})]``.

    Variable indices are 1-based; a bare ``x`` means ``x1``.
    """
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial", line)
    terms = []
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ParseError(f"cannot parse polynomial {text!r}", line)
        pos = m.end()
        sign = -1 if m.group(1).count("-") % 2 else 1
        coeff = sign
        exps = {}
        for factor in m.group(2).split("*"):
            if _INT.match(factor):
                coeff *= int(factor)
                continue
            fm = _FACTOR_VAR.match(factor)
            if not fm:
                raise ParseError(f"bad factor {factor!r} in {text!r}", line)
            idx = int(fm.group(1)) if fm.group(1) else 1
            if idx < 1:
                raise ParseError(f"variable index must be >= 1 in {factor!r}", line)
            exps[idx] = exps.get(idx, 0) + (int(fm.group(2)) if fm.group(2) else 1)
        terms.append((coeff, exps))
    if pos != len(s):
        raise ParseError(f"cannot parse polynomial {text!r}", line)
    return terms


def terms_nvars(terms):
    return max((max(exps, default=0) for _, exps in terms), default=0)


def build_poly(terms, nvars, modulus=None):
    pairs = []
    for coeff, exps in terms:
        vec = [0] * nvars
        for i, e in exps.items():
            vec[i - 1] = e
        pairs.append((tuple(vec), coeff))
    return SparsePoly(nvars, tuple(pairs), modulus)


def parse_poly(text, nvars=None, modulus=None):
    terms = parse_terms(text)
    need = max(1, terms_nvars(terms))
    if nvars is None:
        nvars = need
    elif need > nvars:
        raise ParseError(f"variable x{need} out of range for {nvars} variables")
    return build_poly(terms, nvars, modulus)
