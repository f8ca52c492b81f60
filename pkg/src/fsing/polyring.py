"""Sparse multivariate polynomial arithmetic over the prime field F_p.

A polynomial is a finite map from exponent tuples to nonzero coefficients in
{1, ..., p-1}.  Exponents are Python ints, i.e. arbitrary precision, because
Frobenius powers multiply exponents by q^e which quickly exceeds machine
words.  Coefficients live in the prime field, so the Frobenius map f -> f^q
acts on exponents only (c^q = c for c in F_p).

Rings are described by a `Ring` value: the characteristic p, the number of
ring variables x0..x{n-1}, and an optional distinguished variable (``t`` or
``tau``) stored as the last exponent slot.

The canonical monomial order, used everywhere for deterministic output, is
graded reverse lexicographic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

from .errors import PolyParseError

Monomial = Tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CharConfig:
    """Characteristic data: a prime p and q = p^gamma."""

    p: int
    gamma: int = 1

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.gamma < 1:
            raise ValueError(f"gamma = {self.gamma} must be positive")

    @property
    def q(self) -> int:
        return self.p ** self.gamma


@dataclass(frozen=True)
class Ring:
    """Ambient ring descriptor: F_p[x0..x{nvars-1}] plus optional t or tau."""

    p: int
    nvars: int
    extra: Optional[str] = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.nvars < 0:
            raise ValueError("nvars must be non-negative")
        if self.extra not in (None, "t", "tau"):
            raise ValueError(f"unsupported distinguished variable {self.extra!r}")

    @property
    def width(self) -> int:
        return self.nvars + (1 if self.extra else 0)

    def var_names(self) -> Tuple[str, ...]:
        names = tuple(f"x{i}" for i in range(self.nvars))
        if self.extra:
            names = names + (self.extra,)
        return names

    def base(self) -> "Ring":
        """The same ring without its distinguished variable."""
        return Ring(self.p, self.nvars)

    def with_extra(self, extra: str) -> "Ring":
        return Ring(self.p, self.nvars, extra)


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(m), tuple(-e for e in reversed(m)))


class Poly:
    """Immutable sparse polynomial over F_p.

    `terms` maps exponent tuples to coefficients in {1, ..., p-1}; the zero
    polynomial has an empty map.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Monomial, int]):
        p = ring.p
        clean: Dict[Monomial, int] = {}
        for mono, c in terms.items():
            if len(mono) != ring.width:
                raise ValueError(
                    f"monomial {mono} has arity {len(mono)}, ring expects {ring.width}"
                )
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            c %= p
            if c:
                clean[tuple(mono)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(ring: Ring) -> "Poly":
        return Poly(ring, {})

    @staticmethod
    def const(ring: Ring, c: int) -> "Poly":
        return Poly(ring, {(0,) * ring.width: c})

    @staticmethod
    def variable(ring: Ring, index: int) -> "Poly":
        """x{index}, or the distinguished variable when index == nvars."""
        if index < 0 or index >= ring.width:
            raise ValueError(f"variable index {index} out of range")
        expo = [0] * ring.width
        expo[index] = 1
        return Poly(ring, {tuple(expo): 1})

    @staticmethod
    def monomial(ring: Ring, mono: Monomial, c: int = 1) -> "Poly":
        return Poly(ring, {tuple(mono): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in m) for m in self.terms)

    def total_degree(self) -> int:
        """Total degree over all slots; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, slot: int) -> int:
        """Degree in one exponent slot; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m[slot] for m in self.terms)

    def sorted_terms(self) -> Iterator[Tuple[Monomial, int]]:
        """Terms in descending graded reverse lexicographic order."""
        return iter(sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.ring, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.ring, {m: cc * c for m, cc in self.terms.items()})

    def term_mul(self, mono: Monomial, c: int = 1) -> "Poly":
        """Multiply by c * x^mono."""
        return Poly(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): cc * c for m, cc in self.terms.items()},
        )

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- distinguished-variable plumbing ------------------------------------

    def split_extra(self) -> Dict[int, "Poly"]:
        """Write f = sum_k c_k(x) * extra^k; returns {k: c_k} over the base ring.

        Requires a distinguished variable.  Only nonzero c_k appear.
        """
        if self.ring.extra is None:
            raise ValueError("polynomial has no distinguished variable")
        base = self.ring.base()
        out: Dict[int, Dict[Monomial, int]] = {}
        for m, c in self.terms.items():
            k = m[-1]
            out.setdefault(k, {})[m[:-1]] = c
        return {k: Poly(base, terms) for k, terms in sorted(out.items())}

    def lift_to(self, ring: Ring, extra_power: int = 0) -> "Poly":
        """Embed a base-ring polynomial into `ring`, times extra^extra_power."""
        if self.ring.extra is not None:
            raise ValueError("polynomial already has a distinguished variable")
        if ring.base() != self.ring:
            raise ValueError("target ring has a different base")
        if ring.extra is None:
            if extra_power:
                raise ValueError("target ring has no distinguished variable")
            return self
        return Poly(ring, {m + (extra_power,): c for m, c in self.terms.items()})

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.var_names()
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.ring.p}; {self})"


# -- parsing -------------------------------------------------------------------

def poly_parse(text: str, ring: Ring) -> Poly:
    """Parse the polynomial grammar into a canonical Poly.

    expression = term ('+' term)* ; term = integer ('*' factor)* | factor
    ('*' factor)* ; factor = variable ('^' natural)?.  Variables are
    x0..x{n-1} plus the ring's distinguished variable, if any.  Whitespace is
    insignificant.  Coefficients are reduced mod p.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial", 0)
    terms: Dict[Monomial, int] = {}
    idx = 0
    while True:
        idx, mono, coeff = _parse_term(tokens, idx, ring)
        terms[mono] = terms.get(mono, 0) + coeff
        if idx >= len(tokens):
            break
        kind, value, pos = tokens[idx]
        if kind != "+":
            raise PolyParseError(f"expected '+' but found {value!r}", pos)
        idx += 1
        if idx >= len(tokens):
            raise PolyParseError("dangling '+'", pos)
    return Poly(ring, terms)


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+*^":
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum()):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        else:
            raise PolyParseError(f"unexpected character {ch!r}", i)
    return tokens


def _var_index(name: str, ring: Ring, pos: int) -> int:
    if ring.extra is not None and name == ring.extra:
        return ring.nvars
    if name in ("t", "tau"):
        raise PolyParseError(f"variable {name!r} is not available in this ring", pos)
    if name.startswith("x") and name[1:].isdigit():
        i = int(name[1:])
        if i < ring.nvars:
            return i
    raise PolyParseError(f"unknown variable {name!r}", pos)


def _parse_term(tokens, idx, ring: Ring):
    kind, value, pos = tokens[idx]
    coeff = 1
    expo = [0] * ring.width
    saw_factor = False
    if kind == "int":
        coeff = int(value)
        idx += 1
    elif kind == "name":
        expo[_var_index(value, ring, pos)] += 1
        idx = _parse_power(tokens, idx + 1, expo, ring, pos)
        saw_factor = True
    else:
        raise PolyParseError(f"expected a term but found {value!r}", pos)
    while idx < len(tokens) and tokens[idx][0] == "*":
        idx += 1
        if idx >= len(tokens) or tokens[idx][0] != "name":
            where = tokens[idx - 1][2]
            raise PolyParseError("expected a variable after '*'", where)
        kind, value, pos = tokens[idx]
        expo[_var_index(value, ring, pos)] += 1
        idx = _parse_power(tokens, idx + 1, expo, ring, pos)
        saw_factor = True
    if not saw_factor and kind != "int":
        raise PolyParseError("empty term", pos)
    return idx, tuple(expo), coeff


def _parse_power(tokens, idx, expo, ring: Ring, var_pos: int):
    if idx < len(tokens) and tokens[idx][0] == "^":
        if idx + 1 >= len(tokens) or tokens[idx + 1][0] != "int":
            raise PolyParseError("expected a natural number after '^'", tokens[idx][2])
        # the '^1' case already added 1; add the remainder
        n = int(tokens[idx + 1][1])
        name = tokens[idx - 1][1]
        expo[_var_index(name, ring, var_pos)] += n - 1
        return idx + 2
    return idx


# -- Frobenius structure ----------------------------------------------------------

def frobenius_power(f: Poly, e: int, cfg: CharConfig) -> Poly:
    """f^{q^e}.  Coefficients are fixed by Frobenius, exponents scale by q^e."""
    if e < 0:
        raise ValueError("e must be non-negative")
    if cfg.p != f.ring.p:
        raise ValueError("characteristic mismatch between polynomial and config")
    if e == 0:
        return f
    s = cfg.q ** e
    return Poly(f.ring, {tuple(v * s for v in m): c for m, c in f.terms.items()})


def frobenius_decompose(f: Poly, e: int, cfg: CharConfig) -> Dict[Monomial, Poly]:
    """Write f = sum_u a_u^{q^e} x^u with all exponents of u below q^e.

    Termwise: each exponent vector v splits as v = q^e * w + u by Euclidean
    division, contributing coeff * x^w to a_u.  Only nonzero a_u are returned.
    """
    if e < 1:
        raise ValueError("e must be positive")
    if f.ring.extra is not None:
        raise ValueError("frobenius_decompose expects a polynomial in the pure ring R")
    if cfg.p != f.ring.p:
        raise ValueError("characteristic mismatch between polynomial and config")
    s = cfg.q ** e
    buckets: Dict[Monomial, Dict[Monomial, int]] = {}
    for m, c in f.terms.items():
        w = tuple(v // s for v in m)
        u = tuple(v % s for v in m)
        buckets.setdefault(u, {})[w] = buckets.setdefault(u, {}).get(w, 0) + c
    out = {}
    for u, terms in buckets.items():
        a = Poly(f.ring, terms)
        if not a.is_zero():
            out[u] = a
    return out


class PowerCache:
    """Memoized powers of one polynomial (binary exponentiation on the cache)."""

    def __init__(self, f: Poly):
        self.f = f
        self._cache: Dict[int, Poly] = {0: Poly.const(f.ring, 1), 1: f}

    def power(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power")
        cached = self._cache.get(n)
        if cached is not None:
            return cached
        half = self.power(n // 2)
        result = half * half
        if n % 2:
            result = result * self.f
        self._cache[n] = result
        return result
