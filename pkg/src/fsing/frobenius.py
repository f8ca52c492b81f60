"""Frobenius bracket powers, Frobenius roots, the stable chain, D^e-closure.

Everything here works through coefficient extraction in the monomial basis
x^u, 0 <= u < q^e: the root of N is spanned by the coefficient vectors of its
generators, so no differential operators are ever materialized.  The
D^e-module generated by N is (N^[1/q^e])^[q^e].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

from .errors import StabilizationError
from .modgb import Submodule, VectorR, contains_all, prune_generators
from .polyring import CharConfig, Monomial, Poly, frobenius_decompose, frobenius_power

DEFAULT_STABLE_CAP = 16


def bracket_power(N: Submodule, e: int, cfg: CharConfig) -> Submodule:
    """N^[q^e]: span of the entrywise q^e-th powers of the generators."""
    if e < 1:
        raise ValueError("e must be positive")
    gens = [
        VectorR(tuple(frobenius_power(p, e, cfg) for p in v.entries))
        for v in N.generators
    ]
    return Submodule(N.rank, gens, N.ring, pair_limit=N.pair_limit)


def frobenius_root(N: Submodule, e: int, cfg: CharConfig) -> Submodule:
    """N^[1/q^e]: the minimal N' with N'^[q^e] containing N.

    Generator-local: decompose every entry of every generator over the basis
    x^u (u < q^e componentwise) and collect, per u, the vector of extracted
    coefficients.  The generator list is pruned to an irredundant one but not
    replaced by a Groebner basis, preserving the degree bound
    deg <= floor(maxdeg(N)/q^e).
    """
    if e < 1:
        raise ValueError("e must be positive")
    gens: List[VectorR] = []
    zero = Poly.zero(N.ring)
    for v in N.generators:
        per_u: Dict[Monomial, List[Poly]] = {}
        for pos, entry in enumerate(v.entries):
            for u, a_u in frobenius_decompose(entry, e, cfg).items():
                if u not in per_u:
                    per_u[u] = [zero] * N.rank
                per_u[u][pos] = a_u
        for u in sorted(per_u):
            gens.append(VectorR(tuple(per_u[u])))
    rooted = Submodule(N.rank, gens, N.ring, pair_limit=N.pair_limit)
    return prune_generators(rooted)


@dataclass(frozen=True)
class StableRootResult:
    """Outcome of iterating N ⊇ N^[1/q] ⊇ ... to its first repeated value.

    `descending` is False when some step failed to be a containment, which
    can happen for inputs outside the coherent-subsheaf hypotheses; the
    repeated value is still returned.
    """

    module: Submodule
    stable_e: int
    descending: bool


def stable_root(N: Submodule, cfg: CharConfig, e_cap: int = DEFAULT_STABLE_CAP) -> StableRootResult:
    """The stable value of the iterated-root chain (the paper-level N^[0])."""
    prev = N
    descending = True
    for e in range(1, e_cap + 1):
        cur = frobenius_root(N, e, cfg)
        if descending and not contains_all(prev, cur.generators):
            descending = False
        if cur == prev:
            return StableRootResult(cur, e - 1, descending)
        prev = cur
    raise StabilizationError(
        f"iterated Frobenius roots did not stabilize within e_cap={e_cap}",
        last_two=(prev, frobenius_root(N, e_cap + 1, cfg)),
    )


def d_closure(N: Submodule, e: int, cfg: CharConfig) -> Submodule:
    """The D^e-module generated by N, computed as (N^[1/q^e])^[q^e]."""
    return bracket_power(frobenius_root(N, e, cfg), e, cfg)
