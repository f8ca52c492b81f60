"""Matrix lists, the H^e_n(tau) expansion of A(t)^{e-1}, and list test modules.

A matrix list {A_{k,n}} packages a square matrix A(t) = sum A_{k,n} t^{kq+n}
over R[t].  Iterated twisted products A^{e-1} = A^[q^{e-1}] ... A^[q] A split
along t-exponents v = q^e k + n into matrices H^e_n(tau) over R[tau]; the
list test modules and their jump sets S_e are read off from Frobenius roots
of the column spans of the H^{e+1}_n, and the jump sets at successive e feed
a periodic-digit fit that recovers exact rational jumping numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InternalConsistencyError, ProblemFormatError
from .frobenius import frobenius_root
from .modgb import Submodule, VectorR, contains_all, module_sum
from .polyring import CharConfig, Poly, Ring, frobenius_power, poly_parse
from .rationals import GridRational, detect_chain_limit, frac_ceil
from .testideal import SeReport

Matrix = Tuple[Tuple[Poly, ...], ...]


def _mat_check(mat: Sequence[Sequence[Poly]], l: int, ring: Ring) -> Matrix:
    if len(mat) != l or any(len(row) != l for row in mat):
        raise ValueError(f"matrix is not {l}x{l}")
    for row in mat:
        for entry in row:
            if entry.ring != ring:
                raise ValueError("matrix entries live in the wrong ring")
    return tuple(tuple(row) for row in mat)


def _mat_zero(l: int, ring: Ring) -> Matrix:
    z = Poly.zero(ring)
    return tuple((z,) * l for _ in range(l))


def _mat_is_zero(mat: Matrix) -> bool:
    return all(entry.is_zero() for row in mat for entry in row)


def _mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    l = len(a)
    out = []
    for i in range(l):
        row = []
        for j in range(l):
            acc = Poly.zero(a[0][0].ring)
            for k in range(l):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_frob(a: Matrix, e: int, cfg: CharConfig) -> Matrix:
    return tuple(tuple(frobenius_power(x, e, cfg) for x in row) for row in a)


@dataclass(frozen=True)
class MatrixList:
    """Finitely many l x l matrices A_{k,n} over R, with k >= 0, 0 <= n < q."""

    l: int
    cfg: CharConfig
    base_ring: Ring
    entries: Dict[Tuple[int, int], Matrix]

    def __post_init__(self):
        if self.base_ring.extra is not None:
            raise ValueError("matrix list entries must live in the pure ring R")
        cleaned = {}
        for (k, n), mat in self.entries.items():
            if k < 0 or not (0 <= n < self.cfg.q):
                raise ValueError(f"index ({k}, {n}) out of range for q={self.cfg.q}")
            mat = _mat_check(mat, self.l, self.base_ring)
            if not _mat_is_zero(mat):
                cleaned[(k, n)] = mat
        object.__setattr__(self, "entries", cleaned)

    def matrix(self, k: int, n: int) -> Matrix:
        return self.entries.get((k, n), _mat_zero(self.l, self.base_ring))

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True)
class TMatrix:
    """A square matrix over R[t]."""

    mat: Matrix
    cfg: CharConfig

    def __post_init__(self):
        l = len(self.mat)
        ring = self.mat[0][0].ring
        if ring.extra != "t":
            raise ValueError("TMatrix entries must live in R[t]")
        object.__setattr__(self, "mat", _mat_check(self.mat, l, ring))

    @property
    def l(self) -> int:
        return len(self.mat)

    @property
    def ring(self) -> Ring:
        return self.mat[0][0].ring

    @property
    def tdeg(self) -> int:
        slot = self.ring.width - 1
        degs = [e.degree_in(slot) for row in self.mat for e in row if not e.is_zero()]
        return max(degs, default=0)

    def is_zero(self) -> bool:
        return _mat_is_zero(self.mat)


@dataclass(frozen=True)
class HFamily:
    """The matrices H^e_n(tau) with A^{e-1} = sum_n H^e_n(t^{q^e}) t^n.

    Only the nonzero n are stored.  tau_bound is floor(d/(q-1)) where d is
    the t-degree of A(t); every entry respects deg_tau <= tau_bound.
    """

    e: int
    l: int
    d: int
    tau_bound: int
    cfg: CharConfig
    table: Dict[int, Matrix] = field(default_factory=dict)

    def matrix(self, n: int) -> Optional[Matrix]:
        return self.table.get(n)


def assemble_A(mlist: MatrixList) -> TMatrix:
    """A(t) = sum over (k, n) of A_{k,n} t^{kq+n}."""
    t_ring = mlist.base_ring.with_extra("t")
    q = mlist.cfg.q
    acc = _mat_zero(mlist.l, t_ring)
    for (k, n), mat in sorted(mlist.entries.items()):
        lifted = tuple(
            tuple(x.lift_to(t_ring, k * q + n) for x in row) for row in mat
        )
        acc = _mat_add(acc, lifted)
    return TMatrix(acc, mlist.cfg)


def decompose_A(A: TMatrix, cfg: CharConfig) -> MatrixList:
    """Split each t-exponent v as v = kq + n with 0 <= n < q."""
    q = cfg.q
    l = A.l
    base = A.ring.base()
    pieces: Dict[Tuple[int, int], List[List[Poly]]] = {}
    for i in range(l):
        for j in range(l):
            for v, coeff in A.mat[i][j].split_extra().items():
                k, n = divmod(v, q)
                mat = pieces.get((k, n))
                if mat is None:
                    z = Poly.zero(base)
                    mat = [[z] * l for _ in range(l)]
                    pieces[(k, n)] = mat
                mat[i][j] = mat[i][j] + coeff
    entries = {kn: tuple(tuple(row) for row in mat) for kn, mat in pieces.items()}
    return MatrixList(l, cfg, base, entries)


def _twisted_power(A: TMatrix, e: int, cfg: CharConfig) -> Matrix:
    """A^{e-1} = A^[q^{e-1}] ... A^[q] A, with e matrix factors."""
    prod = A.mat
    for i in range(1, e):
        prod = _mat_mul(_mat_frob(A.mat, i, cfg), prod)
    return prod


def h_expand(A: TMatrix, e: int, cfg: CharConfig) -> HFamily:
    """Split A^{e-1} along t-exponents v = q^e k + n into the H^e_n(tau)."""
    if e < 1:
        raise ValueError("e must be positive")
    q_e = cfg.q**e
    l = A.l
    d = A.tdeg
    bound = d // (cfg.q - 1) if cfg.q > 1 else 0
    tau_ring = A.ring.base().with_extra("tau")
    prod = _twisted_power(A, e, cfg)

    table: Dict[int, List[List[Poly]]] = {}
    for i in range(l):
        for j in range(l):
            for v, coeff in prod[i][j].split_extra().items():
                k, n = divmod(v, q_e)
                mat = table.get(n)
                if mat is None:
                    z = Poly.zero(tau_ring)
                    mat = [[z] * l for _ in range(l)]
                    table[n] = mat
                mat[i][j] = mat[i][j] + coeff.lift_to(tau_ring, k)

    frozen = {n: tuple(tuple(row) for row in mat) for n, mat in table.items()}
    fam = HFamily(e, l, d, bound, cfg, frozen)
    _validate_family(fam, A, prod)
    return fam


def _validate_family(fam: HFamily, A: TMatrix, prod: Matrix) -> None:
    for n, mat in fam.table.items():
        for row in mat:
            for entry in row:
                if entry.is_zero():
                    continue
                tau_slot = entry.ring.width - 1
                if entry.degree_in(tau_slot) > fam.tau_bound:
                    raise InternalConsistencyError(
                        f"H^{fam.e}_{n} exceeds the tau-degree bound {fam.tau_bound}"
                    )
    q_e = fam.cfg.q**fam.e
    t_ring = A.ring
    rebuilt = _mat_zero(fam.l, t_ring)
    for n, mat in fam.table.items():
        lifted = []
        for row in mat:
            out_row = []
            for entry in row:
                acc = Poly.zero(t_ring)
                for k, coeff in entry.split_extra().items():
                    acc = acc + coeff.lift_to(t_ring, k * q_e + n)
                out_row.append(acc)
            lifted.append(tuple(out_row))
        rebuilt = _mat_add(rebuilt, tuple(lifted))
    if rebuilt != prod:
        raise InternalConsistencyError(
            f"reassembly of H^{fam.e} does not reproduce A^{fam.e - 1}"
        )


def _column_vectors(
    mat: Matrix, l: int, ambient_rank: int, ring: Ring
) -> List[VectorR]:
    """Flatten columns of a matrix over R[tau] into R^{l(N+1)}.

    Coordinate index is taupower * l + slot, so the tau-power is major.
    """
    zero = Poly.zero(ring)
    out = []
    for j in range(l):
        coords = [zero] * ambient_rank
        for i in range(l):
            for k, coeff in mat[i][j].split_extra().items():
                coords[k * l + i] = coords[k * l + i] + coeff
        v = VectorR(coords)
        if not v.is_zero():
            out.append(v)
    return out


def ltm_scan(mlist: MatrixList, e: int, cfg: CharConfig) -> List[Submodule]:
    """Cumulative list test modules at the grid points m/q^{e+1}, m = 1..q^{e+1}.

    Index m-1 of the returned list is tau({A_{k,n}}, m/q^{e+1}, e).
    """
    if e < 0:
        raise ValueError("e must be non-negative")
    grid = cfg.q ** (e + 1)
    A = assemble_A(mlist)
    N = A.tdeg // (cfg.q - 1) if cfg.q > 1 else 0
    rank = mlist.l * (N + 1)
    ring = mlist.base_ring
    if A.is_zero():
        return [Submodule.zero(rank, ring)] * grid
    fam = h_expand(A, e + 1, cfg)
    out: List[Submodule] = []
    cum = Submodule.zero(rank, ring)
    for m in range(1, grid + 1):
        mat = fam.matrix(m - 1)
        if mat is not None:
            cols = _column_vectors(mat, mlist.l, rank, ring)
            if cols:
                piece = frobenius_root(
                    Submodule(rank, tuple(cols), ring), e + 1, cfg
                )
                if not contains_all(cum, piece.generators):
                    cum = module_sum(cum, piece)
        out.append(cum)
    return out


def list_test_module(
    mlist: MatrixList, lam: GridRational, e: int, cfg: CharConfig
) -> Submodule:
    """tau({A_{k,n}}, lambda, e) inside R^{l(N+1)}, N = floor(d/(q-1))."""
    m = frac_ceil(lam.value * cfg.q ** (e + 1))
    if not (0 < m <= cfg.q ** (e + 1)):
        raise ValueError("lambda must lie in (0, 1]")
    return ltm_scan(mlist, e, cfg)[m - 1]


def s_set(
    mlist: MatrixList, e: int, cfg: CharConfig, keep_chain: bool = False
) -> SeReport:
    """Grid points in (0,1) where the list test module strictly grows next."""
    scan = ltm_scan(mlist, e, cfg)
    grid = cfg.q ** (e + 1)
    jumps = []
    for m in range(1, grid):
        if scan[m] != scan[m - 1]:
            jumps.append(GridRational(m, e, cfg))
    chain = None
    if keep_chain:
        chain = tuple(
            (Fraction(m, grid), scan[m - 1]) for m in range(1, grid + 1)
        )
    return SeReport(e, tuple(jumps), chain)


@dataclass(frozen=True)
class ChainEstimate:
    """One matched chain of jump-set elements across levels e."""

    start_e: int
    numerators: Tuple[int, ...]
    witnesses: Tuple[Fraction, ...]
    reached_emax: bool
    limit: Optional[Fraction] = None
    preperiod: Optional[int] = None
    period: Optional[int] = None

    @property
    def resolved(self) -> bool:
        return self.limit is not None and self.reached_emax


@dataclass(frozen=True)
class JumpReport:
    s_sets: Dict[int, SeReport]
    chains: Tuple[ChainEstimate, ...]
    estimates: Tuple[Fraction, ...]

    @property
    def unresolved(self) -> Tuple[ChainEstimate, ...]:
        return tuple(c for c in self.chains if not c.resolved)


def _build_chains(
    s_sets: Dict[int, SeReport], e_max: int, cfg: CharConfig
) -> List[List[Tuple[int, int]]]:
    """Match each S_{e} element to the nearest S_{e-1} element, ties upward.

    Returns root-to-leaf paths of (e, numerator) pairs.
    """
    parents: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}
    for e in range(e_max + 1):
        cur = s_sets[e].jumps
        prev = s_sets[e - 1].jumps if e > 0 else ()
        for g in cur:
            node = (e, g.m)
            if not prev:
                parents[node] = None
                continue
            best = min(
                prev,
                key=lambda h: (abs(h.value - g.value), -h.value),
            )
            parents[node] = (e - 1, best.m)
    children: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for node, par in parents.items():
        if par is not None:
            children.setdefault(par, []).append(node)
    paths = []
    for node in parents:
        if node not in children:  # leaf
            path = [node]
            while parents[path[-1]] is not None:
                path.append(parents[path[-1]])
            path.reverse()
            paths.append(path)
    paths.sort(key=lambda p: (p[0][0], p[0][1]))
    return paths


def estimate_jumping_numbers(
    mlist: MatrixList, cfg: CharConfig, e_max: int
) -> JumpReport:
    """Chains of jump-set elements snapped to exact limits c/(q^a (q^b - 1)).

    Each chain's numerators satisfy m_{e+b} = q^b m_e + c once periodic; the
    fit window (preperiod and period) is max(1, e_max // 2).  Chains with no
    fit, or that die out before e_max, are reported unresolved.
    """
    if e_max < 2:
        raise ValueError("e_max must be at least 2")
    s_sets = {e: s_set(mlist, e, cfg) for e in range(e_max + 1)}
    window = max(1, e_max // 2)
    chains = []
    for path in _build_chains(s_sets, e_max, cfg):
        start_e = path[0][0]
        nums = tuple(m for _, m in path)
        witnesses = tuple(
            Fraction(m, cfg.q ** (e + 1)) for e, m in path
        )
        reached = path[-1][0] == e_max
        fit = detect_chain_limit(nums, start_e, cfg, window, window)
        if fit is None:
            chains.append(ChainEstimate(start_e, nums, witnesses, reached))
        else:
            chains.append(
                ChainEstimate(
                    start_e, nums, witnesses, reached,
                    fit.limit, fit.preperiod, fit.period,
                )
            )
    estimates = tuple(
        sorted({c.limit for c in chains if c.resolved})
    )
    return JumpReport(s_sets, tuple(chains), estimates)


# -- problem files ------------------------------------------------------------


def _require(obj: dict, key: str, kind) -> object:
    if key not in obj:
        raise ProblemFormatError(f"missing field '{key}'")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ProblemFormatError(f"field '{key}' must be of type {kind.__name__}")
    return val


def _parse_matrix(rows, l: int, ring: Ring, where: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != l:
        raise ProblemFormatError(f"{where}: expected {l} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != l:
            raise ProblemFormatError(f"{where}: row {i} must have {l} entries")
        parsed = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise ProblemFormatError(
                    f"{where}: entry ({i},{j}) must be a polynomial string"
                )
            parsed.append(poly_parse(cell, ring))
        out.append(tuple(parsed))
    return tuple(out)


def load_problem(obj: dict):
    """Parse a problem dict into (TMatrix | MatrixList, CharConfig)."""
    if not isinstance(obj, dict):
        raise ProblemFormatError("problem must be a JSON object")
    p = _require(obj, "p", int)
    gamma = _require(obj, "gamma", int)
    num_vars = _require(obj, "num_vars", int)
    rank = _require(obj, "rank", int)
    if rank < 1:
        raise ProblemFormatError("field 'rank' must be positive")
    if num_vars < 0:
        raise ProblemFormatError("field 'num_vars' must be non-negative")
    try:
        cfg = CharConfig(p, gamma)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from None
    has_matrix = "matrix" in obj
    has_list = "list" in obj
    if has_matrix == has_list:
        raise ProblemFormatError("exactly one of 'matrix' or 'list' is required")
    base = Ring(p, num_vars)
    if has_matrix:
        t_ring = base.with_extra("t")
        try:
            mat = _parse_matrix(obj["matrix"], rank, t_ring, "matrix")
        except ProblemFormatError:
            raise
        return TMatrix(mat, cfg), cfg
    entries = {}
    if not isinstance(obj["list"], list):
        raise ProblemFormatError("field 'list' must be an array")
    for idx, item in enumerate(obj["list"]):
        if not isinstance(item, dict):
            raise ProblemFormatError(f"list[{idx}] must be an object")
        k = _require(item, "k", int)
        n = _require(item, "n", int)
        if k < 0 or not (0 <= n < cfg.q):
            raise ProblemFormatError(
                f"list[{idx}]: index (k={k}, n={n}) out of range for q={cfg.q}"
            )
        if "matrix" not in item:
            raise ProblemFormatError(f"list[{idx}]: missing field 'matrix'")
        mat = _parse_matrix(item["matrix"], rank, base, f"list[{idx}].matrix")
        if (k, n) in entries:
            raise ProblemFormatError(f"list[{idx}]: duplicate index ({k}, {n})")
        entries[(k, n)] = mat
    return MatrixList(rank, cfg, base, entries), cfg


def load_problem_file(path: str):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read problem file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"problem file is not valid JSON: {exc}") from None
    return load_problem(obj)
