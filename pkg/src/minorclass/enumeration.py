"""Exact weighted counting over all labelled graphs of a given order.

The brute-force sweep iterates every edge-set integer, aggregates integer
counts by (edges, components, ...) in a kernel, and only then applies the
weighting, so rational parameters give exact rational totals.  Membership for
excluded-minor families is resolved with an upward dynamic program over the
subset lattice (a graph is out as soon as one edge-deletion is out) plus a
canonically-memoized minor test on the survivors; a Betti-number filter
(e - n + components) certifies cheap members without any search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import _kernels
from .canon import CanonicalCode, automorphism_count, canonicalize
from .errors import ResourceCapError
from .graphs import (
    Graph,
    Weighting,
    big_frag_split,
    component_masks,
    induced_subgraph,
    is_forest,
    pair_count,
    weight,
)

if TYPE_CHECKING:  # pragma: no cover
    from .families import GraphFamily

BRUTE_FORCE_CAP = 7
HARD_CAP = 8

_STATS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def subset_stats_cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(component count, min-degree>=2 flag) arrays over all masks, cached for n <= 7."""
    if n in _STATS_CACHE:
        return _STATS_CACHE[n]
    stats = _kernels.subset_stats(n)
    if n <= BRUTE_FORCE_CAP:
        _STATS_CACHE[n] = stats
    return stats


def _betti_floor(minors: Sequence[Graph]) -> int | None:
    """Smallest cycle rank among the excluded minors (None when unknown)."""
    if not minors:
        return None
    return min(m.edge_count - m.n + len(component_masks(m)) for m in minors)


def member_mask_array(fam: "GraphFamily", n: int) -> np.ndarray | None:
    """uint8 membership (base family, ignoring connected-only views) for every
    edge mask on n vertices; None means every graph is a member."""
    if fam.predicate is not None and fam.name == "all":
        return None
    cached = fam._member_arrays.get(n)
    if cached is not None:
        return cached
    m = pair_count(n)
    total = 1 << m
    if fam.predicate is is_forest:
        kappa, _ = subset_stats_cached(n)
        e = np.bitwise_count(np.arange(total, dtype=np.int64)).astype(np.int64)
        arr = (e == n - kappa.astype(np.int64)).astype(np.uint8)
    else:
        arr = _minor_closed_member_array(fam, n)
    fam._member_arrays[n] = arr
    return arr


def _minor_closed_member_array(fam: "GraphFamily", n: int) -> np.ndarray:
    if n > BRUTE_FORCE_CAP:
        raise ResourceCapError(
            f"membership arrays for minor-tested families stop at n={BRUTE_FORCE_CAP}; "
            "only predicate families support the n=8 override"
        )
    kappa, _ = subset_stats_cached(n)
    masks = np.arange(1 << pair_count(n), dtype=np.int64)
    e = np.bitwise_count(masks).astype(np.int64)
    member = np.zeros(len(masks), dtype=np.uint8)
    betti = e - n + kappa.astype(np.int64)
    floor = _betti_floor(fam.excluded_minors)
    m = pair_count(n)
    for lvl in range(0, m + 1):
        idx = np.nonzero(e == lvl)[0].astype(np.int64)
        if len(idx) == 0:
            continue
        ok = np.ones(len(idx), dtype=bool)
        for b in range(m):
            sel = ((idx >> b) & 1).astype(bool)
            if sel.any():
                ok[sel] &= member[idx[sel] ^ (1 << b)] != 0
        cands = idx[ok]
        if floor is not None:
            auto = betti[cands] < floor
            member[cands[auto]] = 1
            cands = cands[~auto]
        for s in cands.tolist():
            member[s] = 1 if fam.base_member(Graph(n, int(s))) else 0
    return member


def member_masks(fam: "GraphFamily", n: int, connected: bool | None = None) -> list[int]:
    """Member edge masks at order n, ascending; optionally only connected ones."""
    arr = member_mask_array(fam, n)
    if connected is None and fam.connected_only:
        connected = True
    if connected:
        kappa, _ = subset_stats_cached(n)
        sel = kappa == 1
        if arr is not None:
            sel = sel & (arr != 0)
        return np.nonzero(sel)[0].tolist()
    if arr is None:
        return list(range(1 << pair_count(n)))
    return np.nonzero(arr)[0].tolist()


# -- weighted totals ---------------------------------------------------------


def _simplify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _as_exact(x):
    if isinstance(x, int):
        return Fraction(x)
    return x


class TauTriple(tuple):
    """(a, c, b) totals: all members / connected / connected with min degree >= 2."""

    __slots__ = ()

    def __new__(cls, a, c, b):
        return super().__new__(cls, (a, c, b))

    @property
    def a(self):
        return self[0]

    @property
    def c(self):
        return self[1]

    @property
    def b(self):
        return self[2]


def brute_force_tau(fam: "GraphFamily", w: Weighting, n: int, cap: int = BRUTE_FORCE_CAP,
                    threads: int = 1) -> TauTriple:
    """Exact (tau(A_n), tau(C_n), tau(B_n)) by exhaustive enumeration.

    Default cap is 7 (2^21 graphs); pass cap=8 explicitly to allow n=8.
    For a connected-members view the a-column equals the c-column.
    """
    if n > cap:
        raise ResourceCapError(f"brute force at n={n} needs an explicit cap >= {n}")
    if n > HARD_CAP:
        raise ResourceCapError(f"brute force is limited to n <= {HARD_CAP}")
    want_bridges = not w.is_diagonal
    if fam.name == "all":
        member, mode = None, _kernels.MODE_ALL
    elif fam.predicate is is_forest and n > BRUTE_FORCE_CAP:
        member, mode = None, _kernels.MODE_FORESTS
    else:
        member, mode = member_mask_array(fam, n), _kernels.MODE_MEMBER_ARRAY
    counts = _kernels.sweep_counts(n, member, mode, want_bridges=want_bridges, threads=threads)
    exact = w.is_rational
    lam0 = _as_exact(w.lambda0) if exact else w.lambda0
    lam1 = _as_exact(w.lambda1) if exact else w.lambda1
    nu = _as_exact(w.nu) if exact else w.nu
    m = pair_count(n)
    if w.is_diagonal:
        a = sum(
            int(counts.ek[e, k]) * lam0 ** e * nu ** k
            for e in range(m + 1) for k in range(n + 2) if counts.ek[e, k]
        )
        c = sum(int(counts.ce[e]) * lam0 ** e * nu for e in range(m + 1) if counts.ce[e])
        b = sum(int(counts.be[e]) * lam0 ** e * nu for e in range(m + 1) if counts.be[e])
    else:
        a = sum(
            int(counts.ext_a[e, e0, k]) * lam0 ** e0 * lam1 ** (e - e0) * nu ** k
            for e in range(m + 1) for e0 in range(m + 1) for k in range(n + 2)
            if counts.ext_a[e, e0, k]
        )
        c = sum(
            int(counts.ext_c[e, e0]) * lam0 ** e0 * lam1 ** (e - e0) * nu
            for e in range(m + 1) for e0 in range(m + 1) if counts.ext_c[e, e0]
        )
        b = sum(
            int(counts.ext_b[e, e0]) * lam0 ** e0 * lam1 ** (e - e0) * nu
            for e in range(m + 1) for e0 in range(m + 1) if counts.ext_b[e, e0]
        )
    a, c, b = _simplify(a or 0), _simplify(c or 0), _simplify(b or 0)
    if fam.connected_only:
        a = c
    return TauTriple(a, c, b)


# -- exponential formula -------------------------------------------------------


def egf_lift(c: Sequence, n_max: int | None = None) -> list:
    """Lift a connected weight sequence to the all-graph sequence via A' = C'A.

    Uses the coefficient recurrence n*a_n = sum_k k*binom(n,k)*c_k*a_{n-k};
    exact (integer or Fraction arithmetic).  c[0] must be 0.
    """
    if n_max is None:
        n_max = len(c) - 1
    if len(c) < n_max + 1:
        raise ValueError("connected sequence shorter than requested range")
    if c[0] != 0:
        raise ValueError("c_0 must be 0")
    ints = all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in c)
    a: list = [1]
    if ints:
        cc = [int(x) for x in c]
        for n in range(1, n_max + 1):
            s = sum(k * math.comb(n, k) * cc[k] * a[n - k] for k in range(1, n + 1))
            q, r = divmod(s, n)
            if r:
                raise ArithmeticError("integer lift produced a non-integer term")
            a.append(q)
    else:
        cf = [_as_exact(x) if isinstance(x, (int, Fraction)) else x for x in c]
        for n in range(1, n_max + 1):
            s = sum(k * math.comb(n, k) * cf[k] * a[n - k] for k in range(1, n + 1))
            a.append(_simplify(s / n if not isinstance(s, Fraction) else Fraction(s, n)))
    return a


def cayley_tree_weights(w: Weighting, n_max: int) -> list:
    """tau of the labelled trees per order: n^(n-2) * lam^(n-1) * nu (0 for n=0).

    Tree edges are all bridges, so lam here is the bridge parameter lambda0.
    """
    lam = _as_exact(w.lambda0) if w.is_rational else w.lambda0
    nu = _as_exact(w.nu) if w.is_rational else w.nu
    out = [0]
    for n in range(1, n_max + 1):
        out.append(_simplify(n ** max(n - 2, 0) * lam ** (n - 1) * nu))
    return out


# -- tables --------------------------------------------------------------------


@dataclass
class WeightTable:
    """Exact weighted counts tau(A_n), tau(C_n), tau(B_n) for n = 0..N."""

    family: str
    weighting: Weighting
    a: list
    c: list
    b: list
    methods: list = field(default_factory=list)

    @property
    def n_max(self) -> int:
        return len(self.a) - 1

    def ratios(self, column: str = "a") -> list:
        return ratio_sequence(getattr(self, column))

    def growth_estimates(self, column: str = "a") -> list:
        vals = getattr(self, column)
        out = [None]
        for n in range(1, len(vals)):
            v = vals[n]
            out.append(None if v == 0 else float(_as_float_log_scaled(v, n)))
        return out


def _as_float_log_scaled(v, n: int) -> float:
    """(v / n!)^(1/n) computed in log space so huge exact integers stay finite."""
    if isinstance(v, Fraction):
        lg = math.log(v.numerator) - math.log(v.denominator)
    else:
        lg = math.log(v)
    return math.exp((lg - math.lgamma(n + 1)) / n)


def ratio_sequence(values: Sequence) -> list:
    """r_n = n * v_{n-1} / v_n (None where undefined or the count vanishes)."""
    out: list = [None]
    for n in range(1, len(values)):
        if values[n] == 0:
            out.append(None)
        else:
            prev = values[n - 1]
            num = n * _as_exact(prev) if isinstance(prev, (int, Fraction)) else n * prev
            den = values[n]
            if isinstance(num, Fraction) and isinstance(den, (int, Fraction)):
                out.append(_simplify(num / den))
            else:
                out.append(num / den)
    return out


def compute_weight_table(fam: "GraphFamily", w: Weighting, n_max: int,
                         cap: int = BRUTE_FORCE_CAP, threads: int = 1,
                         verbose: bool = False) -> WeightTable:
    """Brute-force table up to n_max (all entries enumerated exactly).

    verbose prints one progress line per slice to standard error only.
    """
    import sys

    a, c, b, methods = [], [], [], []
    for n in range(n_max + 1):
        if verbose and n >= 6:
            print(f"enumerating n={n} ({1 << pair_count(n)} edge masks)...",
                  file=sys.stderr)
        t = brute_force_tau(fam, w, n, cap=cap, threads=threads)
        a.append(t.a)
        c.append(t.c)
        b.append(t.b)
        methods.append("brute-force")
    return WeightTable(fam.name, w, a, c, b, methods)


def forest_table(w: Weighting, n_max: int) -> WeightTable:
    """Forest table from the closed-form tree weights lifted by the exponential formula."""
    c = cayley_tree_weights(w, n_max)
    a = egf_lift(c, n_max)
    b = [0] * (n_max + 1)
    methods = ["closed-form+egf-lift"] * (n_max + 1)
    return WeightTable("forests", w, a, c, b, methods)


# -- core-size decomposition -----------------------------------------------------


def _require_trimmable(fam: "GraphFamily"):
    if fam.flags.trimmable is True:
        return
    if fam.excluded_minors and all(m.min_degree() >= 2 for m in fam.excluded_minors):
        return
    raise ValueError(f"family {fam.name!r} is not trimmable (declared or by excluded minors)")


def f_nk(fam: "GraphFamily", w: Weighting, n: int, k: int, b_of_k):
    """Weighted count of connected members with a 2-core of exactly k vertices.

    Closed form: binom(n,k) * tau(B_k) * lam * k * (lam*n)^(n-1-k); for k = n
    this is tau(B_n) itself.  b_of_k must be the exact tau(B_k) value.
    """
    if not (3 <= k <= n):
        raise ValueError("need 3 <= k <= n")
    _require_trimmable(fam)
    lam = _as_exact(w.lambda0) if w.is_rational else w.lambda0
    if k == n:
        return _simplify(_as_exact(b_of_k) if isinstance(b_of_k, int) else b_of_k)
    val = math.comb(n, k) * _as_exact(b_of_k) * lam * k * (lam * n) ** (n - 1 - k)
    return _simplify(val)


def f_nk_bruteforce(fam: "GraphFamily", w: Weighting, n: int, k: int,
                    cap: int = BRUTE_FORCE_CAP, threads: int = 1):
    """Cross-check: sum the weights of connected members with v(core) = k directly."""
    if not w.is_diagonal:
        raise ValueError("the brute-force core sweep supports the diagonal weighting")
    if n > cap or n > HARD_CAP:
        raise ResourceCapError(f"core sweep capped at n <= {min(cap, HARD_CAP)}")
    if fam.name == "all":
        member, mode = None, _kernels.MODE_ALL
    else:
        member, mode = member_mask_array(fam, n), _kernels.MODE_MEMBER_ARRAY
    counts = _kernels.sweep_counts(n, member, mode, want_core=True, threads=threads)
    lam = _as_exact(w.lam) if w.is_rational else w.lam
    nu = _as_exact(w.nu) if w.is_rational else w.nu
    total = sum(
        int(counts.core[e, k]) * lam ** e * nu
        for e in range(pair_count(n) + 1) if counts.core[e, k]
    )
    return _simplify(total or 0)


def core_decomposition_identity(fam: "GraphFamily", w: Weighting, n: int,
                                cap: int = BRUTE_FORCE_CAP):
    """Reconstruct tau(C_n) as sum_k f(n,k) plus the tree term; returns both sides."""
    _require_trimmable(fam)
    b_vals = {k: brute_force_tau(fam, w, k, cap=cap).b for k in range(3, n + 1)}
    total = 0
    for k in range(3, n + 1):
        if b_vals[k] != 0:
            total = total + f_nk(fam, w, n, k, b_vals[k])
    one_vertex = 1 if fam.base_member(Graph(1, 0)) else 0
    lam = _as_exact(w.lambda0) if w.is_rational else w.lambda0
    nu = _as_exact(w.nu) if w.is_rational else w.nu
    tree_term = one_vertex * n ** max(n - 2, 0) * lam ** (n - 1) * nu
    lhs = _simplify(total + tree_term)
    rhs = brute_force_tau(fam, w, n, cap=cap).c
    return lhs, rhs


# -- growth diagnostics -----------------------------------------------------------


@dataclass(frozen=True)
class GrowthReport:
    eta: float
    violations: tuple
    eta_max: tuple

    @property
    def holds(self) -> bool:
        return not self.violations


def falling_factorial(n: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= n - i
    return out


def factorial_growth_check(table: WeightTable, eta) -> GrowthReport:
    """Check tau(A_n) >= tau(A_{n-j}) * (n)_j * eta^j for every n <= N, j < n.

    g(n) is taken as 1, so this is a diagnostic of the feasible eta at each n,
    not a proof of the asymptotic property.
    """
    a = table.a
    violations = []
    eta_max = [None, None]
    for n in range(2, len(a)):
        best = math.inf
        for j in range(1, n):
            if a[n - j] == 0:
                continue
            bound = a[n] / (_as_exact(a[n - j]) * falling_factorial(n, j))
            feasible = float(bound) ** (1.0 / j)
            best = min(best, feasible)
            lhs = _as_exact(a[n])
            rhs = _as_exact(a[n - j]) * falling_factorial(n, j) * (_as_exact(eta) if isinstance(eta, (int, Fraction)) else eta) ** j
            if lhs < rhs:
                violations.append((n, j))
        eta_max.append(best if best is not math.inf else None)
    return GrowthReport(float(eta), tuple(violations), tuple(eta_max))


# -- unlabelled census --------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    code: CanonicalCode
    v: int
    e: int
    kappa: int
    aut: int
    rep: Graph
    labelled: int  # labelled graphs in the class, equals v!/aut


@dataclass
class UnlabelledCensus:
    family: str
    n_max: int
    entries: list

    def by_code(self) -> dict:
        return {en.code.hex: en for en in self.entries}

    def of_order(self, v: int) -> list:
        return [en for en in self.entries if en.v == v]


def build_census(fam: "GraphFamily", n_max: int, cap: int = BRUTE_FORCE_CAP) -> UnlabelledCensus:
    """Inventory of the connected members up to n_max, grouped by canonical code.

    Each entry keeps the least-mask representative and its automorphism count;
    the labelled class sizes are checked against v!/aut as they accumulate.
    """
    if n_max > cap or n_max > HARD_CAP:
        raise ResourceCapError(f"census capped at n <= {min(cap, HARD_CAP)}")
    found: dict[bytes, list] = {}
    order: list[bytes] = []
    for n in range(1, n_max + 1):
        for mask in member_masks(fam, n, connected=True):
            g = Graph(n, mask)
            code = canonicalize(g)
            slot = found.get(code.code)
            if slot is None:
                found[code.code] = [g, 1]
                order.append(code.code)
            else:
                slot[1] += 1
    entries = []
    for key in order:
        g, labelled = found[key]
        aut = automorphism_count(g)
        if labelled * aut != math.factorial(g.n):
            raise AssertionError("census class size inconsistent with automorphism count")
        entries.append(CensusEntry(CanonicalCode(key), g.n, g.edge_count, 1, aut, g, labelled))
    entries.sort(key=lambda en: (en.v, en.code.code))
    return UnlabelledCensus(fam.name, n_max, entries)


def census_labelled_total(census: UnlabelledCensus, w: Weighting, n: int):
    """Sum n!/aut * weight over census entries of order n (equals tau(C_n))."""
    total = 0
    for en in census.of_order(n):
        wt = weight(en.rep, w)
        if isinstance(wt, (int, Fraction)):
            total = total + Fraction(math.factorial(n), en.aut) * _as_exact(wt)
        else:
            total = total + math.factorial(n) / en.aut * wt
    return _simplify(total)


# -- falling-factorial moment identity ------------------------------------------------


def falling_moment_check(fam: "GraphFamily", w: Weighting, n: int,
                         picks: Sequence[tuple[Graph, int]], rho=Fraction(1),
                         cap: int = BRUTE_FORCE_CAP):
    """Residual of the exact falling-moment identity for component counts.

    Left side: E[prod_i (number of components isomorphic to H_i)_(k_i)] under
    the weighted measure on the family's n-slice, by full enumeration.  Right
    side: prod_i mu(H_i)^(k_i) * prod_{j=1..K} r_{n-j+1}/rho with K the total
    vertex demand and r_m = m a_{m-1}/a_m.  The identity holds for every
    rho > 0 (rho cancels); the residual must be exactly zero for freely
    addable picks.
    """
    if not w.is_rational:
        raise ValueError("the exact residual needs rational weights")
    rho = _as_exact(rho)
    picks = [(h, int(k)) for h, k in picks]
    K = sum(h.n * k for h, k in picks)
    if K > n:
        raise ValueError("total vertex demand exceeds n")
    pick_codes = [canonicalize(h).code for h, _ in picks]
    if len(set(pick_codes)) != len(pick_codes):
        raise ValueError("picks must be pairwise non-isomorphic")

    a_vals = {m: brute_force_tau(fam, w, m, cap=cap).a for m in range(n - K, n + 1)}

    comp_code_memo: dict[tuple[int, int], bytes] = {}
    lhs_num = Fraction(0)
    for mask in member_masks(fam, n, connected=False):
        g = Graph(n, mask)
        comps = component_masks(g)
        counts = [0] * len(picks)
        for cm in comps:
            sub = induced_subgraph(g, _labels_of(cm))
            key = (sub.graph.n, sub.graph.mask)
            code = comp_code_memo.get(key)
            if code is None:
                code = canonicalize(sub.graph).code
                comp_code_memo[key] = code
            for i, pc in enumerate(pick_codes):
                if code == pc:
                    counts[i] += 1
        prod = 1
        for (h, k), cnt in zip(picks, counts):
            prod *= falling_factorial(cnt, k)
            if prod == 0:
                break
        if prod:
            lhs_num += prod * _as_exact(weight(g, w))
    lhs = lhs_num / _as_exact(a_vals[n])

    rhs = Fraction(1)
    for (h, k) in picks:
        mu = rho ** h.n * _as_exact(weight(h, w)) / automorphism_count(h)
        rhs *= mu ** k
    for j in range(1, K + 1):
        m = n - j + 1
        r_m = Fraction(m) * _as_exact(a_vals[m - 1]) / _as_exact(a_vals[m])
        rhs *= r_m / rho
    return _simplify(lhs - rhs)


def _labels_of(vmask: int) -> list[int]:
    out = []
    while vmask:
        v = (vmask & -vmask).bit_length() - 1
        vmask &= vmask - 1
        out.append(v + 1)
    return out


# -- exact structural expectations -----------------------------------------------------


def exact_connectivity_probability(fam: "GraphFamily", w: Weighting, n: int,
                                   cap: int = BRUTE_FORCE_CAP):
    t = brute_force_tau(fam, w, n, cap=cap)
    return _simplify(_as_exact(t.c) / _as_exact(t.a)) if w.is_rational else t.c / t.a


def exact_frag_distribution(fam: "GraphFamily", w: Weighting, n: int,
                            cap: int = BRUTE_FORCE_CAP) -> dict:
    """Exact Pr[frag = k] for the weighted random graph on the family's n-slice."""
    if n > cap or n > HARD_CAP:
        raise ResourceCapError("frag distribution needs the enumeration range")
    totals: dict[int, Fraction] = {}
    denom = Fraction(0)
    exact = w.is_rational
    for mask in member_masks(fam, n, connected=False):
        g = Graph(n, mask)
        big, frag = big_frag_split(g)
        wt = _as_exact(weight(g, w)) if exact else weight(g, w)
        totals[frag.graph.n] = totals.get(frag.graph.n, 0) + wt
        denom += wt
    return {k: _simplify(v / denom) for k, v in sorted(totals.items())}


def exact_frag_mean(fam: "GraphFamily", w: Weighting, n: int, cap: int = BRUTE_FORCE_CAP):
    dist = exact_frag_distribution(fam, w, n, cap=cap)
    return _simplify(sum(_as_exact(k) * _as_exact(p) for k, p in dist.items()))
