"""Samplers for the weighted random graph and its Boltzmann Poisson limit.

Three routes to the n-slice distribution: exact cumulative-weight inversion
over the enumerated members, a Metropolis edge-toggle chain (for orders past
the enumeration range), and the component-multiset Boltzmann Poisson sampler
driven by an unlabelled census.  A uniform labelled-tree sampler decodes
uniform parent sequences.  All randomness comes from the counter-based Philox
generator keyed by an explicit 64-bit seed and a stream index, so every
sampler is reproducible across platforms and both kernel paths.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .canon import canonicalize
from .enumeration import (
    HARD_CAP,
    UnlabelledCensus,
    member_mask_array,
    member_masks,
    subset_stats_cached,
)
from .errors import EmptySliceError, ResourceCapError
from .graphs import (
    Graph,
    RootedGraph,
    Weighting,
    big_frag_split,
    component_masks,
    disjoint_union,
    induced_subgraph,
    is_forest,
    pair_count,
    pendant_appearances,
    two_core,
    weight,
)


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator; independent streams share a seed."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


# -- exact sampler -------------------------------------------------------------


def exact_sample(fam, w: Weighting, n: int, seed: int, draws: int,
                 cap: int = 7) -> list[Graph]:
    """i.i.d. draws with Pr(G) proportional to its cluster weight, by cumulative
    inversion over the enumerated member list."""
    if n > min(cap, 7):
        raise ResourceCapError("exact sampling needs the enumeration range (n <= 7)")
    masks = member_masks(fam, n)
    if not masks:
        raise EmptySliceError(f"family {fam.name!r} has no members of order {n}")
    marr = np.asarray(masks, dtype=np.int64)
    if w.is_diagonal:
        kappa, _ = subset_stats_cached(n)
        e = np.bitwise_count(marr).astype(np.float64)
        k = kappa[marr].astype(np.float64)
        weights = float(w.lambda0) ** e * float(w.nu) ** k
    else:
        weights = np.array([float(weight(Graph(n, int(m)), w)) for m in masks])
    cum = np.cumsum(weights)
    rng = rng_stream(seed)
    r = rng.random(draws) * cum[-1]
    idx = np.searchsorted(cum, r, side="right")
    return [Graph(n, int(marr[i])) for i in idx]


# -- Boltzmann Poisson sampler ---------------------------------------------------


@dataclass
class BoltzmannConfig:
    """Census-driven Boltzmann Poisson sampler configuration.

    truncated_mass_note reports the census tail (the mu-mass beyond n_max)
    when a dominating series certifies it, else None.
    """

    rho: float
    weighting: Weighting
    census: UnlabelledCensus
    mus: list = field(default_factory=list)
    truncated_mass_note: Optional[float] = None

    @property
    def total_mean(self) -> float:
        return float(sum(self.mus))


def boltzmann_config(census: UnlabelledCensus, rho: float, w: Weighting,
                     radius_estimate: float | None = None) -> BoltzmannConfig:
    from .asymptotics import mu_of_graph, tree_tail_bound

    if radius_estimate is not None and rho > radius_estimate:
        warnings.warn("rho exceeds the estimated radius of convergence; "
                      "the truncated Boltzmann law may be badly biased")
    mus = [float(mu_of_graph(en.rep, rho, w, aut=en.aut)) for en in census.entries]
    if not all(math.isfinite(m) for m in mus):
        raise ValueError("non-finite Boltzmann mean; rho or the weights are too large")
    note = None
    if census.family in ("forests", "trees") and float(w.lambda0) * math.e * rho <= 1 + 1e-12:
        note = tree_tail_bound(census.n_max, float(w.lambda0), rho, float(w.nu), rooted=False)
    return BoltzmannConfig(rho, w, census, mus, note)


def boltzmann_component_counts(cfg: BoltzmannConfig, seed: int, draws: int) -> np.ndarray:
    """(draws, entries) independent Poisson counts, one column per census entry."""
    if not cfg.census.entries:
        raise EmptySliceError("empty census")
    rng = rng_stream(seed)
    return rng.poisson(lam=np.asarray(cfg.mus), size=(draws, len(cfg.mus)))


def counts_to_graph(census: UnlabelledCensus, counts: Sequence[int]) -> Graph:
    """Materialize a component multiset as a labelled graph (entries in census order)."""
    g = Graph(0, 0)
    for en, c in zip(census.entries, counts):
        for _ in range(int(c)):
            g = disjoint_union(g, en.rep)
    return g


def boltzmann_poisson_sample(cfg: BoltzmannConfig, seed: int, draws: int) -> list[Graph]:
    """Draws from the truncated Boltzmann Poisson random graph as labelled graphs."""
    counts = boltzmann_component_counts(cfg, seed, draws)
    return [counts_to_graph(cfg.census, row) for row in counts]


# -- MCMC sampler ------------------------------------------------------------------


def mcmc_sample(fam, w: Weighting, n: int, draws: int, burn_in: int = 100_000,
                thin: int = 10, seed: int = 0) -> list[Graph]:
    """Metropolis chain over edge toggles targeting the weighted n-slice.

    Proposals toggle a uniform vertex pair; moves leaving the family are
    rejected, others accepted with min(1, lam^de * nu^dkappa).  The chain
    starts from the edgeless graph (always a member) and is irreducible since
    every member reaches it by edge deletions.
    """
    if fam.connected_only:
        raise ValueError("the edge-toggle chain targets the full family; "
                         "connected-member views are not supported")
    m = pair_count(n)
    if m == 0:
        return [Graph(n, 0)] * draws
    total = burn_in + draws * thin
    rng = rng_stream(seed)
    if w.is_diagonal:
        proposals = rng.integers(0, m, size=total, dtype=np.int64)
        uniforms = rng.random(total)
        if fam.name == "all":
            mode, member = _kernels.MODE_ALL, None
        elif fam.predicate is is_forest:
            mode, member = _kernels.MODE_FORESTS, None
        elif n <= HARD_CAP:
            mode, member = _kernels.MODE_MEMBER_ARRAY, member_mask_array(fam, n)
        else:
            return _mcmc_python(fam, w, n, proposals, uniforms, burn_in, thin, draws)
        masks = _kernels.mcmc_chain(n, proposals, uniforms, float(w.lam), float(w.nu),
                                    mode, member, burn_in, thin, draws)
        return [Graph(n, int(s)) for s in masks]
    proposals = rng.integers(0, m, size=total, dtype=np.int64)
    uniforms = rng.random(total)
    return _mcmc_python(fam, w, n, proposals, uniforms, burn_in, thin, draws)


def _mcmc_python(fam, w, n, proposals, uniforms, burn_in, thin, draws) -> list[Graph]:
    """Generic-membership chain; same proposal stream as the kernel path."""
    g = Graph(n, 0)
    out = []
    for t in range(len(proposals)):
        b = int(proposals[t])
        new = Graph(n, g.mask ^ (1 << b))
        if fam.base_member(new):
            wt_ratio = float(weight(new, w)) / float(weight(g, w))
            if wt_ratio >= 1.0 or uniforms[t] < wt_ratio:
                g = new
        step = t + 1
        if step > burn_in and (step - burn_in) % thin == 0 and len(out) < draws:
            out.append(g)
    if len(out) != draws:
        raise ValueError("proposal stream too short")
    return out


def transition_matrix(fam, w: Weighting, n: int) -> tuple[list[int], list[list[Fraction]]]:
    """Exact one-step transition matrix of the chain on the member masks.

    Entries are Fractions (rational weights required), suitable for verifying
    stationarity pi P = pi exactly.
    """
    if not w.is_rational:
        raise ValueError("exact transition matrix needs rational weights")
    masks = member_masks(fam, n, connected=False)
    index = {s: i for i, s in enumerate(masks)}
    m = pair_count(n)
    P = [[Fraction(0) for _ in masks] for _ in masks]
    for s in masks:
        i = index[s]
        stay = Fraction(0)
        for b in range(m):
            t = s ^ (1 << b)
            if t not in index:
                stay += Fraction(1, m)
                continue
            g_old, g_new = Graph(n, s), Graph(n, t)
            ratio = Fraction(weight(g_new, w)) / Fraction(weight(g_old, w))
            acc = min(Fraction(1), ratio)
            P[i][index[t]] += Fraction(1, m) * acc
            stay += Fraction(1, m) * (1 - acc)
        P[i][i] += stay
    return masks, P


def stationary_residual(fam, w: Weighting, n: int) -> Fraction:
    """max |(pi P - pi)_j| for pi proportional to the cluster weights (exactly 0 expected)."""
    masks, P = transition_matrix(fam, w, n)
    wts = [Fraction(weight(Graph(n, s), w)) for s in masks]
    total = sum(wts)
    pi = [x / total for x in wts]
    worst = Fraction(0)
    for j in range(len(masks)):
        acc = sum(pi[i] * P[i][j] for i in range(len(masks)))
        worst = max(worst, abs(acc - pi[j]))
    return worst


# -- uniform random trees --------------------------------------------------------------


def random_tree_sample(n: int, seed: int, draws: int) -> list[Graph]:
    """Uniform labelled trees via parent-sequence decoding (bijective with n^(n-2)).

    Under the cluster weighting every tree has the same weight, so uniform
    trees are exactly the weighted random trees.
    """
    if n < 1:
        raise ValueError("trees need at least one vertex")
    if n == 1:
        return [Graph(1, 0)] * draws
    rng = rng_stream(seed)
    seqs = rng.integers(0, n, size=(draws, n - 2), dtype=np.int64)
    edges = _kernels.prufer_decode(seqs)
    out = []
    for d in range(draws):
        out.append(Graph.from_edges(n, [(int(u) + 1, int(v) + 1) for u, v in edges[d]]))
    return out


# -- statistics collection ----------------------------------------------------------------


@dataclass
class SampleStats:
    draws: int
    kappa_hist: dict
    frag_hist: dict
    core_frac_mean: float
    core_frac_hist: dict
    comp_counts: dict          # code hex -> {count: draws with that many such components}
    pendant_density: dict      # code hex of the rooted graph -> mean f_H / n

    @property
    def conn_freq(self) -> float:
        return self.kappa_hist.get(1, 0) / self.draws if self.draws else 0.0

    def comp_count_histogram(self, code_hex: str) -> dict:
        """Per-draw histogram for one component class, zeros included."""
        hist = dict(self.comp_counts.get(code_hex, {}))
        seen = sum(hist.values())
        hist[0] = hist.get(0, 0) + self.draws - seen
        return hist


def collect_stats(samples: Sequence[Graph], rooted: Sequence[RootedGraph] = (),
                  census: UnlabelledCensus | None = None) -> SampleStats:
    """Aggregate the structural statistics of a sample of graphs."""
    kappa_hist: dict = {}
    frag_hist: dict = {}
    core_hist: dict = {}
    core_sum = 0.0
    core_n = 0
    comp_counts: dict = {}
    pend_sums = {canonicalize(r.graph).hex: 0.0 for r in rooted}
    code_memo: dict[tuple[int, int], str] = {}
    for g in samples:
        comps = component_masks(g)
        kappa_hist[len(comps)] = kappa_hist.get(len(comps), 0) + 1
        if g.n >= 1:
            _, frag = big_frag_split(g)
            fsize = frag.graph.n
        else:
            fsize = 0
        frag_hist[fsize] = frag_hist.get(fsize, 0) + 1
        if g.n >= 1:
            frac = Fraction(two_core(g).graph.n, g.n)
            core_hist[frac] = core_hist.get(frac, 0) + 1
            core_sum += float(frac)
            core_n += 1
        per_graph: dict[str, int] = {}
        for cm in comps:
            sub = induced_subgraph(g, _labels_of(cm)).graph
            key = (sub.n, sub.mask)
            hexcode = code_memo.get(key)
            if hexcode is None:
                hexcode = canonicalize(sub).hex
                code_memo[key] = hexcode
            per_graph[hexcode] = per_graph.get(hexcode, 0) + 1
        for code, cnt in per_graph.items():
            bucket = comp_counts.setdefault(code, {})
            bucket[cnt] = bucket.get(cnt, 0) + 1
        for r in rooted:
            if r.graph.n < g.n:
                key = canonicalize(r.graph).hex
                pend_sums[key] += pendant_appearances(g, r) / g.n
    if census is not None:
        for en in census.entries:
            comp_counts.setdefault(en.code.hex, {})
    return SampleStats(
        draws=len(samples),
        kappa_hist=kappa_hist,
        frag_hist=frag_hist,
        core_frac_mean=core_sum / core_n if core_n else 0.0,
        core_frac_hist=core_hist,
        comp_counts=comp_counts,
        pendant_density={k: v / len(samples) for k, v in pend_sums.items()} if samples else {},
    )


def _labels_of(vmask: int) -> list[int]:
    out = []
    while vmask:
        v = (vmask & -vmask).bit_length() - 1
        vmask &= vmask - 1
        out.append(v + 1)
    return out


# -- statistical checks ---------------------------------------------------------------------


def poisson_chi_square(hist: dict, draws: int, mu: float,
                       min_expected: float = 5.0) -> tuple[float, int, float]:
    """Chi-square goodness of fit of a count histogram against Poisson(mu).

    Bins with expected count below min_expected are merged rightward into the
    tail.  Returns (statistic, degrees of freedom, p-value); p = 1 when fewer
    than two bins survive.
    """
    from scipy.stats import chi2

    kmax = max(hist) if hist else 0
    obs = [hist.get(k, 0) for k in range(kmax + 1)]
    pmf = [math.exp(-mu) * mu ** k / math.factorial(k) for k in range(kmax + 1)]
    exp = [draws * p for p in pmf]
    exp_tail = draws * (1 - sum(pmf))
    # merge from the right so the tail bin reaches min_expected
    bins_obs: list[float] = []
    bins_exp: list[float] = []
    for o, ex in zip(obs, exp):
        if bins_exp and bins_exp[-1] < min_expected:
            bins_obs[-1] += o
            bins_exp[-1] += ex
        else:
            bins_obs.append(float(o))
            bins_exp.append(float(ex))
    # attach the analytic tail mass to the last bin
    bins_exp[-1] += exp_tail
    while len(bins_exp) >= 2 and bins_exp[-1] < min_expected:
        bins_exp[-2] += bins_exp[-1]
        bins_obs[-2] += bins_obs[-1]
        bins_exp.pop()
        bins_obs.pop()
    if len(bins_exp) < 2:
        return 0.0, 0, 1.0
    stat = sum((o - ex) ** 2 / ex for o, ex in zip(bins_obs, bins_exp))
    df = len(bins_exp) - 1
    return stat, df, float(chi2.sf(stat, df))


def pairwise_max_correlation(counts: np.ndarray) -> float:
    """Largest |pairwise empirical correlation| between count columns (0 for constant columns)."""
    if counts.shape[1] < 2:
        return 0.0
    keep = counts.std(axis=0) > 0
    cols = counts[:, keep]
    if cols.shape[1] < 2:
        return 0.0
    corr = np.corrcoef(cols, rowvar=False)
    off = corr[~np.eye(corr.shape[0], dtype=bool)]
    return float(np.max(np.abs(off)))


def e_kappa_histogram(samples: Sequence[Graph]) -> dict:
    """Joint (edge count, component count) histogram of a sample."""
    out: dict = {}
    for g in samples:
        key = (g.edge_count, len(component_masks(g)))
        out[key] = out.get(key, 0) + 1
    return out


def tv_distance(h1: dict, h2: dict) -> float:
    """Total variation distance between two normalized histograms."""
    n1 = sum(h1.values())
    n2 = sum(h2.values())
    keys = set(h1) | set(h2)
    return 0.5 * sum(abs(h1.get(k, 0) / n1 - h2.get(k, 0) / n2) for k in keys)
