"""Numerical ground truth for graph-level verdicts.

Gaussian systems are generated over a regression graph as

    Y = B Y + e,   cov(e) = blockdiag(W_1, ..., W_J, inv(K_context))

with ``B[i, k] != 0`` exactly for arrows ``k -> i``, ``W_g`` zero exactly at
missing dashed lines of block ``g`` and ``K_context`` zero exactly at missing
full lines. Small binary distributions are built exactly from conditional
probability tables over a DAG.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graph import EdgeKind, GraphError, MixedGraph, RegressionGraph

ZERO_TOL = 1e-10
NONZERO_TOL = 1e-6
IDENTITY_TOL = 1e-12

COEF_RANGE = (0.3, 1.0)
RESID_RANGE = (0.5, 1.5)
MAX_CONDITION = 1e6
MIN_ABS = 0.05


class OracleError(GraphError):
    pass


class SingularConditioningBlock(OracleError):
    pass


class SingularMarginalizedBlock(OracleError):
    pass


class PreconditionDependenceTooWeak(OracleError):
    pass


# -- Gaussian systems -------------------------------------------------------

@dataclass
class GaussianSystem:
    graph: RegressionGraph
    coeffs: np.ndarray                # B, rows are responses
    block_residual_cov: dict          # block index -> W_g (over sorted ids of the block)
    context_concentration: np.ndarray  # over sorted context ids; empty if none
    sigma: np.ndarray = field(init=False)

    def __post_init__(self):
        self.sigma = implied_covariance(self)

    @property
    def residual_cov(self) -> np.ndarray:
        n = self.graph.n
        d = np.zeros((n, n))
        for b, w in self.block_residual_cov.items():
            ids = _block_ids(self.graph, b)
            d[np.ix_(ids, ids)] = w
        ctx = _context_ids(self.graph)
        if ctx:
            d[np.ix_(ctx, ctx)] = np.linalg.inv(self.context_concentration)
        return d

    def index(self, x):
        return self.graph.index(x)


def _block_ids(g, b):
    return [i for i in range(g.n) if g.block_of[i] == b]


def _context_ids(g):
    if g.context_block is None:
        return []
    return _block_ids(g, g.context_block)


def implied_covariance(s: GaussianSystem) -> np.ndarray:
    n = s.graph.n
    t = np.linalg.inv(np.eye(n) - s.coeffs)
    sig = t @ s.residual_cov @ t.T
    return (sig + sig.T) / 2


def _signed(rng, size=None):
    lo, hi = COEF_RANGE
    return rng.uniform(lo, hi, size) * rng.choice([-1.0, 1.0], size)


def _sparse_spd(rng, n, pairs):
    """SPD matrix over ``n`` positions, nonzero off the diagonal exactly at ``pairs``."""
    m = np.zeros((n, n))
    for a, b in pairs:
        m[a, b] = m[b, a] = _signed(rng)
    diag = np.abs(m).sum(axis=1) + rng.uniform(*RESID_RANGE, n)
    m[np.diag_indices(n)] = diag
    return m


def sample_system(g: RegressionGraph, seed) -> GaussianSystem:
    """Deterministic random parameterization of ``g``; resampled until the
    joint covariance is well conditioned."""
    rng = np.random.default_rng(seed)
    n = g.n
    for _ in range(1000):
        b = np.zeros((n, n))
        for e in g.edges_of_kind(EdgeKind.ARROW):
            b[e.v, e.u] = _signed(rng)
        ctx = set(_context_ids(g))
        resid = {}
        for blk in range(g.n_blocks):
            ids = _block_ids(g, blk)
            if not ids or ids[0] in ctx:
                continue
            pos = {v: p for p, v in enumerate(ids)}
            pairs = [(pos[e.u], pos[e.v]) for e in g.edges_of_kind(EdgeKind.DASHED)
                     if e.u in pos]
            resid[blk] = _sparse_spd(rng, len(ids), pairs)
        cids = sorted(ctx)
        pos = {v: p for p, v in enumerate(cids)}
        pairs = [(pos[e.u], pos[e.v]) for e in g.edges_of_kind(EdgeKind.FULL)]
        kc = _sparse_spd(rng, len(cids), pairs) if cids else np.zeros((0, 0))
        s = GaussianSystem(g, b, resid, kc)
        if np.linalg.cond(s.sigma) < MAX_CONDITION:
            return s
    raise OracleError("could not sample a well-conditioned system")


def _sel(x):
    return sorted(x) if not isinstance(x, int) else [x]


def _inv_block(m, idx, err):
    sub = m[np.ix_(idx, idx)]
    if idx and np.linalg.cond(sub) > 1e12:
        raise err(f"block {idx} is singular")
    return np.linalg.inv(sub) if idx else sub


def cond_cov(sigma, i, k, given=()) -> float:
    """``sigma_ik|given`` by the Schur complement."""
    g = _sel(given)
    if not g:
        return float(sigma[i, k])
    inv = _inv_block(sigma, g, SingularConditioningBlock)
    return float(sigma[i, k] - sigma[i, g] @ inv @ sigma[g, k])


def marg_con(K, i, k, over=()) -> float:
    """Concentration of ``(i, k)`` in the margin that drops ``over``."""
    o = _sel(over)
    if not o:
        return float(K[i, k])
    inv = _inv_block(K, o, SingularMarginalizedBlock)
    return float(K[i, k] - K[i, o] @ inv @ K[o, k])


def partial_corr(sigma, i, k, given=()) -> float:
    c = cond_cov(sigma, i, k, given)
    return c / np.sqrt(cond_cov(sigma, i, i, given) * cond_cov(sigma, k, k, given))


def regress_coeff(sigma, response, regressor, given=()) -> float:
    """Least-squares coefficient of ``regressor`` for ``response`` given ``given``."""
    g = [x for x in _sel(given) if x not in (response, regressor)]
    return cond_cov(sigma, response, regressor, g) / cond_cov(sigma, regressor, regressor, g)


def regress_coeff_concentration(sigma, response, regressor, given=()) -> float:
    """Same coefficient as ``-sigma^{13.m} / sigma^{11.m}`` with ``m`` the rest."""
    n = sigma.shape[0]
    keep = {response, regressor} | set(_sel(given))
    m = [x for x in range(n) if x not in keep]
    K = np.linalg.inv(sigma)
    return -marg_con(K, response, regressor, m) / marg_con(K, response, response, m)


def coefficient_matrix(sigma, a, b) -> np.ndarray:
    """``Pi_{a|b} = sigma_ab inv(sigma_bb)``."""
    a, b = list(a), list(b)
    return np.linalg.solve(sigma[np.ix_(b, b)], sigma[np.ix_(b, a)]).T


def batch_partial_corr(sigmas, i, k, given=()) -> np.ndarray:
    """Partial correlations for a stack of covariance matrices."""
    idx = [i, k] + _sel(given)
    sub = sigmas[:, idx][:, :, idx]
    con = np.linalg.inv(sub)
    return -con[:, 0, 1] / np.sqrt(con[:, 0, 0] * con[:, 1, 1])


def edge_conditioning_set(g: MixedGraph, a: int, b: int) -> list:
    """Conditioning set under which the edge between ``a`` and ``b`` reads as a dependence.

    Arrow into ``i``: the other nodes in blocks after that of ``i``.
    Dashed line in block ``g``: every node in later blocks.
    Full line: the rest of the context.
    """
    e = g.edge(a, b)
    if e is None:
        raise OracleError("no such edge")
    if e.kind.directed:
        bi = g.block_of[e.v]
        return [x for x in range(g.n) if g.block_of[x] > bi and x != e.u]
    bi = g.block_of[e.u]
    if e.kind is EdgeKind.DASHED:
        return [x for x in range(g.n) if g.block_of[x] > bi]
    return [x for x in range(g.n) if g.block_of[x] == bi and x not in (e.u, e.v)]


# -- binary tables ----------------------------------------------------------

@dataclass(frozen=True)
class JointTable:
    vars: tuple
    probs: np.ndarray  # shape (2,) * n, axis j is vars[j]

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (2,) * len(self.vars):
            raise ValueError("table shape does not match the variables")
        if (p < 0).any() or abs(p.sum() - 1) > 1e-12:
            raise ValueError("probabilities must be nonnegative and sum to one")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "vars", tuple(self.vars))

    @property
    def strictly_positive(self):
        return bool((self.probs > 0).all())

    def index(self, x):
        return x if isinstance(x, int) else self.vars.index(x)

    def ci_gap(self, a, b, given=()) -> float:
        """Largest ``|p(abc) p(c) - p(ac) p(bc)|`` over all cells."""
        a, b, given = _sel_t(self, a), _sel_t(self, b), _sel_t(self, given)
        keep = sorted(set(a) | set(b) | set(given))
        n = len(self.vars)
        p = self.probs.sum(axis=tuple(x for x in range(n) if x not in keep), keepdims=True)

        def marg(drop):
            return p.sum(axis=tuple(drop), keepdims=True) if drop else p
        pc = marg(a + b)
        pac = marg(b)
        pbc = marg(a)
        return float(np.abs(p * pc - pac * pbc).max())

    def ci(self, a, b, given=(), tol=IDENTITY_TOL) -> bool:
        return self.ci_gap(a, b, given) < tol

    def covariance(self) -> np.ndarray:
        n = len(self.vars)
        states = np.array(list(itertools.product((0, 1), repeat=n)), dtype=float)
        w = self.probs.reshape(-1)
        mean = w @ states
        c = states - mean
        return (c * w[:, None]).T @ c


def _sel_t(t, x):
    if isinstance(x, (str, int)):
        x = [x]
    return sorted(t.index(v) for v in x)


def dag_binary_table(g: MixedGraph, conditionals) -> JointTable:
    """Exact joint table of binary variables generated over a DAG.

    ``conditionals[label]`` is an array of ``P(X = 1 | parents)`` indexed by
    the parent states, parents taken in id order (first parent is the most
    significant bit).
    """
    if any(e.kind is not EdgeKind.ARROW for e in g.edges):
        raise OracleError("dag_binary_table needs a graph of arrows only")
    n = g.n
    if n > 5:
        raise OracleError("binary tables are limited to five variables")
    probs = np.ones((2,) * n)
    for state in itertools.product((0, 1), repeat=n):
        p = 1.0
        for i in range(n):
            pa = g.parents(i)
            cell = 0
            for q in pa:
                cell = 2 * cell + state[q]
            th = np.asarray(conditionals[g.labels[i]], dtype=float).reshape(-1)[cell]
            if not 0 < th < 1:
                raise OracleError("conditional probabilities must lie in (0, 1)")
            p *= th if state[i] else 1 - th
        probs[state] = p
    return JointTable(g.labels, probs)


# -- combination properties and singleton transitivity --------------------

@dataclass(frozen=True)
class CombinationReport:
    statements: dict
    upward_premise: bool
    upward_holds: bool
    downward_premise: bool
    downward_holds: bool


def _independence_checker(dist, tol):
    if isinstance(dist, JointTable):
        return dist.index, lambda a, b, c=(): dist.ci(a, b, c, tol)
    sigma = dist.sigma if isinstance(dist, GaussianSystem) else np.asarray(dist)
    index = dist.index if isinstance(dist, GaussianSystem) else (lambda x: x)

    def indep(a, b, c=()):
        a, b = _sel(a), _sel(b)
        return all(abs(partial_corr(sigma, x, y, c)) < tol for x in a for y in b)
    return index, indep


def check_combination_properties(dist, i, h, k, tol=None) -> CombinationReport:
    """Evaluate the pairwise and joint statements for ``i`` against ``h, k``.

    Upward combination: ``i _||_ h`` and ``i _||_ k`` give ``i _||_ (h, k)``.
    Downward combination: ``i _||_ h | k`` and ``i _||_ k | h`` give it too.
    """
    if len({i, h, k}) != 3:
        raise OracleError("three distinct variables are needed")
    tol = tol if tol is not None else (IDENTITY_TOL if isinstance(dist, JointTable) else ZERO_TOL)
    index, indep = _independence_checker(dist, tol)
    i, h, k = index(i), index(h), index(k)
    st = {
        "i_h": indep(i, h),
        "i_k": indep(i, k),
        "i_hk": indep(i, [h, k]),
        "i_h|k": indep(i, h, [k]),
        "i_k|h": indep(i, k, [h]),
    }
    up = st["i_h"] and st["i_k"]
    down = st["i_h|k"] and st["i_k|h"]
    return CombinationReport(st, up, (not up) or st["i_hk"], down, (not down) or st["i_hk"])


@dataclass(frozen=True)
class TransitivityReport:
    marginal: float      # |rho_12| or the largest CI cell gap
    conditional: float   # |rho_12.3| or the largest CI cell gap
    violated: bool

    @property
    def distance(self) -> float:
        """How far the pair is from holding both independences at once."""
        return max(self.marginal, self.conditional)


def check_singleton_transitivity(dist, i=0, k=1, inner=2, tol=None) -> TransitivityReport:
    """Both ``i`` and ``k`` depend on ``inner``; at most one of ``i _||_ k``
    and ``i _||_ k | inner`` may hold."""
    if isinstance(dist, JointTable):
        tol = tol if tol is not None else IDENTITY_TOL
        i, k, inner = dist.index(i), dist.index(k), dist.index(inner)
        if dist.ci(i, inner, (), tol) or dist.ci(k, inner, (), tol):
            raise PreconditionDependenceTooWeak("a pair member is independent of the inner node")
        m, c = dist.ci_gap(i, k), dist.ci_gap(i, k, [inner])
        return TransitivityReport(m, c, m < tol and c < tol)
    tol = tol if tol is not None else ZERO_TOL
    sigma = dist.sigma if isinstance(dist, GaussianSystem) else np.asarray(dist)
    if isinstance(dist, GaussianSystem):
        i, k, inner = dist.index(i), dist.index(k), dist.index(inner)
    if abs(partial_corr(sigma, i, inner)) < tol or abs(partial_corr(sigma, k, inner)) < tol:
        raise PreconditionDependenceTooWeak("a pair member is uncorrelated with the inner node")
    m = abs(partial_corr(sigma, i, k))
    c = abs(partial_corr(sigma, i, k, [inner]))
    return TransitivityReport(m, c, m < tol and c < tol)


@dataclass(frozen=True)
class BinaryGridReport:
    tables: int          # grid points scanned
    qualifying: int      # tables where both pair members depend on the inner node
    violations: int      # qualifying tables with both independences exact
    nearest: float       # smallest distance from a violation among qualifying tables


# topological orders of the complete three-node DAG up to swapping i and k;
# every sparser DAG table on the grid is also a grid point of one of these
BINARY_ORDERS = (("s", "i", "k"), ("i", "s", "k"), ("i", "k", "s"))


def scan_binary_transitivity(step=0.05, tol=IDENTITY_TOL, orders=BINARY_ORDERS) -> BinaryGridReport:
    """Singleton transitivity over every binary DAG table on a parameter grid.

    Each complete three-node DAG is parameterized by ``P(first)``,
    ``P(second | first)`` and ``P(third | first, second)``, each ranging
    over the open grid ``step, 2*step, ...``. For binary pairs every CI cell
    gap equals the 2x2 determinant, which is what is compared with ``tol``.
    """
    from . import kernels
    grid = np.arange(1, int(round(1 / step))) * step
    grid = grid[grid < 1 - 1e-12]
    tables = qualifying = violations = 0
    nearest = np.inf
    for order in orders:
        t, q, v, d = kernels.binary_grid_scan(grid, order, tol)
        tables, qualifying, violations = tables + t, qualifying + q, violations + v
        nearest = min(nearest, d)
    return BinaryGridReport(tables, qualifying, violations, float(nearest))


def cancellation_system() -> GaussianSystem:
    """Triangle ``3 -> 2 -> 1``, ``3 -> 1`` whose direct and indirect paths cancel.

    The graph has every edge, yet ``1`` and ``3`` are marginally uncorrelated.
    """
    from .graph import BlockOrder, build_graph
    g = build_graph(["1", "2", "3"], BlockOrder([["1"], ["2"]], ["3"]),
                    [("->", "3", "2"), ("->", "2", "1"), ("->", "3", "1")])
    b = np.zeros((3, 3))
    b[1, 2] = 0.8   # 3 -> 2
    b[0, 1] = 0.5   # 2 -> 1
    b[0, 2] = -0.4  # 3 -> 1 cancels 0.5 * 0.8
    return GaussianSystem(g, b, {0: np.eye(1), 1: np.eye(1)}, np.eye(1))
