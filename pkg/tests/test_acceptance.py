"""Acceptance suite: one ``criterion N: PASS|FAIL`` line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
Set ``REGGRAPH_EXHAUSTIVE=1`` to run the margin-consistency check over every
five-node graph and transform instead of the seeded cover.
"""

from __future__ import annotations

import io
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from reggraph.catalog import (all_dags, all_regression_graphs, disjoint_triples,
                              pairwise_triples, transform_specs)
from reggraph.cli import main as run_cli
from reggraph.edgematrix import implied_zero
from reggraph.equivalence import markov_equivalent
from reggraph.graph import EdgeKind, as_regression_graph, random_regression_graph
from reggraph.io import export_dot, fixture_names, load_fixture, parse_document, serialize
from reggraph.oracle import (NONZERO_TOL, ZERO_TOL, IDENTITY_TOL, batch_partial_corr,
                             check_singleton_transitivity, cond_cov, edge_conditioning_set,
                             marg_con, regress_coeff, regress_coeff_concentration,
                             sample_system, scan_binary_transitivity)
from reggraph.separation import IndependenceQuery, d_separate, rg_separate, separate
from reggraph.transform import TransformSpec, induced_edges, summary_graph

REPORT: dict = {}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    REPORT[n] = line
    print(line)
    return ok


def fx(name):
    return load_fixture(name).graph


def labelled_edges(g):
    return sorted(g.describe_edge(e) for e in g.edges)


# -- criterion 1 ------------------------------------------------------------

EQUIV_PAIRS = [("retrospective", "retrospective_concentration"), ("sur", "sur_covariance")]


def _specs(g):
    return [(e.kind.value, g.labels[e.u], g.labels[e.v]) for e in sorted(g.edges)]


def deletions(g):
    specs = _specs(g)
    for j in range(len(specs)):
        yield specs[j], as_regression_graph(g.labels, specs[:j] + specs[j + 1:])


def retypes(g):
    """Every valid graph obtained by changing the kind or direction of one edge."""
    specs = _specs(g)
    for j, (kind, a, b) in enumerate(specs):
        others = specs[:j] + specs[j + 1:]
        for alt in (("arrow", a, b), ("arrow", b, a), ("dashed", a, b), ("full", a, b)):
            if alt == (kind, a, b) or (kind != "arrow" and alt[0] == kind):
                continue
            h = as_regression_graph(g.labels, others + [alt])
            if h is not None:
                yield (kind, a, b), alt, h


def signature(g):
    return frozenset((a, b, c) for a, b, c in disjoint_triples(g.labels, halve=True)
                     if rg_separate(g, IndependenceQuery(a, b, c), witness=False)
                     .implied_independent)


def criterion_1_equivalence():
    t0 = time.perf_counter()
    pairs_ok = all(markov_equivalent(fx(a), fx(b)).equivalent for a, b in EQUIV_PAIRS)
    n_del = n_del_ok = 0
    for left, right in EQUIV_PAIRS:
        for g, other in ((fx(left), fx(right)), (fx(right), fx(left))):
            for _, h in deletions(g):
                n_del += 1
                n_del_ok += not markov_equivalent(h, other).equivalent
    dt = time.perf_counter() - t0
    return pairs_ok, n_del, n_del_ok, dt


def criterion_1_retypes(check_signatures=False):
    """Returns ``(total, still_equivalent, verdicts_agree_with_signature)``."""
    total, survivors, agree = 0, [], True
    for left, right in EQUIV_PAIRS:
        for g, other in ((fx(left), fx(right)), (fx(right), fx(left))):
            sig_other = signature(other) if check_signatures else None
            for old, alt, h in retypes(g):
                total += 1
                eq = markov_equivalent(h, other).equivalent
                if eq:
                    survivors.append((old, alt))
                if check_signatures:
                    agree &= eq == (signature(h) == sig_other)
    return total, survivors, agree


def test_criterion_1_fixture_pairs_and_deletions():
    t0 = time.perf_counter()
    pairs_ok, n_del, n_del_ok, _ = criterion_1_equivalence()
    total, survivors, _ = criterion_1_retypes()
    dt = time.perf_counter() - t0
    ok = pairs_ok and n_del == n_del_ok and not survivors and dt < 1
    report(1, ok, f"pairs_equivalent={pairs_ok} deletions_inequivalent={n_del_ok}/{n_del} "
                  f"retypes_inequivalent={total - len(survivors)}/{total} runtime={dt:.3f}s"
                  + (f" still_equivalent={survivors}" if survivors else ""))
    assert pairs_ok and n_del == n_del_ok and dt < 1


@pytest.mark.xfail(strict=True, reason="some single-edge re-types keep skeleton and collision "
                                       "Vs, so the fixture pairs stay equivalent")
def test_criterion_1_retypes_break_equivalence():
    _, survivors, _ = criterion_1_retypes()
    assert not survivors, survivors


def test_criterion_1_retype_verdicts_match_independence_structure():
    _, _, agree = criterion_1_retypes(check_signatures=True)
    assert agree


# -- criterion 2 ------------------------------------------------------------

CAPTION_QUERIES = [("B | V |", True), ("Zb | V | A,B,U", True),
                   ("A | B |", False), ("U | V | A", False)]


def test_criterion_2_caption_queries():
    t0 = time.perf_counter()
    g = fx("chronic_pain")
    got = [separate(g, IndependenceQuery.parse(q)).implied_independent for q, _ in CAPTION_QUERIES]
    dt = time.perf_counter() - t0
    want = [v for _, v in CAPTION_QUERIES]
    ok = got == want and dt < 1
    report(2, ok, f"answers={got} expected={want} runtime={dt:.3f}s")
    assert ok


# -- criterion 3 ------------------------------------------------------------

def test_criterion_3_three_criteria_agree():
    t0 = time.perf_counter()
    graphs = queries = disagreements = 0
    for n in range(1, 6):
        for g in all_dags(n):
            graphs += 1
            for a, b, c in disjoint_triples(range(n)):
                queries += 1
                q = IndependenceQuery([g.labels[x] for x in a], [g.labels[x] for x in b],
                                      [g.labels[x] for x in c])
                d = d_separate(g, q, witness=False).implied_independent
                disagreements += d != implied_zero(g, list(a), list(b), list(c))
    dt = time.perf_counter() - t0
    ok = disagreements == 0
    report(3, ok, f"dags={graphs} (exhaustive, <=5 nodes) queries={queries} "
                  f"disagreements={disagreements} runtime={dt:.1f}s")
    assert ok


# -- criterion 4 ------------------------------------------------------------

def _cross_corr(sigmas, a, b, c):
    """Largest |conditional correlation| between members of ``a`` and ``b`` given ``c``."""
    idx = list(a) + list(b)
    s = sigmas[:, idx][:, :, idx]
    if c:
        sc = sigmas[:, idx][:, :, c]
        s = s - sc @ np.linalg.solve(sigmas[:, c][:, :, c], np.swapaxes(sc, 1, 2))
    d = np.sqrt(np.diagonal(s, axis1=1, axis2=2))
    r = s / d[:, :, None] / d[:, None, :]
    return np.abs(r[:, :len(a), len(a):]).max()


def test_criterion_4_oracle_soundness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    n_indep = n_edges = bad_indep = bad_edges = 0
    worst_zero, weakest_edge = 0.0, np.inf
    for k in range(20):
        n = 3 + k % 6
        g = random_regression_graph(n, rng, p_edge=0.5)
        sig = np.stack([sample_system(g, 1000 * k + r).sigma for r in range(100)])
        triples = list(disjoint_triples(range(n)))
        for a, b, c in triples:
            q = IndependenceQuery([g.labels[x] for x in a], [g.labels[x] for x in b],
                                  [g.labels[x] for x in c])
            if rg_separate(g, q, witness=False).implied_independent:
                n_indep += 1
                v = _cross_corr(sig, a, b, list(c))
                worst_zero = max(worst_zero, v)
                bad_indep += v >= ZERO_TOL
        for e in g.edges:
            n_edges += 1
            v = np.abs(batch_partial_corr(sig, e.u, e.v, edge_conditioning_set(g, e.u, e.v))).max()
            weakest_edge = min(weakest_edge, v)
            bad_edges += v <= NONZERO_TOL
    dt = time.perf_counter() - t0
    ok = bad_indep == 0 and bad_edges == 0 and dt < 60
    report(4, ok, f"graphs=20 draws=100 implied_independences={n_indep} "
                  f"max_abs_pcorr={worst_zero:.1e} edges={n_edges} "
                  f"weakest_edge_max_pcorr={weakest_edge:.2e} runtime={dt:.1f}s")
    assert ok


# -- criterion 5 ------------------------------------------------------------

def _spd(rng, n):
    a = rng.normal(size=(n, n))
    s = a @ a.T + n * np.eye(n)
    d = 1 / np.sqrt(np.diag(s))
    return s * d[:, None] * d[None, :]


def test_criterion_5_identities():
    rng = np.random.default_rng(5)
    err = {"eq1": 0.0, "eq2": 0.0, "eq3": 0.0, "ratio": 0.0}
    for _ in range(1000):
        s = _spd(rng, 3)
        err["eq1"] = max(err["eq1"], abs(cond_cov(s, 0, 1, [2])
                                         - (s[0, 1] - s[0, 2] * s[1, 2] / s[2, 2])))
    for _ in range(1000):
        k = _spd(rng, 3)  # unit diagonal, so sigma^{11} = 1
        err["eq2"] = max(err["eq2"], abs(marg_con(k, 1, 2, [0]) - (k[1, 2] - k[0, 1] * k[0, 2])))
    for _ in range(1000):
        s = _spd(rng, 3)
        rhs = regress_coeff(s, 0, 2, [1]) + regress_coeff(s, 0, 1, [2]) * regress_coeff(s, 1, 2)
        err["eq3"] = max(err["eq3"], abs(regress_coeff(s, 0, 2) - rhs))
    for _ in range(1000):
        s = _spd(rng, 5)
        c = [x for x in (1, 3, 4) if rng.random() < 0.5]
        beta = regress_coeff(s, 0, 2, c)
        ratio = cond_cov(s, 0, 2, c) / cond_cov(s, 2, 2, c)
        conc = regress_coeff_concentration(s, 0, 2, c)
        err["ratio"] = max(err["ratio"], abs(beta - ratio), abs(beta - conc))
    ok = max(err.values()) < IDENTITY_TOL
    report(5, ok, "max_abs_error " + " ".join(f"{k}={v:.1e}" for k, v in err.items())
                  + " (1000 matrices each)")
    assert ok


# -- criterion 6 ------------------------------------------------------------

def margin_consistent(g, m, c):
    lab = g.labels
    sg = summary_graph(g, TransformSpec([lab[i] for i in m], [lab[i] for i in c]))
    keep = [lab[i] for i in range(g.n) if i not in m and i not in c]
    cond = [lab[i] for i in c]
    count = 0
    for a, b, cc in pairwise_triples(keep):
        count += 1
        x = rg_separate(sg, IndependenceQuery(a, b, cc), witness=False).implied_independent
        y = rg_separate(g, IndependenceQuery(a, b, list(cc) + cond), witness=False) \
            .implied_independent
        if x != y:
            return False, count
    return True, count


def margin_check(exhaustive_five):
    transforms = queries = failures = 0
    for n in range(1, 5):
        for g in all_regression_graphs(n):
            for m, c in transform_specs(range(n)):
                ok, k = margin_consistent(g, m, c)
                transforms, queries, failures = transforms + 1, queries + k, failures + (not ok)
    five = list(all_regression_graphs(5))
    specs = list(transform_specs(range(5)))
    rng = random.Random(6)
    if exhaustive_five:
        work = [(g, s) for g in five for s in specs]
    else:
        # every graph under one transform, plus every transform for a sample of graphs
        work = [(g, rng.choice(specs)) for g in five]
        work += [(g, s) for g in rng.sample(five, 40) for s in specs]
    for g, (m, c) in work:
        ok, k = margin_consistent(g, m, c)
        transforms, queries, failures = transforms + 1, queries + k, failures + (not ok)
    return transforms, queries, failures


def test_criterion_6_summary_graphs():
    t0 = time.perf_counter()
    g3 = fx("child_development")
    sg = summary_graph(g3, TransformSpec(["Y8", "Y4"]))
    fig6 = labelled_edges(sg) == labelled_edges(fx("child_development_no_cognitive"))
    n_induced = len(induced_edges(g3, sg))
    sg7 = summary_graph(fx("three_node_dag"), TransformSpec(["3"]))
    doubles = [e for e in sg7.edges if e.kind is EdgeKind.DOUBLE]
    exhaustive = os.environ.get("REGGRAPH_EXHAUSTIVE") == "1"
    transforms, queries, failures = margin_check(exhaustive)
    dt = time.perf_counter() - t0
    ok = fig6 and n_induced == 0 and len(doubles) == 1 and failures == 0
    cover = "exhaustive" if exhaustive else "exhaustive <=4, seeded cover at 5"
    report(6, ok, f"reproduces_subgraph={fig6} induced={n_induced} double_edges={len(doubles)} "
                  f"transforms={transforms} ({cover}) queries={queries} mismatches={failures} "
                  f"runtime={dt:.1f}s")
    assert ok


# -- criterion 7 ------------------------------------------------------------

def test_criterion_7_indirect_confounding():
    g = fx("sequential_treatment")
    y, tp, tr, u = (g.index(x) for x in ("Y", "Tp", "Tr", "U"))
    s = sample_system(g, 0)
    true = s.coeffs[y, tp]
    gap = abs(regress_coeff(s.sigma, y, tp, [tr]) - true)
    restored = abs(regress_coeff(s.sigma, y, tp, [tr, u]) - true)
    reversal = None
    for seed in range(1000):
        d = sample_system(g, seed)
        if np.sign(regress_coeff(d.sigma, y, tp, [tr])) != np.sign(d.coeffs[y, tp]):
            reversal = seed
            break
    out = io.StringIO()
    run_cli(["confounding", "sequential_treatment", "--marginalize", "U",
             "--response", "Y", "--regressor", "Tp"], stdout=out)
    paths = [ln for ln in out.getvalue().splitlines() if ln.startswith("indirect=")]
    ok = gap > 1e-3 and restored < 1e-10 and reversal is not None and paths == ["indirect=Y-A<-Tp"]
    report(7, ok, f"distortion={gap:.3e} with_latent={restored:.1e} "
                  f"first_reversal_seed={reversal} paths={paths}")
    assert ok


# -- criterion 8 ------------------------------------------------------------

def _gaussian_triples(rng, n):
    """Generic triples, forks (1 _||_ 2 | 3) and colliders (1 _||_ 2)."""
    for _ in range(n):
        yield _spd(rng, 3)
    for kind in ("fork", "collider"):
        for _ in range(n // 10):
            b = rng.uniform(0.3, 1.0, 2) * rng.choice([-1, 1], 2)
            if kind == "fork":  # 3 -> 1, 3 -> 2
                s = np.array([[b[0] ** 2 + 1, b[0] * b[1], b[0]],
                              [b[0] * b[1], b[1] ** 2 + 1, b[1]],
                              [b[0], b[1], 1.0]])
            else:  # 1 -> 3 <- 2
                s = np.array([[1.0, 0, b[0]], [0, 1.0, b[1]],
                              [b[0], b[1], b[0] ** 2 + b[1] ** 2 + 1]])
            yield s


def test_criterion_8_singleton_transitivity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    n = violations = 0
    for s in _gaussian_triples(rng, 100_000):
        n += 1
        violations += check_singleton_transitivity(s, 0, 1, 2).violated
    grid = scan_binary_transitivity(step=0.05)
    dt = time.perf_counter() - t0
    ok = violations == 0 and grid.violations == 0
    report(8, ok, f"gaussian_triples={n} violations={violations} binary_tables={grid.tables} "
                  f"qualifying={grid.qualifying} violations={grid.violations} "
                  f"nearest_binary={grid.nearest:.2e} runtime={dt:.1f}s")
    assert ok


# -- criterion 9 ------------------------------------------------------------

DOT_SCRIPT = ("import sys; from reggraph.io import export_dot, fixture_names, load_fixture; "
              "sys.stdout.write(''.join(export_dot(load_fixture(n).graph) for n in fixture_names()))")


def test_criterion_9_round_trip():
    bad = []
    for name in fixture_names():
        doc = load_fixture(name)
        text = serialize(doc.graph, doc.expectations)
        again = parse_document(text)
        if again.graph != doc.graph or serialize(again.graph, again.expectations) != text:
            bad.append(name)
    runs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        runs.append(subprocess.run([sys.executable, "-c", DOT_SCRIPT], env=env, check=True,
                                   capture_output=True).stdout)
    in_process = "".join(export_dot(fx(n)) for n in fixture_names()).encode()
    stable = runs[0] == runs[1] == in_process
    ok = not bad and stable
    report(9, ok, f"fixtures={len(fixture_names())} round_trip_failures={bad or 'none'} "
                  f"dot_byte_stable={stable}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
