"""Acceptance suite: one test per criterion, each with its runtime budget.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
[PASS]/[FAIL] line per criterion.
"""
import itertools
import random
import time
from functools import lru_cache

import pytest

from higman.endo import (
    CounterexampleFailure,
    EndoTable,
    counterexample_table,
    evaluate,
    factoring_depth,
    first_nontrivial,
    verify_counterexample,
    verify_null_convergence,
)
from higman.fmap import compose, is_identity, standard_projection
from higman.invsystem import (
    classify,
    normalize,
    random_automorphism,
    random_system,
    standard_system,
    tower,
    validate,
)
from higman.prolimit import ZERO, Dyadic, embed, group_op, stable_distance, truncate
from higman.stallings import (
    contains,
    express_in_basis,
    fold,
    invert_bijective,
    is_nielsen_reduced,
    nielsen_reduce,
)
from higman.word import IDENTITY, Word, invert, multiply, project, reduce, substitute

from conftest import random_word

criterion = pytest.mark.criterion


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


# --- 1 ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def any_order_results(seq):
    pairs = [i for i in range(len(seq) - 1) if seq[i] == -seq[i + 1]]
    if not pairs:
        return frozenset([seq])
    out = set()
    for i in pairs:
        out |= any_order_results(seq[:i] + seq[i + 2 :])
    return frozenset(out)


@criterion(1, "reduction matches any-order cancellation, all sequences of length <= 6 over rank 3")
def test_reduction_oracle_equivalence():
    alphabet = (1, -1, 2, -2, 3, -3)
    cases = 0
    with Budget(5):
        for n in range(7):
            for seq in itertools.product(alphabet, repeat=n):
                results = any_order_results(seq)
                assert len(results) == 1, seq
                assert reduce(seq).letters == next(iter(results)), seq
                cases += 1
    assert cases == sum(6**n for n in range(7))


# --- 2 ---------------------------------------------------------------------


@criterion(2, "projection coherence for 1 <= k <= j <= i <= 8")
def test_projection_coherence():
    with Budget(1):
        for i in range(1, 9):
            for j in range(1, i + 1):
                for k in range(1, j + 1):
                    assert compose(standard_projection(i, j), standard_projection(j, k)) == standard_projection(i, k)


# --- 3 ---------------------------------------------------------------------


@criterion(3, "metric axioms and bi-invariance on 10,000 stable triples, exact")
def test_metric_axioms():
    rng = random.Random(3)
    one = embed(IDENTITY)
    with Budget(10):
        for _ in range(10_000):
            x, y, z = (embed(random_word(rng, 5, 6)) for _ in range(3))
            dxy, dyx = stable_distance(x, y), stable_distance(y, x)
            assert dxy == dyx
            assert (dxy == ZERO) == (x == y)
            assert stable_distance(x, z) <= dxy + stable_distance(y, z)
            assert stable_distance(z * x, z * y) == dxy
            assert stable_distance(x * z, y * z) == dxy
        assert stable_distance(embed(Word.generator(1)), one) == Dyadic(1)
        assert stable_distance(embed(Word.generator(2)), one) == Dyadic(1, 1)


# --- 4 ---------------------------------------------------------------------


@criterion(4, "200 random systems normalize with every square exact and |K_n| = r_n - r_{n-1}")
def test_normalization_fuzz():
    rng = random.Random(4)
    with Budget(30):
        for _ in range(200):
            s = random_system(rng, rng.randint(1, 6), max_rank=8, max_len=12)
            assert validate(s) == []
            assert all(len(x) <= 12 for f in s.maps for x in f.images)
            norm = normalize(s)
            for n in range(2, s.levels + 1):
                pi = s.connecting(n)
                prev, cur = norm.level_isos[n - 2], norm.level_isos[n - 1]
                for k in range(1, s.rank(n) + 1):
                    x = Word.generator(k)
                    lhs = substitute(substitute(x, pi.images), prev.images)
                    rhs = project(substitute(x, cur.images), s.rank(n - 1))
                    assert lhs == rhs
                assert norm.signature[n - 1][1] == s.rank(n) - s.rank(n - 1)


# --- 5 ---------------------------------------------------------------------


@criterion(5, "standard prefix is UniversalG; automorphism towers are FreeOfRank(r) with inverses")
def test_classification_dichotomy():
    rng = random.Random(5)
    with Budget(2):
        assert classify(standard_system(8)).kind == "UniversalG"
        for r in range(1, 6):
            s = tower(random_automorphism(rng, r, moves=10), 6)
            c = classify(s)
            assert (c.kind, c.rank) == ("FreeOfRank", r)
            for n in range(2, s.levels + 1):
                f = s.connecting(n)
                g = invert_bijective(f)
                assert is_identity(compose(f, g)) and is_identity(compose(g, f))
            assert normalize(s).signature == ((r, 0),) * s.levels


# --- 6 ---------------------------------------------------------------------


def _word_above(rng, n, top, max_len=4):
    if n >= top:
        return IDENTITY
    return Word([rng.choice([1, -1]) * rng.randint(n + 1, top) for _ in range(rng.randint(0, max_len))])


@criterion(6, "counterexample at J = 24: null convergence, relations, factoring, continuity, tamper")
def test_counterexample_verification():
    J = 24
    rng = random.Random(6)
    with Budget(10):
        report = verify_counterexample(J)
        assert set(range(1, 6)) <= set(report.relation_indices)
        t = counterexample_table(J + 2)
        assert verify_null_convergence(t)[:J] == tuple(n + 2 for n in range(1, J + 1))
        for j in range(1, J + 1):
            assert first_nontrivial(t.image(j)) >= j - 2
        n_of = {i: factoring_depth(t, i) for i in range(1, 21)}
        assert all(n_of[i] <= i + 2 for i in n_of)
        for _ in range(1000):
            i = rng.randint(1, 20)
            n = n_of[i]
            g = random_word(rng, J, 8)
            h = multiply(multiply(_word_above(rng, n, J), g), _word_above(rng, n, J))
            x, y = truncate(embed(g), J + 2), truncate(embed(h), J + 2)
            assert x.coords[:n] == y.coords[:n]
            assert evaluate(t, x, i) == evaluate(t, y, i)
        images = list(t.images)
        images[5], images[7] = images[7], images[5]
        with pytest.raises(CounterexampleFailure) as info:
            verify_counterexample(J, EndoTable(tuple(images), 2))
        assert info.value.check.startswith("relation")


# --- 7 ---------------------------------------------------------------------


@criterion(7, "extension is a homomorphism on 500 random stable pairs")
def test_extension_homomorphism():
    J = 24
    t = counterexample_table(J + 2)
    rng = random.Random(7)
    with Budget(10):
        for _ in range(500):
            g, h = random_word(rng, J, 8), random_word(rng, J, 8)
            x, y = truncate(embed(g), J + 2), truncate(embed(h), J + 2)
            lhs = evaluate(t, group_op(x, y), J)
            rhs = group_op(evaluate(t, x, J), evaluate(t, y, J))
            assert lhs == rhs
            # and both agree with substituting the image words directly
            direct = substitute(multiply(g, h), [e.word for e in t.images])
            assert lhs == truncate(embed(direct), J)


# --- 8 ---------------------------------------------------------------------


def reduced_words(rank, max_len, min_len=0):
    out, frontier = ([IDENTITY] if min_len == 0 else []), [()]
    letters = [s * k for k in range(1, rank + 1) for s in (1, -1)]
    for n in range(1, max_len + 1):
        frontier = [t + (x,) for t in frontier for x in letters if not t or t[-1] != -x]
        if n >= min_len:
            out += [Word(t) for t in frontier]
    return out


def stallings_corpus():
    """Every 33rd unordered pair of rank-2 words of length 1..3, against every
    reduced rank-2 target of length <= 6."""
    gens = reduced_words(2, 3, min_len=1)
    pairs = list(itertools.combinations(gens, 2))[::33]
    return pairs, reduced_words(2, 6)


def products_up_to(gens, factors):
    signed = [g for g in gens if g] + [invert(g) for g in gens if g]
    reached, layer = {IDENTITY}, {IDENTITY}
    for _ in range(factors):
        layer = {multiply(a, s) for a in layer for s in signed}
        reached |= layer
    return reached


def complete_membership(gens, max_len):
    """All subgroup elements of length <= max_len.  In a Nielsen-reduced basis
    a reduced product of t factors has length >= t, so products of at most
    max_len factors reach every such element."""
    basis, _ = nielsen_reduce(gens, 2)
    assert is_nielsen_reduced(basis)
    letters = [b for b in basis if b] + [invert(b) for b in basis if b]
    out = {IDENTITY}
    frontier = [((), IDENTITY)]
    for _ in range(max_len):
        nxt = []
        for path, value in frontier:
            for i, b in enumerate(letters):
                if path and letters[path[-1]] == invert(b):
                    continue
                v = multiply(value, b)
                nxt.append((path + (i,), v))
                if len(v) <= max_len:
                    out.add(v)
        frontier = nxt
    return out


@criterion(8, "folding membership agrees with <= 4-factor products on the rank-2 corpus")
def test_stallings_oracle_equivalence():
    pairs, targets = stallings_corpus()
    assert len(pairs) * len(targets) >= 10_000
    fold_only, oracle_only, example = 0, 0, None
    with Budget(30):
        for gens in pairs:
            graph = fold(list(gens), 2)
            oracle = products_up_to(gens, 4)
            for target in targets:
                by_fold, by_oracle = contains(graph, target), target in oracle
                if by_fold and not by_oracle:
                    fold_only += 1
                    example = example or (gens, target)
                oracle_only += by_oracle and not by_fold
    assert oracle_only == 0
    assert fold_only == 0, (
        f"{fold_only} of {len(pairs) * len(targets)} members need more than 4 factors, "
        f"e.g. {example[1]} in <{', '.join(map(str, example[0]))}>"
    )


def test_stallings_disagreements_are_oracle_misses():
    """Companion to criterion 8: every case where folding says member and the
    4-factor oracle does not has an explicit witness, and folding agrees
    exactly with a complete membership oracle on the whole corpus."""
    pairs, targets = stallings_corpus()
    misses = 0
    for gens in pairs:
        graph = fold(list(gens), 2)
        oracle = products_up_to(gens, 4)
        complete = complete_membership(list(gens), 6)
        assert oracle <= complete | {w for w in oracle if len(w) > 6}
        for target in targets:
            member = contains(graph, target)
            assert member == (target in complete), (gens, target)
            if member and target not in oracle:
                x = express_in_basis(list(gens), target, 2)
                assert substitute(x, list(gens)) == target
                misses += 1
    assert misses > 0
