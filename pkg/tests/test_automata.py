import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from generators import formulas, random_ts, words
from plts.automata import (
    Annotation, AutomatonError, build_n_pump, check_acceptance, compose_spec_pump,
    dualize_to_uct, ltl_to_nba, nba_accepts, run_graph, simplify_nba, valid_annotation,
)
from plts.colored import ltl_counterexample
from plts.formula import TRUE, evaluate, lasso, negate, parse
from plts.machine import TransitionSystem


class TestNBA:
    @pytest.mark.parametrize("text, states, empty", [
        ("F a", 2, False), ("true", 1, False), ("G false", 1, True), ("a U b", 2, False),
    ])
    def test_examples(self, text, states, empty):
        n = ltl_to_nba(parse(text))
        assert n.size == states and n.is_empty() == empty

    def test_rejects_prompt(self):
        with pytest.raises(AutomatonError):
            ltl_to_nba(parse("Fp a"))
        with pytest.raises(AutomatonError):
            ltl_to_nba(parse("a"), props=["b"])

    def test_wider_alphabet_ignores_extra_props(self):
        n = ltl_to_nba(parse("G F a"), props=["a", "z"])
        assert nba_accepts(n, lasso([], [{"z"}, {"a"}]))
        assert not nba_accepts(n, lasso([{"a"}], [{"z"}]))

    @given(formulas(max_leaves=5), words())
    def test_agrees_with_evaluate(self, f, w):
        n = ltl_to_nba(f, props=["a", "b"])
        assert nba_accepts(n, w) == evaluate(w, f)

    @given(formulas(max_leaves=5), words())
    def test_simplify_preserves_language(self, f, w):
        n = ltl_to_nba(f, props=["a", "b"])
        s = simplify_nba(n)
        assert s.size <= n.size
        assert nba_accepts(s, w) == nba_accepts(n, w)

    def test_deterministic_numbering(self):
        f = parse("G(a -> X (b U a)) & F G b")
        assert ltl_to_nba(f).edges == ltl_to_nba(f).edges


# reference for the pumping language: r'-blocks are cut at r'-change points,
# and each complete block needs j < j' < j'' with v_j = v_j'' and the r-value
# at j' differing from the one at j

def _pumpable(word, loop_start) -> bool:
    stem, loop = len(word[:loop_start]), len(word) - loop_start
    horizon = stem + 3 * loop

    def at(n):
        return word[n] if n < len(word) else word[loop_start + (n - loop_start) % loop]

    rp = [at(n)[1] >> 1 & 1 for n in range(horizon)]
    starts = [0] + [n for n in range(1, horizon) if rp[n] != rp[n - 1]]
    for i, i2 in zip(starts, starts[1:]):
        if i > stem + loop:
            break
        block = [at(n) for n in range(i, i2)]
        if not any(block[j][0] == block[j2][0] and block[j1][1] & 1 != block[j][1] & 1
                   for j in range(len(block)) for j1 in range(j + 1, len(block))
                   for j2 in range(j1 + 1, len(block))):
            return False
    return True


class TestPump:
    def test_size(self):
        assert build_n_pump(["u", "v"]).size == 19
        assert len(build_n_pump(["u", "v"]).states) == 19
        assert build_n_pump(range(5)).size == 43

    def test_phases(self):
        p = build_n_pump(["u", "v"])
        # u (r), v (¬r) flips r, u repeats, then r' changes
        good = [("u", 1), ("v", 0), ("u", 0), ("v", 2)]
        assert p.accepts(good + [("v", 2)] * 0 + [("u", 2)], 4)
        # r' changes before any vertex repeats across an r-flip
        assert not p.accepts([("u", 1), ("v", 0), ("u", 2)], 2)
        # no r'-change at all: nothing to pump
        assert p.accepts([("u", 0)], 0)

    def test_unknown_vertex(self):
        with pytest.raises(AutomatonError):
            build_n_pump(["u"]).step(("s0",), ("w", 0))
        with pytest.raises(AutomatonError):
            build_n_pump([])

    @pytest.mark.parametrize("vertices", [1, 2, 3])
    def test_matches_reference(self, seed, vertices):
        rng = random.Random(seed + vertices)
        vs = list(range(vertices))
        p = build_n_pump(vs)
        letters = [(v, x) for v in vs for x in range(4)]
        hits = 0
        for _ in range(2500):
            total = rng.randint(1, 6)
            word = [rng.choice(letters) for _ in range(total)]
            start = rng.randrange(total)
            got = p.accepts(word, start)
            assert got == _pumpable(word, start), (word, start)
            hits += got
        assert 0 < hits < 2500

    def test_matches_reference_exhaustively_small(self):
        p = build_n_pump([0, 1])
        letters = [(v, x) for v in (0, 1) for x in range(4)]
        for total in range(1, 4):
            for word in product(letters, repeat=total):
                for start in range(total):
                    assert p.accepts(list(word), start) == _pumpable(list(word), start)


class TestCompose:
    def test_size(self):
        spec = ltl_to_nba(parse("F r"), props=["r", "rp"])
        n = compose_spec_pump(spec, ["x0"])
        assert spec.size == 2
        assert n.pump.size == 19
        assert n.size == spec.size * n.pump.size == 38

    def test_needs_colors(self):
        with pytest.raises(AutomatonError):
            compose_spec_pump(ltl_to_nba(parse("a")), ["x"])

    def test_follows_pump_language(self, rng):
        # with a trivially accepting spec the vertex is just the implementation state
        spec = ltl_to_nba(TRUE, props=["r", "rp"])
        n = compose_spec_pump(spec, [0, 1])
        names = {0: set(), 1: {"r"}, 2: {"rp"}, 3: {"r", "rp"}}
        for _ in range(600):
            total = rng.randint(1, 6)
            word = [(rng.randrange(2), rng.randrange(4)) for _ in range(total)]
            start = rng.randrange(total)
            letters = [(names[x], v) for v, x in word]
            assert _accepts(n, letters, start) == _pumpable(word, start)


def _accepts(n, letters, start) -> bool:
    from plts.graphs import is_nontrivial, tarjan

    def succ(node):
        i, s = node
        j = i + 1 if i + 1 < len(letters) else start
        return [(j, t) for t in n.step(s, letters[i])]

    return any(is_nontrivial(c, succ) and any(n.is_accepting(s) for _, s in c)
               for c in tarjan([(0, n.init)], succ))


def _toggler():
    return TransitionSystem(["a"], ["y"], [[1, 1], [0, 0]], [{"y"}, set()])


class TestUCT:
    def test_directions(self):
        u = dualize_to_uct(ltl_to_nba(parse("G(a -> y)"), props=["a", "y"]), ["a"], ["y"])
        assert u.directions == ("a",) and u.outputs == ("y",) and u.n_directions == 2
        assert not u.state_aware
        with pytest.raises(AutomatonError):
            dualize_to_uct(ltl_to_nba(parse("a & y")), [], ["y"])

    @pytest.mark.parametrize("text, holds", [
        ("G F y", True), ("G y", False), ("G(y -> X !y)", True), ("F G !y", False),
        ("G(a -> y)", False),
    ])
    def test_examples(self, text, holds):
        f = parse(text)
        u = dualize_to_uct(ltl_to_nba(negate(f), props=["a", "y"]), ["a"], ["y"])
        lam = check_acceptance(u, _toggler())
        assert (lam is not None) == holds
        if lam is not None:
            assert valid_annotation(u, _toggler(), lam)

    @given(formulas(atoms=("a", "y"), max_leaves=5), st.integers(0, 10_000))
    def test_duality_against_model_checking(self, f, seed):
        ts = random_ts(random.Random(seed), ["a"], ["y"], random.Random(seed).randint(1, 3))
        u = dualize_to_uct(ltl_to_nba(negate(f), props=["a", "y"]), ["a"], ["y"])
        assert (check_acceptance(u, ts) is None) == (ltl_counterexample(ts, f) is not None)

    def test_run_graph(self):
        u = dualize_to_uct(ltl_to_nba(parse("F !y"), props=["a", "y"]), ["a"], ["y"])
        g = run_graph(u, _toggler())
        assert g.root == (u.init, 0)
        assert all(w in g.edges for v in g.vertices for w in g.successors(v))

    def test_annotation_counts_rejecting_chain(self):
        # y holds at step 0 and 2 before settling: two rejecting visits on the only path
        ts = TransitionSystem([], ["y"], [[1], [2], [3], [3]], [{"y"}, set(), {"y"}, set()])
        u = dualize_to_uct(ltl_to_nba(parse("G F y"), props=["y"]), [], ["y"])
        lam = check_acceptance(u, ts)
        assert lam is not None and lam.max == 2
        assert check_acceptance(u, TransitionSystem([], ["y"], [[0]], [{"y"}])) is None

    def test_perturbed_annotation_is_invalid(self):
        # the computed annotation is the least one: lowering any non-root
        # value or dropping any vertex breaks it
        u = dualize_to_uct(ltl_to_nba(parse("G F y"), props=["a", "y"]), ["a"], ["y"])
        ts = TransitionSystem(["a"], ["y"], [[1, 2], [2, 2], [2, 2]], [{"y"}, {"y"}, set()])
        lam = check_acceptance(u, ts)
        assert lam is not None and valid_annotation(u, ts, lam) and lam.max >= 1
        root = (u.init, ts.init)
        for v, val in lam.values.items():
            dropped = Annotation({w: x for w, x in lam.values.items() if w != v})
            assert not valid_annotation(u, ts, dropped)
            if v != root and val > 0:
                assert not valid_annotation(u, ts, Annotation({**lam.values, v: val - 1}))
        assert valid_annotation(u, ts, Annotation({w: x + 1 for w, x in lam.values.items()}))
