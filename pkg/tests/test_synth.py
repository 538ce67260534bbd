import pytest

from plts.architecture import Architecture, ArchitectureError
from plts.automata import dualize_to_uct, ltl_to_nba
from plts.colored import ag_model_check, prompt_model_check
from plts.formula import RewriteError, colorize, negate, parse
from plts.machine import TransitionSystem, product_of, respects_scheduling
from plts.synth import (
    BoundFamily, EncodingError, Sat, Script, SolverError, Status, Unsat, decode_model,
    encode_architectural, encode_global, encode_points, enumerate_bounds,
    realized_prompt_bound, solve, synth_async_ag, synth_sync_pltl, synth_sync_prompt,
    uct_states,
)
from plts.synth.smt import parse_answer

SERVER = Architecture.build(["req"], {"p": (["req"], ["resp"])})
SINGLE = Architecture.build([], {"p": ([], ["o"])})


class TestBounds:
    def test_order(self):
        got = [str(b) for b in enumerate_bounds(["p", "q"], 4)]
        assert got == ["(1,1)", "(1,2)", "(2,1)", "(1,3)", "(2,2)", "(3,1)"]
        assert [str(b) for b in enumerate_bounds(["p"], 3)] == ["(1)", "(2)", "(3)"]
        assert [str(b) for b in enumerate_bounds(["p", "q"], 4, cap_each=2)] == [
            "(1,1)", "(1,2)", "(2,1)", "(2,2)"]
        with pytest.raises(ValueError):
            enumerate_bounds(["p", "q", "r"], 2)

    def test_mixed_radix(self):
        b = BoundFamily.of({"p": 2, "q": 3})
        assert b.total == 6 and b.weight("p") == 3 and b.weight("q") == 1
        assert [b.digits(s) for s in (1, 4, 6)] == [
            {"p": 1, "q": 1}, {"p": 2, "q": 1}, {"p": 2, "q": 3}]
        assert all(b.compose(b.digits(s)) == s for s in range(1, 7))
        with pytest.raises(ValueError):
            BoundFamily.of({"p": 0})


@pytest.mark.usefixtures("needs_solver")
class TestSolver:
    def test_trivial(self):
        assert isinstance(solve("(assert false)"), Unsat)
        assert isinstance(solve("(assert true)"), Sat)

    def test_values(self):
        ans = solve("(declare-fun x () Int)\n(assert (= x (- 3)))\n(check-sat)\n(get-value (x))\n")
        assert isinstance(ans, Sat) and ans.values == {"x": -3}

    def test_missing_binary(self):
        with pytest.raises(SolverError):
            solve("(assert true)", command="definitely-not-a-solver-binary")

    def test_parse_answer(self):
        ans = parse_answer("sat\n(((f 1 0) 2)\n ((g 1) true))\n")
        assert ans.values == {"(f 1 0)": 2, "(g 1)": True}
        with pytest.raises(SolverError):
            parse_answer("")
        with pytest.raises(SolverError):
            parse_answer('(error "boom")')


def _uct(formula, inputs, outputs):
    n = ltl_to_nba(negate(formula), props=sorted(inputs + outputs))
    return dualize_to_uct(n, inputs, outputs)


@pytest.mark.usefixtures("needs_solver")
class TestEncoding:
    def test_global_single_state(self):
        u = _uct(parse("G resp"), ["req"], ["resp"])
        sc = encode_global(u, 1, ["req"], ["resp"])
        sc.queries.append("(l.resp 1)")
        ans = solve(sc)
        assert isinstance(ans, Sat) and ans.values["(l.resp 1)"] is True
        u = _uct(parse("G resp & F !resp"), ["req"], ["resp"])
        assert isinstance(solve(encode_global(u, 2, ["req"], ["resp"])), Unsat)

    def test_global_checks(self):
        u = _uct(parse("G resp"), ["req"], ["resp"])
        with pytest.raises(EncodingError):
            encode_global(u, 0, ["req"], ["resp"])
        with pytest.raises(EncodingError):
            encode_global(u, 1, ["req"], ["other"])
        with pytest.raises(EncodingError):
            encode_global(u, 1, ["req"], ["resp"], states=[])

    def test_decode_round_trip(self):
        a = Architecture.build(["x"], {"p": (["x"], ["y"]), "q": (["y"], ["z"])})
        systems = {
            "p": TransitionSystem(["x"], ["y"], [[0, 1], [1, 0]], [set(), {"y"}]),
            "q": TransitionSystem(["y"], ["z"], [[0, 0]], [{"z"}]),
        }
        bounds = BoundFamily.of({"p": 2, "q": 1})
        decoded, notes = decode_model(encode_points(systems), a, bounds)
        assert decoded == systems and notes == []
        # fixing the local functions keeps the architectural constraints satisfiable
        # fixing the local functions determines the global ones as the product
        sc = Script()
        sc.declare("delta", ["Int", "Int"], "Int")
        for o in ("y", "z"):
            sc.declare(f"l.{o}", ["Int"], "Bool")
        sc.extend(encode_architectural(a, bounds))
        for key, v in encode_points(systems).items():
            sc.add(f"(= {key} {str(v).lower()})")
        sc.queries += [f"(delta {s} {i})" for s in (1, 2) for i in (0, 1)]
        sc.queries += [f"(l.{o} {s})" for o in ("y", "z") for s in (1, 2)]
        ans = solve(sc)
        assert isinstance(ans, Sat)
        product = product_of([systems["p"], systems["q"]])
        for s in (0, 1):
            assert {o for o in ("y", "z") if ans.values[f"(l.{o} {s + 1})"]} == product.labels[s]
            for i in (0, 1):
                assert ans.values[f"(delta {s + 1} {i})"] == product.delta[s][i] + 1

    def test_decode_defaults(self):
        systems, notes = decode_model({}, SINGLE, BoundFamily.of({"p": 1}))
        assert systems["p"].delta == ((0,),) and len(notes) == 2

    def test_architectural_checks(self):
        with pytest.raises(EncodingError):
            encode_architectural(SERVER, BoundFamily.of({"q": 1}))

    def test_monotone_in_bounds(self):
        # a solution at a bound family stays a solution when any bound grows
        phi = parse("G Fp resp & G Fp !resp")
        a = Architecture.build(["req"], {"p": (["req"], ["resp"]), "p_r": ([], ["r"])})
        inputs, outputs = ["req"], ["r", "resp"]
        u = dualize_to_uct(ltl_to_nba(negate(colorize(phi, "r")), props=inputs + outputs),
                           inputs, outputs)
        states = uct_states(u, 1)

        def sat(values):
            b = BoundFamily(tuple(zip(a.processes, values)))
            sc = encode_global(u, b.total, inputs, outputs, states)
            sc.extend(encode_architectural(a, b, asynchronous=False))
            return isinstance(solve(sc), Sat)

        assert not sat((1, 2)) and sat((2, 2))
        assert sat((3, 2)) and sat((2, 3))


class TestRealizedBound:
    def test_examples(self):
        toggler = TransitionSystem([], ["r"], [[1], [0]], [{"r"}, set()])
        assert realized_prompt_bound(toggler) == 2
        pairs = TransitionSystem([], ["r"], [[1], [2], [3], [0]], [{"r"}, {"r"}, set(), set()])
        assert realized_prompt_bound(pairs) == 4
        stem = TransitionSystem([], ["r"], [[1], [2], [1]], [set(), set(), {"r"}])
        # the stem block of length two counts
        assert realized_prompt_bound(stem) == 4

    def test_errors(self):
        with pytest.raises(ValueError):
            realized_prompt_bound(TransitionSystem([], ["r"], [[0]], [{"r"}]))
        with pytest.raises(ValueError):
            realized_prompt_bound(TransitionSystem(["a"], ["r"], [[1, 1], [0, 0]], [{"r"}, set()]))


@pytest.mark.usefixtures("needs_solver")
class TestSyncDrivers:
    @pytest.mark.parametrize("text, bounds", [
        ("G resp", "(1,2)"), ("G(req -> Fp resp)", "(1,2)"), ("G Fp resp & G Fp !resp", "(2,2)"),
    ])
    def test_realizable(self, text, bounds):
        res = synth_sync_prompt(SERVER, parse(text), 4)
        assert res.status is Status.REALIZED and str(res.bounds) == bounds
        product = product_of([res.systems["p"], res.systems["p_r"]])
        assert prompt_model_check(product_of([res.systems["p"]]), parse(text))
        assert product.size == res.bounds.total
        assert res.realized_bound <= 2 * res.bounds["p_r"]
        assert [x.answer for x in res.attempts][-1] == "sat"

    def test_unrealizable_needs_prediction(self):
        res = synth_sync_prompt(SERVER, parse("G((resp -> X req) & (!resp -> X !req))"), 3)
        assert res.status is Status.EXHAUSTED
        assert [x.bounds for x in res.attempts] == ["(1,1)", "(1,2)", "(2,1)"]

    def test_input_errors(self):
        with pytest.raises(ArchitectureError):
            synth_sync_prompt(SERVER, parse("Fp a"), 3)
        with pytest.raises(RewriteError):
            synth_sync_prompt(SERVER, parse("F<=x resp"), 3)

    def test_pltl(self):
        res = synth_sync_pltl(SERVER, parse("G(req -> F<=x resp) & G<=y true"), 4)
        assert res.status is Status.REALIZED
        assert res.valuation == {"x": res.realized_bound, "y": 0}
        res = synth_sync_pltl(SERVER, parse("G<=y resp"), 3)
        assert res.valuation == {"y": 0}
        with pytest.raises(RewriteError):
            synth_sync_pltl(SERVER, parse("F<=x resp & G<=x req"), 3)

    def test_scripts_are_reproducible(self):
        one = synth_sync_prompt(SERVER, parse("G(req -> Fp resp)"), 3)
        two = synth_sync_prompt(SERVER, parse("G(req -> Fp resp)"), 3)
        assert one.script == two.script and one.systems == two.systems


@pytest.mark.usefixtures("needs_solver")
class TestAsyncDriver:
    def test_scheduled_alternation(self):
        phi, psi = parse("G Fp sched_p"), parse("G Fp o & G Fp !o")
        res = synth_async_ag(SINGLE, phi, psi, 3)
        assert res.status is Status.REALIZED and str(res.bounds) == "(2)"
        ts = res.systems["p"]
        assert respects_scheduling(ts, "sched_p")
        assert ag_model_check(ts, phi, psi)
        # lazily grounded: the failed family needed more than one round
        assert res.attempts[0].answer == "unsat" and res.attempts[0].iterations > 1
        assert res.attempts[0].grounded > 1

    def test_iteration_cap(self):
        res = synth_async_ag(SINGLE, parse("G Fp sched_p"), parse("G Fp o & G Fp !o"), 3,
                             max_iterations=1)
        assert res.status is Status.SOLVER_ERROR
        assert res.attempts[-1].answer == "iteration limit"
        assert "refinement limit reached at (1)" in res.notes[0]

    def test_rejects_parameterized(self):
        with pytest.raises(RewriteError):
            synth_async_ag(SINGLE, parse("F<=x o"), parse("true"), 2)
