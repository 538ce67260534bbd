import json
import random

import pytest

from generators import random_architecture
from plts.architecture import (
    A1, A2, Architecture, ArchitectureError, InformationFork, async_lift, color_extend,
    find_information_fork, is_information_fork, is_weakly_ordered, validate, violations,
)


def test_a1_is_valid():
    validate(A1)
    validate(A2)


@pytest.mark.parametrize("a, message", [
    (Architecture.build([], {"p": ([], ["c"]), "q": ([], ["c"])}), "outputs not disjoint"),
    (Architecture.build([], {"p": (["x"], ["c"])}), "dangling input"),
])
def test_invalid(a, message):
    with pytest.raises(ArchitectureError, match=message):
        validate(a)


def test_env_inputs_rejected():
    a = Architecture("env", ("p",), {"env": {"c"}, "p": set()}, {"p": {"c"}})
    assert any("environment has inputs" in v for v in violations(a))


def test_color_extend():
    ar = color_extend(A1, "r")
    assert ar.processes == ("p1", "p2", "p_r")
    assert ar.inputs["p_r"] == frozenset() and ar.outputs["p_r"] == {"r"}
    both = color_extend(ar, "rp")
    assert both.processes[-2:] == ("p_r", "p_rp")
    validate(both)
    with pytest.raises(ArchitectureError):
        color_extend(A1, "c")


def test_async_lift():
    a = async_lift(A1)
    assert a.outputs["env"] == {"a", "b", "sched_p1", "sched_p2"}
    assert a.inputs["p1"] == {"a", "sched_p1"}
    validate(a)
    one = async_lift(Architecture.build([], {"p": ([], ["o"])}))
    assert one.outputs["env"] == {"sched_p"}
    with pytest.raises(ArchitectureError):
        async_lift(a)


def test_fork_examples():
    fork = find_information_fork(A1)
    assert fork == InformationFork(frozenset({"env"}), frozenset(), "p1", "p2")
    assert str(fork) == "({env}, {}, p1, p2)"
    assert find_information_fork(A2) is None
    assert not is_weakly_ordered(A1) and is_weakly_ordered(A2)
    assert is_weakly_ordered(Architecture.build(["a"], {"p": (["a"], ["b"])}))


def test_fork_through_intermediate_process():
    # env -> m -> p1 and env -> p2: p1 learns x through m, p2 sees y only
    a = Architecture.build(["x", "y"], {"m": (["x"], ["z"]), "p1": (["z"], ["c"]),
                                        "p2": (["y"], ["d"])})
    fork = find_information_fork(a)
    assert fork is not None and is_information_fork(a, fork)


def test_json_round_trip(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(A1.to_json()))
    assert Architecture.load(path) == A1
    with pytest.raises(ArchitectureError):
        Architecture.from_json({"env": {"name": "env"}, "processes": [{"name": "p", "outputs": ["1x"]}]})
    with pytest.raises(ArchitectureError):
        Architecture.from_json({"processes": []})


def test_random_forks_reverify(seed):
    rng = random.Random(seed)
    for _ in range(60):
        a = random_architecture(rng, rng.randint(1, 5))
        validate(a)
        validate(color_extend(a, "r"))
        validate(async_lift(a))
        fork = find_information_fork(a)
        if fork is not None:
            assert fork.p != fork.p2
            assert not fork.variables & (a.inputs[fork.p] | a.inputs[fork.p2])
            assert is_information_fork(a, fork)
        assert (fork is None) == (find_information_fork(color_extend(a, "r")) is None)
