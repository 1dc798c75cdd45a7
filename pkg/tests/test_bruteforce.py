import pytest

from convedit.bruteforce import derive_program_bruteforce
from convedit.datagen import generate_all
from convedit.edits import UseCase
from convedit.engine import apply_program
from convedit.errors import BoundExceededError
from convedit.tokens import concat_turns


def derive_and_apply(context, followup, target, use_cases=None):
    seq = concat_turns(context.split(), followup.split())
    program = derive_program_bruteforce(seq, target.split(), use_cases)
    if program is None:
        return None
    return apply_program(seq, program).tokens


def test_derives_simple_steering():
    got = derive_and_apply("Play some jazz", "in my living room",
                           "Play some jazz in my living room")
    assert got == "Play some jazz in my living room".split()


def test_derives_substitution_with_deletions():
    got = derive_and_apply("How old is Homer Simpson", "What about Bart Simpson",
                           "How old is Bart Simpson")
    assert got == "How old is Bart Simpson".split()


def test_derives_dependent_pair():
    got = derive_and_apply(
        "Who is Homer Simpson's eldest doctor", "I said his eldest daughter",
        "Who is Homer Simpson's eldest daughter",
        use_cases={UseCase.ENTITY, UseCase.REPAIR})
    assert got == "Who is Homer Simpson's eldest daughter".split()


def test_unreachable_target_returns_none():
    seq = concat_turns("When does Rocket Sushi close".split(),
                       "How long does it take to drive there".split())
    # the second "to" cannot be produced: outputs are closed over input tokens
    target = "How long does it take to drive to Rocket Sushi".split()
    assert derive_program_bruteforce(seq, target) is None


def test_token_outside_vocabulary_is_unreachable():
    seq = concat_turns(["a", "b"], ["c"])
    assert derive_program_bruteforce(seq, ["a", "z"]) is None


def test_bound_exceeded():
    seq = concat_turns([f"c{i}" for i in range(20)], [f"f{i}" for i in range(10)])
    with pytest.raises(BoundExceededError):
        derive_program_bruteforce(seq, ["f0"])


def test_oracle_round_trip_on_generated_sample():
    data = generate_all(n_per_use_case=40, n_compositional=25, seed=13)
    for examples in data.values():
        for ex in examples:
            seq = concat_turns(ex.context, ex.followup)
            program = derive_program_bruteforce(seq, ex.rewrite, ex.use_cases)
            assert program is not None, ex.id
            assert apply_program(seq, program).tokens == ex.rewrite, ex.id
