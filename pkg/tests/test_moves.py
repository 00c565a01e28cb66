import itertools
import random

import pytest

from mixbraid import garside
from mixbraid.invariants import homology_functional, link_invariant, winding_profile
from mixbraid.moves import (
    MoveCertificate,
    MoveStep,
    StepError,
    apply_l_move,
    apply_step,
    destabilize,
    find_destabilizations,
    is_allowed_loop_conjugator,
    label_flip_conjugator,
    maximal_loop,
    omega_commute,
    sigma_conjugate,
    stabilize,
)
from mixbraid.randomwords import random_word
from mixbraid.words import BraidWord, WordError, b_to_a, parse_word


def W(text):
    return parse_word(text)


def test_l_move_degenerates_to_stabilization():
    assert apply_l_move(W("g=1 n=2; s1"), 1, 3, 1, "o") == W("g=1 n=3; s1 s2")
    rng = random.Random(1)
    for _ in range(50):
        u = random_word(2, 2, 6, rng)
        split = rng.randint(0, len(u.units()))
        for kind in "ou":
            s = rng.choice((1, -1))
            assert apply_l_move(u, split, u.n + 1, s, kind) == stabilize(u, split, s)


def test_l_move_frozen_values():
    # the displayed formula, with the middle block read downward from n-1 to i
    u = W("g=1 n=1; a1")
    assert apply_l_move(u, 1, 1, 1, "o") == W("g=1 n=2; s1^-1 a1 s1^2")
    assert apply_l_move(u, 0, 1, 1, "o") == W("g=1 n=2; a1 s1")
    assert apply_l_move(u, 1, 1, 1, "u") == W("g=1 n=2; s1 a1")
    assert apply_l_move(W("g=1 n=2; a1 s1"), 1, 1, -1, "o") == W("g=1 n=3; s1^-1 s2^-1 a1 s1^-1 s2^-1 s1^2 s2 s1")


def test_l_move_bad_index():
    with pytest.raises(WordError):
        apply_l_move(W("g=1 n=2; s1"), 1, 4, 1, "o")


def test_stabilize_examples():
    assert stabilize(W("g=1 n=1;"), 0, 1) == W("g=1 n=2; s1")
    assert stabilize(W("g=1 n=1; a1"), 0, -1) == W("g=1 n=2; s1^-1 a1")
    assert stabilize(W("g=1 n=1; a1"), 1, 1) == W("g=1 n=2; a1 s1")


def test_destabilizations():
    assert find_destabilizations(W("g=1 n=2; a1 s1")) == [(1, 1)]
    assert destabilize(W("g=1 n=2; a1 s1"), 1, 1) == W("g=1 n=1; a1")
    assert destabilize(W("g=1 n=2; s1"), 0, 1) == W("g=1 n=1;")
    assert find_destabilizations(W("g=1 n=2; a1 s1 a1 s1")) == []


def test_stabilize_then_destabilize_is_identity():
    rng = random.Random(2)
    for _ in range(200):
        u = random_word(2, rng.randint(1, 3), 8, rng)
        split = rng.randint(0, len(u.units()))
        s = rng.choice((1, -1))
        v = stabilize(u, split, s)
        assert (split, s) in find_destabilizations(v)
        assert destabilize(v, split, s) == u


def test_sigma_conjugate_examples():
    assert sigma_conjugate(W("g=1 n=2; s1"), 1, 1) == W("g=1 n=2; s1")
    assert sigma_conjugate(W("g=1 n=2; a1"), 1, 1) == W("g=1 n=2; s1^-1 a1 s1")
    u = W("g=2 n=3; a1 s2 a2^-1")
    assert sigma_conjugate(sigma_conjugate(u, 2, 1), 2, -1) == u
    with pytest.raises(WordError):
        sigma_conjugate(u, 3, 1)


def test_maximal_loop():
    assert maximal_loop(1) == W("g=1 n=1; a1")
    assert maximal_loop(2) == W("g=2 n=1; a1 a2")
    assert maximal_loop(3) == W("g=3 n=1; a1 a2 a3")
    with pytest.raises(WordError):
        maximal_loop(0)


def test_omega_commute():
    assert omega_commute(W("g=2 n=2; s1 a1 a2"), "right") == W("g=2 n=2; a1 a2 s1")
    assert omega_commute(W("g=2 n=1; a1 a2")) == W("g=2 n=1; a1 a2")
    assert omega_commute(W("g=2 n=1; a1 a1 a2")) == W("g=2 n=1; a1 a2 a1")
    assert omega_commute(W("g=2 n=1; a1 a2 a1"), "left") == W("g=2 n=1; a1 a1 a2")
    with pytest.raises(WordError):
        omega_commute(W("g=2 n=1; a2 a1"))


def _b_words(g, length):
    gens = [("b", i, e) for i in range(1, g + 1) for e in (1, -1)]
    for k in range(length + 1):
        for combo in itertools.product(gens, repeat=k):
            yield BraidWord(g, 1, combo)


@pytest.mark.parametrize("g", [2, 3])
def test_allowed_conjugators_brute_force(g):
    omega = maximal_loop(g)
    powers = {garside.normal_form(BraidWord(g, 1, (("a", 1, 0),)))}
    cur = BraidWord(g, 1)
    inv = BraidWord(g, 1)
    from mixbraid.words import invert, multiply

    for _ in range(5):
        cur = multiply(cur, omega)
        inv = multiply(inv, invert(omega))
        powers.add(garside.normal_form(cur))
        powers.add(garside.normal_form(inv))
    for w in _b_words(g, 3 if g == 3 else 4):
        expected = garside.normal_form(b_to_a(w)) in powers
        assert is_allowed_loop_conjugator(w) == expected, str(w)


def test_allowed_conjugator_examples():
    assert is_allowed_loop_conjugator(W("g=2 n=1; b1^3"))
    assert not is_allowed_loop_conjugator(W("g=2 n=1; b2"))
    assert is_allowed_loop_conjugator(W("g=2 n=1;"))
    with pytest.raises(WordError):
        is_allowed_loop_conjugator(W("g=2 n=2; s1"))


def test_label_flip_conjugator():
    assert label_flip_conjugator(0, 2) == W("g=2 n=1; b1")
    assert label_flip_conjugator(1, 2) == W("g=2 n=1; b2")
    assert label_flip_conjugator(2, 2) == W("g=2 n=1;")
    with pytest.raises(WordError):
        label_flip_conjugator(3, 2)


def test_moves_preserve_invariants():
    rng = random.Random(4)
    for _ in range(300):
        g = rng.randint(1, 3)
        u = random_word(g, rng.randint(1, 3), rng.randint(0, 8), rng)
        f = homology_functional(g)
        before = (link_invariant(u, f), winding_profile(u))
        choice = rng.randrange(3)
        split = rng.randint(0, len(u.units()))
        if choice == 0:
            v = apply_l_move(u, split, rng.randint(1, u.n + 1), rng.choice((1, -1)), rng.choice("ou"))
        elif choice == 1:
            v = stabilize(u, split, rng.choice((1, -1)))
        else:
            if u.n < 2:
                continue
            v = sigma_conjugate(u, rng.randint(1, u.n - 1), rng.choice((1, -1)))
        assert (link_invariant(v, f), winding_profile(v)) == before


def test_certificate_serialization_and_replay():
    start = W("g=1 n=1; a1")
    steps = (
        MoveStep("stabilize", (1, 1)),
        MoveStep("sigma_conjugate", (1, 1)),
        MoveStep("sigma_conjugate", (1, -1)),
        MoveStep("destabilize", (1, 1)),
    )
    cert = MoveCertificate(start, steps, start)
    text = cert.serialize()
    assert text == "start g=1 n=1; a1\nstabilize 1 1\nsigma_conjugate 1 1\nsigma_conjugate 1 -1\ndestabilize 1 1\nend g=1 n=1; a1\n"
    again = MoveCertificate.parse(text)
    assert again == cert
    assert again.replay() == start


def test_relator_step_checks_equality():
    u = W("g=1 n=3; a1 s2")
    good = MoveStep.parse("relator 3 s2 a1", 1)
    assert apply_step(u, good) == W("g=1 n=3; s2 a1")
    bad = MoveStep.parse("relator 3 s1 a1", 1)
    with pytest.raises(WordError):
        apply_step(u, bad)


def test_step_error_reports_index():
    cert = MoveCertificate(W("g=1 n=1; a1"), (MoveStep("stabilize", (0, 1)), MoveStep("sigma_conjugate", (5, 1))))
    with pytest.raises(StepError) as info:
        cert.replay()
    assert info.value.index == 1
