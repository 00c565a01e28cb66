import dataclasses
import random

import pytest

from mixbraid.invariants import homology_functional, link_invariant
from mixbraid.moves import MoveCertificate, StepError, maximal_loop, sigma_conjugate
from mixbraid.randomwords import random_word
from mixbraid.search import (
    DEFAULT_MOVES,
    PRIMITIVE_MOVES,
    SearchBudget,
    equivalence_search,
    markov_step_count,
    verify_certificate,
)
from mixbraid.words import parse_word

L_MOVES = PRIMITIVE_MOVES | {"L_o", "L_u"}


def W(text):
    return parse_word(text)


def _omega(g, n):
    return maximal_loop(g).with_n(n)


def test_conjugate_found_at_depth_one():
    beta = W("g=2 n=2; a1 s1 a2^-1")
    out = equivalence_search(beta, sigma_conjugate(beta, 1, 1), SearchBudget(max_depth=3))
    assert out.found and out.depth == 1
    assert verify_certificate(out.certificate)


def test_identical_words_need_no_moves():
    u = W("g=1 n=2; a1 s1")
    out = equivalence_search(u, u, SearchBudget(max_depth=2))
    assert out.found and out.depth == 0
    assert verify_certificate(MoveCertificate(u, (), u))


def test_omega_commutes_with_sigma_1():
    alpha = W("g=2 n=2; s1")
    om = _omega(2, 2)
    budget = SearchBudget(max_depth=16, max_states=100_000, move_set=L_MOVES)
    out = equivalence_search(alpha * om, om * alpha, budget)
    assert out.found
    cert = out.certificate
    assert verify_certificate(cert)
    assert {s.kind for s in cert.steps} <= {"stabilize", "destabilize", "sigma_conjugate", "relator", "free_reduce"}
    f = homology_functional(2)
    assert link_invariant(cert.start, f) == link_invariant(cert.end, f)


def test_pair_not_separated_within_budget():
    out = equivalence_search(W("g=2 n=1; a1 a2"), W("g=2 n=1; a2 a1"), SearchBudget(max_depth=10, max_n=3))
    assert not out.found
    assert out.status in ("exhausted", "budget-hit")
    assert "evidence, not proof" in out.report()


def test_deleted_step_fails_verification():
    alpha = W("g=2 n=2; s1")
    om = _omega(2, 2)
    out = equivalence_search(alpha * om, om * alpha, SearchBudget(move_set=L_MOVES))
    cert = out.certificate
    for k in range(len(cert.steps)):
        broken = dataclasses.replace(cert, steps=cert.steps[:k] + cert.steps[k + 1 :])
        try:
            ok = verify_certificate(broken)
        except StepError:
            ok = False
        assert not ok


def test_certificate_round_trips_through_text():
    u = W("g=2 n=2; a1 s1 a2")
    out = equivalence_search(u, sigma_conjugate(sigma_conjugate(u, 1, 1), 1, 1), SearchBudget(max_depth=4))
    again = MoveCertificate.parse(out.certificate.serialize())
    assert verify_certificate(again)
    assert markov_step_count(again) == markov_step_count(out.certificate)


def test_determinism_across_workers():
    u = W("g=2 n=1; a1 a2")
    v = W("g=2 n=1; a2 a1")
    budget = SearchBudget(max_depth=6, max_n=3)
    one = equivalence_search(u, v, budget)
    two = equivalence_search(u, v, dataclasses.replace(budget, workers=2))
    again = equivalence_search(u, v, budget)
    assert (one.status, one.states_explored, one.depth) == (two.status, two.states_explored, two.depth)
    assert (one.status, one.states_explored) == (again.status, again.states_explored)


def test_monotone_in_budget():
    rng = random.Random(9)
    for _ in range(8):
        alpha = random_word(2, 2, rng.randint(1, 3), rng)
        om = _omega(2, 2)
        u, v = alpha * om, om * alpha
        small = equivalence_search(u, v, SearchBudget(max_depth=4, move_set=L_MOVES))
        big = equivalence_search(u, v, SearchBudget(max_depth=8, move_set=L_MOVES))
        if small.found:
            assert big.found


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_states=0)
    with pytest.raises(ValueError):
        SearchBudget(move_set=frozenset({"relator"}))
    with pytest.raises(ValueError):
        equivalence_search(W("g=1 n=3;"), W("g=1 n=3;"), SearchBudget(max_n=2))
    assert "omega_commute" in DEFAULT_MOVES
