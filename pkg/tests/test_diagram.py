import random

import pytest

from mixbraid import garside
from mixbraid.diagram import (
    EXAMPLES,
    DiagramError,
    GeometricMixedBraid,
    MixedDiagram,
    MoveSite,
    algebraize,
    apply_move,
    braid,
    cap,
    close_algebraic,
    close_geometric,
    component_count,
    cross,
    cup,
    diagram_winding,
    eliminate_up_arc,
    find_up_arcs,
    format_diagram,
    load_example,
    move_sites,
    parse_diagram,
    parse_geometric,
    random_move,
    read_braid,
    validate,
)
from mixbraid.invariants import winding_profile
from mixbraid.moves import label_flip_conjugator
from mixbraid.randomwords import random_word
from mixbraid.words import b_to_a, invert, parse_word
from oracles import random_geometric


def G(g, word, layout):
    return GeometricMixedBraid(g, tuple(word), tuple(layout))


def test_format_parse_round_trip():
    d = close_geometric(G(2, (2, 2, -1, -1), "FoF"))
    text = format_diagram(d)
    assert parse_diagram(text) == d
    assert text.startswith("g=2\ncap 2 o\n")


def test_parse_errors():
    with pytest.raises(DiagramError):
        parse_diagram("cap 1\n")
    with pytest.raises(DiagramError):
        parse_diagram("g=1\nwiggle 2\n")


def test_validate_examples():
    assert validate(close_algebraic(parse_word("g=1 n=1;"))).ok
    capped = MixedDiagram(1, (cup(1), cap(1)), ("F", "o"))
    report = validate(capped)
    assert not report.ok
    fixed_cross = MixedDiagram(2, (cross(1, 1), cross(1, -1)))
    report = validate(fixed_cross)
    assert not report.ok and report.row == 0


def test_close_geometric_examples():
    d = close_geometric(G(1, (), "Fo"))
    assert [str(e) for e in d.rows] == ["cap 2 o", "cup 2"]
    under = close_geometric(G(1, (), "uF"))
    assert [e.sign for e in under.rows if e.kind == "x"] == [-1, 1]
    over = close_geometric(G(1, (), "oF"))
    diff = [a for a, b in zip(under.rows, over.rows) if a.kind == "x" and a != b]
    assert len(diff) == 2


def test_close_algebraic_examples():
    assert component_count(close_algebraic(parse_word("g=2 n=1;"))) == 1
    assert diagram_winding(close_algebraic(parse_word("g=1 n=1; a1"))).vectors == ((1,),)
    assert component_count(close_algebraic(parse_word("g=2 n=2; s1"))) == 1


def test_moves_examples():
    d = close_algebraic(parse_word("g=1 n=2; a1 s1"))
    kinked = apply_move(d, "R1", MoveSite("insert", 2, 3, 1))
    row = next(r for r in range(len(kinked.rows)) if kinked.rows[r].kind == "cap" and kinked.rows[r + 1].kind == "x")
    assert apply_move(kinked, "R1", MoveSite("delete", row)) == d
    bigon = apply_move(d, "R2", MoveSite("insert", 2, 2, 1))
    assert len(bigon.rows) == len(d.rows) + 2
    with pytest.raises(DiagramError):
        apply_move(d, "R2", MoveSite("insert", 2, 1, 1))  # fixed strand involved
    slid = apply_move(d, "mixed", MoveSite("insert", 2, 1, 1))
    assert diagram_winding(slid) == diagram_winding(d)


def test_random_moves_preserve_invariants():
    rng = random.Random(1)
    for _ in range(20):
        d = close_geometric(G(*random_geometric(rng)))
        w, c = diagram_winding(d), component_count(d)
        for _ in range(15):
            d, _, _ = random_move(d, rng)
            assert validate(d).ok
            assert diagram_winding(d) == w and component_count(d) == c


def test_move_sites_all_apply():
    d = close_geometric(G(1, (2, 1, 1, 2), "oFo"))
    for move, site in move_sites(d):
        apply_move(d, move, site)


def test_up_arcs_of_closures():
    for word in ("g=2 n=2; a1 s1", "g=1 n=3; s1 s2 a1^-1"):
        u = parse_word(word)
        arcs = find_up_arcs(close_algebraic(u))
        assert len(arcs) == u.n
    assert find_up_arcs(MixedDiagram(1, (cross(1, 1), cross(1, 1)), ("F", "o"))) == []
    two_max = MixedDiagram(0, (cap(1), cap(3, None, True), cross(2, 1), cup(1), cross(1, -1), cup(1)))
    assert validate(two_max).ok
    assert len(find_up_arcs(two_max)) >= 2


def test_eliminate_free_arc_uses_hint():
    d = close_geometric(G(1, (), "Fo"))
    (arc,) = find_up_arcs(d)
    out = eliminate_up_arc(d, arc)
    assert out.boundary == ("F", "o") and out.rows == ()
    d = close_geometric(G(1, (), "Fu"))
    (arc,) = find_up_arcs(d)
    assert eliminate_up_arc(d, arc).boundary == ("F", "u")


def test_eliminate_typed_arc():
    d = close_geometric(G(1, (), "uF"))
    (arc,) = find_up_arcs(d)
    assert arc.crossing_type == "u"
    out = eliminate_up_arc(d, arc)
    assert out.boundary == ("u", "F")


def test_braid_examples():
    assert braid(load_example("unknot_h1")) == G(1, (), "Fo")
    b = braid(close_algebraic(parse_word("g=1 n=1; a1")))
    assert garside.equal(algebraize(b), parse_word("g=1 n=1; a1"))
    with pytest.raises(DiagramError):
        read_braid(close_geometric(G(1, (), "Fo")))


def test_braid_inverts_closure():
    rng = random.Random(2)
    for _ in range(100):
        b = G(*random_geometric(rng))
        assert braid(close_geometric(b)) == b


def test_braid_after_moves_keeps_winding():
    rng = random.Random(3)
    for _ in range(30):
        d = close_geometric(G(*random_geometric(rng)))
        for _ in range(20):
            d, _, _ = random_move(d, rng)
        b = braid(d)
        assert diagram_winding(close_geometric(b)) == diagram_winding(d)
        assert winding_profile(algebraize(b)) == diagram_winding(d)


def test_algebraize_right_of_fixed_strands():
    rng = random.Random(4)
    for _ in range(50):
        u = random_word(2, 3, 8, rng)
        from mixbraid.words import embed

        assert garside.equal(algebraize(G(2, embed(u), "FFooo")), u)
        assert garside.equal(algebraize(G(2, embed(u), "FFuuo")), u)


def test_label_flip_is_loop_conjugation():
    rng = random.Random(5)
    for _ in range(100):
        g, word, layout = random_geometric(rng, 3, 1, 14)
        if g == 0:
            continue
        col = next(i for i, t in enumerate(layout) if t != "F")
        gap = layout[:col].count("F")
        flipped = tuple({"o": "u", "u": "o"}.get(t, t) for t in layout)
        u, v = algebraize(G(g, word, layout)), algebraize(G(g, word, flipped))
        k = b_to_a(label_flip_conjugator(gap, g))
        if layout[col] == "o":
            assert garside.equal(k * u * invert(k), v)
        else:
            assert garside.equal(invert(k) * u * k, v)


def test_corpus():
    assert set(EXAMPLES) == {"unknot_h1", "handle_pair_under", "handle_pair_over"}
    under = algebraize(braid(load_example("handle_pair_under")))
    over = algebraize(braid(load_example("handle_pair_over")))
    assert garside.equal(under, parse_word("g=2 n=1; a2 a1"))
    assert garside.equal(over, parse_word("g=2 n=1; a1 a2"))
    b2 = parse_word("g=2 n=1; a2")
    assert garside.equal(invert(b2) * under * b2, over)


def test_parse_geometric():
    b = parse_geometric("layout=FoF; s2^2 s1^-1 s1")
    assert b.word == (2, 2, -1, 1) and b.layout == ("F", "o", "F")
    with pytest.raises(DiagramError):
        parse_geometric("layout=FF; s1")
