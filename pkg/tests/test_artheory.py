import pytest

from stringar import (
    IsInjectiveError,
    IsProjectiveError,
    ar_sequence,
    enumerate_strings,
    is_isomorphic,
    knit,
    parse_presentation,
    realize,
    standard_module,
    tau,
    tau_inverse,
    tau_oracle,
    tau_orbit,
    walk_from_text,
    walk_to_text,
)
from stringar.artheory import is_injective_word, is_projective_word


def test_tau_simples_w3(w3):
    S3 = standard_module(w3, "3", "simple")
    S2 = standard_module(w3, "2", "simple")
    assert walk_to_text(tau(w3, S3).word.walk) == "e(4)"
    assert walk_to_text(tau(w3, S2).word.walk) == "e(3)"


def test_tau_projective_raises(w3):
    with pytest.raises(IsProjectiveError):
        tau(w3, standard_module(w3, "1", "projective"))


def test_tau_inverse_injective_raises(w3):
    with pytest.raises(IsInjectiveError):
        tau_inverse(w3, standard_module(w3, "2", "injective"))


def test_tau_inverse_inverts_tau(w3, u21):
    for p in (w3, u21):
        for sw in enumerate_strings(p):
            if is_projective_word(p, sw.walk):
                continue
            M = realize(p, sw)
            back = tau_inverse(p, tau(p, M))
            assert back.word == M.word


def test_tau_oracle_s2(w3):
    S2 = standard_module(w3, "2", "simple")
    S3 = standard_module(w3, "3", "simple")
    assert is_isomorphic(tau_oracle(w3, S2), S3.rep)


def test_tau_oracle_source_simple_u21(u21):
    # hand computation: the translate of the source simple is the long module
    S1 = standard_module(u21, "1", "simple")
    L = realize(u21, walk_from_text("g2 b1^- g1"))
    assert is_isomorphic(tau_oracle(u21, S1), L.rep)
    assert tau(u21, S1).word == L.word


def test_tau_oracle_projective_raises(w3):
    with pytest.raises(IsProjectiveError):
        tau_oracle(w3, standard_module(w3, "3", "projective"))


def test_oracle_agreement_word_length_le_8(w3, u21):
    for p in (w3, u21):
        for sw in enumerate_strings(p):
            if len(sw.walk) > 8 or is_projective_word(p, sw.walk):
                continue
            M = realize(p, sw)
            assert is_isomorphic(tau(p, M).rep, tau_oracle(p, M))


def test_ar_sequence_ending_at_s3(w3):
    S3 = standard_module(w3, "3", "simple")
    seq = ar_sequence(w3, S3, "endingAt")
    assert walk_to_text(seq.left_term.word.walk) == "e(4)"
    assert [walk_to_text(m.word.walk) for m in seq.middle] == ["b3"]
    assert seq.alpha == 1
    assert seq.left_term.total_dim + seq.right_term.total_dim == sum(
        m.total_dim for m in seq.middle
    )


def test_ar_sequence_starting_at_p1_contains_m(w3):
    P1 = standard_module(w3, "1", "projective")
    seq = ar_sequence(w3, P1, "startingAt")
    middles = {walk_to_text(m.word.walk) for m in seq.middle}
    assert "a^- b1" in middles  # the period-three module of the figure


def test_ar_sequence_sides_reject_wrong_ends(w3):
    with pytest.raises(IsProjectiveError):
        ar_sequence(w3, standard_module(w3, "4", "projective"), "endingAt")
    with pytest.raises(IsInjectiveError):
        ar_sequence(w3, standard_module(w3, "1", "injective"), "startingAt")


def test_knit_w3_matches_figure(w3_quiver):
    G = w3_quiver
    assert len(G.nodes) == 12
    arrows = {
        (G.nodes[a.source].text, G.nodes[a.target].text) for a in G.arrows
    }
    expected = {
        ("b1", "e(1)"), ("a", "e(1)"), ("b2", "e(2)"), ("b3", "e(3)"),
        ("a b1", "a"), ("a^- b1", "a"), ("a^- b1", "b1"), ("b2 b3", "b2"),
        ("e(3)", "b2"), ("e(4)", "b3"), ("b1^- a b1", "a b1"),
        ("e(1)", "a^- b1"), ("b1^- a b1", "a^- b1"), ("b3", "b2 b3"),
        ("b1", "b1^- a b1"), ("e(2)", "b1^- a b1"),
    }
    assert arrows == expected
    assert len(G.arrows) == 16
    tau_pairs = {
        (G.nodes[x].text, G.nodes[t].text) for x, t in G.tau_pairs.items()
    }
    assert ("e(1)", "a^- b1") in tau_pairs  # the period-three orbit
    assert ("a^- b1", "b1") in tau_pairs
    assert ("b1", "e(1)") in tau_pairs


def test_knit_semisimple():
    p = parse_presentation("vertices 1 2 3\n")
    G = knit(p)
    assert [n.text for n in G.nodes] == ["e(1)", "e(2)", "e(3)"]
    assert G.arrows == []
    assert G.tau_pairs == {}
    assert all(n.projective and n.injective for n in G.nodes)


def test_knit_node_count_is_string_census(u21):
    assert len(knit(u21).nodes) == len(enumerate_strings(u21))


def test_knit_mesh_symmetry(w3_quiver, u21_quiver):
    for G in (w3_quiver, u21_quiver):
        for x, tx in G.tau_pairs.items():
            sources = {a.source for a in G.arrows_into(x)}
            for n in sources:
                assert len(G.arrows_between(n, x)) == len(G.arrows_between(tx, n))


def test_knit_arrow_multiplicity_at_most_one_here(w3_quiver):
    seen = {}
    for a in w3_quiver.arrows:
        seen[(a.source, a.target)] = seen.get((a.source, a.target), 0) + 1
    assert all(v == 1 for v in seen.values())


def test_knit_flags(w3_quiver):
    flagged = {
        n.text: (n.projective, n.injective) for n in w3_quiver.nodes
    }
    assert flagged["b1^- a b1"] == (True, False)   # P(1)
    assert flagged["b2 b3"] == (True, True)        # P(2) = I(4)
    assert flagged["e(4)"] == (True, False)        # P(4) = S(4)
    assert flagged["a b1"] == (False, True)        # I(2)
    assert flagged["a^- b1"] == (False, False)


def test_tau_orbit_stops_at_projective(w3):
    S2 = standard_module(w3, "2", "simple")
    orbit = tau_orbit(w3, S2, 5)
    assert [walk_to_text(m.word.walk) for m in orbit.modules] == ["e(2)", "e(3)", "e(4)"]
    assert orbit.hit_projective


def test_tau_orbit_banded_component(ex3):
    I4 = standard_module(ex3, "4", "injective")
    orbit = tau_orbit(ex3, I4, 6)
    assert len(orbit.modules) == 7
    assert not orbit.hit_projective
    assert len({m.word.walk for m in orbit.modules}) == 7  # all distinct


def test_tau_period_three_loop_in(loop_in):
    M = realize(loop_in, walk_from_text("b"))
    orbit = tau_orbit(loop_in, M, 3)
    assert not orbit.hit_projective
    assert orbit.modules[3].word == M.word
    assert orbit.modules[1].word != M.word
    assert orbit.modules[2].word != M.word


def test_word_shape_predicates(w3):
    assert is_projective_word(w3, walk_from_text("b1^- a b1"))
    assert is_injective_word(w3, walk_from_text("a b1"))
    assert not is_projective_word(w3, walk_from_text("a^- b1"))
    assert not is_injective_word(w3, walk_from_text("a^- b1"))


def test_exports(w3_quiver):
    dot = w3_quiver.to_dot()
    assert dot.count(" -> ") == 16 + 8  # solid arrows plus dotted translate edges
    assert dot.count("style=dotted") == 8
    payload = w3_quiver.to_json()
    assert len(payload["nodes"]) == 12
    assert len(payload["arrows"]) == 16
    assert len(payload["tauPairs"]) == 8


def test_all_meshes_recorded(w3_quiver):
    non_proj = [n for n in w3_quiver.nodes if not n.projective]
    assert set(w3_quiver.meshes) == {n.index for n in non_proj}
    for seq in w3_quiver.meshes.values():
        assert 1 <= seq.alpha <= 2


def test_mesh_invariants_on_larger_algebras(u22, u31, v21):
    # every recorded mesh re-verifies: exactness, shapes, mono/epi, non-split
    for p in (u22, u31, v21):
        G = knit(p)
        for seq in G.meshes.values():
            seq.verify()
            assert 1 <= seq.alpha <= 2
            for f in seq.left_maps + seq.right_maps:
                assert f.check_intertwining()


def test_ar_sequence_sides_agree(w3):
    # the sequence ending at tau^{-1}M equals the sequence starting at M
    from stringar import tau_inverse

    S3 = standard_module(w3, "3", "simple")
    down = ar_sequence(w3, S3, "startingAt")
    up = ar_sequence(w3, tau_inverse(w3, S3), "endingAt")
    assert down.left_term.word == up.left_term.word
    assert [m.word for m in down.middle] == [m.word for m in up.middle]
    assert down.right_term.word == up.right_term.word
