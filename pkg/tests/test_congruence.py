"""Congruence closure: saturation, verdicts, proofs, audits."""

import pytest

from omegacube import (
    CongruenceSession,
    FAMILIES,
    TermError,
    TermBuilder,
    decide_equal,
    enumerate_free_magma,
    instantiate_relations,
    audit_congruence,
    word_separator,
)


def by_text(universe, text):
    return next(t for t in universe.all_terms() if t.text == text)


def test_family_catalogue_is_fixed():
    assert len(FAMILIES) == 12
    assert "assoc" in FAMILIES
    assert "contraction-projection" in FAMILIES


def test_instantiation_rejects_unknown_families(universe3):
    with pytest.raises(ValueError):
        instantiate_relations(universe3, families={"assoc", "frobenius"})


def test_instances_pair_terms_at_one_level(universe3):
    rels = instantiate_relations(universe3, families={"unit-left", "involutive"})
    assert rels
    for rel in rels:
        assert rel.left.level == rel.right.level
    # a magma universe has no filler cells, so no projection instances
    assert not instantiate_relations(universe3, families={"contraction-projection"})


def test_side_size_cap_prunes_instances(universe3):
    full = instantiate_relations(universe3, families={"assoc"})
    slim = instantiate_relations(universe3, families={"assoc"}, max_side_size=7)
    assert 0 < len(slim) < len(full)
    assert all(max(r.left.size, r.right.size) <= 7 for r in slim)


def test_expected_identifications_hold(saturated):
    u = saturated.universe
    b = u.builder
    f = by_text(u, "gen(f)")
    a = by_text(u, "gen(a)")
    assert saturated.same(b.comp(1, f, b.refl(1, a)), f)
    assert saturated.same(b.dual(1, b.dual(1, f)), f)
    assert saturated.same(b.dual(1, b.refl(1, a)), b.refl(1, a))
    g = by_text(u, "gen(g)")
    gf = b.comp(1, g, f)
    assert saturated.same(b.dual(1, gf), b.comp(1, b.dual(1, f), b.dual(1, g)))
    assert saturated.same(b.refl(2, gf), b.comp(1, b.refl(2, g), b.refl(2, f)))


def test_expected_distinctions_survive(saturated):
    u = saturated.universe
    assert not saturated.same(by_text(u, "gen(f)"), by_text(u, "gen(g)"))
    assert not saturated.same(by_text(u, "gen(a)"), by_text(u, "gen(b)"))
    b = u.builder
    f = by_text(u, "gen(f)")
    assert not saturated.same(f, b.dual(1, f))


def test_class_counts_at_depth_three(saturated):
    got = {}
    for level, terms in sorted(saturated.universe.levels.items()):
        got[level] = len({saturated.find(t.nid) for t in terms})
    assert got == {(0, ()): 3, (1, (1,)): 19, (1, (2,)): 3, (2, (1, 2)): 13}


def test_representative_is_the_smallest_member(saturated):
    u = saturated.universe
    b = u.builder
    f = by_text(u, "gen(f)")
    padded = b.comp(1, b.refl(1, by_text(u, "gen(b)")), f)
    assert saturated.class_representative(padded) is f
    members = saturated.class_members(padded)
    assert f in members and padded in members


def test_explain_produces_a_connected_chain(saturated):
    u = saturated.universe
    b = u.builder
    f = by_text(u, "gen(f)")
    t1 = b.dual(1, b.dual(1, f))
    t2 = b.comp(1, f, b.refl(1, by_text(u, "gen(a)")))
    steps = saturated.explain(t1, t2)
    assert steps
    chain = [t1.text] + [s["right"] for s in steps]
    assert chain[-1] == t2.text
    for prev, step in zip(chain, steps):
        assert step["left"] == prev
        assert step["by"]
    assert saturated.explain(f, f) == []
    with pytest.raises(TermError):
        saturated.explain(f, by_text(u, "gen(g)"))


def test_decide_equal_three_verdicts(saturated, quiver):
    u = saturated.universe
    b = u.builder
    f = by_text(u, "gen(f)")
    g = by_text(u, "gen(g)")
    eq = decide_equal(saturated, f, b.dual(1, b.dual(1, f)))
    assert eq.verdict == "equal"
    assert eq.witness["trace"]

    sep = word_separator(quiver)
    ne = decide_equal(saturated, f, g, [sep])
    assert ne.verdict == "not-equal"
    assert ne.witness["left_value"] != ne.witness["right_value"]

    # distinct dim-2 classes, and the word separator cannot evaluate squares
    unk = decide_equal(saturated, b.refl(2, f), b.refl(2, g), [sep])
    assert unk.verdict == "unknown"
    assert "session" in unk.witness


def test_decide_equal_accepts_late_nodes(saturated):
    u = saturated.universe
    b = u.builder
    f = by_text(u, "gen(f)")
    fresh = b.dual(1, b.dual(1, b.dual(1, b.dual(1, f))))
    verdict = decide_equal(saturated, fresh, f)
    assert verdict.verdict == "equal"


def test_decide_equal_rejects_foreign_terms(saturated, quiver):
    other = TermBuilder(quiver)
    foreign = other.gen(quiver.cell(1, (1,), "f"))
    with pytest.raises(TermError):
        decide_equal(saturated, foreign, foreign)
    u = saturated.universe
    with pytest.raises(TermError):
        decide_equal(saturated, by_text(u, "gen(a)"), by_text(u, "gen(f)"))


def test_audit_confirms_the_fixpoint(saturated):
    report = audit_congruence(saturated)
    assert report.ok
    assert report.checked > 0


def test_budget_exhaustion_reports_honestly(quiver):
    u = enumerate_free_magma(quiver, 2)
    session = CongruenceSession(u).seed(instantiate_relations(u)).saturate(budget=5)
    assert not session.completed
    stats = session.stats()
    assert stats["processed"] <= 5 < stats["seeded"]
    f = by_text(u, "gen(f)")
    b = u.builder
    left_alone = decide_equal(session, b.comp(1, f, b.refl(1, by_text(u, "gen(a)"))), f)
    assert left_alone.verdict in {"equal", "unknown"}
    session.saturate()
    assert session.completed


def test_manual_merges_propagate_to_faces(quiver):
    u = enumerate_free_magma(quiver, 1)
    session = CongruenceSession(u)
    session.saturate()
    f = by_text(u, "gen(f)")
    g = by_text(u, "gen(g)")
    assert not session.same(by_text(u, "gen(a)"), by_text(u, "gen(b)"))
    session.merge_terms(f, g)
    session.saturate()
    # endpoints follow the merged arrows
    assert session.same(by_text(u, "gen(a)"), by_text(u, "gen(b)"))
    assert session.same(by_text(u, "gen(b)"), by_text(u, "gen(c)"))
    assert audit_congruence(session).ok


def test_signature_merging_is_congruent(quiver):
    u = enumerate_free_magma(quiver, 2)
    session = CongruenceSession(u).seed(instantiate_relations(u)).saturate()
    b = u.builder
    f = by_text(u, "gen(f)")
    padded = b.comp(1, f, b.refl(1, by_text(u, "gen(a)")))
    # equal arguments force equal duals without a seeded pair for them
    assert session.same(b.dual(1, padded), b.dual(1, f))
    assert session.same(b.refl(2, padded), b.refl(2, f))
