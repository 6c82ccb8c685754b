"""Free contractions: filler certification, units, induced maps."""

import pytest

from omegacube import (
    ContractionError,
    CubicalSetPresentation,
    QuotientView,
    SetMorphism,
    build_free_contraction,
    free_on_morphism,
    two_generator_quiver,
    unit_eta,
    universe_as_presentation,
    validate_contraction,
    validate_contraction_morphism,
    validate_cubical_axioms,
    validate_morphism,
    validate_quiver,
)


def by_text(cd, text):
    return next(t for t in cd.universe.all_terms() if t.text == text)


@pytest.fixture()
def scratch(quiver):
    """A private size-capped build that mutation tests may deface."""
    return build_free_contraction(quiver, depth=2, size_cap=3)


def loop_target(seed_config):
    """Two objects, parallel arrows A, B: u -> v and a loop m: v -> v."""
    return CubicalSetPresentation(
        seed_config,
        cells={(0, ()): ["u", "v"], (1, (1,)): ["A", "B", "m"]},
        faces={
            (1, (1,), 1, "s"): {"A": "u", "B": "u", "m": "v"},
            (1, (1,), 1, "t"): {"A": "v", "B": "v", "m": "v"},
        },
        name="loop-target",
    )


def test_stagewise_build_reaches_the_cap(contraction):
    assert [(s.dim, s.universe_size, s.kappa_added) for s in contraction.stages] == [
        (0, 3, 0),
        (1, 31, 36),
        (2, 94, 0),
    ]
    assert all(s.session["completed"] for s in contraction.stages)
    assert contraction.session.completed
    assert len(contraction.kappa) == 36


def test_all_filler_invariants_hold(contraction):
    report = validate_contraction(contraction)
    assert report.ok
    assert report.checked == 286


def test_fillers_connect_identified_pairs(contraction):
    f = by_text(contraction, "gen(f)")
    padded = by_text(contraction, "comp[1](gen(f),id[1](gen(a)))")
    assert contraction.pi_same(f, padded)
    k = contraction.kappa_of(2, f, padded)
    b = contraction.builder
    assert b.boundary(k, 2, "s") is f
    assert b.boundary(k, 2, "t") is padded
    # the filler projects onto the degenerate square on both ends
    assert contraction.pi_same(k, b.refl(2, f))


def test_diagonal_requests_collapse_to_reflectors(contraction):
    f = by_text(contraction, "gen(f)")
    assert contraction.kappa_of(2, f, f) is contraction.builder.refl(2, f)


def test_unidentified_pairs_have_no_filler(contraction):
    f = by_text(contraction, "gen(f)")
    g = by_text(contraction, "gen(g)")
    assert not contraction.pi_same(f, g)
    with pytest.raises(ContractionError):
        contraction.kappa_of(2, f, g)


def test_missing_filler_is_detected(scratch):
    key = sorted(scratch.kappa)[0]
    del scratch.kappa[key]
    report = validate_contraction(scratch)
    assert {v.tag for v in report.violations} == {"kappa-domain-missing"}


def test_misrouted_filler_is_detected(scratch):
    keys = sorted(scratch.kappa)
    scratch.kappa[keys[0]] = scratch.kappa[keys[-1]]
    report = validate_contraction(scratch)
    assert not report.ok
    tags = {v.tag for v in report.violations}
    assert tags <= {"kappa-source", "kappa-target", "kappa-transverse", "kappa-projection"}
    assert "kappa-source" in tags or "kappa-target" in tags


def test_filler_for_a_separated_pair_is_detected(scratch):
    f = by_text(scratch, "gen(f)")
    g = by_text(scratch, "gen(g)")
    donor = scratch.kappa[sorted(scratch.kappa)[0]]
    scratch.kappa[(2, f.nid, g.nid)] = donor
    report = validate_contraction(scratch)
    assert any(v.tag == "kappa-domain-extra" for v in report.violations)


def test_universe_reads_back_as_a_presentation(contraction):
    p = universe_as_presentation(contraction.universe)
    assert validate_quiver(p).ok
    assert validate_cubical_axioms(p).ok
    assert sum(len(cs) for cs in p.cells.values()) == contraction.universe.size


def test_unit_lands_generators_on_their_terms(contraction):
    eta = unit_eta(contraction)
    assert validate_morphism(eta).ok
    assert eta.maps[(1, (1,))]["f"] == "gen(f)"
    assert eta.maps[(0, ())]["a"] == "gen(a)"


def test_identity_morphism_extends_to_the_identity(contraction):
    ident = SetMorphism.identity(contraction.presentation)
    ext = free_on_morphism(ident, contraction, contraction)
    assert validate_contraction_morphism(ext).ok
    for text in ("gen(f)", "comp[1](gen(g),gen(f))", "id[1](gen(b))"):
        t = by_text(contraction, text)
        assert ext.phi(t) is t


def test_morphisms_extend_with_naturality(quiver, seed_config, contraction):
    target_p = loop_target(seed_config)
    target = build_free_contraction(target_p, depth=2)
    fold = SetMorphism(
        quiver,
        target_p,
        {
            (0, ()): {"a": "u", "b": "v", "c": "v"},
            (1, (1,)): {"f": "A", "g": "m"},
        },
        name="fold",
    )
    assert validate_morphism(fold).ok
    ext = free_on_morphism(fold, contraction, target)
    report = validate_contraction_morphism(ext)
    assert report.ok
    assert report.checked > 0
    gf = by_text(contraction, "comp[1](gen(g),gen(f))")
    assert ext.phi(gf).text == "comp[1](gen(m),gen(A))"
    f = by_text(contraction, "gen(f)")
    padded = by_text(contraction, "comp[1](gen(f),id[1](gen(a)))")
    filler = contraction.kappa_of(2, f, padded)
    image = ext.phi(filler)
    assert target.pi_same(image, target.builder.refl(2, ext.phi(f)))


def test_quotient_view_operations(contraction):
    qv = QuotientView(contraction)
    reps = qv.representatives(1, (1,))
    assert len(reps) == 13
    f = by_text(contraction, "gen(f)")
    g = by_text(contraction, "gen(g)")
    padded = by_text(contraction, "comp[1](gen(f),id[1](gen(a)))")
    assert qv.cls(padded) is f
    assert qv.comp(1, qv.cls(g), qv.cls(f)).text == "comp[1](gen(g),gen(f))"
    a = by_text(contraction, "gen(a)")
    assert qv.refl(1, a).text == "id[1](gen(a))"
    assert qv.dual(1, qv.dual(1, f)) is f
    with pytest.raises(ContractionError):
        qv.comp(1, qv.cls(f), qv.cls(g))
