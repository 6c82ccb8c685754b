"""Freeness, made checkable: unique extensions and natural units.

Two facts characterize the free construction on a quiver.  First, any
assignment of generators into a strict model extends uniquely to all
terms; the checker certifies this by comparing a recursive evaluator
against an independently coded tabular one on every term.  Second, the
unit embedding generators into their free contraction is natural: map
the quiver first or extend first, the results agree.
"""

import random

from omegacube import (
    CubicalSetPresentation,
    SetMorphism,
    TruncationConfig,
    as_strict_table,
    build_free_contraction,
    check_universal_factorization,
    enumerate_free_magma,
    free_on_morphism,
    pair_groupoid,
    random_assignment,
    two_generator_quiver,
    unit_eta,
    validate_contraction_morphism,
)

cfg1 = TruncationConfig(max_dim=1, dir_universe=1, term_depth=3)
quiver = two_generator_quiver(cfg1)
universe = enumerate_free_magma(quiver, 3)
target = as_strict_table(pair_groupoid(3))

print("universal factorization over random assignments:")
rng = random.Random(2026)
for i in range(3):
    assignment = random_assignment(quiver, target, rng, name=f"draw-{i}")
    report = check_universal_factorization(assignment, universe)
    images = {k: v for t in assignment.maps.values() for k, v in t.items()}
    print(f"  draw {i}: {images}  ->  {report.summary()}")

cfg2 = TruncationConfig(max_dim=2, dir_universe=2, term_depth=3)
source_q = two_generator_quiver(cfg2)
target_q = CubicalSetPresentation(
    cfg2,
    cells={(0, ()): ["u", "v"], (1, (1,)): ["A", "B", "m"]},
    faces={
        (1, (1,), 1, "s"): {"A": "u", "B": "u", "m": "v"},
        (1, (1,), 1, "t"): {"A": "v", "B": "v", "m": "v"},
    },
    name="loop-target",
)
source = build_free_contraction(source_q, depth=2)
target_c = build_free_contraction(target_q, depth=2)
fold = SetMorphism(
    source_q,
    target_q,
    {(0, ()): {"a": "u", "b": "v", "c": "v"}, (1, (1,)): {"f": "A", "g": "m"}},
    name="fold",
)
ext = free_on_morphism(fold, source, target_c)
print("\nextension of a quiver map to contractions:")
print("  " + validate_contraction_morphism(ext).summary())

eta_s, eta_t = unit_eta(source), unit_eta(target_c)
print("  unit squares on generators:")
for cell in source_q.cells[(1, (1,))]:
    via_unit = ext.phi(source.builder.gen(cell)).text
    via_map = eta_t.maps[cell.level][fold.maps[cell.level][cell.name]]
    status = "commutes" if via_unit == via_map else "BROKEN"
    print(f"    {cell.name}: extend(unit) = {via_unit}, unit(image) = {via_map} [{status}]")
