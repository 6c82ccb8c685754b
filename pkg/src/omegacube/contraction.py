"""Free contractions over a presentation, built stage by stage.

A contraction equips the free structure with chosen filler cells: for
every pair of syntactically distinct terms x, y at the same level that
the word problem identifies, and every direction d the level does not
use, a cell kappa[d](x, y) one dimension up whose d-source is x, whose
d-target is y, and which projects onto the reflector of x in the
quotient.  Contracting a term against itself yields the reflector on
the nose, and the transverse faces of a contraction cell are the
contractions of the face pairs.

The build walks dimensions upward.  At stage n it enumerates the
contraction-mode universe up to dimension n, saturates a congruence
session over it, and then admits one contraction cell per direction
and ordered identified pair at dimension n; the new cells are atoms of
stage n+1.  Identification is the session's verdict at the current
stage, so pairs the budgeted closure cannot identify are simply not
contracted (and can be logged against separating models).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .congruence import CongruenceSession, instantiate_relations
from .presentation import (
    CubicalSetPresentation,
    SetMorphism,
    TruncationConfig,
    ValidationReport,
)
from .strict import Evaluator, EvalError
from .term import (
    COMP,
    DUAL,
    GEN,
    KAPPA,
    REFL,
    Term,
    TermBuilder,
    TermUniverse,
    enumerate_free_magma,
)


class ContractionError(Exception):
    """Raised when a contraction structure cannot be built or mapped."""


@dataclass
class ContractionStage:
    dim: int
    universe_size: int
    kappa_added: int
    session: dict
    excluded_pairs: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "universe_size": self.universe_size,
            "kappa_added": self.kappa_added,
            "session": dict(self.session),
            "excluded_pairs": [list(p) for p in self.excluded_pairs],
        }


@dataclass
class ContractionData:
    """A built free contraction: universe, word problem, and filler table."""

    presentation: CubicalSetPresentation
    builder: TermBuilder
    universe: TermUniverse
    session: CongruenceSession
    kappa: dict[tuple[int, int, int], Term]  # (direction, source nid, target nid)
    stages: list[ContractionStage]

    @property
    def config(self) -> TruncationConfig:
        return self.presentation.config

    def kappa_of(self, d: int, x: Term, y: Term) -> Term:
        """The chosen filler from x to y in direction d."""
        if x is y:
            return self.builder.refl(d, x)
        node = self.kappa.get((d, x.nid, y.nid))
        if node is None:
            raise ContractionError(
                f"no contraction cell kappa[{d}]({x.text},{y.text}); "
                "the pair was not identified when its stage was built"
            )
        return node

    def refresh(self) -> None:
        """Fold nodes created after the build into the word problem."""
        self.session.saturate()

    def pi_same(self, x: Term, y: Term) -> bool:
        return self.session.same(x, y)

    def to_report_dict(self) -> dict:
        return {
            "universe": self.universe.counts(),
            "kappa_cells": len(self.kappa),
            "stages": [s.to_dict() for s in self.stages],
            "session": self.session.stats(),
        }


def build_free_contraction(
    p: CubicalSetPresentation,
    *,
    depth: int | None = None,
    size_cap: int | None = None,
    budget: int | None = None,
    separators: list = (),
    max_side_size: int | None = None,
) -> ContractionData:
    """Build the free contraction over a presentation, stage by stage.

    size_cap bounds the node count of enumerated terms; wide
    presentations need it because filler admission grows with the
    square of class sizes and composites over fillers compound that.

    separators, when given, are only used to classify unidentified
    pairs for the stage log: a pair no separator distinguishes is
    recorded as excluded-but-undecided rather than silently dropped.
    """
    builder = TermBuilder(p, mode="contraction")
    cfg = builder.config
    atoms: list[Term] = []
    kappa_table: dict[tuple[int, int, int], Term] = {}
    stages: list[ContractionStage] = []
    universe: TermUniverse | None = None
    session: CongruenceSession | None = None

    for n in range(cfg.max_dim + 1):
        universe = enumerate_free_magma(
            builder, depth, size_cap=size_cap, max_stage_dim=n, extra_atoms=list(atoms)
        )
        relations = instantiate_relations(universe, max_side_size=max_side_size)
        session = CongruenceSession(universe).seed(relations).saturate(budget)
        added = 0
        excluded: list[tuple[str, str]] = []
        if n < cfg.max_dim:
            for (dim, dirs), terms in sorted(universe.levels.items()):
                if dim != n:
                    continue
                upper = [d for d in range(1, cfg.dir_universe + 1) if d not in dirs]
                if not upper:
                    continue
                by_root: dict[int, list[Term]] = {}
                for t in terms:
                    by_root.setdefault(session.find(t.nid), []).append(t)
                for root in sorted(by_root, key=lambda r: by_root[r][0].sort_key):
                    members = by_root[root]
                    for i, x in enumerate(members):
                        for y in members[i + 1 :]:
                            builder.admit_kappa_pair(x, y)
                            for d in upper:
                                for a, b in ((x, y), (y, x)):
                                    key = (d, a.nid, b.nid)
                                    if key not in kappa_table:
                                        node = builder.kappa(d, a, b)
                                        kappa_table[key] = node
                                        atoms.append(node)
                                        # keep the degenerate companions in
                                        # the universe alongside the filler
                                        atoms.append(builder.refl(d, a))
                                        added += 1
                if separators:
                    excluded.extend(_log_undecided(terms, by_root, separators))
        stages.append(
            ContractionStage(
                dim=n,
                universe_size=universe.size,
                kappa_added=added,
                session=session.stats(),
                excluded_pairs=excluded,
            )
        )
    return ContractionData(
        presentation=p,
        builder=builder,
        universe=universe,
        session=session,
        kappa=kappa_table,
        stages=stages,
    )


def _log_undecided(terms, by_root, separators) -> list[tuple[str, str]]:
    """Cross-class pairs no separator tells apart: candidates lost to budget."""
    images = []
    for assignment in separators:
        ev = Evaluator(assignment)
        level_images = {}
        for t in terms:
            try:
                level_images[t.nid] = ev.eval(t)
            except EvalError:
                level_images[t.nid] = None
        images.append(level_images)
    out = []
    roots = sorted(by_root, key=lambda r: by_root[r][0].sort_key)
    for i, r1 in enumerate(roots):
        for r2 in roots[i + 1 :]:
            x = by_root[r1][0]
            y = by_root[r2][0]
            separated = any(
                imgs[x.nid] is not None and imgs[y.nid] is not None and imgs[x.nid] != imgs[y.nid]
                for imgs in images
            )
            if not separated:
                out.append((x.text, y.text))
    return out


def validate_contraction(cd: ContractionData) -> ValidationReport:
    """Exhaustively check the five families of contraction invariants.

    Domain: the filler table covers exactly the ordered identified
    pairs below the top dimension.  Faces: each filler runs from its
    source to its target.  Transverse faces: fillers restrict to
    fillers of face pairs.  Projection: each filler is identified with
    the reflector of both endpoints.  Degeneracy: diagonal requests
    collapse to reflectors and never appear in the table.
    """
    report = ValidationReport(subject="contraction")
    b = cd.builder
    session = cd.session
    cfg = cd.config

    expected: set[tuple[int, int, int]] = set()
    for (dim, dirs), terms in sorted(cd.universe.levels.items()):
        if dim >= cfg.max_dim:
            continue
        upper = [d for d in range(1, cfg.dir_universe + 1) if d not in dirs]
        by_root: dict[int, list[Term]] = {}
        for t in terms:
            by_root.setdefault(session.find(t.nid), []).append(t)
        for members in by_root.values():
            for i, x in enumerate(members):
                for y in members[i + 1 :]:
                    for d in upper:
                        expected.add((d, x.nid, y.nid))
                        expected.add((d, y.nid, x.nid))
    for key in sorted(expected - set(cd.kappa)):
        d, xn, yn = key
        report.add(
            "kappa-domain-missing",
            None,
            f"identified pair ({b.terms[xn].text}, {b.terms[yn].text}) has no "
            f"filler in direction {d}",
        )
    for key in sorted(set(cd.kappa) - expected):
        d, xn, yn = key
        report.add(
            "kappa-domain-extra",
            None,
            f"filler kappa[{d}]({b.terms[xn].text},{b.terms[yn].text}) covers a pair "
            "that is not an identified non-diagonal pair of the universe",
        )
    report.checked += len(expected)

    for (d, xn, yn), node in sorted(cd.kappa.items()):
        x = b.terms[xn]
        y = b.terms[yn]
        level = node.level
        report.checked += 2
        if b.boundary(node, d, "s") is not x:
            report.add("kappa-source", level, f"{node.text}: d-source is not {x.text}")
        if b.boundary(node, d, "t") is not y:
            report.add("kappa-target", level, f"{node.text}: d-target is not {y.text}")
        if xn == yn:
            report.add("kappa-degenerate", level, f"{node.text} fills a diagonal pair")
        for e in x.dirs:
            for side in ("s", "t"):
                report.checked += 1
                got = b.boundary(node, e, side)
                fx = b.boundary(x, e, side)
                fy = b.boundary(y, e, side)
                try:
                    want = cd.kappa_of(d, fx, fy)
                except ContractionError:
                    # a corrupt entry can point at faces with no filler of their own
                    report.add(
                        "kappa-transverse",
                        level,
                        f"{side}-face({e}) of {node.text}: the face pair "
                        f"({fx.text}, {fy.text}) has no filler to compare against",
                    )
                    continue
                if got is not want:
                    report.add(
                        "kappa-transverse",
                        level,
                        f"{side}-face({e}) of {node.text} is {got.text}, expected {want.text}",
                    )
        report.checked += 2
        for endpoint in (x, y):
            if not session.same(node, b.refl(d, endpoint)):
                report.add(
                    "kappa-projection",
                    level,
                    f"{node.text} does not project onto the reflector of {endpoint.text}",
                )

    # degeneracy: diagonal requests collapse to reflectors
    for (dim, dirs), terms in sorted(cd.universe.levels.items()):
        if dim >= cfg.max_dim:
            continue
        for t in terms:
            for d in range(1, cfg.dir_universe + 1):
                if d in dirs:
                    continue
                report.checked += 1
                diag = b.kappa(d, t, t)
                if diag.kind != REFL or diag.body is not t:
                    report.add(
                        "kappa-degenerate",
                        (dim, dirs),
                        f"kappa[{d}]({t.text},{t.text}) is {diag.text}, not the reflector",
                    )
    return report


def universe_as_presentation(u: TermUniverse, name: str = "") -> CubicalSetPresentation:
    """View a boundary-closed universe as a presentation of its own.

    Cells are the terms, named by their printed form; face tables are
    read off the boundary operator.
    """
    cells = {level: [t.text for t in terms] for level, terms in u.levels.items()}
    faces: dict = {}
    b = u.builder
    for (dim, dirs), terms in u.levels.items():
        if dim == 0:
            continue
        for d in dirs:
            for side in ("s", "t"):
                faces[(dim, dirs, d, side)] = {
                    t.text: b.boundary(t, d, side).text for t in terms
                }
    return CubicalSetPresentation(
        u.builder.config, cells, faces, name=name or "free-contraction-universe"
    )


def unit_eta(cd: ContractionData) -> SetMorphism:
    """The unit: each generating cell becomes its own generator term."""
    p = cd.presentation
    target = universe_as_presentation(cd.universe)
    maps = {
        level: {c.name: cd.builder.gen(c).text for c in refs}
        for level, refs in p.cells.items()
    }
    return SetMorphism(p, target, maps, name="unit")


@dataclass
class ContractionMorphism:
    """The free extension of a presentation morphism to contractions."""

    source: ContractionData
    target: ContractionData
    f: SetMorphism
    term_map: dict[int, Term]

    def phi(self, t: Term) -> Term:
        found = self.term_map.get(t.nid)
        if found is None:
            raise ContractionError(f"{t.text} is outside the mapped universe")
        return found


def free_on_morphism(
    f: SetMorphism, source: ContractionData, target: ContractionData
) -> ContractionMorphism:
    """Extend a cell map to the whole contraction universe.

    Generators map through f, operations map structurally, and filler
    cells map to the target's chosen filler of the image pair.  Raises
    if an image pair was not identified in the target, since then no
    filler is available.
    """
    tb = target.builder
    term_map: dict[int, Term] = {}

    def phi(t: Term) -> Term:
        found = term_map.get(t.nid)
        if found is not None:
            return found
        if t.kind == GEN:
            out = tb.gen(f.apply(t.cell))
        elif t.kind == REFL:
            out = tb.refl(t.d, phi(t.body))
        elif t.kind == DUAL:
            out = tb.dual(t.d, phi(t.body))
        elif t.kind == COMP:
            out = tb.comp(t.d, phi(t.left), phi(t.right))
        elif t.kind == KAPPA:
            ix = phi(t.left)
            iy = phi(t.right)
            if ix is not iy and not target.session.same(ix, iy):
                raise ContractionError(
                    f"cannot map {t.text}: the image pair ({ix.text}, {iy.text}) "
                    "is not identified in the target"
                )
            out = target.kappa_of(t.d, ix, iy)
        else:  # pragma: no cover
            raise ContractionError(f"unknown node kind {t.kind!r}")
        term_map[t.nid] = out
        return out

    for t in source.universe.all_terms():
        phi(t)
    target.refresh()
    return ContractionMorphism(source=source, target=target, f=f, term_map=term_map)


def validate_contraction_morphism(m: ContractionMorphism) -> ValidationReport:
    """Check that a mapped contraction is structure-preserving.

    Covers: generators land on their images, boundaries commute,
    identified pairs stay identified (so the map descends to the
    quotients), and fillers map to fillers of image pairs.
    """
    report = ValidationReport(subject=f"contraction-morphism({m.f.name or 'map'})")
    sb = m.source.builder
    tb = m.target.builder
    for t in m.source.universe.all_terms():
        img = m.phi(t)
        report.checked += 1
        if t.kind == GEN and img is not tb.gen(m.f.apply(t.cell)):
            report.add("on-generators", t.level, f"{t.text} maps to {img.text}")
        for d in t.dirs:
            for side in ("s", "t"):
                report.checked += 1
                lhs = tb.boundary(img, d, side)
                rhs = m.phi(sb.boundary(t, d, side))
                if lhs is not rhs:
                    report.add(
                        "boundary-compat",
                        t.level,
                        f"{side}-face({d}) of the image of {t.text} is {lhs.text}, "
                        f"but the image of the face is {rhs.text}",
                    )
    for level, terms in m.source.universe.levels.items():
        by_root: dict[int, list[Term]] = {}
        for t in terms:
            by_root.setdefault(m.source.session.find(t.nid), []).append(t)
        for members in by_root.values():
            base = m.phi(members[0])
            for other in members[1:]:
                report.checked += 1
                if not m.target.session.same(base, m.phi(other)):
                    report.add(
                        "class-compat",
                        level,
                        f"{members[0].text} and {other.text} are identified at the "
                        "source but their images are not",
                    )
    for (d, xn, yn), node in sorted(m.source.kappa.items()):
        if node.nid not in m.term_map:
            continue
        report.checked += 1
        ix = m.phi(sb.terms[xn])
        iy = m.phi(sb.terms[yn])
        if m.phi(node) is not m.target.kappa_of(d, ix, iy):
            report.add(
                "kappa-compat",
                node.level,
                f"image of {node.text} is not the target filler of "
                f"({ix.text}, {iy.text})",
            )
    return report


@dataclass
class QuotientView:
    """Classes of the word problem with induced operations.

    Operations act through representatives; composition searches the
    two classes for a pair of members that compose on the nose, which
    always exists at this truncation when the class boundaries match
    and a filler or unit mediates otherwise.
    """

    data: ContractionData

    def representatives(self, dim: int, dirs) -> list[Term]:
        terms = self.data.universe.level(dim, dirs)
        by_root: dict[int, list[Term]] = {}
        for t in terms:
            by_root.setdefault(self.data.session.find(t.nid), []).append(t)
        return sorted((min(ms, key=lambda m: m.sort_key) for ms in by_root.values()),
                      key=lambda m: m.sort_key)

    def cls(self, t: Term) -> Term:
        return self.data.session.class_representative(t)

    def refl(self, d: int, t: Term) -> Term:
        out = self.data.builder.refl(d, t)
        self.data.refresh()
        return self.cls(out)

    def dual(self, d: int, t: Term) -> Term:
        out = self.data.builder.dual(d, t)
        self.data.refresh()
        return self.cls(out)

    def comp(self, d: int, x: Term, y: Term) -> Term:
        """Compose two classes via any on-the-nose composable members."""
        session = self.data.session
        b = self.data.builder
        ys = session.class_members(y)
        by_target: dict[int, list[Term]] = {}
        for m in ys:
            by_target.setdefault(b.boundary(m, d, "t").nid, []).append(m)
        for mx in sorted(session.class_members(x), key=lambda m: m.sort_key):
            for my in sorted(by_target.get(b.boundary(mx, d, "s").nid, []),
                             key=lambda m: m.sort_key):
                out = b.comp(d, mx, my)
                self.data.refresh()
                return self.cls(out)
        raise ContractionError(
            "no composable representatives at this truncation for the requested classes"
        )
