"""Concrete finite models and oracles.

Three ingredients live here.  First, finite involutive 1-categories
given by explicit tables, with factories for small standard examples
and a validator that exhausts every axiom instance.  Second, the
product construction: a family of involutive 1-categories indexed by
directions 1..K yields a strict involutive cubical category whose
level-(n, D) cells are tuples holding an arrow in the slots named by D
and an object elsewhere, with every operation acting slotwise.  Third,
independent oracles for dimension one: reduced words over the
generating arrows, a randomized rewriting normalizer, and a
length-truncated free involutive category that separates distinct
words under evaluation.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import product as iproduct

from .congruence import CongruenceSession, instantiate_relations
from .presentation import (
    CellRef,
    CubicalSetPresentation,
    PresentationError,
    SetMorphism,
    TruncationConfig,
    ValidationReport,
)
from .strict import GeneratorAssignment, Evaluator, StrictCategoryTable
from .term import (
    COMP,
    DUAL,
    GEN,
    REFL,
    Term,
    TermBuilder,
    TermError,
    TermUniverse,
    enumerate_free_magma,
)


class ModelError(Exception):
    """Raised for tables that cannot form the requested structure."""


@dataclass
class OneCategory:
    """A finite category: named objects and arrows, explicit tables."""

    name: str
    objects: list[str]
    arrows: dict[str, tuple[str, str]]  # arrow -> (source, target)
    compose: dict[tuple[str, str], str]  # (x, y) with src(x) = tgt(y) -> x after y
    identity: dict[str, str]  # object -> identity arrow


@dataclass
class InvolutiveOneCategory:
    """A finite category with a contravariant involution on arrows."""

    name: str
    objects: list[str]
    arrows: dict[str, tuple[str, str]]
    compose: dict[tuple[str, str], str]
    identity: dict[str, str]
    star: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "arrows": {k: list(v) for k, v in sorted(self.arrows.items())},
            "compose": [[x, y, z] for (x, y), z in sorted(self.compose.items())],
            "identity": dict(sorted(self.identity.items())),
            "star": dict(sorted(self.star.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InvolutiveOneCategory":
        try:
            compose = {(x, y): z for x, y, z in data["compose"]}
            return cls(
                name=data.get("name", ""),
                objects=list(data["objects"]),
                arrows={k: (v[0], v[1]) for k, v in data["arrows"].items()},
                compose=compose,
                identity=dict(data["identity"]),
                star=dict(data["star"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ModelError(f"malformed category data: {exc}") from None

    @classmethod
    def from_file(cls, path: str) -> "InvolutiveOneCategory":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_file(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _validate_category_core(c, report: ValidationReport) -> None:
    objs = set(c.objects)
    for f, (s, t) in c.arrows.items():
        report.checked += 1
        if s not in objs or t not in objs:
            report.add("arrow-typing", None, f"arrow {f!r} has unknown endpoint(s) ({s!r}, {t!r})")
    for o in c.objects:
        report.checked += 1
        i = c.identity.get(o)
        if i is None or i not in c.arrows:
            report.add("identity-missing", None, f"object {o!r} has no identity arrow")
        elif c.arrows[i] != (o, o):
            report.add("identity-typing", None, f"identity of {o!r} is not an endomorphism of it")
    composable = set()
    for x, (sx, tx) in c.arrows.items():
        for y, (sy, ty) in c.arrows.items():
            if sx == ty:
                composable.add((x, y))
                report.checked += 1
                z = c.compose.get((x, y))
                if z is None or z not in c.arrows:
                    report.add("compose-total", None, f"no composite for ({x!r}, {y!r})")
                elif c.arrows[z] != (sy, tx):
                    report.add(
                        "compose-typing",
                        None,
                        f"composite {z!r} of ({x!r}, {y!r}) has endpoints {c.arrows[z]}",
                    )
    for pair in sorted(set(c.compose) - composable):
        report.add("compose-domain", None, f"composite defined on non-composable pair {pair!r}")
    if report.violations:
        return
    for x, y in composable:
        for z, (sz, tz) in c.arrows.items():
            if c.arrows[y][0] == tz:
                report.checked += 1
                if c.compose[(c.compose[(x, y)], z)] != c.compose[(x, c.compose[(y, z)])]:
                    report.add("assoc", None, f"associativity fails on ({x!r}, {y!r}, {z!r})")
    for f, (s, t) in c.arrows.items():
        report.checked += 2
        if c.compose[(f, c.identity[s])] != f:
            report.add("unit-right", None, f"{f!r} absorbs the identity of {s!r} incorrectly")
        if c.compose[(c.identity[t], f)] != f:
            report.add("unit-left", None, f"the identity of {t!r} absorbs {f!r} incorrectly")


def validate_category(c: OneCategory) -> ValidationReport:
    report = ValidationReport(subject=f"category({c.name})")
    _validate_category_core(c, report)
    return report


def validate_involutive_category(c: InvolutiveOneCategory) -> ValidationReport:
    report = ValidationReport(subject=f"involutive-category({c.name})")
    _validate_category_core(c, report)
    if report.violations:
        return report
    for f, (s, t) in c.arrows.items():
        report.checked += 1
        g = c.star.get(f)
        if g is None or g not in c.arrows:
            report.add("star-total", None, f"no star for arrow {f!r}")
            continue
        if c.arrows[g] != (t, s):
            report.add("star-typing", None, f"star of {f!r} has endpoints {c.arrows[g]}")
            continue
        if c.star.get(g) != f:
            report.add("involutive", None, f"double star of {f!r} is {c.star.get(g)!r}")
    if report.violations:
        return report
    for (x, y), z in c.compose.items():
        report.checked += 1
        if c.star[z] != c.compose[(c.star[y], c.star[x])]:
            report.add("star-antihomo", None, f"star does not reverse the composite of ({x!r}, {y!r})")
    for o in c.objects:
        report.checked += 1
        if c.star[c.identity[o]] != c.identity[o]:
            report.add("id-hermitian", None, f"identity of {o!r} is not self-dual")
    return report


def groupoid_involution(c: OneCategory) -> InvolutiveOneCategory:
    """Equip a finite groupoid with stars given by inverses.

    Rejects the input, naming the witness, if some arrow has no
    two-sided inverse.
    """
    star: dict[str, str] = {}
    for f, (s, t) in c.arrows.items():
        inverse = None
        for g, (sg, tg) in c.arrows.items():
            if (sg, tg) != (t, s):
                continue
            if c.compose.get((f, g)) == c.identity[t] and c.compose.get((g, f)) == c.identity[s]:
                inverse = g
                break
        if inverse is None:
            raise ModelError(f"arrow {f!r} of {c.name!r} is not invertible")
        star[f] = inverse
    return InvolutiveOneCategory(
        name=f"{c.name}^grpd",
        objects=list(c.objects),
        arrows=dict(c.arrows),
        compose=dict(c.compose),
        identity=dict(c.identity),
        star=star,
    )


# -- standard small categories ----------------------------------------


def walking_isomorphism() -> InvolutiveOneCategory:
    """Two objects, one isomorphism between them, stars by inversion."""
    arrows = {
        "ia": ("a", "a"),
        "ib": ("b", "b"),
        "u": ("a", "b"),
        "v": ("b", "a"),
    }
    compose = {}
    for x, (sx, tx) in arrows.items():
        for y, (sy, ty) in arrows.items():
            if sx == ty:
                if x.startswith("i"):
                    compose[(x, y)] = y
                elif y.startswith("i"):
                    compose[(x, y)] = x
                else:
                    compose[(x, y)] = "ia" if sy == "a" else "ib"
    return InvolutiveOneCategory(
        name="walking-iso",
        objects=["a", "b"],
        arrows=arrows,
        compose=compose,
        identity={"a": "ia", "b": "ib"},
        star={"ia": "ia", "ib": "ib", "u": "v", "v": "u"},
    )


def pair_groupoid(n: int) -> InvolutiveOneCategory:
    """Objects 1..n with exactly one arrow between any ordered pair."""
    objects = [f"o{i}" for i in range(1, n + 1)]
    arrows = {f"p{i}{j}": (f"o{j}", f"o{i}") for i in range(1, n + 1) for j in range(1, n + 1)}
    compose = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                compose[(f"p{i}{j}", f"p{j}{k}")] = f"p{i}{k}"
    return InvolutiveOneCategory(
        name=f"pair{n}",
        objects=objects,
        arrows=arrows,
        compose=compose,
        identity={f"o{i}": f"p{i}{i}" for i in range(1, n + 1)},
        star={f"p{i}{j}": f"p{j}{i}" for i in range(1, n + 1) for j in range(1, n + 1)},
    )


def cyclic_group_category(n: int) -> InvolutiveOneCategory:
    """One object whose arrows form the cyclic group of order n."""
    arrows = {f"g{i}": ("e", "e") for i in range(n)}
    return InvolutiveOneCategory(
        name=f"cyclic{n}",
        objects=["e"],
        arrows=arrows,
        compose={(f"g{i}", f"g{j}"): f"g{(i + j) % n}" for i in range(n) for j in range(n)},
        identity={"e": "g0"},
        star={f"g{i}": f"g{(-i) % n}" for i in range(n)},
    )


def walking_arrow() -> OneCategory:
    """Two objects and one non-invertible arrow; no involution exists."""
    arrows = {"ia": ("a", "a"), "ib": ("b", "b"), "u": ("a", "b")}
    compose = {
        ("ia", "ia"): "ia",
        ("ib", "ib"): "ib",
        ("u", "ia"): "u",
        ("ib", "u"): "u",
    }
    return OneCategory(
        name="walking-arrow",
        objects=["a", "b"],
        arrows=arrows,
        compose=compose,
        identity={"a": "ia", "b": "ib"},
    )


# -- the product construction -----------------------------------------


def _subsets(universe: list[int], max_size: int):
    out = [()]
    for d in universe:
        out = out + [s + (d,) for s in out if len(s) < max_size]
    return sorted(out, key=lambda s: (len(s), s))


def build_product(
    family: list[InvolutiveOneCategory], config: TruncationConfig, name: str = ""
) -> StrictCategoryTable:
    """Slotwise product of involutive 1-categories, one per direction.

    The factor for direction d contributes an arrow to slot d of every
    cell whose level contains d, and an object otherwise.  Faces,
    reflectors, duals, and compositions all act in the named slot and
    leave the rest alone, which is what makes every axiom reduce to its
    one-dimensional counterpart in each factor.
    """
    if len(family) != config.dir_universe:
        raise ModelError(
            f"need one factor per direction: family has {len(family)}, "
            f"config names directions 1..{config.dir_universe}"
        )
    k = len(family)
    name = name or "x".join(c.name for c in family)

    def slot_names(j: int, with_arrow: bool) -> list[str]:
        c = family[j - 1]
        return sorted(c.arrows) if with_arrow else sorted(c.objects)

    def cell_name(parts: tuple[str, ...]) -> str:
        return "|".join(parts)

    cells: dict = {}
    tuples_at: dict = {}
    for dirs in _subsets(list(range(1, k + 1)), config.max_dim):
        level = (len(dirs), dirs)
        pools = [slot_names(j, j in dirs) for j in range(1, k + 1)]
        tuples_at[level] = [tuple(parts) for parts in iproduct(*pools)]
        cells[level] = [cell_name(t) for t in tuples_at[level]]

    faces: dict = {}
    for (dim, dirs), tuples in tuples_at.items():
        if dim == 0:
            continue
        for d in dirs:
            c = family[d - 1]
            for side_idx, side in enumerate(("s", "t")):
                table = {}
                for parts in tuples:
                    image = list(parts)
                    image[d - 1] = c.arrows[parts[d - 1]][side_idx]
                    table[cell_name(parts)] = cell_name(tuple(image))
                faces[(dim, dirs, d, side)] = table

    underlying = CubicalSetPresentation(config, cells, faces, name=name)

    refl: dict = {}
    dual: dict = {}
    comp: dict = {}
    for (dim, dirs), tuples in tuples_at.items():
        for d in dirs:
            c = family[d - 1]
            dual[(dim, dirs, d)] = {
                cell_name(parts): cell_name(
                    tuple(c.star[p] if j == d else p for j, p in enumerate(parts, start=1))
                )
                for parts in tuples
            }
            low_level = (dim - 1, tuple(e for e in dirs if e != d))
            refl[(dim, dirs, d)] = {
                cell_name(parts): cell_name(
                    tuple(c.identity[p] if j == d else p for j, p in enumerate(parts, start=1))
                )
                for parts in tuples_at[low_level]
            }
            table: dict = {}
            for xs in tuples:
                for ys in tuples:
                    if any(xs[j] != ys[j] for j in range(k) if j != d - 1):
                        continue
                    z = c.compose.get((xs[d - 1], ys[d - 1]))
                    if z is None:
                        continue
                    zs = tuple(z if j == d else xs[j - 1] for j in range(1, k + 1))
                    table[(cell_name(xs), cell_name(ys))] = cell_name(zs)
            comp[(dim, dirs, d)] = table
    return StrictCategoryTable(underlying, refl, dual, comp, name=name)


# -- fixture presentations --------------------------------------------


def two_generator_quiver(config: TruncationConfig | None = None) -> CubicalSetPresentation:
    """Three objects a, b, c with composable generators f: a->b, g: b->c."""
    config = config or TruncationConfig()
    return CubicalSetPresentation(
        config,
        cells={(0, ()): ["a", "b", "c"], (1, (1,)): ["f", "g"]},
        faces={
            (1, (1,), 1, "s"): {"f": "a", "g": "b"},
            (1, (1,), 1, "t"): {"f": "b", "g": "c"},
        },
        name="two-generator-quiver",
    )


def rich_loop_target(config: TruncationConfig | None = None) -> CubicalSetPresentation:
    """Two objects with a pair of parallel 1-cells for every ordered pair."""
    config = config or TruncationConfig()
    names = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    for s in ("u", "v"):
        for t in ("u", "v"):
            for tag in ("A", "B"):
                n = f"{tag}{s}{t}"
                names.append(n)
                src[n] = s
                tgt[n] = t
    return CubicalSetPresentation(
        config,
        cells={(0, ()): ["u", "v"], (1, (1,)): names},
        faces={(1, (1,), 1, "s"): src, (1, (1,), 1, "t"): tgt},
        name="rich-loop-target",
    )


def as_strict_table(c: InvolutiveOneCategory, direction: int = 1) -> StrictCategoryTable:
    """View an involutive 1-category as a 1-truncated strict table."""
    d = direction
    config = TruncationConfig(max_dim=1, dir_universe=max(1, d), term_depth=1)
    cells = {(0, ()): sorted(c.objects), (1, (d,)): sorted(c.arrows)}
    faces = {
        (1, (d,), d, "s"): {f: st[0] for f, st in c.arrows.items()},
        (1, (d,), d, "t"): {f: st[1] for f, st in c.arrows.items()},
    }
    underlying = CubicalSetPresentation(config, cells, faces, name=c.name)
    return StrictCategoryTable(
        underlying,
        refl={(1, (d,), d): dict(c.identity)},
        dual={(1, (d,), d): dict(c.star)},
        comp={(1, (d,), d): dict(c.compose)},
        name=c.name,
    )


# -- dimension-1 word oracle ------------------------------------------


@dataclass(frozen=True)
class Word1:
    """A reduced word at dimension one.

    letters is a sequence of (generator name, starred) pairs read in
    function-composition order; an empty sequence is the identity word
    at the object named by obj.
    """

    letters: tuple[tuple[str, bool], ...]
    obj: str | None = None

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if self.is_identity:
            return f"1({self.obj})"
        return ".".join(f"{g}'" if starred else g for g, starred in self.letters)


def normal_form_dim1(t: Term) -> Word1:
    """Reduced-word normal form of a term of dimension at most one.

    Duals reverse the word and flip each letter's star; compositions
    concatenate; reflectors of objects are identity words, which vanish
    inside concatenations.
    """
    if t.dim > 1:
        raise TermError(f"{t.text} has dimension {t.dim}; the word oracle covers dims 0 and 1")
    if t.kind == GEN:
        if t.dim == 0:
            return Word1((), obj=t.cell.name)
        return Word1(((t.cell.name, False),))
    if t.kind == REFL:
        base = normal_form_dim1(t.body)
        return Word1((), obj=base.obj)
    if t.kind == DUAL:
        w = normal_form_dim1(t.body)
        if w.is_identity:
            return w
        return Word1(tuple((g, not s) for g, s in reversed(w.letters)))
    if t.kind == COMP:
        wl = normal_form_dim1(t.left)
        wr = normal_form_dim1(t.right)
        if wl.is_identity:
            return wr
        if wr.is_identity:
            return wl
        return Word1(wl.letters + wr.letters)
    raise TermError(f"{t.text}: no dimension-1 normal form for kind {t.kind!r}")


def rewrite_normalize(builder: TermBuilder, t: Term, rng, max_steps: int = 10_000) -> Term:
    """Normalize a dimension-<=1 term by randomly ordered rewriting.

    Applies one randomly chosen redex at a time: double-dual removal,
    dual pushed through compositions and reflectors, unit deletion, and
    right reassociation.  The system terminates and is confluent at
    dimension one, so the result is independent of rng; tests exploit
    exactly that.
    """
    b = builder

    def redexes(node: Term, path: tuple[int, ...]) -> list[tuple[tuple[int, ...], str]]:
        found = []
        if node.kind == DUAL:
            inner = node.body
            if inner.kind == DUAL and inner.d == node.d:
                found.append((path, "dual-dual"))
            if inner.kind == COMP and inner.d == node.d:
                found.append((path, "dual-comp"))
            if inner.kind == REFL and inner.d == node.d:
                found.append((path, "dual-refl"))
        if node.kind == COMP:
            if node.right.kind == REFL and node.right.d == node.d:
                found.append((path, "unit-right"))
            if node.left.kind == REFL and node.left.d == node.d:
                found.append((path, "unit-left"))
            if node.left.kind == COMP and node.left.d == node.d:
                found.append((path, "reassoc"))
        for i, a in enumerate(node.args):
            found.extend(redexes(a, path + (i,)))
        return found

    def rewrite_at(node: Term, path: tuple[int, ...], rule: str) -> Term:
        if path:
            i = path[0]
            args = list(node.args)
            args[i] = rewrite_at(args[i], path[1:], rule)
            if node.kind == REFL:
                return b.refl(node.d, args[0])
            if node.kind == DUAL:
                return b.dual(node.d, args[0])
            return b.comp(node.d, args[0], args[1])
        if rule == "dual-dual":
            return node.body.body
        if rule == "dual-comp":
            inner = node.body
            return b.comp(node.d, b.dual(node.d, inner.right), b.dual(node.d, inner.left))
        if rule == "dual-refl":
            return node.body
        if rule == "unit-right":
            return node.left
        if rule == "unit-left":
            return node.right
        if rule == "reassoc":
            inner = node.left
            return b.comp(node.d, inner.left, b.comp(node.d, inner.right, node.right))
        raise TermError(f"unknown rewrite rule {rule!r}")  # pragma: no cover

    current = t
    for _ in range(max_steps):
        found = redexes(current, ())
        if not found:
            return current
        path, rule = found[rng.randrange(len(found))]
        current = rewrite_at(current, path, rule)
    raise TermError("rewriting did not terminate within the step limit")


def word_of_reduced(t: Term) -> Word1:
    """Read the word off a fully rewritten dimension-1 term."""
    if t.kind == REFL:
        return Word1((), obj=t.body.cell.name)
    letters: list[tuple[str, bool]] = []

    def walk(node: Term) -> None:
        if node.kind == GEN:
            letters.append((node.cell.name, False))
        elif node.kind == DUAL and node.body.kind == GEN:
            letters.append((node.body.cell.name, True))
        elif node.kind == COMP:
            walk(node.left)
            walk(node.right)
        else:
            raise TermError(f"{node.text} is not in reduced form")

    walk(t)
    return Word1(tuple(letters))


# -- the separating model for dimension one ---------------------------


def truncated_free_involutive_category(
    p: CubicalSetPresentation, direction: int = 1, max_len: int = 6
) -> InvolutiveOneCategory:
    """Reduced words over a quiver's arrows, cut off at a length bound.

    Arrows are the composable letter sequences of length up to max_len
    over the generating arrows and their formal duals, plus an identity
    per object and one absorbing zero arrow per ordered object pair.
    Composition concatenates and collapses to the zero arrow on
    overflow; since word length is additive, the collapse is associative
    and compatible with the star, which reverses a word and flips its
    letters.  Evaluating a free term here computes its reduced word
    exactly as long as the word fits, which makes the category a
    complete separator for terms below the bound.
    """
    objects = sorted(c.name for c in p.cells.get((0, ()), []))
    gens = p.cells.get((1, (direction,)), [])
    letters: dict[str, tuple[str, str]] = {}
    for g in gens:
        s = p.face(g, direction, "s").name
        t = p.face(g, direction, "t").name
        letters[g.name] = (s, t)
        letters[g.name + "'"] = (t, s)

    def zero_name(s: str, t: str) -> str:
        return f"z.{s}.{t}"

    def id_name(o: str) -> str:
        return f"e.{o}"

    arrows: dict[str, tuple[str, str]] = {}
    for o in objects:
        arrows[id_name(o)] = (o, o)
    for s in objects:
        for t in objects:
            arrows[zero_name(s, t)] = (s, t)
    words: dict[str, tuple[str, ...]] = {}
    frontier = {(l,): ep for l, ep in letters.items()}
    for _ in range(max_len):
        next_frontier: dict[tuple[str, ...], tuple[str, str]] = {}
        for word, (s, t) in frontier.items():
            name = ".".join(word)
            if name not in words:
                words[name] = word
                arrows[name] = (s, t)
                for l, (ls, lt) in letters.items():
                    if lt == s:
                        next_frontier[word + (l,)] = (ls, t)
        frontier = next_frontier

    def flip(letter: str) -> str:
        return letter[:-1] if letter.endswith("'") else letter + "'"

    star: dict[str, str] = {}
    for o in objects:
        star[id_name(o)] = id_name(o)
    for s in objects:
        for t in objects:
            star[zero_name(s, t)] = zero_name(t, s)
    for name, word in words.items():
        star[name] = ".".join(flip(l) for l in reversed(word))

    ids = {id_name(o) for o in objects}
    compose: dict[tuple[str, str], str] = {}
    for x, (sx, tx) in arrows.items():
        for y, (sy, ty) in arrows.items():
            if sx != ty:
                continue
            if x in ids:
                compose[(x, y)] = y
            elif y in ids:
                compose[(x, y)] = x
            elif x in words and y in words:
                merged = words[x] + words[y]
                if len(merged) <= max_len:
                    compose[(x, y)] = ".".join(merged)
                else:
                    compose[(x, y)] = zero_name(sy, tx)
            else:
                # at least one absorbing zero arrow in the pair
                compose[(x, y)] = zero_name(sy, tx)
    return InvolutiveOneCategory(
        name=f"free-words-{max_len}({p.name or 'quiver'})",
        objects=objects,
        arrows=arrows,
        compose=compose,
        identity={o: id_name(o) for o in objects},
        star=star,
    )


def word_separator(
    p: CubicalSetPresentation, direction: int = 1, max_len: int = 6
) -> GeneratorAssignment:
    """The canonical assignment of a quiver into its truncated word model."""
    table = as_strict_table(
        truncated_free_involutive_category(p, direction, max_len), direction
    )
    maps = {
        (0, ()): {c.name: c.name for c in p.cells.get((0, ()), [])},
        (1, (direction,)): {c.name: c.name for c in p.cells.get((1, (direction,)), [])},
    }
    return GeneratorAssignment(p, table, maps, name=f"words-{max_len}")


# -- oracle comparison ------------------------------------------------


@dataclass
class OracleReport:
    """Outcome of playing the congruence against the word oracle."""

    universe_size: int
    pairs: int = 0
    equal_pairs: int = 0
    not_equal_pairs: int = 0
    unknown_pairs: int = 0
    contradictions: list[dict] = field(default_factory=list)
    incomplete: list[dict] = field(default_factory=list)
    session: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.contradictions and not self.incomplete and self.unknown_pairs == 0

    def to_dict(self) -> dict:
        return {
            "universe_size": self.universe_size,
            "pairs": self.pairs,
            "equal_pairs": self.equal_pairs,
            "not_equal_pairs": self.not_equal_pairs,
            "unknown_pairs": self.unknown_pairs,
            "contradictions": self.contradictions,
            "incomplete": self.incomplete,
            "session": self.session,
            "ok": self.ok,
        }


def oracle_compare(
    p: CubicalSetPresentation,
    *,
    depth: int | None = None,
    size_cap: int | None = 6,
    budget: int | None = None,
    max_side_size: int | None = None,
    separator_len: int = 6,
    families: Iterable[str] | None = None,
    direction: int = 1,
) -> OracleReport:
    """Compare congruence verdicts with reduced words on every pair.

    Enumerates the dimension-<=1 universe, saturates the full relation
    set, then sweeps all unordered same-level pairs of objects and of
    arrows in the chosen direction (the word model covers exactly that
    fragment).  A contradiction is fatal either way round: identified
    terms with different words, or separated terms with equal words.
    Pairs with equal words that the closure failed to identify are
    listed as incomplete; pairs the separator cannot tell apart count
    as unknown.
    """
    universe = enumerate_free_magma(p, depth, size_cap=size_cap, max_stage_dim=1)
    relations = instantiate_relations(universe, families=families, max_side_size=max_side_size)
    session = CongruenceSession(universe).seed(relations).saturate(budget)
    assignment = word_separator(p, direction=direction, max_len=separator_len)
    ev = Evaluator(assignment)
    report = OracleReport(universe_size=universe.size, session=session.stats())
    for level, terms in sorted(universe.levels.items()):
        if level[1] not in ((), (direction,)):
            continue
        roots = [session.find(t.nid) for t in terms]
        images = [ev.eval(t) for t in terms]
        words = [str(normal_form_dim1(t)) for t in terms]
        n = len(terms)
        for i in range(n):
            for j in range(i + 1, n):
                report.pairs += 1
                same_class = roots[i] == roots[j]
                same_word = words[i] == words[j]
                if same_class:
                    report.equal_pairs += 1
                    if not same_word:
                        report.contradictions.append(
                            {
                                "left": terms[i].text,
                                "right": terms[j].text,
                                "problem": "identified by the closure but the words "
                                f"differ: {words[i]} vs {words[j]}",
                            }
                        )
                elif images[i] != images[j]:
                    report.not_equal_pairs += 1
                    if same_word:
                        report.contradictions.append(
                            {
                                "left": terms[i].text,
                                "right": terms[j].text,
                                "problem": "separated by evaluation but the words agree",
                            }
                        )
                else:
                    report.unknown_pairs += 1
                    if same_word:
                        report.incomplete.append(
                            {
                                "left": terms[i].text,
                                "right": terms[j].text,
                                "problem": f"words agree ({words[i]}) but the closure "
                                "did not identify the pair",
                            }
                        )
    return report


# -- randomized assignments and morphisms -----------------------------


def _random_cell_maps(p: CubicalSetPresentation, target, face_of, rng, tries: int = 200):
    """Shared draw logic: images for 0-cells, then compatible 1-cells."""
    zero_level = (0, ())
    one_levels = [lv for lv in p.cells if lv[0] == 1]
    if any(lv[0] > 1 for lv in p.cells):
        raise ModelError("random assignments cover sources with cells of dimension <= 1")
    t0 = sorted(c.name for c in target.cells.get(zero_level, []))
    if not t0:
        raise ModelError("target has no 0-cells")
    indexes = {}
    for lv in one_levels:
        d = lv[1][0]
        idx: dict[tuple[str, str], list[str]] = {}
        for c in target.cells.get(lv, []):
            key = (face_of(c, d, "s").name, face_of(c, d, "t").name)
            idx.setdefault(key, []).append(c.name)
        for v in idx.values():
            v.sort()
        indexes[lv] = idx
    for _ in range(tries):
        maps = {zero_level: {c.name: rng.choice(t0) for c in p.cells.get(zero_level, [])}}
        ok = True
        for lv in one_levels:
            d = lv[1][0]
            table = {}
            for c in p.cells[lv]:
                s_img = maps[zero_level][p.face(c, d, "s").name]
                t_img = maps[zero_level][p.face(c, d, "t").name]
                candidates = indexes[lv].get((s_img, t_img), [])
                if not candidates:
                    ok = False
                    break
                table[c.name] = rng.choice(candidates)
            if not ok:
                break
            maps[lv] = table
        if ok:
            return maps
    raise ModelError("no face-compatible random assignment found within the retry limit")


def random_assignment(
    p: CubicalSetPresentation, table: StrictCategoryTable, rng, name: str = ""
) -> GeneratorAssignment:
    """A random face-compatible generator assignment into a strict table."""
    q = table.underlying
    maps = _random_cell_maps(p, q, q.face, rng)
    return GeneratorAssignment(p, table, maps, name=name or "random-assignment")


def random_set_morphism(
    p: CubicalSetPresentation, q: CubicalSetPresentation, rng, name: str = ""
) -> SetMorphism:
    """A random face-compatible morphism between presentations."""
    maps = _random_cell_maps(p, q, q.face, rng)
    return SetMorphism(p, q, maps, name=name or "random-morphism")
