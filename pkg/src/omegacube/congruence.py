"""Word problem for free terms, decided by congruence closure.

The quotient that turns the free term algebra into a strict involutive
structure is generated by finitely many relation schemes: associativity,
two-sided units, functoriality of reflectors, the exchange law between
distinct directions, involutivity of duals, commutation of duals in
distinct directions, the anti-homomorphism and transverse homomorphism
laws for duals over compositions, and the self-duality of reflectors
(in the contracting and transverse forms).  Contraction universes add
one more scheme identifying each contraction cell with the reflector of
its source.

instantiate_relations grounds every scheme over a finite term universe.
CongruenceSession saturates the resulting pair set with a union-find
plus signature-table closure.  Beyond the usual operation compatibility
the closure also propagates merges to boundaries, because a congruence
here is required to be closed under faces as well; both closures only
ever create terms whose operation count is bounded by the terms already
present, so saturation reaches a fixpoint whenever the budget allows.

Verdicts are three-valued.  Equal comes with a merge trace, NotEqual
requires a separating evaluation into a concrete strict model, and
anything else is reported as Unknown rather than guessed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .presentation import ValidationReport, format_level
from .term import COMP, DUAL, GEN, KAPPA, REFL, Term, TermError, TermUniverse

FAMILIES = (
    "assoc",
    "unit-left",
    "unit-right",
    "id-functoriality",
    "exchange",
    "involutive",
    "star-commute",
    "star-antihomo",
    "star-homo-transverse",
    "id-hermitian",
    "id-hermitian-transverse",
    "contraction-projection",
)


@dataclass(frozen=True)
class RelationInstance:
    family: str
    left: Term
    right: Term

    def __repr__(self) -> str:
        return f"<{self.family}: {self.left.text} ~ {self.right.text}>"


def _composable_pairs(universe: TermUniverse, terms: list[Term], d: int):
    """Ordered pairs (x, y) at one level with source(x) matching target(y)."""
    b = universe.builder
    by_target: dict[int, list[Term]] = {}
    for y in terms:
        by_target.setdefault(b.boundary(y, d, "t").nid, []).append(y)
    for x in terms:
        for y in by_target.get(b.boundary(x, d, "s").nid, []):
            yield x, y


def instantiate_relations(
    universe: TermUniverse,
    *,
    families: set[str] | None = None,
    max_side_size: int | None = None,
    include_contraction: bool | None = None,
) -> list[RelationInstance]:
    """Ground every relation scheme over the terms of a universe.

    families restricts to a subset of scheme tags (useful for planting
    omissions in tests); max_side_size skips instances either side of
    which would exceed the given node count.  Contraction projections
    are included exactly when the universe was built in contraction
    mode, unless overridden.
    """
    if families is not None:
        unknown = set(families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown relation families {sorted(unknown)}")
    if include_contraction is None:
        include_contraction = universe.builder.mode == "contraction"
    b = universe.builder
    cfg = b.config
    out: list[RelationInstance] = []

    def want(family: str) -> bool:
        return families is None or family in families

    def fits(*sizes: int) -> bool:
        return max_side_size is None or max(sizes) <= max_side_size

    def emit(family: str, left: Term, right: Term) -> None:
        out.append(RelationInstance(family, left, right))

    for (dim, dirs), terms in universe.levels.items():
        upper_dirs = [
            d
            for d in range(1, cfg.dir_universe + 1)
            if d not in dirs and dim + 1 <= cfg.max_dim
        ]
        for x in terms:
            for d in dirs:
                # dual[d](dual[d](x)) ~ x
                if want("involutive") and fits(x.size + 2, x.size):
                    emit("involutive", b.dual(d, b.dual(d, x)), x)
                # comp[d](x, id[d](source)) ~ x ~ comp[d](id[d](target), x)
                sx = b.boundary(x, d, "s")
                tx = b.boundary(x, d, "t")
                if want("unit-right") and fits(x.size + sx.size + 2, x.size):
                    emit("unit-right", b.comp(d, x, b.refl(d, sx)), x)
                if want("unit-left") and fits(x.size + tx.size + 2, x.size):
                    emit("unit-left", b.comp(d, b.refl(d, tx), x), x)
                for e in dirs:
                    if e <= d:
                        continue
                    # duals in distinct directions commute
                    if want("star-commute") and fits(x.size + 2, x.size + 2):
                        emit(
                            "star-commute",
                            b.dual(e, b.dual(d, x)),
                            b.dual(d, b.dual(e, x)),
                        )
            for d in upper_dirs:
                # dual[d](id[d](x)) ~ id[d](x)
                if want("id-hermitian") and fits(x.size + 2, x.size + 1):
                    emit("id-hermitian", b.dual(d, b.refl(d, x)), b.refl(d, x))
                # dual[e](id[d](x)) ~ id[d](dual[e](x)) for e in the level
                if want("id-hermitian-transverse"):
                    for e in dirs:
                        if fits(x.size + 2, x.size + 2):
                            emit(
                                "id-hermitian-transverse",
                                b.dual(e, b.refl(d, x)),
                                b.refl(d, b.dual(e, x)),
                            )

        for d in dirs:
            pairs = list(_composable_pairs(universe, terms, d))
            for x, y in pairs:
                # dual[d] reverses a composition in its own direction
                if want("star-antihomo") and fits(x.size + y.size + 2, x.size + y.size + 3):
                    emit(
                        "star-antihomo",
                        b.dual(d, b.comp(d, x, y)),
                        b.comp(d, b.dual(d, y), b.dual(d, x)),
                    )
                # dual[e] passes through a d-composition for e distinct from d
                if want("star-homo-transverse"):
                    for e in dirs:
                        if e == d:
                            continue
                        if fits(x.size + y.size + 2, x.size + y.size + 3):
                            emit(
                                "star-homo-transverse",
                                b.dual(e, b.comp(d, x, y)),
                                b.comp(d, b.dual(e, x), b.dual(e, y)),
                            )
                # reflectors are functorial over lower compositions
                if want("id-functoriality"):
                    for up in upper_dirs:
                        if fits(x.size + y.size + 2, x.size + y.size + 3):
                            emit(
                                "id-functoriality",
                                b.refl(up, b.comp(d, x, y)),
                                b.comp(d, b.refl(up, x), b.refl(up, y)),
                            )
            if want("assoc"):
                by_target: dict[int, list[Term]] = {}
                for z in terms:
                    by_target.setdefault(b.boundary(z, d, "t").nid, []).append(z)
                for x, y in pairs:
                    for z in by_target.get(b.boundary(y, d, "s").nid, []):
                        if fits(x.size + y.size + z.size + 2, x.size + y.size + z.size + 2):
                            emit(
                                "assoc",
                                b.comp(d, x, b.comp(d, y, z)),
                                b.comp(d, b.comp(d, x, y), z),
                            )
        if want("exchange") and dim >= 2:
            for e in dirs:
                for f in dirs:
                    if f == e:
                        continue
                    e_pairs = list(_composable_pairs(universe, terms, e))
                    f_by_target: dict[int, list[Term]] = {}
                    for z in terms:
                        f_by_target.setdefault(b.boundary(z, f, "t").nid, []).append(z)
                    e_by_target: dict[int, list[Term]] = {}
                    for z in terms:
                        e_by_target.setdefault(b.boundary(z, e, "t").nid, []).append(z)
                    for x, y in e_pairs:
                        for w in f_by_target.get(b.boundary(x, f, "s").nid, []):
                            sy_f = b.boundary(y, f, "s").nid
                            sw_e = b.boundary(w, e, "s").nid
                            for z in e_by_target.get(sw_e, []):
                                if b.boundary(z, f, "t").nid != sy_f:
                                    continue
                                total = x.size + y.size + w.size + z.size + 3
                                if not fits(total, total):
                                    continue
                                emit(
                                    "exchange",
                                    b.comp(f, b.comp(e, x, y), b.comp(e, w, z)),
                                    b.comp(e, b.comp(f, x, w), b.comp(f, y, z)),
                                )
        if include_contraction and want("contraction-projection"):
            for t in terms:
                if t.kind == KAPPA:
                    emit("contraction-projection", t, b.refl(t.d, t.left))
    return out


# -- congruence closure ------------------------------------------------


@dataclass
class Decision:
    verdict: str  # "equal" | "not-equal" | "unknown"
    witness: dict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness}


class CongruenceSession:
    """Union-find over one builder arena, saturated against seeded pairs.

    The session tracks every node the builder has ever interned, so
    relation sides and boundary terms created on the fly participate in
    the closure automatically.  Saturation processes a work queue of
    merges; each merge propagates along three channels: signature
    collisions (operation compatibility), boundary pairs (face
    closure), and the proof forest used to reconstruct merge traces.
    Contraction cells are treated as atoms: two kappa nodes are never
    merged by congruence on their arguments, only by seeded relations
    or faces, which matches their role as chosen fillers rather than
    operations.
    """

    def __init__(self, universe: TermUniverse):
        self.universe = universe
        self.builder = universe.builder
        self._parent: list[int] = []
        self._rank: list[int] = []
        self._members: list[list[int]] = []
        self._class_parents: list[list[int]] = []
        self._sig: dict[tuple, int] = {}
        self._pending: deque[tuple[int, int, object]] = deque()
        self._pending_keys: set[tuple[int, int]] = set()
        self._pf_parent: dict[int, int] = {}
        self._pf_reason: dict[int, object] = {}
        self._ingested = 0
        self.merges = 0
        self.processed = 0
        self.seeded = 0
        self.completed = False
        self._ingest_new_nodes()

    # union-find ------------------------------------------------------

    def find(self, nid: int) -> int:
        parent = self._parent
        while parent[nid] != nid:
            parent[nid] = parent[parent[nid]]
            nid = parent[nid]
        return nid

    def same(self, a: Term, b: Term) -> bool:
        self._require_known(a)
        self._require_known(b)
        return self.find(a.nid) == self.find(b.nid)

    def class_members(self, t: Term) -> list[Term]:
        self._require_known(t)
        return [self.builder.terms[n] for n in self._members[self.find(t.nid)]]

    def _require_known(self, t: Term) -> None:
        if t.nid >= self._ingested:
            raise TermError(f"term {t.text} was created after the last saturation pass")

    # node intake -----------------------------------------------------

    def _signature(self, node: Term) -> tuple | None:
        if node.kind in (GEN, KAPPA):
            return None
        return (node.kind, node.d) + tuple(self.find(a.nid) for a in node.args)

    def _enqueue(self, a: int, b: int, reason: object) -> None:
        """Queue a merge, suppressing pairs already queued or already equal."""
        if a < self._ingested and b < self._ingested:
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                return
            key = (ra, rb) if ra < rb else (rb, ra)
            if key in self._pending_keys:
                return
            self._pending_keys.add(key)
        self._pending.append((a, b, reason))

    def _ingest_new_nodes(self) -> None:
        arena = self.builder.terms
        while self._ingested < len(arena):
            node = arena[self._ingested]
            nid = node.nid
            self._parent.append(nid)
            self._rank.append(0)
            self._members.append([nid])
            self._class_parents.append([])
            self._ingested += 1
            for a in node.args:
                self._class_parents[self.find(a.nid)].append(nid)
            sig = self._signature(node)
            if sig is not None:
                existing = self._sig.get(sig)
                if existing is None:
                    self._sig[sig] = nid
                else:
                    self._enqueue(existing, nid, ("congruence",))

    # merging ---------------------------------------------------------

    def _link_proof(self, a: int, b: int, reason: object) -> None:
        # re-root a's proof tree so the new edge can point at b
        path = []
        cur = a
        while cur in self._pf_parent:
            path.append(cur)
            cur = self._pf_parent[cur]
        for node in reversed(path):
            parent = self._pf_parent.pop(node)
            reason_edge = self._pf_reason.pop(node)
            self._pf_parent[parent] = node
            self._pf_reason[parent] = reason_edge
        self._pf_parent[a] = b
        self._pf_reason[a] = reason

    def _merge(self, a: int, b: int, reason: object) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        self._link_proof(a, b, reason)
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        elif self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1
        # ra absorbs rb
        self._parent[rb] = ra
        small_members = self._members[rb]
        self._members[ra].extend(small_members)
        self._members[rb] = []
        self.merges += 1

        term_a = self.builder.terms[a]
        term_b = self.builder.terms[b]
        for d in term_a.dirs:
            for side in ("s", "t"):
                fa = self.builder.boundary(term_a, d, side)
                fb = self.builder.boundary(term_b, d, side)
                if fa is not fb:
                    self._enqueue(fa.nid, fb.nid, ("faces", a, b, d, side))

        # only parents of the absorbed class change signature
        moved = self._class_parents[rb]
        self._class_parents[rb] = []
        for p in moved:
            node = self.builder.terms[p]
            sig = self._signature(node)
            if sig is None:
                continue
            existing = self._sig.get(sig)
            if existing is None:
                self._sig[sig] = p
            else:
                self._enqueue(existing, p, ("congruence",))
        self._class_parents[ra].extend(moved)

    # public API ------------------------------------------------------

    def seed(self, relations: list[RelationInstance]) -> "CongruenceSession":
        for idx, rel in enumerate(relations):
            self._pending.append(
                (rel.left.nid, rel.right.nid, ("seed", rel.family, idx))
            )
            self.seeded += 1
        self.completed = False
        return self

    def merge_terms(self, a: Term, b: Term, reason: str = "manual") -> None:
        self._pending.append((a.nid, b.nid, ("seed", reason, -1)))
        self.completed = False

    def saturate(self, budget: int | None = None) -> "CongruenceSession":
        """Process pending merges until fixpoint or until the budget runs out."""
        if budget is None:
            budget = self.builder.config.saturation_budget
        spent = 0
        while True:
            self._ingest_new_nodes()
            if not self._pending:
                if self._ingested == len(self.builder.terms):
                    self.completed = True
                    return self
                continue
            if spent >= budget:
                self.completed = False
                return self
            a, b, reason = self._pending.popleft()
            ra, rb = self.find(a), self.find(b)
            self._pending_keys.discard((ra, rb) if ra < rb else (rb, ra))
            if ra == rb:
                continue
            spent += 1
            self.processed += 1
            self._merge(a, b, reason)

    # explanations ----------------------------------------------------

    def explain(self, a: Term, b: Term) -> list[dict]:
        """A chain of proof-forest edges connecting two equal terms."""
        if not self.same(a, b):
            raise TermError(f"{a.text} and {b.text} are not in the same class")
        if a is b:
            return []

        def path_to_root(n: int) -> list[int]:
            out = [n]
            while out[-1] in self._pf_parent:
                out.append(self._pf_parent[out[-1]])
            return out

        pa = path_to_root(a.nid)
        pb = path_to_root(b.nid)
        on_a = {n: i for i, n in enumerate(pa)}
        meet = next(n for n in pb if n in on_a)
        steps = []
        for n in pa[: on_a[meet]]:
            steps.append((n, self._pf_parent[n], self._pf_reason[n]))
        tail = []
        for n in pb[: pb.index(meet)]:
            tail.append((self._pf_parent[n], n, self._pf_reason[n]))
        steps.extend(reversed(tail))
        terms = self.builder.terms
        return [
            {
                "left": terms[x].text,
                "right": terms[y].text,
                "by": _reason_text(reason),
            }
            for x, y, reason in steps
        ]

    def class_representative(self, t: Term) -> Term:
        """The smallest member of t's class, by (size, text)."""
        return min(self.class_members(t), key=lambda m: m.sort_key)

    def stats(self) -> dict:
        return {
            "nodes": self._ingested,
            "seeded": self.seeded,
            "merges": self.merges,
            "processed": self.processed,
            "completed": self.completed,
        }


def _reason_text(reason: object) -> str:
    kind = reason[0]
    if kind == "seed":
        return f"relation {reason[1]}"
    if kind == "faces":
        return f"{reason[4]}-face({reason[3]}) of a merged pair"
    return "operation compatibility"


def decide_equal(
    session: CongruenceSession,
    t1: Term,
    t2: Term,
    separators: list = (),
) -> Decision:
    """Three-valued verdict on a pair of same-level terms.

    Equal when saturation merged the two terms; the witness is a merge
    trace.  NotEqual only when some separating assignment evaluates the
    terms to different cells of its target model.  Unknown otherwise,
    with the session state in the witness.
    """
    if t1.level != t2.level:
        raise TermError(
            f"terms live at different levels {format_level(t1.level)} "
            f"and {format_level(t2.level)}"
        )
    arena = session.builder.terms
    for t in (t1, t2):
        if t.nid >= len(arena) or arena[t.nid] is not t:
            raise TermError(
                "decide_equal expects terms built by the session's own builder"
            )
    if t1.nid >= session._ingested or t2.nid >= session._ingested:
        session.saturate()
    if session.same(t1, t2):
        return Decision("equal", {"trace": session.explain(t1, t2)})
    from .strict import EvalError, Evaluator

    for i, assignment in enumerate(separators):
        ev = Evaluator(assignment)
        try:
            v1 = ev.eval(t1)
            v2 = ev.eval(t2)
        except EvalError:
            continue
        if v1 != v2:
            return Decision(
                "not-equal",
                {
                    "separator": i,
                    "target": assignment.target.name or "model",
                    "left_value": str(v1),
                    "right_value": str(v2),
                },
            )
    return Decision("unknown", {"session": session.stats()})


def audit_congruence(session: CongruenceSession) -> ValidationReport:
    """Re-scan a saturated session for closure violations.

    Confirms that signature-equal nodes share a class and that classes
    are closed under faces.  A clean report certifies the fixpoint
    really is a congruence on the enumerated fragment.
    """
    report = ValidationReport(subject="congruence-closure")
    b = session.builder
    groups: dict[tuple, int] = {}
    for node in b.terms[: session._ingested]:
        sig = session._signature(node)
        if sig is None:
            continue
        report.checked += 1
        first = groups.get(sig)
        if first is None:
            groups[sig] = node.nid
        elif session.find(first) != session.find(node.nid):
            report.add(
                "op-compat",
                node.level,
                f"{b.terms[first].text} and {node.text} have equal signatures "
                "but different classes",
            )
    for root, members in enumerate(session._members):
        if len(members) < 2:
            continue
        base = b.terms[members[0]]
        for other_nid in members[1:]:
            other = b.terms[other_nid]
            for d in base.dirs:
                for side in ("s", "t"):
                    report.checked += 1
                    fa = b.boundary(base, d, side)
                    fb = b.boundary(other, d, side)
                    if session.find(fa.nid) != session.find(fb.nid):
                        report.add(
                            "face-closure",
                            base.level,
                            f"classes of {base.text} and {other.text} agree but their "
                            f"{side}-faces in direction {d} do not",
                        )
    return report
