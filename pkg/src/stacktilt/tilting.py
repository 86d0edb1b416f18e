"""Classification of tilting bundles of line bundles, rank one and two.

Rank one: classes of complete-representative antichains in the graded
group, each certified against the cut picture (the endomorphism quiver
must match the algebra presentation of the corresponding cut).  Rank
two: an outer enumeration over the rank-one quotient order, then an
inner enumeration over the fibered poset above each base class, with
the rigidity and top-Ext certificates re-checked per class.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import cuts as cuts_mod
from . import upper_sets as us
from .abgroup import GroupElement
from .errors import InputError, InternalInvariantBroken
from .graded_order import GradedDegreeGroup, SignSplit
from .quiver import Arrow, QuiverPresentation, Relation, monomial_label
from .stacky_geom import CohomologyOracle


class FiberedPoset:
    """q^{-1}(J) inside G: one shift orbit per element of the base class J."""

    def __init__(self, ctx: GradedDegreeGroup, split: SignSplit,
                 base: us.AntichainRep):
        self.ctx = ctx
        self.split = split
        self.base = base
        self.shift_element = ctx.p
        self.theta_p = ctx.theta_val(ctx.p)
        self._samples = {}
        for h in base.elements:
            self._samples[h.coords] = split.q.section(h)
        self.fibers = tuple(sorted(self._samples))
        self.supports_local_check = False

    def leq(self, a: GroupElement, b: GroupElement) -> bool:
        return self.ctx.leq(a, b)

    def shift(self, a: GroupElement, n: int) -> GroupElement:
        return a + n * self.shift_element

    def fiber_key(self, a: GroupElement):
        return self.split.q(a).coords

    def fiber_sample(self, key) -> GroupElement:
        return self._samples[key]

    def theta(self, a: GroupElement) -> int:
        return self.ctx.theta_val(a)


@dataclass
class TiltingClass:
    rank: int
    ctx: GradedDegreeGroup
    rep: us.AntichainRep
    quiver: QuiverPresentation
    class_id: str
    base: Optional[us.AntichainRep] = None     # rank two: the J-class over H
    split: Optional[SignSplit] = None

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        return self.rep.elements

    def degrees_json(self) -> list:
        return [list(e.coords) for e in self.elements]


def _class_id(rank: int, elements: Sequence[GroupElement]) -> str:
    payload = json.dumps([rank] + [list(e.coords) for e in elements])
    return hashlib.sha1(payload.encode()).hexdigest()[:12]


def endomorphism_quiver(ctx: GradedDegreeGroup,
                        elements: Sequence[GroupElement],
                        with_relations: bool = False) -> QuiverPresentation:
    """Arrows are the irreducible monomials between members of the class.

    A monomial m from g to h is irreducible when no proper factorization
    passes through another member; arrow multiplicity is the number of
    such monomials.  Commutativity relations are emitted on request
    (rank one only, where they present the algebra).
    """
    verts = sorted({e.coords for e in elements})
    members = {e.coords: e for e in elements}
    elems = [members[v] for v in verts]
    arrows = []
    hom_matrix = {}
    for g, h in itertools.product(elems, repeat=2):
        monos = [a for a in ctx.monomials(h - g) if any(a)]
        hom_matrix[(g.coords, h.coords)] = len(monos) + (1 if g == h else 0)
        for a in monos:
            if _is_irreducible(ctx, members, g, a):
                arrows.append(Arrow(g.coords, h.coords, monomial_label(a)))
    relations: list[Relation] = []
    if with_relations:
        for g in elems:
            for i in range(ctx.n):
                for j in range(i + 1, ctx.n):
                    gi = g + ctx.degrees[i]
                    gj = g + ctx.degrees[j]
                    gij = gi + ctx.degrees[j]
                    if (gi.coords in members and gj.coords in members
                            and gij.coords in members):
                        relations.append(Relation(
                            source=g.coords, target=gij.coords,
                            path_a=(f"x{i + 1}", f"x{j + 1}"),
                            path_b=(f"x{j + 1}", f"x{i + 1}")))
    return QuiverPresentation(vertices=tuple(verts), arrows=tuple(arrows),
                              relations=tuple(relations),
                              hom_matrix=hom_matrix)


def _is_irreducible(ctx: GradedDegreeGroup, members: dict,
                    g: GroupElement, mono: tuple[int, ...]) -> bool:
    for split in itertools.product(*(range(a + 1) for a in mono)):
        if not any(split) or split == mono:
            continue
        mid = g
        for i, b in enumerate(split):
            if b:
                mid = mid + b * ctx.degrees[i]
        if mid.coords in members:
            return False
    return True


def _certify_rank1(ctx: GradedDegreeGroup, rep: us.AntichainRep,
                   quiver: QuiverPresentation, lq, gamma) -> None:
    """Endomorphism quiver must equal the algebra presentation of the cut."""
    cut, _ = cuts_mod.cut_of_antichain(ctx, rep, lq, gamma)
    algebra = cuts_mod.algebra_presentation(lq, cut)
    psi = cuts_mod.fiber_map(lq, ctx)
    _, _, proj = ctx.coset_reps_mod_p()
    algebra_arrows = {(psi[a.source], int(a.label[1:]) - 1)
                      for a in algebra.arrows}
    endo_arrows = set()
    for a in quiver.arrows:
        if "*" in a.label or "^" in a.label:
            raise InternalInvariantBroken(
                "rank-one endomorphism quiver has a composite arrow")
        g = next(e for e in rep.elements if e.coords == a.source)
        endo_arrows.add((proj(g).coords, int(a.label[1:]) - 1))
    if algebra_arrows != endo_arrows:
        raise InternalInvariantBroken(
            "endomorphism quiver disagrees with the cut presentation")
    algebra_rel = sorted((psi[r.source], r.path_a) for r in algebra.relations)
    endo_rel = sorted(
        (proj(next(e for e in rep.elements if e.coords == r.source)).coords,
         r.path_a)
        for r in quiver.relations)
    if algebra_rel != endo_rel:
        raise InternalInvariantBroken(
            "relations disagree with the cut presentation")


def classify_rank1(ctx: GradedDegreeGroup, mode: str = "paper",
                   max_classes: int = 10_000,
                   rng=None) -> list[TiltingClass]:
    """All tilting classes of line bundles for a rank-one graded group."""
    if ctx.group.free_rank != 1:
        raise InputError("classify_rank1 needs a rank-one graded group")
    translation = "full" if mode == "paper" else "zp"
    poset = us.GroupPoset(ctx)
    reps = us.enumerate_classes(poset, translation, max_classes, rng=rng)
    lq, gamma = cuts_mod.data_of_group(ctx)
    out = []
    for rep in reps:
        quiver = endomorphism_quiver(ctx, rep.elements, with_relations=True)
        _certify_rank1(ctx, rep, quiver, lq, gamma)
        out.append(TiltingClass(rank=1, ctx=ctx, rep=rep, quiver=quiver,
                                class_id=_class_id(1, rep.elements)))
    return out


@dataclass
class Rank2Group:
    """All inner classes over one base class J."""

    base: us.AntichainRep
    base_id: str
    classes: list[TiltingClass]
    merged_class_count: int = 0


@dataclass
class Rank2Classification:
    split: SignSplit
    groups: list[Rank2Group]

    @property
    def classes(self) -> list[TiltingClass]:
        return [tc for grp in self.groups for tc in grp.classes]


def _certify_rank2(ctx: GradedDegreeGroup, split: SignSplit,
                   rep: us.AntichainRep) -> None:
    """Rigidity (no base comparison through s) and vanishing top Ext."""
    h = split.h_ctx
    for g1, g2 in itertools.product(rep.elements, repeat=2):
        if h.leq(split.q(g2) + split.s, split.q(g1)):
            raise InternalInvariantBroken(
                "rigidity certificate failed: q(g) >= q(h) + s")
        if ctx.hom_dim(g1 - g2 - ctx.p) != 0:
            raise InternalInvariantBroken(
                "top-Ext certificate failed: S_{g-h-p} != 0")


def _stabilizer_merged_count(split: SignSplit, fp: FiberedPoset,
                             inner: list[us.AntichainRep]) -> int:
    """Inner classes identified also under translations fixing the base.

    A translation fixing the finite base class setwise preserves its theta
    multiset, so it must be torsion in H; only those are tried.
    """
    h_group = split.h_ctx.group
    base_set = set(rep_h.coords for rep_h in fp.base.elements)
    stab = []
    for tors in itertools.product(*(range(o) for o in h_group.torsion_orders)):
        cand = h_group.from_coords(tors + (0,) * h_group.free_rank)
        if cand.is_zero():
            continue
        if {(e + cand).coords for e in fp.base.elements} == base_set:
            stab.append(cand)
    keys = {rep.key(): i for i, rep in enumerate(inner)}
    parent = list(range(len(inner)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, rep in enumerate(inner):
        for t in stab:
            lift = split.q.section(t)
            moved = us.AntichainRep(fp, [e + lift for e in rep.elements])
            canon = us.canonical_form(moved, "zp")
            j = keys.get(canon.key())
            if j is None:
                raise InternalInvariantBroken(
                    "stabilizer translate left the class list")
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(len(inner))})


def classify_rank2(ctx: GradedDegreeGroup, mode: str = "paper",
                   max_classes: int = 10_000,
                   rng=None) -> Rank2Classification:
    """d-tilting classes for a rank-two graded group, grouped by base class.

    The base classes over H are counted up to full translation in "paper"
    mode; inner classes are always counted up to shifts by p.
    """
    if ctx.group.free_rank != 2:
        raise InputError("classify_rank2 needs a rank-two graded group")
    split = ctx.sign_split()
    h_poset = us.GroupPoset(split.h_ctx, shift_element=split.s)
    translation = "full" if mode == "paper" else "zp"
    base_classes = us.enumerate_classes(h_poset, translation, max_classes,
                                        rng=rng)
    groups = []
    for base in base_classes:
        fp = FiberedPoset(ctx, split, base)
        inner = us.enumerate_classes(fp, "zp", max_classes, rng=rng)
        classes = []
        for rep in inner:
            _certify_rank2(ctx, split, rep)
            quiver = endomorphism_quiver(ctx, rep.elements)
            classes.append(TiltingClass(
                rank=2, ctx=ctx, rep=rep, quiver=quiver,
                class_id=_class_id(2, rep.elements), base=base, split=split))
        merged = _stabilizer_merged_count(split, fp, inner)
        groups.append(Rank2Group(base=base,
                                 base_id=_class_id(0, base.elements),
                                 classes=classes,
                                 merged_class_count=merged))
    return Rank2Classification(split=split, groups=groups)


def is_presilting(ctx: GradedDegreeGroup, elements: Sequence[GroupElement],
                  split: Optional[SignSplit] = None):
    """(ok, witness): the antichain condition, plus base rigidity in rank two."""
    rank = ctx.group.free_rank
    if rank == 2 and split is None:
        split = ctx.sign_split()
    for g, h in itertools.product(elements, repeat=2):
        if ctx.leq(h + ctx.p, g):
            return False, {"reason": "self_extension", "greater": list(g.coords),
                           "lesser": list(h.coords)}
        if rank == 2:
            if split.h_ctx.leq(split.q(h) + split.s, split.q(g)):
                return False, {"reason": "intermediate_extension",
                               "greater": list(g.coords),
                               "lesser": list(h.coords)}
    return True, None


def apr_mutate(tclass: TiltingClass, m: GroupElement) -> TiltingClass:
    """Tilting mutation at a minimal member: replace m by m + p, recertify."""
    rep = us.mutate(tclass.rep, m)
    if tclass.rank == 1:
        quiver = endomorphism_quiver(tclass.ctx, rep.elements,
                                     with_relations=True)
        lq, gamma = cuts_mod.data_of_group(tclass.ctx)
        _certify_rank1(tclass.ctx, rep, quiver, lq, gamma)
        return TiltingClass(rank=1, ctx=tclass.ctx, rep=rep, quiver=quiver,
                            class_id=_class_id(1, rep.elements))
    _certify_rank2(tclass.ctx, tclass.split, rep)
    quiver = endomorphism_quiver(tclass.ctx, rep.elements)
    return TiltingClass(rank=2, ctx=tclass.ctx, rep=rep, quiver=quiver,
                        class_id=_class_id(2, rep.elements),
                        base=tclass.base, split=tclass.split)


def component_of(rep: us.AntichainRep, g: GroupElement) -> str:
    """Preprojective iff the line bundle degree lies in the upper set I(J)."""
    return "Preprojective" if us.i_contains(rep, g) else "Preinjective"


@dataclass
class VerificationReport:
    ok: bool
    checked: list
    failures: list
    thick_generation: str = "by theorem"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": len(self.checked),
            "failures": [
                {"source": list(g), "target": list(h), "r": r, "dim": dim}
                for (g, h, r, dim) in self.failures
            ],
            "thick_generation": self.thick_generation,
        }


def verify_class(oracle: CohomologyOracle, elements: Sequence[GroupElement],
                 field: Optional[int] = None, jobs: int = 1) -> VerificationReport:
    """Ext^r(E, E) = 0 for 1 <= r <= d, through the homology oracle.

    Thick generation is not re-checked (asserted by the classification
    theorems); the report records that explicitly.
    """
    d = oracle.polytope.d
    triples = [(g, h, r)
               for g, h in itertools.product(elements, repeat=2)
               for r in range(1, d + 1)]

    def compute(t):
        g, h, r = t
        return (g.coords, h.coords, r, oracle.ext_dim(g, h, r, field))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(compute, triples))
    else:
        results = [compute(t) for t in triples]
    failures = [row for row in results if row[3] != 0]
    return VerificationReport(ok=not failures, checked=results,
                              failures=failures)
