"""Finite antichain encodings of non-trivial upper sets, with mutation.

An upper set I in a poset carrying a compatible Z-action (shift by p,
satisfying x < x+p, shift-equivariance, and cofinality of orbits) is
encoded by the antichain J(I) = I cap (I^c + p), which picks exactly one
element per shift orbit.  The same code serves the rank-one group order,
the rank-two base order on H (shift s), and the fibered poset over a
rank-two J-class (shift p).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional, Sequence

from .abgroup import GroupElement
from .errors import (InternalInvariantBroken, NotAntichain, NotMinimal,
                     ClassCountExceeded, TrivialUpperSet)
from .graded_order import GradedDegreeGroup

_SEARCH_CAP = 10_000


class GroupPoset:
    """The whole group as a shifted poset; shift defaults to p.

    Fibers are the cosets modulo the shift; the fiber index must be finite,
    which for the in-scope inputs means free rank one.
    """

    def __init__(self, ctx: GradedDegreeGroup,
                 shift_element: Optional[GroupElement] = None):
        self.ctx = ctx
        self.shift_element = ctx.p if shift_element is None else shift_element
        reps, quot, proj = ctx.coset_reps(self.shift_element)
        self._proj = proj
        self._reps = {proj(r).coords: r for r in reps}
        self.fibers = tuple(sorted(self._reps))
        self.theta_p = ctx.theta_val(self.shift_element)
        # Prop-GJX local test is only valid when the shift is p = sum x_i
        self.supports_local_check = self.shift_element == ctx.p

    def leq(self, a: GroupElement, b: GroupElement) -> bool:
        return self.ctx.leq(a, b)

    def shift(self, a: GroupElement, n: int) -> GroupElement:
        return a + n * self.shift_element

    def fiber_key(self, a: GroupElement):
        return self._proj(a).coords

    def fiber_sample(self, key) -> GroupElement:
        return self._reps[key]

    def theta(self, a: GroupElement) -> int:
        return self.ctx.theta_val(a)

    def translate(self, a: GroupElement, t: GroupElement) -> GroupElement:
        return a + t

    def full_translations(self) -> list[GroupElement]:
        """Coset representatives generating all translations modulo shift."""
        return [self._reps[k] for k in self.fibers]

    def local_check(self, rep: "AntichainRep") -> bool:
        """g + x_i in J or J + p, for every g in J and every degree."""
        for g in rep.elements:
            for x in self.ctx.degrees:
                h = g + x
                r = rep.by_fiber[self.fiber_key(h)]
                if h != r and h != self.shift(r, 1):
                    return False
        return True


class AntichainRep:
    """One chosen element per fiber, pairwise satisfying x >= y + p nowhere."""

    __slots__ = ("poset", "elements", "by_fiber")

    def __init__(self, poset, elements: Iterable[GroupElement]):
        self.poset = poset
        self.elements = tuple(sorted(elements, key=lambda e: e.coords))
        self.by_fiber = {poset.fiber_key(e): e for e in self.elements}

    def key(self) -> tuple:
        return tuple(e.coords for e in self.elements)

    def __eq__(self, other):
        return (isinstance(other, AntichainRep)
                and self.poset is other.poset and self.key() == other.key())

    def __hash__(self):
        return hash((id(self.poset), self.key()))

    def __repr__(self):
        return f"AntichainRep{list(self.key())}"


def is_antichain_rep(poset, elements: Sequence[GroupElement]):
    """(ok, witness): completeness plus the antichain condition.

    On rank-one group posets with shift p the equivalent local condition of
    the J-characterization is cross-checked; a disagreement would falsify a
    theorem and raises InternalInvariantBroken.
    """
    elements = list(elements)
    seen = {}
    for e in elements:
        k = poset.fiber_key(e)
        if k in seen:
            return False, {"reason": "duplicate_fiber", "fiber": k,
                           "elements": [list(seen[k].coords), list(e.coords)]}
        seen[k] = e
    missing = [k for k in poset.fibers if k not in seen]
    if missing:
        return False, {"reason": "missing_fiber", "fiber": missing[0]}
    ok, witness = True, None
    for x in elements:
        for y in elements:
            if poset.leq(poset.shift(y, 1), x):
                ok, witness = False, {"reason": "antichain",
                                      "greater": list(x.coords),
                                      "lesser": list(y.coords)}
                break
        if not ok:
            break
    if getattr(poset, "supports_local_check", False):
        rep = AntichainRep(poset, elements)
        if poset.local_check(rep) != ok:
            raise InternalInvariantBroken(
                "local J-condition disagrees with the antichain condition")
    return ok, witness


def checked(poset, elements: Iterable[GroupElement]) -> AntichainRep:
    ok, witness = is_antichain_rep(poset, list(elements))
    if not ok:
        raise NotAntichain("not a complete-representative antichain", **witness)
    return AntichainRep(poset, elements)


def i_contains(rep: AntichainRep, g: GroupElement) -> bool:
    """Membership of g in the upper set I(J)."""
    return any(rep.poset.leq(j, g) for j in rep.elements)


def j_of_upper(poset, generators: Sequence[GroupElement]) -> AntichainRep:
    """J(I) for the upper set I generated by the given minimal elements."""
    if not generators:
        raise TrivialUpperSet("an upper set needs at least one generator")

    def member(e: GroupElement) -> bool:
        return any(poset.leq(g, e) for g in generators)

    chosen = []
    for key in poset.fibers:
        e = poset.fiber_sample(key)
        steps = 0
        if member(e):
            while member(poset.shift(e, -1)):
                e = poset.shift(e, -1)
                steps += 1
                if steps > _SEARCH_CAP:
                    raise InternalInvariantBroken("membership walk did not stop")
        else:
            while not member(e):
                e = poset.shift(e, 1)
                steps += 1
                if steps > _SEARCH_CAP:
                    raise InternalInvariantBroken(
                        "orbit cofinality violated in membership walk")
        chosen.append(e)
    return checked(poset, chosen)


def mutable_elements(rep: AntichainRep) -> list[GroupElement]:
    """Elements of J minimal in I(J): nothing of J lies strictly below."""
    poset = rep.poset
    out = []
    for m in rep.elements:
        if not any(j != m and poset.leq(j, m) for j in rep.elements):
            out.append(m)
    return out


def upward_mutable_elements(rep: AntichainRep) -> list[GroupElement]:
    """Elements of J with nothing of J strictly above (inverse mutation sites)."""
    poset = rep.poset
    out = []
    for m in rep.elements:
        if not any(j != m and poset.leq(m, j) for j in rep.elements):
            out.append(m)
    return out


def mutate(rep: AntichainRep, m: GroupElement) -> AntichainRep:
    """Remove the minimal element m from I(J): replace m by m + p in J."""
    if m not in rep.elements or m not in mutable_elements(rep):
        raise NotMinimal("element is not minimal in the upper set",
                         element=list(m.coords))
    elements = [e for e in rep.elements if e != m] + [rep.poset.shift(m, 1)]
    ok, witness = is_antichain_rep(rep.poset, elements)
    if not ok:
        raise InternalInvariantBroken(f"mutation left the antichain family: {witness}")
    return AntichainRep(rep.poset, elements)


def mutate_up(rep: AntichainRep, m: GroupElement) -> AntichainRep:
    if m not in rep.elements or m not in upward_mutable_elements(rep):
        raise NotMinimal("element is not maximal in the complement direction",
                         element=list(m.coords))
    elements = [e for e in rep.elements if e != m] + [rep.poset.shift(m, -1)]
    ok, witness = is_antichain_rep(rep.poset, elements)
    if not ok:
        raise InternalInvariantBroken(f"inverse mutation failed: {witness}")
    return AntichainRep(rep.poset, elements)


def seed_slab(poset) -> AntichainRep:
    """The theta-slab representative family: theta in [0, theta(p)) per fiber.

    Always a complete-representative antichain: a violation x >= y + p would
    force theta(x) >= theta(y) + theta(p) >= theta(p), impossible inside the
    slab.
    """
    chosen = []
    for key in poset.fibers:
        e = poset.fiber_sample(key)
        n = poset.theta(e) // poset.theta_p
        chosen.append(poset.shift(e, -n))
    return checked(poset, chosen)


def _slab_shift(rep: AntichainRep) -> AntichainRep:
    poset = rep.poset
    lo = min(poset.theta(e) for e in rep.elements)
    k = -(lo // poset.theta_p)
    if k == 0:
        return rep
    return AntichainRep(poset, [poset.shift(e, k) for e in rep.elements])


def canonical_form(rep: AntichainRep, mode: str = "zp") -> AntichainRep:
    """Deterministic orbit representative.

    mode "zp": translate by a multiple of p so min theta lands in [0, theta_p).
    mode "full": additionally minimize over ambient translations modulo p
    (the "up to translations" counting used for class reporting).
    """
    if mode == "zp":
        return _slab_shift(rep)
    if mode != "full":
        raise ValueError(f"unknown canonical form mode {mode!r}")
    poset = rep.poset
    best = None
    for t in poset.full_translations():
        cand = _slab_shift(AntichainRep(
            poset, [poset.translate(e, t) for e in rep.elements]))
        if best is None or cand.key() < best.key():
            best = cand
    return best


def enumerate_classes(poset, mode: str = "full", max_classes: int = 10_000,
                      rng=None) -> list[AntichainRep]:
    """All antichain classes up to the chosen translations, by mutation BFS.

    Connectivity of the mutation graph is theorem-backed; the BFS closes the
    seed slab under mutations in both directions.  rng, when given, shuffles
    the expansion order (results must not depend on it).
    """
    start = canonical_form(seed_slab(poset), mode)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for rep in frontier:
            neighbors = [mutate(rep, m) for m in mutable_elements(rep)]
            neighbors += [mutate_up(rep, m)
                          for m in upward_mutable_elements(rep)]
            if rng is not None:
                rng.shuffle(neighbors)
            for n in neighbors:
                c = canonical_form(n, mode)
                if c.key() not in seen:
                    seen[c.key()] = c
                    nxt.append(c)
                    if len(seen) > max_classes:
                        raise ClassCountExceeded(
                            "class enumeration exceeded the ceiling",
                            ceiling=max_classes)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


def connect(rep1: AntichainRep, rep2: AntichainRep,
            mode: str = "zp") -> list[tuple]:
    """Mutation moves taking rep1 to a translate of rep2.

    Returns [(fiber_key, +1 | -1), ...]; +1 is a downward mutation (remove a
    minimal element of the upper set).  The search walks shift-canonical
    states (whose fiber keys are shift-invariant, so the moves replay
    verbatim) and stops at any state in the target's mode-orbit.
    """
    if rep1.poset is not rep2.poset:
        raise NotAntichain("antichains live on different posets")
    poset = rep1.poset
    target = canonical_form(rep2, mode).key()
    start = canonical_form(rep1, "zp")
    parents: dict = {start.key(): None}
    goal = start.key() if canonical_form(start, mode).key() == target else None
    frontier = [start]
    while goal is None and frontier:
        nxt = []
        for rep in frontier:
            moves = [(m, 1) for m in mutable_elements(rep)]
            moves += [(m, -1) for m in upward_mutable_elements(rep)]
            for m, direction in moves:
                child = mutate(rep, m) if direction == 1 else mutate_up(rep, m)
                c = canonical_form(child, "zp")
                if c.key() not in parents:
                    parents[c.key()] = (rep.key(), poset.fiber_key(m), direction)
                    nxt.append(c)
                    if canonical_form(c, mode).key() == target:
                        goal = c.key()
            if goal is not None:
                break
        frontier = nxt
    if goal is None:
        raise InternalInvariantBroken("mutation graph is not connected")
    moves = []
    cur = goal
    while parents[cur] is not None:
        prev, fiber, direction = parents[cur]
        moves.append((fiber, direction))
        cur = prev
    moves.reverse()
    replayed = apply_moves(canonical_form(rep1, "zp"), moves)
    if canonical_form(replayed, mode).key() != target:
        raise InternalInvariantBroken("replaying the mutation walk failed")
    return moves


def apply_moves(rep: AntichainRep, moves: Sequence[tuple]) -> AntichainRep:
    for fiber, direction in moves:
        m = rep.by_fiber[fiber]
        rep = mutate(rep, m) if direction == 1 else mutate_up(rep, m)
    return rep


def _enumerate_classes_window(poset, mode: str = "full",
                              window: int = 4) -> list[AntichainRep]:
    """Brute-force oracle: all shift vectors in [-window, window]^fibers.

    Test-only cross-check for enumerate_classes; the window is not a
    completeness proof.  Prefix pruning is sound because an antichain
    violation between two chosen elements dooms every extension.
    """
    base = [poset.fiber_sample(k) for k in poset.fibers]
    found: dict = {}

    def rec(i: int, chosen: list[GroupElement]) -> None:
        if i == len(base):
            ok, _ = is_antichain_rep(poset, chosen)
            if ok:
                c = canonical_form(AntichainRep(poset, chosen), mode)
                found.setdefault(c.key(), c)
            return
        for n in range(-window, window + 1):
            e = poset.shift(base[i], n)
            bad = any(
                poset.leq(poset.shift(x, 1), e) or poset.leq(poset.shift(e, 1), x)
                for x in chosen)
            if not bad:
                chosen.append(e)
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    return [found[k] for k in sorted(found)]


def admits_proper_superset(rep: AntichainRep, window: int = 3) -> bool:
    """Test helper: try to grow J by any shifted fiber element (must fail)."""
    poset = rep.poset
    for key in poset.fibers:
        base = rep.by_fiber[key]
        for n in range(-window, window + 1):
            cand = poset.shift(base, n)
            if cand == base:
                continue
            extended = list(rep.elements) + [cand]
            ok = not any(
                poset.leq(poset.shift(y, 1), x)
                for x, y in itertools.product(extended, repeat=2))
            if ok:
                return True
    return False
