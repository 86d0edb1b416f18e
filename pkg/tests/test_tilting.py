import random

import pytest

from stacktilt import tilting, upper_sets as us
from stacktilt.errors import NotMinimal
from stacktilt.stacky_geom import CohomologyOracle, group_to_polytope


def _arrows_by_pair(quiver):
    return quiver.arrow_multiset()


def test_classify_rank1_pd(make_pd):
    for d in (1, 2, 3, 4):
        classes = tilting.classify_rank1(make_pd(d))
        assert len(classes) == 1
        tc = classes[0]
        assert [e.coords[0] for e in tc.elements] == list(range(d + 1))
        pairs = _arrows_by_pair(tc.quiver)
        assert set(pairs) == {((k,), (k + 1,)) for k in range(d)}
        assert all(len(v) == d + 1 for v in pairs.values())


def test_classify_rank1_p23(ctx_p23):
    classes = tilting.classify_rank1(ctx_p23)
    assert [[e.coords[0] for e in c.elements] for c in classes] == [
        [0, 1, 2, 3, 4], [0, 2, 3, 4, 6]]
    first = classes[0].quiver
    arrows = {(a.source[0], a.target[0], a.label) for a in first.arrows}
    assert arrows == {(0, 2, "x1"), (1, 3, "x1"), (2, 4, "x1"),
                      (0, 3, "x2"), (1, 4, "x2")}
    # the two classes are connected by a mutation walk
    moves = us.connect(classes[0].rep, classes[1].rep, mode="full")
    assert len(moves) >= 1


def test_classify_rank1_torsion_examples(ctx_zz2_d1, ctx_zz2_d2):
    classes = tilting.classify_rank1(ctx_zz2_d1)
    assert len(classes) == 2 and all(len(c.elements) == 4 for c in classes)
    classes = tilting.classify_rank1(ctx_zz2_d2)
    assert len(classes) == 2 and all(len(c.elements) == 6 for c in classes)


def test_zz2_d2_first_quiver_shape(ctx_zz2_d2):
    # two rows of three vertices: double horizontal steps, single diagonals
    classes = tilting.classify_rank1(ctx_zz2_d2)
    quiver = classes[0].quiver
    assert len(quiver.vertices) == 6
    multis = sorted(len(v) for v in quiver.arrow_multiset().values())
    assert multis == [1, 1, 1, 1, 2, 2, 2, 2]
    assert len(quiver.relations) == 6


def test_classify_rank1_from_polytope():
    from stacktilt.stacky_geom import gale_dual, parse_polytope
    for d in (3, 4):
        vertices = [[1 if i == k else 0 for i in range(d)] for k in range(d)]
        vertices.append([-1] * d)
        ctx = gale_dual(parse_polytope(vertices))
        classes = tilting.classify_rank1(ctx)
        assert len(classes) == 1 and len(classes[0].elements) == d + 1


def test_classify_counts_stable_under_shuffle(ctx_p23, ctx_zz2_d2):
    for ctx in (ctx_p23, ctx_zz2_d2):
        base = [tc.class_id for tc in tilting.classify_rank1(ctx)]
        for seed in (3, 5):
            rng = random.Random(seed)
            shuffled = [tc.class_id
                        for tc in tilting.classify_rank1(ctx, rng=rng)]
            assert shuffled == base


def test_classify_rank2_counts(ctx_p1p1, ctx_sigma1, ctx_stacky):
    res = tilting.classify_rank2(ctx_p1p1)
    assert len(res.groups) == 2
    assert sorted(len(g.classes) for g in res.groups) == [4, 5]
    assert sorted(g.merged_class_count for g in res.groups) == [2, 5]
    assert all(len(tc.elements) == 4 for tc in res.classes)

    res = tilting.classify_rank2(ctx_sigma1)
    assert len(res.groups) == 1
    assert [len(g.classes) for g in res.groups] == [4]
    assert all(len(tc.elements) == 4 for tc in res.classes)

    res = tilting.classify_rank2(ctx_stacky)
    assert len(res.groups) == 1
    assert [len(g.classes) for g in res.groups] == [5]
    assert all(len(tc.elements) == 5 for tc in res.classes)


def test_rank2_inner_enumeration_matches_window(ctx_p1p1, ctx_sigma1):
    for ctx in (ctx_p1p1, ctx_sigma1):
        split = ctx.sign_split()
        h_poset = us.GroupPoset(split.h_ctx, shift_element=split.s)
        for base in us.enumerate_classes(h_poset, "full"):
            fp = tilting.FiberedPoset(ctx, split, base)
            bfs = [r.key() for r in us.enumerate_classes(fp, "zp")]
            window = [r.key() for r in
                      us._enumerate_classes_window(fp, "zp", window=4)]
            assert bfs == window


def test_square_class_appears(ctx_p1p1):
    res = tilting.classify_rank2(ctx_p1p1)
    shapes = set()
    for tc in res.classes:
        base = min(tc.elements, key=lambda e: e.coords)
        shapes.add(tuple(sorted((e - base).coords for e in tc.elements)))
    assert ((0, 0), (0, 1), (1, 0), (1, 1)) in shapes


def test_endomorphism_quiver_examples(ctx_p23, ctx_sigma1):
    z = ctx_p23.group
    j = [z.canonicalize([v]) for v in [0, 1, 2, 3, 4]]
    qp = tilting.endomorphism_quiver(ctx_p23, j)
    assert len(qp.arrows) == 5
    singleton = tilting.endomorphism_quiver(ctx_p23, [z.zero()])
    assert singleton.arrows == ()
    res = tilting.classify_rank2(ctx_sigma1)
    composite_labels = set()
    for tc in res.classes:
        for a in tc.quiver.arrows:
            if "*" in a.label:
                composite_labels.add(a.label)
    assert composite_labels == {"x1*x4", "x2*x4"}


def test_hom_matrix_emitted(ctx_p1p1):
    res = tilting.classify_rank2(ctx_p1p1)
    tc = res.classes[0]
    hm = tc.quiver.hom_matrix
    assert hm is not None
    for e in tc.elements:
        assert hm[(e.coords, e.coords)] == 1


def test_is_presilting(ctx_p23, ctx_p1p1):
    z = ctx_p23.group
    ok, _ = tilting.is_presilting(ctx_p23, [z.zero(), z.canonicalize([2])])
    assert ok
    ok, wit = tilting.is_presilting(ctx_p23, [z.zero(), z.canonicalize([7])])
    assert not ok and wit["greater"] == [7]
    c = ctx_p1p1.group.canonicalize
    square = [c([0, 0]), c([1, 0]), c([0, 1]), c([1, 1])]
    ok, _ = tilting.is_presilting(ctx_p1p1, square)
    assert ok
    # monotone under subsets
    ok, _ = tilting.is_presilting(ctx_p1p1, square[:2])
    assert ok


def test_is_presilting_monotone(ctx_p23):
    rng = random.Random(13)
    z = ctx_p23.group
    for _ in range(25):
        values = rng.sample(range(-6, 10), rng.randint(2, 4))
        els = [z.canonicalize([v]) for v in values]
        ok, _ = tilting.is_presilting(ctx_p23, els)
        if ok:
            sub_ok, _ = tilting.is_presilting(ctx_p23, els[:-1])
            assert sub_ok


def test_apr_mutate(make_pd, ctx_p23, ctx_p1p1):
    classes = tilting.classify_rank1(make_pd(1))
    tc = classes[0]
    new = tilting.apr_mutate(tc, tc.ctx.group.zero())
    assert [e.coords[0] for e in new.elements] == [1, 2]

    classes = tilting.classify_rank1(ctx_p23)
    first = classes[0]
    seen = {first.class_id}
    frontier = [first]
    while frontier:
        nxt = []
        for tc in frontier:
            for m in us.mutable_elements(tc.rep):
                child = tilting.apr_mutate(tc, m)
                canon = us.canonical_form(child.rep, "full")
                cid = tilting._class_id(1, canon.elements)
                if cid not in seen:
                    seen.add(cid)
                    nxt.append(child)
        frontier = nxt
    assert seen == {tc.class_id for tc in classes}

    with pytest.raises(NotMinimal):
        tilting.apr_mutate(classes[0], ctx_p23.group.canonicalize([2]))

    res = tilting.classify_rank2(ctx_p1p1)
    tc = res.groups[0].classes[0]
    m = us.mutable_elements(tc.rep)[0]
    child = tilting.apr_mutate(tc, m)
    assert child.rank == 2 and len(child.elements) == 4


def test_mutation_closure_rank2(ctx_p1p1):
    res = tilting.classify_rank2(ctx_p1p1)
    for grp in res.groups:
        start = grp.classes[0]
        seen = {us.canonical_form(start.rep, "zp").key()}
        frontier = [start]
        while frontier:
            nxt = []
            for tc in frontier:
                for m in us.mutable_elements(tc.rep):
                    child = tilting.apr_mutate(tc, m)
                    key = us.canonical_form(child.rep, "zp").key()
                    if key not in seen:
                        seen.add(key)
                        nxt.append(child)
                for m in us.upward_mutable_elements(tc.rep):
                    child_rep = us.mutate_up(tc.rep, m)
                    key = us.canonical_form(child_rep, "zp").key()
                    if key not in seen:
                        seen.add(key)
                        nxt.append(tilting.TiltingClass(
                            rank=2, ctx=tc.ctx, rep=child_rep,
                            quiver=tc.quiver, class_id="tmp",
                            base=tc.base, split=tc.split))
            frontier = nxt
        assert seen == {us.canonical_form(tc.rep, "zp").key()
                        for tc in grp.classes}


def test_component_of(make_pd, ctx_p23):
    ctx = make_pd(2)
    poset = us.GroupPoset(ctx)
    rep = us.j_of_upper(poset, [ctx.group.zero()])
    assert tilting.component_of(rep, ctx.group.canonicalize([3])) \
        == "Preprojective"
    assert tilting.component_of(rep, ctx.group.canonicalize([-1])) \
        == "Preinjective"
    poset23 = us.GroupPoset(ctx_p23)
    rep23 = us.j_of_upper(poset23, [ctx_p23.group.zero()])
    assert tilting.component_of(rep23, ctx_p23.group.canonicalize([1])) \
        == "Preinjective"


def test_verify_class(make_pd, ctx_p1p1, ctx_p23):
    ctx = make_pd(2)
    oracle = CohomologyOracle(group_to_polytope(ctx), ctx)
    els = [ctx.group.canonicalize([v]) for v in (0, 1, 2)]
    report = tilting.verify_class(oracle, els)
    assert report.ok and len(report.checked) == 9 * 2
    assert report.thick_generation == "by theorem"

    oracle = CohomologyOracle(group_to_polytope(ctx_p1p1), ctx_p1p1)
    c = ctx_p1p1.group.canonicalize
    square = [c([0, 0]), c([1, 0]), c([0, 1]), c([1, 1])]
    assert tilting.verify_class(oracle, square).ok

    oracle = CohomologyOracle(group_to_polytope(ctx_p23), ctx_p23)
    z = ctx_p23.group
    broken = tilting.verify_class(oracle, [z.zero(), z.canonicalize([7])])
    assert not broken.ok
    assert any(r == 1 and dim > 0 for (_, _, r, dim) in broken.failures)


def test_verify_class_jobs(make_pd):
    ctx = make_pd(1)
    oracle = CohomologyOracle(group_to_polytope(ctx), ctx)
    els = [ctx.group.canonicalize([v]) for v in (0, 1)]
    assert tilting.verify_class(oracle, els, jobs=3).ok
