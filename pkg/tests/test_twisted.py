import itertools

import pytest

from optwist.encodings import act, enumerate_ib, ib_compose, ib_identity, mono_seq
from optwist.operads import FreeReducedOperad, ass, com, identity_values, perms
from optwist.pointed import PointedMap
from optwist.twisted import (
    CertificationError,
    FinCategory,
    SetFunctor,
    certify_tw_ass,
    certify_tw_com,
    grothendieck,
    ib_category,
    is_equivalence,
    sigma_equivalence,
    terminal_objects,
    tw_category,
    tw_hom,
)


def test_tw_hom_counts_ass():
    P = ass()
    mu = lambda n: (n, identity_values(n))
    assert len(tw_hom(P, mu(1), mu(1))) == 3
    assert len(tw_hom(P, mu(2), mu(1))) == 4
    assert len(tw_hom(P, mu(1), mu(2))) == 6
    assert len(tw_hom(P, mu(0), mu(2))) == 3


def test_tw_category_com_is_a_category():
    C = tw_category(com(), 2)
    stats = C.check(associativity=True)
    assert stats["objects"] == 3
    assert stats["morphisms"] == sum(
        (n + 1) ** m for n in range(3) for m in range(3)
    )
    assert stats["triples"] > 0


def test_tw_category_ass_is_a_category():
    C = tw_category(ass(), 2)
    stats = C.check(associativity=True)
    assert stats["objects"] == 4
    # morphisms out of arity n land anywhere; totals counted by hand
    assert stats["morphisms"] == 75


def test_identity_morphism_is_ib_identity():
    P = ass()
    C = tw_category(P, 2)
    for obj in C.objects:
        tr = C.identity(obj)
        assert tr[2] == ib_identity(P, mono_seq(P, obj[0]))
        assert act(P, tr[2], obj[1]) == obj[1]


@pytest.mark.parametrize("P_factory,N", [(com, 3), (ass, 2)])
def test_grothendieck_matches_tw_category(P_factory, N):
    P = P_factory()
    base = ib_category(P, N)
    F = SetFunctor(base, lambda n: P.level(n), lambda tr: (lambda mu: act(P, tr[2], mu)))
    G = grothendieck(base, F)
    T = tw_category(P, N)
    assert sorted(G.objects) == sorted(T.objects)
    g_homs = {k: {tr[2][2] for tr in v} for k, v in G.homs.items() if v}
    t_homs = {k: {tr[2] for tr in v} for k, v in T.homs.items() if v}
    assert g_homs == t_homs
    # composition in the category of elements is composition downstairs
    for f in itertools.islice(G.all_morphisms(), 0, None, 7):
        for g in G.hom(f[1], f[1])[:2] + G.homs.get((f[1], f[0]), ())[:2]:
            assert G.compose(g, f)[2][2] == ib_compose(P, g[2][2], f[2][2])


def test_sigma_equivalence_composes_like_the_group():
    P = ass()
    for n in range(4):
        obj = (n, identity_values(n))
        for s in perms(n):
            e_s = sigma_equivalence(P, obj, s)
            assert e_s[1] == (n, P.act(obj[1], s))
            for t in perms(n):
                e_t = sigma_equivalence(P, e_s[1], t)
                both = ib_compose(P, e_t[2], e_s[2])
                direct = sigma_equivalence(P, obj, tuple(s[t[i] - 1] for i in range(n)))
                assert both == direct[2]


def test_sigma_equivalence_is_invertible():
    P = ass()
    tr = sigma_equivalence(P, (2, identity_values(2)), (2, 1))
    assert is_equivalence(P, tr)
    tr3 = sigma_equivalence(P, (3, (2, 1, 3)), (3, 1, 2))
    assert is_equivalence(P, tr3)


def test_non_bijective_shape_is_not_an_equivalence():
    P = ass()
    drops = tw_hom(P, (1, (1,)), (0, ()))
    assert len(drops) == 1
    assert not is_equivalence(P, drops[0])


def test_terminal_objects_are_nullary_operations():
    assert terminal_objects(tw_category(com(), 2)) == [(0, "*")]
    assert terminal_objects(tw_category(ass(), 2)) == [(0, ())]


def test_no_terminal_objects_without_nullary_operations():
    # heads of arrows into arity-2 objects live in arity <= 3
    P = FreeReducedOperad((("m", 2),), truncation=3)
    assert terminal_objects(tw_category(P, 2)) == []


def test_permutation_shape_morphisms_are_the_only_equivalences_at_fixed_arity():
    # between arity-2 objects over Ass every equivalence has bijective shape
    P = ass()
    for mu in P.level(2):
        for nu in P.level(2):
            for tr in tw_hom(P, (2, mu), (2, nu)):
                if is_equivalence(P, tr):
                    assert tr[2].f.is_bijective()


def test_certify_tw_com_small():
    stats = certify_tw_com(3)
    assert stats["morphisms"] == 144
    assert stats["pairs"] == stats["generic_pairs"] == 9866


def test_certify_tw_ass_small():
    stats = certify_tw_ass(2)
    assert stats["sigma_links"] == 4
    assert stats["functorial_pairs"] == 393
    assert stats["witnesses"] == sum(
        len(tw_hom(ass(), (m, identity_values(m)), (n, identity_values(n))))
        for m in range(3)
        for n in range(3)
    )


def test_fincategory_check_catches_broken_identity():
    objs = ("x",)
    bad_id = ("x", "x", "not-id")
    good = ("x", "x", "f")
    homs = {("x", "x"): (bad_id, good)}

    def compose_fn(g, f):
        return good

    C = FinCategory(objs, homs, compose_fn, lambda x: bad_id)
    with pytest.raises(CertificationError):
        C.check()


def test_ib_category_hom_sizes_com():
    C = ib_category(com(), 3)
    for n in range(4):
        for m in range(4):
            assert len(C.hom(n, m)) == (n + 1) ** m
