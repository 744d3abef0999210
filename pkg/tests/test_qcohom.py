import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from optwist.linalg import FinMatrix
from optwist.operads import ass, com
from optwist.pointed import PointedMap
from optwist.qcohom import (
    LinearFunctor,
    ResolutionError,
    _pointed_pullback,
    bar_resolution,
    build_resolution,
    conormalized_cohomology,
    constant_functor,
    cover_resolution,
    delta_category,
    dual_functor,
    eta_shriek,
    ext,
    ext_both,
    f_ass_delta,
    f_operad,
    gamma_category,
    gamma_t,
    generating_morphisms,
    hom_solver,
    les_check_ass,
    op_category,
    quillen_cohomology,
    random_functor,
    representable,
    ses_maps_ass,
    stable_cohomotopy,
    transport_to_tw,
)
from optwist.twisted import FinCategory, tw_com_fast


def poset_category():
    # chain poset 0 < 1 < 2: at most one arrow between objects
    objs = (0, 1, 2)
    homs = {(x, y): ((x, y, "<"),) if x <= y else () for x in objs for y in objs}
    return FinCategory(
        objs, homs, lambda g, f: (f[0], g[1], "<"), lambda x: (x, x, "<")
    )


def test_delta_category_is_a_category():
    C = delta_category(3)
    stats = C.check(associativity=True)
    assert stats["objects"] == 4
    for m in range(4):
        for n in range(4):
            assert len(C.hom(m, n)) == math.comb(m + n + 1, m + 1)


def test_gamma_category_is_a_category():
    C = gamma_category(3)
    stats = C.check(associativity=True)
    assert stats["objects"] == 4
    for n in range(4):
        for m in range(4):
            assert len(C.hom(n, m)) == (n + 1) ** m


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_pointed_pullback_contravariant(data):
    a = data.draw(st.integers(0, 4))
    b = data.draw(st.integers(0, 4))
    c = data.draw(st.integers(0, 4))
    g = PointedMap(a, b, tuple(data.draw(st.integers(0, b)) for _ in range(a)))
    f = PointedMap(b, c, tuple(data.draw(st.integers(0, c)) for _ in range(b)))
    # (f o g)^* = g^* f^*
    lhs = _pointed_pullback(f.compose(g), 0)
    rhs = _pointed_pullback(g, 0) @ _pointed_pullback(f, 0)
    assert lhs == rhs


def test_linear_functor_rejects_broken_matrix():
    t = gamma_t(2, p=0)
    mats = dict(t.mats)
    victim = next(
        m for m in t.base.all_morphisms()
        if m != t.base.identity(m[0]) and not mats[m].is_zero()
    )
    mats[victim] = mats[victim].scale(2)
    with pytest.raises(ValueError):
        LinearFunctor(t.base, 0, t.dims, mats)


def test_linear_functor_rejects_bad_identity():
    t = gamma_t(1, p=0)
    mats = dict(t.mats)
    mats[t.base.identity(1)] = FinMatrix.zeros(1, 1, 0)
    with pytest.raises(ValueError):
        LinearFunctor(t.base, 0, t.dims, mats)


def test_gamma_t_structure_map():
    # the pointed map <2> -> <1> sending both points to 1 pulls back
    # to the diagonal k -> k^2
    t = gamma_t(2, p=0)
    phi = PointedMap(2, 1, (1, 1))
    mat = t.mats[(1, 2, phi)]
    assert (mat.nrows, mat.ncols) == (2, 1)
    assert mat.entries == {(0, 0): Fraction(1), (1, 0): Fraction(1)}


def test_f_operad_com_dims():
    M = f_operad(com(), 3, p=0)
    for obj in M.base.objects:
        assert M.dims[obj] == obj[0]
    assert M.dims[(0, "*")] == 0


def test_eta_shriek_is_the_representable_at_zero():
    base = delta_category(3)
    B = eta_shriek(3, 0, base)
    R = representable(base, 0, p=0)
    assert B.dims == R.dims
    for m in base.all_morphisms():
        assert B.mats[m] == R.mats[m]


def test_ses_maps_are_natural_and_exact_pointwise():
    A, B, C, rho, pi = ses_maps_ass(3, 0)
    for n in range(4):
        assert rho[n].rank() == n
        assert pi[n].rank() == 1
        assert (pi[n] @ rho[n]).is_zero()
        assert A.dims[n] + C.dims[n] == B.dims[n]


def test_f_ass_delta_spreads_over_gaps():
    A = f_ass_delta(2, 0)
    base = A.base
    # the injection [1] -> [2] missing 1 sends the single difference
    # coordinate across both gaps
    from optwist.qcohom import coface

    m = coface(1, 1)
    assert A.mats[m].entries == {(0, 0): Fraction(1), (1, 0): Fraction(1)}
    stats = base.check(associativity=False)
    assert stats["objects"] == 3


def test_transport_to_tw_is_fully_functorial():
    tw2 = tw_com_fast(2)
    t2 = gamma_t(2, p=101)
    T = transport_to_tw(t2, tw2)
    # rebuild with the full composition table check turned on
    LinearFunctor(tw2, 101, T.dims, T.mats, check="full")


def test_dual_functor_is_fully_functorial():
    t2 = gamma_t(2, p=101)
    op = op_category(t2.base)
    D = dual_functor(t2, op)
    LinearFunctor(op, 101, D.dims, D.mats, check="full")


def test_ext0_selfhom_at_least_one():
    t2 = gamma_t(2, p=0)
    assert ext(t2, t2, 0)[0] >= 1
    base = delta_category(2)
    for M in (eta_shriek(2, 0, base), f_ass_delta(2, 0, base), constant_functor(base)):
        assert ext(M, M, 0)[0] >= 1


def test_yoneda_on_a_poset():
    cat = poset_category()
    F = random_functor(cat, 0, seed=7)
    for x in cat.objects:
        R = representable(cat, x, p=0)
        assert ext(R, F, 3) == [F.dims[x], 0, 0, 0]


def test_yoneda_over_gamma():
    base = gamma_category(2)
    F = random_functor(base, 101, seed=5)
    for x in (0, 1, 2):
        R = representable(base, x, p=101)
        assert ext(R, F, 2) == [F.dims[x], 0, 0]


def test_backends_agree_on_t():
    t2 = gamma_t(2, p=101)
    assert ext_both(t2, t2, 2) == [1, 0, 0]
    assert ext(t2, t2, 2, backend="co-cover") == [1, 0, 0]


def test_backends_agree_on_delta_functors():
    base = delta_category(2)
    F = random_functor(base, 101, seed=2)
    A = f_ass_delta(2, 101, base)
    for K in (1, 2):
        cover = ext(A, F, K, backend="cover")
        bar = ext(A, F, K, backend="bar")
        raw = ext(A, F, K, backend="bar-raw")
        co = ext(A, F, K, backend="co-cover")
        assert cover == bar == raw == co


def test_ext_disagreement_is_an_error():
    t1 = gamma_t(1, p=0)
    with pytest.raises(ValueError):
        ext(t1, t1, 2, backend="nonsense")


def test_solver_matches_ext0():
    t2q = gamma_t(2, p=0)
    assert hom_solver(t2q, t2q) == ext(t2q, t2q, 0)[0]
    base = delta_category(2)
    B = eta_shriek(2, 101, base)
    F = random_functor(base, 101, seed=3)
    assert hom_solver(B, F) == ext(B, F, 0)[0]
    assert hom_solver(F, F) == ext(F, F, 0)[0]


def test_generating_morphisms_reach_everything():
    base = gamma_category(2)
    gens = generating_morphisms(base)
    nonid = [m for m in base.all_morphisms() if m != base.identity(m[0])]
    closed = set(gens)
    grew = True
    while grew:
        grew = False
        for f in list(closed):
            for g in list(closed):
                if f[1] == g[0]:
                    h = base.compose(g, f)
                    if h not in closed and h != base.identity(h[0]):
                        closed.add(h)
                        grew = True
    assert closed == set(nonid)
    assert len(gens) < len(nonid)


def test_stability_in_resolution_length():
    t2 = gamma_t(2, p=101)
    res = build_resolution(t2, 4, "cover")
    assert ext(t2, t2, 1) == ext(t2, t2, 3, resolution=res)[:2]


def test_cover_resolution_verifies_exact():
    t2 = gamma_t(2, p=101)
    res = cover_resolution(t2, 3)
    report = res.verify_exact(2)
    assert all(report.values())


def test_bar_resolution_is_exact_in_low_degrees():
    base = delta_category(2)
    C = constant_functor(base, 101)
    res = bar_resolution(C, 2)
    report = res.verify_exact(1)
    assert all(report.values())


def test_bar_generator_guard():
    t2 = gamma_t(2, p=101)
    with pytest.raises(ResolutionError):
        bar_resolution(t2, 4, max_generators=100)


def test_les_small_rational():
    base = delta_category(2)
    F = random_functor(base, 0, seed=1)
    rep = les_check_ass(2, F, 2)
    assert rep["all_exact"]


def test_les_eta_and_const_mod_p():
    base = delta_category(3)
    for F in (constant_functor(base, 101), eta_shriek(3, 101, base)):
        rep = les_check_ass(3, F, 3)
        assert rep["all_exact"]
        assert rep["middle_vanishes"]
        assert rep["hom_middle_is_F0"]


def test_les_cross_prime():
    base = delta_category(2)
    rep = les_check_ass(2, constant_functor(base, 997), 2)
    assert rep["all_exact"]


def test_les_slot_fields_present():
    base = delta_category(2)
    rep = les_check_ass(2, constant_functor(base, 101), 1)
    slot = rep["slots"][0]
    for key in ("rank_inc", "rank_proj", "rank_delta", "exact_at_B",
                "exact_at_A", "exact_at_nextC"):
        assert key in slot


def test_conormalized_matches_ext_from_const():
    base = delta_category(3)
    C = constant_functor(base, 101)
    for F in (eta_shriek(3, 101, base), random_functor(base, 101, seed=4), C):
        co = conormalized_cohomology(F, 3)
        assert co == ext(C, F, 3)[: len(co)]


def test_conormalized_respects_truncation():
    base = delta_category(3)
    F = constant_functor(base, 101)
    assert len(conormalized_cohomology(F, 5)) == 3
    assert len(conormalized_cohomology(F, 1)) == 2


def test_random_functor_is_deterministic():
    base = delta_category(2)
    F = random_functor(base, 101, seed=12)
    G = random_functor(base, 101, seed=12)
    assert F.dims == G.dims
    assert F.mats == G.mats
    assert F.total_dim() > 0


def test_quillen_table_shape_and_vanishing_small():
    base2 = tw_com_fast(2)
    C2 = constant_functor(base2, 101)
    q = quillen_cohomology(com(), C2, 2, 3, backend="cover", base=base2)
    assert sorted(q["table"]) == [-1, 0, 1, 2]
    assert all(v == 0 for v in q["table"].values())
    assert q["truncation"] == 2
    q2 = quillen_cohomology(com(), C2, 2, 3, backend="co-cover", base=base2, check="none")
    assert q2["table"] == q["table"]


def test_quillen_shadow_relabeling():
    tw2 = tw_com_fast(2)
    t2 = gamma_t(2, p=101)
    T = transport_to_tw(t2, tw2)
    q = quillen_cohomology(com(), T, 2, 3, backend="cover", base=tw2, check="none")
    e = ext(t2, t2, 3)
    assert [q["table"][k - 1] for k in range(4)] == e


def test_stable_cohomotopy_flags():
    rep = stable_cohomotopy(lambda N, p: gamma_t(N, p), K=2,
                            truncations=(1, 2, 3), p=101)
    assert rep["stable_flag"] == [True, True, True]
    assert rep["columns"][2] == [1, 0, 0]
    assert "convergence" not in rep["note"] or "not" in rep["note"]
