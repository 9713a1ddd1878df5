import random
from fractions import Fraction

import pytest

from padicwf import liealg as lg
from padicwf import linalg as la
from padicwf import orbits as ob
from padicwf.ffield import prime_field, quad_field
from padicwf.localfield import LocalField


def mk(field, rows):
    return la.mat([[field(c) for c in row] for row in rows])


def antidiag_gram(field, n, signs=None):
    z, o = field.zero, field.one
    g = [[z] * n for _ in range(n)]
    for i in range(n):
        s = o if signs is None else field(signs[i])
        g[i][n - 1 - i] = s
    return la.mat(g)


# -- factor dimensions -------------------------------------------------


def test_factor_dims():
    F3, F9 = prime_field(3), quad_field(3)
    assert lg.Factor.gl(3, F3).dim() == 9
    assert lg.Factor.gl(2, F9).dim() == 8
    # sp_4: dim 10; so_5: dim 10; so_4: dim 6
    assert lg.Factor.sp(4, F3).dim() == 10
    g5 = la.identity(F3, 5)
    assert lg.Factor.so(5, F3, g5).dim() == 10
    assert lg.Factor.so(4, F3, la.identity(F3, 4)).dim() == 6
    # u_2 over F_9/F_3 with identity gram: dim 4 over F_3
    assert lg.Factor.u(2, F9, la.identity(F9, 2)).dim() == 4
    assert lg.Factor.u(3, F9, la.identity(F9, 3)).dim() == 9


def test_geom_types():
    F3 = prime_field(3)
    assert lg.Factor.gl(3, F3).geom_type() == "A"
    assert lg.Factor.sp(4, F3).geom_type() == "C"
    assert lg.Factor.so(5, F3, la.identity(F3, 5)).geom_type() == "B"
    assert lg.Factor.so(4, F3, la.identity(F3, 4)).geom_type() == "D"
    assert lg.Factor.u(2, quad_field(3),
                       la.identity(quad_field(3), 2)).geom_type() == "A"


def test_algebra_closed_under_bracket():
    F3 = prime_field(3)
    for fac in (lg.Factor.sp(4, F3),
                lg.Factor.so(5, F3, la.identity(F3, 5)),
                lg.Factor.u(2, quad_field(3),
                            la.identity(quad_field(3), 2))):
        basis = fac.algebra_basis()
        for a in basis:
            assert fac.is_lie(a)
            for b in basis:
                assert fac.is_lie(la.bracket(a, b))


# -- jordan structure --------------------------------------------------


def test_jordan_type():
    F = prime_field(5)
    X = mk(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert lg.jordan_type(X, F) == (2, 1)
    X = mk(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert lg.jordan_type(X, F) == (3,)
    Z = la.zero_mat(F, 4)
    assert lg.jordan_type(Z, F) == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        lg.jordan_type(la.identity(F, 2), F)


def test_jordan_type_ad_invariant():
    F = prime_field(5)
    rng = random.Random(7)
    X = mk(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    for _ in range(20):
        while True:
            g = tuple(tuple(F.random(rng) for _ in range(3))
                      for _ in range(3))
            if la.rank(g) == 3:
                break
        Y = la.mat_mul(la.mat_mul(g, X), la.mat_inv(g, F))
        assert lg.jordan_type(Y, F) == (2, 1)


def test_jordan_decomposition():
    F = prime_field(5)
    rng = random.Random(11)
    for n in (2, 3, 4):
        for _ in range(10):
            X = tuple(tuple(F.random(rng) for _ in range(n))
                      for _ in range(n))
            s, nn = lg.jordan_decomposition(X, F)
            assert la.mat_add(s, nn) == X
            assert lg.is_nilpotent(nn, F)
            assert la.bracket(s, nn) == la.zero_mat(F, n)
            # semisimple part has squarefree minimal polynomial
            f1 = la.poly_radical(la.charpoly(s, F), F)
            assert la.poly_eval_mat(f1, s, F) == la.zero_mat(F, n)


def test_jordan_decomposition_companion():
    # companion matrix of (x-1)^2 (x-2) over F_5
    F = prime_field(5)
    f = la.poly_mul(la.poly_mul([F(-1), F.one], [F(-1), F.one], F),
                    [F(-2), F.one], F)
    n = 3
    C = [[F.zero] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = F.one
    for i in range(n):
        C[i][n - 1] = -f[i]
    C = la.mat(C)
    s, nn = lg.jordan_decomposition(C, F)
    assert lg.jordan_type(nn, F) == (2, 1)


def test_centralizer_dim():
    F = prime_field(5)
    gl3 = lg.Factor.gl(3, F)
    E12 = mk(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert lg.centralizer_dim(E12, gl3) == 5
    reg = mk(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert lg.centralizer_dim(reg, gl3) == 3
    assert lg.centralizer_dim(la.zero_mat(F, 3), gl3) == 9
    # centralizer dims match partition statistics: sum of (2i-1) m_i'
    # for the dual partition
    for X, lam in ((E12, (2, 1)), (reg, (3,))):
        dual = [sum(1 for p in lam if p >= i)
                for i in range(1, max(lam) + 1)]
        assert lg.centralizer_dim(X, gl3) == sum(d * d for d in dual)


# -- sl2 completion ----------------------------------------------------


def test_sl2_complete_gl():
    for p in (3, 5):
        F = prime_field(p)
        for n in (2, 3):
            fac = lg.Factor.gl(n, F)
            seen = 0
            for lam in ob.partitions_of(n):
                if lam == (1,) * n:
                    continue
                # chain-aligned nilpotent of type lam
                X = [[F.zero] * n for _ in range(n)]
                pos = 0
                for part in lam:
                    for i in range(part - 1):
                        X[pos + i][pos + i + 1] = F.one
                    pos += part
                X = la.mat(X)
                if max(lam) > p:
                    continue  # characteristic too small for the chain
                trip = lg.sl2_complete(X, fac)
                assert trip.check(F)
                seen += 1
            assert seen > 0


def test_sl2_complete_sp4():
    F = prime_field(5)
    fac = lg.Factor.sp(4, F)
    rng = random.Random(3)
    found = 0
    for _ in range(200):
        X = fac.random_element(rng)
        if not lg.is_nilpotent(X, F):
            continue
        if all(not e for row in X for e in row):
            continue
        if max(lg.jordan_type(X, F)) > 5:
            continue
        trip = lg.sl2_complete(X, fac)
        assert trip.check(F)
        assert fac.is_lie(trip.h) and fac.is_lie(trip.d)
        found += 1
    assert found > 5


def test_sl2_complete_rejects():
    F = prime_field(5)
    fac = lg.Factor.gl(2, F)
    with pytest.raises(ValueError):
        lg.sl2_complete(la.zero_mat(F, 2), fac)
    with pytest.raises(ValueError):
        lg.sl2_complete(la.identity(F, 2), fac)


def test_sl2_regular_small_characteristic():
    # in good (odd) characteristic a triple exists even when the Jordan
    # block exceeds p; the corrected construction must still find one
    F = prime_field(3)
    fac = lg.Factor.gl(4, F)
    X = mk(F, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    trip = lg.sl2_complete(X, fac)
    assert trip.check(F)


# -- gradings ----------------------------------------------------------


def test_grading_decomposes_algebra():
    F = prime_field(5)
    fac = lg.Factor.sp(4, F)
    weights = (1, 0, 0, -1)
    total = 0
    for i in range(-3, 4):
        total += len(lg.grading_basis(fac, weights, i))
    assert total == fac.dim()
    # bracket compatibility: [g_i, g_j] subset g_{i+j}
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            for A in lg.grading_basis(fac, weights, i):
                for B in lg.grading_basis(fac, weights, j):
                    C = la.bracket(A, B)
                    assert lg.grading_project(
                        C, weights, i + j, F) == C


# -- levi data and induced labels --------------------------------------


def test_primary_parts_gl():
    F = prime_field(5)
    # diag(1,1,2) + nilpotent linking the two 1s
    X = mk(F, [[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    parts = lg.primary_parts(X, F)
    got = sorted((la.poly_deg(p), m, mu) for p, m, mu in parts)
    assert got == [(1, 1, (1,)), (1, 2, (2,))]


def test_induced_label_gl():
    F = prime_field(5)
    fac = lg.Factor.gl(5, F)
    # regular semisimple diagonal: Borel induction gives the regular orbit
    X = la.mat([[F(i + 1) if i == j else F.zero for j in range(5)]
                for i in range(5)])
    assert lg.induced_label(X, fac) == (5,)
    # eigenvalues (1,1,2,3,4): blocks (2,1,1,1)
    X = la.mat([[F(v) if i == j else F.zero
                 for j in range(5)]
                for i, v in enumerate((1, 1, 2, 3, 4))])
    assert lg.induced_label(X, fac) == (4, 1)
    # zero matrix: label [1^5]
    assert lg.induced_label(la.zero_mat(F, 5), fac) == (1, 1, 1, 1, 1)


def test_induced_label_sp():
    F = prime_field(23)
    fac = lg.Factor.sp(6, F)
    # diag(a,0,0,0,0,-a): GL_1 pair x Sp_4 zero -> [2,1,1] doubled...
    X = la.mat([[F(2) if (i, j) == (0, 0) else
                 (F(-2) if (i, j) == (5, 5) else F.zero)
                 for j in range(6)] for i in range(6)])
    assert fac.is_lie(X)
    levi = lg.levi_factors_for_induction(X, fac)
    kinds = sorted((t, m) for t, m, _ in levi)
    assert kinds == [("A", 1), ("C", 4)]
    # regular split semisimple: Borel of Sp_6 -> regular orbit [6]
    X = la.mat([[F(v) if i == j else F.zero for j in range(6)]
                for i, v in enumerate((1, 2, 3, -3, -2, -1))])
    assert lg.induced_label(X, fac) == (6,)


def test_induced_label_sp_with_nilpotent_part():
    F = prime_field(23)
    fac = lg.Factor.sp(6, F)
    # semisimple part diag(a,0,0,0,0,-a); nilpotent part a [4]-chain in
    # the Sp_4 block; induction from GL_1 x Sp_4 with orbit [4] gives [6]
    X = [[F.zero] * 6 for _ in range(6)]
    X[0][0], X[5][5] = F(2), F(-2)
    X[1][2], X[2][3] = F.one, F.one
    X[3][4] = F(-1)
    X = la.mat(X)
    assert fac.is_lie(X)
    levi = lg.levi_factors_for_induction(X, fac)
    data = sorted((t, m, mu) for t, m, mu in levi)
    assert ("C", 4, (4,)) in data
    assert lg.induced_label(X, fac) == (6,)


def test_paired_eigenvalues_nonsplit():
    F = prime_field(5)
    fac = lg.Factor.sp(2, F)
    # [[0,1],[a,0]] with a a non-square: irreducible quadratic x^2 - a,
    # self-dual, eigenvalues +-sqrt(a): one GL_1 block over the
    # quadratic extension -> regular orbit of Sp_2
    X = mk(F, [[0, 1], [2, 0]])
    assert fac.is_lie(X)
    levi = lg.levi_factors_for_induction(X, fac)
    assert levi == [("A", 1, (1,))]
    assert lg.induced_label(X, fac) == (2,)


# -- goodness over the local field -------------------------------------


def test_good_depth_diagonal():
    L = LocalField(23)

    def diag(*es):
        n = len(es)
        return la.mat([[es[i] if i == j else L.zero()
                        for j in range(n)] for i in range(n)])

    # diag(t^-1, 2 t^-1, 0): differences all valuation -1 -> good depth -1
    g = diag(L.parse("t^-1"), L.parse("2*t^-1"), L.zero())
    assert lg.is_good_depth(g, Fraction(-1))
    assert not lg.is_good_depth(g, Fraction(0))
    # diag(t^-1, t^-1 + 1, 0): differences have valuations 0 and -1
    g = diag(L.parse("t^-1"), L.parse("t^-1 + 1"), L.zero())
    assert not lg.is_good_depth(g, Fraction(-1))
    # scalar shift is invisible to root values
    g = diag(L.parse("t^-1 + 3*t^2"), L.parse("2*t^-1 + 3*t^2"),
             L.parse("3*t^2"))
    assert lg.is_good_depth(g, Fraction(-1))


def test_good_depth_nondiagonal():
    L = LocalField(23)
    # [[0, 1], [t, 0]]: eigenvalues +-t^(1/2), ad eigenvalues 0, +-2 t^(1/2)
    g = la.mat([[L.zero(), L.one()], [L.uniformizer(), L.zero()]])
    assert lg.is_good_depth(g, Fraction(1, 2))
    assert not lg.is_good_depth(g, Fraction(1))
    # [[0, 1], [1, 0]]: root values of valuation 0
    g = la.mat([[L.zero(), L.one()], [L.one(), L.zero()]])
    assert lg.is_good_depth(g, Fraction(0))
    # [[0, 1], [t, 1]]: eigenvalue difference sqrt(1 + 4t), valuation 0
    g = la.mat([[L.zero(), L.one()], [L.uniformizer(), L.one()]])
    assert lg.is_good_depth(g, Fraction(0))


def test_good_depth_mixed_nondiagonal():
    L = LocalField(23)
    # block diag of [[0,1],[t,0]] and a far-away scalar: mixed valuations
    g = la.mat([
        [L.zero(), L.one(), L.zero()],
        [L.uniformizer(), L.zero(), L.zero()],
        [L.zero(), L.zero(), L.parse("t^-1")]])
    assert not lg.is_good_depth(g, Fraction(1, 2))
    assert not lg.is_good_depth(g, Fraction(-1))


def test_good_depth_ramified():
    E = LocalField(23).ramified_quadratic()
    # diag(w^-1, -w^-1): difference 2 w^-1, valuation -1/2
    g = la.mat([[E.parse("w^-1"), E.zero()],
                [E.zero(), E.parse("-w^-1")]])
    assert lg.is_good_depth(g, Fraction(-1, 2))
