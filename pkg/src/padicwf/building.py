"""Augmented apartments: critical hyperplanes, facets, depth, membership.

The apartment of the diagonal split torus is modeled by an affine map
x -> w(x) from free coordinates to a full weight vector (one weight per
matrix index).  The parahoric lattice at the point w contains a Lie
algebra element at level r iff every matrix entry satisfies

    val(X_ij) >= r + w_j - w_i.

The form couples matrix positions into classes sharing one free scalar
parameter; each class records its member positions (with valuation
shifts coming from the Gram matrix), the set of valuations its parameter
can take, and the residue dimension per valuation.  All the geometry of
the augmented apartment A x R -- critical hyperplanes, facet sign
vectors, depth, facets below -- is derived from these thresholds by
exact rational arithmetic.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .localfield import LocalField, PrecisionError

ZERO = Fraction(0)


# -- exact rational linear algebra -------------------------------------


def qsolve_unique(rows, rhs):
    """Unique solution of a square-or-over system over Q, else None."""
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)]
           for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != n:
        return None
    for i in range(r, len(aug)):
        if aug[i][n]:
            return None  # inconsistent
    return tuple(aug[c_i][n] for c_i in range(n))


def qrank(rows):
    rows = [[Fraction(x) for x in row] for row in rows]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def polytope_vertices(eqs, ineqs, dim):
    """Vertices of {y : a.y = b for eqs, a.y <= b for ineqs} in Q^dim.

    Constraints are (coefficient tuple, bound) pairs.  Brute-force over
    active sets; intended for dim <= 4.
    """
    # parallel inequalities: only the tightest bound per direction binds
    tight = {}
    for a, b in ineqs:
        if a not in tight or b < tight[a]:
            tight[a] = b
    ineqs = sorted(tight.items())
    # independent subset of the equalities
    base = []
    for a, b in eqs:
        if qrank([list(r[0]) + [r[1]] for r in base + [(a, b)]]) > len(base):
            base.append((a, b))
    need = dim - len(base)
    if need < 0:
        return []
    verts = []
    for extra in combinations(range(len(ineqs)), need):
        sysrows = base + [ineqs[i] for i in extra]
        sol = qsolve_unique([list(a) for a, _ in sysrows],
                            [b for _, b in sysrows])
        if sol is None:
            continue
        if any(sum(ai * yi for ai, yi in zip(a, sol)) != b
               for a, b in eqs):
            continue
        if any(sum(ai * yi for ai, yi in zip(a, sol)) > b
               for a, b in ineqs):
            continue
        if sol not in verts:
            verts.append(sol)
    return verts


# -- entry coupling classes --------------------------------------------


class EntryClass:
    """Matrix positions sharing one free scalar parameter.

    members: tuple of (i, j, shift): position (i,j) carries the
    parameter at valuation v + shift when the parameter has valuation v.
    offset/step: the parameter's valuation set is offset + step*Z.
    pdim: residue dimension contributed per allowed valuation.
    """

    def __init__(self, members, offset, step, pdim):
        self.members = tuple((i, j, Fraction(s)) for i, j, s in members)
        self.offset = Fraction(offset)
        self.step = Fraction(step)
        self.pdim = pdim

    def allows(self, v):
        return (Fraction(v) - self.offset) % self.step == 0

    def positions(self):
        return [(i, j) for i, j, _ in self.members]

    def thresholds(self, w, r):
        """Lower bounds on the parameter valuation at (w, r)."""
        return [Fraction(r) + w[j] - w[i] - s for i, j, s in self.members]

    def __repr__(self):
        return "EntryClass(%s)" % (self.positions(),)


def _monomial_gram(gram):
    """Extract (sigma, units, valuations) from a monomial Gram matrix."""
    n = len(gram)
    sigma, vals, units = [None] * n, [None] * n, [None] * n
    for i in range(n):
        nz = [j for j in range(n) if gram[i][j].terms]
        assert len(nz) == 1, "gram must be monomial"
        j = nz[0]
        e = gram[i][j]
        assert len(e.terms) == 1, "gram entries must be monomials"
        sigma[i], vals[i], units[i] = j, e.val(), e.leading()
    return sigma, vals, units


def coupling_classes(kind, n, field, gram=None):
    """Coupling classes of a classical factor over a local field.

    kind 'gl': free positions.  kind 'u': the form pairs position (i,j)
    with (sigma(j), sigma(i)); self-paired positions keep only the
    +1 or -1 eigenspace of the twisted conjugation, which restricts the
    valuation set.
    """
    if kind == "gl":
        step = Fraction(1, field.e)
        return [EntryClass([(i, j, 0)], 0, step, 1)
                for i in range(n) for j in range(n)]
    assert kind == "u" and gram is not None
    sigma, dvals, _ = _monomial_gram(gram)
    step = Fraction(1, field.e)
    two_dim = field.kind == "unram"  # entries are 2-dim over k per level
    classes = []
    seen = set()
    for a in range(n):
        for b in range(n):
            if (a, b) in seen:
                continue
            pa, pb = sigma[b], sigma[a]  # partner position
            if (pa, pb) == (a, b):
                # X_ab = -conj(X_ab) * unit: one eigenspace survives
                if field.kind == "unram":
                    # conj-antifixed line at every integer valuation
                    classes.append(EntryClass([(a, b, 0)], 0, 1, 1))
                else:
                    # ramified: -conj fixes w^odd coefficients
                    classes.append(EntryClass([(a, b, 0)],
                                              Fraction(1, 2), 1, 1))
                seen.add((a, b))
            else:
                shift = dvals[sigma[b]] - dvals[sigma[a]]
                classes.append(EntryClass(
                    [(a, b, 0), (pa, pb, shift)], 0,
                    1 if two_dim else step, 2 if two_dim else 1))
                seen.add((a, b))
                seen.add((pa, pb))
    return classes


# -- apartment models --------------------------------------------------


class Model:
    """A classical factor with its coupling classes and apartment chart.

    weight_funcs: per matrix index an affine function of the d free
    apartment coordinates, given as (coefficient tuple, constant).
    Models without a chart (d = 0) are evaluated at explicit weight
    vectors only.
    """

    def __init__(self, name, n, field, classes, weight_funcs=None,
                 gram=None, kind=None):
        self.name = name
        self.n = n
        self.field = field
        self.classes = classes
        self.weight_funcs = weight_funcs
        self.gram = gram
        self.kind = kind
        self.d = len(weight_funcs[0][0]) if weight_funcs else 0
        self.club_indices = tuple(range(n))
        self._pos_map = None

    def position_class(self, i, j):
        """(class, shift) of the coupling class carrying position (i,j)."""
        if self._pos_map is None:
            self._pos_map = {}
            for cls in self.classes:
                for a, b, s in cls.members:
                    self._pos_map[(a, b)] = (cls, s)
        return self._pos_map.get((i, j))

    def point(self, x):
        """Weight vector of the apartment point with coordinates x."""
        assert len(x) == self.d
        return tuple(sum((c * Fraction(xi) for c, xi in zip(coeffs, x)),
                         Fraction(const))
                     for coeffs, const in self.weight_funcs)

    def weight_diff(self, i, j):
        """Affine function w_i - w_j as (coeffs, const)."""
        (ci, ki), (cj, kj) = self.weight_funcs[i], self.weight_funcs[j]
        return tuple(a - b for a, b in zip(ci, cj)), ki - kj

    def __repr__(self):
        return "Model(%s)" % self.name


def gl_split_model(n, q):
    """gl_n over k((t)) with the full diagonal torus chart."""
    L = LocalField(q)
    wf = [(tuple(Fraction(1 if k == i else 0) for k in range(n)), ZERO)
          for i in range(n)]
    return Model("gl%d" % n, n, L, coupling_classes("gl", n, L),
                 weight_funcs=wf, kind="gl")


def sl2_model(q):
    """sl_2 over k((t)): one apartment coordinate, weights (x, -x)."""
    L = LocalField(q)
    wf = [((Fraction(1),), ZERO), ((Fraction(-1),), ZERO)]
    return Model("sl2", 2, L, coupling_classes("gl", 2, L),
                 weight_funcs=wf, kind="gl")


def sl3_model(q):
    L = LocalField(q)
    wf = [((Fraction(1), ZERO), ZERO), ((ZERO, Fraction(1)), ZERO),
          ((Fraction(-1), Fraction(-1)), ZERO)]
    return Model("sl3", 3, L, coupling_classes("gl", 3, L),
                 weight_funcs=wf, kind="gl")


@lru_cache(maxsize=None)
def u6_model(q=23):
    """U_6 for the diagonal hermitian form (1,1,1,1,1,varpi), unramified
    quadratic entries.  No chart: evaluated at explicit weight vectors."""
    E = LocalField(q).unramified_quadratic()
    n = 6
    g = [[E.zero()] * n for _ in range(n)]
    for i in range(5):
        g[i][i] = E.one()
    g[5][5] = E.uniformizer()  # val 1
    classes = coupling_classes("u", n, E, g)
    return Model("u6", n, E, classes, gram=g, kind="u")


U6_Y = (ZERO, ZERO, ZERO, ZERO, ZERO, Fraction(1, 2))
U6_Z = (Fraction(1, 2), Fraction(1, 2), ZERO, ZERO, ZERO, Fraction(1, 2))


@lru_cache(maxsize=None)
def u6_hyp_model(q=23):
    """U_6 with the first two coordinates rewritten in a hyperbolic
    basis: form x1*conj(y2) + x2*conj(y1) + x3*conj(y3) + ... +
    varpi x6*conj(y6).  The alcove of the split U_2-plane lives on the
    chart points (x, -x, 0, 0, 0, 1/2)."""
    E = LocalField(q).unramified_quadratic()
    n = 6
    g = [[E.zero()] * n for _ in range(n)]
    g[0][1] = E.one()
    g[1][0] = E.one()
    for i in range(2, 5):
        g[i][i] = E.one()
    g[5][5] = E.uniformizer()
    classes = coupling_classes("u", n, E, g)
    return Model("u6hyp", n, E, classes, gram=g, kind="u")


U6_ALCOVE = (Fraction(1, 4), Fraction(-1, 4), ZERO, ZERO, ZERO,
             Fraction(1, 2))


@lru_cache(maxsize=None)
def u7_model(q=23):
    """U_7 for the antidiagonal hermitian form, ramified quadratic
    entries; chart (x1, x2) -> (-1/4, x1, x2, 0, -x2, -x1, 1/4).  The
    frozen first/last coordinates place the rank-2 anisotropic torus
    directions so that the torus Lie algebra sits at depth 0 with
    equality."""
    E = LocalField(q).ramified_quadratic()
    n = 7
    g = [[E.zero()] * n for _ in range(n)]
    for i in range(n):
        g[i][n - 1 - i] = E.one()
    classes = coupling_classes("u", n, E, g)
    q14 = Fraction(1, 4)
    wf = [
        ((ZERO, ZERO), -q14),
        ((Fraction(1), ZERO), ZERO),
        ((ZERO, Fraction(1)), ZERO),
        ((ZERO, ZERO), ZERO),
        ((ZERO, Fraction(-1)), ZERO),
        ((Fraction(-1), ZERO), ZERO),
        ((ZERO, ZERO), q14),
    ]
    return Model("u7", n, E, classes, weight_funcs=wf, gram=g, kind="u")


@lru_cache(maxsize=None)
def u7_h_model(q=23):
    """The centralizer U_5 x T inside the u7 model: inner-block classes
    plus the torus class on indices (0, 6); same chart."""
    g = u7_model(q)
    inner = set(range(1, 6))
    classes = [c for c in g.classes
               if all(i in inner and j in inner for i, j in c.positions())]
    classes.append(EntryClass([(0, 0, 0), (6, 6, 0)], 0,
                              Fraction(1, 2), 1))
    m = Model("u7h", g.n, g.field, classes,
              weight_funcs=g.weight_funcs, gram=g.gram, kind="u")
    m.club_indices = tuple(range(1, 6))
    return m


# -- windows and critical hyperplanes ----------------------------------


class Window:
    """Bounded box in A x R: per-coordinate ranges and an r range."""

    def __init__(self, xranges, rmin, rmax):
        self.xranges = tuple((Fraction(a), Fraction(b))
                             for a, b in xranges)
        self.rmin, self.rmax = Fraction(rmin), Fraction(rmax)

    def contains(self, x, r):
        return all(a <= Fraction(xi) <= b
                   for (a, b), xi in zip(self.xranges, x)) and \
            self.rmin <= Fraction(r) <= self.rmax

    def box_constraints(self):
        """Closed box as (coeffs over (x, r), bound) inequality pairs."""
        d = len(self.xranges)
        out = []
        for k, (a, b) in enumerate(self.xranges):
            e = tuple(Fraction(1 if i == k else 0) for i in range(d + 1))
            out.append((e, b))
            out.append((tuple(-c for c in e), -a))
        er = tuple(Fraction(0) if i < d else Fraction(1)
                   for i in range(d + 1))
        out.append((er, self.rmax))
        out.append((tuple(-c for c in er), -self.rmin))
        return out

    def key(self):
        return (self.xranges, self.rmin, self.rmax)


class Plane:
    """Critical hyperplane {r = f(x)} with f affine; horizontal iff f
    is constant."""

    def __init__(self, coeffs, const):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        self.const = Fraction(const)

    def horizontal(self):
        return not any(self.coeffs)

    def eval_f(self, x):
        return sum((c * Fraction(xi) for c, xi in zip(self.coeffs, x)),
                   self.const)

    def sign_at(self, x, r):
        d = Fraction(r) - self.eval_f(x)
        return 0 if d == 0 else (1 if d > 0 else -1)

    def functional(self):
        """(coeffs over (x, r), bound) with the plane as {a.y = b}:
        r - f(x) = 0, i.e. (-coeffs, 1) . (x, r) = const."""
        return tuple(-c for c in self.coeffs) + (Fraction(1),), self.const

    def key(self):
        return self.coeffs, self.const

    def __repr__(self):
        if self.horizontal():
            return "Plane(r = %s)" % self.const
        return "Plane(r = %s + %s . x)" % (self.const, list(self.coeffs))


def _frange(coeffs, const, window):
    """Range of an affine function over the window box."""
    lo = hi = const
    for c, (a, b) in zip(coeffs, window.xranges):
        if c > 0:
            lo, hi = lo + c * a, hi + c * b
        elif c < 0:
            lo, hi = lo + c * b, hi + c * a
    return lo, hi


_PLANE_CACHE = {}


def critical_hyperplanes(model, window):
    """All critical hyperplanes of the model meeting the window.

    One plane per (class member, allowed parameter valuation) whose
    graph {r = v + shift + w_i(x) - w_j(x)} meets the window; planes
    with constant f are the horizontal (torus-jump) planes.
    """
    ck = (model.name, id(model), window.key())
    if ck in _PLANE_CACHE:
        return _PLANE_CACHE[ck]
    assert model.weight_funcs is not None, "model has no apartment chart"
    planes = {}
    for cls in model.classes:
        for i, j, s in cls.members:
            coeffs, const = model.weight_diff(i, j)
            lo, hi = _frange(coeffs, const, window)
            # the plane {r = v + s + (w_i - w_j)(x)} meets the window
            # iff v is in [rmin - s - hi, rmax - s - lo]
            vlo, vhi = window.rmin - s - hi, window.rmax - s - lo
            k = -((cls.offset - vlo) // cls.step)  # ceil((vlo-off)/step)
            while True:
                v = cls.offset + k * cls.step
                if v > vhi:
                    break
                pl = Plane(coeffs, v + s + const)
                planes[pl.key()] = pl
                k += 1
    out = sorted(planes.values(), key=lambda p: p.key())
    _PLANE_CACHE[ck] = out
    return out


class AugFacet:
    """An augmented facet: sign vector against the window's planes."""

    def __init__(self, model, window, signs, sample):
        self.model = model
        self.window = window
        self.signs = tuple(signs)
        self.sample = sample  # one interior point (x, r)
        self._verts = None

    def planes(self):
        return critical_hyperplanes(self.model, self.window)

    def key(self):
        return self.signs

    def __eq__(self, other):
        return isinstance(other, AugFacet) and self.signs == other.signs \
            and self.window.key() == other.window.key()

    def __hash__(self):
        return hash((self.signs, self.window.key()))

    def constraints(self):
        eqs, ineqs = [], []
        for pl, s in zip(self.planes(), self.signs):
            a, b = pl.functional()
            if s == 0:
                eqs.append((a, b))
            elif s > 0:
                ineqs.append((tuple(-c for c in a), -b))
            else:
                ineqs.append((a, b))
        ineqs.extend(self.window.box_constraints())
        return eqs, ineqs

    def vertices(self):
        if self._verts is None:
            eqs, ineqs = self.constraints()
            self._verts = polytope_vertices(eqs, ineqs, self.model.d + 1)
        return self._verts

    def depth(self):
        return max(v[-1] for v in self.vertices())

    def is_horizontal(self):
        vs = self.vertices()
        return max(v[-1] for v in vs) == min(v[-1] for v in vs)

    def dim(self):
        vs = self.vertices()
        if len(vs) <= 1:
            return 0
        v0 = vs[0]
        return qrank([[a - b for a, b in zip(v, v0)] for v in vs[1:]])

    def __repr__(self):
        return "AugFacet(dep=%s, dim=%d%s)" % (
            self.depth(), self.dim(),
            ", horizontal" if self.is_horizontal() else "")


def facet_of(model, window, x, r):
    """The augmented facet containing the point (x, r)."""
    x = tuple(Fraction(xi) for xi in x)
    r = Fraction(r)
    if not window.contains(x, r):
        raise ValueError("outside window")
    planes = critical_hyperplanes(model, window)
    signs = [pl.sign_at(x, r) for pl in planes]
    return AugFacet(model, window, signs, (x, r))


def precede(f1, f2):
    """The strict order on facets: smaller depth first, and at equal
    depth the larger-dimensional facet precedes (descent moves from a
    facet to the smaller facets below it at the same depth)."""
    d1, d2 = f1.depth(), f2.depth()
    if d1 != d2:
        return d1 < d2
    return f1.dim() > f2.dim()


def facets_below(facet):
    """Horizontal facets in the closure of a facet at its depth."""
    if facet.is_horizontal():
        raise ValueError("facet is horizontal")
    dep = facet.depth()
    bottom = [v for v in facet.vertices() if v[-1] == dep]
    cands = {}
    for size in range(1, len(bottom) + 1):
        for sub in combinations(bottom, size):
            c = tuple(sum(col) / len(sub) for col in zip(*sub))
            x, r = c[:-1], c[-1]
            f = facet_of(facet.model, facet.window, x, r)
            cands[f.key()] = f
    out = []
    for f in cands.values():
        if not f.is_horizontal() or f.depth() != dep:
            continue
        ok = all(s2 == s1 or s2 == 0
                 for s1, s2 in zip(facet.signs, f.signs))
        if ok:
            out.append(f)
    assert out, "no horizontal facet below"
    return out


# -- Moy-Prasad membership and depth -----------------------------------


def _entry_geq(e, thr, strict):
    """Whether val(entry) >= thr (or > if strict), precision-aware."""
    thr = Fraction(thr)
    if not e.terms:
        if e.prec is None:
            return True  # exact zero
        if e.prec >= thr if not strict else e.prec > thr:
            return True
        raise PrecisionError("insufficient precision")
    v = e.val()
    return v > thr if strict else v >= thr


def mp_member(model, gamma, w, r, strict=False):
    """gamma in g(F)_{w >= r} (or > r): entrywise valuation thresholds."""
    r = Fraction(r)
    w = tuple(Fraction(wi) for wi in w)
    for i in range(model.n):
        for j in range(model.n):
            if not _entry_geq(gamma[i][j], r + w[j] - w[i], strict):
                return False
    return True


def dep_element(model, gamma, window):
    """Depth of gamma: max r with mp_member over the windowed apartment."""
    assert model.weight_funcs is not None
    d = model.d
    eqs = []
    ineqs = list(window.box_constraints())
    fuzzy = []
    for i in range(model.n):
        for j in range(model.n):
            e = gamma[i][j]
            if not e.terms and e.prec is None:
                continue
            v = e.val() if e.terms else e.prec
            # r <= v + (w_i - w_j)(x): (-coeffs_ij, 1).(x,r) <= v + const
            coeffs, const = model.weight_diff(i, j)
            a = tuple(-c for c in coeffs) + (Fraction(1),)
            ineqs.append((a, v + const))
            if not e.terms:
                fuzzy.append((a, v + const))
    verts = polytope_vertices(eqs, ineqs, d + 1)
    if not verts:
        raise ValueError("no admissible point in window")
    best = max(verts, key=lambda v: v[-1])
    r = best[-1]
    for a, b in fuzzy:
        if sum(ai * yi for ai, yi in zip(a, best)) == b:
            raise PrecisionError("insufficient precision")
    return r


# -- graded pieces -----------------------------------------------------


def class_threshold(cls, w, r):
    """Binding lower bound for the class parameter at (w, r), and
    whether the bound sits on the parameter's valuation grid."""
    thrs = cls.thresholds(w, r)
    m = max(thrs)
    return m, cls.allows(m)


def grade_dim(model, w, r):
    """Residue dimension of the graded piece g(F)_{w = r}."""
    w = tuple(Fraction(wi) for wi in w)
    total = 0
    for cls in model.classes:
        m, on_grid = class_threshold(cls, w, Fraction(r))
        if on_grid:
            total += cls.pdim
    return total


def heart_blocks(model, w):
    """Blocks of matrix indices joined by grade-0 classes, with the
    residue dimension carried by each block."""
    w = tuple(Fraction(wi) for wi in w)
    parent = list(range(model.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    active = []
    for cls in model.classes:
        m, on_grid = class_threshold(cls, w, ZERO)
        if not on_grid:
            continue
        active.append(cls)
        idx = sorted({k for pos in cls.positions() for k in pos})
        for k in idx[1:]:
            parent[find(idx[0])] = find(k)
    blocks = {}
    for i in range(model.n):
        blocks.setdefault(find(i), []).append(i)
    out = []
    for members in blocks.values():
        mset = set(members)
        dim = sum(c.pdim for c in active
                  if all(i in mset and j in mset
                         for i, j in c.positions()))
        out.append((tuple(members), dim))
    return sorted(out)


def classify_block(members, dim):
    """Type tag of a reductive-quotient factor from (size, dimension)."""
    m = len(members)
    if dim == m * m:
        return "A", m
    if dim == m:
        return "T", m  # product of rank-one tori
    if dim == m * (m + 1) // 2:
        return "C", m
    if dim == m * (m - 1) // 2:
        return "B" if m % 2 else "D", m
    raise ValueError("block (%d indices, dim %d) matches no classical "
                     "factor" % (m, dim))


def heart_structure(model, w):
    """Factor decomposition of the reductive quotient at w:
    list of (indices, type tag, size, dimension)."""
    out = []
    for members, dim in heart_blocks(model, w):
        tag, m = classify_block(members, dim)
        out.append((members, tag, m, dim))
    return out
