"""The descent graph on (facet, coset) pairs.

Vertices pair an augmented facet with a coset of the corresponding
lattice quotient.  Two edge rules drive the descent: from a horizontal
facet, walk in the cocharacter direction read off a lifted sl2-triple
with slope 2 (the coset transports unchanged); from a non-horizontal
facet, step down to a facet below and fan out over the finite fiber
of cosets refining the old one.  Every edge strictly increases the
(depth, dimension) order, so the graph is acyclic.

Fibers are enumerated exactly over the residue field up to a
configurable dimension cap; larger fibers raise FiberTooLarge so
callers can fall back to targeted membership tests.
"""

from fractions import Fraction
from itertools import combinations, product

from . import building as bd
from . import liealg as lie
from . import linalg as la
from . import mpquotient as mpq
from . import orbits as ob

ZERO = Fraction(0)


class FiberTooLarge(ValueError):
    def __init__(self, dim):
        super().__init__("fiber too large (dimension %d)" % dim)
        self.dim = dim


class GraphConfig:
    """below: 'first' or 'all' facets below; prune: 'none' or 'label'
    (drop rule-1 cosets whose label drops, which cannot reach anything);
    cap: largest number of fiber cosets materialized."""

    def __init__(self, below="first", prune="none", cap=2000):
        assert below in ("first", "all") and prune in ("none", "label")
        assert cap > 0
        self.below = below
        self.prune = prune
        self.cap = cap


def facet_center(facet):
    """Deterministic interior point: barycenter of the closure vertices."""
    vs = facet.vertices()
    c = tuple(sum(col) / len(vs) for col in zip(*vs))
    return c[:-1], c[-1]


def in_closure(inner, outer):
    """Whether the facet `inner` lies in the closure of `outer`."""
    return all(si == so or si == 0
               for so, si in zip(outer.signs, inner.signs))


class GraphVertex:
    """A facet together with a lattice coset, held as an exact matrix."""

    def __init__(self, model, facet, cmat):
        self.model = model
        self.facet = facet
        self.cmat = la.mat(cmat)
        self._coset = None

    def quot(self):
        x, r = facet_center(self.facet)
        return mpq.GradedQuotient(self.model, self.model.point(x), r)

    def coset(self):
        """Canonical coset representative: residues at the center."""
        if self._coset is None:
            self._coset = self.quot().project(self.cmat)
        return self._coset

    def is_nilpotent(self):
        return self.coset().is_nilpotent()

    def label(self):
        return mpq.n_label(self.coset())

    def key(self):
        return (self.facet.signs, self.coset().mat)

    def __eq__(self, other):
        return isinstance(other, GraphVertex) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "GraphVertex(dep=%s, dim=%d)" % (
            self.facet.depth(), self.facet.dim())


# -- rule 2: the cocharacter walk ----------------------------------------


def _walk_direction(v):
    """Chart direction and weight vector of the sl2 cocharacter of the
    coset, read from the diagonal of the lifted h."""
    model = v.model
    trip = mpq.lift_triple(v.coset())
    E = model.field
    kres = E.residue
    n = model.n
    for i in range(n):
        for j in range(n):
            if i != j and trip.h[i][j].terms:
                raise ValueError("sl2 cocharacter is not chart-aligned")
    p = E.q
    weights = []
    for i in range(n):
        cf = trip.h[i][i].residue_at(0) if trip.h[i][i].terms else kres.zero
        val = cf.v if not isinstance(cf.v, tuple) else cf.v[0]
        weights.append(Fraction(val if val <= p // 2 else val - p))
    rows = [list(coeffs) for coeffs, const in model.weight_funcs]
    lam = bd.qsolve_unique(rows, weights)
    if lam is None:
        raise ValueError("cocharacter not in the apartment chart")
    return lam, tuple(weights)


def _walk_step(model, window, x, r, lam, slope):
    """Largest safe parameter: half the first plane or wall crossing."""
    planes = bd.critical_hyperplanes(model, window)
    ts = []
    for pl in planes:
        den = slope - sum(c * l for c, l in zip(pl.coeffs, lam))
        if den:
            t = (pl.eval_f(x) - r) / den
            if t > 0:
                ts.append(t)
    for k, (a, b) in enumerate(window.xranges):
        if lam[k] > 0:
            ts.append((b - x[k]) / lam[k])
        elif lam[k] < 0:
            ts.append((a - x[k]) / lam[k])
    if slope > 0:
        ts.append((window.rmax - r) / slope)
    elif slope < 0:
        ts.append((window.rmin - r) / slope)
    ts = [t for t in ts if t > 0]
    assert ts, "no room to walk inside the window"
    return min(ts) / 2


def out_edge_rule2(v):
    """The unique out-neighbor along the cocharacter walk (slope 2)."""
    model, window = v.model, v.facet.window
    if not v.is_nilpotent():
        raise ValueError("walk requires a nilpotent coset")
    lam, _ = _walk_direction(v)
    x, r = facet_center(v.facet)
    eps = _walk_step(model, window, x, r, lam, 2)
    x2 = tuple(xi + eps * l for xi, l in zip(x, lam))
    f2 = bd.facet_of(model, window, x2, r + 2 * eps)
    if f2.signs == v.facet.signs:
        raise ValueError("scenario A: the walk stays inside the facet")
    assert not f2.is_horizontal()
    assert in_closure(v.facet, f2)
    assert bd.precede(v.facet, f2)
    return GraphVertex(model, f2, v.cmat)


# -- rule 1: descend to a facet below ------------------------------------


def fiber_basis(v, below):
    """Matrices spanning g_{>facet} / g_{>below}, over the prime residue
    field: the level-dep(facet) monomials strictly above the facet,
    intersected with the Lie algebra."""
    model = v.model
    kres = model.field.residue
    kp = kres.base_or_self()
    bx, brr = facet_center(below)
    quot = mpq.GradedQuotient(model, model.point(bx), brr)
    fx, fr = facet_center(v.facet)
    wf = model.point(fx)
    units = [B for B in mpq._grade_unit_lifts(quot, brr)
             if bd.mp_member(model, B, wf, fr, strict=True)]
    if not units:
        return []
    factor = mpq._local_factor(model)
    zero = la.zero_mat(model.field, model.n)
    defects = [factor.lie_defect(B) or zero for B in units]
    rows, _ = mpq._local_system(defects, [zero], kres, kp)
    if not rows:
        kern = [tuple(la.fone(kp) if i == j else la.fzero(kp)
                      for i in range(len(units)))
                for j in range(len(units))]
    else:
        kern = la.kernel_basis(la.mat(rows), kp)
    return [mpq._combine(units, vco, model.field, model.n) for vco in kern]


def out_edges_rule1(v, below, config=None):
    """All out-neighbors over one facet below: the coset fans out over
    the finite fiber.  Raises FiberTooLarge above the enumeration cap."""
    config = config or GraphConfig()
    basis = fiber_basis(v, below)
    kp = v.model.field.residue.base_or_self()
    if kp.p ** len(basis) > config.cap:
        raise FiberTooLarge(len(basis))
    scalars = [kp(a) for a in range(kp.p)]
    out = []
    base_label = None
    if config.prune == "label" and v.is_nilpotent():
        base_label = v.label()
    for coeffs in product(scalars, repeat=len(basis)):
        m = la.mat(v.cmat)
        for cf, B in zip(coeffs, basis):
            if cf:
                m = la.mat_add(m, la.mat_scale(
                    v.model.field.from_residue(cf), B))
        u = GraphVertex(v.model, below, m)
        if base_label is not None and u.is_nilpotent() and \
                not ob.dominance_leq(base_label, u.label()):
            continue
        out.append(u)
    return out


# -- paths and reachability ----------------------------------------------


class PathEdge:
    def __init__(self, src, dst, rule):
        self.src = src
        self.dst = dst
        self.rule = rule

    def __repr__(self):
        return "PathEdge(rule %d: dep %s -> %s)" % (
            self.rule, self.src.facet.depth(), self.dst.facet.depth())


def path_trace(v, to_depth, config=None):
    """Alternate rule-2 walks with forced rule-1 self-steps (the coset
    itself always survives to the facet below) until the depth target."""
    config = config or GraphConfig()
    to_depth = Fraction(to_depth)
    if not v.is_nilpotent():
        raise ValueError("dead end: coset is not nilpotent")
    edges = []
    label = v.label()
    while v.facet.depth() < to_depth:
        u = out_edge_rule2(v)
        edges.append(PathEdge(v, u, 2))
        below = bd.facets_below(u.facet)
        nxt = GraphVertex(v.model, below[0], u.cmat)
        assert bd.precede(u.facet, nxt.facet)
        assert ob.dominance_leq(label, nxt.label())
        label = nxt.label()
        edges.append(PathEdge(u, nxt, 1))
        v = nxt
    return edges


def facets_above(facet, limit=8):
    """Facets with this one in their closure: relax the zero signs."""
    model, window = facet.model, facet.window
    zeros = [i for i, s in enumerate(facet.signs) if s == 0]
    if len(zeros) > limit:
        raise ValueError("too many incident planes (%d)" % len(zeros))
    out = []
    for combo in product((-1, 0, 1), repeat=len(zeros)):
        if not any(combo):
            continue
        signs = list(facet.signs)
        for pos, s in zip(zeros, combo):
            signs[pos] = s
        f = bd.AugFacet(model, window, tuple(signs), None)
        if not f.vertices():
            continue
        x, r = facet_center(f)
        if bd.facet_of(model, window, x, r).signs != f.signs:
            continue  # degenerate sign pattern, not a real facet
        out.append(f)
    return out


def closure_horizontals(facet):
    """Horizontal facets contained in the closure of a facet."""
    model, window = facet.model, facet.window
    byr = {}
    for vert in facet.vertices():
        byr.setdefault(vert[-1], []).append(vert)
    found = {}
    for r, verts in byr.items():
        for size in range(1, len(verts) + 1):
            for sub in combinations(verts, size):
                c = tuple(sum(col) / len(sub) for col in zip(*sub))
                f = bd.facet_of(model, window, c[:-1], c[-1])
                if f.is_horizontal() and in_closure(f, facet):
                    found[f.signs] = f
    return list(found.values())


def predecessors(v, config=None):
    """In-neighbors of a vertex inside its window."""
    config = config or GraphConfig()
    model = v.model
    out = []
    if v.facet.is_horizontal():
        # rule-1 predecessors: non-horizontal facets this one is below
        for f in facets_above(v.facet):
            if f.is_horizontal() or f.depth() != v.facet.depth():
                continue
            if not any(b.signs == v.facet.signs
                       for b in bd.facets_below(f)):
                continue
            fx, fr = facet_center(f)
            if not bd.mp_member(model, v.cmat, model.point(fx), fr):
                continue
            out.append(GraphVertex(model, f, v.cmat))
    else:
        # rule-2 predecessors: horizontal facets walking into this one
        for f in closure_horizontals(v.facet):
            fx, fr = facet_center(f)
            if not bd.mp_member(model, v.cmat, model.point(fx), fr):
                continue
            cand = GraphVertex(model, f, v.cmat)
            try:
                if not cand.is_nilpotent():
                    continue
                u = out_edge_rule2(cand)
            except ValueError:
                continue
            if u.facet.signs == v.facet.signs and u.coset() == v.coset():
                out.append(cand)
    return out


def reachable(targets, config=None):
    """All vertices with a directed path into the target set, by
    backward closure over predecessor queries."""
    config = config or GraphConfig()
    seen = {t.key(): t for t in targets}
    frontier = list(targets)
    while frontier:
        v = frontier.pop()
        for u in predecessors(v, config):
            k = u.key()
            if k not in seen:
                seen[k] = u
                frontier.append(u)
    return set(seen.values())
