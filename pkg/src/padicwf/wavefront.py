"""Inductive wave-front computation for elements with unramified
semisimple part.

The pipeline works on spectral data: finite sets of (apartment point,
matrix) entries representing, per orbit representative, the cosets met
by the adjoint orbit of the input at a given depth.  A descent step
adds the next good piece to every entry; at integer depth the induced
nilpotent label of each entry is read off its graded quotient, and the
wave-front set is the maximal antichain of these labels.  Non-integral
top depth is only supported through the shipped example classes, where
the decisive membership question reduces to an exact point count on a
flag variety.
"""

from fractions import Fraction

from . import building as bd
from . import liealg as lie
from . import linalg as la
from . import mpquotient as mpq
from . import orbits as ob
from . import springerlab as sl


def zmat(field, n):
    return [[field.zero() for _ in range(n)] for _ in range(n)]


class GroupSpec:
    """Ambient group data: type tag, matrix size, absolute rank, and the
    residue cardinality, with the characteristic bound p > 6N - 1."""

    def __init__(self, kind, n, rank, q):
        self.kind = kind
        self.n = n
        self.rank = rank
        self.q = q

    def char_bound_ok(self):
        return self.q > 6 * self.rank - 1

    def check_char(self, override=False):
        if not self.char_bound_ok() and not override:
            raise ValueError(
                "residue characteristic %d violates the bound p > %d "
                "(absolute rank %d); pass override to proceed"
                % (self.q, 6 * self.rank - 1, self.rank))


def levi_centralizer(gamma, field, n):
    """Centralizer structure of a diagonalizable matrix with entries on
    the diagonal: eigenvalue-grouped block sizes.  Only the diagonal
    case is supported."""
    for i in range(n):
        for j in range(n):
            if i != j and gamma[i][j].terms:
                raise NotImplementedError(
                    "centralizer only computed for diagonal elements")
    groups = {}
    for i in range(n):
        key = tuple(gamma[i][i].terms)
        groups.setdefault(key, []).append(i)
    return sorted((tuple(v) for v in groups.values()), key=len,
                  reverse=True)


class Entry:
    """One orbit representative in a spectral datum: a named apartment
    point together with an exact matrix for the coset."""

    def __init__(self, name, model, point, cmat):
        self.name = name
        self.model = model
        self.point = tuple(Fraction(x) for x in point)
        self.cmat = la.mat(cmat)

    def with_added(self, piece_fn):
        add = piece_fn(self.model)
        return Entry(self.name, self.model, self.point,
                     la.mat_add(self.cmat, la.mat(add)))

    def coset(self, depth):
        """The point field holds the full apartment weight vector."""
        return mpq.project(self.model, self.cmat, self.point, depth)


class SpectralDatum:
    """The entries of the coset set at one depth, one per recorded
    orbit representative (orbit saturation is implicit)."""

    def __init__(self, depth, entries):
        self.depth = Fraction(depth)
        self.entries = list(entries)


class GoodChain:
    """A sum of commuting good pieces of strictly decreasing integer
    depth, with an optional nilpotent tail.  Pieces are given as
    constructors taking the ambient model, so one chain can be read in
    several coordinate charts."""

    def __init__(self, pieces, tail=None, check_model=None):
        self.pieces = [(name, fn, Fraction(r)) for name, fn, r in pieces]
        depths = [r for _, _, r in self.pieces]
        assert depths == sorted(depths, reverse=True), \
            "pieces must be listed by strictly decreasing depth"
        assert len(set(depths)) == len(depths)
        self.tail = tail
        if check_model is not None:
            self.validate(check_model)

    def validate(self, model):
        """Goodness of every piece and pairwise commutation."""
        E = model.field
        mats = []
        for name, fn, r in self.pieces:
            g = la.mat(fn(model))
            if not lie.is_good_depth(g, r):
                raise ValueError("piece %r is not good at depth %s"
                                 % (name, r))
            mats.append(g)
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if any(e.terms for row in la.bracket(mats[i], mats[j])
                       for e in row):
                    raise ValueError("pieces %r and %r do not commute"
                                     % (self.pieces[i][0],
                                        self.pieces[j][0]))


class WFResult:
    """A maximal antichain of orbit labels with provenance."""

    def __init__(self, labels, provenance, is_upper_bound=False,
                 notes=()):
        self.labels = tuple(sorted(labels, reverse=True))
        self.provenance = provenance
        self.is_upper_bound = is_upper_bound
        self.notes = tuple(notes)

    def __repr__(self):
        kind = "bound" if self.is_upper_bound else "exact"
        return "WFResult(%s: %s)" % (
            kind, ", ".join(ob.fmt_partition(l) for l in self.labels))


def descend(datum, piece_fn):
    """Add the next good piece to every entry: the coset set of the sum
    at this depth, per orbit representative."""
    return SpectralDatum(datum.depth,
                         [e.with_added(piece_fn) for e in datum.entries])


def step_contributions(datum):
    """Induced label of every entry, at integer depth."""
    if datum.depth.denominator != 1:
        raise ValueError("non-integral depth %s" % datum.depth)
    out = []
    for e in datum.entries:
        out.append((e, mpq.n_label(e.coset(datum.depth))))
    return out


def wf_upper_bound(datum, notes=()):
    """Maximal antichain of the induced labels; an exact answer at
    integer depth, an upper bound otherwise."""
    bound = datum.depth.denominator != 1
    contribs = [(e, mpq.n_label(e.coset(datum.depth)))
                for e in datum.entries]
    labels = ob.max_antichain([lab for _, lab in contribs])
    prov = {}
    for e, lab in contribs:
        prov.setdefault(ob.partition(lab), []).append(e.name)
    return WFResult(labels, prov, is_upper_bound=bound, notes=notes)


def compute_wf(chain, seed, mode="exact"):
    """Run the descent over the chain starting from the innermost
    spectral datum.  Each piece at the seed's depth is added by the
    descent step; deeper transfers between levels require explicit
    facet data and are outside the generic driver."""
    assert mode in ("exact", "bound")
    datum = seed
    applied = False
    for name, fn, r in chain.pieces:
        if r > datum.depth:
            continue  # consumed by the black-box seed datum
        if r != datum.depth:
            raise NotImplementedError(
                "level transfer from depth %s to %s requires explicit "
                "facet data" % (datum.depth, r))
        datum = descend(datum, fn)
        applied = True
    assert applied, "no piece matches the seed depth"
    if chain.tail is not None:
        datum = descend(datum, chain.tail)
    notes = []
    if mode == "bound":
        notes.append("upper bound per the replacement heuristic; "
                     "equality is conjectural, not assumed")
    res = wf_upper_bound(datum, notes=notes)
    if mode == "bound" and not res.is_upper_bound:
        res = WFResult(res.labels, res.provenance, is_upper_bound=True,
                       notes=res.notes)
    return res


# -- built-in example data -----------------------------------------------


def u6_gamma_deep(model):
    """Depth -1 diagonal piece: varpi^{-1} diag(0,0,l3,l4,l5,l6) with
    distinct trace-zero residue units."""
    E = model.field
    g = zmat(E, 6)
    s = E.from_residue(E.residue.gen)
    for i in range(2, 6):
        g[i][i] = E.parse("t^-1") * s * E.from_int(i + 1)
    return g


def u6_gamma_zero(model):
    """Depth 0 diagonal piece supported on the first two coordinates."""
    E = model.field
    g = zmat(E, 6)
    s = E.from_residue(E.residue.gen)
    for i in range(2):
        g[i][i] = s * E.from_int(i + 1)
    return g


def u6_chain_regular(model):
    """Regular nilpotent of the rank-1 block {0,1} at valuation -1."""
    E = model.field
    k = E.residue
    g = zmat(E, 6)
    tinv = E.parse("t^-1")
    b = k((5, 2))
    m = [[k.gen, b], [-b.conj(), -k.gen]]
    for i in range(2):
        for j in range(2):
            g[i][j] = tinv * E.from_residue(m[i][j])
    return g


def u6_spec():
    return GroupSpec("u", 6, 6, 23)


def u6_seed():
    """The inner coset set at depth -1 for the depth-0 piece inside its
    centralizer (a rank-1 unitary group times a torus): the two vertex
    classes and the alcove of its building, with the regular nilpotent
    appearing at the second vertex."""
    m = bd.u6_model(23)
    mh = bd.u6_hyp_model(23)
    z6 = zmat(m.field, 6)
    return SpectralDatum(-1, [
        Entry("y", m, bd.U6_Y, z6),
        Entry("alcove", mh, bd.U6_ALCOVE, zmat(mh.field, 6)),
        Entry("z", m, bd.U6_Z, u6_chain_regular(m)),
    ])


def u6_chain():
    return GoodChain([
        ("gamma0", u6_gamma_zero, 0),
        ("gamma-1", u6_gamma_deep, -1),
    ], check_model=bd.u6_model(23))


def u6_example(mode="exact"):
    """The two-step unitary reproduction: labels [4,1,1] and [3,3]."""
    u6_spec().check_char(override=True)
    return compute_wf(u6_chain(), u6_seed(), mode)


def toral_gamma(model):
    """A depth-0 diagonal regular element with distinct trace-zero
    residue units: its centralizer is an anisotropic torus."""
    E = model.field
    g = zmat(E, 6)
    s = E.from_residue(E.residue.gen)
    for i in range(6):
        g[i][i] = s * E.from_int(i + 1)
    return g


def toral_example():
    """Single good element with anisotropic centralizer: the building of
    the centralizer is one point, so one facet carries the answer."""
    m = bd.u6_model(23)
    chain = GoodChain([("gamma", toral_gamma, 0)], check_model=m)
    seed = SpectralDatum(0, [Entry("y", m, bd.U6_Y, zmat(m.field, 6))])
    return compute_wf(chain, seed, "exact")


def u7_gamma_zero(model):
    """Depth 0 anisotropic corner piece of the rank-3 ramified group."""
    E = model.field
    g = zmat(E, 7)
    g[0][6] = E.from_int(5) * E.uniformizer()
    g[6][0] = E.parse("w^-1")
    return g


def u7_chain_y(model):
    """Length-5 nilpotent chain in the depth-0 quotient at the first
    special vertex."""
    E = model.field
    g = zmat(E, 7)
    g[2][1] = E.one()
    g[3][2] = E.one()
    g[4][3] = E.from_int(-1)
    g[5][4] = E.from_int(-1)
    return g


def u7_chain_z(model):
    """Length-4 nilpotent chain in the depth-0 quotient at the second
    special vertex."""
    E = model.field
    g = zmat(E, 7)
    for i, j in ((2, 1), (4, 2), (5, 4)):
        g[i][j] = E.uniformizer()
    return g


U7_Y = (Fraction(0), Fraction(0))
U7_Z = (Fraction(3, 4), Fraction(1, 4))

PATH_DISCREPANCY_NOTE = (
    "path check: a prior hand count of the descent path from the "
    "z-chain gives 10 edges with an empty parameter interval "
    "(1/12 < s < 1/18); the exact computation yields 12 edges with "
    "breakpoints 1/20, 1/12, 1/8, 3/20, 1/6, 1/4")


def u7_spec():
    return GroupSpec("u", 7, 7, 23)


def u7_example(variant="plain"):
    """Half-integral-depth reproduction.  The deciding question is
    whether the shorter chain at the second vertex is met by the
    depth-1/2 part; it reduces to rational points on a flag subvariety,
    with corner coefficient 3 for the plain variant and 1 for the
    primed one."""
    assert variant in ("plain", "prime")
    u7_spec().check_char(override=True)
    m = bd.u7_model(23)
    coeff = 3 if variant == "plain" else 1
    entries = [Entry("y", m, m.point(U7_Y),
                     la.mat_add(la.mat(u7_gamma_zero(m)),
                                la.mat(u7_chain_y(m))))]
    count = sl.curve_count(coeff, 23)
    notes = ["curve count at the second vertex: %d (coefficient %d)"
             % (count, coeff), PATH_DISCREPANCY_NOTE]
    if count > 0:
        entries.append(Entry("z", m, m.point(U7_Z),
                             la.mat_add(la.mat(u7_gamma_zero(m)),
                                        la.mat(u7_chain_z(m)))))
    datum = SpectralDatum(0, entries)
    res = wf_upper_bound(datum, notes=notes)
    # the top depth 1/2 is not an integer: only an upper bound is
    # certified by the generic argument
    return WFResult(res.labels, res.provenance, is_upper_bound=True,
                    notes=res.notes)
