"""Cohomology of Koszul complexes: Tor tables, classes, and products.

compute_tor runs the differential bidegree by bidegree.  Within one
internal degree the complex is a finite chain of free modules; the kernel
at each spot comes from a Smith form of the outgoing map (saturated over
the integers), the incoming image is rewritten in kernel coordinates, and
its cokernel structure yields ranks, torsion invariants, and deterministic
representative cocycles.  When chi is the identity the differential also
preserves the fine multidegree, so each bidegree splits into small blocks
that are solved independently.

Classes are coordinate vectors over the representatives of one total
degree, free coordinates first and torsion coordinates reduced mod their
invariants.  Product tables reduce pairwise products of representatives;
a Hochster-style oracle recomputes moment-angle ranks from the reduced
cohomology of full subcomplexes, and uct_report cross-checks the mod-p
tables against the rational and integral ones.
"""

from itertools import combinations

from .exactalg import CoefficientRing, ExactMatrix
from .facering import FaceRing
from .koszul import (TwistData, compute_q, differential,
                     element_total_degree, monomial_degree, star_product,
                     wedge_product)

_ZZ = CoefficientRing.integers()


def _bidegree_basis(face, n, k, t):
    """Keys (S, m) with |S| = k and internal degree t, canonical order."""
    if k < 0 or k > n:
        return ()
    monos = face.basis_of_degree(t - 2 * k)
    if not monos:
        return ()
    return tuple((S, mono)
                 for S in combinations(range(1, n + 1), k)
                 for mono in monos)


def _scalar_mul(ring, a, b):
    c = a * b
    if ring.modulus:
        c %= ring.modulus
    return c


def _row_dot(ring, row, vec):
    acc = 0
    if len(row) > len(vec):
        row, vec = vec, row
    for j, a in row.items():
        b = vec.get(j)
        if b:
            acc += a * b
    if ring.modulus:
        acc %= ring.modulus
    return acc


def _canonical_invariants(invs):
    """Invariant factors of a direct sum of cyclic groups Z/d."""
    invs = [d for d in invs if d not in (0, 1)]
    if len(invs) <= 1:
        return tuple(invs)
    mat = ExactMatrix(len(invs), len(invs), _ZZ)
    for i, d in enumerate(sorted(invs)):
        mat.set(i, i, d)
    diag = mat.smith_normal_form(want=()).diagonal
    return tuple(d for d in diag if d != 1)


class _Block:
    """One multidegree block of a bidegree: basis keys, kernel data, and
    the cokernel of the incoming image in kernel coordinates."""

    __slots__ = ("keys", "index", "kernel_rows", "kernel_cols", "coker",
                 "incoming", "image")

    def __init__(self, ring, keys, out_index, incoming, dvec):
        self.keys = keys
        self.index = {key: i for i, key in enumerate(keys)}
        cols = []
        for key in keys:
            col = {}
            for key2, c in dvec(key).items():
                row = out_index.get(key2)
                if row is None:
                    raise AssertionError(
                        "differential left the bidegree basis at %r" % (key2,))
                col[row] = c
            cols.append(col)
        a_out = ExactMatrix.from_columns(cols, len(out_index), ring)
        sf = a_out.smith_normal_form(want=("V", "Vinv"))
        r = sf.rank
        self.kernel_rows = [dict(sf.Vinv.rows.get(i, {}))
                            for i in range(r, len(keys))]
        vcols = sf.V.columns()
        self.kernel_cols = [vcols.get(j, {}) for j in range(r, len(keys))]
        dim_ker = len(keys) - r
        self.incoming = incoming
        xcols = []
        for key in incoming:
            w = {self.index[key2]: c for key2, c in dvec(key).items()}
            y = {}
            for i, row in enumerate(self.kernel_rows):
                v = _row_dot(ring, row, w)
                if v:
                    y[i] = v
            xcols.append(y)
        self.image = ExactMatrix.from_columns(xcols, dim_ker, ring)
        self.coker = self.image.cokernel_structure()

    def element_of(self, y):
        """Kernel-coordinate vector -> element dict over this block's keys."""
        out = {}
        for i, c in y.items():
            for pos, v in self.kernel_cols[i].items():
                w = out.get(pos, 0) + c * v
                if w:
                    out[pos] = w
                else:
                    del out[pos]
        return {self.keys[pos]: c for pos, c in out.items()}

    def kernel_coords(self, ring, w_local):
        y = {}
        for i, row in enumerate(self.kernel_rows):
            v = _row_dot(ring, row, w_local)
            if v:
                y[i] = v
        return y


class TorEntry:
    """Cohomology of one bidegree: rank, torsion, and representatives."""

    __slots__ = ("bidegree", "blocks", "free_rank", "torsion", "generators")

    def __init__(self, bidegree, blocks):
        self.bidegree = bidegree
        self.blocks = blocks
        self.free_rank = sum(b.coker.free_rank for b in blocks)
        self.torsion = _canonical_invariants(
            [d for b in blocks for d in b.coker.torsion])
        gens = []
        for b in blocks:
            for y in b.coker.free_generators:
                gens.append((b.element_of(y), 0))
            for y, d in zip(b.coker.torsion_generators, b.coker.torsion):
                gens.append((b.element_of(y), d))
        self.generators = tuple(gens)

    @property
    def size(self):
        return len(self.generators)

    def __repr__(self):
        return "TorEntry(%r, rank=%d, torsion=%s)" % (
            self.bidegree, self.free_rank, list(self.torsion))


class CohomologyClass:
    """Coordinates over the representatives of one total degree: for each
    bidegree (smallest homological shift first) the free coordinates, then
    torsion coordinates in canonical range."""

    __slots__ = ("table", "total", "coords")

    def __init__(self, table, total, coords):
        moduli = table.layout(total).moduli
        if len(coords) != len(moduli):
            raise ValueError("coordinate length %d, layout needs %d"
                             % (len(coords), len(moduli)))
        self.table = table
        self.total = total
        self.coords = tuple(self._canon(c, m) for c, m in zip(coords, moduli))

    def _canon(self, c, m):
        if m:
            return int(c) % m
        if self.table.ring.modulus:
            return c % self.table.ring.modulus
        return c

    def _zip(self, other, op):
        if other.table is not self.table or other.total != self.total:
            raise ValueError("classes live in different groups")
        return CohomologyClass(self.table, self.total, tuple(
            op(a, b) for a, b in zip(self.coords, other.coords)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return CohomologyClass(self.table, self.total,
                               tuple(c * a for a in self.coords))

    @property
    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        return (isinstance(other, CohomologyClass)
                and self.table is other.table and self.total == other.total
                and self.coords == other.coords)

    def __hash__(self):
        return hash((id(self.table), self.total, self.coords))

    def by_bidegree(self):
        """{bidegree: coordinate tuple} for the nonzero parts."""
        layout = self.table.layout(self.total)
        out = {}
        for bd, offset, entry in layout.parts:
            part = self.coords[offset:offset + entry.size]
            if any(part):
                out[bd] = part
        return out

    def __repr__(self):
        return "<class total=%d %s>" % (self.total, dict(self.by_bidegree()))


class _TotalLayout:
    __slots__ = ("total", "parts", "moduli")

    def __init__(self, total, parts):
        self.total = total
        self.parts = parts  # (bidegree, offset, entry)
        moduli = []
        for _, _, entry in parts:
            moduli.extend(m for _, m in entry.generators)
        self.moduli = tuple(moduli)

    @property
    def size(self):
        return len(self.moduli)


class _Generator:
    __slots__ = ("gid", "bidegree", "index", "total", "element", "modulus")

    def __init__(self, gid, bidegree, index, total, element, modulus):
        self.gid = gid
        self.bidegree = bidegree
        self.index = index
        self.total = total
        self.element = element
        self.modulus = modulus

    def __repr__(self):
        return "<generator %r #%d>" % (self.bidegree, self.index)


class TorTable:
    """All bidegrees with total degree up to the bound, over one ring."""

    __slots__ = ("data", "ring", "bound", "method", "face", "entries",
                 "_layouts")

    def __init__(self, data, ring, bound, method, face, entries):
        self.data = data
        self.ring = ring
        self.bound = bound
        self.method = method
        self.face = face
        self.entries = entries
        self._layouts = {}

    def rank(self, bidegree):
        entry = self.entries.get(bidegree)
        return entry.free_rank if entry else 0

    def torsion(self, bidegree):
        entry = self.entries.get(bidegree)
        return entry.torsion if entry else ()

    def rank_table(self):
        return {bd: e.free_rank for bd, e in sorted(self.entries.items())
                if e.free_rank}

    def torsion_table(self):
        return {bd: e.torsion for bd, e in sorted(self.entries.items())
                if e.torsion}

    def total_rank(self, total):
        return sum(e.free_rank for bd, e in self.entries.items()
                   if bd[1] + bd[0] == total)

    def total_ranks(self):
        """Free rank per total degree, zero degrees omitted."""
        out = {}
        for (j, t), e in self.entries.items():
            if e.free_rank:
                out[t + j] = out.get(t + j, 0) + e.free_rank
        return dict(sorted(out.items()))

    def bidegrees_of_total(self, total):
        return sorted((bd for bd in self.entries if bd[0] + bd[1] == total),
                      key=lambda bd: -bd[0])

    def layout(self, total):
        layout = self._layouts.get(total)
        if layout is None:
            if not 0 <= total <= self.bound:
                raise ValueError("total degree %d outside table bound %d"
                                 % (total, self.bound))
            parts = []
            offset = 0
            for bd in self.bidegrees_of_total(total):
                entry = self.entries[bd]
                parts.append((bd, offset, entry))
                offset += entry.size
            layout = _TotalLayout(total, tuple(parts))
            self._layouts[total] = layout
        return layout

    def zero_class(self, total):
        return CohomologyClass(self, total, (0,) * self.layout(total).size)

    def generator_class(self, bidegree, index):
        entry = self.entries[bidegree]
        total = bidegree[0] + bidegree[1]
        layout = self.layout(total)
        coords = [0] * layout.size
        for bd, offset, e in layout.parts:
            if bd == bidegree:
                if not 0 <= index < e.size:
                    raise ValueError("generator index out of range")
                coords[offset + index] = 1
                return CohomologyClass(self, total, tuple(coords))
        raise AssertionError("entry missing from its own layout")

    def generator_list(self):
        """All representatives, ordered by total degree and bidegree."""
        gens = []
        for total in sorted({bd[0] + bd[1] for bd in self.entries}):
            for bd in self.bidegrees_of_total(total):
                entry = self.entries[bd]
                for i, (element, modulus) in enumerate(entry.generators):
                    gens.append(_Generator((bd, i), bd, i, total,
                                           element, modulus))
        return gens

    def reduce(self, z, total=None):
        """Class of a cocycle; raises if z is not a cocycle or exceeds the
        table bound."""
        if not z:
            if total is None:
                raise ValueError("zero element needs an explicit total "
                                 "degree; use zero_class")
            return self.zero_class(total)
        poset = self.data.poset
        ztotal = element_total_degree(poset, z)
        if total is not None and total != ztotal:
            raise ValueError("element has total degree %d, not %d"
                             % (ztotal, total))
        if not 0 <= ztotal <= self.bound:
            raise ValueError("total degree %d outside table bound %d"
                             % (ztotal, self.bound))
        if differential(z, self.data, self.ring, self.face):
            raise ValueError("element is not a cocycle")
        comps = {}
        for (S, mono), c in z.items():
            bd = (-len(S), monomial_degree(poset, mono) + 2 * len(S))
            comps.setdefault(bd, {})[(S, mono)] = c
        layout = self.layout(ztotal)
        coords = [0] * layout.size
        offsets = {bd: offset for bd, offset, _ in layout.parts}
        for bd, comp in comps.items():
            entry = self.entries.get(bd)
            if entry is None:
                raise ValueError("no basis at bidegree %r" % (bd,))
            pos = offsets[bd]
            seen = 0
            for block in entry.blocks:
                w_local = {}
                for key, c in comp.items():
                    i = block.index.get(key)
                    if i is not None:
                        w_local[i] = c
                seen += len(w_local)
                free, tors = block.coker.project(
                    block.kernel_coords(self.ring, w_local))
                for v in free:
                    coords[pos] = v
                    pos += 1
                for v in tors:
                    coords[pos] = v
                    pos += 1
            if seen != len(comp):
                raise ValueError("element key outside the bidegree basis "
                                 "at %r" % (bd,))
        return CohomologyClass(self, ztotal, tuple(coords))

    def coboundary_witness(self, z):
        """w with d(w) = z, for a cocycle reducing to zero."""
        cls = self.reduce(z)
        if not cls.is_zero:
            raise ValueError("class is not zero; no witness exists")
        poset = self.data.poset
        comps = {}
        for (S, mono), c in z.items():
            bd = (-len(S), monomial_degree(poset, mono) + 2 * len(S))
            comps.setdefault(bd, {})[(S, mono)] = c
        witness = {}
        for bd, comp in comps.items():
            for block in self.entries[bd].blocks:
                w_local = {}
                for key, c in comp.items():
                    i = block.index.get(key)
                    if i is not None:
                        w_local[i] = c
                y = block.kernel_coords(self.ring, w_local)
                if not y:
                    continue
                u = block.image.solve(y)
                if u is None:
                    raise AssertionError("zero class without a witness")
                for j, c in u.items():
                    key = block.incoming[j]
                    w = witness.get(key, 0) + c
                    if w:
                        witness[key] = w
                    else:
                        del witness[key]
        return witness

    def __repr__(self):
        return "<TorTable %s over %s, bound %d>" % (
            self.data.name or "data", self.ring, self.bound)


def _multidegree(data, face, ambient_pos, key):
    S, mono = key
    mu = [0] * len(data.vertices)
    for i in S:
        mu[i - 1] += 1
    vec = face.exponent_vector(mono)
    for ppos, e in enumerate(vec):
        if e:
            mu[ambient_pos[ppos]] += e
    return tuple(mu)


def compute_tor(data, ring, bound=None, method="auto"):
    """Tor table of characteristic data up to a total-degree bound
    (default: number of vertices plus the lattice rank)."""
    data.ensure_valid()
    if method not in ("auto", "bidegree", "blocks"):
        raise ValueError("unknown method %r" % (method,))
    if method == "blocks" and not data.is_identity_chi:
        raise ValueError("multidegree blocks need chi = identity")
    use_blocks = method == "blocks" or (method == "auto"
                                        and data.is_identity_chi)
    if bound is None:
        bound = len(data.vertices) + data.n
    if bound < 0:
        raise ValueError("bound must be >= 0")
    face = FaceRing(data.poset)
    n = data.n
    ambient_pos = [data.vertices.index(v) for v in data.poset.vertices]

    memo = {}

    def dvec(key):
        cached = memo.get(key)
        if cached is None:
            cached = differential({key: ring.one()}, data, ring, face)
            memo[key] = cached
        return cached

    entries = {}
    for t in range(0, bound + n + 1, 2):
        kmax = min(n, t // 2)
        kmin = max(0, t - bound)
        if kmin > kmax:
            continue
        bases = {k: _bidegree_basis(face, n, k, t)
                 for k in range(kmin - 1, kmax + 2)}
        for k in range(kmin, kmax + 1):
            here = bases[k]
            if not here:
                continue
            out_basis, incoming = bases[k - 1], bases[k + 1]
            if use_blocks:
                by_mu = {}
                for key in here:
                    mu = _multidegree(data, face, ambient_pos, key)
                    by_mu.setdefault(mu, []).append(key)
                out_by_mu = {}
                for key in out_basis:
                    mu = _multidegree(data, face, ambient_pos, key)
                    grp = out_by_mu.setdefault(mu, {})
                    grp[key] = len(grp)
                in_by_mu = {}
                for key in incoming:
                    mu = _multidegree(data, face, ambient_pos, key)
                    in_by_mu.setdefault(mu, []).append(key)
                blocks = []
                for mu in sorted(by_mu):
                    blocks.append(_Block(
                        ring, tuple(by_mu[mu]), out_by_mu.get(mu, {}),
                        tuple(in_by_mu.get(mu, ())), dvec))
            else:
                out_index = {key: i for i, key in enumerate(out_basis)}
                blocks = [_Block(ring, here, out_index, incoming, dvec)]
            entries[(-k, t)] = TorEntry((-k, t), tuple(blocks))
    return TorTable(data, ring, bound, "blocks" if use_blocks else "bidegree",
                    face, entries)


def reduce(z, table, total=None):
    """Class of a cocycle in the given table."""
    return table.reduce(z, total=total)


def generator_name(gid):
    """Stable printable name of a table generator: g(j,t;index)."""
    (j, t), i = gid
    return "g(%d,%d;%d)" % (j, t, i)


def format_class(cls):
    """Deterministic linear combination of generator names."""
    layout = cls.table.layout(cls.total)
    parts = []
    for bd, offset, entry in layout.parts:
        for i in range(entry.size):
            c = cls.coords[offset + i]
            if not c:
                continue
            name = generator_name((bd, i))
            if c == 1:
                term = name
            elif c == -1:
                term = "-" + name
            else:
                term = "%s %s" % (c, name)
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
    return " ".join(parts) if parts else "0"


class ProductTable:
    """All pairwise products of representatives, reduced to classes."""

    __slots__ = ("table", "twist", "generators", "products")

    def __init__(self, table, twist, generators, products):
        self.table = table
        self.twist = twist
        self.generators = generators
        self.products = products

    def product(self, gid_a, gid_b):
        return self.products[(gid_a, gid_b)]

    def multiply_classes(self, x, y):
        """Bilinear extension of the generator products to classes."""
        table = self.table
        total = x.total + y.total
        acc = table.zero_class(total)
        gx = [g for g in self.generators if g.total == x.total]
        gy = [g for g in self.generators if g.total == y.total]
        for ga, ca in zip(gx, x.coords):
            if not ca:
                continue
            for gb, cb in zip(gy, y.coords):
                if not cb:
                    continue
                acc = acc + self.products[(ga.gid, gb.gid)].scale(ca * cb)
        return acc


def product_table(table, twist=None):
    """Reduce all products of representatives; twist None means the
    untwisted wedge product."""
    gens = table.generator_list()
    products = {}
    for g1 in gens:
        for g2 in gens:
            total = g1.total + g2.total
            if total > table.bound:
                continue
            if twist is None:
                z = wedge_product(g1.element, g2.element, table.ring,
                                  table.face)
            else:
                z = star_product(g1.element, g2.element, twist, table.ring,
                                 table.face)
            products[(g1.gid, g2.gid)] = table.reduce(z, total=total)
    return ProductTable(table, twist, tuple(gens), products)


class ComparisonReport:
    """Structure-constant differences between two product tables."""

    __slots__ = ("differences",)

    def __init__(self, differences):
        self.differences = differences

    @property
    def agree(self):
        return not self.differences

    def __repr__(self):
        return "<products %s: %d differences>" % (
            "agree" if self.agree else "differ", len(self.differences))


def compare_products(table, twist=None):
    """Compare the twisted product table (twist defaults to the one of the
    table's characteristic data) against the untwisted one."""
    if twist is None:
        twist = compute_q(table.data)
    twisted = product_table(table, twist)
    untwisted = product_table(table, None)
    diffs = []
    for pair, cls in twisted.products.items():
        other = untwisted.products[pair]
        if cls != other:
            diffs.append((pair[0], pair[1], cls, other))
    return ComparisonReport(tuple(diffs))


def _reduced_cohomology_ranks(poset, ring):
    """Ranks of the reduced simplicial cohomology of a complex, including
    the empty complex with its rank one in degree -1."""
    by_rank = {}
    for e in poset.elements:
        by_rank.setdefault(poset.rank(e), []).append(e)
    top = max(by_rank)
    # coboundary matrices keyed by cochain degree j = rank - 1
    dims = {r - 1: len(by_rank.get(r, ())) for r in range(0, top + 1)}
    rank_d = {}
    for j in range(-1, top):
        dom = by_rank.get(j + 1, ())
        codom = by_rank.get(j + 2, ())
        idx = {e: i for i, e in enumerate(dom)}
        cols = {i: {} for i in range(len(dom))}
        for row, tau in enumerate(codom):
            tverts = sorted(poset.vkey[tau])
            for pos in range(len(tverts)):
                rest = frozenset(tverts[:pos] + tverts[pos + 1:])
                sigma = poset.face_map[tau][frozenset(
                    poset.vertices[i] for i in rest)]
                col = idx[sigma]
                sign = ring.one() if pos % 2 == 0 else ring.neg(ring.one())
                cols[col][row] = sign
        mat = ExactMatrix.from_columns([cols[i] for i in range(len(dom))],
                                       len(codom), ring)
        rank_d[j] = mat.rank()
    out = {}
    for j in range(-1, top):
        h = dims.get(j, 0) - rank_d.get(j, 0) - rank_d.get(j - 1, 0)
        if h:
            out[j] = h
    return out


def hochster_oracle(data, ring, bound=None):
    """Independent rank oracle for chi = identity: the rank at bidegree
    (-k, 2m) is the sum over m-element vertex subsets W of the reduced
    cohomology rank of the full subcomplex on W in degree m - k - 1.
    Ghost vertices participate in the subsets W."""
    if not data.poset.is_complex:
        raise ValueError("the oracle needs a simplicial complex")
    if not data.is_identity_chi:
        raise ValueError("the oracle needs chi = identity")
    if not ring.is_field:
        raise ValueError("the oracle computes ranks over a field")
    verts = data.vertices
    real = set(data.poset.vertices)
    out = {}
    for bits in range(1 << len(verts)):
        W = [verts[i] for i in range(len(verts)) if bits >> i & 1]
        m = len(W)
        sub = data.poset.full_subcomplex(set(W) & real)
        for j, h in _reduced_cohomology_ranks(sub, ring).items():
            k = m - j - 1
            if bound is not None and 2 * m - k > bound:
                continue
            bd = (-k, 2 * m)
            out[bd] = out.get(bd, 0) + h
    return dict(sorted(out.items()))


def uct_report(data, p, bound=None, method="auto"):
    """Universal-coefficient consistency of the mod-p table against the
    rational and integral ones; returns a list of problem strings."""
    ring_q = CoefficientRing.rationals()
    ring_p = CoefficientRing.integers_mod(p)
    table_q = compute_tor(data, ring_q, bound=bound, method=method)
    table_z = compute_tor(data, _ZZ, bound=bound, method=method)
    table_p = compute_tor(data, ring_p, bound=bound, method=method)

    def tp(bd):
        return sum(1 for d in table_z.torsion(bd) if d % p == 0)

    problems = []
    seen = set(table_q.entries) | set(table_z.entries) | set(table_p.entries)
    for bd in sorted(seen):
        rq = table_q.rank(bd)
        if rq != table_z.rank(bd):
            problems.append("free rank mismatch at %r: QQ %d vs ZZ %d"
                            % (bd, rq, table_z.rank(bd)))
        expected = rq + tp(bd) + tp((bd[0] + 1, bd[1]))
        got = table_p.rank(bd)
        if got != expected:
            problems.append(
                "mod-%d dimension at %r is %d, universal coefficients "
                "predict %d" % (p, bd, got, expected))
    return problems
