"""Morphisms of characteristic data and the maps they induce.

A morphism is a pair (A, nu): an integer matrix mapping the source lattice
into the target lattice together with a face map nu from the source poset
to the target poset, subject to the carrier condition that A sends the
vector of each source vertex into the nonnegative span of the vectors on
nu of that vertex.  From the pair everything else is derived: the lifted
matrix on vertex coordinates, the twisting corrections q_hat, the chain
maps (plain and corrected), and the induced maps between Tor tables.
"""

from .exactalg import CoefficientRing, ExactMatrix
from .facering import FaceRing, FaceRingMap, convert_element
from .koszul import (TwistData, _add_term, compute_q, double_contract,
                     star_product, wedge_product)
from .simplicial import CharacteristicData, same_data as _same_data
from .torcohomology import CohomologyClass

_ZZ = CoefficientRing.integers()


class ToricMorphism:
    """A lattice map with a compatible face map.

    A has target.n rows and source.n columns; nu maps every source poset
    element to a target poset element.  Ghost vertices are not in the
    posets and need no nu value.
    """

    __slots__ = ("source", "target", "A", "nu", "name", "_cache")

    def __init__(self, source, target, A, nu, name=""):
        self.source = source
        self.target = target
        self.A = tuple(tuple(int(x) for x in row) for row in A)
        if len(self.A) != target.n or any(len(row) != source.n
                                          for row in self.A):
            raise ValueError("matrix must be %d x %d, got %d x %d"
                             % (target.n, source.n, len(self.A),
                                len(self.A[0]) if self.A else 0))
        self.nu = dict(nu)
        self.name = name
        self._cache = {}

    def apply_lattice(self, x):
        """A applied to a source lattice vector."""
        return tuple(sum(row[j] * x[j] for j in range(self.source.n))
                     for row in self.A)

    def validate(self):
        """List of problems; empty means the morphism is valid."""
        problems = []
        src, tgt = self.source.poset, self.target.poset
        for e in src.elements:
            img = self.nu.get(e)
            if img is None:
                problems.append("nu is missing source element %r" % e)
            elif img not in tgt.vertex_set:
                problems.append("nu image %r of %r is not a target element"
                                % (img, e))
        if problems:
            return problems
        if self.nu[src.bottom] != tgt.bottom:
            problems.append("nu must send the empty face to the empty face")
        below = {}
        for e in src.elements:
            for c in src.covers[e]:
                if not self._leq(tgt, below, self.nu[c], self.nu[e]):
                    problems.append(
                        "nu is not order-preserving: %r < %r but %r is "
                        "not a face of %r" % (c, e, self.nu[c], self.nu[e]))
        for vp in src.vertices:
            tau = self.nu[src.atom[vp]]
            b = self.apply_lattice(self.source.chi[vp])
            sol = self._carrier_solve(tau, b)
            if sol is None:
                problems.append(
                    "A maps vertex %r to %s, which is not an integer "
                    "combination of the vectors on %r" % (vp, list(b), tau))
            elif any(c < 0 for c in sol.values()):
                problems.append(
                    "A maps vertex %r to a combination with negative "
                    "coefficients over %r" % (vp, tau))
        return problems

    def _leq(self, poset, below, a, b):
        if b not in below:
            seen = {b}
            queue = [b]
            while queue:
                for c in poset.covers[queue.pop()]:
                    if c not in seen:
                        seen.add(c)
                        queue.append(c)
            below[b] = seen
        return a in below[b]

    def _carrier_solve(self, tau, b):
        """Integer coefficients over the vertices of the target face tau
        with A x = b, or None; keys are target vertex ids."""
        tgt = self.target
        carrier = sorted(tgt.poset.vertex_set[tau],
                         key=tgt.vertex_index.__getitem__)
        bs = {i: x for i, x in enumerate(b) if x}
        if not carrier:
            return {} if not bs else None
        cols = [{i: x for i, x in enumerate(tgt.chi[v]) if x}
                for v in carrier]
        sol = ExactMatrix.from_columns(cols, tgt.n, _ZZ).solve(bs)
        if sol is None:
            return None
        return {carrier[k]: c for k, c in sol.items() if c}

    def ensure_valid(self):
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def __repr__(self):
        return "<ToricMorphism %r: %r -> %r>" % (
            self.name, self.source.name, self.target.name)


def validate_morphism(phi):
    """List of problems; empty means the morphism is valid."""
    return phi.validate()


class Lift:
    """Integer columns {source vertex: {target vertex: coefficient}} of a
    matrix on vertex coordinates covering A."""

    __slots__ = ("phi", "columns")

    def __init__(self, phi, columns):
        self.phi = phi
        self.columns = {vp: {v: int(c) for v, c in col.items() if c}
                        for vp, col in columns.items()}

    def entry(self, v, vp):
        return self.columns.get(vp, {}).get(v, 0)

    @property
    def is_identity(self):
        if self.phi.source.vertices != self.phi.target.vertices:
            return False
        return all(self.columns[vp] == {vp: 1}
                   for vp in self.phi.source.vertices)

    def __repr__(self):
        return "<Lift of %r>" % (self.phi.name,)


def lift(phi, ghost_shift=None):
    """The matrix on vertex coordinates covering A.

    Columns of poset vertices are the unique nonnegative solutions over
    the carrier nu(v'); a ghost column takes the matching target vertex
    when ids and vectors agree and falls back to an arbitrary integral
    solve otherwise.  ghost_shift maps ghost ids to integer column
    increments and must keep the covering equation intact; it exists to
    check that downstream output does not depend on how ghost columns are
    chosen.
    """
    phi.ensure_valid()
    src, tgt = phi.source, phi.target
    ghost_shift = dict(ghost_shift or {})
    columns = {}
    for vp in src.vertices:
        b = phi.apply_lattice(src.chi[vp])
        if vp not in src.ghosts:
            col = phi._carrier_solve(phi.nu[src.poset.atom[vp]], b)
            if col is None or any(c < 0 for c in col.values()):
                raise ValueError("morphism has no nonnegative lift at %r"
                                 % (vp,))
        elif vp in tgt.vertex_index and tgt.chi[vp] == b:
            col = {vp: 1}
        else:
            bs = {i: x for i, x in enumerate(b) if x}
            sol = tgt.chi_matrix().solve(bs)
            if sol is None:
                raise ValueError("no integral lift column for ghost %r"
                                 % (vp,))
            col = {tgt.vertices[i]: c for i, c in sol.items() if c}
        shift = ghost_shift.pop(vp, None)
        if shift:
            if vp not in src.ghosts:
                raise ValueError("%r is not a ghost; its column is unique"
                                 % (vp,))
            col = dict(col)
            for v, c in shift.items():
                col[v] = col.get(v, 0) + int(c)
            total = [0] * tgt.n
            for v, c in col.items():
                for i, x in enumerate(tgt.chi[v]):
                    total[i] += c * x
            if tuple(total) != b:
                raise ValueError("ghost shift at %r breaks the covering "
                                 "equation" % (vp,))
        columns[vp] = col
    if ghost_shift:
        raise ValueError("ghost shift names unknown vertices %s"
                         % sorted(ghost_shift))
    return Lift(phi, columns)


def hat_q(phi, lft=None):
    """Twisting corrections of the lift: for 1 <= j < i <= n a degree-2
    element of the source face ring,

        q^_ij = -sum over source vertices v' of
                ( sum_v a(a-1)/2 x_v^i x_v^j
                  + sum_{v<w} a_v a_w x_v^i x_w^j ) t_{v'},

    where a runs over the column of v'.  Ghost source vertices contribute
    nothing, so the output never depends on ghost column choices.
    """
    if lft is None:
        lft = _cached_lift(phi)
    tgt = phi.target
    n = tgt.n
    q = {}
    for vp in phi.source.poset.vertices:
        col = lft.columns.get(vp, {})
        support = [v for v in tgt.vertices if col.get(v)]
        if not support:
            continue
        tvp = ((phi.source.poset.atom[vp], 1),)
        for i in range(2, n + 1):
            for j in range(1, i):
                total = 0
                for v in support:
                    a = col[v]
                    total += a * (a - 1) // 2 * tgt.chi[v][i - 1] \
                        * tgt.chi[v][j - 1]
                for s in range(len(support)):
                    for t in range(s + 1, len(support)):
                        v, w = support[s], support[t]
                        total += col[v] * col[w] * tgt.chi[v][i - 1] \
                            * tgt.chi[w][j - 1]
                if total:
                    _add_term(q.setdefault((i, j), {}), tvp, -total, 0)
    return TwistData(n, q)


def _cached_lift(phi):
    if "lift" not in phi._cache:
        phi._cache["lift"] = lift(phi)
    return phi._cache["lift"]


def _cached_hat_q(phi):
    if "hatq" not in phi._cache:
        phi._cache["hatq"] = hat_q(phi, _cached_lift(phi))
    return phi._cache["hatq"]


class _ChainMaps:
    """Evaluation caches for the chain maps of one morphism and ring."""

    __slots__ = ("phi", "ring", "face", "twist", "ringmap", "rows",
                 "hatq", "_star", "_ext", "_fimage")

    def __init__(self, phi, ring):
        self.phi = phi
        self.ring = ring
        self.face = FaceRing(phi.source.poset)
        self.twist = compute_q(phi.source)
        lft = _cached_lift(phi)
        columns = {vp: lft.columns[vp] for vp in phi.source.poset.vertices}
        self.ringmap = FaceRingMap(FaceRing(phi.target.poset), self.face,
                                   phi.nu, columns)
        one = ring.one()
        self.rows = {}
        for i in range(1, phi.target.n + 1):
            row = {}
            for j in range(1, phi.source.n + 1):
                a = phi.A[i - 1][j - 1]
                if a:
                    row[((j,), ())] = ring.convert(a)
            self.rows[i] = row
        self.hatq = {pair: convert_element(val, ring)
                     for pair, val in _cached_hat_q(phi).q.items()}
        self._star = {(): {((), ()): one}}
        self._ext = {(): {((), ()): one}}
        self._fimage = {}

    def _star_word(self, S):
        if S not in self._star:
            head = self._star_word(S[:-1])
            self._star[S] = star_product(head, self.rows[S[-1]], self.twist,
                                         self.ring, self.face)
        return self._star[S]

    def _ext_word(self, S):
        if S not in self._ext:
            head = self._ext_word(S[:-1])
            self._ext[S] = wedge_product(head, self.rows[S[-1]], self.ring,
                                         self.face)
        return self._ext[S]

    def _face_image(self, mono):
        if mono not in self._fimage:
            img = self.ringmap({mono: self.ring.one()}, self.ring)
            self._fimage[mono] = {((), m): c for m, c in img.items()}
        return self._fimage[mono]

    def _combine(self, out, word_part, mono, c, product):
        fim = self._face_image(mono)
        if not fim:
            return
        mod = self.ring.modulus
        for key, ci in product(word_part, fim).items():
            _add_term(out, key, c * ci, mod)

    def xi(self, z):
        """Star products of the pulled-back generators, times the
        pulled-back face part."""
        out = {}
        for (S, mono), c in z.items():
            self._combine(out, self._star_word(S), mono, c,
                          lambda a, b: star_product(a, b, self.twist,
                                                    self.ring, self.face))
        return out

    def exterior(self, z):
        """The exterior-power chain map: wedges instead of stars."""
        out = {}
        for (S, mono), c in z.items():
            self._combine(out, self._ext_word(S), mono, c,
                          lambda a, b: wedge_product(a, b, self.ring,
                                                     self.face))
        return out

    def hat_xi(self, z):
        """xi plus the contraction corrections against q^."""
        out = self.xi(z)
        mod = self.ring.modulus
        for (i, j), qel in self.hatq.items():
            w = {}
            for (S, mono), c in z.items():
                dc = double_contract(S, i, j)
                if dc is not None:
                    sign, S2 = dc
                    _add_term(w, (S2, mono), sign * c, mod)
            if not w:
                continue
            for (T, m1), c1 in self.xi(w).items():
                for m2, c2 in self.face.multiply({m1: c1}, qel,
                                                 self.ring).items():
                    _add_term(out, (T, m2), c2, mod)
        return out


def _chain_maps(phi, ring):
    key = ("maps", ring)
    if key not in phi._cache:
        phi._cache[key] = _ChainMaps(phi, ring)
    return phi._cache[key]


def xi(phi, z, ring):
    """Chain map from the target complex to the source complex sending
    a_{i1}...a_{ik} tensor f to the left-to-right star product of the
    pulled-back generators and the pulled-back face part."""
    return _chain_maps(phi, ring).xi(z)


def hat_xi(phi, z, ring):
    """xi corrected by double contractions against q^; preserves total
    degree and induces the multiplicative map on classes."""
    return _chain_maps(phi, ring).hat_xi(z)


class InducedMap:
    """Images of every domain generator class under a chain map.

    domain and codomain are Tor tables; images maps generator ids to
    codomain classes and apply extends by linearity.
    """

    __slots__ = ("domain", "codomain", "images", "label")

    def __init__(self, domain, codomain, images, label=""):
        self.domain = domain
        self.codomain = codomain
        self.images = dict(images)
        self.label = label

    def apply(self, cls):
        if cls.table is not self.domain:
            raise ValueError("class does not live in the domain table")
        out = self.codomain.zero_class(cls.total)
        for bd, offset, entry in self.domain.layout(cls.total).parts:
            for idx in range(entry.size):
                c = cls.coords[offset + idx]
                if c:
                    out = out + self.images[(bd, idx)].scale(c)
        return out

    def matrix(self, total):
        """Codomain coordinates of the image of each domain generator at
        one total degree, one row per generator in layout order."""
        rows = []
        for bd, offset, entry in self.domain.layout(total).parts:
            for idx in range(entry.size):
                rows.append(self.images[(bd, idx)].coords)
        return tuple(rows)

    def __repr__(self):
        return "<InducedMap %r: %d generators>" % (self.label,
                                                   len(self.images))


def _induced(phi, target_table, source_table, chain, label):
    if target_table.ring != source_table.ring:
        raise ValueError("tables use different rings")
    if not _same_data(target_table.data, phi.target):
        raise ValueError("first table must be computed from the target data")
    if not _same_data(source_table.data, phi.source):
        raise ValueError("second table must be computed from the source data")
    if source_table.bound < target_table.bound:
        raise ValueError(
            "source table bound %d cannot hold every image; recompute "
            "with bound >= %d" % (source_table.bound, target_table.bound))
    images = {}
    for g in target_table.generator_list():
        images[g.gid] = source_table.reduce(chain(g.element), total=g.total)
    return InducedMap(target_table, source_table, images, label=label)


def tor_phi(phi, target_table, source_table):
    """Map induced by the exterior-power chain map, from the table of the
    target data to the table of the source data.  Preserves bidegree but
    in general not products."""
    ev = _chain_maps(phi, target_table.ring)
    return _induced(phi, target_table, source_table, ev.exterior,
                    "tor(%s)" % (phi.name,))


def hat_tor_phi(phi, target_table, source_table):
    """Map induced by the corrected chain map; preserves total degree and
    the twisted products."""
    ev = _chain_maps(phi, target_table.ring)
    return _induced(phi, target_table, source_table, ev.hat_xi,
                    "hat_tor(%s)" % (phi.name,))


def omega(data, table):
    """The automorphism z -> z + (1/2) sum_{i>j} iota_i iota_j z . q_ij of
    the table onto itself; needs 2 invertible.  It carries the twisted
    products to the untwisted ones."""
    ring = table.ring
    if not _same_data(table.data, data):
        raise ValueError("table was not computed from this data")
    two = ring.convert(2)
    if not ring.is_unit(two):
        raise ValueError("omega needs 2 invertible in the coefficient ring")
    half = ring.inverse(two)
    face = table.face
    mod = ring.modulus
    q = compute_q(data)
    qel = {pair: convert_element(val, ring)
           for pair, val in q.q.items() if pair[0] > pair[1]}

    def chain(z):
        out = dict(z)
        for (i, j), element in qel.items():
            for (S, mono), c in z.items():
                dc = double_contract(S, i, j)
                if dc is None:
                    continue
                sign, S2 = dc
                coef = ring.convert(half * c * sign)
                for m2, c2 in face.multiply({mono: coef}, element,
                                            ring).items():
                    _add_term(out, (S2, m2), c2, mod)
        return out

    images = {}
    for g in table.generator_list():
        images[g.gid] = table.reduce(chain(g.element), total=g.total)
    return InducedMap(table, table, images, label="omega")


def cox_projection(data, name=""):
    """The morphism from the moment-angle data over the same poset and
    vertex list: A is the characteristic matrix, nu the identity."""
    data.ensure_valid()
    source = CharacteristicData.moment_angle(
        data.poset, vertices=data.vertices,
        name=("Z(%s)" % data.name) if data.name else "")
    A = [[data.chi[v][i] for v in data.vertices] for i in range(data.n)]
    nu = {e: e for e in data.poset.elements}
    return ToricMorphism(source, data, A, nu, name=name or "cox")


def ideal_I_sigma(data, table, cox_table):
    """Per-total-degree kernel of the map induced by the projection from
    the moment-angle data: {total: tuple of classes of table}.  Kernel
    bases are computed over a field."""
    if not table.ring.is_field:
        raise ValueError("kernel bases need a field")
    kappa = cox_projection(data)
    if not _same_data(cox_table.data, kappa.source):
        raise ValueError("cox_table must be computed from "
                         "cox_projection(data).source")
    induced = tor_phi(kappa, table, cox_table)
    out = {}
    for total in range(table.bound + 1):
        rows = induced.matrix(total)
        if not rows:
            continue
        height = cox_table.layout(total).size
        cols = [{i: x for i, x in enumerate(row) if x} for row in rows]
        kernel = ExactMatrix.from_columns(cols, height,
                                          table.ring).kernel_basis()
        classes = []
        for vec in kernel:
            coords = [0] * len(rows)
            for i, c in vec.items():
                coords[i] = c
            classes.append(CohomologyClass(table, total, tuple(coords)))
        if classes:
            out[total] = tuple(classes)
    return out


def diagonal_morphism(data, name=""):
    """The diagonal into the join of the data with itself; the stacked
    identity matrix and nu(e) = (e, e).  With the first copy ordered
    before the second all q^ vanish."""
    data.ensure_valid()
    double = data.join(data, name=("%s x %s" % (data.name, data.name))
                       if data.name else "")
    n = data.n
    A = [[1 if j == i % n else 0 for j in range(n)] for i in range(2 * n)]
    nu = {e: "(%s,%s)" % (e, e) for e in data.poset.elements}
    return ToricMorphism(data, double, A, nu, name=name or "diagonal")


def cross_element(diag, za, zb, ring):
    """Outer product of two source elements inside the double: the wedge
    of za with the shifted zb, face parts multiplied through the two
    copies.  diag must come from diagonal_morphism."""
    data = diag.source
    n = data.n
    bottom = data.poset.bottom
    face = FaceRing(diag.target.poset)
    mod = ring.modulus
    out = {}
    for (S, m1), c1 in za.items():
        left = tuple(("(%s,%s)" % (e, bottom), k) for e, k in m1)
        for (T, m2), c2 in zb.items():
            right = tuple(("(%s,%s)" % (bottom, e), k) for e, k in m2)
            word = S + tuple(i + n for i in T)
            for m3, c3 in face.multiply({left: c1}, {right: c2},
                                        ring).items():
                _add_term(out, (word, m3), c3, mod)
    return out


def power_morphism(data, r):
    """A = r times the identity and nu the identity; valid for r >= 0."""
    if r < 0:
        raise ValueError("power morphisms need r >= 0")
    n = data.n
    A = [[r if i == j else 0 for j in range(n)] for i in range(n)]
    nu = {e: e for e in data.poset.elements}
    return ToricMorphism(data, data, A, nu, name="power %d" % r)
