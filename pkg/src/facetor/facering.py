"""Face rings of simplicial posets, with exact products and pullbacks.

A standard monomial t_{s1}^{i1} * ... * t_{sk}^{ik} is indexed by a
strictly increasing chain of nonempty faces with all exponents >= 1; the
standard monomials are a basis of the face ring over every coefficient
ring.  A monomial is stored as a tuple of (element id, exponent) pairs in
chain order, the empty tuple being 1, and a ring element is a dict
{monomial: coefficient}.  Generator t_s has degree 2 * rank(s).

Products and pullbacks are resolved against this basis through the joint
restriction to the polynomial rings of the maximal faces, which is
injective; the per-degree solver is prepared once over QQ and reused, with
results converted back into the requested coefficient ring.  Simplicial
complexes instead take a closed-form path through exponent vectors.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import CoefficientRing, ExactMatrix, PreparedSolver

_QQ = CoefficientRing.rationals()


class LimitPresentationError(RuntimeError):
    """The joint restriction to maximal faces failed to resolve an
    element: corrupted input data or an internal inconsistency."""


def monomial_degree(poset, mono):
    return 2 * sum(i * poset.rank(e) for e, i in mono)


def format_monomial(mono):
    if not mono:
        return "1"
    return "*".join("t[%s]" % e + ("^%d" % i if i > 1 else "")
                    for e, i in mono)


def format_element(f):
    """Deterministic human-readable form of a face-ring element."""
    if not f:
        return "0"
    parts = []
    for mono in sorted(f, key=lambda m: (len(m), m)):
        c = f[mono]
        txt = format_monomial(mono)
        if c == 1 and mono:
            term = txt
        elif c == -1 and mono:
            term = "-" + txt
        elif mono:
            term = "%s*%s" % (c, txt)
        else:
            term = "%s" % (c,)
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts)


def _lift(f):
    return {mono: Fraction(c) for mono, c in f.items()}


def convert_element(f, ring):
    """Convert the coefficients of a face-ring element, dropping zeros."""
    out = {}
    for mono, c in f.items():
        v = ring.convert(c)
        if v:
            out[mono] = v
    return out


def _poly_mul_linear(poly, form, nvars):
    """Multiply a dense-exponent-keyed polynomial by a linear form given as
    {variable position: coefficient}."""
    out = {}
    for key, c in poly.items():
        for pos, a in form.items():
            k2 = key[:pos] + (key[pos] + 1,) + key[pos + 1:]
            w = out.get(k2, 0) + c * a
            if w:
                out[k2] = w
            else:
                out.pop(k2, None)
    return out


class FaceRing:
    """The face ring of a simplicial poset (coefficients chosen per call)."""

    __slots__ = ("poset", "_mono_cache", "_system_cache", "_by_vset")

    def __init__(self, poset):
        self.poset = poset
        self._mono_cache = {}
        self._system_cache = {}
        self._by_vset = ({poset.vertex_set[e]: e for e in poset.elements}
                         if poset.is_complex else None)

    def t_vertex(self, v):
        """The monomial t_v for a vertex id."""
        return ((self.poset.atom[v], 1),)

    def degree_of(self, mono):
        return monomial_degree(self.poset, mono)

    def basis_of_degree(self, d):
        """All standard monomials of the given degree, canonically ordered."""
        if d < 0 or d % 2:
            return ()
        return self._monos_below(None, d // 2)

    def _monos_below(self, top, m):
        key = (top, m)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        if m == 0:
            out = ((),)
        else:
            p = self.poset
            pool = (p.elements if top is None
                    else [e for e in p.elements if e != top and p.le(e, top)])
            found = []
            for e in pool:
                r = p.rank(e)
                if r == 0 or r > m:
                    continue
                for i in range(1, m // r + 1):
                    for tail in self._monos_below(e, m - i * r):
                        found.append(tail + ((e, i),))
            out = tuple(found)
        self._mono_cache[key] = out
        return out

    def face_vertices(self, tau):
        p = self.poset
        return tuple(p.vertices[i] for i in p.vkey[tau])

    def restrict(self, f, tau):
        """Restriction to the polynomial ring on V(tau): maps a ring element
        to {dense exponent tuple over face_vertices(tau): coefficient}.
        Generators t_s with s <= tau go to squarefree monomials, others to 0.
        """
        p = self.poset
        verts = self.face_vertices(tau)
        idx = {v: i for i, v in enumerate(verts)}
        out = {}
        for mono, c in f.items():
            if not all(p.le(e, tau) for e, _ in mono):
                continue
            acc = [0] * len(verts)
            for e, i in mono:
                for vp in p.vkey[e]:
                    acc[idx[p.vertices[vp]]] += i
            key = tuple(acc)
            w = out.get(key, 0) + c
            if w:
                out[key] = w
            else:
                out.pop(key, None)
        return out

    def exponent_vector(self, mono):
        """Multidegree: dense exponent tuple over the poset vertex order."""
        p = self.poset
        acc = [0] * len(p.vertices)
        for e, i in mono:
            for vp in p.vkey[e]:
                acc[vp] += i
        return tuple(acc)

    def monomial_from_exponents(self, vec):
        """Inverse of exponent_vector on a complex; None when the support
        is not a face."""
        if self._by_vset is None:
            raise LimitPresentationError("exponent vectors determine "
                                         "monomials only for complexes")
        p = self.poset
        vec = list(vec)
        chain = []
        while True:
            supp = [i for i, x in enumerate(vec) if x]
            if not supp:
                break
            e = self._by_vset.get(frozenset(p.vertices[i] for i in supp))
            if e is None:
                return None
            low = min(vec[i] for i in supp)
            chain.append((e, low))
            for i in supp:
                vec[i] -= low
        return tuple(reversed(chain))

    def multiply(self, f, g, ring):
        """Product of two elements with coefficients in ring."""
        if not f or not g:
            return {}
        if self.poset.is_complex:
            return self._multiply_complex(f, g, ring)
        return self._resolve(self._product_restrictions(f, g), ring)

    def _multiply_complex(self, f, g, ring):
        mod = ring.modulus
        out = {}
        vecs_f = [(self.exponent_vector(m), m, c) for m, c in f.items()]
        vecs_g = [(self.exponent_vector(m), m, c) for m, c in g.items()]
        for a, _, ca in vecs_f:
            for b, _, cb in vecs_g:
                c = ca * cb
                if mod:
                    c %= mod
                if not c:
                    continue
                mono = self.monomial_from_exponents(
                    tuple(x + y for x, y in zip(a, b)))
                if mono is None:
                    continue
                w = out.get(mono, 0) + c
                if mod:
                    w %= mod
                if w:
                    out[mono] = w
                else:
                    del out[mono]
        return out

    def _product_restrictions(self, f, g):
        """Restrictions of f*g to every maximal face, bucketed by degree as
        {degree: {(maximal index, exponent tuple): QQ coefficient}}."""
        fq, gq = _lift(f), _lift(g)
        h = {}
        for ti, tau in enumerate(self.poset.maximal):
            pf = self.restrict(fq, tau)
            if not pf:
                continue
            pg = self.restrict(gq, tau)
            if not pg:
                continue
            prod = {}
            for a, ca in pf.items():
                for b, cb in pg.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    prod[key] = prod.get(key, 0) + ca * cb
            for key, c in prod.items():
                if c:
                    h.setdefault(2 * sum(key), {})[(ti, key)] = c
        return h

    def _degree_system(self, d):
        """(basis, row index, prepared solver) for the joint restriction of
        the degree-d component into the maximal polynomial rings."""
        cached = self._system_cache.get(d)
        if cached is not None:
            return cached
        basis = self.basis_of_degree(d)
        rowidx = {}
        cols = []
        one = Fraction(1)
        for mono in basis:
            col = {}
            for ti, tau in enumerate(self.poset.maximal):
                r = self.restrict({mono: one}, tau)
                if r:
                    (key,) = r
                    row = rowidx.setdefault((ti, key), len(rowidx))
                    col[row] = one
            cols.append(col)
        solver = PreparedSolver(
            ExactMatrix.from_columns(cols, len(rowidx), _QQ))
        if not solver.full_column_rank:
            raise LimitPresentationError(
                "joint restriction is not injective in degree %d" % d)
        out = (basis, rowidx, solver)
        self._system_cache[d] = out
        return out

    def _resolve(self, h_by_degree, ring):
        """Solve the joint-restriction system per degree and convert the
        monomial coordinates into ring."""
        out = {}
        for d in sorted(h_by_degree):
            h = h_by_degree[d]
            basis, rowidx, solver = self._degree_system(d)
            b = {}
            for rk, c in h.items():
                row = rowidx.get(rk)
                if row is None:
                    raise LimitPresentationError(
                        "restriction value outside the face ring in "
                        "degree %d" % d)
                b[row] = c
            x = solver.solve(b)
            if x is None:
                raise LimitPresentationError(
                    "inconsistent restriction system in degree %d" % d)
            for col, c in x.items():
                v = ring.convert(c)
                if v:
                    out[basis[col]] = v
        return out


class FaceRingMap:
    """Degree-preserving map k[target] -> k[source] induced by a face map
    nu (source poset elements -> target poset elements) and integer vertex
    columns {source vertex: {target vertex: int}}.

    On the polynomial ring of each maximal source face, the map restricts
    an element to nu of that face and substitutes the linear forms given by
    the columns; the results are resolved against the source basis.  When
    both posets are complexes a closed-form route through generator images
    is available ("generators"); "limit" forces the general route.
    """

    __slots__ = ("target", "source", "nu", "columns", "method", "_powers")

    def __init__(self, target, source, nu, columns, method="auto"):
        self.target = target
        self.source = source
        self.nu = dict(nu)
        self.columns = {v: dict(col) for v, col in columns.items()}
        for e in source.poset.elements:
            img = self.nu.get(e)
            if img is None:
                raise ValueError("nu does not cover source element %r" % e)
            if img not in target.poset.vertex_set:
                raise ValueError("nu image %r is not a target element" % img)
        if self.nu[source.poset.bottom] != target.poset.bottom:
            raise ValueError("nu must send the empty face to the empty face")
        if method == "auto":
            method = ("generators"
                      if source.poset.is_complex and target.poset.is_complex
                      else "limit")
        if method not in ("generators", "limit"):
            raise ValueError("unknown method %r" % (method,))
        self.method = method
        self._powers = {}

    def __call__(self, f, ring):
        if not f:
            return {}
        if self.method == "generators":
            return self._apply_generators(f, ring)
        return self.source._resolve(self._image_restrictions(f), ring)

    def generator_image(self, tau, ring):
        """Image of the generator t_tau, exposing its expansion
        coefficients over source standard monomials."""
        return self({((tau, 1),): ring.one()}, ring)

    def _vertex_image(self, v):
        """QQ image of a target t_v as a source element (complexes)."""
        src = self.source
        out = {}
        for v2 in src.poset.vertices:
            a = self.columns.get(v2, {}).get(v, 0)
            if a:
                out[src.t_vertex(v2)] = Fraction(a)
        return out

    def _vertex_power(self, v, k):
        key = (v, k)
        cached = self._powers.get(key)
        if cached is None:
            if k == 0:
                cached = {(): Fraction(1)}
            else:
                cached = self.source.multiply(
                    self._vertex_power(v, k - 1), self._vertex_image(v), _QQ)
            self._powers[key] = cached
        return cached

    def _apply_generators(self, f, ring):
        src, tgt = self.source, self.target
        out_q = {}
        for mono, c in _lift(f).items():
            expvec = tgt.exponent_vector(mono)
            term = {(): c}
            for pos, a in enumerate(expvec):
                if a:
                    term = src.multiply(
                        term, self._vertex_power(tgt.poset.vertices[pos], a),
                        _QQ)
            for m, cc in term.items():
                w = out_q.get(m, 0) + cc
                if w:
                    out_q[m] = w
                else:
                    del out_q[m]
        out = {}
        for mono, c in out_q.items():
            v = ring.convert(c)
            if v:
                out[mono] = v
        return out

    def _image_restrictions(self, f):
        """{degree: {(maximal source face index, exponent tuple): QQ}} for
        the image of f, via restriction to nu and linear substitution."""
        fq = _lift(f)
        src, tgt = self.source, self.target
        h = {}
        for ti, tau_s in enumerate(src.poset.maximal):
            tau_t = self.nu[tau_s]
            p = tgt.restrict(fq, tau_t)
            if not p:
                continue
            sverts = src.face_vertices(tau_s)
            spos = {v: i for i, v in enumerate(sverts)}
            forms = []
            for v in tgt.face_vertices(tau_t):
                form = {}
                for v2 in sverts:
                    a = self.columns.get(v2, {}).get(v, 0)
                    if a:
                        form[spos[v2]] = Fraction(a)
                forms.append(form)
            acc = {}
            for expvec, c in p.items():
                term = {(0,) * len(sverts): c}
                for pos, a in enumerate(expvec):
                    for _ in range(a):
                        term = _poly_mul_linear(term, forms[pos], len(sverts))
                        if not term:
                            break
                    if not term:
                        break
                for key, cc in term.items():
                    w = acc.get(key, 0) + cc
                    if w:
                        acc[key] = w
                    else:
                        del acc[key]
            for key, c in acc.items():
                h.setdefault(2 * sum(key), {})[(ti, key)] = c
        return h


def pullback(target, source, nu, columns, f, ring, method="auto"):
    """One-shot face-ring pullback; see FaceRingMap."""
    return FaceRingMap(target, source, nu, columns, method=method)(f, ring)
