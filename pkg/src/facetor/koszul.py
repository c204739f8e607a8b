"""Koszul complexes of characteristic data, with twisted products.

The complex is Lambda(a_1, ..., a_n) tensor k[Sigma]: an element is a dict
{(S, mono): scalar} where S is a strictly increasing tuple of exterior
indices from 1..n and mono is a standard monomial of the face ring.  The
term (S, m) has bidegree (-|S|, deg m + 2|S|) and total degree |S| + deg m.

The differential d = -sum_v iota(x_v) tensor t_v contracts against the
characteristic vectors and multiplies by the vertex generators; ghost
vertices drop out since their t_v is zero.  The twisted product extends
the generator rule a*b = ab + sum_{i>=j} a(x_i)b(x_j) q_ij by Clifford
normal ordering, with the twist values q_ij central face-ring elements.
"""

from itertools import combinations

from .facering import FaceRing, convert_element, format_monomial, \
    monomial_degree


def bidegree(poset, key):
    S, mono = key
    k = len(S)
    return (-k, monomial_degree(poset, mono) + 2 * k)


def total_degree(poset, key):
    S, mono = key
    return len(S) + monomial_degree(poset, mono)


def element_total_degree(poset, z):
    """Common total degree of a nonzero homogeneous element."""
    degrees = {total_degree(poset, key) for key in z}
    if len(degrees) != 1:
        raise ValueError("element is not homogeneous: degrees %s"
                         % sorted(degrees))
    return degrees.pop()


def format_koszul(z):
    """Deterministic human-readable form, terms ordered by (S, mono)."""
    if not z:
        return "0"
    parts = []
    for S, mono in sorted(z, key=lambda key: (len(key[0]), key)):
        c = z[(S, mono)]
        bits = []
        if S:
            bits.append("".join("a[%d]" % i for i in S))
        if mono:
            bits.append(format_monomial(mono))
        txt = "*".join(bits) if bits else "1"
        if c == 1 and bits:
            term = txt
        elif c == -1 and bits:
            term = "-" + txt
        elif bits:
            term = "%s*%s" % (c, txt)
        else:
            term = "%s" % (c,)
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts)


def _add_term(out, key, c, modulus):
    w = out.get(key, 0) + c
    if modulus:
        w %= modulus
    if w:
        out[key] = w
    else:
        out.pop(key, None)


def single_contract(S, j):
    """iota of the j-th coordinate vector: (sign, S without j), or None."""
    if j not in S:
        return None
    pos = S.index(j)
    return (-1 if pos % 2 else 1), S[:pos] + S[pos + 1:]


def double_contract(S, i, j):
    """iota(x_i) iota(x_j) with i > j, the j contraction applied first."""
    first = single_contract(S, j)
    if first is None:
        return None
    sign, S1 = first
    second = single_contract(S1, i)
    if second is None:
        return None
    sign2, S2 = second
    return sign * sign2, S2


def contract(x, S):
    """iota(x) for an integer vector x: list of (coefficient, S') terms."""
    out = []
    for pos, idx in enumerate(S):
        c = x[idx - 1]
        if c:
            out.append((-c if pos % 2 else c, S[:pos] + S[pos + 1:]))
    return out


class TwistData:
    """Twisting coefficients q_ij for 1 <= j <= i <= n, each a degree-2
    face-ring element with integer coefficients (zeros omitted)."""

    __slots__ = ("n", "q")

    def __init__(self, n, q):
        self.n = n
        self.q = {pair: dict(val) for pair, val in q.items() if val}

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @property
    def is_zero(self):
        return not self.q

    def get(self, i, j):
        if not 1 <= j <= i <= self.n:
            raise ValueError("twist index pair (%d, %d) out of range"
                             % (i, j))
        return self.q.get((i, j), {})

    def __eq__(self, other):
        return (isinstance(other, TwistData)
                and self.n == other.n and self.q == other.q)

    def __repr__(self):
        return "TwistData(n=%d, %d nonzero)" % (self.n, len(self.q))


def compute_q(data):
    """Twist of characteristic data: q_ii = sum_v x_v^i(x_v^i - 1)/2 t_v
    (an integer coefficient) and q_ij = sum_v x_v^i x_v^j t_v for i > j;
    only poset vertices contribute, ghost terms vanish with t_v = 0."""
    poset = data.poset
    q = {}
    for v in poset.vertices:
        x = data.chi[v]
        tv = ((poset.atom[v], 1),)
        for i in range(1, data.n + 1):
            xi = x[i - 1]
            c = xi * (xi - 1) // 2
            if c:
                _add_term(q.setdefault((i, i), {}), tv, c, 0)
            for j in range(1, i):
                c = xi * x[j - 1]
                if c:
                    _add_term(q.setdefault((i, j), {}), tv, c, 0)
    return TwistData(data.n, q)


def differential(z, data, ring, face=None):
    """d(a_S tensor m) = -sum_v iota(x_v)(a_S) tensor t_v m."""
    if face is None:
        face = FaceRing(data.poset)
    out = {}
    mod = ring.modulus
    for (S, mono), c in z.items():
        if not S:
            continue
        for v in data.poset.vertices:
            terms = contract(data.chi[v], S)
            if not terms:
                continue
            tv = {face.t_vertex(v): ring.one()}
            prod = face.multiply({mono: c}, tv, ring)
            for coef, S1 in terms:
                for m1, c1 in prod.items():
                    _add_term(out, (S1, m1), -coef * c1, mod)
    return out


def wedge_product(a, b, ring, face):
    """Untwisted product: shuffle sign on disjoint index sets, zero else."""
    out = {}
    mod = ring.modulus
    for (S, mf), ca in a.items():
        sset = set(S)
        for (T, mg), cb in b.items():
            if sset & set(T):
                continue
            sign = _merge_sign(S, T)
            for mono, c in face.multiply({mf: ca}, {mg: cb}, ring).items():
                _add_term(out, (tuple(sorted(S + T)), mono), sign * c, mod)
    return out


def _merge_sign(S, T):
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


def star_product(a, b, q, ring, face):
    """Twisted product for the given twist, by normal ordering."""
    out = {}
    for (S, mf), ca in a.items():
        for (T, mg), cb in b.items():
            base = face.multiply({mf: ca}, {mg: cb}, ring)
            if base:
                _normal_order_into(out, S + T, base, q, ring, face)
    return out


def _normal_order_into(out, word, fcoef, q, ring, face):
    mod = ring.modulus
    stack = [(word, fcoef)]
    while stack:
        w, f = stack.pop()
        if not f:
            continue
        k = next((i for i in range(len(w) - 1) if w[i] >= w[i + 1]), None)
        if k is None:
            for mono, c in f.items():
                _add_term(out, (w, mono), c, mod)
            continue
        x, y = w[k], w[k + 1]
        rest = w[:k] + w[k + 2:]
        if x == y:
            qv = convert_element(q.get(x, x), ring)
            stack.append((rest, face.multiply(f, qv, ring)))
        else:
            flipped = w[:k] + (y, x) + w[k + 2:]
            stack.append((flipped, {m: ring.neg(c) for m, c in f.items()}))
            qv = convert_element(q.get(x, y), ring)
            stack.append((rest, face.multiply(f, qv, ring)))
    return out


def total_degree_basis(data, d, face=None):
    """Deterministic ordered basis of the total-degree-d component: index
    sets of size k (largest k first), monomials of degree d - k."""
    if face is None:
        face = FaceRing(data.poset)
    out = []
    for k in range(min(data.n, d), -1, -1):
        monos = face.basis_of_degree(d - k)
        if not monos:
            continue
        for S in combinations(range(1, data.n + 1), k):
            for mono in monos:
                out.append((S, mono))
    return tuple(out)
