"""Sp(4) as 4x4 matrices over Q, with an explicit pinning.

The symplectic form is <x, y> = x1 y4 + x2 y3 - x3 y2 - x4 y1, the torus is
diag(t1, t2, 1/t2, 1/t1), and matrix position (i, j) carries the weight
eps_i - eps_j with eps = (e1, e2, -e2, -e1).  Each root group occupies one or
two matrix positions, listed in ROOT_POSITIONS with their signs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .affine import ALPHA, BETA, DELTA, ETA, AffineRoot, AffineWeylElement, C2
from .scalars import Number, as_rational, is_unit, valuation

_ZERO = mpq(0)
_ONE = mpq(1)

# weight attached to each row/column index
EPS = ((1, 0), (0, 1), (0, -1), (-1, 0))

ROOT_POSITIONS = {
    ALPHA: ((0, 1, 1), (2, 3, -1)),
    (-1, 1): ((1, 0, 1), (3, 2, -1)),
    BETA: ((1, 2, 1),),
    (0, -2): ((2, 1, 1),),
    DELTA: ((0, 3, 1),),
    (-2, 0): ((3, 0, 1),),
    ETA: ((0, 2, 1), (1, 3, 1)),
    (-1, -1): ((2, 0, 1), (3, 1, 1)),
}

# the matrix position read off when extracting a root-group coordinate
DESIGNATED_ENTRY = {a: pos[0][:2] for a, pos in ROOT_POSITIONS.items()}


def entry_weight(i: int, j: int) -> tuple:
    return tuple(a - b for a, b in zip(EPS[i], EPS[j]))


class GroupElement:
    """An element of Sp(4, Q) stored as a row-major 16-tuple of Fractions."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable[Number]):
        e = tuple(as_rational(x) for x in entries)
        if len(e) != 16:
            raise ValueError("a 4x4 matrix needs 16 entries")
        self.entries = e
        self._hash = None

    @classmethod
    def _raw(cls, entries: tuple) -> "GroupElement":
        g = cls.__new__(cls)
        g.entries = entries
        g._hash = None
        return g

    @classmethod
    def identity(cls) -> "GroupElement":
        return _IDENTITY

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "GroupElement":
        return cls([x for row in rows for x in row])

    @classmethod
    def diagonal(cls, t1: Number, t2: Number) -> "GroupElement":
        t1, t2 = as_rational(t1), as_rational(t2)
        e = [_ZERO] * 16
        e[0], e[5], e[10], e[15] = t1, t2, 1 / t2, 1 / t1
        return cls._raw(tuple(e))

    def __getitem__(self, ij: tuple) -> Fraction:
        i, j = ij
        return self.entries[4 * i + j]

    def rows(self) -> list[list[Fraction]]:
        return [list(self.entries[4 * i: 4 * i + 4]) for i in range(4)]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        a, b = self.entries, other.entries
        out = []
        for i in range(0, 16, 4):
            a0, a1, a2, a3 = a[i], a[i + 1], a[i + 2], a[i + 3]
            for j in range(4):
                s = _ZERO
                if a0:
                    s += a0 * b[j]
                if a1:
                    s += a1 * b[4 + j]
                if a2:
                    s += a2 * b[8 + j]
                if a3:
                    s += a3 * b[12 + j]
                out.append(s)
        return GroupElement._raw(tuple(out))

    def inverse(self) -> "GroupElement":
        # g^-1 = J^-1 g^T J for symplectic g; with this J that is a signed
        # anti-transpose
        e = self.entries
        out = []
        for i in range(4):
            for j in range(4):
                v = e[4 * (3 - j) + (3 - i)]
                out.append(v if (i < 2) == (j < 2) else -v)
        return GroupElement._raw(tuple(out))

    def transpose(self) -> "GroupElement":
        e = self.entries
        return GroupElement._raw(tuple(e[4 * j + i] for i in range(4) for j in range(4)))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(str(x) for x in r) + "]" for r in self.rows()]
        return "GroupElement(" + ", ".join(rows) + ")"

    def is_symplectic(self) -> bool:
        return _matmul(_matmul(self.transpose().entries, J_MATRIX), self.entries) == J_MATRIX

    def determinant(self) -> Fraction:
        m = self.rows()
        det = _ONE
        for c in range(4):
            piv = next((r for r in range(c, 4) if m[r][c] != 0), None)
            if piv is None:
                return _ZERO
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, 4):
                f = m[r][c] / m[c][c]
                if f:
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return det

    def is_monomial(self) -> bool:
        rows = self.rows()
        return all(sum(1 for x in r if x != 0) == 1 for r in rows) and all(
            sum(1 for r in rows if r[j] != 0) == 1 for j in range(4)
        )

    def min_valuation(self, p: int):
        return min(valuation(x, p) for x in self.entries)


def _matmul(a: tuple, b: tuple) -> tuple:
    return tuple(
        sum(a[4 * i + k] * b[4 * k + j] for k in range(4)) for i in range(4) for j in range(4)
    )


J_MATRIX = tuple(
    mpq(x) for x in (0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0)
)
_IDENTITY = GroupElement([1 if i % 5 == 0 else 0 for i in range(16)])


# ------------------------------------------------------------------ pinning

def x_root(a: tuple, u: Number) -> GroupElement:
    """x_a(u) = I + u E_a for a root a of C_2."""
    e = list(_IDENTITY.entries)
    u = as_rational(u)
    for i, j, s in ROOT_POSITIONS[tuple(a)]:
        e[4 * i + j] += s * u
    return GroupElement._raw(tuple(e))


def x_affine(psi: AffineRoot, u: Number, p: int) -> GroupElement:
    """Element of U_psi: x_gradient(p^level * u), u p-integral."""
    u = as_rational(u)
    if u != 0 and valuation(u, p) < 0:
        raise ValueError("x_affine needs a p-integral argument")
    return x_root(psi.gradient, u * mpq(p) ** psi.level)


def phi(a: tuple, m: Sequence[Sequence[Number]]) -> GroupElement:
    """The pinning SL_2 -> K_a evaluated on a 2x2 matrix.

    Built from the decomposition m = x_a(*) h x_-a(*) when m[1][1] != 0, or from
    n_a otherwise; used to cross-check n_a and h_a against the closed forms.
    """
    (m00, m01), (m10, m11) = [[as_rational(x) for x in row] for row in m]
    if m00 * m11 - m01 * m10 != 1:
        raise ValueError("phi needs a determinant-one matrix")
    neg = tuple(-c for c in a)
    if m11 != 0:
        # [[a,b],[c,d]] = [[1,b/d],[0,1]] diag(1/d, d) [[1,0],[c/d,1]]
        return x_root(a, m01 / m11) * coroot_torus(a, 1 / m11) * x_root(neg, m10 / m11)
    # [[m00, m01], [-1/m01, 0]] = x_a(-m00 m01) n_a(m01)
    return x_root(a, -m00 * m01) * n_root(a, m01)


def coroot_torus(a: tuple, t: Number) -> GroupElement:
    """a^vee(t): the diagonal matrix with entries t^<eps_i, a^vee>."""
    t = as_rational(t)
    norm = sum(c * c for c in a)
    e = [_ZERO] * 16
    for i, w in enumerate(EPS):
        e[5 * i] = t ** (2 * sum(x * y for x, y in zip(w, a)) // norm)
    return GroupElement._raw(tuple(e))


def n_root(a: tuple, u: Number) -> GroupElement:
    """n_a(u) = x_-a(-1/u) x_a(u) x_-a(-1/u)."""
    u = as_rational(u)
    if u == 0:
        raise ValueError("n_a(u) needs u != 0")
    neg = tuple(-c for c in a)
    y = x_root(neg, -1 / u)
    return y * x_root(a, u) * y


def h_root(a: tuple, u: Number) -> GroupElement:
    """h_a(u) = n_a(u) n_a(-1)."""
    return n_root(a, u) * n_root(a, -1)


def n_of(psi: AffineRoot, u: Number, p: int) -> GroupElement:
    """n_psi(u) for an affine root psi and a unit u: n_gradient(p^level u)."""
    u = as_rational(u)
    if not is_unit(u, p):
        raise ValueError("n_of needs a unit argument")
    return n_root(psi.gradient, u * mpq(p) ** psi.level)


def h_of(a, u: Number, p: int) -> GroupElement:
    """h_gamma(u) for a root (or affine root) gamma and a unit u."""
    u = as_rational(u)
    if not is_unit(u, p):
        raise ValueError("h_of needs a unit argument")
    grad = a.gradient if isinstance(a, AffineRoot) else tuple(a)
    return h_root(grad, u)


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


def root_coordinate(g: GroupElement, a: tuple) -> Fraction:
    """The coefficient u if g = x_a(u)."""
    i, j = DESIGNATED_ENTRY[tuple(a)]
    return g[i, j]


def decompose_unipotent(g: GroupElement) -> dict[tuple, Fraction]:
    """Write g as an ordered product over the listed roots if possible.

    Only used for the commutator constants: peels off x_a(u) factors in the
    order of increasing height of the positive roots sharing the support.
    """
    rest = g
    out = {}
    for a in sorted(ROOT_POSITIONS, key=_height):
        u = root_coordinate(rest, a)
        if u:
            out[a] = u
            rest = x_root(a, -u) * rest
    if rest != _IDENTITY:
        raise ValueError("element is not a product of the listed root subgroups")
    return out


def _height(a: tuple) -> int:
    # coefficients w.r.t. alpha = e1 - e2, beta = 2 e2
    c_alpha = a[0]
    c_beta = (a[0] + a[1]) // 2
    return -(c_alpha + c_beta)


# --------------------------------------------------- commutator constants

def commutator_constants() -> dict[str, Fraction]:
    """Constants a, b with [x_-alpha(v), x_delta(u)] = x_beta(a v^2 u) x_{e1+e2}(b v u).

    Also a', b' with [x_alpha(v), x_{1-delta}(u)] = x_{1-beta}(a' v^2 u) x_{1-(e1+e2)}(b' v u),
    extracted from the level-0 gradients (the level factors through).
    Computed from matrices at v = u = 1 and checked to be the stated monomials.
    """
    out = {}
    c = commutator(x_root((-1, 1), 1), x_root(DELTA, 1))
    parts = decompose_unipotent(c)
    out["a"], out["b"] = parts.get(BETA, _ZERO), parts.get(ETA, _ZERO)
    c = commutator(x_root(ALPHA, 1), x_root((-2, 0), 1))
    parts = decompose_unipotent(c)
    out["a_prime"], out["b_prime"] = parts.get((0, -2), _ZERO), parts.get((-1, -1), _ZERO)
    for v, u in ((2, 3), (3, 5), (Fraction(1, 2), 7)):
        lhs = commutator(x_root((-1, 1), v), x_root(DELTA, u))
        rhs = x_root(BETA, out["a"] * v * v * u) * x_root(ETA, out["b"] * v * u)
        if lhs != rhs:
            raise AssertionError("commutator [x_-alpha, x_delta] is not of the stated shape")
        lhs = commutator(x_root(ALPHA, v), x_root((-2, 0), u))
        rhs = x_root((0, -2), out["a_prime"] * v * v * u) * x_root((-1, -1), out["b_prime"] * v * u)
        if lhs != rhs:
            raise AssertionError("commutator [x_alpha, x_-delta] is not of the stated shape")
    return out


# ------------------------------------------- commutation-rule classification

PARALLEL, OPPOSITE, GENERIC = "parallel", "opposite", "generic"


def classify_commutator(g1: AffineRoot, g2: AffineRoot):
    """Which containment rule governs [U_g1, U_g2], and the predicted factors.

    Returns (tag, factors) where factors lists affine roots whose groups
    (together with T(R)^+ for the opposite case) contain the commutator.
    """
    s = tuple(a + b for a, b in zip(g1.gradient, g2.gradient))
    if g1.gradient == g2.gradient:
        return PARALLEL, []
    if all(c == 0 for c in s):
        return OPPOSITE, [g1.shift(1), g2.shift(1)]
    roots = set(C2.roots)
    factors = []
    for i in range(1, 4):
        for j in range(1, 4):
            grad = tuple(i * a + j * b for a, b in zip(g1.gradient, g2.gradient))
            if grad in roots:
                factors.append(AffineRoot(grad, i * g1.level + j * g2.level))
    return GENERIC, factors


def weyl_image(n: GroupElement, p: int) -> AffineWeylElement:
    """The affine Weyl element w with n U_psi n^-1 = U_{w psi}, for monomial n."""
    if not n.is_monomial():
        raise ValueError("weyl_image needs a monomial matrix")
    ninv = n.inverse()
    images = {}
    for a in C2.roots:
        conj = n * x_root(a, 1) * ninv
        hits = [(i, j) for i in range(4) for j in range(4) if i != j and conj[i, j] != 0]
        b = entry_weight(*hits[0])
        images[a] = (b, valuation(conj[hits[0]], p))
    # w.(a + k) = La + (k + v): linear part from the gradients, translation from v
    lin_cols = []
    for i in range(2):
        e = tuple(2 if k == i else 0 for k in range(2))
        b, _ = images[e]
        lin_cols.append(tuple(c // 2 for c in b))
    linear = tuple(tuple(lin_cols[j][i] for j in range(2)) for i in range(2))
    # level shift v = -(La).t  for a = 2e1, 2e2 gives t
    t = []
    for i in range(2):
        e = tuple(2 if k == i else 0 for k in range(2))
        b, v = images[e]
        idx = next(k for k in range(2) if b[k] != 0)
        t.append((idx, Fraction(-v, b[idx])))
    trans = [Fraction(0)] * 2
    for idx, val in t:
        trans[idx] = val
    w = AffineWeylElement(linear, tuple(int(x) if x.denominator == 1 else x for x in trans))
    for a, (b, v) in images.items():
        img = w.act_on_root(AffineRoot(a, 0))
        if img != AffineRoot(b, v):
            raise AssertionError(f"inconsistent Weyl image on root {a}")
    return w


def in_predicted_subgroup(g: GroupElement, tag: str, factors, p: int) -> bool:
    """Membership of g in the product of the U_factors (times T(R)^+ when opposite).

    The factors form a closed set of gradients with additive levels, so the
    product is the set of symplectic matrices whose off-diagonal support lies
    on the factor positions, with valuations at least the factor levels.  In
    the opposite case the diagonal may be any element of T(R)^+.
    """
    if tag == PARALLEL:
        return g == _IDENTITY
    allowed = {}
    for f in factors:
        for i, j, _ in ROOT_POSITIONS[f.gradient]:
            allowed[(i, j)] = min(allowed.get((i, j), f.level), f.level)
    e = g.entries
    for i in range(4):
        for j in range(4):
            x = e[4 * i + j]
            if i == j:
                ok = valuation(x - 1, p) >= 1 if tag == OPPOSITE else x == 1
            elif (i, j) in allowed:
                ok = valuation(x, p) >= allowed[(i, j)]
            else:
                ok = x == 0
            if not ok:
                return False
    return True


def commutation_rule_holds(g1: AffineRoot, g2: AffineRoot, u: Number, v: Number, p: int):
    """Check [x_g1(u), x_g2(v)] against the containment rule for the pair.

    Returns None when no rule applies (opposite gradients with g1 + g2 <= 0),
    else whether the commutator lies in the predicted subgroup.
    """
    tag, factors = classify_commutator(g1, g2)
    if tag == OPPOSITE and g1.level + g2.level <= 0:
        return None
    c = commutator(x_affine(g1, u, p), x_affine(g2, v, p))
    return in_predicted_subgroup(c, tag, factors, p)
