"""Moy-Prasad style filtration subgroups of Sp(4), quotient coordinates and characters.

A filtration group at a point x and depth r is described by a valuation pattern
on matrix entries.  With y = (x1, x2, -x2, -x1), entry (i, j) carries the affine
functional (eps_i - eps_j) + k, so U_{a+k} sits in the group iff
k >= r - (y_i - y_j).  Diagonal entries carry the torus condition.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from gmpy2 import mpq

from .affine import (
    ALPHA,
    BETA,
    BARYCENTER,
    ETA,
    GL2,
    P_POINT,
    SL2xGL1,
    AffineRoot,
    C2,
)
from .chevalley import (
    DESIGNATED_ENTRY,
    ROOT_POSITIONS,
    GroupElement,
    h_root,
    x_root,
)
from .lattice import PatternKeyer
from .scalars import as_fraction, is_odd_prime, legendre, residue, unit_generator, valuation

# torus-part tags
PRO_UNIPOTENT = "pro-unipotent"
T_PSI = "T_psi"
T_ALPHA = "T_alpha"
PARAHORIC = "parahoric"
TORUS_PARTS = (PRO_UNIPOTENT, T_PSI, T_ALPHA, PARAHORIC)

SIGMA_PRIME_BARYCENTER = (Fraction(1, 8), Fraction(3, 8))


def _gl4_point(x) -> tuple:
    x1, x2 = (as_fraction(c) for c in x)
    return (x1, x2, -x2, -x1)


@dataclass(frozen=True)
class FiltrationGroup:
    """A compact open subgroup given by base point, depth and torus part.

    ``strict`` selects the depth r+ variant (affine roots with value > r).
    Parahoric groups have depth 0 and only require a unit diagonal.
    """

    point: tuple
    depth: Fraction
    p: int
    strict: bool = False
    torus_part: str = PRO_UNIPOTENT

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.torus_part not in TORUS_PARTS:
            raise ValueError(f"unknown torus part {self.torus_part!r}")
        if (self.torus_part == PARAHORIC) != (self.depth == 0 and not self.strict):
            raise ValueError("parahoric groups are exactly the depth-0 groups")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    @cached_property
    def bounds(self) -> tuple:
        """Minimal valuation of each entry of k - I."""
        y = _gl4_point(self.point)
        r = self.depth
        out = []
        for i in range(4):
            row = []
            for j in range(4):
                if i == j:
                    c = 0 if self.torus_part == PARAHORIC else max(1, _level(r, 0, self.strict))
                else:
                    c = _level(r, y[i] - y[j], self.strict)
                row.append(c)
            out.append(tuple(row))
        return tuple(out)

    def root_level(self, a: tuple) -> int:
        """Smallest k with U_{a+k} inside the group."""
        i, j = DESIGNATED_ENTRY[tuple(a)]
        return self.bounds[i][j]

    def affine_roots(self) -> list[AffineRoot]:
        """The largest root subgroup U_{a+k} contained in the group, for each root a."""
        return [AffineRoot(a, self.root_level(a)) for a in C2.roots]

    def contains(self, g: GroupElement) -> bool:
        p, c = self.p, self.bounds
        e = g.entries
        for i in range(4):
            for j in range(4):
                if i != j and valuation(e[4 * i + j], p) < c[i][j]:
                    return False
        diag = [e[5 * i] for i in range(4)]
        if any(valuation(d, p) != 0 for d in diag):
            return False
        if self.torus_part == PARAHORIC:
            return True
        if self.torus_part == PRO_UNIPOTENT:
            return all(valuation(d - 1, p) >= c[i][i] for i, d in enumerate(diag))
        t = self.torus_representative(g)
        if t is None:
            return False
        # what is left after removing the torus part must be pro-unipotent
        rest = [diag[i] / t.entries[5 * i] for i in range(4)]
        return all(valuation(d - 1, p) >= c[i][i] for i, d in enumerate(rest))

    def torus_representative(self, g: GroupElement):
        """Diagonal t in the extended torus with t^-1 g in the pro-unipotent part.

        Returns None when the diagonal of g is incompatible with the torus part.
        """
        p = self.p
        d0, d1 = g.entries[0], g.entries[5]
        if self.torus_part == T_PSI:
            # T_psi: t2 = +-1 mod p, t1 any unit
            r = residue(d1, p)
            if r not in (1, p - 1):
                return None
            return GroupElement.diagonal(d0, 1 if r == 1 else -1)
        if self.torus_part == T_ALPHA:
            # T_alpha = h_alpha(R^x): t = diag(u, 1/u, u, 1/u)
            if residue(d0 * d1, p) != 1:
                return None
            return h_root(ALPHA, d0)
        if self.torus_part == PRO_UNIPOTENT:
            return GroupElement.identity()
        raise ValueError("parahoric groups have no torus splitting")

    def torus_coset_representatives(self) -> list[GroupElement]:
        """Representatives of (extended torus) / T(R)^+."""
        p = self.p
        if self.torus_part == T_PSI:
            return [GroupElement.diagonal(u, e) for u in range(1, p) for e in (1, -1)]
        if self.torus_part == T_ALPHA:
            return [h_root(ALPHA, u) for u in range(1, p)]
        return [GroupElement.identity()]

    def unipotent_generators(self) -> list[GroupElement]:
        return [x_root(a.gradient, mpq(self.p) ** a.level) for a in self.affine_roots()]

    def torus_generators(self) -> list[GroupElement]:
        p = self.p
        if self.torus_part == PARAHORIC:
            g = unit_generator(p)
            return [GroupElement.diagonal(g, 1), GroupElement.diagonal(1, g)]
        k = self.bounds[0][0]
        t = 1 + p**k
        gens = [GroupElement.diagonal(t, 1), GroupElement.diagonal(1, t)]
        if self.torus_part == T_PSI:
            gens += [GroupElement.diagonal(unit_generator(p), 1), GroupElement.diagonal(1, -1)]
        elif self.torus_part == T_ALPHA:
            gens.append(h_root(ALPHA, unit_generator(p)))
        return gens

    def generators(self) -> list[GroupElement]:
        return self.unipotent_generators() + self.torus_generators()

    def pro_unipotent_part(self) -> "FiltrationGroup":
        if self.torus_part in (PRO_UNIPOTENT, PARAHORIC):
            return self
        return FiltrationGroup(self.point, self.depth, self.p, self.strict, PRO_UNIPOTENT)

    @cached_property
    def keyer(self) -> PatternKeyer:
        if self.torus_part in (T_PSI, T_ALPHA):
            raise ValueError("extended groups are keyed through their pro-unipotent part")
        return PatternKeyer(self.bounds, self.p, pro_p=self.torus_part == PRO_UNIPOTENT)

    def coset_key(self, g: GroupElement) -> tuple:
        """Canonical label of the left coset gK (pro-unipotent or parahoric K)."""
        return self.keyer.key(g)


def _level(r: Fraction, value: Fraction, strict: bool) -> int:
    """Minimal integer k with value + k >= r (or > r when strict)."""
    t = r - value
    return math.floor(t) + 1 if strict else math.ceil(t)


def build_filtration(point, depth, p: int, torus_part: str = PRO_UNIPOTENT, strict: bool = False):
    """Filtration group at ``point`` and ``depth``; only the configurations used here are allowed."""
    point = tuple(as_fraction(c) for c in point)
    depth = as_fraction(depth)
    supported = {
        (P_POINT, Fraction(1, 2)),
        (BARYCENTER, Fraction(1, 4)),
        (BARYCENTER, Fraction(0)),
        (SIGMA_PRIME_BARYCENTER, Fraction(0)),
    }
    if (point, depth) not in supported:
        raise ValueError(f"unsupported point/depth combination {point}, {depth}")
    if depth == 0 and not strict:
        torus_part = PARAHORIC
    return FiltrationGroup(point, depth, p, strict, torus_part)


def k_plus(p: int, torus_part: str = PRO_UNIPOTENT) -> FiltrationGroup:
    return build_filtration(P_POINT, Fraction(1, 2), p, torus_part)


def k_plus_plus(p: int) -> FiltrationGroup:
    return build_filtration(P_POINT, Fraction(1, 2), p, strict=True)


def i_plus(p: int) -> FiltrationGroup:
    return build_filtration(BARYCENTER, Fraction(1, 4), p)


def i_plus_plus(p: int) -> FiltrationGroup:
    return build_filtration(BARYCENTER, Fraction(1, 4), p, strict=True)


def iwahori(p: int, alcove: str = "sigma") -> FiltrationGroup:
    point = BARYCENTER if alcove == "sigma" else SIGMA_PRIME_BARYCENTER
    return build_filtration(point, 0, p)


# ------------------------------------------------------------ quotients

def quotient_factors(outer: FiltrationGroup, inner: FiltrationGroup) -> list[AffineRoot]:
    """Affine roots a+k with U_{a+k} in ``outer`` but U_{a+k} not in ``inner``.

    Assumes the levels differ by at most one (true for consecutive depths).
    """
    out = []
    for a in C2.roots:
        lo, hi = outer.root_level(a), inner.root_level(a)
        if hi - lo > 1:
            raise ValueError("quotient is not elementary abelian at root %s" % (a,))
        if hi > lo:
            out.append(AffineRoot(a, lo))
    return sorted(out)


def quotient_order(outer: FiltrationGroup, inner: FiltrationGroup, limit: int = 200_000) -> int:
    """|outer / inner| by breadth-first search over inner-cosets under outer's generators."""
    key = inner.coset_key
    gens = outer.generators()
    ident = GroupElement.identity()
    seen = {key(ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s * g
                k = key(h)
                if k not in seen:
                    seen.add(k)
                    nxt.append(h)
        if len(seen) > limit:
            raise RuntimeError("quotient larger than the enumeration limit")
        frontier = nxt
    return len(seen)


def normality_defects(outer: FiltrationGroup, inner: FiltrationGroup) -> list:
    """Generator pairs (g, k) with g k g^-1 outside ``inner``."""
    return [(g, k) for g in outer.generators() for k in inner.generators()
            if not inner.contains(g * k * g.inverse())]


def commutator_defects(outer: FiltrationGroup, inner: FiltrationGroup) -> list:
    """Generator pairs of ``outer`` whose commutator leaves ``inner``."""
    gens = outer.generators()
    return [(g, h) for g in gens for h in gens
            if not inner.contains(g * h * g.inverse() * h.inverse())]


def coordinates(outer: FiltrationGroup, inner: FiltrationGroup, g: GroupElement) -> dict:
    """Image of g in the elementary abelian quotient outer/inner, factor by factor.

    Each factor a+k is read from the designated matrix entry of a, divided by
    p^k and reduced mod p.
    """
    if not outer.pro_unipotent_part().contains(g):
        raise ValueError("element is not in the outer group")
    p = outer.p
    out = {}
    for f in quotient_factors(outer, inner):
        i, j = DESIGNATED_ENTRY[f.gradient]
        out[f] = residue(g[i, j] / mpq(p) ** f.level, p)
    return out


# ------------------------------------------------------------ characters

TRIVIAL = "trivial"
LEGENDRE = "legendre"
SIGN = "sign"


@dataclass(frozen=True)
class Character:
    """chi = mu (x) psi on K = (extended torus) K^+.

    ``multipliers`` maps each active quotient factor to a nonzero residue; psi
    sends g to zeta^(sum multiplier * coordinate).  ``mu_torus`` is the quadratic
    character on the cyclic torus piece (T_delta in case SL2xGL1, T_alpha in
    case GL2) and ``mu_center`` the one on Z_beta = {h_beta(+-1)} (case SL2xGL1
    only).
    """

    case: str
    p: int
    multipliers: Mapping[AffineRoot, int]
    mu_torus: str = TRIVIAL
    mu_center: str = TRIVIAL

    def __post_init__(self):
        if self.case not in (SL2xGL1, GL2):
            raise ValueError(f"unknown case {self.case!r}")
        if self.mu_torus not in (TRIVIAL, LEGENDRE):
            raise ValueError("mu must be quadratic: trivial or the Legendre symbol")
        if self.mu_center not in (TRIVIAL, SIGN):
            raise ValueError("the character of Z_beta is trivial or the sign")
        if self.case == GL2 and self.mu_center != TRIVIAL:
            raise ValueError("the GL2 case has no separate center factor")
        for f, m in self.multipliers.items():
            if m % self.p == 0:
                raise ValueError(f"multiplier on {f} must be a unit")

    @property
    def zeta(self) -> complex:
        return cmath.exp(2j * math.pi / self.p)

    @cached_property
    def K_plus(self) -> FiltrationGroup:
        return k_plus(self.p)

    @cached_property
    def K_plus_plus(self) -> FiltrationGroup:
        return k_plus_plus(self.p)

    @cached_property
    def K(self) -> FiltrationGroup:
        return k_plus(self.p, T_PSI if self.case == SL2xGL1 else T_ALPHA)

    def psi_exponent(self, k: GroupElement) -> int:
        coords = coordinates(self.K_plus, self.K_plus_plus, k)
        return sum(m * coords[f] for f, m in self.multipliers.items()) % self.p

    def psi(self, k: GroupElement) -> complex:
        return self.zeta ** self.psi_exponent(k)

    def mu(self, t: GroupElement) -> int:
        """mu on a diagonal torus element of the extended torus."""
        p = self.p
        val = 1
        if self.mu_torus == LEGENDRE:
            val *= legendre(residue(t.entries[0], p), p)
        if self.mu_center == SIGN and residue(t.entries[5], p) != 1:
            val = -val
        return val

    def __call__(self, g: GroupElement) -> complex:
        return eval_character(self, g)


def active_factors(case: str) -> tuple:
    """The two quotient factors carrying a nontrivial psi in each case."""
    if case == SL2xGL1:
        return (AffineRoot(BETA, 0), AffineRoot((0, -2), 1))
    if case == GL2:
        return (AffineRoot(ETA, 0), AffineRoot((-1, -1), 1))
    raise ValueError(f"unknown case {case!r}")


def make_character(case: str, p: int, mu_torus: str = TRIVIAL, mu_center: str = TRIVIAL,
                   multipliers: Sequence[int] = (1, 1)) -> Character:
    facs = active_factors(case)
    return Character(case, p, dict(zip(facs, multipliers)), mu_torus, mu_center)


def eval_character(chi: Character, g: GroupElement) -> complex:
    """chi(g) = mu(t) psi(t^-1 g) with t the torus part of g."""
    K = chi.K
    if not K.contains(g):
        raise ValueError("element is outside K")
    t = K.torus_representative(g)
    k = t.inverse() * g
    if not chi.K_plus.contains(k):
        raise AssertionError("torus factorisation left K^+; pattern bug")
    return chi.mu(t) * chi.psi(k)


def build_strong_K(case: str, p: int, mu: str = TRIVIAL, mu_center: str = TRIVIAL,
                   multipliers: Sequence[int] = (1, 1)):
    """The group K = T_psi K^+ (SL2xGL1) or T_alpha K^+ (GL2) and its character chi."""
    chi = make_character(case, p, mu, mu_center, multipliers)
    return chi.K, chi


# ------------------------------------------------- ground-truth oracles

def reduce_mod(g: GroupElement, modulus: int, p: int) -> tuple:
    """Entries of a p-integral matrix reduced mod ``modulus`` (a power of p)."""
    e = [valuation(x, p) for x in g.entries]
    if min(e) < 0:
        raise ValueError("matrix is not p-integral")
    return tuple(x.numerator * pow(x.denominator, -1, modulus) % modulus for x in g.entries)


def closure_mod_p2(group: FiltrationGroup, limit: int = 5_000_000):
    """Codes of the subgroup generated by ``group.generators()`` reduced mod p^2.

    Each 4x4 matrix mod p^2 is packed base p^2 into one int64, so this only
    runs where (p^2)^16 fits, i.e. p = 3.  Returns a sorted numpy array.
    """
    import numpy as np

    p = group.p
    mod = p * p
    if mod ** 16 >= 2**63:
        raise ValueError("mod p^2 closure only supports p = 3")
    gens = np.array([reduce_mod(g, mod, p) for g in group.generators()], dtype=np.int64)
    gens = gens.reshape(-1, 4, 4)
    weights = mod ** np.arange(16, dtype=np.int64)

    def encode(mats):
        return mats.reshape(-1, 16) @ weights

    frontier = np.eye(4, dtype=np.int64)[None]
    visited = encode(frontier)
    while len(frontier):
        prods = np.concatenate([(frontier @ g) % mod for g in gens])
        codes, idx = np.unique(encode(prods), return_index=True)
        fresh = ~np.isin(codes, visited, assume_unique=True)
        frontier = prods[idx[fresh]]
        visited = np.union1d(visited, codes[fresh])
        if len(visited) > limit:
            raise RuntimeError("closure exceeded the size limit")
    return visited


def decode_mod(codes, p: int):
    import numpy as np

    mod = p * p
    digits = (np.asarray(codes)[:, None] // (mod ** np.arange(16, dtype=np.int64))) % mod
    return digits.reshape(-1, 4, 4)


def pattern_mask_mod_p2(group: FiltrationGroup, mats):
    """Vectorised valuation-pattern test on matrices mod p^2 (pro-unipotent groups)."""
    import numpy as np

    p = group.p
    mod = p * p
    ok = np.ones(len(mats), dtype=bool)
    for i in range(4):
        for j in range(4):
            c = min(group.bounds[i][j], 2)
            x = mats[:, i, j] - (1 if i == j else 0)
            ok &= (x % mod) % (p**c) == 0
    return ok


def cayley_element(group: FiltrationGroup, rng, span: int = 50) -> GroupElement:
    """Random element (I+X)(I-X)^-1 for X in the Lie algebra with the group's pattern."""
    p = group.p
    X = [[Fraction(0)] * 4 for _ in range(4)]
    for a in group.affine_roots():
        u = mpq(p) ** a.level * rng.randrange(-span, span + 1)
        for i, j, s in ROOT_POSITIONS[a.gradient]:
            X[i][j] += s * u
    for k in range(2):
        s = mpq(p) ** group.bounds[k][k] * rng.randrange(-span, span + 1)
        X[k][k] += s
        X[3 - k][3 - k] -= s
    plus = GroupElement([(1 if i == j else 0) + X[i][j] for i in range(4) for j in range(4)])
    minus = [[(1 if i == j else 0) - X[i][j] for j in range(4)] for i in range(4)]
    return plus * _invert(minus)


def _invert(m) -> GroupElement:
    """Gauss-Jordan inverse of a 4x4 rational matrix."""
    n = 4
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return GroupElement([x for row in aug for x in row[n:]])
