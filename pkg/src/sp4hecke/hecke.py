"""Coset tables, support tests, convolution and structure constants.

Conventions: K is a filtration group (K^+ for the weak algebra, T K^+ for the
strong one) carrying a character chi; Haar measure gives K volume 1, so for f
supported on K a K = union of x_j K,

    (f * g)(x) = sum_j f(x_j) g(x_j^-1 x).

Left cosets of K are identified through canonical keys of their K^+-subcosets.
"""

from __future__ import annotations

import cmath
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from gmpy2 import mpq

from .affine import (
    ALPHA,
    BETA,
    DELTA,
    GL2,
    SL2xGL1,
    STRIP_GENERATORS,
    W_DELTA,
    W_N,
    W_ONE_MINUS_BETA,
    W_ONE_MINUS_DELTA,
    AffineRoot,
    AffineWeylElement,
    C2,
    enumerate_weyl,
    preserves_strip,
    reflection,
)
from .chevalley import (
    GroupElement,
    commutator_constants,
    h_of,
    h_root,
    n_of,
    n_root,
    weyl_image,
    x_affine,
    x_root,
)
from .filtration import (
    LEGENDRE,
    Character,
    FiltrationGroup,
    eval_character,
    iwahori,
    make_character,
)

DEFAULT_TABLE_LIMIT = 20_000


class ResourceBoundExceeded(RuntimeError):
    """A coset enumeration outgrew its configured size bound."""


class Inconclusive(RuntimeError):
    """A witness search ended without deciding the question."""


# ------------------------------------------------------------ characters

def trivial_character(K: FiltrationGroup) -> Callable:
    return lambda g: 1.0


def character_on(K: FiltrationGroup, chi: Optional[Character]) -> Callable:
    """chi as a function on K (the trivial character when chi is None).

    For the weak algebra K is K^+ and only psi is used.
    """
    if chi is None:
        return trivial_character(K)
    if K.torus_part == chi.K.torus_part:
        return lambda g: eval_character(chi, g)
    if K == chi.K_plus:
        return chi.psi
    raise ValueError("character does not live on this group")


# ------------------------------------------------------------ coset tables

@dataclass
class CosetTable:
    """Left K-cosets x_j K of K n K, with x_j = y_j n and y_j in K.

    ``lookup`` maps the key of every K^+-subcoset x_j t K^+ (t running over
    torus representatives of K/K^+) to (j, t).
    """

    base: GroupElement
    group: FiltrationGroup
    reps: list  # y_j
    weights: list  # chi(y_j)
    lookup: dict

    def __len__(self) -> int:
        return len(self.reps)

    def element(self, j: int) -> GroupElement:
        return self.reps[j] * self.base

    def elements(self) -> list:
        return [y * self.base for y in self.reps]

    def locate(self, g: GroupElement):
        """(j, t) with g in x_j t K^+, or None when g lies outside K n K."""
        return self.lookup.get(self.group.pro_unipotent_part().coset_key(g))

    def __contains__(self, g: GroupElement) -> bool:
        return self.locate(g) is not None


def left_coset_table(K: FiltrationGroup, chi: Optional[Character], n: GroupElement,
                     limit: int = DEFAULT_TABLE_LIMIT) -> CosetTable:
    """Enumerate K n K / K by breadth-first search under the generators of K.

    A new K-coset is registered together with all its K^+-subcosets, so each
    coset is expanded once.
    """
    key = K.pro_unipotent_part().coset_key
    gens = K.generators()
    torus = K.torus_coset_representatives()
    chi_fn = character_on(K, chi)
    reps, weights, lookup = [], [], {}

    def register(y):
        j = len(reps)
        if j >= limit:
            raise ResourceBoundExceeded(
                f"more than {limit} cosets in K n K (raise the limit to continue)")
        reps.append(y)
        weights.append(chi_fn(y))
        x = y * n
        for t in torus:
            k = key(x * t)
            if k in lookup:
                raise AssertionError("K^+-subcosets of distinct K-cosets collided")
            lookup[k] = (j, t)

    register(GroupElement.identity())
    queue = deque([0])
    while queue:
        y = reps[queue.popleft()]
        for s in gens:
            z = s * y
            if key(z * n) not in lookup:
                register(z)
                queue.append(len(reps) - 1)
    return CosetTable(n, K, reps, weights, lookup)


def pairwise_distinct(table: CosetTable) -> bool:
    """Brute-force check that x_i^-1 x_j lies outside K for i != j (O(N^2))."""
    xs = table.elements()
    invs = [x.inverse() for x in xs]
    K = table.group
    return not any(K.contains(invs[i] * xs[j])
                   for i in range(len(xs)) for j in range(len(xs)) if i != j)


# ------------------------------------------------------------ support

def intersection_generators(K: FiltrationGroup, n: GroupElement, depth_cap: int = 8) -> list:
    """Generators of K meet n^-1 K n for a monomial n.

    Both groups have Iwahori factorisations, so the intersection is generated
    by the deepest common root subgroup of each root, T(R)^+, and the torus
    representatives t of K/K^+ with n t n^-1 in K.
    """
    if not n.is_monomial():
        raise ValueError("intersection_generators needs a monomial element")
    p = K.p
    ninv = n.inverse()
    gens = []
    for a in C2.roots:
        level = K.root_level(a)
        for extra in range(depth_cap):
            x = x_root(a, mpq(p) ** (level + extra))
            if K.contains(n * x * ninv):
                gens.append(x)
                break
        else:
            raise AssertionError(f"no common root subgroup found for {a}")
    gens += K.torus_generators()[:2]
    gens += [t for t in K.torus_coset_representatives() if K.contains(n * t * ninv)]
    return gens


def twist_defect(K: FiltrationGroup, chi_fn: Callable, n: GroupElement, gens: Sequence) -> Optional[GroupElement]:
    """A generator k with chi(n k n^-1) != chi(k), or None."""
    ninv = n.inverse()
    for k in gens:
        if abs(chi_fn(n * k * ninv) - chi_fn(k)) > 1e-9:
            return k
    return None


@dataclass(frozen=True)
class SupportResult:
    """Outcome of a support test.

    ``decision`` is True (supported), False (witness found) or None
    (inconclusive).  A witness (k, side) means: for side "right", k and g k g^-1
    both lie in K with chi(g k g^-1) != chi(k); for side "left", k and
    g^-1 k g lie in K with chi(g^-1 k g) != chi(k).
    """

    decision: Optional[bool]
    witness: Optional[GroupElement] = None
    side: Optional[str] = None
    reason: str = ""

    def __bool__(self) -> bool:
        if self.decision is None:
            raise Inconclusive(self.reason or "support test was inconclusive")
        return self.decision


def supports_monomial(K: FiltrationGroup, chi: Optional[Character], n: GroupElement) -> SupportResult:
    """Exact support test for a monomial element: the twist on K meet n^-1 K n."""
    chi_fn = character_on(K, chi)
    bad = twist_defect(K, chi_fn, n, intersection_generators(K, n))
    if bad is None:
        return SupportResult(True, reason="twist trivial on generators of the intersection")
    return SupportResult(False, bad, "right", "twist nontrivial on an intersection generator")


def witness_candidates(K: FiltrationGroup, max_level: int = 3):
    """Single root elements x_{a+k}(u) in K with |k| <= max_level and u a unit."""
    p = K.p
    for a in C2.roots:
        lo = K.root_level(a)
        for k in range(max(lo, -max_level), max_level + 1):
            for u in range(1, p):
                yield x_affine(AffineRoot(a, k), u, p)


def find_witness(K: FiltrationGroup, chi: Optional[Character], g: GroupElement,
                 max_level: int = 3) -> Optional[SupportResult]:
    chi_fn = character_on(K, chi)
    ginv = g.inverse()
    for k in witness_candidates(K, max_level):
        for side, conj in (("right", g * k * ginv), ("left", ginv * k * g)):
            if K.contains(conj) and abs(chi_fn(conj) - chi_fn(k)) > 1e-9:
                return SupportResult(False, k, side, "single-root witness")
    return None


def verify_witness(K: FiltrationGroup, chi: Optional[Character], g: GroupElement,
                   result: SupportResult) -> bool:
    """Re-check a negative verdict from scratch."""
    chi_fn = character_on(K, chi)
    k = result.witness
    conj = g * k * g.inverse() if result.side == "right" else g.inverse() * k * g
    return K.contains(k) and K.contains(conj) and abs(chi_fn(conj) - chi_fn(k)) > 1e-9


def supports(K: FiltrationGroup, chi: Optional[Character], g: GroupElement,
             bases: Sequence[GroupElement] = (), table_for: Optional[Callable] = None,
             max_level: int = 3) -> SupportResult:
    """Does K g K carry a nonzero (K, chi)-biequivariant function?

    Monomial g is decided exactly.  Otherwise g (typically x_alpha n y_alpha)
    is declared supported when it lies in K n K for a supported monomial n
    among ``bases``, and unsupported when a single-root witness exists;
    anything else is inconclusive.
    """
    if g.is_monomial():
        return supports_monomial(K, chi, g)
    table_for = table_for or (lambda n: left_coset_table(K, chi, n))
    for n in bases:
        if supports_monomial(K, chi, n).decision and g in table_for(n):
            return SupportResult(True, reason="same double coset as a supported monomial")
    found = find_witness(K, chi, g, max_level)
    if found is not None:
        return found
    return SupportResult(None, reason=f"no witness with |level| <= {max_level}")


# ------------------------------------------------------------ N_psi membership

def in_N_psi(chi: Character, n: GroupElement) -> bool:
    """Geometric description of N_psi: n preserves the strip and psi on its root groups.

    The Weyl image must preserve the case's strip, and conjugation by n must
    send each active factor x_f(1) to an element with the same psi-value.
    """
    if not n.is_monomial():
        return False
    w = weyl_image(n, chi.p)
    if not preserves_strip(w, chi.case):
        return False
    p = chi.p
    Kp = chi.K_plus
    ninv = n.inverse()
    for f in chi.multipliers:
        x = x_affine(f, 1, p)
        y = n * x * ninv
        if not Kp.contains(y) or abs(chi.psi(y) - chi.psi(x)) > 1e-9:
            return False
    return True


# ------------------------------------------------------------ Hecke elements

class HeckeElement:
    """A (K, chi)-biequivariant function stored by its values on left K-cosets.

    ``reps[i]`` is a coset representative x_i and ``values[i]`` = f(x_i); the
    value anywhere on x_i K follows from f(x_i k) = f(x_i) chi(k).  Products are
    exact: the cosets x_i x'_j K of the product support receive f(x_i) g(x'_j).
    """

    def __init__(self, K: FiltrationGroup, chi: Optional[Character]):
        self.K = K
        self.chi = chi
        self.chi_fn = character_on(K, chi)
        self._key = K.pro_unipotent_part().coset_key
        self._torus = K.torus_coset_representatives()
        self.reps: list = []
        self.values: list = []
        self.index: dict = {}

    @classmethod
    def from_table(cls, table: CosetTable, chi: Optional[Character], coeff: complex = 1) -> "HeckeElement":
        """The function on K n K with value ``coeff`` at n."""
        f = cls(table.group, chi)
        f.reps = table.elements()
        f.values = [coeff * w for w in table.weights]
        f.index = dict(table.lookup)
        return f

    def _empty(self) -> "HeckeElement":
        return HeckeElement(self.K, self.chi)

    def copy(self) -> "HeckeElement":
        f = self._empty()
        f.reps, f.values, f.index = list(self.reps), list(self.values), dict(self.index)
        return f

    def locate(self, y: GroupElement) -> Optional[int]:
        loc = self.index.get(self._key(y))
        return None if loc is None else loc[0]

    def add_at(self, y: GroupElement, value: complex) -> None:
        """Add the biequivariant function equal to ``value`` at y on y K."""
        i = self.locate(y)
        if i is None:
            i = len(self.reps)
            self.reps.append(y)
            self.values.append(complex(value))
            for t in self._torus:
                self.index[self._key(y * t)] = (i, t)
            return
        self.values[i] += value / self.chi_fn(self.reps[i].inverse() * y)

    def __call__(self, y: GroupElement) -> complex:
        i = self.locate(y)
        if i is None:
            return 0j
        return self.values[i] * self.chi_fn(self.reps[i].inverse() * y)

    def items(self, tol: float = 1e-9):
        """(x_i, f(x_i)) over cosets where f is nonzero."""
        return [(x, v) for x, v in zip(self.reps, self.values) if abs(v) > tol]

    def support_size(self, tol: float = 1e-9) -> int:
        return len(self.items(tol))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return not self.items(tol)

    # algebra structure
    def _scaled(self, c: complex) -> "HeckeElement":
        f = self.copy()
        f.values = [c * v for v in f.values]
        return f

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        f = self.copy()
        for x, v in zip(other.reps, other.values):
            f.add_at(x, v)
        return f

    def __neg__(self) -> "HeckeElement":
        return self._scaled(-1)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return convolution_product(self, other)
        return self._scaled(other)

    def __rmul__(self, c):
        return self._scaled(c)

    def __truediv__(self, c):
        return self._scaled(1 / c)

    def distance(self, other: "HeckeElement") -> float:
        """max |f - g| over the union of the stored cosets."""
        diff = self - other
        return max((abs(v) for v in diff.values), default=0.0)


def convolution_product(f: HeckeElement, g: HeckeElement) -> HeckeElement:
    """f * g as a coset function (one pass over pairs of support cosets)."""
    if f.K != g.K:
        raise ValueError("factors live on different groups")
    out = f._empty()
    gs = g.items()
    for x, a in f.items():
        for y, b in gs:
            out.add_at(x * y, a * b)
    return out


def convolve(f: HeckeElement, g: HeckeElement, x: GroupElement) -> complex:
    """(f * g)(x) = sum_j f(x_j) g(x_j^-1 x) over the cosets x_j K of supp f."""
    total = 0j
    for xj, v in f.items():
        total += v * g(xj.inverse() * x)
    return total


def evaluate(f: HeckeElement, y: GroupElement) -> complex:
    return f(y)


def random_group_element(K: FiltrationGroup, rng, steps: int = 12) -> GroupElement:
    """A random word in the generators of K (and their inverses)."""
    gens = K.generators()
    g = GroupElement.identity()
    for _ in range(steps):
        s = rng.choice(gens)
        g = g * (s if rng.random() < 0.5 else s.inverse())
    return g


def biequivariance_defect(f: HeckeElement, g: GroupElement, k1: GroupElement, k2: GroupElement) -> float:
    """|f(k1 g k2) - chi(k1) f(g) chi(k2)|."""
    return abs(f(k1 * g * k2) - f.chi_fn(k1) * f(g) * f.chi_fn(k2))


# ------------------------------------------------------------ Gauss sums

def gauss_sum(chi: Character, which: str = "delta", a: Optional[Fraction] = None) -> complex:
    """G = sum over units u of mu(h(u)) psi(x(a u)).

    ``which`` = "delta" uses h_delta and x_beta with the commutator constant a
    of [x_-alpha(v), x_delta(u)]; "1-delta" uses h_{1-delta} and x_{1-beta}
    with the constant a' of [x_alpha(v), x_{1-delta}(u)].
    """
    if chi.case != SL2xGL1:
        raise ValueError("Gauss sums belong to the SL2xGL1 case")
    p = chi.p
    consts = commutator_constants()
    if which == "delta":
        a = consts["a"] if a is None else a
        h = lambda u: h_root(DELTA, u)
        x = lambda v: x_affine(AffineRoot(BETA, 0), v, p)
    elif which == "1-delta":
        a = consts["a_prime"] if a is None else a
        h = lambda u: h_root((-2, 0), u)
        x = lambda v: x_affine(AffineRoot((0, -2), 1), v, p)
    else:
        raise ValueError(f"unknown Gauss sum {which!r}")
    total = 0j
    for u in range(1, p):
        total += chi.mu(h(u)) * chi.psi(x(a * u))
    return total


# ------------------------------------------------------------ Weyl lifts

def strip_generator_rep(case: str, letter: str, p: int) -> GroupElement:
    """Fixed representative in N of a generator of W_psi.

    The alpha generator is w_alpha(-1) h_beta(-1): w_alpha(-1) alone sends
    x_eta(1) to x_eta(-1) and so does not support the algebra.
    """
    one_minus_delta = AffineRoot((-2, 0), 1)
    one_minus_beta = AffineRoot((0, -2), 1)
    if case == SL2xGL1 and letter == "delta":
        return n_root(DELTA, -1)
    if case == SL2xGL1 and letter == "1-delta":
        return n_of(one_minus_delta, -1, p)
    if case == GL2 and letter == "n":
        return n_root(DELTA, -1) * n_of(one_minus_beta, -1, p)
    if case == GL2 and letter == "alpha":
        return n_root(ALPHA, -1) * h_root(BETA, -1)
    raise ValueError(f"no generator {letter!r} in case {case}")


def word_rep(case: str, word: Sequence[str], p: int) -> GroupElement:
    g = GroupElement.identity()
    for s in word:
        g = g * strip_generator_rep(case, s, p)
    return g


def lift_weyl(w: AffineWeylElement, p: int, search_bound: int = 12) -> GroupElement:
    """A monomial element of Sp(4) with Weyl image w, built from n_psi(-1) on simple roots."""
    simple = C2.simple_affine_roots
    refl = [reflection(psi) for psi in simple]
    ident = AffineWeylElement.identity()
    queue = deque([(ident, ())])
    seen = {ident}
    while queue:
        v, word = queue.popleft()
        if v == w:
            g = GroupElement.identity()
            for i in word:
                g = g * n_of(simple[i], -1, p)
            return g
        if len(word) >= search_bound:
            continue
        for i, s in enumerate(refl):
            u = v * s
            if u not in seen:
                seen.add(u)
                queue.append((u, word + (i,)))
    raise ValueError("affine Weyl element not reached within the search bound")


# ------------------------------------------------------------ the algebra

class HeckeAlgebra:
    """H(K, chi) for the strong pair (T K^+, chi) or the weak pair (K^+, psi).

    Caches coset tables and builds the basis elements f_w normalised by
    f_w(n_w) = 1 at the fixed representatives of the strip generators.
    """

    def __init__(self, chi: Character, strong: bool = True, limit: int = DEFAULT_TABLE_LIMIT):
        self.chi = chi
        self.case = chi.case
        self.p = chi.p
        self.q = chi.p
        self.strong = strong
        self.K = chi.K if strong else chi.K_plus
        self.limit = limit
        self._tables: dict = {}
        self._phi: dict = {}

    @property
    def letters(self) -> tuple:
        return tuple(STRIP_GENERATORS[self.case])

    def table(self, n: GroupElement) -> CosetTable:
        t = self._tables.get(n)
        if t is None:
            t = left_coset_table(self.K, self.chi, n, self.limit)
            self._tables[n] = t
        return t

    def supports(self, g: GroupElement, bases: Sequence[GroupElement] = (), max_level: int = 3) -> SupportResult:
        return supports(self.K, self.chi, g, bases, self.table, max_level)

    def basis(self, n: GroupElement, coeff: complex = 1) -> HeckeElement:
        if n.is_monomial() and not supports_monomial(self.K, self.chi, n).decision:
            raise ValueError("double coset does not support the Hecke algebra")
        return HeckeElement.from_table(self.table(n), self.chi, coeff)

    def unit(self) -> HeckeElement:
        return self.basis(GroupElement.identity())

    def rep(self, letter: str) -> GroupElement:
        return strip_generator_rep(self.case, letter, self.p)

    def word_rep(self, word: Sequence[str]) -> GroupElement:
        return word_rep(self.case, word, self.p)

    def f(self, letter: str) -> HeckeElement:
        return self.basis(self.rep(letter))

    def mu_nontrivial(self) -> bool:
        return self.chi.mu_torus == LEGENDRE

    def gauss(self, letter: str) -> complex:
        return gauss_sum(self.chi, letter)

    def normalizer(self, letter: str) -> complex:
        """c with e_s = f_s / c satisfying e_s^2 = q_s + (q_s - 1) e_s."""
        q = self.q
        if self.case == SL2xGL1:
            return self.gauss(letter) if self.mu_nontrivial() else q
        if letter == "alpha":
            return 1
        if not self.mu_nontrivial():
            return q
        return cmath.sqrt(self.chi.mu(h_root(ALPHA, -1)) * q**3)

    def quadratic_parameters(self) -> dict:
        """q_s per generator: q when the normalised relation has a linear term, else 1."""
        q = self.q
        if self.case == SL2xGL1:
            val = q if self.mu_nontrivial() else 1
            return {"delta": val, "1-delta": val}
        return {"n": 1 if self.mu_nontrivial() else q, "alpha": 1}

    def e(self, letter: str) -> HeckeElement:
        return self.f(letter) / self.normalizer(letter)

    def phi(self, word: Sequence[str]) -> HeckeElement:
        """phi(t_w) = e_{s_1} * ... * e_{s_k}."""
        word = tuple(word)
        out = self._phi.get(word)
        if out is None:
            out = self.unit() if not word else self.phi(word[:-1]) * self.e(word[-1])
            self._phi[word] = out
        return out

    def phi_abstract(self, x: "AbstractHeckeElement") -> HeckeElement:
        out = HeckeElement(self.K, self.chi)
        for word, c in x.terms.items():
            out = out + c * self.phi(word)
        return out

    def abstract(self, word: Sequence[str] = ()) -> "AbstractHeckeElement":
        return AbstractHeckeElement.basis(self.quadratic_parameters(), word)

    # expected structure constants
    def expected_square(self, letter: str) -> dict:
        """Coefficients of f_s * f_s on (1, f_s) as predicted by the closed formulas."""
        q, chi = self.q, self.chi
        if self.case == SL2xGL1:
            h = h_root(DELTA, -1) if letter == "delta" else h_root((-2, 0), -1)
            if self.mu_nontrivial():
                return {"1": chi.mu(h) * q**2, letter: (q - 1) * self.gauss(letter)}
            return {"1": q**2, letter: 0}
        if letter == "n":
            if self.mu_nontrivial():
                h = h_of(AffineRoot((0, -2), 1), -1, self.p) * h_root(DELTA, -1)
                return {"1": chi.mu(h) * q**3, "n": 0}
            return {"1": q**3, "n": q * (q - 1)}
        return {"1": chi.mu(h_root(ALPHA, -1)), "alpha": 0}


# ------------------------------------------------------------ structure constants

class StructureError(AssertionError):
    """A product had mass outside the predicted double cosets."""


@dataclass
class StructureResult:
    coefficients: dict
    outside_mass: float
    residual: float
    product: HeckeElement = field(repr=False)


def structure_constants(algebra: HeckeAlgebra, f: HeckeElement, g: HeckeElement,
                        candidates: dict, tol: float = 1e-6) -> StructureResult:
    """Expand f * g over the basis functions f_c of the candidate double cosets.

    ``candidates`` maps a label to the representative n_c; since f_c(n_c) = 1 and
    the double cosets are disjoint, the coefficient of f_c is (f*g)(n_c).
    Raises StructureError when f * g is nonzero off the candidates.
    """
    prod = f * g
    tables = {name: algebra.table(n) for name, n in candidates.items()}
    outside = 0.0
    for x, v in prod.items():
        if not any(x in t for t in tables.values()):
            outside = max(outside, abs(v))
    if outside > tol:
        raise StructureError(f"f * g has mass {outside:.3g} outside the candidate double cosets")
    coeffs = {name: prod(n) for name, n in candidates.items()}
    recon = HeckeElement(algebra.K, algebra.chi)
    for name, n in candidates.items():
        if abs(coeffs[name]) > tol:
            recon = recon + algebra.basis(n, coeffs[name])
    return StructureResult(coeffs, outside, prod.distance(recon), prod)


def square_candidates(algebra: HeckeAlgebra, letter: str) -> dict:
    return {"1": GroupElement.identity(), letter: algebra.rep(letter)}


# ------------------------------------------------------------ abstract algebra

def reduced_words(letters: Sequence[str], max_len: int) -> list:
    """Alternating words (reduced in the infinite dihedral group) up to max_len letters."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (s,) for w in frontier for s in letters if not w or w[-1] != s]
        out += frontier
    return out


class AbstractHeckeElement:
    """Element of the algebra generated by t_s with t_s^2 = q_s + (q_s - 1) t_s.

    The generators of W_psi have no braid relation, so the t_w for alternating
    words w form a basis and products reduce by the quadratic relations alone.
    """

    def __init__(self, params: dict, terms: Optional[dict] = None):
        self.params = dict(params)
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def basis(cls, params: dict, word: Sequence[str] = ()) -> "AbstractHeckeElement":
        word = tuple(word)
        if any(a == b for a, b in zip(word, word[1:])):
            raise ValueError("basis words must alternate")
        return cls(params, {word: 1})

    def _add_term(self, word: tuple, c) -> None:
        self.terms[word] = self.terms.get(word, 0) + c
        if self.terms[word] == 0:
            del self.terms[word]

    def _mul_words(self, u: tuple, v: tuple) -> dict:
        if not u or not v or u[-1] != v[0]:
            return {u + v: 1}
        # t_{u's} t_{s v'} = q t_{u'} t_{v'} + (q - 1) t_{u's} t_{v'}
        s = u[-1]
        q = self.params[s]
        out: dict = {}
        for w, c in self._mul_words(u[:-1], v[1:]).items():
            out[w] = out.get(w, 0) + q * c
        if q != 1:
            for w, c in self._mul_words(u, v[1:]).items():
                out[w] = out.get(w, 0) + (q - 1) * c
        return out

    def __mul__(self, other):
        if not isinstance(other, AbstractHeckeElement):
            return AbstractHeckeElement(self.params, {w: c * other for w, c in self.terms.items()})
        if other.params != self.params:
            raise ValueError("parameters differ")
        out = AbstractHeckeElement(self.params)
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                for w, c in self._mul_words(u, v).items():
                    out._add_term(w, a * b * c)
        return out

    __rmul__ = __mul__

    def __add__(self, other: "AbstractHeckeElement") -> "AbstractHeckeElement":
        out = AbstractHeckeElement(self.params, self.terms)
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, AbstractHeckeElement) and self.params == other.params \
            and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t{list(w)}" if w else f"{c}" for w, c in sorted(self.terms.items()))


def abstract_multiply(x: AbstractHeckeElement, y: AbstractHeckeElement) -> AbstractHeckeElement:
    return x * y


# ------------------------------------------------------------ isomorphism check

@dataclass
class IsoRow:
    word: tuple
    cosets: int
    expected_cosets: int
    single_coset: bool
    value_at_rep: complex

    @property
    def ok(self) -> bool:
        return self.single_coset and self.cosets == self.expected_cosets and abs(self.value_at_rep) > 1e-9


def iso_check(algebra: HeckeAlgebra, length_bound: int) -> list:
    """phi(t_w) for reduced words w with at most ``length_bound`` letters.

    Each image must be nonzero and fill exactly the double coset K n_w K, whose
    size must be the product of the generator coset counts (volumes multiply).
    """
    if length_bound < 1:
        raise ValueError("length_bound must be >= 1")
    rows = []
    for word in reduced_words(algebra.letters, length_bound):
        img = algebra.phi(word)
        n = algebra.word_rep(word)
        table = algebra.table(n)
        support = img.items()
        expected = 1
        for s in word:
            expected *= len(algebra.table(algebra.rep(s)))
        single = len(support) == len(table) and all(x in table for x, _ in support)
        rows.append(IsoRow(word, len(table), expected, single, img(n)))
    return rows


def abstract_agreement(algebra: HeckeAlgebra, total_length: int) -> list:
    """(u, v, residual): |phi(t_u) * phi(t_v) - phi(t_u t_v)| for |u| + |v| <= total_length."""
    words = reduced_words(algebra.letters, total_length)
    rows = []
    for u in words:
        for v in words:
            if len(u) + len(v) > total_length:
                continue
            lhs = algebra.phi(u) * algebra.phi(v)
            rhs = algebra.phi_abstract(abstract_multiply(algebra.abstract(u), algebra.abstract(v)))
            rows.append((u, v, lhs.distance(rhs)))
    return rows


# ------------------------------------------------------------ product classes

def product_coset_classes(algebra: HeckeAlgebra, n1: GroupElement, n2: GroupElement,
                          candidates: dict, alcove: str = "sigma") -> dict:
    """Distribute the left K-cosets of K n1 K n2 K over Iwahori cells I w I.

    ``candidates`` maps labels to affine Weyl elements.  Returns the number of
    distinct K-cosets per label, plus "unclassified" for cosets in none of the
    candidate cells.  Since K lies in I, z in K n3 K gives n3 in I w I, which
    pins the Weyl class of n3 to w.
    """
    I = iwahori(algebra.p, alcove)
    if not all(I.contains(g) for g in algebra.K.generators()):
        raise ValueError("the Iwahori subgroup must contain K")
    cells = {name: left_coset_table(I, None, lift_weyl(w, algebra.p), algebra.limit)
             for name, w in candidates.items()}
    t1, t2 = algebra.table(n1), algebra.table(n2)
    registry = HeckeElement(algebra.K, algebra.chi)
    counts = {name: 0 for name in candidates}
    counts["unclassified"] = 0
    for x in t1.elements():
        for y in t2.elements():
            z = x * y
            if registry.locate(z) is not None:
                continue
            registry.add_at(z, 1)
            label = next((name for name, cell in cells.items() if z in cell), "unclassified")
            counts[label] += 1
    return counts


def product_cases(case: str) -> list:
    """(generator, Iwahori alcove, candidate cells) for each product check.

    The Iwahori is chosen so that the generator's Weyl element is simple or a
    product of two commuting simple reflections there.
    """
    ident = AffineWeylElement.identity()
    if case == SL2xGL1:
        return [
            ("delta", "sigma_prime", {"1": ident, "w_delta": W_DELTA}),
            ("1-delta", "sigma", {"1": ident, "w_1-delta": W_ONE_MINUS_DELTA}),
        ]
    return [("n", "sigma_prime", {"1": ident, "w_delta": W_DELTA, "w_1-beta": W_ONE_MINUS_BETA,
                                   "w_delta w_1-beta": W_N})]


# ------------------------------------------------------------ support sweep

@dataclass
class SweepRow:
    weyl: AffineWeylElement
    torus: tuple
    u: int
    v: int
    decision: Optional[bool]
    expected: bool
    witness_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        if self.decision is None or self.decision != self.expected:
            return False
        return self.decision or bool(self.witness_ok)


def support_sweep(case: str, p: int, max_length: int = 4, max_level: int = 3,
                  multipliers: Sequence[int] = (1, 1)) -> list:
    """Support test on g = x_alpha(u) n t x_alpha(v) in the weak algebra H(K^+, psi).

    n runs over lifts of affine Weyl elements of Coxeter length <= max_length,
    t over diag(+-1, +-1) and u, v over F_p.  The expected answer is membership
    of g in K^+ n' K^+ for some n' = n t' in N_psi (strip preserved and psi
    preserved on the active factors); since x_alpha(u) lies in the Iwahori
    subgroup, no other element of N can carry g.
    """
    chi = make_character(case, p, multipliers=multipliers)
    alg = HeckeAlgebra(chi, strong=False)
    K = alg.K
    signs = [GroupElement.diagonal(a, b) for a in (1, -1) for b in (1, -1)]
    units = [GroupElement.diagonal(a, b) for a in range(1, p) for b in range(1, p)]
    rows = []
    for w in enumerate_weyl(max_length):
        n0 = lift_weyl(w, p)
        bases = [n0 * t for t in units]
        in_psi = [in_N_psi(chi, b) for b in bases]
        for t in signs:
            n = n0 * t
            for u in range(p):
                for v in range(p):
                    g = x_root(ALPHA, u) * n * x_root(ALPHA, v)
                    res = alg.supports(g, bases, max_level)
                    expected = any(ok and g in alg.table(b) for ok, b in zip(in_psi, bases))
                    wok = verify_witness(K, chi, g, res) if res.decision is False else None
                    rows.append(SweepRow(w, (int(t[0, 0]), int(t[1, 1])), u, v, res.decision, expected, wok))
    return rows
