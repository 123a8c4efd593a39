"""Type C root data, affine roots, the affine Weyl group, and the two strips.

Points of the apartment E = Q^n are tuples of Fractions.  Everything here is
exact: an affine root evaluates to a Fraction, a Weyl element is a signed
permutation plus an integer translation.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple[int, ...] or tuple[Fraction, ...]

SL2xGL1 = "SL2xGL1"
GL2 = "GL2"
CASES = (SL2xGL1, GL2)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _unit(n: int, i: int, c: int = 1) -> tuple:
    return tuple(c if k == i else 0 for k in range(n))


@dataclass(frozen=True)
class RootSystemC:
    """Root system of type C_n realised in Z^n."""

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def simple_roots(self) -> list[tuple]:
        n = self.rank
        out = [tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n)) for i in range(n - 1)]
        out.append(_unit(n, n - 1, 2))
        return out

    @property
    def highest_root(self) -> tuple:
        return _unit(self.rank, 0, 2)

    @property
    def coxeter_number(self) -> int:
        return 2 * self.rank

    @property
    def roots(self) -> list[tuple]:
        n = self.rank
        out = []
        for i in range(n):
            out.append(_unit(n, i, 2))
            out.append(_unit(n, i, -2))
        for i, j in itertools.combinations(range(n), 2):
            for si, sj in itertools.product((1, -1), repeat=2):
                v = [0] * n
                v[i], v[j] = si, sj
                out.append(tuple(v))
        return out

    @property
    def simple_affine_roots(self) -> list["AffineRoot"]:
        simple = [AffineRoot(a, 0) for a in self.simple_roots]
        return simple + [AffineRoot(self.highest_root, 0).complement()]


C2 = RootSystemC(2)

# Named roots of C_2 in the e-basis.
ALPHA = (1, -1)
BETA = (0, 2)
DELTA = (2, 0)
ETA = (1, 1)  # e1 + e2 = alpha + beta, also written gamma in the SL2xGL1 case
ROOT_NAMES = {
    ALPHA: "alpha", BETA: "beta", DELTA: "delta", ETA: "e1+e2",
    (-1, 1): "-alpha", (0, -2): "-beta", (-2, 0): "-delta", (-1, -1): "-(e1+e2)",
}


@dataclass(frozen=True, order=True)
class AffineRoot:
    """The affine functional x -> <gradient, x> + level."""

    gradient: tuple
    level: int = 0

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != len(self.gradient):
            raise ValueError(f"point of dimension {len(x)} for root of rank {len(self.gradient)}")
        return Fraction(_dot(self.gradient, x)) + self.level

    def __neg__(self) -> "AffineRoot":
        return AffineRoot(tuple(-c for c in self.gradient), -self.level)

    def shift(self, k: int) -> "AffineRoot":
        return AffineRoot(self.gradient, self.level + k)

    def complement(self, k: int = 1) -> "AffineRoot":
        """The root k - self."""
        return (-self).shift(k)

    def coroot(self) -> tuple:
        a = self.gradient
        norm = _dot(a, a)
        return tuple(Fraction(2 * c, norm) for c in a)

    def __str__(self) -> str:
        name = ROOT_NAMES.get(self.gradient, str(self.gradient))
        if self.level == 0:
            return name
        if name.startswith("-"):
            return f"{self.level}{name}"
        return f"{name}+{self.level}"


def ar(gradient: Sequence[int], level: int = 0) -> AffineRoot:
    return AffineRoot(tuple(gradient), level)


@dataclass(frozen=True)
class AffineWeylElement:
    """x -> linear @ x + translation, linear a signed permutation matrix."""

    linear: tuple  # rows of a signed permutation matrix
    translation: tuple

    @classmethod
    def identity(cls, n: int = 2) -> "AffineWeylElement":
        return cls(tuple(_unit(n, i) for i in range(n)), (0,) * n)

    @property
    def rank(self) -> int:
        return len(self.translation)

    def __call__(self, x: Sequence) -> tuple:
        return tuple(Fraction(_dot(row, x)) + t for row, t in zip(self.linear, self.translation))

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        n = self.rank
        lin = tuple(
            tuple(sum(self.linear[i][k] * other.linear[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        trans = tuple(_dot(self.linear[i], other.translation) + self.translation[i] for i in range(n))
        return AffineWeylElement(lin, _normalize(trans))

    def inverse(self) -> "AffineWeylElement":
        n = self.rank
        lin_t = tuple(tuple(self.linear[j][i] for j in range(n)) for i in range(n))
        trans = tuple(-_dot(row, self.translation) for row in lin_t)
        return AffineWeylElement(lin_t, _normalize(trans))

    def act_on_root(self, psi: AffineRoot) -> AffineRoot:
        """The root x -> psi(w^-1 x)."""
        n = self.rank
        grad = tuple(sum(self.linear[i][k] * psi.gradient[k] for k in range(n)) for i in range(n))
        level = psi.level - _dot(grad, self.translation)
        if Fraction(level).denominator != 1:
            raise ValueError("non-integral level: translation is off the coroot lattice")
        return AffineRoot(grad, int(level))

    def is_identity(self) -> bool:
        return self == AffineWeylElement.identity(self.rank)


def _normalize(vec) -> tuple:
    out = []
    for c in vec:
        c = Fraction(c)
        out.append(int(c) if c.denominator == 1 else c)
    return tuple(out)


def reflection(psi: AffineRoot) -> AffineWeylElement:
    """Orthogonal reflection in the wall psi = 0."""
    a = psi.gradient
    n = len(a)
    cor = psi.coroot()
    lin = tuple(tuple(_unit(n, i)[j] - cor[i] * a[j] for j in range(n)) for i in range(n))
    trans = tuple(-psi.level * c for c in cor)
    return AffineWeylElement(tuple(_normalize(r) for r in lin), _normalize(trans))


def eval_affine_root(psi: AffineRoot, x: Sequence) -> Fraction:
    return psi(x)


def simple_reflections(system: RootSystemC = C2) -> list[AffineWeylElement]:
    return [reflection(psi) for psi in system.simple_affine_roots]


def enumerate_weyl(max_length: int, system: RootSystemC = C2) -> dict[AffineWeylElement, int]:
    """Affine Weyl elements of Coxeter length <= max_length, with their length."""
    gens = simple_reflections(system)
    ident = AffineWeylElement.identity(system.rank)
    seen = {ident: 0}
    frontier = [ident]
    for length in range(1, max_length + 1):
        nxt = []
        for w in frontier:
            for s in gens:
                v = w * s
                if v not in seen:
                    seen[v] = length
                    nxt.append(v)
        frontier = nxt
    return seen


# ---------------------------------------------------------------- regions

@dataclass(frozen=True)
class Region:
    """Open convex region {x : psi(x) > 0 for psi in positive_roots}."""

    kind: str
    positive_roots: frozenset

    def contains(self, x: Sequence) -> bool:
        return all(psi(x) > 0 for psi in self.positive_roots)

    def image(self, w: AffineWeylElement) -> "Region":
        return Region(self.kind, frozenset(w.act_on_root(psi) for psi in self.positive_roots))

    def inequalities(self) -> list[tuple[AffineRoot, int]]:
        return sorted((psi, 1) for psi in self.positive_roots)

    def corners(self) -> list[tuple]:
        """Vertices of a bounded region in rank 2 (pairwise wall intersections)."""
        pts = set()
        for a, b in itertools.combinations(self.positive_roots, 2):
            pt = _intersect(a, b)
            if pt is not None and all(psi(pt) >= 0 for psi in self.positive_roots):
                pts.add(pt)
        return sorted(pts)


def _intersect(a: AffineRoot, b: AffineRoot) -> Optional[tuple]:
    (a1, a2), (b1, b2) = a.gradient, b.gradient
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    x = Fraction(-a.level * b2 + b.level * a2, det)
    y = Fraction(-a1 * b.level + b1 * a.level, det)
    return (x, y)


def _region(kind: str, *roots: AffineRoot) -> Region:
    return Region(kind, frozenset(roots))


SIGMA = _region("alcove sigma", ar(ALPHA), ar(BETA), ar(DELTA).complement())
SIGMA_PRIME = _region("alcove sigma'", -ar(ALPHA), ar(DELTA), ar(BETA).complement())
RHO = _region("union rho", ar(DELTA), ar(BETA), ar(DELTA).complement(), ar(BETA).complement())
HORIZONTAL_STRIP = _region("horizontal strip", ar(BETA), ar(BETA).complement())
DIAGONAL_STRIP = _region("diagonal strip", ar(ETA), ar(ETA).complement())

P_POINT = (Fraction(1, 4), Fraction(1, 4))
BARYCENTER = (Fraction(3, 8), Fraction(1, 8))


def strip(case: str) -> Region:
    if case == SL2xGL1:
        return HORIZONTAL_STRIP
    if case == GL2:
        return DIAGONAL_STRIP
    raise ValueError(f"unknown case {case!r}")


def preserves_strip(w: AffineWeylElement, case: str) -> bool:
    s = strip(case)
    return s.image(w).positive_roots == s.positive_roots


def positive_on(psi: AffineRoot, region: Region) -> bool:
    """psi > 0 on the whole (bounded, open) region."""
    return all(psi(c) >= 0 for c in region.corners())


# ------------------------------------------------- strip stabilizers (W_psi)

W_DELTA = reflection(ar(DELTA))
W_ONE_MINUS_DELTA = reflection(ar(DELTA).complement())
W_ALPHA = reflection(ar(ALPHA))
W_ONE_MINUS_BETA = reflection(ar(BETA).complement())
W_N = W_DELTA * W_ONE_MINUS_BETA

# Generators of W_psi with their contribution to gallery length.
STRIP_GENERATORS = {
    SL2xGL1: {"delta": (W_DELTA, 1), "1-delta": (W_ONE_MINUS_DELTA, 1)},
    GL2: {"n": (W_N, 1), "alpha": (W_ALPHA, 0)},
}


def strip_words(case: str, length_bound: int) -> list[tuple[str, ...]]:
    """Reduced (alternating) words in the strip generators of gallery length <= bound."""
    letters = list(STRIP_GENERATORS[case])
    weight = {k: v[1] for k, v in STRIP_GENERATORS[case].items()}
    words = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for word in frontier:
            for s in letters:
                if word and word[-1] == s:
                    continue
                new = word + (s,)
                if sum(weight[c] for c in new) > length_bound:
                    continue
                # a weight-0 letter can only be inserted between weighted ones
                if len(new) > 2 * length_bound + 1:
                    continue
                words.append(new)
                nxt.append(new)
        frontier = nxt
    return words


def word_element(case: str, word: Iterable[str]) -> AffineWeylElement:
    w = AffineWeylElement.identity()
    for s in word:
        w = w * STRIP_GENERATORS[case][s][0]
    return w


def strip_stabilizer_elements(case: str, length_bound: int) -> list[AffineWeylElement]:
    if length_bound < 0:
        raise ValueError("length_bound must be >= 0")
    out = []
    for word in strip_words(case, length_bound):
        w = word_element(case, word)
        if w not in out:
            out.append(w)
    return out


def reduced_word(w: AffineWeylElement, case: str, search_bound: int = 12) -> tuple[str, ...]:
    """Shortest word in the strip generators representing w (BFS)."""
    if not preserves_strip(w, case):
        raise ValueError("element does not preserve the strip")
    target = w
    ident = AffineWeylElement.identity()
    queue = deque([(ident, ())])
    seen = {ident}
    while queue:
        v, word = queue.popleft()
        if v == target:
            return word
        if len(word) >= search_bound:
            continue
        for s, (g, _) in STRIP_GENERATORS[case].items():
            u = v * g
            if u not in seen:
                seen.add(u)
                queue.append((u, word + (s,)))
    raise ValueError("word search bound exhausted")


def _square_offset(w: AffineWeylElement) -> int:
    """Index j of the half-unit square w(rho) along the strip."""
    corners = RHO.image(w).corners()
    return int(2 * min(c[0] for c in corners))


def gallery_length(w: AffineWeylElement, case: str) -> int:
    """Number of half-unit squares crossed from rho to w(rho) inside the strip.

    Computed from the reduced word in the strip generators and checked
    against the position of w(rho).
    """
    word = reduced_word(w, case)
    weight = {k: v[1] for k, v in STRIP_GENERATORS[case].items()}
    m = sum(weight[s] for s in word)
    geometric = abs(_square_offset(w))
    if m != geometric:
        raise AssertionError(f"word length {m} != geometric gallery length {geometric}")
    return m


def wall_crossing_roots(w: AffineWeylElement, case: str) -> set[AffineRoot]:
    """Affine roots positive on rho but not on all of w(rho)."""
    if not preserves_strip(w, case):
        raise ValueError("element does not preserve the strip")
    image = RHO.image(w)
    reach = max(abs(c) for pt in image.corners() + RHO.corners() for c in pt)
    bound = int(4 * reach) + 4
    out = set()
    for a in C2.roots:
        for k in range(-bound, bound + 1):
            psi = AffineRoot(a, k)
            if positive_on(psi, RHO) and not positive_on(psi, image):
                out.add(psi)
    return out


# ------------------------------------------------------- Levi common point

@dataclass(frozen=True)
class LeviShape:
    """GL(n_1) x ... x GL(n_r) x Sp(2m) inside Sp(2n)."""

    gl_blocks: tuple
    sp_half_rank: int
    ambient_rank: int = field(default=0)

    def __post_init__(self):
        if any(b < 1 for b in self.gl_blocks) or self.sp_half_rank < 0:
            raise ValueError("block sizes must be positive")
        total = sum(self.gl_blocks) + self.sp_half_rank
        if self.ambient_rank == 0:
            object.__setattr__(self, "ambient_rank", total)
        elif total != self.ambient_rank:
            raise ValueError(f"blocks sum to {total}, not {self.ambient_rank}")

    def __str__(self) -> str:
        parts = [f"GL({b})" for b in self.gl_blocks]
        if self.sp_half_rank:
            parts.append(f"Sp({2 * self.sp_half_rank})")
        return " x ".join(parts) or "trivial"

    def simple_affine_roots(self) -> list[AffineRoot]:
        n = self.ambient_rank
        roots = []
        start = 0
        for b in self.gl_blocks:
            idx = list(range(start, start + b))
            if b > 1:
                for i, j in zip(idx, idx[1:]):
                    roots.append(AffineRoot(_diff(n, i, j), 0))
                roots.append(AffineRoot(_diff(n, idx[0], idx[-1]), 0).complement())
            start += b
        m = self.sp_half_rank
        if m:
            idx = list(range(start, n))
            for i, j in zip(idx, idx[1:]):
                roots.append(AffineRoot(_diff(n, i, j), 0))
            roots.append(AffineRoot(_unit(n, idx[-1], 2), 0))
            roots.append(AffineRoot(_unit(n, idx[0], 2), 0).complement())
        return roots


def _diff(n: int, i: int, j: int) -> tuple:
    return tuple(1 if k == i else -1 if k == j else 0 for k in range(n))


@dataclass(frozen=True)
class LeviSolution:
    point: tuple  # a particular solution
    directions: tuple  # basis of the solution space's direction
    value: Fraction

    def contains(self, x: Sequence, roots: Sequence[AffineRoot]) -> bool:
        return all(psi(x) == self.value for psi in roots)


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Exact Gauss-Jordan; returns (particular, nullspace basis) or None."""
    ncols = len(rows[0]) if rows else 0
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in mat):
        return None
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = mat[i][-1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -mat[i][f]
        basis.append(tuple(v))
    return tuple(particular), basis


def levi_common_point(shape: LeviShape) -> Optional[LeviSolution]:
    """Points where all simple affine roots of the Levi take one common value.

    Unknowns are (x_1..x_n, c) with psi(x) = c for each simple affine root.
    Returns None when the system is inconsistent, or when the Levi has no
    roots at all (a torus has no common value to speak of).
    """
    roots = shape.simple_affine_roots()
    if not roots:
        return None
    n = shape.ambient_rank
    rows = [[Fraction(g) for g in psi.gradient] + [Fraction(-1)] for psi in roots]
    rhs = [Fraction(-psi.level) for psi in roots]
    sol = _solve(rows, rhs)
    if sol is None:
        return None
    particular, basis = sol
    if any(v[n] != 0 for v in basis):
        raise AssertionError("common value is not determined by the system")
    value = particular[n]
    if value <= 0:
        return None
    return LeviSolution(particular[:n], tuple(v[:n] for v in basis), value)


def levi_shapes(n: int) -> list[LeviShape]:
    """All Levi shapes of Sp(2n) up to ordering conventions (ordered GL blocks)."""
    out = []
    for m in range(n + 1):
        for comp in _compositions(n - m):
            out.append(LeviShape(tuple(comp), m, n))
    return out


def _compositions(k: int) -> list[list[int]]:
    if k == 0:
        return [[]]
    out = []
    for first in range(1, k + 1):
        for rest in _compositions(k - first):
            out.append([first] + rest)
    return out


def predicted_admissible(shape: LeviShape) -> bool:
    """Closed-form classification: all factors carrying roots share one Coxeter number.

    GL(k) has Coxeter number k and Sp(2m) has 2m; GL(1) carries no root and
    imposes nothing.  At least one factor must carry roots.
    """
    numbers = {b for b in shape.gl_blocks if b > 1}
    if shape.sp_half_rank:
        numbers.add(2 * shape.sp_half_rank)
    return len(numbers) == 1
