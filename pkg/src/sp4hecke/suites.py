"""Verification suites: each returns report rows comparing computed and expected values.

The CLI and the acceptance tests both drive these functions.
"""

from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .affine import (
    GL2,
    SL2xGL1,
    AffineRoot,
    C2,
    gallery_length,
    levi_common_point,
    levi_shapes,
    predicted_admissible,
    reduced_word,
    strip_stabilizer_elements,
    wall_crossing_roots,
)
from .chevalley import classify_commutator, commutation_rule_holds, h_root, x_affine
from .filtration import (
    LEGENDRE,
    TRIVIAL,
    closure_mod_p2,
    commutator_defects,
    cayley_element,
    k_plus,
    k_plus_plus,
    make_character,
    normality_defects,
    quotient_factors,
    quotient_order,
)
from .hecke import (
    HeckeAlgebra,
    abstract_agreement,
    gauss_sum,
    iso_check,
    product_coset_classes,
    product_cases,
    random_group_element,
    square_candidates,
    structure_constants,
    support_sweep,
    word_rep,
)
from .scalars import is_odd_prime

SUITES = ("subgroups", "support", "length", "gauss", "structure", "iso")
LENGTH_CAP = 4


@dataclass
class Row:
    anchor: str
    computed: Any
    expected: Any
    abs_error: Optional[float] = None
    passed: bool = True
    inconclusive: bool = False

    def as_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "computed": _plain(self.computed),
            "expected": _plain(self.expected),
            "abs_error": self.abs_error,
            "pass": self.passed,
        }


def _plain(x):
    """JSON-friendly form: complex numbers become [re, im] rounded to 12 digits."""
    if isinstance(x, complex):
        return [round(x.real, 12) + 0.0, round(x.imag, 12) + 0.0]
    if isinstance(x, float):
        return round(x, 12)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def exact_row(anchor: str, computed, expected) -> Row:
    return Row(anchor, computed, expected, None, computed == expected)


def numeric_row(anchor: str, computed: complex, expected: complex, tol: float) -> Row:
    err = abs(complex(computed) - complex(expected))
    return Row(anchor, complex(computed), complex(expected), err, err <= tol)


@dataclass
class RunConfig:
    prime: int = 3
    case: str = SL2xGL1
    mu: str = TRIVIAL
    mu_center: str = TRIVIAL
    length_bound: Optional[int] = None
    multipliers: Sequence[int] = (1, 1)
    tolerance: float = 1e-6
    seed: int = 0
    length_cap: int = LENGTH_CAP

    def __post_init__(self):
        if not is_odd_prime(self.prime):
            raise ValueError(f"prime must be an odd prime, got {self.prime}")
        if self.case not in (SL2xGL1, GL2):
            raise ValueError(f"unknown case {self.case!r}")
        if self.mu not in (TRIVIAL, LEGENDRE):
            raise ValueError("mu must be 'trivial' or 'legendre'")
        if self.length_bound is not None and not 1 <= self.length_bound <= self.length_cap:
            raise ValueError(f"length bound must lie in 1..{self.length_cap}")
        if any(m % self.prime == 0 for m in self.multipliers):
            raise ValueError("multipliers must be units mod p")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def character(self):
        return make_character(self.case, self.prime, self.mu, self.mu_center, self.multipliers)

    def as_dict(self) -> dict:
        return {
            "prime": self.prime, "case": self.case, "mu": self.mu, "mu_center": self.mu_center,
            "length_bound": self.length_bound, "multipliers": list(self.multipliers),
            "tolerance": self.tolerance, "seed": self.seed,
        }


# ------------------------------------------------------------ levi

def levi_rows(max_rank: int = 6) -> list:
    """Solver against the closed-form classification and the two dichotomies."""
    rows = []
    for n in range(1, max_rank + 1):
        for shape in levi_shapes(n):
            sol = levi_common_point(shape)
            admissible = sol is not None
            rows.append(exact_row(f"Sp({2 * n}) Levi {shape}: common point exists",
                                  admissible, predicted_admissible(shape)))
            big = [b for b in shape.gl_blocks if b > 1]
            m = shape.sp_half_rank
            if admissible and len(set(big)) > 1:
                rows.append(exact_row(f"{shape}: GL(a) x GL(b) forces a = b", False, True))
            if admissible and big and m > 1:
                rows.append(exact_row(f"{shape}: GL(a) x Sp(2m) forces a = 2m",
                                      all(b == 2 * m for b in big), True))
    return rows


# ------------------------------------------------------------ subgroups

def subgroup_rows(cfg: RunConfig) -> list:
    p = cfg.prime
    Kp, Kpp = k_plus(p), k_plus_plus(p)
    rng = random.Random(cfg.seed)
    rows = [
        exact_row("K+/K++ order", quotient_order(Kp, Kpp), p**6),
        exact_row("K+/K++ factors", sorted(str(f) for f in quotient_factors(Kp, Kpp)),
                  sorted(["beta", "delta", "e1+e2", "1-beta", "1-delta", "1-(e1+e2)"])),
        exact_row("K++ normal in K+ (generator conjugates)", len(normality_defects(Kp, Kpp)), 0),
        exact_row("[K+, K+] in K++ (generator commutators)", len(commutator_defects(Kp, Kpp)), 0),
    ]
    if p == 3:
        big, small = closure_mod_p2(Kp), closure_mod_p2(Kpp)
        rows.append(exact_row("closure index mod p^2", len(big) // len(small), p**6))
    chi = cfg.character()
    worst = 0.0
    for _ in range(50):
        g, h = cayley_element(Kp, rng), cayley_element(Kp, rng)
        worst = max(worst, abs(chi(g * h) - chi(g) * chi(h)))
        k = cayley_element(Kpp, rng)
        worst = max(worst, abs(chi(g * k) - chi(g)))
    rows.append(Row("chi multiplicative and trivial on K++ (sampled)", worst, 0.0, worst, worst <= 1e-9))
    return rows


def commutation_rows(p: int = 3, max_level: int = 2) -> list:
    """One row per commutator class; opposite pairs with level sum <= 0 carry no rule."""
    roots = [AffineRoot(a, k) for a in C2.roots for k in range(-max_level, max_level + 1)]
    checked: dict = {}
    failed: dict = {}
    for g1, g2 in itertools.product(roots, repeat=2):
        tag = classify_commutator(g1, g2)[0]
        for u, v in itertools.product(range(1, p), repeat=2):
            r = commutation_rule_holds(g1, g2, u, v, p)
            if r is None:
                continue
            checked[tag] = checked.get(tag, 0) + 1
            failed[tag] = failed.get(tag, 0) + (not r)
    return [exact_row(f"{tag} commutators in the predicted subgroup ({checked[tag]} checked)",
                      failed[tag], 0) for tag in sorted(checked)]


def gl2_symmetry_rows(p: int, multipliers: Sequence[int] = (1, 1)) -> list:
    chi = make_character(GL2, p, multipliers=multipliers)
    eta, one_minus = AffineRoot((1, 1), 0), AffineRoot((-1, -1), 1)
    worst = max(abs(chi(x_affine(eta, a, p)) - chi(x_affine(one_minus, a, p))) for a in range(p))
    return [Row(f"chi(x_eta(a)) = chi(x_(1-eta)(a)), p={p}", worst, 0.0, worst, worst <= 1e-9)]


# ------------------------------------------------------------ support

def support_rows(cfg: RunConfig) -> list:
    bound = cfg.length_bound or 4
    sweep = support_sweep(cfg.case, cfg.prime, bound, multipliers=cfg.multipliers)
    rows = []
    by_weyl: dict = {}
    for r in sweep:
        by_weyl.setdefault(r.weyl, []).append(r)
    for w, rs in by_weyl.items():
        inconclusive = sum(r.decision is None for r in rs)
        wrong = sum(not r.ok for r in rs) - inconclusive
        pos = sum(bool(r.decision) for r in rs)
        row = exact_row(f"support sweep at {w}: supported/total, wrong or unwitnessed",
                        (pos, len(rs), wrong), (sum(r.expected for r in rs), len(rs), 0))
        if inconclusive:
            row.passed, row.inconclusive = False, True
        rows.append(row)
    return rows


# ------------------------------------------------------------ length

def length_rows(cfg: RunConfig) -> list:
    p, case = cfg.prime, cfg.case
    bound = cfg.length_bound or (3 if case == SL2xGL1 else 2)
    factor = 2 if case == SL2xGL1 else 3
    chi = cfg.character()
    weak, strong = HeckeAlgebra(chi, strong=False), HeckeAlgebra(chi)
    rows = []
    for w in strip_stabilizer_elements(case, bound):
        m = gallery_length(w, case)
        word = reduced_word(w, case)
        n = word_rep(case, word, p)
        rows.append(exact_row(f"|K+ n K+ / K+| for {'.'.join(word) or '1'} (m={m})",
                              len(weak.table(n)), p ** (factor * m)))
        rows.append(exact_row(f"|K n K / K| for {'.'.join(word) or '1'} (m={m})",
                              len(strong.table(n)), p ** (factor * m)))
    for w in strip_stabilizer_elements(case, LENGTH_CAP):
        m = gallery_length(w, case)
        rows.append(exact_row(f"wall crossings for gallery length {m}: {w}",
                              len(wall_crossing_roots(w, case)), factor * m))
    return rows


# ------------------------------------------------------------ gauss

def gauss_rows(cfg: RunConfig) -> list:
    if cfg.case != SL2xGL1:
        return []
    p, tol = cfg.prime, min(cfg.tolerance, 1e-9)
    chi = cfg.character()
    rows = []
    for which, h in (("delta", h_root((2, 0), -1)), ("1-delta", h_root((-2, 0), -1))):
        G = gauss_sum(chi, which)
        if cfg.mu == LEGENDRE:
            rows.append(numeric_row(f"G_{which}^2 = mu(h(-1)) q", G * G, chi.mu(h) * p, tol))
            rows.append(numeric_row(f"|G_{which}|^2 = q", abs(G) ** 2, p, tol))
        else:
            rows.append(numeric_row(f"G_{which} = -1 for trivial mu", G, -1, tol))
    if p == 3 and cfg.mu == LEGENDRE and tuple(cfg.multipliers) == (1, 1):
        zeta = cmath.exp(2j * cmath.pi / 3)
        oracle = zeta - zeta**2  # Legendre(1) zeta^1 + Legendre(2) zeta^2
        rows.append(numeric_row("G_delta = i sqrt(3) (two-term oracle)", gauss_sum(chi), oracle, tol))
        rows.append(numeric_row("two-term oracle = i sqrt(3)", oracle, 1j * 3**0.5, tol))
    return rows


# ------------------------------------------------------------ structure constants

def structure_rows(cfg: RunConfig, with_products: bool = True) -> list:
    alg = HeckeAlgebra(cfg.character())
    tol = cfg.tolerance
    rows = []
    for s in alg.letters:
        res = structure_constants(alg, alg.f(s), alg.f(s), square_candidates(alg, s), tol)
        expected = alg.expected_square(s)
        for name, c in res.coefficients.items():
            label = "1" if name == "1" else f"f_{name}"
            rows.append(numeric_row(f"f_{s} * f_{s}: coefficient of {label}", c, expected[name], tol))
        rows.append(Row(f"f_{s} * f_{s}: residual after expansion", res.residual, 0.0,
                        res.residual, res.residual <= tol))
    if with_products and cfg.prime == 3:
        for letter, alcove, cands in product_cases(cfg.case):
            n = alg.rep(letter)
            counts = product_coset_classes(alg, n, n, cands, alcove)
            rows.append(exact_row(f"K n_{letter} K n_{letter} K: cosets outside the candidate cells",
                                  counts["unclassified"], 0))
    return rows


# ------------------------------------------------------------ iso

def iso_rows(cfg: RunConfig) -> list:
    alg = HeckeAlgebra(cfg.character())
    bound = cfg.length_bound or (3 if cfg.case == SL2xGL1 else 2)
    tol = cfg.tolerance
    rows = []
    for s, q_s in alg.quadratic_parameters().items():
        e = alg.e(s)
        rhs = q_s * alg.unit() + (q_s - 1) * e
        d = (e * e).distance(rhs)
        rows.append(Row(f"e_{s}^2 = {q_s} + {q_s - 1} e_{s}", d, 0.0, d, d <= tol))
    for r in iso_check(alg, bound):
        name = ".".join(r.word) or "1"
        rows.append(exact_row(f"phi(t_{name}): cosets, single double coset, nonzero",
                              (r.cosets, r.single_coset, abs(r.value_at_rep) > 1e-9),
                              (r.expected_cosets, True, True)))
    worst = max(d for _, _, d in abstract_agreement(alg, bound))
    rows.append(Row(f"phi(t_u) phi(t_v) = phi(t_u t_v), |u|+|v| <= {bound}", worst, 0.0, worst, worst <= tol))
    return rows


def associativity_rows(cfg: RunConfig, points: int = 10) -> list:
    """(f*g)*h = f*(g*h) at random points, generators including the unit."""
    alg = HeckeAlgebra(cfg.character())
    rng = random.Random(cfg.seed)
    gens = [alg.unit()] + [alg.f(s) for s in alg.letters]
    reps = [alg.rep(s) for s in alg.letters]
    worst = 0.0
    for _ in range(points):
        f, g, h = (rng.choice(gens) for _ in range(3))
        base = rng.choice(reps) * rng.choice(reps)
        x = random_group_element(alg.K, rng) * base * random_group_element(alg.K, rng)
        worst = max(worst, abs(((f * g) * h)(x) - (f * (g * h))(x)))
    return [Row("associativity at random points", worst, 0.0, worst, worst <= cfg.tolerance)]


RUNNERS = {
    "subgroups": lambda cfg: subgroup_rows(cfg) + (commutation_rows(cfg.prime) if cfg.prime == 3 else []),
    "support": support_rows,
    "length": length_rows,
    "gauss": gauss_rows,
    "structure": lambda cfg: structure_rows(cfg) + associativity_rows(cfg),
    "iso": iso_rows,
}


def run_suite(name: str, cfg: RunConfig) -> list:
    if name == "all":
        return [row for suite in SUITES for row in RUNNERS[suite](cfg)]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}")
    return RUNNERS[name](cfg)


__all__ = [
    "Row", "RunConfig", "SUITES", "LENGTH_CAP", "run_suite", "exact_row", "numeric_row",
    "levi_rows", "subgroup_rows", "commutation_rows", "gl2_symmetry_rows", "support_rows",
    "length_rows", "gauss_rows", "structure_rows", "iso_rows", "associativity_rows",
]
