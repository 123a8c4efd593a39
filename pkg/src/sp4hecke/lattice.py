"""Canonical forms for Z_(p)-lattices in Q^4 and left-coset keys.

A pattern group K = {k : val(k_ij) >= c_ij off the diagonal, diagonal condition}
stabilises the column lattices L_j = {v : val(v_i) >= c_ij}.  Two elements g, g'
lie in the same left coset gK exactly when g L_j = g' L_j for every j and (for
pro-p patterns, where the diagonal condition is k_jj = 1 mod p^c_jj) the column
vectors agree: g e_j = g' e_j mod g L_j.  Both pieces have canonical forms, so a
coset is identified by a hashable tuple instead of pairwise membership tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .scalars import INF, valuation

Vector = list  # of Fraction


def _canonical_mod(x: Fraction, d: int, p: int) -> Fraction:
    """Representative of x modulo p^d Z_(p) of the form p^v * r, 0 <= r < p^(d-v)."""
    if x == 0:
        return x
    v = valuation(x, p)
    if v >= d:
        return Fraction(0)
    scale = mpq(p) ** v
    u = x / scale
    mod = p ** (d - v)
    r = u.numerator * pow(u.denominator, -1, mod) % mod
    return r * scale


def echelon(vectors: Sequence[Sequence[Fraction]], p: int) -> tuple:
    """Reduced echelon basis of the Z_(p)-span of full-rank vectors in Q^n.

    Returns a tuple of n basis rows b_0..b_{n-1} where b_r vanishes before
    coordinate r, has pivot p^d_r at r, and every entry of b_r at a later
    pivot coordinate s is reduced modulo p^d_s.  Equal lattices give equal output.
    """
    rows = [list(v) for v in vectors]
    n = len(rows[0])
    basis = []
    for r in range(n):
        best, best_val = None, INF
        for idx, row in enumerate(rows):
            v = valuation(row[r], p)
            if v < best_val:
                best, best_val = idx, v
        if best is None:
            raise ValueError("vectors do not span a full-rank lattice")
        piv = rows.pop(best)
        unit = piv[r] / mpq(p) ** best_val
        piv = [x / unit for x in piv]
        for row in rows:
            if row[r]:
                f = row[r] / piv[r]
                for k in range(r, n):
                    row[k] -= f * piv[k]
        basis.append((best_val, piv))
    out = []
    for r in range(n):
        _, b = basis[r]
        for s in range(r + 1, n):
            d_s, b_s = basis[s]
            x = b[s]
            red = _canonical_mod(x, d_s, p)
            if red != x:
                f = (x - red) / b_s[s]
                b = [bk - f * bsk for bk, bsk in zip(b, b_s)]
        out.append(tuple(b))
    return tuple(out)


def reduce_vector(v: Sequence[Fraction], basis: tuple, p: int) -> tuple:
    """Canonical representative of v modulo the lattice with the given echelon basis."""
    v = list(v)
    for r, b in enumerate(basis):
        d = valuation(b[r], p)
        x = v[r]
        red = _canonical_mod(x, d, p)
        if red != x:
            f = (x - red) / b[r]
            v = [vk - f * bk for vk, bk in zip(v, b)]
    return tuple(v)


# keys are scaled by p^KEY_SHIFT so that they are integers independent of the
# scaling used internally
KEY_SHIFT = 48


def _int_val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def modular_echelon(vectors: Sequence[Sequence[int]], p: int, M: int) -> tuple:
    """Echelon basis of the lattice spanned by integer vectors and p^M Z^n.

    Integer counterpart of :func:`echelon`.  Entries of Z_(p) are carried as
    residues mod p^M, which is exact because p^M Z^n lies in the lattice; the
    generator p^M e_r is folded in when coordinate r is pivoted.  Returns the
    pivot exponents and basis rows.
    """
    n = len(vectors[0])
    mod = p**M
    rows = [[x % mod for x in v] for v in vectors]
    exps, basis = [], []
    for r in range(n):
        best, best_val = -1, M
        for idx, row in enumerate(rows):
            v = _int_val(row[r], p, M)
            if v < best_val:
                best, best_val = idx, v
        if best < 0:
            exps.append(M)
            basis.append([mod if k == r else 0 for k in range(n)])
            continue
        piv = rows.pop(best)
        pd = p**best_val
        inv = pow(piv[r] // pd, -1, mod)
        piv = [(x * inv) % mod for x in piv]
        rest = []
        for row in rows:
            f = row[r] // pd
            if f:
                row = [(x - f * y) % mod for x, y in zip(row, piv)]
            if any(row):
                rest.append(row)
        # p^M e_r minus p^(M-d) times the pivot row
        extra = [(-(p ** (M - best_val)) * y) % mod for y in piv]
        extra[r] = 0
        if any(extra):
            rest.append(extra)
        rows = rest
        exps.append(best_val)
        basis.append(piv)
    for r in range(n):
        b = basis[r]
        for s in range(r + 1, n):
            f = b[s] // p ** exps[s]
            if f:
                bs = basis[s]
                b[s] -= f * bs[s]
                for k in range(s + 1, n):
                    b[k] = (b[k] - f * bs[k]) % mod
    return exps, basis


def modular_reduce(v: list, exps: list, basis: list, p: int, M: int) -> list:
    mod = p**M
    v = [x % mod for x in v]
    for r, b in enumerate(basis):
        f = v[r] // p ** exps[r]
        if f:
            v[r] -= f * b[r]
            for k in range(r + 1, len(v)):
                v[k] = (v[k] - f * b[k]) % mod
    return v


class PatternKeyer:
    """Computes canonical left-coset keys for a pattern group.

    ``bounds[i][j]`` is the minimal valuation of entry (i, j) of k - I (off the
    diagonal, equal to that of k itself).  When ``pro_p`` is true the diagonal
    bound is ``bounds[j][j]`` on k_jj - 1 and the key includes the column
    vectors; otherwise the group only demands unit diagonal and the key is
    the tuple of column lattices.

    Internally g is scaled by p^s to be integral; the lattices then contain
    p^(2s + cmax) Z^4, so arithmetic mod that power of p is exact.
    """

    def __init__(self, bounds: Sequence[Sequence[int]], p: int, pro_p: bool):
        self.p = p
        self.pro_p = pro_p
        cols = []
        for j in range(4):
            col = tuple(0 if (i == j and not pro_p) else bounds[i][j] for i in range(4))
            cols.append(col)
        self.columns = cols
        self._distinct = sorted(set(cols))
        self._cmax = max(max(c) for c in cols)

    def _integral(self, g):
        p = self.p
        s = max(0, -min(valuation(x, p) for x in g.entries if x != 0))
        if s > KEY_SHIFT // 2 - self._cmax:
            raise ValueError("element too far from the base point for coset keys")
        M = 2 * s + self._cmax + 1
        mod = p**M
        ps = mpq(p) ** s
        ints = []
        for x in g.entries:
            y = x * ps
            ints.append(y.numerator * pow(y.denominator, -1, mod) % mod)
        return s, M, ints

    def key(self, g) -> tuple:
        p = self.p
        s, M, e = self._integral(g)
        gcols = [[e[4 * i + j] for i in range(4)] for j in range(4)]
        scale = p ** (KEY_SHIFT - s)
        lattices = {}
        parts = []
        for col in self._distinct:
            gens = [[x * p**c for x in gcols[i]] for i, c in enumerate(col)]
            exps, basis = modular_echelon(gens, p, M)
            lattices[col] = (exps, basis)
            parts.append(tuple(x * scale for b in basis for x in b))
        if self.pro_p:
            for j in range(4):
                exps, basis = lattices[self.columns[j]]
                v = modular_reduce(gcols[j], exps, basis, p, M)
                parts.append(tuple(x * scale for x in v))
        return tuple(parts)

    def reference_key(self, g) -> tuple:
        """Slow Fraction-based key; same partition of G as :meth:`key`."""
        p = self.p
        e = g.entries
        gcols = [[e[4 * i + j] for i in range(4)] for j in range(4)]
        lattices = {}
        for col in self._distinct:
            gens = [[x * mpq(p) ** c for x in gcols[i]] for i, c in enumerate(col)]
            lattices[col] = echelon(gens, p)
        key = tuple(lattices[col] for col in self._distinct)
        if not self.pro_p:
            return key
        vecs = tuple(reduce_vector(gcols[j], lattices[self.columns[j]], p) for j in range(4))
        return key + vecs
