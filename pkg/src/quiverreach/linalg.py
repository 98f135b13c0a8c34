"""Exact rank computation over GF(p) and the rationals.

Matrices arrive as sparse columns (dicts keyed by arbitrary hashable row
labels).  GF(2) uses bitmask integers; other characteristics use sparse
row-reduction with modular or Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_characteristic(char: int) -> None:
    if char != 0 and not _is_prime(char):
        raise ValueError(f"characteristic must be 0 or a prime, got {char}")


def rank_gf2(bitrows: Iterable[int]) -> int:
    """Rank over GF(2) of rows given as bitmask integers."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in bitrows:
        while row:
            top = row.bit_length() - 1
            piv = pivots.get(top)
            if piv is None:
                pivots[top] = row
                rank += 1
                break
            row ^= piv
    return rank


def _rank_modp(rows: list[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {cc: (vv * inv) % p for cc, vv in row.items()}
                rank += 1
                break
            factor = row.pop(c)
            for cc, vv in piv.items():
                if cc == c:
                    continue
                nv = (row.get(cc, 0) - factor * vv) % p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    return rank


def _rank_rational(rows: list[dict[int, int]]) -> int:
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for int_row in rows:
        row = {c: Fraction(v) for c, v in int_row.items() if v}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = 1 / row[c]
                pivots[c] = {cc: vv * inv for cc, vv in row.items()}
                rank += 1
                break
            factor = row.pop(c)
            for cc, vv in piv.items():
                if cc == c:
                    continue
                nv = row.get(cc, 0) - factor * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    return rank


def sparse_columns_rank(columns: Iterable[dict[Hashable, int]], char: int) -> int:
    """Rank of a matrix given column-wise; row labels may be any hashable."""
    check_characteristic(char)
    row_index: dict[Hashable, int] = {}

    def ix(label: Hashable) -> int:
        i = row_index.get(label)
        if i is None:
            i = row_index[label] = len(row_index)
        return i

    indexed: list[dict[int, int]] = []
    for col in columns:
        entries = {ix(r): v for r, v in col.items() if v}
        if entries:
            indexed.append(entries)

    if char == 2:
        bitrows = []
        for col in indexed:
            mask = 0
            for r, v in col.items():
                if v % 2:
                    mask |= 1 << r
            if mask:
                bitrows.append(mask)
        return rank_gf2(bitrows)
    if char == 0:
        return _rank_rational(indexed)
    return _rank_modp(indexed, char)
