"""Exact affine subspaces of Q^N given by linear equations.

An :class:`AffineSystem` stores ``A x = b`` in reduced row echelon form over
:class:`fractions.Fraction`, with columns in a fixed variable order, so two
systems describe the same subspace exactly when their stored rows agree.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = tuple[Fraction, ...]  # coefficients followed by the constant


class InconsistentSystem(ValueError):
    """The equations have no common solution."""


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of an augmented matrix with ``ncols`` variable columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols + 1):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


class AffineSystem:
    """Affine subspace ``{x : A x = b}`` over the named variables."""

    __slots__ = ("variables", "rows")

    def __init__(self, variables: Sequence[str], equations: Iterable[Mapping[str, object]] = ()):
        """``equations`` are maps ``variable -> coefficient`` with the key ``1``
        (the integer) holding the constant on the left side; each means
        ``sum(coef * var) + const = 0``."""
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable")
        col = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        raw = []
        for eq in equations:
            row = [Fraction(0)] * (n + 1)
            for k, c in eq.items():
                if k == 1:
                    row[n] -= Fraction(c)
                else:
                    if k not in col:
                        raise ValueError(f"unknown variable {k!r}")
                    row[col[k]] += Fraction(c)
            raw.append(row)
        red, piv = rref(raw, n)
        if piv and piv[-1] == n:
            raise InconsistentSystem("equations are inconsistent")
        self.rows: tuple[Row, ...] = tuple(tuple(r) for r in red)

    @classmethod
    def from_rows(cls, variables: Sequence[str], rows: Iterable[Sequence]) -> "AffineSystem":
        n = len(variables)
        eqs = []
        for r in rows:
            eq: dict = {v: r[i] for i, v in enumerate(variables)}
            eq[1] = -Fraction(r[n])
            eqs.append(eq)
        return cls(variables, eqs)

    @classmethod
    def parse(cls, variables: Sequence[str], text: str) -> "AffineSystem":
        """Parse chains such as ``"a=b+1=c+1, d=2"``.

        Terms are integers, variables, or ``k*var``/``kvar`` products joined by
        ``+``/``-``; commas or semicolons separate chains.
        """
        eqs = []
        for chain in re.split(r"[,;]", text):
            chain = chain.strip()
            if not chain:
                continue
            sides = [_parse_linear(s, variables) for s in chain.split("=")]
            if len(sides) < 2:
                raise ValueError(f"not an equation: {chain!r}")
            for lhs, rhs in zip(sides, sides[1:]):
                eq = dict(lhs)
                for k, c in rhs.items():
                    eq[k] = eq.get(k, 0) - c
                eqs.append(eq)
        return cls(variables, eqs)

    # -- queries ---------------------------------------------------------------

    @property
    def codimension(self) -> int:
        return len(self.rows)

    @property
    def is_full_space(self) -> bool:
        return not self.rows

    def contains_point(self, point: Mapping[str, object] | Sequence) -> bool:
        vals = [point[v] for v in self.variables] if isinstance(point, Mapping) else list(point)
        n = len(self.variables)
        return all(sum(r[i] * vals[i] for i in range(n)) == r[n] for r in self.rows)

    def is_subspace_of(self, other: "AffineSystem") -> bool:
        """True iff every solution of ``self`` solves ``other``."""
        self._check_same(other)
        red, piv = rref(list(self.rows) + list(other.rows), len(self.variables))
        return len(red) == len(self.rows)

    def intersect(self, other: "AffineSystem") -> "AffineSystem":
        self._check_same(other)
        return AffineSystem.from_rows(self.variables, list(self.rows) + list(other.rows))

    def _check_same(self, other: "AffineSystem") -> None:
        if self.variables != other.variables:
            raise ValueError("systems use different variable orders")

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineSystem) and (self.variables, self.rows) == (other.variables, other.rows)

    def __hash__(self) -> int:
        return hash((self.variables, self.rows))

    def sort_key(self) -> tuple:
        return (len(self.rows), self.rows)

    # -- printing ----------------------------------------------------------------

    def equations(self) -> list[str]:
        """One ``pivot = rest`` string per row, e.g. ``"a = c + 1"``."""
        n = len(self.variables)
        out = []
        for r in self.rows:
            lead = next(i for i in range(n) if r[i] != 0)
            terms = []
            for i in range(lead + 1, n):
                if r[i] != 0:
                    terms.append((-r[i], self.variables[i]))
            if r[n] != 0 or not terms:
                terms.append((r[n], None))
            out.append(f"{self.variables[lead]} = {_format_terms(terms)}")
        return out

    def __str__(self) -> str:
        return "{" + ", ".join(self.equations()) + "}" if self.rows else "{}"

    def __repr__(self) -> str:
        return f"AffineSystem({self})"


def _format_terms(terms) -> str:
    parts = []
    for c, v in terms:
        mag = abs(c)
        if v is None:
            body = str(mag)
        elif mag == 1:
            body = v
        else:
            body = f"{mag}*{v}"
        if not parts:
            parts.append(body if c >= 0 else "-" + body)
        else:
            parts.append(("+ " if c >= 0 else "- ") + body)
    return " ".join(parts)


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z_0-9]*)?\s*")


def _parse_linear(text: str, variables: Sequence[str]) -> dict:
    text = text.strip()
    if not text:
        raise ValueError("empty side in equation")
    out: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse {text!r} at {pos}")
        if not first and not m.group(1):
            raise ValueError(f"missing operator in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        key = m.group(3) if m.group(3) else 1
        if key != 1 and key not in variables:
            raise ValueError(f"unknown variable {key!r}")
        out[key] = out.get(key, 0) + sign * coef
        pos = m.end()
        first = False
    return out
