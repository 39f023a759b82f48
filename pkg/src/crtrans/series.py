"""Truncated multivariate formal power series with exact coefficients.

A Series over the Gaussian rationals stores finitely many terms, every one of
total degree at most the series' truncation degree D. The contract for every
operation here: the coefficients of the result, up to the result's truncation
degree, are exactly those of the untruncated computation. Binary operations
truncate at the minimum of the operands' degrees.

The `exact` flag records when the stored terms are known to be the whole
series (a polynomial). It is metadata, not part of equality; consumers use it
to upgrade "zero up to truncation" into certified vanishing. Operations
propagate it conservatively: when in doubt the flag is dropped, never invented.

Series objects are immutable by convention; do not mutate `terms`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ArityMismatch,
    NormalizationRequired,
    NotAUnit,
    NotPointed,
    StructureError,
    TruncationMismatch,
)
from .multiindex import MultiIndex, degree as idx_degree, grlex_key, unit
from .scalar import ONE, ZERO, GaussianRational, ScalarLike

Order = Union[int, float]  # math.inf marks "no visible nonzero term"
INFINITE_ORDER: float = math.inf

TermMap = Dict[MultiIndex, GaussianRational]


class Series:
    """Sparse truncated power series in `arity` variables."""

    __slots__ = ("arity", "degree", "terms", "exact")

    def __init__(
        self,
        arity: int,
        degree: int,
        terms: Optional[Mapping[MultiIndex, ScalarLike]] = None,
        exact: bool = True,
    ) -> None:
        if arity < 0 or degree < 0:
            raise StructureError("arity and truncation degree must be non-negative")
        clean: TermMap = {}
        dropped = False
        if terms:
            for idx, value in terms.items():
                idx = tuple(idx)
                if len(idx) != arity or any(e < 0 for e in idx):
                    raise StructureError(f"bad exponent tuple {idx} for arity {arity}")
                c = GaussianRational.coerce(value)
                if not c:
                    continue
                if idx_degree(idx) > degree:
                    dropped = True
                    continue
                clean[idx] = c
        self.arity = arity
        self.degree = degree
        self.terms = clean
        self.exact = bool(exact) and not dropped

    @classmethod
    def _raw(cls, arity: int, degree: int, terms: TermMap, exact: bool) -> "Series":
        """Trusted constructor: terms already clean (no zeros, degrees in range)."""
        out = object.__new__(cls)
        out.arity = arity
        out.degree = degree
        out.terms = terms
        out.exact = exact
        return out

    # ---------------- constructors ----------------

    @classmethod
    def zero(cls, arity: int, degree: int, exact: bool = True) -> "Series":
        return cls._raw(arity, degree, {}, exact)

    @classmethod
    def constant(cls, value: ScalarLike, arity: int, degree: int) -> "Series":
        c = GaussianRational.coerce(value)
        return cls._raw(arity, degree, {(0,) * arity: c} if c else {}, True)

    @classmethod
    def one(cls, arity: int, degree: int) -> "Series":
        return cls.constant(1, arity, degree)

    @classmethod
    def variable(cls, var: int, arity: int, degree: int) -> "Series":
        if not 0 <= var < arity:
            raise StructureError(f"variable index {var} out of range for arity {arity}")
        if degree < 1:
            raise TruncationMismatch("a variable needs truncation degree at least 1")
        return cls._raw(arity, degree, {unit(arity, var): ONE}, True)

    @classmethod
    def polynomial(
        cls, arity: int, degree: int, terms: Mapping[MultiIndex, ScalarLike]
    ) -> "Series":
        return cls(arity, degree, terms, exact=True)

    # ---------------- basic queries ----------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * self.arity, ZERO)

    @property
    def is_pointed(self) -> bool:
        return not self.constant_term

    @property
    def poly_degree(self) -> int:
        """Largest total degree among stored terms (0 for the zero series)."""
        if not self.terms:
            return 0
        return max(idx_degree(k) for k in self.terms)

    def coefficient(self, idx: MultiIndex) -> GaussianRational:
        idx = tuple(idx)
        if len(idx) != self.arity:
            raise ArityMismatch(f"index {idx} has wrong length for arity {self.arity}")
        if idx_degree(idx) > self.degree and not self.exact:
            raise TruncationMismatch(
                f"coefficient at {idx} lies beyond truncation degree {self.degree}"
            )
        return self.terms.get(idx, ZERO)

    def order(self) -> Order:
        """Total vanishing order; infinity when zero up to truncation."""
        if not self.terms:
            return INFINITE_ORDER
        return min(idx_degree(k) for k in self.terms)

    def order_in(self, variables: Sequence[int]) -> Order:
        """Vanishing order counting only the listed variables."""
        if not self.terms:
            return INFINITE_ORDER
        vs = tuple(variables)
        return min(sum(k[i] for i in vs) for k in self.terms)

    def leading_index(self) -> Optional[MultiIndex]:
        """Graded-lex minimal index with nonzero coefficient, None if zero."""
        if not self.terms:
            return None
        return min(self.terms, key=grlex_key)

    def sorted_terms(self) -> Iterable[Tuple[MultiIndex, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.degree == other.degree
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<Series {self.to_str()} | arity={self.arity} D={self.degree}>"

    # ---------------- ring operations ----------------

    def _check_arity(self, other: "Series") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __neg__(self) -> "Series":
        return Series._raw(
            self.arity, self.degree, {k: -v for k, v in self.terms.items()}, self.exact
        )

    def _add_signed(self, other: "Series", sign: int) -> "Series":
        self._check_arity(other)
        d = min(self.degree, other.degree)
        out: TermMap = {}
        dropped = False
        for k, v in self.terms.items():
            if idx_degree(k) > d:
                dropped = True
                continue
            out[k] = v
        for k, v in other.terms.items():
            if idx_degree(k) > d:
                dropped = True
                continue
            if sign < 0:
                v = -v
            cur = out.get(k)
            nv = v if cur is None else cur + v
            if nv:
                out[k] = nv
            elif cur is not None:
                del out[k]
        return Series._raw(self.arity, d, out, self.exact and other.exact and not dropped)

    def __add__(self, other: Union["Series", ScalarLike]) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(GaussianRational.coerce(other), self.arity, self.degree)
        return self._add_signed(other, +1)

    __radd__ = __add__

    def __sub__(self, other: Union["Series", ScalarLike]) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(GaussianRational.coerce(other), self.arity, self.degree)
        return self._add_signed(other, -1)

    def __rsub__(self, other: ScalarLike) -> "Series":
        return (-self) + other

    def scale(self, value: ScalarLike) -> "Series":
        c = GaussianRational.coerce(value)
        if not c:
            return Series.zero(self.arity, self.degree)
        return Series._raw(
            self.arity, self.degree, {k: v * c for k, v in self.terms.items()}, self.exact
        )

    def __mul__(self, other: Union["Series", ScalarLike]) -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        self._check_arity(other)
        d = min(self.degree, other.degree)
        # exactly-zero absorbs the unknown tail of the other factor
        if (self.is_zero and self.exact) or (other.is_zero and other.exact):
            return Series.zero(self.arity, d)
        f, g = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        g_sorted = sorted(((idx_degree(k), k, v) for k, v in g.terms.items()))
        out: TermMap = {}
        for ka, va in f.terms.items():
            da = idx_degree(ka)
            room = d - da
            if room < 0:
                continue
            for db, kb, vb in g_sorted:
                if db > room:
                    break
                kk = tuple(x + y for x, y in zip(ka, kb))
                prod = va * vb
                cur = out.get(kk)
                nv = prod if cur is None else cur + prod
                if nv:
                    out[kk] = nv
                elif cur is not None:
                    del out[kk]
        exact = self.exact and other.exact and (self.poly_degree + other.poly_degree <= d)
        return Series._raw(self.arity, d, out, exact)

    __rmul__ = __mul__

    def __truediv__(self, value: ScalarLike) -> "Series":
        c = GaussianRational.coerce(value)
        return self.scale(ONE / c)

    def __pow__(self, power: int) -> "Series":
        if power < 0:
            raise StructureError("negative series powers live in the fraction field")
        out = Series.one(self.arity, self.degree)
        for _ in range(power):
            out = out * self
        return out

    # ---------------- coefficient reshaping ----------------

    def conjugate(self) -> "Series":
        """Conjugate every coefficient; variables are untouched."""
        return Series._raw(
            self.arity,
            self.degree,
            {k: v.conjugate() for k, v in self.terms.items()},
            self.exact,
        )

    def derivative(self, var: int) -> "Series":
        if not 0 <= var < self.arity:
            raise StructureError(f"variable index {var} out of range")
        d = max(self.degree - 1, 0)
        out: TermMap = {}
        for k, v in self.terms.items():
            e = k[var]
            if e == 0:
                continue
            kk = k[:var] + (e - 1,) + k[var + 1 :]
            out[kk] = v * e
        exact = self.exact if (self.degree > 0 or self.exact) else False
        return Series._raw(self.arity, d, out, exact)

    def set_zero(self, variables: Sequence[int]) -> "Series":
        """Substitute 0 for the listed variables (arity is preserved)."""
        vs = tuple(variables)
        out = {k: v for k, v in self.terms.items() if all(k[i] == 0 for i in vs)}
        return Series._raw(self.arity, self.degree, out, self.exact)

    def coefficient_series(
        self, variables: Sequence[int], alpha: MultiIndex
    ) -> "Series":
        """Taylor coefficient of the monomial `x_block^alpha` as a series.

        The listed variables are removed; remaining variables keep their
        relative order. The result's truncation degree is D - |alpha|.
        """
        vs = tuple(variables)
        alpha = tuple(alpha)
        if len(vs) != len(alpha):
            raise ArityMismatch("block and exponent vector differ in length")
        a = idx_degree(alpha)
        if a > self.degree:
            raise TruncationMismatch(
                f"coefficient block of degree {a} beyond truncation {self.degree}"
            )
        keep = [i for i in range(self.arity) if i not in vs]
        want = dict(zip(vs, alpha))
        out: TermMap = {}
        for k, v in self.terms.items():
            if all(k[i] == e for i, e in want.items()):
                out[tuple(k[i] for i in keep)] = v
        return Series._raw(len(keep), self.degree - a, out, self.exact)

    def shift_down(self, var: int, amount: int) -> "Series":
        """Divide by x_var^amount; every term must carry that factor."""
        if amount == 0:
            return self
        out: TermMap = {}
        for k, v in self.terms.items():
            if k[var] < amount:
                raise StructureError(
                    f"term {k} lacks the factor x_{var}^{amount} being divided out"
                )
            out[k[:var] + (k[var] - amount,) + k[var + 1 :]] = v
        return Series._raw(self.arity, self.degree - amount, out, self.exact)

    def permute(self, new_positions: Sequence[int]) -> "Series":
        """Send old variable i to position new_positions[i]."""
        pos = tuple(new_positions)
        if sorted(pos) != list(range(self.arity)):
            raise StructureError(f"{pos} is not a permutation of range({self.arity})")
        out: TermMap = {}
        for k, v in self.terms.items():
            kk = [0] * self.arity
            for i, e in enumerate(k):
                kk[pos[i]] = e
            out[tuple(kk)] = v
        return Series._raw(self.arity, self.degree, out, self.exact)

    def embed(self, arity: int, positions: Sequence[int]) -> "Series":
        """View this series inside a larger ring; old var i becomes positions[i]."""
        pos = tuple(positions)
        if len(pos) != self.arity or len(set(pos)) != len(pos):
            raise StructureError("positions must be distinct and cover every variable")
        if any(not 0 <= p < arity for p in pos):
            raise StructureError("embedding positions out of range")
        out: TermMap = {}
        for k, v in self.terms.items():
            kk = [0] * arity
            for i, e in enumerate(k):
                kk[pos[i]] = e
            out[tuple(kk)] = v
        return Series._raw(arity, self.degree, out, self.exact)

    def truncate(self, d: int) -> "Series":
        if d > self.degree:
            raise TruncationMismatch(
                f"cannot truncate degree-{self.degree} data at {d}; use lift() on exact series"
            )
        if d == self.degree:
            return self
        out: TermMap = {}
        dropped = False
        for k, v in self.terms.items():
            if idx_degree(k) > d:
                dropped = True
            else:
                out[k] = v
        return Series._raw(self.arity, d, out, self.exact and not dropped)

    def lift(self, d: int) -> "Series":
        """Re-declare a higher truncation degree; sound only for exact series."""
        if d < self.degree:
            return self.truncate(d)
        if d == self.degree:
            return self
        if not self.exact:
            raise TruncationMismatch("cannot lift a series that is only known truncated")
        return Series._raw(self.arity, d, dict(self.terms), True)

    def evaluate(self, point: Sequence[ScalarLike]) -> GaussianRational:
        """Value of the stored polynomial part at an exact point."""
        if len(point) != self.arity:
            raise ArityMismatch("evaluation point has wrong length")
        pt = [GaussianRational.coerce(p) for p in point]
        total = ZERO
        for k, v in self.terms.items():
            term = v
            for i, e in enumerate(k):
                if e:
                    term = term * (pt[i] ** e)
            total = total + term
        return total

    # ---------------- display ----------------

    def to_str(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.arity)]
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.sorted_terms():
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(k)
                if e > 0
            )
            cs = str(v)
            if mono:
                if cs == "1":
                    body = mono
                elif cs == "-1":
                    body = f"-{mono}"
                else:
                    if ("+" in cs[1:]) or ("-" in cs[1:]):
                        cs = f"({cs})"
                    body = f"{cs}*{mono}"
            else:
                body = cs if not (("+" in cs[1:]) or ("-" in cs[1:])) else f"({cs})"
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


@dataclass(frozen=True)
class FormalMap:
    """An ordered tuple of series sharing one source ring."""

    components: Tuple[Series, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise StructureError("a formal map needs at least one component")
        a = self.components[0].arity
        if any(c.arity != a for c in self.components):
            raise ArityMismatch("map components live in different rings")

    @property
    def arity(self) -> int:
        return self.components[0].arity

    @property
    def is_pointed(self) -> bool:
        return all(c.is_pointed for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


def identity_components(arity: int, degree: int) -> Tuple[Series, ...]:
    return tuple(Series.variable(i, arity, degree) for i in range(arity))


def compose(f: Series, components: Union[FormalMap, Sequence[Series]]) -> Series:
    """Substitute pointed series for the variables of f.

    Result truncation degree is the minimum over f and all components; the
    coefficients up to that degree agree with the untruncated composition.
    """
    comps = list(components)
    if len(comps) != f.arity:
        raise ArityMismatch(f"{f.arity} variables but {len(comps)} components")
    if f.arity == 0:
        return f
    arity = comps[0].arity
    degrees = [c.degree for c in comps]
    for c in comps:
        if c.arity != arity:
            raise ArityMismatch("substitution components live in different rings")
        if not c.is_pointed:
            raise NotPointed("substitution requires components with zero constant term")
    d = min([f.degree] + degrees)
    acc = Series.zero(arity, d)
    tail_unknown = not f.exact
    powers: list[Dict[int, Series]] = [{0: Series.one(arity, d)} for _ in comps]

    def power(i: int, e: int) -> Series:
        cache = powers[i]
        if e not in cache:
            m = max(cache)
            cur = cache[m]
            while m < e:
                cur = cur * comps[i]
                m += 1
                cache[m] = cur
        return cache[e]

    for alpha, c in sorted(f.terms.items(), key=lambda kv: grlex_key(kv[0])):
        if idx_degree(alpha) > d:
            # contributes only beyond the truncation degree
            tail_unknown = True
            continue
        skip = False
        for i, e in enumerate(alpha):
            if e and comps[i].is_zero:
                if not comps[i].exact:
                    tail_unknown = True
                skip = True
                break
        if skip:
            continue
        prod: Optional[Series] = None
        for i, e in enumerate(alpha):
            if not e:
                continue
            p = power(i, e)
            prod = p if prod is None else prod * p
        term = Series.constant(c, arity, d) if prod is None else prod.scale(c)
        acc = acc + term
    if tail_unknown and acc.exact:
        acc = Series._raw(acc.arity, acc.degree, acc.terms, False)
    return acc


def invert_unit(f: Series) -> Series:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = f.constant_term
    if not c0:
        raise NotAUnit("constant term is zero")
    d = f.degree
    # f = c0 * (1 - u) with u pointed; inverse is c0^(-1) * sum u^j
    u = (Series.constant(c0, f.arity, d) - f) / c0
    acc = Series.one(f.arity, d)
    p = Series.one(f.arity, d)
    for _ in range(d):
        p = p * u
        if p.is_zero:
            break
        acc = acc + p
    out = acc / c0
    exact = f.exact and f.poly_degree == 0
    return Series._raw(out.arity, out.degree, out.terms, exact)


def solve_implicit(rhs: Series) -> Series:
    """Solve u = rhs(x, u) for the last variable by degree-graded iteration.

    Preconditions: rhs(0, 0) = 0 and d(rhs)/du(0, 0) = 0. Under these the
    coefficients of the solution stabilize degree by degree and the returned
    series satisfies the equation exactly up to its truncation degree.
    """
    if rhs.arity < 1:
        raise ArityMismatch("rhs needs at least the unknown variable")
    if not rhs.is_pointed:
        raise NormalizationRequired("rhs(0, 0) must vanish")
    m = rhs.arity - 1
    d = rhs.degree
    lin_u = rhs.terms.get(unit(rhs.arity, m), ZERO)
    if lin_u:
        raise NormalizationRequired(
            "d(rhs)/du(0,0) is nonzero; divide the equation by (1 - that coefficient) first"
        )
    ids = [Series.variable(i, m, d) for i in range(m)]
    u = Series.zero(m, d)
    for _ in range(d + 2):
        nu = compose(rhs, ids + [u])
        if nu == u:
            return nu
        u = nu
    raise StructureError("implicit iteration failed to stabilize")  # pragma: no cover


def exp_series(f: Series) -> Series:
    """exp of a pointed series, summed through the truncation degree."""
    if not f.is_pointed:
        raise NotPointed("exp needs a series with zero constant term")
    d = f.degree
    acc = Series.one(f.arity, d)
    p = Series.one(f.arity, d)
    fact = 1
    for j in range(1, d + 1):
        p = p * f
        if p.is_zero:
            break
        fact *= j
        acc = acc + p.scale(Fraction(1, fact))
    if not f.is_zero:
        acc = Series._raw(acc.arity, acc.degree, acc.terms, False)
    return acc
