"""Formal holomorphic maps between hypersurfaces in normal coordinates.

A map H = (F, G): C^{n+1} -> C^{n'+1} fixing 0 is stored through its
components in the source variables (z_1..z_n, w); G is the normal
component. All the analyzers return Verdicts whose claims are relative to
the degree actually used, which every verdict records.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from .errors import ArityMismatch, StructureError, TruncationMismatch
from .hypersurface import NormalHypersurface, classify_type, infinite_unit_part
from .linalg import determinant, generic_rank, scalar_determinant
from .multiindex import grlex_key, unit
from .scalar import ZERO, GaussianRational
from .series import Series, compose
from .verdict import Verdict, certified_false, certified_true, unknown


@dataclass(frozen=True)
class CRMap:
    """(F, G) with F the tangential components and G the normal one."""

    f: Tuple[Series, ...]
    g: Series

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", tuple(self.f))
        if not self.f:
            raise StructureError("a map needs at least one tangential component")
        a = self.g.arity
        if any(c.arity != a for c in self.f):
            raise ArityMismatch("map components live in different source rings")
        if any(not c.is_pointed for c in self.f) or not self.g.is_pointed:
            raise StructureError("maps are based at the origin; components must be pointed")

    @property
    def source_n(self) -> int:
        return self.g.arity - 1

    @property
    def target_n(self) -> int:
        return len(self.f)

    @property
    def w_index(self) -> int:
        return self.source_n

    @property
    def degree(self) -> int:
        return min([c.degree for c in self.f] + [self.g.degree])

    @property
    def components(self) -> Tuple[Series, ...]:
        return self.f + (self.g,)


def identity_map(n: int, degree: int) -> CRMap:
    comps = [Series.variable(i, n + 1, degree) for i in range(n + 1)]
    return CRMap(tuple(comps[:n]), comps[n])


def compose_maps(outer: CRMap, inner: CRMap) -> CRMap:
    if outer.source_n != inner.target_n:
        raise ArityMismatch(
            f"outer map expects {outer.source_n} tangential variables, "
            f"inner map provides {inner.target_n}"
        )
    comps = list(inner.components)
    new_f = tuple(compose(c, comps) for c in outer.f)
    new_g = compose(outer.g, comps)
    return CRMap(new_f, new_g)


def dh0(h: CRMap):
    """Differential at 0 as a scalar matrix, rows (F_1..F_n', G)."""
    rows = []
    for c in h.components:
        if c.degree < 1:
            raise TruncationMismatch("need degree >= 1 to read the differential")
        rows.append([c.terms.get(unit(c.arity, j), ZERO) for j in range(c.arity)])
    return rows


def is_automorphism(h: CRMap) -> Verdict:
    """Invertibility of the formal map; decided exactly from the linear part."""
    if h.target_n != h.source_n:
        return certified_false({"note": "map is not equidimensional"}, h.degree)
    det = scalar_determinant(dh0(h))
    if det:
        return certified_true({"determinant": str(det)}, h.degree)
    return certified_false({"determinant": "0"}, h.degree)


# ---------------- pointwise analyzers ----------------


def is_cr_transversal(h: CRMap) -> Verdict:
    """Nonvanishing of dG/dw at 0; exact either way."""
    if h.g.degree < 1:
        raise TruncationMismatch("need degree >= 1 to read dG/dw at 0")
    c = h.g.terms.get(unit(h.g.arity, h.w_index), ZERO)
    if c:
        return certified_true({"coefficient": str(c)}, h.g.degree)
    return certified_false({"coefficient": "0"}, h.g.degree)


def is_transversally_flat(h: CRMap) -> Verdict:
    """Does the map send everything into the hypersurface w = 0?"""
    g = h.g
    if g.is_zero:
        return certified_true(
            {"note": "normal component vanishes", "exact": g.exact}, g.degree
        )
    lead = g.leading_index()
    return certified_false(
        {"index": list(lead), "value": str(g.coefficient(lead))}, g.degree
    )


def is_not_totally_degenerate(h: CRMap, seed: int = 0) -> Verdict:
    """Generic rank of dF/dz restricted to w = 0 equals the source dimension."""
    n = h.source_n
    rows = []
    for c in h.f:
        entries = [
            c.derivative(j).coefficient_series([h.w_index], (0,)) for j in range(n)
        ]
        rows.append(entries)
    g = generic_rank(rows, seed=seed)
    if g.r >= n:
        return certified_true(dict(g.at_least.witness or {}), h.degree)
    if g.at_most.is_true:
        return certified_false({"rank": g.r, **dict(g.at_most.witness or {})}, h.degree)
    return unknown({"rank_reached": g.r}, h.degree)


def jacobian(h: CRMap) -> Series:
    if h.target_n != h.source_n:
        raise StructureError("Jacobian determinant needs an equidimensional map")
    rows = [[c.derivative(j) for j in range(c.arity)] for c in h.components]
    return determinant(rows)


def is_jacobian_nonzero(h: CRMap) -> Verdict:
    det = jacobian(h)
    if not det.is_zero:
        lead = det.leading_index()
        return certified_true(
            {"index": list(lead), "value": str(det.coefficient(lead))}, det.degree
        )
    if det.exact:
        return certified_false({"note": "Jacobian vanishes identically"}, det.degree)
    return unknown({"note": "Jacobian vanishes up to truncation"}, det.degree)


@dataclass(frozen=True)
class TransversalOrder:
    """Order of vanishing of G along w; None when flat to truncation."""

    value: Optional[int]
    witness: Mapping
    degree_used: int
    exact: bool

    @property
    def is_flat(self) -> bool:
        return self.value is None

    def to_json(self) -> Mapping:
        return {
            "value": self.value,
            "witness": dict(self.witness),
            "degree_used": self.degree_used,
            "exact": self.exact,
        }


def transversal_order(h: CRMap) -> TransversalOrder:
    g = h.g
    if g.is_zero:
        return TransversalOrder(
            None,
            {"note": "normal component vanishes up to truncation"},
            g.degree,
            g.exact,
        )
    k = min(key[h.w_index] for key in g.terms)
    if k == 0:
        raise StructureError(
            "normal component has a monomial with no w factor; "
            "the map cannot send a normal-form source into a normal-form target"
        )
    lead = min(
        (key for key in g.terms if key[h.w_index] == k), key=grlex_key
    )
    return TransversalOrder(
        k, {"index": list(lead), "value": str(g.terms[lead])}, g.degree, g.exact
    )


# ---------------- identities against hypersurfaces ----------------


def _check_dimensions(h: CRMap, m: NormalHypersurface, mp: NormalHypersurface) -> None:
    if m.n != h.source_n:
        raise ArityMismatch(f"source has n = {m.n} but the map uses {h.source_n}")
    if mp.n != h.target_n:
        raise ArityMismatch(f"target has n = {mp.n} but the map provides {h.target_n}")
    if m.convention is not mp.convention:
        raise StructureError("source and target use different graph conventions")


def sends_into(h: CRMap, m: NormalHypersurface, mp: NormalHypersurface) -> Verdict:
    """Check G(z, Q) = Q'(F(z, Q), conj F(chi, tau), conj G(chi, tau))."""
    _check_dimensions(h, m, mp)
    n = m.n
    arity = 2 * n + 1
    d = min(m.degree, mp.degree, h.degree)

    z_vars = [Series.variable(i, arity, d) for i in range(n)]
    chi_vars = [Series.variable(n + i, arity, d) for i in range(n)]
    tau_var = Series.variable(2 * n, arity, d)

    on_source = z_vars + [m.q]
    conj_args = chi_vars + [tau_var]

    lhs = compose(h.g, on_source)
    f_push = [compose(c, on_source) for c in h.f]
    f_conj = [compose(c.conjugate(), conj_args) for c in h.f]
    g_conj = compose(h.g.conjugate(), conj_args)

    rhs = compose(mp.q, f_push + f_conj + [g_conj])
    diff = lhs - rhs
    if diff.is_zero:
        return certified_true({"exact": diff.exact}, diff.degree)
    lead = diff.leading_index()
    return certified_false(
        {"index": list(lead), "value": str(diff.coefficient(lead))}, diff.degree
    )


def normal_component_reality_check(
    h: CRMap, m: NormalHypersurface, mp: NormalHypersurface
) -> Verdict:
    """For maps between infinite-type models, the lowest w-coefficient of G
    must be a nonzero real constant: G = c w^k + higher order in w."""
    for name, hypo in (
        ("source_infinite_type", classify_type(m).is_infinite),
        ("target_infinite_type", classify_type(mp).is_infinite),
        ("sends_into", sends_into(h, m, mp).is_true),
    ):
        if not hypo:
            return unknown({"failed_hypothesis": name}, h.degree)
    order = transversal_order(h)
    if order.is_flat:
        return unknown({"failed_hypothesis": "not_transversally_flat"}, h.degree)

    k = order.value
    coeff = h.g.coefficient_series([h.w_index], (k,))
    c0 = coeff.constant_term
    tail = coeff - Series.constant(c0, coeff.arity, coeff.degree)
    if not tail.is_zero:
        lead = tail.leading_index()
        return certified_false(
            {
                "note": "w^k coefficient depends on z",
                "order": k,
                "index": list(lead),
                "value": str(tail.coefficient(lead)),
            },
            coeff.degree,
        )
    if not c0:
        return certified_false({"note": "w^k coefficient vanishes at 0", "order": k},
                               coeff.degree)
    if not c0.is_real:
        return certified_false(
            {"note": "w^k coefficient is not real", "order": k, "value": str(c0)},
            coeff.degree,
        )
    return certified_true({"order": k, "value": str(c0)}, coeff.degree)


def trord_bound_check(
    h: CRMap, m: NormalHypersurface, mp: NormalHypersurface
) -> Verdict:
    """Inequality (m' - 1) k <= m - 1 between infinite types and the order of G."""
    cls = classify_type(m)
    cls_p = classify_type(mp)
    for name, hypo in (
        ("source_infinite_type", cls.is_infinite),
        ("target_infinite_type", cls_p.is_infinite),
        ("sends_into", sends_into(h, m, mp).is_true),
    ):
        if not hypo:
            return unknown({"failed_hypothesis": name}, h.degree)
    order = transversal_order(h)
    if order.is_flat:
        return unknown({"failed_hypothesis": "not_transversally_flat"}, h.degree)

    k = order.value
    lhs = (cls_p.m - 1) * k
    rhs = cls.m - 1
    witness = {
        "m_source": cls.m,
        "m_target": cls_p.m,
        "transversal_order": k,
        "bound_lhs": lhs,
        "bound_rhs": rhs,
    }
    d = min(h.degree, m.degree, mp.degree)
    if lhs <= rhs:
        return certified_true(witness, d)
    return certified_false(witness, d)


def basid_check(h: CRMap, m: NormalHypersurface) -> Verdict:
    """Transformation law of the unit part under a CR-transversal self-map:
    Qt(z, chi, 0) = (dG/dw(0))^(m-1) * Qt(F(z,0), conj F(chi,0), 0)."""
    if h.target_n != h.source_n:
        raise ArityMismatch("the transformation law concerns self-maps")
    cls = classify_type(m)
    hypotheses = (
        ("infinite_type", cls.is_infinite),
        ("sends_into", cls.is_infinite and sends_into(h, m, m).is_true),
        ("cr_transversal", is_cr_transversal(h).is_true),
    )
    for name, hypo in hypotheses:
        if not hypo:
            return unknown({"failed_hypothesis": name}, h.degree)

    mm, qt = infinite_unit_part(m)
    n = m.n
    arity = 2 * n + 1
    lhs = qt.set_zero([m.tau_index])

    f0 = [c.set_zero([h.w_index]).embed(arity, list(range(n)) + [2 * n]) for c in h.f]
    f0_conj = [
        c.conjugate().set_zero([h.w_index]).embed(arity, list(range(n, 2 * n)) + [2 * n])
        for c in h.f
    ]
    zero_tau = Series.zero(arity, lhs.degree)
    gw0 = h.g.terms.get(unit(h.g.arity, h.w_index), ZERO)
    rhs = compose(lhs, f0 + f0_conj + [zero_tau]).scale(gw0 ** (mm - 1))

    diff = lhs - rhs
    if diff.is_zero:
        return certified_true(
            {"m": mm, "unit_scale": str(gw0 ** (mm - 1))}, diff.degree
        )
    lead = diff.leading_index()
    return certified_false(
        {"m": mm, "index": list(lead), "value": str(diff.coefficient(lead))},
        diff.degree,
    )
