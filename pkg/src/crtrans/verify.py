"""Property harness: hypothesis-gated conclusion checks on a fixed registry.

Each suite row pairs one statement id with one registry instance. Hypotheses
are certified first; only when every hypothesis is certified true does the
conclusion verdict decide between confirmed and falsified. A falsified row
carries the offending coefficient and is treated as a build-breaking event by
the command line front end.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Tuple

from .crmap import (
    CRMap,
    basid_check,
    identity_map,
    is_automorphism,
    is_cr_transversal,
    is_jacobian_nonzero,
    is_not_totally_degenerate,
    is_transversally_flat,
    normal_component_reality_check,
    sends_into,
    transversal_order,
    trord_bound_check,
)
from .hypersurface import (
    Convention,
    NormalHypersurface,
    TypeKind,
    _gradient_family_rank,
    classify_type,
    is_class_c,
    is_class_cm,
    is_holomorphically_nondegenerate,
)
from .linalg import scalar_determinant
from .models import (
    blowup_hypersurface,
    blowup_map,
    exp_model,
    heisenberg,
    hk_map,
    m_psi,
    m_psi_map,
    remark_instance,
    tk_map,
)
from .scalar import GaussianRational, qr
from .series import Series, compose, exp_series
from .verdict import Status, Verdict, certified_false, certified_true, unknown

__all__ = [
    "SuiteStatus",
    "TheoremSuiteResult",
    "MapInstance",
    "IntertwinedInstance",
    "build_registry",
    "suite_finite_type",
    "suite_infinite_type",
    "suite_easystuff",
    "run_all",
]


class SuiteStatus(str, enum.Enum):
    CONFIRMED = "confirmed"
    HYPOTHESIS_NOT_CERTIFIED = "hypothesis_not_certified"
    FALSIFIED = "FALSIFIED"


@dataclass(frozen=True)
class TheoremSuiteResult:
    theorem: str
    instance: str
    hypotheses: Mapping[str, Verdict]
    conclusion: Verdict
    status: SuiteStatus
    note: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "hypotheses": {k: v.to_json() for k, v in self.hypotheses.items()},
            "conclusion": self.conclusion.to_json(),
            "status": self.status.value,
            "note": self.note,
        }


@dataclass(frozen=True)
class MapInstance:
    """One map row of the registry: h sends (or fails to send) source into target."""

    id: str
    h: CRMap
    source: NormalHypersurface
    target: NormalHypersurface
    realm: str  # "finite" or "infinite"
    note: str = ""


@dataclass(frozen=True)
class IntertwinedInstance:
    """Data (A, B, r) for the scaled self-similarity A(z, chi) = r A(B(z), conj(B)(chi))."""

    id: str
    a: Series  # arity 2n, blocks (z, chi)
    b: Tuple[Series, ...]  # n components of arity n
    r: GaussianRational
    n: int
    note: str = ""


# ---------------- verdict combinators ----------------


def _negate(v: Verdict) -> Verdict:
    if v.is_true:
        return certified_false(v.witness, v.degree_used)
    if v.is_false:
        return certified_true(v.witness, v.degree_used)
    return v


def _both(a_name: str, a: Verdict, b_name: str, b: Verdict) -> Verdict:
    deg = min((d for d in (a.degree_used, b.degree_used) if d is not None), default=None)
    if a.is_false:
        return certified_false({"failed": a_name, **(a.witness or {})}, deg)
    if b.is_false:
        return certified_false({"failed": b_name, **(b.witness or {})}, deg)
    if a.is_true and b.is_true:
        return certified_true({a_name: a.witness, b_name: b.witness}, deg)
    return unknown({a_name: a.status.value, b_name: b.status.value}, deg)


def _either(a_name: str, a: Verdict, b_name: str, b: Verdict) -> Verdict:
    deg = min((d for d in (a.degree_used, b.degree_used) if d is not None), default=None)
    if a.is_true:
        return certified_true({"branch": a_name, **(a.witness or {})}, deg)
    if b.is_true:
        return certified_true({"branch": b_name, **(b.witness or {})}, deg)
    if a.is_false and b.is_false:
        return certified_false({a_name: a.witness, b_name: b.witness}, deg)
    return unknown({a_name: a.status.value, b_name: b.status.value}, deg)


def _agree(a_name: str, a: Verdict, b_name: str, b: Verdict) -> Verdict:
    deg = min((d for d in (a.degree_used, b.degree_used) if d is not None), default=None)
    if a.is_unknown or b.is_unknown:
        return unknown({a_name: a.status.value, b_name: b.status.value}, deg)
    if a.status is b.status:
        return certified_true({a_name: a.status.value, b_name: b.status.value}, deg)
    return certified_false(
        {a_name: a.to_json(), b_name: b.to_json(), "note": "certified disagreement"}, deg
    )


def _row(
    theorem: str,
    instance: str,
    hypotheses: Mapping[str, Verdict],
    conclusion: Verdict,
) -> TheoremSuiteResult:
    failing = [name for name, v in hypotheses.items() if not v.is_true]
    if failing:
        return TheoremSuiteResult(
            theorem,
            instance,
            hypotheses,
            conclusion,
            SuiteStatus.HYPOTHESIS_NOT_CERTIFIED,
            note="uncertified: " + ", ".join(failing),
        )
    if conclusion.is_true:
        return TheoremSuiteResult(theorem, instance, hypotheses, conclusion, SuiteStatus.CONFIRMED)
    if conclusion.is_false:
        return TheoremSuiteResult(theorem, instance, hypotheses, conclusion, SuiteStatus.FALSIFIED)
    return TheoremSuiteResult(
        theorem,
        instance,
        hypotheses,
        conclusion,
        SuiteStatus.HYPOTHESIS_NOT_CERTIFIED,
        note="conclusion unknown at this truncation",
    )


# ---------------- structural hypothesis verdicts ----------------


def _equidimensional(h: CRMap) -> Verdict:
    ok = h.source_n == h.target_n
    wit = {"source_n": h.source_n, "target_n": h.target_n}
    return certified_true(wit, h.degree) if ok else certified_false(wit, h.degree)


def _self_map(m: NormalHypersurface, mp: NormalHypersurface) -> Verdict:
    same = m.n == mp.n and m.convention is mp.convention and m.q == mp.q
    wit = {"note": "target coincides with source" if same else "target differs from source"}
    return certified_true(wit, m.degree) if same else certified_false(wit, m.degree)


def _infinite(cls) -> Verdict:
    if cls.kind is TypeKind.INFINITE:
        return certified_true({"m": cls.m, **(cls.witness or {})}, cls.degree_used)
    if cls.kind is TypeKind.FINITE:
        return certified_false(cls.witness, cls.degree_used)
    return unknown(cls.witness, cls.degree_used)


def _infinite_at_least(cls, bound: int) -> Verdict:
    base = _infinite(cls)
    if not base.is_true:
        return base
    if cls.m >= bound:
        return certified_true({"m": cls.m, "bound": bound}, cls.degree_used)
    return certified_false({"m": cls.m, "bound": bound}, cls.degree_used)


def _order_window(cls_src, cls_tgt) -> Verdict:
    src, tgt = _infinite(cls_src), _infinite(cls_tgt)
    if not src.is_true or not tgt.is_true:
        return unknown({"source": src.status.value, "target": tgt.status.value})
    m, mp = cls_src.m, cls_tgt.m
    wit = {"m": m, "m_prime": mp}
    if 1 < mp <= m < 2 * mp - 1:
        return certified_true(wit, min(cls_src.degree_used, cls_tgt.degree_used))
    return certified_false(wit, min(cls_src.degree_used, cls_tgt.degree_used))


# ---------------- registry ----------------


def _scaling(lam: GaussianRational, mu: GaussianRational, degree: int) -> CRMap:
    f = Series.polynomial(2, degree, {(1, 0): lam})
    g = Series.polynomial(2, degree, {(0, 1): mu})
    return CRMap((f,), g)


def _flat_map(degree: int) -> CRMap:
    return CRMap((Series.polynomial(2, degree, {(1, 0): 1}),), Series.zero(2, degree))


def build_registry(
    degree: int = 10, convention: Convention = Convention.TWO_I
) -> Tuple[List[MapInstance], List[IntertwinedInstance]]:
    heis1 = heisenberg(1, degree, convention)
    heis2 = heisenberg(2, degree, convention)
    psi = (
        Series.polynomial(2, degree, {(1, 0): 1}),
        Series.polynomial(2, degree, {(1, 1): 1}),
    )
    mpsi = m_psi(psi, degree, convention)
    m_sing, sing_target, h_sing = remark_instance(degree, convention)
    e1 = exp_model(1, degree, convention)
    e2 = exp_model(2, degree, convention)
    e3 = exp_model(3, degree, convention)
    m44 = blowup_hypersurface(4, 4, degree, convention)
    m34 = blowup_hypersurface(3, 4, degree, convention)
    m31 = blowup_hypersurface(3, 1, degree, convention)
    m21 = blowup_hypersurface(2, 1, degree, convention)

    maps = [
        MapInstance("identity_on_quadric", identity_map(1, degree), heis1, heis1, "finite"),
        MapInstance(
            "dilation_on_quadric", _scaling(qr(2), qr(4), degree), heis1, heis1, "finite"
        ),
        MapInstance(
            "flat_map_on_quadric",
            _flat_map(degree),
            heis1,
            heis1,
            "finite",
            note="gating control: transversally flat, so no finite-type conclusion applies",
        ),
        MapInstance("graph_push_to_quadric", m_psi_map(psi, degree), mpsi, heis2, "finite"),
        MapInstance(
            "singular_factor_map",
            h_sing,
            m_sing,
            sing_target,
            "finite",
            note="containment is not certified under either graph convention; "
            "kept for the nondegeneracy/jacobian separation",
        ),
        MapInstance("power_map_exp_2", tk_map(2, degree), e2, e1, "infinite"),
        MapInstance("power_map_exp_3", tk_map(3, degree), e3, e1, "infinite"),
        MapInstance(
            "stretch_self_map_exp_1",
            hk_map(4, degree),
            e1,
            e1,
            "infinite",
            note="transversal order 4 on a 1-infinite target: no order bound at m' = 1",
        ),
        MapInstance(
            "rotation_self_map_exp_1",
            _scaling(qr(Fraction(3, 5), Fraction(4, 5)), qr(2), degree),
            e1,
            e1,
            "infinite",
        ),
        MapInstance("negation_self_map_exp_2", _scaling(qr(-1), qr(1), degree), e2, e2, "infinite"),
        MapInstance(
            "quarter_turn_self_map_exp_2", _scaling(qr(0, 1), qr(1), degree), e2, e2, "infinite"
        ),
        MapInstance(
            "dilation_excluded_exp_2",
            _scaling(qr(2), qr(1), degree),
            e2,
            e2,
            "infinite",
            note="negative control: the dilation breaks containment with an exact witness",
        ),
        MapInstance("blowup_window_44_to_34", blowup_map(1, 1, degree), m44, m34, "infinite"),
        MapInstance("blowup_window_31_to_21", blowup_map(1, 1, degree), m31, m21, "infinite"),
        MapInstance(
            "scaling_self_map_blowup_21",
            _scaling(qr(Fraction(1, 4), Fraction(1, 4)), qr(2), degree),
            m21,
            m21,
            "infinite",
        ),
        MapInstance(
            "flat_self_map_blowup_21",
            _flat_map(degree),
            m21,
            m21,
            "infinite",
            note="image lies in the exceptional hypersurface",
        ),
    ]

    pair1 = Series.polynomial(2, degree, {(1, 1): 1})
    pair2 = Series.polynomial(4, degree, {(1, 0, 1, 0): 1, (0, 1, 0, 1): 1})
    iz_chi = Series.polynomial(2, degree, {(1, 1): qr(0, 1)})
    expo = exp_series(iz_chi) - Series.one(2, degree)
    neg1 = (Series.polynomial(1, degree, {(1,): -1}),)
    neg2 = (
        Series.polynomial(2, degree, {(1, 0): -1}),
        Series.polynomial(2, degree, {(0, 1): -1}),
    )
    easy = [
        IntertwinedInstance("pairing_negated", pair1, neg1, qr(1), 1),
        IntertwinedInstance("pairing_negated_two_vars", pair2, neg2, qr(1), 2),
        IntertwinedInstance(
            "pairing_rescaled",
            pair1,
            (Series.polynomial(1, degree, {(1,): 2}),),
            qr(Fraction(1, 4)),
            1,
        ),
        IntertwinedInstance("exponential_negated", expo, neg1, qr(1), 1),
        IntertwinedInstance(
            "quadratic_excluded",
            pair1,
            (Series.polynomial(1, degree, {(2,): 1}),),
            qr(1),
            1,
            note="negative control: the relation fails at degree two",
        ),
    ]
    return maps, easy


# ---------------- suites ----------------


def suite_finite_type(instances: Sequence[MapInstance], seed: int = 0) -> List[TheoremSuiteResult]:
    out: List[TheoremSuiteResult] = []
    for inst in instances:
        if inst.realm != "finite":
            continue
        h, m, mp = inst.h, inst.source, inst.target
        class_c = is_class_c(m, seed=seed)
        hnd = is_holomorphically_nondegenerate(m, seed=seed)
        sends = sends_into(h, m, mp)
        equi = _equidimensional(h)
        nonflat = _negate(is_transversally_flat(h))
        transversal = is_cr_transversal(h)
        nondeg = is_not_totally_degenerate(h, seed=seed)
        jac = is_jacobian_nonzero(h) if equi.is_true else unknown({"note": "not equidimensional"})

        out.append(
            _row(
                "nonflat_map_is_nondegenerate_and_transversal",
                inst.id,
                {
                    "source_class_c": class_c,
                    "sends_into": sends,
                    "equidimensional": equi,
                    "transversally_nonflat": nonflat,
                },
                _both("not_totally_degenerate", nondeg, "cr_transversal", transversal),
            )
        )
        out.append(
            _row(
                "nonzero_jacobian_forces_transversality",
                inst.id,
                {
                    "source_class_c": class_c,
                    "sends_into": sends,
                    "equidimensional": equi,
                    "jacobian_nonzero": jac,
                },
                transversal,
            )
        )
        out.append(
            _row(
                "transversality_equals_nondegeneracy",
                inst.id,
                {"source_class_c": class_c, "sends_into": sends, "equidimensional": equi},
                _agree("cr_transversal", transversal, "not_totally_degenerate", nondeg),
            )
        )
        out.append(
            _row(
                "nonflat_map_has_nonzero_jacobian",
                inst.id,
                {
                    "source_holomorphically_nondegenerate": hnd,
                    "sends_into": sends,
                    "equidimensional": equi,
                    "transversally_nonflat": nonflat,
                },
                jac,
            )
        )
    out.sort(key=lambda r: (r.theorem, r.instance))
    return out


def suite_infinite_type(
    instances: Sequence[MapInstance], seed: int = 0
) -> List[TheoremSuiteResult]:
    out: List[TheoremSuiteResult] = []
    for inst in instances:
        if inst.realm != "infinite":
            continue
        h, m, mp = inst.h, inst.source, inst.target
        cls_src = classify_type(m)
        cls_tgt = classify_type(mp)
        src_inf = _infinite(cls_src)
        tgt_inf = _infinite(cls_tgt)
        sends = sends_into(h, m, mp)
        equi = _equidimensional(h)
        selfmap = _self_map(m, mp)
        flat = is_transversally_flat(h)
        nonflat = _negate(flat)
        transversal = is_cr_transversal(h)
        class_cm = is_class_cm(m, seed=seed) if src_inf.is_true else unknown(
            {"note": "source type not certified infinite"}
        )

        out.append(
            _row(
                "normal_unit_coefficient_is_real",
                inst.id,
                {
                    "source_infinite_type": src_inf,
                    "target_infinite_type": tgt_inf,
                    "sends_into": sends,
                    "transversally_nonflat": nonflat,
                },
                normal_component_reality_check(h, m, mp),
            )
        )
        out.append(
            _row(
                "transversal_order_bound",
                inst.id,
                {
                    "source_infinite_type": src_inf,
                    "target_infinite_type": tgt_inf,
                    "sends_into": sends,
                    "transversally_nonflat": nonflat,
                },
                trord_bound_check(h, m, mp),
            )
        )
        out.append(
            _row(
                "self_map_transversal_or_exceptional",
                inst.id,
                {
                    "self_map": selfmap,
                    "type_at_least_2": _infinite_at_least(cls_src, 2),
                    "sends_into": sends,
                },
                _either("cr_transversal", transversal, "transversally_flat", flat),
            )
        )
        out.append(
            _row(
                "window_map_transversal_or_exceptional",
                inst.id,
                {
                    "order_window": _order_window(cls_src, cls_tgt),
                    "sends_into": sends,
                    "equidimensional": equi,
                },
                _either("cr_transversal", transversal, "transversally_flat", flat),
            )
        )
        out.append(
            _row(
                "unit_scale_transformation_law",
                inst.id,
                {
                    "self_map": selfmap,
                    "source_infinite_type": src_inf,
                    "sends_into": sends,
                    "cr_transversal": transversal,
                },
                basid_check(h, m) if selfmap.is_true else unknown({"note": "not a self-map"}),
            )
        )
        out.append(
            _row(
                "transversal_self_map_is_automorphism",
                inst.id,
                {
                    "self_map": selfmap,
                    "source_class_cm": class_cm,
                    "sends_into": sends,
                    "cr_transversal": transversal,
                },
                is_automorphism(h),
            )
        )
        out.append(
            _row(
                "self_map_flat_or_automorphism",
                inst.id,
                {
                    "self_map": selfmap,
                    "source_class_cm": class_cm,
                    "type_at_least_2": _infinite_at_least(cls_src, 2),
                    "sends_into": sends,
                },
                _either("transversally_flat", flat, "automorphism", is_automorphism(h)),
            )
        )
    out.sort(key=lambda r: (r.theorem, r.instance))
    return out


def _relation_holds(inst: IntertwinedInstance) -> Verdict:
    n = inst.n
    a, b = inst.a, inst.b
    args = [c.embed(2 * n, list(range(n))) for c in b]
    args += [c.conjugate().embed(2 * n, list(range(n, 2 * n))) for c in b]
    rhs = compose(a, args).scale(inst.r)
    diff = a - rhs
    if diff.is_zero:
        return certified_true({"exact": diff.exact}, diff.degree)
    lead = diff.leading_index()
    return certified_false(
        {"index": list(lead), "value": str(diff.coefficient(lead))}, diff.degree
    )


def suite_easystuff(
    instances: Sequence[IntertwinedInstance], seed: int = 0
) -> List[TheoremSuiteResult]:
    out: List[TheoremSuiteResult] = []
    for inst in instances:
        n = inst.n
        rank = _gradient_family_rank(
            inst.a, n, tuple(range(n)), n, k_max=inst.a.degree - 1, seed=seed
        )
        relation = _relation_holds(inst)
        db0 = [
            [c.coefficient(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]
            for c in inst.b
        ]
        det = scalar_determinant(db0)
        conclusion = (
            certified_true({"det": str(det)}, inst.a.degree)
            if det != GaussianRational(0)
            else certified_false({"det": "0"}, inst.a.degree)
        )
        out.append(
            _row(
                "intertwining_map_is_invertible",
                inst.id,
                {"coefficient_family_rank_full": rank, "scaled_relation": relation},
                conclusion,
            )
        )
    out.sort(key=lambda r: (r.theorem, r.instance))
    return out


# ---------------- entry point ----------------


def run_all(degree: int = 10, convention: Convention = Convention.TWO_I, seed: int = 0) -> dict:
    maps, easy = build_registry(degree, convention)
    suites = {
        "finite_type": suite_finite_type(maps, seed=seed),
        "infinite_type": suite_infinite_type(maps, seed=seed),
        "easystuff": suite_easystuff(easy, seed=seed),
    }
    counts = {"confirmed": 0, "hypothesis_not_certified": 0, "falsified": 0}
    for rows in suites.values():
        for r in rows:
            if r.status is SuiteStatus.CONFIRMED:
                counts["confirmed"] += 1
            elif r.status is SuiteStatus.FALSIFIED:
                counts["falsified"] += 1
            else:
                counts["hypothesis_not_certified"] += 1
    notes = {inst.id: inst.note for inst in maps if inst.note}
    notes.update({inst.id: inst.note for inst in easy if inst.note})
    return {
        "degree": degree,
        "convention": convention.value,
        "seed": seed,
        "suites": {name: [r.to_json() for r in rows] for name, rows in suites.items()},
        "instance_notes": notes,
        "counts": counts,
        "falsified": counts["falsified"] > 0,
    }
