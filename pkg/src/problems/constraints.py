"""
Constraint generators for the lifted variable z.

Every generator returns `Constraint` records whose matrices A satisfy
zᵀAz = 0 on feasible lifts (w = ±1, rotations in SO(3), substitution
variables consistent with poses and landmarks). The homogenizing
constraint zᵀA₀z = w² = 1 is kept separate.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import List, Sequence

import numpy as np
import scipy.sparse as sp

from src.problems.forms import LinearForm, QuadraticForm, combine, skew_forms, var
from src.problems.layout import VariableLayout

log = logging.getLogger(__name__)

BASE = "base"
REDUNDANT = "redundant"


@dataclass(frozen=True)
class Constraint:
    """
    Homogeneous equality zᵀAz = 0.

    Args:
        matrix (sp.csr_array): Symmetric n×n constraint matrix.
        label (str): "base" or "redundant".
        family (str): Generating family, e.g. "orthogonality".
        tag (str): Provenance, e.g. "c0:(0,1)".
    """

    matrix: sp.csr_array
    label: str
    family: str
    tag: str

    def evaluate(self, z: np.ndarray) -> float:
        return float(z @ (self.matrix @ z))


def _column(layout: VariableLayout, i: int, col: int) -> List[LinearForm]:
    return [var(layout.c_entry(i, row, col)) for row in range(3)]


def _row(layout: VariableLayout, i: int, row: int) -> List[LinearForm]:
    return [var(layout.c_entry(i, row, col)) for col in range(3)]


def _block(start: int) -> List[LinearForm]:
    return [var(start + a) for a in range(3)]


def _difference(u: List[LinearForm], v: List[LinearForm]) -> List[LinearForm]:
    """u − v componentwise."""
    return [combine(a, b, scales=[1.0, -1.0]) for a, b in zip(u, v)]


def _rotate(layout: VariableLayout, i: int, u: List[LinearForm], transpose=False):
    """Pairs (C_i[a, :] or C_i[:, a], u) whose products give (C u)[a] or (Cᵀu)[a]."""
    out = []
    for a in range(3):
        if transpose:
            entries = [var(layout.c_entry(i, b, a)) for b in range(3)]
        else:
            entries = [var(layout.c_entry(i, a, b)) for b in range(3)]
        out.append(list(zip(entries, u)))
    return out


def _dot(form: QuadraticForm, u, v, coef: float = 1.0) -> QuadraticForm:
    for a, b in zip(u, v):
        form.add_product(a, b, coef)
    return form


def _cross_minus_w(
    layout: VariableLayout, i: int, first: int, second: int, third: int
) -> List[QuadraticForm]:
    """Components of c_first × c_second − c_third · w."""
    n, w = layout.dim, var(layout.w)
    sk = skew_forms(_column(layout, i, first))
    u, t = _column(layout, i, second), _column(layout, i, third)
    forms = []
    for a in range(3):
        form = QuadraticForm(n)
        for b in range(3):
            form.add_product(sk[a][b], u[b])
        form.add_product(t[a], w, -1.0)
        forms.append(form)
    return forms


def _records(forms, label: str, family: str, tags: Sequence[str]) -> List[Constraint]:
    return [
        Constraint(form.build(), label, family, tag)
        for form, tag in zip(forms, tags)
        if not form.is_zero()
    ]


def homogenizing_constraint(layout: VariableLayout) -> sp.csr_array:
    """A₀ with a single unit entry at (w, w)."""
    return QuadraticForm(layout.dim).add(layout.w, layout.w, 1.0).build()


def base_rotation_constraints(layout: VariableLayout, i: int) -> List[Constraint]:
    """
    Column orthonormality CᵀC = I (6) and handedness c1 × c2 = c3 (3).

    Args:
        layout (VariableLayout): Variable layout holding rotation block c{i}.
        i (int): Pose index.

    Returns:
        list[Constraint]: Nine base constraints.
    """
    n, w = layout.dim, var(layout.w)
    forms, tags = [], []
    for j in range(3):
        for k in range(j, 3):
            form = _dot(QuadraticForm(n), _column(layout, i, j), _column(layout, i, k))
            if j == k:
                form.add_product(w, w, -1.0)
            forms.append(form)
            tags.append(f"c{i}:col({j},{k})")
    out = _records(forms, BASE, "orthogonality", tags)
    cross = _cross_minus_w(layout, i, 0, 1, 2)
    out += _records(cross, BASE, "handedness", [f"c{i}:c1xc2[{a}]" for a in range(3)])
    return out


def redundant_rotation_constraints(
    layout: VariableLayout, i: int
) -> List[Constraint]:
    """
    Row orthonormality CCᵀ = I (6), the two remaining cyclic handedness
    equations (6) and equal column/row norms (9).
    """
    n, w = layout.dim, var(layout.w)
    forms, tags = [], []
    for j in range(3):
        for k in range(j, 3):
            form = _dot(QuadraticForm(n), _row(layout, i, j), _row(layout, i, k))
            if j == k:
                form.add_product(w, w, -1.0)
            forms.append(form)
            tags.append(f"c{i}:row({j},{k})")
    out = _records(forms, REDUNDANT, "row-orthogonality", tags)
    for first, second, third in [(1, 2, 0), (2, 0, 1)]:
        cross = _cross_minus_w(layout, i, first, second, third)
        tags = [f"c{i}:c{first + 1}xc{second + 1}[{a}]" for a in range(3)]
        out += _records(cross, REDUNDANT, "cyclic-handedness", tags)
    forms, tags = [], []
    for j in range(3):
        for k in range(3):
            form = _dot(QuadraticForm(n), _column(layout, i, j), _column(layout, i, j))
            _dot(form, _row(layout, i, k), _row(layout, i, k), -1.0)
            forms.append(form)
            tags.append(f"c{i}:|col{j}|=|row{k}|")
    out += _records(forms, REDUNDANT, "norm-equality", tags)
    return out


def _rotated_products(form, pairs, coef: float) -> None:
    for entry, u in pairs:
        form.add_product(entry, u, coef)


def substitution_constraints(
    layout: VariableLayout, i: int, k: int
) -> List[Constraint]:
    """
    Bilinear substitution m_i^k · w = C_i m_k − t_i · w, three components.
    """
    n, w = layout.dim, var(layout.w)
    s = _block(layout.substitution(i, k))
    t = _block(layout.translation(i))
    cm = _rotate(layout, i, _block(layout.landmark(k)))
    forms = []
    for a in range(3):
        form = QuadraticForm(n)
        form.add_product(s[a], w)
        form.add_product(t[a], w)
        _rotated_products(form, cm[a], -1.0)
        forms.append(form)
    tags = [f"m{i}_{k}[{a}]" for a in range(3)]
    return _records(forms, BASE, "substitution", tags)


def _inner_product_constraints(layout, i, landmarks) -> List[Constraint]:
    n = layout.dim
    t = _block(layout.translation(i))
    forms, tags = [], []
    for k, q in combinations_with_replacement(landmarks, 2):
        mq, mk = _block(layout.landmark(q)), _block(layout.landmark(k))
        form = _dot(QuadraticForm(n), mq, mk)
        sl = [combine(a, b) for a, b in zip(_block(layout.substitution(i, q)), t)]
        sk = [combine(a, b) for a, b in zip(_block(layout.substitution(i, k)), t)]
        _dot(form, sl, sk, -1.0)
        forms.append(form)
        tags.append(f"pose{i}:m{q}.m{k}")
    return _records(forms, REDUNDANT, "inner-product", tags)


def _difference_constraints(layout, i, landmarks) -> List[Constraint]:
    n, w = layout.dim, var(layout.w)
    out: List[Constraint] = []
    rotated, unrotated, commuting = [], [], []
    rotated_tags, unrotated_tags, commuting_tags = [], [], []
    for k, q in combinations(landmarks, 2):
        dm = _difference(_block(layout.landmark(q)), _block(layout.landmark(k)))
        ds = _difference(
            _block(layout.substitution(i, q)), _block(layout.substitution(i, k))
        )
        c_dm = _rotate(layout, i, dm)
        ct_ds = _rotate(layout, i, ds, transpose=True)
        for a in range(3):
            form = QuadraticForm(n)
            _rotated_products(form, c_dm[a], 1.0)
            form.add_product(w, ds[a], -1.0)
            rotated.append(form)
            rotated_tags.append(f"pose{i}:C(m{q}-m{k})[{a}]")

            form = QuadraticForm(n)
            form.add_product(w, dm[a])
            _rotated_products(form, ct_ds[a], -1.0)
            unrotated.append(form)
            unrotated_tags.append(f"pose{i}:Ct(s{q}-s{k})[{a}]")

        sk_s, sk_m = skew_forms(ds), skew_forms(dm)
        for a in range(3):
            for b in range(3):
                form = QuadraticForm(n)
                for c in range(3):
                    form.add_product(sk_s[a][c], var(layout.c_entry(i, c, b)))
                    form.add_product(var(layout.c_entry(i, a, c)), sk_m[c][b], -1.0)
                commuting.append(form)
                commuting_tags.append(f"pose{i}:skew(m{q}-m{k})[{a},{b}]")
    out += _records(rotated, REDUNDANT, "rotated-difference", rotated_tags)
    out += _records(unrotated, REDUNDANT, "unrotated-difference", unrotated_tags)
    out += _records(commuting, REDUNDANT, "skew-commutation", commuting_tags)
    return out


def _distance_constraints(layout, i, j, common) -> List[Constraint]:
    n = layout.dim
    forms, tags = [], []
    for k, q in combinations(common, 2):
        di = _difference(
            _block(layout.substitution(i, q)), _block(layout.substitution(i, k))
        )
        dj = _difference(
            _block(layout.substitution(j, q)), _block(layout.substitution(j, k))
        )
        form = _dot(QuadraticForm(n), di, di)
        _dot(form, dj, dj, -1.0)
        forms.append(form)
        tags.append(f"pose{i},{j}:|m{q}-m{k}|")
    return _records(forms, REDUNDANT, "distance", tags)


def _average_constraints(layout, i, landmarks) -> List[Constraint]:
    n, w = layout.dim, var(layout.w)
    t = _block(layout.translation(i))
    scale = 1.0 / len(landmarks)
    forms = []
    for a in range(3):
        form = QuadraticForm(n)
        form.add_product(w, t[a])
        for k in landmarks:
            cm = _rotate(layout, i, _block(layout.landmark(k)))
            _rotated_products(form, cm[a], -scale)
            form.add_product(w, var(layout.substitution(i, k) + a), scale)
        forms.append(form)
    tags = [f"pose{i}:t=mean[{a}]" for a in range(3)]
    return _records(forms, REDUNDANT, "translation-average", tags)


def redundant_slam_constraints(
    layout: VariableLayout, observed: Sequence[Sequence[int]]
) -> List[Constraint]:
    """
    Redundant constraints implied by rigid landmark geometry.

    For each pose i with observed landmark set N_i:
      - inner products m_lᵀm_k = (m_i^l + t_i)ᵀ(m_i^k + t_i) for k ≤ l in N_i,
      - C_i(m_l − m_k) = m_i^l − m_i^k and its transpose form, for k < l,
      - (m_i^l − m_i^k)^× C_i = C_i (m_l − m_k)^×, for k < l,
      - t_i = mean over N_i of (C_i m_k − m_i^k).
    For each pose pair i < j: equal distances
    ‖m_i^l − m_i^k‖ = ‖m_j^l − m_j^k‖ over landmark pairs observed by both.

    Args:
        layout (VariableLayout): SLAM layout.
        observed (Sequence[Sequence[int]]): Sorted landmark indices per pose.

    Returns:
        list[Constraint]: Generated constraints in family order.
    """
    out: List[Constraint] = []
    for i, landmarks in enumerate(observed):
        if not landmarks:
            continue
        out += _inner_product_constraints(layout, i, landmarks)
        out += _difference_constraints(layout, i, landmarks)
        out += _average_constraints(layout, i, landmarks)
    for i, j in combinations(range(len(observed)), 2):
        common = sorted(set(observed[i]) & set(observed[j]))
        out += _distance_constraints(layout, i, j, common)
    log.debug(f"Generated {len(out)} redundant SLAM constraints")
    return out
