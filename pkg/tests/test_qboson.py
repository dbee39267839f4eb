"""Checks for the rank-one boson tensor machinery.

The kernel vectors get their stated coefficients pinned and are verified
to die under the coupled raising action, with the kernel dimension per
degree confirmed against an independent rational specialization.  The
divided-power expansion is checked through the composition law and the
full congruence grid, the coefficient family against the expansion, its
closed form, valuation pattern, and recursion, and the crystal check
against a hand-solved two-by-two decomposition.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from supercrystal.qboson import (
    BosonTensorVec,
    C_sk,
    E_t,
    act_eprime,
    act_f_pow,
    boson_crystal_check,
    congruence_grid,
    min_degree,
)
from supercrystal.qfield import QRat, q_int
from supercrystal.superpbw import RootData, f_divided, eprime

QP = QRat.q_power
Q1 = QRat.one()


def val(r: QRat, x: Fraction) -> Fraction:
    num = sum(c * x**k for k, c in enumerate(r.num))
    den = sum(c * x**k for k, c in enumerate(r.den))
    return Fraction(num, den)


def unit_residue(v: BosonTensorVec, target: tuple[int, int]) -> bool:
    if any(min_degree(c) < 0 for c in v.coeffs.values()):
        return False
    lead = v.coeffs.get(target, QRat.zero()) - Q1
    if lead and min_degree(lead) < 1:
        return False
    return all(min_degree(c) >= 1 for m, c in v.coeffs.items() if m != target)


def test_e_t_values():
    for l in range(7):
        assert E_t(l, 0) == BosonTensorVec.monomial(l, 0, 0)
    e11 = E_t(1, 1)
    assert e11.coeffs == {(0, 1): Q1, (1, 0): QP(1) / (QP(2) - Q1)}
    e22 = E_t(2, 2)
    assert e22.coeffs[(1, 1)] == QP(1) / (QP(4) - Q1)
    assert e22.coeffs[(2, 0)] == QP(1) / (QP(4) - Q1) * QP(1) / (QP(2) - Q1)
    for l in range(7):
        for t in range(l + 1):
            et = E_t(l, t)
            assert et.coeffs[(0, t)] == Q1
            assert all(min_degree(c) >= 1 for m, c in et.coeffs.items() if m != (0, t))
    with pytest.raises(ValueError):
        E_t(2, 3)
    with pytest.raises(ValueError):
        E_t(2, -1)
    with pytest.raises(ValueError):
        E_t(-1, 0)


def test_e_t_spans_kernel():
    for l in range(7):
        for t in range(l + 1):
            assert act_eprime(E_t(l, t)).is_zero(), (l, t)
    # kernel dimension per degree, confirmed at the specialization q = 7/5:
    # specializing can only enlarge the kernel, so dimension 1 there plus
    # one generic kernel vector pins the generic dimension
    x = Fraction(7, 5)
    for l in (0, 2, 5):
        for d in range(l + 3):
            monos = [(i, d - i) for i in range(min(l, d) + 1)]
            below = [(i, d - 1 - i) for i in range(min(l, d - 1) + 1)]
            rows = []
            for i, j in monos:
                img = act_eprime(BosonTensorVec.monomial(l, i, j))
                rows.append([val(img.coeffs[m], x) if m in img.coeffs else Fraction(0) for m in below])
            rank = 0
            for col in range(len(below)):
                piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
                if piv is None:
                    continue
                rows[rank], rows[piv] = rows[piv], rows[rank]
                for r in range(len(rows)):
                    if r != rank and rows[r][col]:
                        f = rows[r][col] / rows[rank][col]
                        rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
                rank += 1
            assert len(monos) - rank == (1 if d <= l else 0), (l, d)


def test_eprime_matches_pbw_derivation():
    # the right factor is the rank-one negative half, so the coupled
    # raising action at cutoff zero must reproduce the twisted derivation
    rd = RootData(2, 1)
    for b in range(1, 6):
        got = act_eprime(BosonTensorVec.monomial(0, 0, b))
        assert got == BosonTensorVec.monomial(0, 0, b - 1).scale(QP(1 - b))
        assert eprime(rd, 1, f_divided(rd, 1, b)) == f_divided(rd, 1, b - 1).scale(QP(1 - b))


def test_act_f_pow_small_values():
    assert act_f_pow(0, E_t(3, 2)) == E_t(3, 2)
    v = act_f_pow(1, BosonTensorVec.monomial(1, 0, 0))
    assert v.coeffs == {(1, 0): Q1, (0, 1): QP(1)}
    # saturated left factor: only the right-moving term survives
    for l in range(4):
        w = act_f_pow(1, BosonTensorVec.monomial(l, l, 0))
        assert w.coeffs == {(l, 1): QP(-l)}
    with pytest.raises(ValueError):
        act_f_pow(-1, E_t(1, 0))


def test_act_f_pow_composition_law():
    rng = random.Random(20240821)
    for _ in range(40):
        l = rng.randint(0, 4)
        v = BosonTensorVec.zero(l)
        for _ in range(2):
            i = rng.randint(0, l)
            j = rng.randint(0, 3)
            v = v + BosonTensorVec.monomial(l, i, j).scale(QP(rng.randint(-3, 3)))
        s = rng.randint(0, 4)
        lhs = act_f_pow(1, act_f_pow(s, v))
        rhs = act_f_pow(s + 1, v).scale(q_int(s + 1))
        assert lhs == rhs, (l, s)


def test_lowering_congruences():
    for l in range(7):
        for t in range(l + 1):
            for s in range(11):
                v = act_f_pow(s, E_t(l, t))
                target = (s, t) if s <= l - t else (l - t, 2 * t + s - l)
                assert unit_residue(v, target), (l, t, s)
    grid = congruence_grid(6, 10)
    assert len(grid) == 308
    assert all(g["ok"] for g in grid)
    cases = {g["case"] for g in grid}
    assert cases == {1, 2}


def test_c_sk_expansion_and_valuations():
    rng = random.Random(20240821)
    for _ in range(25):
        l = rng.randint(0, 5)
        t = rng.randint(0, l)
        s = rng.randint(l - t + 1, l - t + 6)
        lhs = act_f_pow(s, E_t(l, t))
        rhs = BosonTensorVec.zero(l)
        for k in range(l + 1):
            rhs = rhs + BosonTensorVec.monomial(l, l - k, t + s - l + k).scale(C_sk(l, t, s, k))
        assert lhs == rhs, (l, t, s)
        # closed form of the bottom coefficient
        closed = QP(t * (s + t - l + 1))
        for r in range(1, t + 1):
            closed = closed / (QP(2 * r) - Q1)
        assert C_sk(l, t, s, 0) == closed
        for k in range(l + 1):
            want = 0 if k == t else (s + k - l) * (k - t) if k > t else (s + t + 1 - l) * (t - k)
            assert min_degree(C_sk(l, t, s, k)) == want, (l, t, s, k)


def test_c_sk_recursion():
    rng = random.Random(20240821)
    for _ in range(25):
        l = rng.randint(1, 5)
        t = rng.randint(0, l)
        s = rng.randint(l - t + 1, l - t + 5)
        for k in range(l):
            lhs = C_sk(l, t, s + 1, k) * q_int(s + 1)
            rhs = QP(2 * k - l) * q_int(t + s - l + k + 1) * C_sk(l, t, s, k) + q_int(l - k) * C_sk(
                l, t, s, k + 1
            )
            assert lhs == rhs, (l, t, s, k)
    with pytest.raises(ValueError):
        C_sk(2, 1, 3, 5)
    with pytest.raises(ValueError):
        C_sk(2, 3, 1, 0)


def test_boson_crystal_check_reports():
    rep = boson_crystal_check(0, 5)
    assert rep["nodes"] == 6 and rep["rule_matched"] and rep["lattice_closed"]
    rep = boson_crystal_check(1, 4)
    assert rep["nodes"] == 9 and rep["edges"] == 18 and rep["kernel_basis_checked"]
    rep = boson_crystal_check(3, 6)
    assert rep["rule_matched"]
    with pytest.raises(ValueError):
        boson_crystal_check(7, 4)
    with pytest.raises(ValueError):
        boson_crystal_check(2, 11)
    with pytest.raises(ValueError):
        boson_crystal_check(-1, 4)


def test_string_decomposition_by_hand():
    # degree-one slice at cutoff one: solve the two-by-two system for
    # f v1 (x) v2 against the lowered kernel basis and push the strings
    w0 = act_f_pow(1, E_t(1, 0))
    w1 = E_t(1, 1)
    c0 = Q1 - QP(2)
    c1 = QP(3) - QP(1)
    assert w0.scale(c0) + w1.scale(c1) == BosonTensorVec.monomial(1, 1, 0)
    fvec = act_f_pow(2, E_t(1, 0)).scale(c0) + act_f_pow(1, E_t(1, 1)).scale(c1)
    assert unit_residue(fvec, (1, 1))
    evec = E_t(1, 0).scale(c0)
    assert unit_residue(evec, (0, 0))
