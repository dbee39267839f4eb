"""PBW straightening, derivations, strings, the reversal, crystal ops, lattice."""

from __future__ import annotations

import random
from itertools import product

import pytest

from free_oracle import (
    defining_relations,
    equal_in_quotient,
    free_mul,
    free_of_pbw,
    gram_rank,
    words_of_weight,
)
from supercrystal.qfield import QRat
from supercrystal.superpbw import (
    PBWVector,
    Root,
    RootData,
    Weight,
    crystal_e,
    crystal_f,
    edoubleprime,
    eprime,
    f_divided,
    from_json,
    in_lattice,
    labels_of_weight,
    lattice_residue,
    lattice_vector,
    normal_form,
    qform,
    sigma_0n,
    string_decompose,
    to_json,
)

_Q1 = QRat.one()

RANKS = [(2, 1), (1, 2), (2, 2)]
RDS = {mn: RootData(*mn) for mn in RANKS}
RD11 = RootData(1, 1)
RD13 = RootData(1, 3)


def qp(e: int) -> QRat:
    return QRat.q_power(e)


def rvec(rd: RootData, a: int, b: int) -> PBWVector:
    return PBWVector.root_monomial(rd, rd.root_index[Root(a, b)])


def random_word(rng: random.Random, rd: RootData, maxlen: int) -> tuple[int, ...]:
    k = rng.randint(1, maxlen)
    return tuple(rng.choice(rd.index_set) for _ in range(k))


def labels_up_to(rd: RootData, deg: int) -> list[tuple[int, ...]]:
    ranges = []
    for idx in range(rd.nroots):
        h = rd.roots[idx].height
        cap = 1 if rd.is_odd_index(idx) else deg // h
        ranges.append(range(cap + 1))
    return [t for t in product(*ranges) if rd.monomial_height(t) <= deg]


def weights_of_degree(rd: RootData, deg: int) -> list[tuple[int, ...]]:
    """Negative weights reachable by words with deg letters, as coord tuples."""
    out = []
    for counts in product(range(deg + 1), repeat=rd.ell - 1):
        if sum(counts) != deg:
            continue
        padded = (0,) + counts + (0,)
        out.append(tuple(padded[k] - padded[k + 1] for k in range(rd.ell)))
    return out


# -- straightening against the oracle ---------------------------------------


def test_defining_relations_straighten_to_zero():
    for (m, n), rd in RDS.items():
        for rel in defining_relations(m, n):
            acc = PBWVector.zero(rd)
            for word, c in rel.items():
                acc = acc + normal_form(rd, word, c)
            assert acc.is_zero(), (m, n, rel)


def test_defining_relations_pair_to_zero():
    for (m, n), _ in RDS.items():
        for rel in defining_relations(m, n):
            assert equal_in_quotient(m, rel, {}), (m, n, rel)


def test_gram_rank_matches_pbw_monomial_count():
    for (m, n), rd in RDS.items():
        for deg in range(1, 5):
            for mu in weights_of_degree(rd, deg):
                words = words_of_weight(mu)
                expected = len(labels_of_weight(rd, Weight(mu)))
                assert gram_rank(m, words) == expected, (m, n, mu)


def test_root_vector_products_match_oracle():
    # every out-of-order pair exercises its row of the rewrite table
    for (m, n), rd in RDS.items():
        for hi in range(rd.nroots):
            fhi = rd.free_root_vector(hi)
            for lo in range(hi + 1):
                if lo == hi and not rd.is_odd_index(hi):
                    continue
                u = PBWVector.root_monomial(rd, hi) * PBWVector.root_monomial(rd, lo)
                fu = free_mul(fhi, rd.free_root_vector(lo))
                assert equal_in_quotient(m, fu, free_of_pbw(u)), (m, n, hi, lo)


def test_normal_form_examples():
    for (m, n), rd in RDS.items():
        for i in rd.index_set:
            assert normal_form(rd, [i]) == PBWVector.generator(rd, i)
    assert normal_form(RD11, [1, 1]).is_zero()
    rd = RDS[(2, 1)]
    got = rvec(rd, 1, 3) * rvec(rd, 2, 3)
    want = (rvec(rd, 2, 3) * rvec(rd, 1, 3)).scale(-qp(1))
    assert got == want


def test_normal_form_matches_oracle():
    rng = random.Random(8821)
    for (m, n), rd in RDS.items():
        for _ in range(60):
            word = random_word(rng, rd, 4)
            v = normal_form(rd, word)
            assert equal_in_quotient(m, {word: _Q1}, free_of_pbw(v)), (m, n, word)
            if v:
                expect = Weight.zero(rd.ell)
                for i in word:
                    expect = expect - rd.alpha(i)
                assert v.weight() == expect


def test_strategies_agree():
    rng = random.Random(40317)
    for (m, n), rd in RDS.items():
        for _ in range(200):
            word = random_word(rng, rd, 8)
            a = normal_form(rd, word, strategy="latest")
            b = normal_form(rd, word, strategy="leftmost")
            c = normal_form(rd, word, strategy="rightmost")
            assert a == b == c, (m, n, word)
    with pytest.raises(ValueError):
        normal_form(RD11, [1], strategy="fastest")


# -- bicharacter and derivations ---------------------------------------------


def test_qform_examples():
    rd = RDS[(2, 1)]
    d1 = Weight((1, 0, 0))
    d2 = Weight((0, 1, 0))
    assert qform(rd, d1, d1) == qp(1)
    assert qform(rd, d1, d2) == _Q1
    assert qform(rd, rd.root_weight(Root(1, 3)), rd.root_weight(Root(2, 3))) == -qp(-1)
    rd12 = RDS[(1, 2)]
    assert qform(rd12, Weight((0, 1, 0)), Weight((0, 1, 0))) == -qp(-1)


def test_eprime_on_unit_and_generators():
    for (m, n), rd in RDS.items():
        for i in rd.index_set:
            assert eprime(rd, i, PBWVector.unit(rd)).is_zero()
            for j in rd.index_set:
                got = eprime(rd, i, PBWVector.generator(rd, j))
                want = PBWVector.unit(rd) if i == j else PBWVector.zero(rd)
                assert got == want


def test_eprime_examples():
    rd = RDS[(2, 2)]
    assert eprime(rd, 1, rvec(rd, 2, 3)).is_zero()
    u, v = rvec(rd, 2, 3), rvec(rd, 1, 3)
    direct = eprime(rd, 2, u * v)
    twist = rd.qform(rd.alpha(2), rd.root_weight(Root(2, 3))).inverse()
    leibniz = eprime(rd, 2, u) * v + (u * eprime(rd, 2, v)).scale(twist)
    assert direct == leibniz
    rd21 = RDS[(2, 1)]
    assert eprime(rd21, 1, rvec(rd21, 1, 3)) == PBWVector.generator(rd21, 2).scale(
        _Q1 - qp(2)
    )


def test_edoubleprime_kills_odd_root_vectors():
    rd = RDS[(2, 2)]
    for idx in range(rd.odd_count):
        assert edoubleprime(rd, 1, PBWVector.root_monomial(rd, idx)).is_zero()


def test_eprime_divided_powers():
    rd = RDS[(2, 2)]
    for k in range(1, 5):
        assert eprime(rd, 1, f_divided(rd, 1, k)) == f_divided(rd, 1, k - 1).scale(
            qp(1 - k)
        )
        assert eprime(rd, 3, f_divided(rd, 3, k)) == f_divided(rd, 3, k - 1).scale(
            qp(k - 1)
        )


# -- string decompositions ----------------------------------------------------


def test_string_examples():
    rd = RDS[(2, 1)]
    f2 = PBWVector.generator(rd, 2)
    assert string_decompose(rd, 1, "left", f2) == [f2]
    f1 = PBWVector.generator(rd, 1)
    assert string_decompose(rd, 1, "left", f1) == [
        PBWVector.zero(rd),
        PBWVector.unit(rd),
    ]
    u = f1 * rvec(rd, 2, 3)
    assert string_decompose(rd, 1, "left", u) == [PBWVector.zero(rd), f2]


def test_string_errors():
    rd = RDS[(2, 1)]
    u = PBWVector.generator(rd, 1)
    with pytest.raises(ValueError):
        string_decompose(rd, 2, "left", u)
    with pytest.raises(ValueError):
        string_decompose(rd, 1, "right", u)
    with pytest.raises(ValueError):
        string_decompose(rd, 1, "up", u)


def test_string_reconstruction_and_kernel():
    rng = random.Random(515)
    for (m, n), rd in RDS.items():
        for _ in range(40):
            word = random_word(rng, rd, 5)
            u = normal_form(rd, word)
            if u.is_zero():
                continue
            for i in rd.index_set:
                if i == m:
                    continue
                side = "left" if i < m else "right"
                comps = string_decompose(rd, i, side, u)
                acc = PBWVector.zero(rd)
                for k, uk in enumerate(comps):
                    assert eprime(rd, i, uk).is_zero(), (m, n, word, i, k)
                    if side == "left":
                        acc = acc + f_divided(rd, i, k) * uk
                    else:
                        acc = acc + uk * f_divided(rd, i, k)
                assert acc == u, (m, n, word, i)


# -- the reversal of the 0|n subalgebra ----------------------------------------


def test_sigma_fixes_generators_and_twists_pairs():
    for i in (2, 3):
        g = PBWVector.generator(RD13, i)
        assert sigma_0n(RD13, g) == g
    u = normal_form(RD13, [2, 3])
    assert sigma_0n(RD13, u) == normal_form(RD13, [3, 2], -qp(1))


def test_sigma_involution_and_commutes_with_eprime():
    rng = random.Random(9190)
    for rd in (RDS[(1, 2)], RD13):
        letters = [i for i in rd.index_set if i > rd.m]
        for _ in range(30):
            word = tuple(rng.choice(letters) for _ in range(rng.randint(1, 4)))
            u = normal_form(rd, word)
            su = sigma_0n(rd, u)
            assert sigma_0n(rd, su) == u
            for i in letters:
                assert sigma_0n(rd, eprime(rd, i, su)) == eprime(rd, i, u)


def test_sigma_divided_power_and_domain():
    rd = RDS[(1, 2)]
    for c in range(1, 5):
        assert sigma_0n(rd, f_divided(rd, 2, c)) == f_divided(rd, 2, c).scale(
            qp(-c * (c - 1))
        )
    with pytest.raises(ValueError):
        sigma_0n(rd, PBWVector.generator(rd, 1))


# -- crystal operators ----------------------------------------------------------


def test_crystal_examples():
    for (m, n), rd in RDS.items():
        assert crystal_f(rd, m, PBWVector.unit(rd)) == PBWVector.generator(rd, m)
        assert crystal_e(rd, m, PBWVector.generator(rd, m)) == PBWVector.unit(rd)
    assert crystal_f(RD11, 1, PBWVector.generator(RD11, 1)).is_zero()


def test_crystal_rank_one_ladders():
    rd21 = RDS[(2, 1)]
    for c in range(5):
        assert crystal_f(rd21, 1, f_divided(rd21, 1, c)) == f_divided(rd21, 1, c + 1)
        if c >= 1:
            assert crystal_e(rd21, 1, f_divided(rd21, 1, c)) == f_divided(
                rd21, 1, c - 1
            )
    rd12 = RDS[(1, 2)]
    for c in range(5):
        assert crystal_f(rd12, 2, f_divided(rd12, 2, c)) == f_divided(
            rd12, 2, c + 1
        ).scale(qp(-2 * c))
        if c >= 1:
            assert crystal_e(rd12, 2, f_divided(rd12, 2, c)) == f_divided(
                rd12, 2, c - 1
            ).scale(qp(2 * c - 2))


def test_crystal_lattice_ladders_are_exact():
    rd21 = RDS[(2, 1)]
    rd12 = RDS[(1, 2)]
    for c in range(5):
        assert crystal_f(rd21, 1, lattice_vector(rd21, (0, 0, c))) == lattice_vector(
            rd21, (0, 0, c + 1)
        )
        assert crystal_f(rd12, 2, lattice_vector(rd12, (0, 0, c))) == lattice_vector(
            rd12, (0, 0, c + 1)
        )


# -- lattice -----------------------------------------------------------------


def test_lattice_residue_examples():
    rd = RD11
    ok, res = lattice_residue(rd, PBWVector.unit(rd))
    assert ok and res == {(0,): 1}
    ok, res = lattice_residue(rd, PBWVector.generator(rd, 1).scale(qp(1)))
    assert ok and res == {}
    ok, res = lattice_residue(rd, PBWVector.generator(rd, 1).scale(qp(-1)))
    assert not ok and res is None
    assert not in_lattice(rd, PBWVector.generator(rd, 1).scale(qp(-1)))


def test_lattice_basis_residues():
    rd = RDS[(2, 2)]
    for lab in labels_up_to(rd, 3):
        ok, res = lattice_residue(rd, lattice_vector(rd, lab))
        assert ok and res == {lab: 1}, lab


def test_kappa_style_residue_example():
    rd = RDS[(1, 2)]
    u = crystal_f(rd, 2, crystal_f(rd, 1, PBWVector.unit(rd)))
    ok, res = lattice_residue(rd, u)
    assert ok and res == {(1, 0, 1): 1}


def test_crystal_ops_preserve_lattice():
    cases = [(RD11, 5), (RDS[(2, 1)], 5), (RDS[(1, 2)], 5), (RDS[(2, 2)], 4)]
    for rd, deg in cases:
        for lab in labels_up_to(rd, deg):
            v = lattice_vector(rd, lab)
            for i in rd.index_set:
                assert in_lattice(rd, crystal_f(rd, i, v)), (rd.m, rd.n, lab, i)
                assert in_lattice(rd, crystal_e(rd, i, v)), (rd.m, rd.n, lab, i)


def test_crystal_residue_bidirectional():
    for (m, n), rd in RDS.items():
        for lab in labels_up_to(rd, 3):
            v = lattice_vector(rd, lab)
            for i in rd.index_set:
                fv = crystal_f(rd, i, v)
                if fv.is_zero():
                    continue
                ev = crystal_e(rd, i, fv)
                if ev.is_zero():
                    continue
                ok, back = lattice_residue(rd, ev)
                assert ok
                neg = {k: -x for k, x in back.items()}
                assert back == {lab: 1} or neg == {lab: 1}, (m, n, lab, i)


# -- grading and serialization --------------------------------------------------


def test_weight_grading_of_products():
    rng = random.Random(2741)
    for (m, n), rd in RDS.items():
        for _ in range(25):
            u = normal_form(rd, random_word(rng, rd, 3))
            v = normal_form(rd, random_word(rng, rd, 3))
            if u.is_zero() or v.is_zero() or (u * v).is_zero():
                continue
            assert (u * v).weight() == u.weight() + v.weight()


def test_json_round_trip():
    rng = random.Random(606)
    rd = RDS[(2, 2)]
    labs = labels_up_to(rd, 4)
    for _ in range(20):
        terms = {}
        for lab in rng.sample(labs, 4):
            terms[lab] = qp(rng.randint(-3, 3)) * QRat.from_int(rng.randint(1, 5))
        u = PBWVector(rd, terms)
        assert from_json(rd, to_json(u)) == u
    with pytest.raises(ValueError):
        from_json(rd, [{"exponents": [[0, 2]], "coeff": "1"}])
