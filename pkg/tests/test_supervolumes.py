from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from qwp.kernels import Flavor
from qwp.rings import GenFamily, RingElem
from qwp.supervolumes import SuperSeries, super_volume, super_limit, super_weight
from qwp.volumes import UnstableInputError, VolumePoly, check_symmetry

F = Fraction
QS = Flavor.Q_SUPER
WPS = Flavor.WP_SUPER


def zqo(k):
    return RingElem.gen(GenFamily.Q_ZETA_ODD, k)


def pi2(e=1):
    return RingElem.gen(GenFamily.PI_SQ, 1) ** e


def super_triples(max_level):
    out = []
    for g in range(max_level // 2 + 2):
        for n in range(1, max_level + 3):
            base = 2 * g - 2 + n
            if base <= max_level:
                out.append((g, n, max_level - base))
    return out


# -- golden disk series ---------------------------------------------------

def test_disk_series_frozen():
    ss = super_volume(QS, 0, 1, 6)
    c = lambda x: RingElem.const(GenFamily.Q_ZETA_ODD, x)
    assert ss.part(0).is_zero()
    assert ss.part(1).is_zero()
    assert ss.part(2) == VolumePoly.const(GenFamily.Q_ZETA_ODD, 1, 1)
    assert ss.part(3).is_zero()
    assert ss.part(4).terms == {(1,): c(F(1, 2)), (0,): zqo(1) * 48}
    assert ss.part(5).is_zero()
    assert ss.part(6).terms == {
        (2,): c(F(3, 8)),
        (1,): zqo(1) * 240,
        (0,): zqo(2) * 5760 + zqo(1) ** 2 * 17280,
    }


def test_disk_series_wp_frozen():
    ss = super_volume(WPS, 0, 1, 6)
    c = lambda x: RingElem.const(GenFamily.PI_SQ, x)
    assert ss.part(4).terms == {(1,): c(F(1, 2)), (0,): pi2() * 6}
    assert ss.part(6).terms == {
        (2,): c(F(3, 8)),
        (1,): pi2() * 30,
        (0,): pi2(2) * 330,
    }


def test_annulus_part_two():
    ss = super_volume(QS, 0, 2, 2)
    assert ss.part(0).is_zero()
    assert ss.part(1).is_zero()
    assert ss.part(2) == VolumePoly.const(GenFamily.Q_ZETA_ODD, 2, 1)


def test_torus_boundary_parts():
    ss = super_volume(QS, 1, 1, 2)
    assert ss.part(0) == VolumePoly.const(GenFamily.Q_ZETA_ODD, 1, F(1, 8))
    assert ss.part(1).is_zero()
    assert ss.part(2).terms == {
        (1,): RingElem.const(GenFamily.Q_ZETA_ODD, F(5, 48)),
        (0,): zqo(1) * 10,
    }


# -- structure -------------------------------------------------------------

def test_odd_parts_vanish():
    for g, n, m_max in super_triples(5):
        ss = super_volume(QS, g, n, m_max)
        for m in range(1, m_max + 1, 2):
            assert ss.part(m).is_zero(), (g, n, m)


def test_symmetry_and_homogeneity():
    for g, n, m_max in super_triples(5):
        ss = super_volume(QS, g, n, m_max)
        for m, p in ss.parts.items():
            assert check_symmetry(p)
            if not p.is_zero():
                assert p.weight() == super_weight(g, m), (g, n, m)


def test_super_limit_matches_wp():
    for g, n, m_max in super_triples(5):
        assert super_limit(super_volume(QS, g, n, m_max)) == super_volume(WPS, g, n, m_max)


def test_super_limit_rejects_wp_input():
    ss = super_volume(WPS, 0, 1, 2)
    with pytest.raises(ValueError):
        super_limit(ss)


# -- validation and plumbing -------------------------------------------------

def test_super_volume_validation():
    with pytest.raises(ValueError):
        super_volume(Flavor.Q_CLASSICAL, 0, 1, 2)
    with pytest.raises(UnstableInputError):
        super_volume(QS, -1, 1, 2)
    with pytest.raises(UnstableInputError):
        super_volume(QS, 0, 0, 2)
    with pytest.raises(ValueError):
        super_volume(QS, 0, 1, -1)


def test_super_series_shape_validation():
    fam = GenFamily.Q_ZETA_ODD
    parts = {0: VolumePoly.zero(fam, 1), 1: VolumePoly.zero(fam, 1)}
    with pytest.raises(ValueError):
        SuperSeries(QS, 0, 1, 2, parts)  # missing m=2
    with pytest.raises(ValueError):
        SuperSeries(QS, 0, 2, 1, parts)  # n mismatch


def test_memo_determinism_across_threads():
    import qwp.supervolumes as sv

    sv._MEMO.clear()
    with ThreadPoolExecutor(max_workers=6) as pool:
        results = list(pool.map(lambda _: super_volume(QS, 1, 2, 4), range(6)))
    assert all(r == results[0] for r in results)


def test_part_zero_outside_initials():
    # everything at level <= 0 vanishes
    ss = super_volume(QS, 0, 2, 0)
    assert ss.part(0).is_zero()
    ss = super_volume(QS, 0, 1, 1)
    assert ss.part(0).is_zero() and ss.part(1).is_zero()
