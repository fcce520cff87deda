"""Acceptance suite: one test per criterion, each printing its verdict.

Every computed object is exact; tolerances appear only as truncation
budgets for the series checks.  Run with -v (one line per criterion)
or -s (explicit verdict prints).
"""

from fractions import Fraction

from qwp.kernels import Flavor, b_stream
from qwp.qseries import kernel_limit_trend, oracle_compare, verify_to_budget
from qwp.rings import GenFamily, RingElem, zeta_even, zeta_odd_even
from qwp.supervolumes import super_limit, super_volume, super_weight
from qwp.volumes import VolumePoly, classical_limit, classical_weight, volume

F = Fraction
Q = Flavor.Q_CLASSICAL
WP = Flavor.WP_CLASSICAL
QS = Flavor.Q_SUPER
WPS = Flavor.WP_SUPER
QZ = GenFamily.Q_ZETA
QZO = GenFamily.Q_ZETA_ODD
PI = GenFamily.PI_SQ


def _c(family, value):
    return RingElem.const(family, value)


def _gen(family, k, scale=1):
    return RingElem.gen(family, k).scale(scale)


def _pi_pow(e, scale):
    return RingElem(PI, {((1, e),): F(scale)})


def stable_pairs(max_level):
    pairs = []
    for level in range(1, max_level + 1):
        for g in range(level + 2):
            n = level + 2 - 2 * g
            if n >= 1 and not (g == 0 and n < 3):
                pairs.append((g, n))
    return pairs


def super_triples(max_level):
    triples = []
    for base in range(-1, max_level + 1):
        for g in range(base + 2):
            n = base + 2 - 2 * g
            if n >= 1:
                triples.append((g, n, max_level - base))
    return triples


def test_criterion_1_golden_q_volumes():
    z2 = _gen(QZ, 1)
    z4 = _gen(QZ, 2)
    assert volume(Q, 1, 1) == VolumePoly(
        QZ, 1, {(1,): _c(QZ, F(1, 48)), (0,): z2.scale(F(1, 2))}
    )
    half = _c(QZ, F(1, 2))
    assert volume(Q, 0, 4) == VolumePoly(
        QZ,
        4,
        {
            (1, 0, 0, 0): half,
            (0, 1, 0, 0): half,
            (0, 0, 1, 0): half,
            (0, 0, 0, 1): half,
            (0, 0, 0, 0): z2.scale(12),
        },
    )
    assert volume(Q, 1, 2) == VolumePoly(
        QZ,
        2,
        {
            (2, 0): _c(QZ, F(1, 192)),
            (1, 1): _c(QZ, F(1, 96)),
            (0, 2): _c(QZ, F(1, 192)),
            (1, 0): z2.scale(F(1, 2)),
            (0, 1): z2.scale(F(1, 2)),
            (0, 0): z4.scale(5) + z2 * z2.scale(7),
        },
    )
    print("criterion 1: PASS (golden q volumes, exact)")


def test_criterion_2_golden_wp_volumes():
    assert volume(WP, 1, 1) == VolumePoly(
        PI, 1, {(1,): _c(PI, F(1, 48)), (0,): _pi_pow(1, F(1, 12))}
    )
    half = _c(PI, F(1, 2))
    assert volume(WP, 0, 4) == VolumePoly(
        PI,
        4,
        {
            (1, 0, 0, 0): half,
            (0, 1, 0, 0): half,
            (0, 0, 1, 0): half,
            (0, 0, 0, 1): half,
            (0, 0, 0, 0): _pi_pow(1, 2),
        },
    )
    assert volume(WP, 1, 2) == VolumePoly(
        PI,
        2,
        {
            (2, 0): _c(PI, F(1, 192)),
            (1, 1): _c(PI, F(1, 96)),
            (0, 2): _c(PI, F(1, 192)),
            (1, 0): _pi_pow(1, F(1, 12)),
            (0, 1): _pi_pow(1, F(1, 12)),
            (0, 0): _pi_pow(2, F(1, 4)),
        },
    )
    print("criterion 2: PASS (golden classical-limit volumes with pi^2/12, 2pi^2, pi^4/4)")


def test_criterion_3_classical_limit_level_5():
    pairs = stable_pairs(5)
    assert (3, 1) in pairs and (0, 7) in pairs
    for g, n in pairs:
        assert classical_limit(volume(Q, g, n)) == volume(WP, g, n), (g, n)
    print(f"criterion 3: PASS (limit = classical engine on {len(pairs)} stable pairs, level <= 5)")


def test_criterion_4_golden_disk_series():
    zo2 = _gen(QZO, 1)
    zo4 = _gen(QZO, 2)
    disk = super_volume(QS, 0, 1, 6)
    assert disk.part(2) == VolumePoly.const(QZO, 1, 1)
    assert disk.part(4) == VolumePoly(
        QZO, 1, {(1,): _c(QZO, F(1, 2)), (0,): zo2.scale(48)}
    )
    assert disk.part(6) == VolumePoly(
        QZO,
        1,
        {
            (2,): _c(QZO, F(3, 8)),
            (1,): zo2.scale(240),
            (0,): zo4.scale(5760) + zo2 * zo2.scale(17280),
        },
    )
    print("criterion 4: PASS (disk series m = 2, 4, 6 exact; stream constant 16 pinned)")


def test_criterion_5_super_limit_level_6():
    triples = super_triples(6)
    for g, n, m_max in triples:
        assert super_limit(super_volume(QS, g, n, m_max)) == super_volume(WPS, g, n, m_max), (
            g,
            n,
            m_max,
        )
    print(f"criterion 5: PASS (super limit = classical-limit engine on {len(triples)} series, level <= 6)")


def test_criterion_6_identity_suite():
    target = F(1, 10**30)
    checked = 0
    for q in (F(1, 4), F(1, 2)):
        for k in range(-4, 7):
            rep = verify_to_budget("even", k, q, target)
            assert rep.passed and rep.budget <= target, ("even", k, q)
            checked += 1
        for k in range(-3, 6):
            rep = verify_to_budget("odd", k, q, target)
            assert rep.passed and rep.budget <= target, ("odd", k, q)
            checked += 1
    print(f"criterion 6: PASS ({checked} identity checks, budget <= 1e-30)")


def test_criterion_7_oracle_equivalence():
    cap = F(1, 10**25)
    checked = 0
    for flavor in (Q, QS):
        for r in (F(1, 2), F(3, 5)):  # q = 1/4, 9/25
            for k in range(5):
                for y in (F(0), F(1), F(2), F(7, 3)):
                    rep = oracle_compare(flavor, k, y, r)
                    assert rep.passed, (flavor, k, y, r)
                    assert rep.budget <= cap, (flavor, k, y, r)
                    checked += 1
    print(f"criterion 7: PASS ({checked} oracle comparisons, combined budget <= 1e-25)")


def test_criterion_8_property_suites_and_trend():
    # symmetry and homogeneity over everything criteria 1-3 compute
    for flavor in (Q, WP):
        for g, n in stable_pairs(5):
            v = volume(flavor, g, n)
            assert v.is_symmetric(), (flavor, g, n)
            assert v.is_homogeneous(classical_weight(g, n)), (flavor, g, n)
    # same for the super series of criteria 4-5, plus odd parts vanish
    for flavor in (QS, WPS):
        for g, n, m_max in super_triples(6):
            s = super_volume(flavor, g, n, m_max)
            for m in range(m_max + 1):
                p = s.part(m)
                if m % 2 == 1:
                    assert p.is_zero(), (flavor, g, n, m)
                    continue
                assert p.is_symmetric(), (flavor, g, n, m)
                assert p.is_homogeneous(super_weight(g, m)), (flavor, g, n, m)
    # stream-limit compatibility up to n = 8
    z_img = {k: zeta_even(k) for k in range(1, 9)}
    zo_img = {k: zeta_odd_even(k) for k in range(1, 9)}
    for n in range(9):
        assert b_stream(Q, n).substitute(PI, z_img) == b_stream(WP, n)
        assert b_stream(QS, n).substitute(PI, zo_img) == b_stream(WPS, n)
    # kernel trend: discrepancy falls strictly along r = 0.9, 0.95, 0.99
    rs = (F(9, 10), F(19, 20), F(99, 100))
    for x, y in ((F(1), F(0)), (F(1), F(1)), (F(2), F(1))):
        rep = kernel_limit_trend(x, y, rs, Q, dps=60)
        assert rep.strictly_decreasing, (x, y)
    print("criterion 8: PASS (symmetry, homogeneity, odd parts zero, stream limits, kernel trend)")
