"""Acceptance suite: one test per criterion, each printing a PASS line with
its runtime (visible thanks to capsys.disabled).

Heavy shared computations (the |D| <= 1e5 survey, the large table builds)
live in session fixtures so criteria can share them; every criterion's
numeric tolerance is pinned here, not in helpers.
"""

import os
import time
from math import log

import numpy as np
import pytest

from cmforms.analytic import coprime_count, totient_over_square_sum, totient_sum
from cmforms.arith import moebius_sieve, totient_sieve
from cmforms.boundary import count_R_interval, equidistribution_report, boundary_matches_two_torsion
from cmforms.classgroup import exponent_survey
from cmforms.conductor import L_of, order_class_number, theta, unit_count
from cmforms.qform import factor_discriminant
from cmforms.tables import (
    ExponentTable,
    all_on_boundary_subtable,
    build_tables,
    diff_against_reference,
)

NCPU = min(os.cpu_count() or 1, 8)

# criteria pay for their own computation inside the timed block; later
# criteria reuse earlier results through these lazy caches
_cache: dict = {}


def _table(E: int):
    if E not in _cache:
        _cache.update(build_tables((E,), threads=NCPU))
    return _cache[E]


def _survey():
    if "survey" not in _cache:
        _cache["survey"] = exponent_survey(10**5, threads=NCPU)
    return _cache["survey"]


class _Reporter:
    def __init__(self, capsys, num, label, budget_s):
        self.capsys = capsys
        self.num = num
        self.label = label
        self.budget = budget_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        with self.capsys.disabled():
            print(f"ACCEPTANCE {self.num:>2} {status} ({dt:8.2f}s / budget {self.budget:.0f}s): {self.label}")
        if exc_type is None and dt > self.budget:
            raise AssertionError(
                f"criterion {self.num} exceeded its runtime budget: {dt:.1f}s > {self.budget}s"
            )
        return False


def _expect_exact(table: ExponentTable, E: int, count: int, max_abs: int):
    assert table.count == count, f"E={E}: count {table.count} != {count}"
    assert table.max_abs == max_abs, f"E={E}: max {table.max_abs} != {max_abs}"
    rep = diff_against_reference(E, table)
    assert rep.ok, f"E={E}: {rep}"


def test_criterion_01_table_exponent_1(capsys):
    with _Reporter(capsys, 1, "exponent-1 table: 13 discriminants, max 163", 1.0):
        _expect_exact(_table(1), 1, 13, 163)


def test_criterion_02_table_exponent_2(capsys):
    with _Reporter(capsys, 2, "exponent-2 table: 88 discriminants, max 7392", 10.0):
        _expect_exact(_table(2), 2, 88, 7392)


def test_criterion_03_tables_3_5_7(capsys):
    with _Reporter(capsys, 3, "exponent-3/5/7 tables: 29/31/40 entries", 120.0):
        _expect_exact(_table(3), 3, 29, 4027)
        _expect_exact(_table(5), 5, 31, 37363)
        _expect_exact(_table(7), 7, 40, 118843)


def test_criterion_04_tables_4_6_8(capsys):
    with _Reporter(capsys, 4, "exponent-4/6/8 tables: 485/1236/2329 entries", 3600.0):
        _cache.update(build_tables((4, 6), threads=NCPU))
        _expect_exact(_table(4), 4, 485, 887040)
        _expect_exact(_table(6), 6, 1236, 43522752)
        _expect_exact(_table(8), 8, 2329, 1723802080)
        # an insufficient scan bound must surface as a reported shortfall,
        # not a silent undercount: restrict the exponent-8 table to seeds
        # within the spec's original 1e7 default and diff it
        t8 = _table(8)
        trimmed = ExponentTable(
            8, 10**7, tuple(e for e in t8.entries if -e.d0 <= 10**7)
        )
        rep = diff_against_reference(8, trimmed)
        assert not rep.ok and rep.summary_mismatches, "shortfall went unreported"
        assert len(rep.missing) == t8.count - trimmed.count > 0


def test_criterion_05_boundary_subtable(capsys):
    with _Reporter(capsys, 5, "odd-or-(-4) filter: 37 discriminants split 9/14/10/4", 10.0):
        picked = all_on_boundary_subtable([_table(1), _table(2)])
        assert len(picked) == 37
        partition = {}
        for e in picked:
            partition[e.label] = partition.get(e.label, 0) + 1
        assert partition == {"e": 9, "2": 14, "2x2": 10, "2x2x2": 4}
        expected = {
            -3, -4, -7, -11, -19, -27, -43, -67, -163,
            -15, -35, -51, -75, -91, -99, -115, -123, -147, -187, -235, -267, -403, -427,
            -195, -315, -435, -483, -555, -595, -627, -715, -795, -1435,
            -1155, -1995, -3003, -3315,
        }
        assert {e.D for e in picked} == expected


def test_criterion_06_boundary_order2_sweep(capsys):
    with _Reporter(capsys, 6, "boundary = order-2 classes, exhaustive |D| <= 1e4", 60.0):
        for n in range(3, 10**4 + 1):
            if n % 4 in (0, 3):
                assert boundary_matches_two_torsion(-n), f"violation at D = {-n}"


def test_criterion_07_equidistribution(capsys):
    with _Reporter(capsys, 7, "boundary counts track (3D/2pi^2) * measure, to 1e8", 300.0):
        r = count_R_interval(10**8, 1, 2)
        predicted = (3 * 10**8 / (2 * np.pi**2)) * 0.5 * log(7 / 3)
        assert r.predicted == pytest.approx(predicted, rel=1e-12)
        assert abs(r.exact - r.predicted) / r.predicted < 0.01
        rels = []
        for delta in (10**5, 10**6, 10**7, 10**8):
            rr = count_R_interval(delta, 1, 2)
            rels.append(abs(rr.exact - rr.predicted) / rr.predicted)
        assert all(a > b for a, b in zip(rels, rels[1:])), rels
        # ten equal-measure bins over [1/2, 5] each track their prediction
        for row in equidistribution_report(10**8, 10, 5):
            assert abs(row.exact - row.predicted) / row.predicted <= 0.02, row


def test_criterion_08_conductor_divisibility_sweeps(capsys):
    with _Reporter(capsys, 8, "L(f) | 12*u*exponent for |D| <= 1e5; f | theta(L(f))", 120.0):
        for n, (_h, e) in _survey().items():
            d0, f = factor_discriminant(-n)
            assert (12 * unit_count(d0) * e) % L_of(d0, f) == 0, f"D = {-n}"
        for d0 in (-3, -4, -7, -8, -163):
            for f in range(1, 10**4 + 1):
                assert theta(d0, L_of(d0, f)) % f == 0, (d0, f)


def test_criterion_09_analytic_envelopes(capsys):
    with _Reporter(capsys, 9, "summatory estimates in calibrated envelopes; exact identity", 60.0):
        for T in (10**3, 10**4, 10**5, 10**6):
            exact, est = coprime_count(T, 30)
            assert abs(exact - est) <= 4 * 30**0.25
            exact, est = totient_sum(T)
            assert abs(exact - est) <= 2 * T * log(T)
            exact, est = totient_over_square_sum(T)
            assert abs(exact - est) <= 12 * log(T) / T
        # Mobius identity, exhaustively for T <= 1e4
        N = 10**4
        mu = moebius_sieve(N).astype(np.int64)
        prefix = np.cumsum(totient_sieve(N))
        for T in range(1, N + 1):
            a = np.arange(1, T + 1)
            oracle = (1 + int(np.sum(mu[1 : T + 1] * (T // a) ** 2))) // 2
            assert int(prefix[T]) == oracle, T


def test_criterion_10_class_number_formula(capsys):
    with _Reporter(capsys, 10, "conductor formula h(d0 f^2) matches enumeration, |D| <= 1e5", 120.0):
        for n, (h, _e) in _survey().items():
            d0, f = factor_discriminant(-n)
            if f == 1:
                continue
            assert order_class_number(d0, f) == h, f"D = {-n}"
        # f = 1 consistency: the formula degenerates to h(d0)
        for n, (h, _e) in _survey().items():
            d0, f = factor_discriminant(-n)
            if f == 1:
                assert order_class_number(d0, 1) == h
                break
