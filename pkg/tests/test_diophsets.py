import random
from fractions import Fraction as F

import pytest

from formspec.cfengine import expand
from formspec.exactcore import (
    ExactError,
    IntPolynomial,
    QuadraticReal,
    RatInterval,
    isolate_real_roots,
)
from formspec.forms import BinaryForm, Mag, act, compare_scalars
from formspec.minima import m_estimate, m_rho
from formspec.diophsets import (
    AelWitness,
    BudgetExhausted,
    ClassifiedInterval,
    DiophParams,
    ael_search,
    construct_S_point,
    cutting_density_estimate,
    in_B_eps,
    in_E_eta,
    structural_classify,
    uniform_fraction,
)

PHI = QuadraticReal(1, 1, 5, 2)
CUBIC = IntPolynomial([-1, -2, 1, 1])


def rho_root():
    return isolate_real_roots(CUBIC)[-1]


class TestInEEta:
    def test_self_membership(self):
        r = rho_root()
        assert in_E_eta(r, r, F(1, 2), 10 ** 4)
        assert in_E_eta(PHI, PHI, F(1, 2), 10 ** 3)

    def test_phi_against_cubic_small_eta_fails(self):
        # small denominators always admit eta-good approximants; (5, 3)
        # approximates phi well but lands far from the cubic root
        assert not in_E_eta(PHI, rho_root(), F(1, 2), 10 ** 4)

    def test_phi_against_cubic_strong_eta_vacuous(self):
        # at eta = 3 only denominator 1 fires, and |rho - k| < 2 holds
        assert in_E_eta(PHI, rho_root(), F(3), 10 ** 4)

    def test_shared_prefix_point(self):
        r = rho_root()
        s = construct_S_point(r, F(1, 10), 12, 1, F(1, 2), 3)
        assert in_E_eta(s, r, F(1, 2), 10 ** 4)


class TestInBEps:
    def test_self_membership(self):
        r = rho_root()
        assert in_B_eps(r, r, F(1, 10), 3, 30)

    def test_rational_reference_is_everything(self):
        assert in_B_eps(PHI, F(1, 2), F(1, 10), 3, 30)
        assert in_B_eps(F(7, 5), F(1, 2), F(1, 10), 3, 30)

    def test_small_rational_point_fails(self):
        assert not in_B_eps(F(1, 3), rho_root(), F(1, 10), 3, 30)

    def test_eps_validation(self):
        with pytest.raises(ExactError):
            in_B_eps(PHI, PHI, F(0), 3, 30)


class TestConstructSPoint:
    def test_phi_returns_itself(self):
        s = construct_S_point(PHI, F(1, 4), 8, 1, F(1, 2), 3)
        assert s == PHI

    def test_cubic_point_agrees_to_depth(self):
        r = rho_root()
        s = construct_S_point(r, F(1, 10), 12, None or 1, F(1, 2), 3)
        cf_s = expand(s, 12)
        cf_r = expand(r, 12)
        assert cf_s.digits_upto(11) == cf_r.digits_upto(11)
        assert in_B_eps(s, r, F(1, 10), 3, 30)
        assert in_E_eta(s, r, F(1, 2), 10 ** 4)

    def test_oversized_h_surfaces_error(self):
        # h beyond the digit is a surfaced precondition violation
        with pytest.raises(ExactError):
            construct_S_point(rho_root(), F(1, 10), 12, 10 ** 9, F(1, 2), 3)

    def test_h_above_digit_rejected(self):
        r = rho_root()
        cf = expand(r, 13)
        alpha = cf.digit(12)
        with pytest.raises(ExactError):
            construct_S_point(r, F(1, 10), 12, alpha + 1, F(1, 2), 3)


class TestCuttingDensity:
    PREFIX20 = [1, 2, 3, 1, 2, 1, 1, 3, 2, 1, 2, 4, 1, 1, 2, 3, 1, 2, 1, 5]

    def test_len20_half_eta_high_density(self):
        d = cutting_density_estimate(self.PREFIX20, F(1, 2), 10 ** 4, seed=5)
        assert d >= F(99, 100)

    def test_large_eta_approaches_one(self):
        d = cutting_density_estimate([1, 2, 3], F(10), 400, seed=5)
        assert d == 1

    def test_single_sample_deterministic(self):
        a = cutting_density_estimate([1, 2, 3], F(1, 2), 1, seed=9)
        b = cutting_density_estimate([1, 2, 3], F(1, 2), 1, seed=9)
        assert a == b and a in (F(0), F(1))

    def test_monotone_in_eta(self):
        pre = [1, 2, 1, 3, 1, 1, 2]
        vals = [cutting_density_estimate(pre, eta, 500, seed=3)
                for eta in (F(1, 4), F(1, 2), F(1), F(2))]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def _params(eps=F(1, 4), eta=F(1, 2), tau1=F(1, 4), tau2=F(1, 100),
            height=2000, depth=16):
    return DiophParams(eps, eta, tau1, tau2, height=height, depth=depth)


class TestStructuralClassify:
    def test_wide_interval_type_two_containment(self):
        r = rho_root()
        iv = RatInterval(F(124, 100), F(125, 100))
        cls = structural_classify(r, iv, _params(tau1=F(1, 10)), 3,
                                  samples=16, seed=3)
        assert cls.kind == "TypeII"
        sub = cls.subinterval
        assert iv.contains_interval(sub)
        assert compare_scalars(r, sub.lo) > 0 and compare_scalars(r, sub.hi) < 0
        assert cls.c_estimate is not None and cls.c_estimate > 0

    def test_phi_tight_interval_type_one(self):
        # strong eta: the all-ones neighborhood is dense with members
        p = _params(eta=F(2), height=10 ** 4, depth=20)
        iv = RatInterval(F(1617, 1000), F(1619, 1000))
        cls = structural_classify(PHI, iv, p, 3, samples=20, seed=3)
        assert cls.kind == "TypeI"
        assert cls.density_estimate == 1

    def test_cylinder_split_index(self):
        # the exact digit cylinder of rho's first digits has no split
        # before its depth
        r = rho_root()
        cf = expand(r, 6)
        digs = cf.digits_upto(4)
        from formspec.cfengine import cylinder_interval
        iv = cylinder_interval(digs[0], digs[1:])
        cls = structural_classify(r, iv, _params(), 3, samples=8, seed=1)
        assert cls.split_index >= 4

    def test_reference_outside_rejected(self):
        with pytest.raises(ExactError):
            structural_classify(PHI, RatInterval(F(3), F(4)), _params(), 3,
                                samples=4, seed=0)

    def test_deterministic_under_seed(self):
        r = rho_root()
        iv = RatInterval(F(124, 100), F(125, 100))
        a = structural_classify(r, iv, _params(), 3, samples=12, seed=11)
        b = structural_classify(r, iv, _params(), 3, samples=12, seed=11)
        assert (a.kind, a.density_estimate, a.c_estimate) == \
            (b.kind, b.density_estimate, b.c_estimate)


class TestAelSearch:
    def test_mordell_witness(self):
        f = BinaryForm.parse("3: 1 1 -2 -1")
        params = _params(height=10 ** 4, depth=25)
        w = ael_search(f, F(1, 4), params, seed=11, budget=10 ** 4)
        assert w.shift != 0 and abs(w.shift) < F(1, 4)
        moved = m_estimate(act(f, w.transform), depth=25, certify=False)
        assert moved.value.compare(Mag(F(3, 4))) >= 0
        # reproducibility under the same seed
        w2 = ael_search(f, F(1, 4), params, seed=11, budget=10 ** 4)
        assert w2.shift == w.shift

    def test_single_root_form(self):
        f = BinaryForm.parse("3: 1 0 -1 -1")
        w = ael_search(f, F(1, 4), _params(depth=20), seed=5, budget=10 ** 4)
        assert abs(w.shift) < F(1, 4)

    def test_eps_one_finds_witness_fast(self):
        f = BinaryForm.parse("3: 1 1 -2 -1")
        w = ael_search(f, F(1), _params(depth=20), seed=3, budget=10 ** 4)
        assert abs(w.shift) < 1

    def test_budget_exhaustion_reported(self):
        f = BinaryForm.parse("3: 1 1 -2 -1")
        with pytest.raises(BudgetExhausted):
            ael_search(f, F(1, 4), _params(depth=25), seed=1, budget=3)


class TestSampler:
    def test_uniform_fraction_range_and_determinism(self):
        iv = RatInterval(F(1, 3), F(2, 3))
        xs = [uniform_fraction(9, j, iv) for j in range(50)]
        assert all(iv.lo <= x <= iv.hi for x in xs)
        assert xs == [uniform_fraction(9, j, iv) for j in range(50)]
        assert len(set(xs)) > 40
