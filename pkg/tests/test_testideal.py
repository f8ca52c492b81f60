import random
from fractions import Fraction

import pytest

from fsing.frobenius import frobenius_root
from fsing.modgb import Submodule, VectorR
from fsing.polyring import CharConfig, Poly, Ring, poly_parse
from fsing.rationals import GridRational
from fsing.testideal import (
    f_jumping_exponents,
    s_set_simple,
    simple_list_I,
    simple_list_tau,
    simple_tau_scan,
    tau_f,
    tau_f_stable,
)


def ideal(ring, *texts):
    gens = [VectorR((poly_parse(t, ring),)) for t in texts]
    return Submodule(1, gens, ring)


@pytest.fixture
def f2():
    return CharConfig(2), Ring(2, 1)


@pytest.fixture
def f3():
    return CharConfig(3), Ring(3, 1)


class TestTauF:
    def test_unit_for_small_alpha(self, f2):
        cfg, ring = f2
        f = poly_parse("x0", ring)
        for e in range(1, 4):
            assert tau_f(f, Fraction(1, 2), e, cfg) == Submodule.full(1, ring)

    def test_alpha_one(self, f2):
        cfg, ring = f2
        f = poly_parse("x0", ring)
        for e in range(1, 4):
            assert tau_f(f, Fraction(1), e, cfg) == ideal(ring, "x0")

    def test_cusp_exponent(self, f2):
        cfg, ring = f2
        f = poly_parse("x0^3", ring)
        # ceil(8/3) = 3, and (x0^9)^[1/8] = (x0)
        assert tau_f(f, Fraction(1, 3), 3, cfg) == ideal(ring, "x0")

    def test_rejects_zero(self, f2):
        cfg, ring = f2
        with pytest.raises(ValueError):
            tau_f(Poly.zero(ring), Fraction(1, 2), 1, cfg)


class TestTauFStable:
    def test_alpha_zero(self, f2):
        cfg, ring = f2
        assert tau_f_stable(poly_parse("x0", ring), Fraction(0), cfg) == (
            Submodule.full(1, ring)
        )

    def test_cusp(self, f2):
        cfg, ring = f2
        f = poly_parse("x0^3", ring)
        assert tau_f_stable(f, Fraction(1, 3), cfg) == ideal(ring, "x0")

    def test_pausing_chain_below_threshold(self, f2):
        # the e-chain at alpha = 8/25 repeats (x0) at e = 1, 2 before
        # growing to the unit ideal; the monomial oracle floor(3a) gives R
        cfg, ring = f2
        f = poly_parse("x0^3", ring)
        assert tau_f_stable(f, Fraction(8, 25), cfg) == Submodule.full(1, ring)

    def test_q_power_denominator(self, f2):
        cfg, ring = f2
        f = poly_parse("x0^3", ring)
        assert tau_f_stable(f, Fraction(9, 32), cfg) == Submodule.full(1, ring)
        assert tau_f_stable(f, Fraction(11, 32), cfg) == ideal(ring, "x0")

    @pytest.mark.parametrize(
        "num,den,exp",
        [(1, 3, 1), (1, 2, 1), (2, 3, 2), (1, 1, 3), (5, 6, 2), (7, 12, 1)],
    )
    def test_monomial_oracle(self, f2, num, den, exp):
        # tau(x0^(3a)) = (x0^floor(3a)) in one variable
        cfg, ring = f2
        f = poly_parse("x0^3", ring)
        want = ideal(ring, f"x0^{exp}") if exp else Submodule.full(1, ring)
        assert tau_f_stable(f, Fraction(num, den), cfg) == want

    def test_translation_above_one(self, f3):
        cfg, ring = f3
        f = poly_parse("x0", ring)
        # tau(f^(3/2)) = f * tau(f^(1/2)) = (x0)
        assert tau_f_stable(f, Fraction(3, 2), cfg) == ideal(ring, "x0")

    def test_two_variables(self, f2):
        cfg, ring2 = f2
        ring = Ring(2, 2)
        f = poly_parse("x0*x1", ring)
        assert tau_f_stable(f, Fraction(1, 2), cfg) == Submodule.full(1, ring)
        assert tau_f_stable(f, Fraction(1), cfg) == ideal(ring, "x0*x1")


class TestFJumping:
    def test_linear(self, f2):
        cfg, ring = f2
        assert f_jumping_exponents(poly_parse("x0", ring), cfg, 4) == [Fraction(1)]

    def test_cusp_like(self, f2):
        cfg, ring = f2
        got = f_jumping_exponents(poly_parse("x0^3", ring), cfg, 5)
        assert got == [Fraction(1, 3), Fraction(2, 3), Fraction(1)]

    def test_square_char3(self, f3):
        cfg, ring = f3
        got = f_jumping_exponents(poly_parse("x0^2", ring), cfg, 5)
        assert got == [Fraction(1, 2), Fraction(1)]

    def test_rejects_units_and_zero(self, f2):
        cfg, ring = f2
        with pytest.raises(ValueError):
            f_jumping_exponents(Poly.const(ring, 1), cfg, 3)
        with pytest.raises(ValueError):
            f_jumping_exponents(Poly.zero(ring), cfg, 3)


def power_list(f, cfg):
    """(f^(q-1), ..., f, 1) as in the graph construction."""
    return [f ** (cfg.q - 1 - k) for k in range(cfg.q)]


class TestSimpleList:
    def test_I_first_digit(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        lam = GridRational(1, 0, cfg)  # 1/3, digit i_0 = 0, product x0^4
        assert simple_list_I(r, lam, 0, cfg) == ideal(ring, "x0")

    def test_I_second_digit(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        lam = GridRational(2, 0, cfg)  # 2/3, digit i_0 = 1, product x0^2
        assert simple_list_I(r, lam, 0, cfg) == Submodule.full(1, ring)

    def test_zero_factor_kills_product(self, f3):
        cfg, ring = f3
        r = [poly_parse("x0", ring), Poly.zero(ring), Poly.const(ring, 1)]
        lam = GridRational(2, 0, cfg)
        assert simple_list_I(r, lam, 0, cfg).is_zero()

    def test_wrong_length_rejected(self, f3):
        cfg, ring = f3
        with pytest.raises(ValueError):
            simple_list_I([Poly.zero(ring)], GridRational(1, 0, cfg), 0, cfg)

    def test_tau_cumulative_e0(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        assert simple_list_tau(r, GridRational(1, 0, cfg), 0, cfg) == ideal(ring, "x0")
        full = Submodule.full(1, ring)
        assert simple_list_tau(r, GridRational(2, 0, cfg), 0, cfg) == full
        assert simple_list_tau(r, GridRational(3, 0, cfg), 0, cfg) == full

    def test_monomial_closed_form(self, f3):
        # for r_k = f^(q-1-k), I at m/q^(e+1) is (f^(q^(e+1)-m))^[1/q^(e+1)]
        cfg, ring = f3
        f = poly_parse("x0^2", ring)
        r = power_list(f, cfg)
        for e in range(2):
            grid = cfg.q ** (e + 1)
            for m in range(1, grid + 1):
                got = simple_list_I(r, GridRational(m, e, cfg), e, cfg)
                want = frobenius_root(
                    Submodule(1, (VectorR((f ** (grid - m),)),), ring), e + 1, cfg
                )
                assert got == want

    def test_monotone_in_lambda(self, f2):
        cfg, ring2 = f2
        ring = Ring(2, 2)
        rng = random.Random(3)
        for _ in range(5):
            r = [random_poly(rng, ring, 3) for _ in range(cfg.q)]
            scan = simple_tau_scan(r, 1, cfg)
            for a, b in zip(scan, scan[1:]):
                assert a <= b

    def test_chain_in_e(self, f3):
        cfg, ring = f3
        rng = random.Random(5)
        for _ in range(5):
            r = [random_poly(rng, ring, 4) for _ in range(cfg.q)]
            for m in range(1, cfg.q + 1):
                high = simple_list_tau(
                    r, GridRational(m * cfg.q, 1, cfg), 1, cfg
                )
                low = simple_list_tau(r, GridRational(m, 0, cfg), 0, cfg)
                assert high <= low


def random_poly(rng, ring, max_deg):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        mono = [0] * ring.nvars
        for _ in range(rng.randint(0, max_deg)):
            mono[rng.randrange(ring.nvars)] += 1
        terms[tuple(mono)] = rng.randint(1, ring.p - 1)
    return Poly(ring, terms)


class TestSSetSimple:
    def test_linear_gives_empty(self, f2):
        cfg, ring = f2
        r = power_list(poly_parse("x0", ring), cfg)
        for e in range(4):
            assert s_set_simple(r, e, cfg).jumps == ()

    def test_square_char3(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        assert [g.value for g in s_set_simple(r, 0, cfg).jumps] == [Fraction(1, 3)]
        assert [g.value for g in s_set_simple(r, 1, cfg).jumps] == [Fraction(4, 9)]

    def test_zero_list(self, f3):
        cfg, ring = f3
        r = [Poly.zero(ring)] * cfg.q
        assert s_set_simple(r, 1, cfg).jumps == ()

    def test_shift_property(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        reports = {e: s_set_simple(r, e, cfg) for e in range(4)}
        for e in range(1, 4):
            for g in reports[e].jumps:
                j = g.m
                if j % cfg.q**e == 0:
                    continue
                frac_m = j % cfg.q**e
                prev = {h.m for h in reports[e - 1].jumps}
                assert frac_m in prev

    def test_chain_kept_on_request(self, f3):
        cfg, ring = f3
        r = power_list(poly_parse("x0^2", ring), cfg)
        rep = s_set_simple(r, 0, cfg, keep_chain=True)
        assert rep.chain is not None and len(rep.chain) == 3
        assert rep.chain[0][0] == Fraction(1, 3)
