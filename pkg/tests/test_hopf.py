import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_poly
from hamnf.errors import PreconditionError
from hamnf.hopf import (SYZYGY, HopfPoly, hopf_generators, hopf_rewrite, hopf_substitute,
                        nf_to_hopf, syzygy_poly, w_monomial, w_monomials)
from hamnf.normalform import EpsSeries, NormalFormResult
from hamnf.poly import Poly

q1, q2, p1, p2 = Poly.q(2, 1), Poly.q(2, 2), Poly.p(2, 1), Poly.p(2, 2)
W4, W3, W2, W1 = (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)


def sq(e):
    return tuple(2 * x for x in e)


def coeffs(h):
    return h.constant_coeffs()


class TestRewrite:
    def test_H0(self):
        h = hopf_rewrite((q1 ** 2 + q2 ** 2 + p1 ** 2 + p2 ** 2) / 2)
        assert h.params == ()
        assert coeffs(h) == {W4: Fraction(1, 2)}

    def test_quadratic_example(self):
        h = hopf_rewrite((q1 ** 2 + p1 ** 2) / 16)
        assert coeffs(h) == {W4: Fraction(1, 32), W3: Fraction(1, 32)}

    def test_henon_heiles_family(self, hh_result):
        h = hopf_rewrite(hh_result.nf.term(2))
        assert h.params == ("lam0",)
        lam = "lam0"
        assert h.terms == {
            sq(W2): {"": Fraction(7, 48), lam: 1},
            sq(W4): {"": Fraction(-5, 48), lam: -1},
            sq(W3): {lam: 1},
            sq(W1): {lam: 1},
        }
        assert coeffs(h.representative()) == {sq(W2): Fraction(7, 48), sq(W4): Fraction(-5, 48)}

    def test_elastic_pendulum_family(self, ep_result):
        quartic = ep_result.nf.term(2).homogeneous_components()[4]
        h = hopf_rewrite(quartic)
        # mu-family: -(768mu+25)/768 w4^2 + (256mu+5)/256 w3^2 + (32mu+1)/32 w2^2 + mu w1^2 - 5/384 w3w4
        assert h.terms == {
            sq(W4): {"": Fraction(-25, 768), "lam0": -1},
            sq(W3): {"": Fraction(5, 256), "lam0": 1},
            sq(W2): {"": Fraction(1, 32), "lam0": 1},
            sq(W1): {"lam0": 1},
            (0, 0, 1, 1): {"": Fraction(-5, 384)},
        }

    def test_rejects_non_invariant(self):
        with pytest.raises(PreconditionError) as exc:
            hopf_rewrite(q1)
        assert exc.value.witness == -p1

    def test_rejects_wrong_dimension(self):
        with pytest.raises(PreconditionError):
            hopf_rewrite(Poly.q(1, 1) ** 2)

    def test_odd_degree_cannot_be_invariant(self):
        # phase parity: every odd-degree polynomial fails the invariance check first
        rng = random.Random(1)
        for _ in range(10):
            f = random_poly(rng, 2, 5, 4)
            odd = sum((c for d, c in f.homogeneous_components().items() if d % 2),
                      Poly.zero(2))
            if odd.is_zero():
                continue
            with pytest.raises(PreconditionError):
                hopf_rewrite(odd)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_rejects_random_non_invariant(self, seed):
        from hamnf.hopf import FREQ_11
        from hamnf.averaging import lie_upsilon
        f = random_poly(random.Random(seed), 2, 6, 4)
        if lie_upsilon(f, FREQ_11).is_zero():
            return
        with pytest.raises(PreconditionError):
            hopf_rewrite(f)


def random_invariant(rng, max_w_degree=4):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        d = rng.randint(0, max_w_degree)
        e = rng.choice(w_monomials(d))
        terms[e] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return hopf_substitute(HopfPoly.from_coeffs(terms))


class TestSubstitute:
    def test_examples(self):
        assert hopf_substitute(HopfPoly.from_coeffs({W4: Fraction(1, 2)})) == \
            (q1 ** 2 + q2 ** 2 + p1 ** 2 + p2 ** 2) / 2
        assert hopf_substitute(HopfPoly()).is_zero()

    def test_family_is_one_polynomial(self, hh_result):
        h = hopf_rewrite(hh_result.nf.term(2))
        at0 = hopf_substitute(h, {"lam0": 0})
        at1 = hopf_substitute(h, {"lam0": 1})
        assert at0 == at1 == hh_result.nf.term(2)

    def test_missing_parameter(self, hh_result):
        h = hopf_rewrite(hh_result.nf.term(2))
        with pytest.raises(KeyError):
            hopf_substitute(h, {})

    def test_family_difference_is_syzygy_multiple(self, hh_result):
        h = hopf_rewrite(hh_result.nf.term(2))
        diff = h.at({"lam0": 3}).constant_coeffs()
        base = h.at({"lam0": 0}).constant_coeffs()
        delta = {m: diff.get(m, 0) - base.get(m, 0) for m in set(diff) | set(base)}
        delta = {m: c for m, c in delta.items() if c}
        assert delta == {m: 3 * c for m, c in SYZYGY.items()}
        assert syzygy_poly().is_zero()

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.fractions(max_denominator=10))
    def test_round_trip(self, seed, value):
        f = random_invariant(random.Random(seed))
        h = hopf_rewrite(f)
        assert hopf_substitute(h, {p: value for p in h.params}) == f

    def test_degree8_parameters(self):
        # degree 8: 35 w-monomials, 25 invariant monomials -> 10 free directions
        f = w_monomial((0, 0, 0, 4))
        h = hopf_rewrite(f)
        assert len(h.params) == 10
        assert hopf_substitute(h, {p: i for i, p in enumerate(h.params)}) == f


class TestNfToHopf:
    def test_henon_heiles(self, hh_result):
        rep = nf_to_hopf(hh_result).representative()
        assert coeffs(rep[0]) == {W4: Fraction(1, 2)}
        assert rep[1].is_zero()
        assert coeffs(rep[2]) == {sq(W2): Fraction(7, 48), sq(W4): Fraction(-5, 48)}

    def test_elastic_pendulum_computed(self, ep_result):
        rep = nf_to_hopf(ep_result)
        r = rep.representative()
        assert coeffs(r[1]) == {W4: Fraction(-1, 8), W3: Fraction(-1, 8)}
        assert coeffs(r[2]) == {
            W4: Fraction(-1, 32), W3: Fraction(-1, 32),
            sq(W2): Fraction(1, 32), sq(W4): Fraction(-25, 768),
            (0, 0, 1, 1): Fraction(-5, 384), sq(W3): Fraction(5, 256),
        }
        assert set(rep.by_degree[2]) == {2, 4}

    def test_unperturbed_only(self):
        H0 = (q1 ** 2 + q2 ** 2 + p1 ** 2 + p2 ** 2) * Fraction(3, 2)
        res = NormalFormResult(EpsSeries((H0, Poly.zero(2), Poly.zero(2))),
                               Poly.zero(2), Poly.zero(2))
        rep = nf_to_hopf(res)
        assert coeffs(rep.orders[0]) == {W4: Fraction(3, 2)}
        assert rep.orders[1].is_zero() and rep.orders[2].is_zero()


def test_w_monomial_order():
    cols = w_monomials(2)
    assert cols[0] == sq(W4) and cols[-1] == sq(W1)
    assert len(cols) == 10
    assert w_monomial(W1) == hopf_generators()[0]


def test_text_rendering(hh_result):
    h = hopf_rewrite(hh_result.nf.term(2))
    assert h.representative().to_text() == "7*w2^2/48 - 5*w4^2/48"
