"""One-dimensional substitution systems, factor maps, quotients."""
import pytest
from hypothesis import given, settings, strategies as st

from tilecohom.catalog import (SpaceId, expected_1d_quotient,
                               expected_1d_space)
from tilecohom.complexes import cohomology_tower
from tilecohom.errors import InvalidPath, NotPrimitive
from tilecohom.limits import classify, iso_check
from tilecohom.subst1d import (PHI_SOURCE_DEPTH, Substitution1D,
                               absolute_cohomology_1d, ap_complex_1d,
                               factor_map_1d, factor_map_phi,
                               legal_words, pd_substitution,
                               quotient_cohomology_1d,
                               solenoid_substitution, tm_substitution,
                               verify_times2_ses)

GRID = ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2))


class TestSubstitutions:
    def test_tm_rule(self):
        s = tm_substitution(2, 1)
        assert s.rule["1"] == ("1", "1", "1b")
        assert s.rule["1b"] == ("1b", "1b", "1")

    def test_pd_rule(self):
        s = pd_substitution(1, 1)
        assert s.rule == {"a": ("a", "b"), "b": ("a", "a")}

    def test_matrix_and_primitivity(self):
        s = tm_substitution(1, 1)
        assert s.matrix().to_rows() == [[1, 1], [1, 1]]
        assert s.is_primitive()

    def test_not_primitive(self):
        s = Substitution1D(("a", "b"), {"a": ("a",), "b": ("b",)})
        with pytest.raises(NotPrimitive):
            s.require_primitive()

    def test_legal_words(self):
        s = tm_substitution(1, 1)
        w2 = legal_words(s, 2)
        assert ("1", "1b") in w2 and ("1b", "1") in w2
        assert all(len(w) == 2 for w in w2)

    def test_solenoid_params(self):
        with pytest.raises(ValueError):
            solenoid_substitution(1)


class TestComplexes:
    def test_solenoid_complex_is_circle(self):
        cx, sm = ap_complex_1d(solenoid_substitution(2), 0)
        assert cx.n_cells(0) == 1 and cx.n_cells(1) == 1
        assert sm.chain[1].to_rows() == [[2]]

    def test_collar_depth_invariance(self):
        s = tm_substitution(2, 1)
        for k in (0, 1):
            e1 = classify(cohomology_tower(*ap_complex_1d(s, 1), k))
            e2 = classify(cohomology_tower(*ap_complex_1d(s, 2), k))
            assert iso_check(e1, e2)


class TestAbsolute:
    @pytest.mark.parametrize("kl", GRID)
    def test_grid_tm(self, kl):
        k, l = kl
        h = absolute_cohomology_1d(f"tm:{k},{l}")
        assert str(h[0]) == "Z"
        assert iso_check(h[1], expected_1d_space(SpaceId.parse(f"tm:{k},{l}"))[1])

    @pytest.mark.parametrize("kl", GRID)
    def test_grid_pd(self, kl):
        k, l = kl
        h = absolute_cohomology_1d(f"pd:{k},{l}")
        assert iso_check(h[1], expected_1d_space(SpaceId.parse(f"pd:{k},{l}"))[1])

    @pytest.mark.parametrize("m", (2, 3, 4, 5))
    def test_grid_sol(self, m):
        h = absolute_cohomology_1d(f"sol:{m}")
        assert iso_check(h[1], expected_1d_space(SpaceId.parse(f"sol:{m}"))[1])

    def test_bad_name(self):
        with pytest.raises(InvalidPath):
            absolute_cohomology_1d("fib:1,1")


class TestQuotients:
    @pytest.mark.parametrize("kl", GRID)
    def test_tm_over_pd(self, kl):
        k, l = kl
        q = quotient_cohomology_1d((f"tm:{k},{l}", f"pd:{k},{l}"))
        assert q[0].is_zero()
        assert iso_check(q[1], expected_1d_quotient(SpaceId.parse(f"tm:{k},{l}"),
                                     SpaceId.parse(f"pd:{k},{l}"))[1])

    def test_tm_over_sol(self):
        q = quotient_cohomology_1d(("tm:2,1", "sol:3"))
        assert iso_check(q[1], expected_1d_quotient(SpaceId.parse("tm:2,1"),
                                     SpaceId.parse("sol:3"))[1])

    def test_pd_over_sol(self):
        q = quotient_cohomology_1d(("pd:2,2", "sol:4"))
        assert str(q[1]) == "Z"

    def test_unrelated_pair(self):
        with pytest.raises(InvalidPath):
            factor_map_1d("pd:2,1", "sol:5")  # wrong solenoid base

    def test_phi_needs_deeper_collar(self):
        f = factor_map_phi(1, 1)
        assert f.source.n_cells(1) == len(
            legal_words(tm_substitution(1, 1), 2 * PHI_SOURCE_DEPTH + 1))


class TestTimesTwoSes:
    @pytest.mark.parametrize("kl", GRID)
    def test_exact(self, kl):
        a, b, c = verify_times2_ses(*kl)
        k, l = kl
        assert iso_check(a, expected_1d_quotient(SpaceId.parse(f"pd:{k},{l}"),
                             SpaceId.parse(f"sol:{k+l}"))[1])
        assert iso_check(c, expected_1d_quotient(SpaceId.parse(f"tm:{k},{l}"),
                                     SpaceId.parse(f"pd:{k},{l}"))[1])


@st.composite
def primitive_substitutions(draw):
    n = draw(st.integers(2, 3))
    alphabet = tuple("abc"[:n])
    rule = {}
    for a in alphabet:
        w = draw(st.lists(st.sampled_from(alphabet), min_size=2, max_size=3))
        rule[a] = tuple(w)
    s = Substitution1D(alphabet, rule)
    if not s.is_primitive():
        # appending the full alphabet makes the count matrix positive
        rule = {a: rule[a] + alphabet for a in alphabet}
        s = Substitution1D(alphabet, rule)
    return s


class TestRandomSubstitutions:
    @settings(max_examples=100, deadline=None)
    @given(primitive_substitutions())
    def test_h0_and_collar_invariance(self, s):
        cx1, sm1 = ap_complex_1d(s, 1)
        cx2, sm2 = ap_complex_1d(s, 2)
        h0 = classify(cohomology_tower(cx1, sm1, 0))
        assert str(h0) == "Z"
        e1 = classify(cohomology_tower(cx1, sm1, 1))
        e2 = classify(cohomology_tower(cx2, sm2, 1))
        if e1.unclassified is None and e2.unclassified is None:
            assert iso_check(e1, e2)
