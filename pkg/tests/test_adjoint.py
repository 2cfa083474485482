"""
Tests for domains.iquantum.adjoint: the adjoint action and the ı Serre relations.
"""

import pytest

from domains.iquantum.adjoint import (
    ad,
    ad_idiv_formula,
    ad_multiplicativity_check,
    adjoint_formula_report,
    verify_classical_serre_adjoint,
    verify_iserre,
    verify_mixed,
    verify_relation_family,
    verify_serre_lusztig,
    verify_weight_vectors,
)
from domains.quantum.cartan import named_datum
from domains.quantum.uq import QuantumGroup
from helpers.reliability import DegreeCapExceeded, ValidationError


class TestAdjointAction:
    """Test ad on generators."""

    def test_scalar_acts_by_multiplication(self, a2):
        """Test ad(c)(v) = c v."""
        v = a2.gen("E", 2)
        assert ad(a2, a2.scalar(3), v) == v.scale(3)

    def test_torus_conjugates(self, a2):
        """Test ad(K~_1)(v) = K~_1 v K~_1^-1."""
        v = a2.gen("B", 2) * a2.gen("E", 1)
        assert ad(a2, a2.gen("Ktilde", 1), v) == a2.k_power(1, 1) * v * a2.k_power(1, -1)

    def test_e_action(self, a2):
        """Test ad(E_i)(v) = E_i v - K~_i v K~_i^-1 E_i."""
        E, K, Kinv = a2.gen("E", 1), a2.gen("Ktilde", 1), a2.gen("KtildeInv", 1)
        v = a2.gen("F", 2) * a2.k_power(2, 1)
        assert ad(a2, E, v) == E * v - K * v * Kinv * E

    def test_f_action(self, a2):
        """Test ad(F_i)(x) = (F_i x - x F_i) K~_i."""
        F, K = a2.gen("F", 1), a2.gen("Ktilde", 1)
        x = a2.gen("E", 2) + a2.gen("F", 2)
        assert ad(a2, F, x) == (F * x - x * F) * K

    def test_b_action(self, a2):
        """Test ad(B_i)(u) = (B_i u - u B_i) K~_i."""
        B, K = a2.gen("B", 1), a2.gen("Ktilde", 1)
        u = a2.gen("B", 2)
        assert ad(a2, B, u) == (B * u - u * B) * K

    def test_action_is_multiplicative_in_u(self, a2):
        """Test ad(xy)(v) = ad(x)(ad(y)(v))."""
        x, y = a2.gen("E", 1), a2.gen("B", 1)
        v = a2.gen("F", 2) * a2.k_power(2, 1)
        assert ad(a2, x * y, v) == ad(a2, x, ad(a2, y, v))

    @pytest.mark.parametrize("x_kind,y,z", [
        ("E", ("F", 2), ("Ktilde", 2)),
        ("F", ("E", 2), ("B", 2)),
        ("B", ("F", 2), ("E", 1)),
        ("Ktilde", ("B", 2), ("B", 2)),
    ])
    def test_module_algebra(self, a2, x_kind, y, z):
        """Test ad(x)(yz) = sum ad(x_(1))(y) ad(x_(2))(z)."""
        assert ad_multiplicativity_check(a2, a2.gen(x_kind, 1), a2.gen(*y), a2.gen(*z))

    def test_module_algebra_for_divided_power(self, b2):
        """Test the module-algebra identity for a degree-two element of the long root."""
        x = b2.gen("B", 1) * b2.gen("B", 1)
        fk = b2.gen("F", 2) * b2.k_power(2, 1)
        assert ad_multiplicativity_check(b2, x, fk, b2.gen("E", 2))


class TestAdjointFormula:
    """Test the product formula for ad(B_i^(n))."""

    @pytest.mark.parametrize("n", range(0, 3))
    @pytest.mark.parametrize("kind", ["E", "F", "B"])
    def test_low_degrees(self, a2, n, kind):
        """Test both sides agree for generators of the other index."""
        lhs, rhs = ad_idiv_formula(a2, 1, n, a2.gen(kind, 2))
        assert lhs == rhs

    @pytest.mark.parametrize("n", range(0, 3))
    def test_b2_samples(self, b2, n):
        """Test the long root of B2 on E_j, F_jK_j, B_jK_j and B_j^2K_j^2."""
        k = b2.k_power(2, 1)
        B = b2.gen("B", 2)
        for u in (b2.gen("E", 2), b2.gen("F", 2) * k, B * k, B * B * k * k):
            lhs, rhs = ad_idiv_formula(b2, 1, n, u)
            assert lhs == rhs

    def test_degree_one(self, a2):
        """Test n = 1 gives (B_i u - u B_i) K~_i."""
        u = a2.gen("E", 2)
        B = a2.gen("B", 1)
        lhs, rhs = ad_idiv_formula(a2, 1, 1, u)
        assert lhs == (B * u - u * B) * a2.k_power(1, 1)
        assert rhs == lhs

    @pytest.mark.slow
    def test_degree_three(self, a2, b2):
        """Test degree three on A2 and on the long root of B2."""
        for U in (a2, b2):
            u = U.gen("F", 2) * U.k_power(2, 1)
            lhs, rhs = ad_idiv_formula(U, 1, 3, u)
            assert lhs == rhs

    def test_report(self, a2):
        """Test the report label and outcome."""
        report = adjoint_formula_report(a2, 1, 2, a2.gen("B", 2), "B2")
        assert report.verified
        assert report.claim == "adjoint-formula(i=1,n=2,u=B2)"


class TestISerre:
    """Test the ı Serre relation and its adjoint form."""

    @pytest.mark.parametrize("i,j", [(1, 2), (2, 1)])
    def test_a2(self, a2, i, j):
        """Test the cubic relation holds in A2."""
        report = verify_iserre(a2, i, j)
        assert report.verified, report.witness
        assert set(report.checks) == {"relation", "adjoint", "bridge", "equivalence"}

    def test_commuting_pair(self, a1xa1):
        """Test B_1 B_2 = B_2 B_1 when a_12 = 0."""
        assert verify_iserre(a1xa1, 1, 2).verified

    @pytest.mark.parametrize("i,j", [(1, 2), (2, 1)])
    def test_b2(self, b2, i, j):
        """Test both orders in B2, with degrees 2 and 3."""
        report = verify_iserre(b2, i, j)
        assert report.verified, report.witness

    def test_relation_survives_without_serre(self, a2_no_serre):
        """Test without Serre relations the relation fails but the bridge still holds."""
        report = verify_iserre(a2_no_serre, 1, 2)
        assert report.outcome == "refuted"
        assert not report.checks["relation"].passed
        assert not report.checks["adjoint"].passed
        assert report.checks["bridge"].passed
        assert report.checks["equivalence"].passed
        assert "relation" in report.witness

    def test_bridge_on_b2_without_serre(self, b2_no_serre):
        """Test the bridge identity is pure Hopf bookkeeping on B2."""
        report = verify_iserre(b2_no_serre, 2, 1)
        assert report.checks["bridge"].passed

    @pytest.mark.slow
    @pytest.mark.parametrize("i,j", [(1, 2), (2, 1)])
    def test_g2(self, g2, i, j):
        """Test G2, including the relation of degree 4."""
        report = verify_iserre(g2, i, j)
        assert report.verified, report.witness

    def test_same_index_rejected(self, a2):
        """Test i = j is rejected."""
        with pytest.raises(ValidationError):
            verify_iserre(a2, 1, 1)

    def test_degree_cap(self):
        """Test a relation above the degree cap raises DegreeCapExceeded."""
        U = QuantumGroup(named_datum("A2"), degree_cap=1)
        with pytest.raises(DegreeCapExceeded):
            verify_iserre(U, 1, 2)


class TestSerreLusztig:
    """Test the minimal-degree Serre-Lusztig relations."""

    def test_a2_degree_two(self, a2):
        """Test B_j^2 in the middle with B_i of degree 3."""
        report = verify_serre_lusztig(a2, 1, 2, 2)
        assert report.verified, report.witness
        assert report.claim == "serre-lusztig(i=1,j=2,n=2)"

    def test_n_one_is_iserre(self, a2):
        """Test n = 1 reproduces the ı Serre relation."""
        assert verify_serre_lusztig(a2, 2, 1, 1).checks == verify_iserre(a2, 2, 1).checks

    def test_n_zero_rejected(self, a2):
        """Test n must be positive."""
        with pytest.raises(ValidationError):
            verify_serre_lusztig(a2, 1, 2, 0)

    @pytest.mark.slow
    def test_higher(self, a2, b2):
        """Test n = 3 on A2 and n = 2 on B2."""
        assert verify_serre_lusztig(a2, 1, 2, 3).verified
        assert verify_serre_lusztig(b2, 2, 1, 2).verified


class TestMixed:
    """Test mixed relations with several middle indices."""

    def test_repeated_index_matches_serre_lusztig(self, a2):
        """Test js = [2, 2] checks the same relation as Serre-Lusztig with n = 2."""
        mixed = verify_mixed(a2, 1, [2, 2])
        assert mixed.verified
        assert mixed.claim == "mixed-serre(i=1,js=[2,2])"
        assert mixed.checks == verify_serre_lusztig(a2, 1, 2, 2).checks

    def test_empty_rejected(self, a2):
        """Test an empty list of middle indices is rejected."""
        with pytest.raises(ValidationError):
            verify_relation_family(a2, 1, [], "mixed-serre", "mixed")

    def test_middle_index_equal_to_i(self, a3):
        """Test a middle index equal to i is rejected."""
        with pytest.raises(ValidationError):
            verify_mixed(a3, 2, [1, 2])

    @pytest.mark.slow
    def test_a3_middle_node(self, a3):
        """Test B_1 B_3 in the middle at the centre of A3."""
        report = verify_mixed(a3, 2, [1, 3])
        assert report.verified, report.witness

    @pytest.mark.slow
    def test_c3_middle_node(self, c3):
        """Test B_1 B_3 in the middle of C3 where a_21 = -1 and a_23 = -2."""
        report = verify_mixed(c3, 2, [1, 3])
        assert report.verified, report.witness


class TestBridgeWithoutSerre:
    """Test the bridge and equivalence checks survive dropping the Serre relations."""

    @staticmethod
    def assert_bridge_only(report):
        assert report.outcome == "refuted"
        assert report.checks["bridge"].passed
        assert report.checks["equivalence"].passed
        assert not report.checks["relation"].passed
        assert report.witness and "relation" in report.witness

    @pytest.mark.parametrize("n", [2, pytest.param(3, marks=pytest.mark.slow)])
    def test_serre_lusztig_a2(self, a2_no_serre, n):
        """Test Serre-Lusztig on A2 with n = 2 and 3 keeps the bridge and loses the relation."""
        self.assert_bridge_only(verify_serre_lusztig(a2_no_serre, 1, 2, n))

    def test_serre_lusztig_b2(self, b2_no_serre):
        """Test Serre-Lusztig on B2 with a_ij = -2 and n = 2."""
        self.assert_bridge_only(verify_serre_lusztig(b2_no_serre, 2, 1, 2))

    @pytest.mark.slow
    def test_mixed_c3(self, c3_no_serre):
        """Test the mixed relation at the C3 node with two neighbours."""
        self.assert_bridge_only(verify_mixed(c3_no_serre, 2, [1, 3]))


class TestClassicalSerreAdjoint:
    """Test the adjoint form of the classical Serre relations."""

    @pytest.mark.parametrize("name,i,j", [
        ("a2", 1, 2),
        ("a1xa1", 1, 2),
        ("b2", 1, 2),
        ("b2", 2, 1),
    ])
    def test_vanishes_with_serre(self, request, name, i, j):
        """Test the identity holds and both sides vanish."""
        report = verify_classical_serre_adjoint(request.getfixturevalue(name), i, j)
        assert report.verified, report.witness
        assert set(report.checks) == {"identity", "vanishing"}

    def test_survives_without_serre(self, a2_no_serre):
        """Test the identity holds and the value survives in the free algebra."""
        report = verify_classical_serre_adjoint(a2_no_serre, 1, 2)
        assert report.verified, report.witness
        assert set(report.checks) == {"identity", "survives_without_serre"}


class TestWeightVectors:
    """Test highest and lowest weight vectors for the adjoint action."""

    @pytest.mark.parametrize("name", ["a2", "b2"])
    def test_with_serre(self, request, name):
        """Test every weight-vector check in both orders."""
        U = request.getfixturevalue(name)
        for i, j in [(1, 2), (2, 1)]:
            report = verify_weight_vectors(U, i, j)
            assert report.verified, report.witness
            assert "ad_E_power_on_E" in report.checks

    def test_without_serre(self, a2_no_serre):
        """Test the Serre-independent checks still hold."""
        report = verify_weight_vectors(a2_no_serre, 1, 2)
        assert report.verified
        assert set(report.checks) == {"ad_E_on_FK", "ad_Ediv_on_FK", "ad_F_on_E"}
