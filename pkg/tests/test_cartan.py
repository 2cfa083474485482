"""
Tests for domains.quantum.cartan.
"""

import pytest

from domains.quantum.cartan import CARTAN_TYPES, IParams, build_datum, default_params, named_datum
from domains.quantum.qfield import ZERO, qpow
from helpers.reliability import ValidationError


class TestBuildDatum:
    """Test validation and derived quantities."""

    def test_a2(self):
        """Test A2 gives a_12 = a_21 = -1 and eps = (1, 1)."""
        datum = build_datum([[2, -1], [-1, 2]])
        assert datum.a(1, 2) == datum.a(2, 1) == -1
        assert datum.eps == (1, 1)
        assert datum.index_set == (1, 2)

    def test_b2(self):
        """Test B2 gives a_12 = -1, a_21 = -2 and eps = (2, 1)."""
        datum = build_datum([[4, -2], [-2, 2]])
        assert datum.a(1, 2) == -1
        assert datum.a(2, 1) == -2
        assert datum.eps == (2, 1)
        assert datum.q_i(1) == qpow(2)

    def test_affine_rank_two(self):
        """Test the Kac-Moody pairing [[2,-2],[-2,2]] gives a_12 = a_21 = -2."""
        datum = build_datum([[2, -2], [-2, 2]])
        assert datum.a(1, 2) == datum.a(2, 1) == -2

    @pytest.mark.parametrize("name", sorted(CARTAN_TYPES))
    def test_symmetrizable(self, name):
        """Test a_ij eps_i = i.j = a_ji eps_j and a_ii = 2 for every catalogued type."""
        datum = named_datum(name)
        for i in datum.index_set:
            assert datum.a(i, i) == 2
            for j in datum.index_set:
                assert datum.a(i, j) * datum.eps_of(i) == datum.dot(i, j) == datum.a(j, i) * datum.eps_of(j)

    @pytest.mark.parametrize("rows", [
        [[2, -1], [0, 2]],          # asymmetric
        [[2, 1], [1, 2]],           # positive off-diagonal
        [[3, -1], [-1, 2]],         # odd diagonal
        [[0, 0], [0, 2]],           # zero diagonal
        [[4, -1], [-1, 2]],         # a_12 not an integer
        [[2, -1, 0]],               # not square
        [],                         # empty
        [[2, 0, 0, 0, 0]] * 5,      # rank above 4
    ])
    def test_rejects_invalid(self, rows):
        """Test invalid pairings raise ValidationError."""
        with pytest.raises(ValidationError):
            build_datum(rows)

    def test_unknown_name(self):
        """Test named_datum rejects an unknown type."""
        with pytest.raises(ValidationError):
            named_datum("E8")

    def test_check_index(self):
        """Test indices outside the index set are rejected."""
        datum = named_datum("A2")
        assert datum.check_index(2) == 2
        with pytest.raises(ValidationError):
            datum.check_index(3)

    def test_summary_and_key(self):
        """Test the cache key and summary text."""
        datum = named_datum("A2")
        assert datum.key == "2 -1;-1 2"
        assert datum.summary() == "A2 [2 -1;-1 2]"


class TestParams:
    """Test split parameters."""

    def test_default_a2(self):
        """Test A2 defaults to varsigma_1 = varsigma_2 = q^-1 with Serre relations on."""
        params = default_params(named_datum("A2"))
        assert params.varsigma == (qpow(-1), qpow(-1))
        assert params.serre_mode

    def test_default_b2(self):
        """Test B2 defaults to varsigma_1 = q^-2, varsigma_2 = q^-1."""
        params = default_params(named_datum("B2"))
        assert params.of(1) == qpow(-2)
        assert params.of(2) == qpow(-1)

    def test_override(self):
        """Test any nonzero override is accepted."""
        params = default_params(named_datum("A2"), {1: qpow(3)}, serre_mode=False)
        assert params.of(1) == qpow(3)
        assert params.of(2) == qpow(-1)
        assert not params.serre_mode
        assert "serre_mode=off" in params.summary()

    def test_zero_rejected(self):
        """Test a zero parameter is rejected."""
        with pytest.raises(ValidationError):
            IParams(varsigma=(ZERO,))
        with pytest.raises(ValidationError):
            default_params(named_datum("A2"), {1: 0})

    def test_override_index_checked(self):
        """Test an override for a missing index is rejected."""
        with pytest.raises(ValidationError):
            default_params(named_datum("A2"), {3: qpow(1)})
