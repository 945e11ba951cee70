"""Tests for the per-symbol operation counts."""

import pytest

import complexity
import config
from errors import ArgumentError


class TestComplexityCount:
    """Tests for the closed-form counts of every algorithm."""

    def test_jidf_bound(self):
        assert complexity.complexity_count('MBER-JIDF', 40, 8, 8, 4, psi_sum=256) == (1825, 1595)

    def test_jidf_default_psi_sum_is_bound(self):
        assert complexity.complexity_count('MBER-JIDF', 40, 8, 8, 4) == (1825, 1595)

    def test_full_rank_lms(self):
        assert complexity.complexity_count('Full-Rank-LMS', 40) == (81, 80)

    def test_full_rank_mber(self):
        assert complexity.complexity_count('Full-Rank-MBER', 40) == (161, 159)

    def test_eig(self):
        assert complexity.complexity_count('EIG', 40) == (64000, 64000)

    def test_mwf_formula(self):
        """Additions match the quoted 11857; multiplications follow the formula (15474, not 15594)."""
        assert complexity.complexity_count('MBER-MWF', 40, 8) == (15474, 11857)

    @pytest.mark.parametrize("alias", ['MWF-MBER', 'mber-mwf', ' MBER-MWF '])
    def test_aliases(self, alias):
        assert complexity.complexity_count(alias, 40, 8) == (15474, 11857)

    def test_receiver_names(self):
        assert complexity.complexity_count('jidf-mber', 40, 8, 8, 4) == (1825, 1595)
        assert complexity.complexity_count('full-lms', 40) == (81, 80)

    def test_unknown_label(self):
        with pytest.raises(ArgumentError, match="unknown algorithm"):
            complexity.complexity_count('RLS', 40)

    def test_missing_parameter(self):
        with pytest.raises(ArgumentError, match="positive D"):
            complexity.complexity_count('MBER-JIDF', 40, None, 8, 4)

    def test_negative_psi_sum(self):
        with pytest.raises(ArgumentError, match="psi_sum"):
            complexity.complexity_count('MBER-JIDF', 40, 8, 8, 4, psi_sum=-1)


class TestPsiSum:
    """Tests for the structural psi sums."""

    def test_bound(self):
        assert complexity.psi_sum_bound(8, 4, 8) == 256

    def test_measured(self):
        assert complexity.measured_psi_sum(40, 8, 8, 4) == 61 + 60 + 59 + 58

    def test_measured_counts_do_not_exceed_bound(self):
        for M, D, I, B in [(40, 8, 8, 4), (16, 4, 4, 2), (12, 3, 2, 3)]:
            measured = complexity.complexity_count('MBER-JIDF', M, D, I, B,
                complexity.measured_psi_sum(M, D, I, B))
            bound = complexity.complexity_count('MBER-JIDF', M, D, I, B)
            assert measured[0] <= bound[0]
            assert measured[1] <= bound[1]


class TestComplexityTable:
    """Tests for the table written next to the BER curves."""

    def test_paper_preset(self):
        rows = {label: (mults, adds) for label, mults, adds in
            complexity.complexity_table(config.parse_config(preset='paper'))}
        assert rows['MBER-JIDF'] == (1825, 1595)
        assert rows['MBER-JIDF-measured'] == (1807, 1577)
        assert rows['Full-Rank-LMS'] == (81, 80)
        assert set(rows) == set(complexity.ALGORITHMS) | {'MBER-JIDF-measured'}
