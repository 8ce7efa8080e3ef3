import numpy as np
import pytest

from calculations import (
    BorderlineSolver,
    HcParams,
    SpecParams,
    VcParams,
    borderline_curve,
    bound_hc_closed,
    bound_vc_algebraic,
    bound_vc_closed,
    ewif_hc,
    ewif_sd,
    ewif_vc,
)
from utils.exceptions import DomainError

GRID = np.linspace(0.1, 0.9, 17).tolist()


class TestClosedBounds:
    def test_hc_bound_is_the_break_even_cost(self):
        bound = bound_hc_closed(0.9, 0.8, 0.3, 2, 2)
        assert bound == pytest.approx(0.47095, abs=1e-4)
        at_bound = ewif_hc(HcParams(0.9, 0.8, bound, 0.3, 2, 2))
        assert at_bound == pytest.approx(ewif_sd(SpecParams(0.8, 0.3, 2)), rel=1e-9)

    def test_hc_bound_needs_an_upper_draft(self):
        with pytest.raises(DomainError):
            bound_hc_closed(0.9, 0.8, 0.3, 0, 2)

    def test_vc_bound_root_equalizes_ewif(self):
        bound = bound_vc_closed(0.9, 0.5, 0.01, 2, 3, 3)
        assert bound > 0
        cascade = ewif_vc(VcParams(0.9, 0.5, bound, 0.01, 2, 3))
        assert cascade == pytest.approx(ewif_sd(SpecParams(0.5, 0.01, 3)), rel=1e-9)

    def test_vc_rearranged_bound_agrees_with_root(self):
        closed = bound_vc_closed(0.9, 0.5, 0.01, 2, 3, 3)
        assert bound_vc_algebraic(0.9, 0.5, 0.01, 2, 3, 3) == pytest.approx(closed, rel=1e-9)

    def test_vc_bound_is_zero_when_cascade_cannot_win(self):
        # a top draft no better than the bottom one cannot pay for itself
        assert bound_vc_closed(0.05, 0.9, 0.01, 1, 1, 8) == 0.0


class TestBorderline:
    @pytest.mark.parametrize('mode', ['VC', 'HC'])
    def test_curve_is_monotone_non_decreasing(self, mode):
        points = borderline_curve(GRID, 0.01, 8, 8, mode=mode)
        values = [p.c_d1_critical for p in points]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert [p.alpha_d1 for p in points] == sorted(GRID)

    @pytest.mark.parametrize('mode', ['VC', 'HC'])
    def test_inequality_flips_across_the_critical_cost(self, mode):
        solver = BorderlineSolver(0.01, 8, 8, mode=mode)
        for alpha in GRID:
            point = solver.solve(alpha)
            if not point.present:
                assert solver.margin(alpha, 1e-12) < 0
                continue
            if point.c_d1_critical >= 1.0:
                assert solver.margin(alpha, 1.0) >= 0
                continue
            assert point.bracket_width <= 1e-6
            assert solver.margin(alpha, point.c_d1_critical) >= 0
            assert solver.margin(alpha, point.c_d1_critical + 2e-6) < 0

    def test_grid_is_sorted_ascending(self):
        points = borderline_curve([0.7, 0.2, 0.5], 0.01, 4, 4)
        assert [p.alpha_d1 for p in points] == [0.2, 0.5, 0.7]

    def test_single_point_grid(self):
        assert len(borderline_curve([0.6], 0.01, 4, 4)) == 1

    @pytest.mark.parametrize('grid', [[0.0, 0.5], [0.5, 1.0], [-0.1]])
    def test_grid_outside_open_interval_raises(self, grid):
        with pytest.raises(DomainError):
            borderline_curve(grid, 0.01, 4, 4)

    def test_unknown_mode_raises(self):
        with pytest.raises(DomainError):
            BorderlineSolver(0.01, 4, 4, mode='XC')
