import math

import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from app.core.exceptions import DomainError, StartingRootMissingError
from app.data.branch import Branch, BranchSample, BranchStatus, CheckStatus, OrdinalCurve
from app.data.problem import BoundaryKind
from app.services.continuation_service import (
    ContinuationService,
    default_sigma_grid,
    figure_sigma_grid,
    sigma_grid,
)
from app.utils.retry_policy import BracketPolicy

TAIL_GRID = [0.0, 0.3, 0.6, 0.9, 0.95, 0.99, 0.999]


def _samples(points):
    return [BranchSample(sigma=sigma, lam=lam, residual=0.0) for sigma, lam in points]


def _curve(values, sigmas=TAIL_GRID, ordinal=4):
    return OrdinalCurve(N=2, ordinal=ordinal, samples=_samples(zip(sigmas, values)))


def _branch(l, ordinal, points, status=BranchStatus.COMPLETE):
    return Branch(
        N=2, l=l, branch_ordinal=ordinal, kind=BoundaryKind.NEUMANN, status=status, samples=_samples(points)
    )


def test_sigma_grids():
    assert sigma_grid(0.25) == [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999]
    assert figure_sigma_grid(0.25) == [0.25, 0.5, 0.75]

    grid = default_sigma_grid()
    assert len(grid) == 101
    assert grid[1] == 0.01 and grid[99] == 0.99 and grid[-1] == 0.999


@pytest.mark.parametrize("step", [0.0, 1.0, -0.1])
def test_invalid_sigma_step(step):
    with pytest.raises(DomainError):
        sigma_grid(step)


def test_samples_must_increase_in_sigma():
    with pytest.raises(ValueError):
        _curve([3.0, 2.0], sigmas=[0.5, 0.5])


def test_value_at():
    curve = _curve([1.0, 2.0], sigmas=[0.1, 0.2])
    assert curve.value_at(0.2) == 2.0
    assert curve.value_at(0.15) is None


def test_trace_branch_rejects_bad_requests(continuation_service):
    with pytest.raises(DomainError):
        continuation_service.trace_branch(2, 2, 1, [0.5, 0.2])
    with pytest.raises(DomainError):
        continuation_service.trace_branch(2, 2, 0, [0.0, 0.5])
    with pytest.raises(StartingRootMissingError):
        continuation_service.trace_branch(2, 2, 5, [0.0, 0.5], lambda_max=100.0)


def test_lowest_quadrupole_branch_decays_linearly(continuation_service):
    branch = continuation_service.trace_branch(2, 2, 1, sigma_grid(0.1), lambda_max=100.0)

    assert branch.status is BranchStatus.COMPLETE
    assert branch.sigmas == sigma_grid(0.1)
    assert all(b < a for a, b in zip(branch.lambdas, branch.lambdas[1:]))

    # lambda / (1 - sigma) tends to the energy 48 of r^2 cos 2theta, from below
    tail = branch.samples[-1]
    ratio = tail.lam / (1.0 - tail.sigma)
    assert 40.0 < ratio <= 48.0 * (1.0 + 1e-6)


def test_branch_values_are_determinant_roots(continuation_service, root_service):
    branch = continuation_service.trace_branch(2, 0, 1, [0.0, 0.2, 0.4], lambda_max=200.0)
    for sample in branch.samples:
        problem_roots = continuation_service.starting_roots(2, 0, sample.sigma, 200.0)
        assert_allclose(sample.lam, problem_roots[0].lam, rtol=1e-9)


def test_figure_dataset_stays_in_window(continuation_service):
    branches = continuation_service.figure1_dataset(
        N=2, lambda_cap=100.0, l_max=3, sigma_grid=figure_sigma_grid(0.1)
    )
    assert branches == sorted(branches, key=lambda branch: (branch.l, branch.branch_ordinal))
    assert {branch.l for branch in branches} >= {2, 3}
    for branch in branches:
        assert all(0.0 < lam < 100.0 for lam in branch.lambdas)


def test_ordinal_curves_expand_multiplicities():
    branches = [
        _branch(0, 1, [(0.0, 5.0), (0.5, 6.0)]),
        _branch(2, 1, [(0.0, 3.0), (0.5, 1.5)]),
    ]
    curves = ContinuationService.ordinal_curves(branches, 2, [0.0, 0.5], lambda_cap=100.0, l_max=3)

    assert [curve.ordinal for curve in curves] == [4, 5, 6]
    assert curves[0].lambdas == [3.0, 1.5]
    assert curves[1].lambdas == [3.0, 1.5]
    assert curves[2].lambdas == [5.0, 6.0]


def test_ordinal_curves_stop_below_highest_family():
    branches = [
        _branch(0, 1, [(0.0, 5.0)]),
        _branch(2, 1, [(0.0, 3.0)]),
    ]
    curves = ContinuationService.ordinal_curves(branches, 2, [0.0], lambda_cap=100.0, l_max=2)
    assert curves == []


def test_decay_passes_for_linear_decay():
    report = ContinuationService.check_decay(_curve([10.0 * (1.0 - s) for s in TAIL_GRID]))
    assert report.status is CheckStatus.PASS
    assert_allclose(report.worst_ratio, 1.0 / 3.0)
    assert_allclose(report.tail_ratio, 10.0)


def test_decay_fails_for_square_root_decay():
    report = ContinuationService.check_decay(_curve([10.0 * math.sqrt(1.0 - s) for s in TAIL_GRID]))
    assert report.status is CheckStatus.FAIL
    assert report.worst_ratio > 1.0
    assert "0.999" in report.location


def test_decay_inconclusive_without_tail_or_on_lost_branch():
    short = _curve([3.0, 2.0, 1.0], sigmas=[0.0, 0.5, 0.9])
    assert ContinuationService.check_decay(short).status is CheckStatus.INCONCLUSIVE

    lost = _branch(2, 1, [(s, 10.0 * (1.0 - s)) for s in TAIL_GRID], status=BranchStatus.LOST)
    assert ContinuationService.check_decay(lost).status is CheckStatus.INCONCLUSIVE


def test_constant_bound():
    values = [96.0 * (1.0 - s) for s in TAIL_GRID]
    assert ContinuationService.check_constant_bound(_curve(values), 192.0).status is CheckStatus.PASS

    values = [200.0 * (1.0 - s) for s in TAIL_GRID]
    report = ContinuationService.check_constant_bound(_curve(values), 192.0)
    assert report.status is CheckStatus.FAIL
    assert_allclose(report.worst_ratio, 200.0 / 192.0)


def test_lipschitz_passes_on_smooth_curve_and_fails_on_a_jump():
    smooth = [10.0 * (1.0 - s) for s in TAIL_GRID]
    assert ContinuationService.check_lipschitz(_curve(smooth)).status is CheckStatus.PASS

    jump = list(smooth)
    jump[1] = 40.0
    report = ContinuationService.check_lipschitz(_curve(jump))
    assert report.status is CheckStatus.FAIL
    assert "sigma=[0, 0.3]" in report.location


def test_lipschitz_skipped_for_single_sample():
    report = ContinuationService.check_lipschitz(_curve([1.0], sigmas=[0.5]))
    assert report.status is CheckStatus.SKIPPED


def test_lipschitz_checks_close_pairs_near_one():
    tail = [0.9, 0.95, 0.99, 0.999]
    values = [10.0 * (1.0 - s) for s in tail]
    assert ContinuationService.check_lipschitz(_curve(values, sigmas=tail)).status is CheckStatus.PASS

    values[-1] = 5.0
    report = ContinuationService.check_lipschitz(_curve(values, sigmas=tail))
    assert report.status is CheckStatus.FAIL
    assert "sigma=[0.99, 0.999]" in report.location
    assert report.worst_ratio > 50.0


def test_clamped_branch_is_flat_in_sigma(continuation_service):
    branch = continuation_service.trace_branch(2, 1, 1, [0.0, 0.3, 0.6, 0.9], kind=BoundaryKind.DIRICHLET)
    assert branch.status is BranchStatus.COMPLETE
    values = [sample.lam for sample in branch.samples]
    assert len(values) == 4
    assert_allclose(values, values[0], rtol=1e-10)


def test_finer_sigma_grid_reproduces_the_branch(continuation_service):
    coarse = continuation_service.trace_branch(2, 2, 1, sigma_grid(0.1))
    fine = continuation_service.trace_branch(2, 2, 1, sigma_grid(0.05))
    assert coarse.status is BranchStatus.COMPLETE and fine.status is BranchStatus.COMPLETE
    fine_values = {sample.sigma: sample.lam for sample in fine.samples}
    common = [sample for sample in coarse.samples if sample.sigma in fine_values]
    assert len(common) == len(coarse.samples)
    for sample in common:
        assert_allclose(fine_values[sample.sigma], sample.lam, rtol=1e-9)


def test_wide_window_holding_several_roots_is_reported(root_service):
    service = ContinuationService(
        root_service=root_service,
        policy=BracketPolicy(initial_width=0.9, max_expansions=0),
        max_workers=1,
    )
    branch = service.trace_branch(2, 0, 2, [0.0, 0.5], kind=BoundaryKind.DIRICHLET, lambda_max=2000.0)
    assert branch.status is BranchStatus.MERGED_WINDOW
    assert_allclose(branch.samples[-1].lam, branch.samples[0].lam, rtol=1e-10)


def test_lipschitz_detects_a_corrupted_sample_on_a_fine_grid():
    sigmas = [round(0.5 + 1e-3 * k, 12) for k in range(11)]
    values = [10.0 * (1.0 - s) for s in sigmas]
    assert ContinuationService.check_lipschitz(_curve(values, sigmas=sigmas)).status is CheckStatus.PASS

    values[5] *= 1.5
    report = ContinuationService.check_lipschitz(_curve(values, sigmas=sigmas))
    assert report.status is CheckStatus.FAIL
    assert "sigma=[0.504, 0.505]" in report.location


def test_samples_are_frozen_and_accept_the_lambda_alias():
    sample = BranchSample.model_validate({"sigma": 0.5, "lambda": 12.0, "residual": 0.0})
    assert sample.lam == 12.0
    assert sample.model_dump(by_alias=True)["lambda"] == 12.0
    with pytest.raises(ValidationError):
        sample.lam = 3.0
