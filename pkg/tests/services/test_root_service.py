import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import DomainError
from app.data.problem import BallProblem, BoundaryKind
from app.data.roots import RootRecord
from app.services.root_service import RootSolverService

CLAMPED = BallProblem(N=2, kind=BoundaryKind.DIRICHLET)


def _record(z):
    return RootRecord(
        N=2, l=0, kind=BoundaryKind.DIRICHLET, lam=z ** 4, z=z, bracket=(z, z), residual=0.0, iterations=0
    )


def test_halved_grid_contains_the_coarse_grid():
    coarse = RootSolverService.scan_grid(0.01, 4.0, 0.02)
    fine = set(RootSolverService.scan_grid(0.01, 4.0, 0.01))
    assert coarse[-1] == 4.0
    assert all(z in fine for z in coarse)


@pytest.mark.parametrize(
    "lambda_max, z_step",
    [(500.0, 0.0), (0.0, 0.01), (31.0 ** 4, 0.01), (1e-9, 0.01)],
)
def test_invalid_windows_are_rejected(root_service, lambda_max, z_step):
    with pytest.raises(DomainError):
        root_service.scan_roots(CLAMPED, 0, lambda_max, z_step)


def test_negative_family_is_rejected(root_service):
    with pytest.raises(DomainError):
        root_service.scan_roots(CLAMPED, -1, 500.0)


def test_bisect_refines_a_simple_root():
    refinement = RootSolverService.bisect(lambda z: z - 2.0, 1.0, 3.0, -1.0, 1.0)
    assert abs(refinement.z - 2.0) < 1e-12
    assert refinement.bracket[0] <= 2.0 <= refinement.bracket[1]
    assert refinement.residual < 1e-12


def test_dedupe_merges_nearby_roots():
    kept = RootSolverService.dedupe([_record(2.0), _record(1.0), _record(2.0 + 1e-10)])
    assert [record.z for record in kept] == [1.0, 2.0]


def test_first_clamped_eigenvalue(root_service):
    roots = root_service.scan_roots(CLAMPED, 0, 200.0)
    assert len(roots) == 1
    assert 104.3 < roots[0].lam < 104.4
    assert roots[0].sigma is None
    assert roots[0].residual <= 1e-8


def test_clamped_eigenfunction_satisfies_boundary_conditions(root_service, determinant_repository):
    root = root_service.scan_roots(CLAMPED, 1, 1000.0)[0]
    eigenfunction = determinant_repository.dirichlet_null_vector(2, 1, root.lam)
    value, slope = determinant_repository.dirichlet_boundary_residuals(eigenfunction)
    assert value < 1e-8 and slope < 1e-8


@pytest.mark.parametrize("N, l, sigma", [(2, 0, 0.3), (2, 2, 0.0), (3, 2, 0.7)])
def test_free_eigenfunction_satisfies_boundary_conditions(root_service, determinant_repository, N, l, sigma):
    problem = BallProblem(N=N, sigma=sigma)
    root = root_service.scan_roots(problem, l, 500.0)[0]
    eigenfunction = determinant_repository.null_vector(N, l, root.lam, sigma)
    moment, shear = determinant_repository.neumann_boundary_residuals(eigenfunction, sigma)
    assert moment < 1e-7 and shear < 1e-7


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("l", [0, 1, 2])
def test_degenerate_free_roots_coincide_with_clamped_roots(root_service, N, l):
    clamped = root_service.scan_roots(BallProblem(N=N, kind=BoundaryKind.DIRICHLET), l, 3000.0)
    degenerate = root_service.scan_roots(BallProblem(N=N, sigma=1.0), l, 3000.0)
    assert len(clamped) == len(degenerate) > 0
    assert_allclose([root.lam for root in degenerate], [root.lam for root in clamped], rtol=1e-8)


def test_halving_the_step_changes_nothing(root_service):
    problem = BallProblem(N=2, sigma=0.5)
    coarse = root_service.scan_roots(problem, 1, 500.0, z_step=0.02)
    fine = root_service.scan_roots(problem, 1, 500.0, z_step=0.01)
    assert len(coarse) == len(fine)
    assert_allclose([root.lam for root in fine], [root.lam for root in coarse], rtol=1e-9)


def test_nearest_root_finds_the_predicted_root(root_service):
    root = root_service.scan_roots(CLAMPED, 0, 200.0)[0]
    found = root_service.nearest_root(CLAMPED, 0, root.z * 1.01, 0.05)
    assert found is not None
    refinement, seen = found
    assert seen == 1
    assert_allclose(refinement.z, root.z, rtol=1e-11)
    assert root_service.nearest_root(CLAMPED, 0, root.z * 1.5, 0.02) is None
