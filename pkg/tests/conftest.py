"""
Shared fixtures: one repository/service stack per test session.
"""
import pytest

from app.repositories.ball_determinant_repository import BallDeterminantRepository
from app.repositories.ritz_repository import RitzRepository
from app.services.continuation_service import ContinuationService
from app.services.ritz_service import RitzService
from app.services.root_service import RootSolverService
from app.services.spectrum_service import SpectrumService


@pytest.fixture(scope="session")
def determinant_repository():
    return BallDeterminantRepository()


@pytest.fixture(scope="session")
def root_service(determinant_repository):
    return RootSolverService(determinant_repository=determinant_repository)


@pytest.fixture(scope="session")
def spectrum_service(root_service):
    return SpectrumService(root_service=root_service, max_workers=1)


@pytest.fixture(scope="session")
def continuation_service(root_service):
    return ContinuationService(root_service=root_service, max_workers=1)


@pytest.fixture(scope="session")
def ritz_repository():
    return RitzRepository()


@pytest.fixture(scope="session")
def ritz_service(ritz_repository):
    return RitzService(ritz_repository=ritz_repository)
