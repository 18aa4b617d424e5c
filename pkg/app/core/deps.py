"""
dependency_providers.py

This module provides the dependency functions wiring repositories into
services and services into managers for the command layer.
"""
from typing import Optional

from app.core.config import settings
from app.data.verification import VerificationPlan
from app.managers.spectrum_manager import SpectrumManager
from app.managers.verification_manager import VerificationManager
from app.repositories.ball_determinant_repository import BallDeterminantRepository
from app.repositories.ritz_repository import RitzRepository
from app.services.continuation_service import ContinuationService
from app.services.ritz_service import RitzService
from app.services.root_service import RootSolverService
from app.services.spectrum_service import SpectrumService

# Shared stateless repositories (singleton pattern)
_determinant_repository = BallDeterminantRepository()
_ritz_repository = RitzRepository()


def get_determinant_repository() -> BallDeterminantRepository:
    """
    Dependency provider for BallDeterminantRepository.

    Returns:
        BallDeterminantRepository: The shared repository instance.
    """
    return _determinant_repository


def get_ritz_repository() -> RitzRepository:
    """
    Dependency provider for RitzRepository.

    Returns:
        RitzRepository: The shared repository instance, caching assembled bases.
    """
    return _ritz_repository


def get_root_service(
    determinant_repository: Optional[BallDeterminantRepository] = None) -> RootSolverService:
    """
    Dependency provider for RootSolverService.

    Returns:
        RootSolverService: A new instance of RootSolverService.
    """
    return RootSolverService(determinant_repository=determinant_repository or get_determinant_repository())


def get_spectrum_service(root_service: Optional[RootSolverService] = None) -> SpectrumService:
    """
    Dependency provider for SpectrumService.
    """
    return SpectrumService(root_service=root_service or get_root_service(), max_workers=settings.MAX_WORKERS)


def get_continuation_service(root_service: Optional[RootSolverService] = None) -> ContinuationService:
    """
    Dependency provider for ContinuationService.
    """
    return ContinuationService(root_service=root_service or get_root_service(), max_workers=settings.MAX_WORKERS)


def get_ritz_service(ritz_repository: Optional[RitzRepository] = None) -> RitzService:
    """
    Dependency provider for RitzService.
    """
    return RitzService(ritz_repository=ritz_repository or get_ritz_repository())


def get_spectrum_manager(
    spectrum_service: Optional[SpectrumService] = None,
    continuation_service: Optional[ContinuationService] = None) -> SpectrumManager:
    """
    Dependency provider for SpectrumManager.

    Returns:
        SpectrumManager: A new instance of SpectrumManager.
    """
    root_service = get_root_service()
    return SpectrumManager(
        spectrum_service=spectrum_service or get_spectrum_service(root_service),
        continuation_service=continuation_service or get_continuation_service(root_service),
    )


def get_verification_manager(plan: Optional[VerificationPlan] = None) -> VerificationManager:
    """
    Dependency provider for VerificationManager.

    Returns:
        VerificationManager: A new instance sharing one root service across its services.
    """
    determinant_repository = get_determinant_repository()
    root_service = get_root_service(determinant_repository)
    return VerificationManager(
        determinant_repository=determinant_repository,
        root_service=root_service,
        spectrum_service=get_spectrum_service(root_service),
        continuation_service=get_continuation_service(root_service),
        ritz_service=get_ritz_service(),
        plan=plan,
    )
