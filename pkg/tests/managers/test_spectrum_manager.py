import pytest

from app.data.branch import BranchStatus, CheckStatus
from app.data.run_config import RunConfig, Subcommand
from app.managers.spectrum_manager import SpectrumManager


@pytest.fixture(scope="module")
def spectrum_manager(spectrum_service, continuation_service):
    return SpectrumManager(spectrum_service=spectrum_service, continuation_service=continuation_service)


def test_dirichlet_table(spectrum_manager):
    config = RunConfig(subcommand=Subcommand.DIRICHLET, count=1, lambda_max=500.0, l_max=3)
    spectrum = spectrum_manager.dirichlet_table(config)
    assert spectrum.total_ordinals == 1
    assert 104.3 < spectrum.entries[0].lam < 104.4


def test_neumann_table_starts_with_rigid_motions(spectrum_manager):
    config = RunConfig(subcommand=Subcommand.NEUMANN, sigma=0.5, count=3)
    spectrum = spectrum_manager.neumann_table(config)
    assert spectrum.values() == [0.0, 0.0, 0.0]
    assert spectrum.sigma == 0.5


def test_figure1_holds_the_quadrupole_family(spectrum_manager):
    config = RunConfig(subcommand=Subcommand.FIGURE1, lambda_max=60.0, l_max=2)
    branches = spectrum_manager.figure1(config)
    assert [branch.l for branch in branches] == [2]
    assert all(0.0 < lam < 60.0 for lam in branches[0].lambdas)


@pytest.mark.slow
def test_branches_below_forty(spectrum_manager):
    config = RunConfig(subcommand=Subcommand.BRANCHES, lambda_max=40.0, l_max=2)
    branches, reports = spectrum_manager.branches(config)

    assert [(branch.l, branch.branch_ordinal) for branch in branches] == [(2, 1)]
    assert branches[0].status is BranchStatus.COMPLETE
    assert branches[0].sigmas[-1] == 0.999
    assert {report.check.split()[0] for report in reports} == {"lipschitz", "decay"}
    assert all(report.status is CheckStatus.PASS for report in reports)
