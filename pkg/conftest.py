import pytest

from src.services.bundle_service import BundleDiscService
from src.services.collar_service import CollarService
from src.services.render_service import RenderService
from src.services.slope_service import SlopeService
from src.services.tree_service import MoebiusTreeService
from src.services.verification_service import VerificationService
from src.utils.config import Config


@pytest.fixture(scope="session")
def config():
    return Config(overrides={'LOG_LEVEL': 'WARNING'})


@pytest.fixture(scope="session")
def slope_service(config):
    return SlopeService(config)


@pytest.fixture(scope="session")
def tree_service(config, slope_service):
    return MoebiusTreeService(config, slope_service)


@pytest.fixture(scope="session")
def collar_service(config, tree_service):
    return CollarService(config, tree_service)


@pytest.fixture(scope="session")
def verification_service(config, tree_service):
    return VerificationService(config, tree_service)


@pytest.fixture(scope="session")
def render_service(config, tree_service):
    return RenderService(config, tree_service)


@pytest.fixture(scope="session")
def bundle_service(config, slope_service):
    return BundleDiscService(config, slope_service)


@pytest.fixture(scope="session")
def box_30_61(tree_service):
    return tree_service.build_box_graph(30, 61)
