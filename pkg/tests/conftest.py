import pathlib

import pytest

from gwflow import fixtures
from gwflow.api import ApiCore
from gwflow.engine import Engine
from gwflow.server import serve_in_thread

REPO = pathlib.Path(__file__).resolve().parents[1]
DEMO_FIXTURE = REPO / "fixtures" / "matrix_demo.gwf"
GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


@pytest.fixture
def engine(tmp_path):
    e = Engine.open(str(tmp_path / "data"))
    yield e
    e.close()


@pytest.fixture
def office(engine):
    """Engine with the starter configuration applied."""
    fixtures.apply_init(engine)
    return engine


@pytest.fixture
def demo(office):
    """Starter configuration plus the three matrix demo documents."""
    fixtures.load_file(office, str(DEMO_FIXTURE))
    return office


@pytest.fixture
def served(office):
    """Office engine behind a real HTTP server on a loopback port."""
    core = ApiCore(office)
    server, thread = serve_in_thread(core)
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}", office
    server.shutdown()
    server.server_close()


def user_id(engine, name):
    return engine.state.directory.find_user(name).id


def doc_by_title(engine, title):
    for d in engine.state.tree.documents():
        if d.name == title:
            return d
    raise AssertionError(f"no document titled {title!r}")
