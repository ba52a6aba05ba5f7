import json
from pathlib import Path

import pytest

from critters.engine import parse_test_config
from critters.levels import builtin_catalog, get_builtin

GOLDEN = Path(__file__).parent / "golden"


def golden_text(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


def golden_json(name: str):
    return json.loads(golden_text(name))


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def base01(catalog):
    return get_builtin("base-01")


@pytest.fixture(scope="session")
def loop01(catalog):
    return get_builtin("loop-01")


@pytest.fixture(scope="session")
def loop02(catalog):
    return get_builtin("loop-02")


@pytest.fixture(scope="session")
def loop10(catalog):
    return get_builtin("loop-10")


@pytest.fixture(scope="session")
def orange_portal(base01):
    """Single portal on the first dirt tile checking for the orange shirt."""
    return parse_test_config(base01, golden_json("config_base01_orange_portal.json"))


@pytest.fixture(scope="session")
def both_portals(base01):
    """Orange portal plus a pre-dirt red-shirt portal: the full solution."""
    return parse_test_config(base01, golden_json("config_base01_both_portals.json"))


@pytest.fixture(scope="session")
def short_test(loop01):
    """Signpost test: the berry count always matches the round counter."""
    return parse_test_config(loop01, golden_json("config_loop01_short.json"))
