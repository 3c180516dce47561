from __future__ import annotations

import pytest

from shotspeak.config import AppConfig
from shotspeak.service import ShotStore
from shotspeak.testing import DEMO_COMPETITION_ID, make_demo_dataset


@pytest.fixture(scope="session")
def demo_data_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo") / "data"
    make_demo_dataset(root, n_matches=4, shots_per_match=28, seed=11)
    return root


@pytest.fixture()
def app_config(demo_data_root, tmp_path):
    return AppConfig(
        data_root=demo_data_root,
        model_cache_dir=tmp_path / "models",
        shots_cache_dir=tmp_path / "shots",
        model_cards_dir=tmp_path / "model_cards",
    )


@pytest.fixture()
def store(app_config):
    return ShotStore(app_config)


@pytest.fixture(scope="session")
def demo_competition_id():
    return DEMO_COMPETITION_ID
