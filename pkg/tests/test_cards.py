from __future__ import annotations

import pytest

from shotspeak.cards import generate_model_card
from shotspeak.explain import SALIENCE_THRESHOLD, XG_THRESHOLDS
from shotspeak.textgen import load_prompt_assets


@pytest.fixture(scope="session")
def assets():
    return load_prompt_assets()


def test_single_model_card_has_twelve_coefficient_rows(store, demo_competition_id, assets, app_config):
    model = store.fit(demo_competition_id)
    card = generate_model_card([model], assets, app_config)
    section = card.split("## Fitted models")[1].split("## Explanations")[0]
    rows = [line for line in section.splitlines() if line.startswith("| ") and "---" not in line]
    # header row + intercept + 11 features
    assert len(rows) == 1 + 12


def test_two_models_render_in_stable_order(store, demo_competition_id, assets, app_config):
    import dataclasses

    model = store.fit(demo_competition_id)
    other = dataclasses.replace(model, competition_id="aaa-first")
    card = generate_model_card([model, other], assets, app_config)
    reversed_card = generate_model_card([other, model], assets, app_config)
    assert card == reversed_card
    assert card.index("### aaa-first") < card.index(f"### {demo_competition_id}")


def test_regeneration_is_byte_identical(store, demo_competition_id, assets, app_config):
    model = store.fit(demo_competition_id)
    bands = {demo_competition_id: store.bands(demo_competition_id)}
    first = generate_model_card([model], assets, app_config, bands)
    second = generate_model_card([model], assets, app_config, bands)
    assert first == second


def test_card_covers_required_content(store, demo_competition_id, assets, app_config):
    model = store.fit(demo_competition_id)
    card = generate_model_card([model], assets, app_config)
    assert f"{model.n_shots} shots ({model.n_goals} goals)" in card
    for threshold in XG_THRESHOLDS:
        assert str(threshold) in card
    assert str(SALIENCE_THRESHOLD) in card
    assert "## Limitations" in card
    assert "dataset bias" in card
    assert "goalkeeper-distance-to-goal" in card  # the retained-feature caveat
    assert f"{len(assets.qa_pairs)} question/answer" in card


def test_empty_model_list_rejected(assets, app_config):
    with pytest.raises(ValueError):
        generate_model_card([], assets, app_config)
