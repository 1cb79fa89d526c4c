"""
設定のテストモジュール

このモジュールは、Settings の既定値・上書き・環境変数からの読み込みをテストします。
"""

import dataclasses

import pytest

from src.utils.config import ENV_NAMES, Settings, load_settings
from src.utils.errors import InputError


def test_defaults():
    """既定値のテスト"""
    settings = Settings()
    assert settings.bit_budget == 2 ** 20
    assert settings.search_budget == 10 ** 8
    assert settings.enum_budget == 10 ** 7
    assert settings.detection_limit == 24
    assert settings.exact_inner_limit == 20
    assert settings.asymptotic_margin == 3
    assert settings.log_level == "INFO"


def test_settings_are_frozen():
    """設定が変更不可であることのテスト"""
    with pytest.raises(dataclasses.FrozenInstanceError):
        Settings().bit_budget = 1


def test_override_skips_none():
    """None の値は上書きしないことのテスト"""
    settings = Settings().override(bit_budget=4096, search_budget=None)
    assert settings.bit_budget == 4096
    assert settings.search_budget == 10 ** 8


def test_describe():
    """1 行表現のテスト"""
    text = Settings(detection_limit=5).describe()
    assert text.startswith("bit_budget=1048576 ")
    assert "detection_limit=5" in text
    assert text.endswith("log_level=INFO")


def test_load_from_environment():
    """環境変数からの読み込みのテスト"""
    settings = load_settings(
        {
            "RAMSEY_BIT_BUDGET": "0x1000",
            "RAMSEY_ENUM_BUDGET": "",
            "RAMSEY_LOG_LEVEL": "debug",
        }
    )
    assert settings.bit_budget == 4096
    assert settings.enum_budget == 10 ** 7
    assert settings.log_level == "DEBUG"


def test_load_defaults_from_empty_environment():
    """環境変数が無い場合は既定値になることのテスト"""
    assert load_settings({}) == Settings()


@pytest.mark.parametrize("raw", ["abc", "0", "-3"])
def test_load_rejects_bad_values(raw):
    """不正な環境変数のテスト"""
    with pytest.raises(InputError) as e:
        load_settings({"RAMSEY_SEARCH_BUDGET": raw})
    assert e.value.code == "CLI_001"
    assert e.value.exit_code == 2


def test_every_field_has_environment_name():
    """全ての設定項目に環境変数名があることのテスト"""
    assert set(ENV_NAMES) == {f.name for f in dataclasses.fields(Settings)}
