"""
メインプログラムのテストモジュール

このモジュールは、コマンドライン引数の解析、設定の組み立て、各サブコマンドの実行と終了コードをテストします。
"""

import pytest
from unittest.mock import patch

from src.hypergraph_core.colored_hypergraph import BLUE, ColoredHypergraph
from src.main import Application, build_parser, config_line, main, settings_from_args
from src.utils.config import Settings
from src.utils.logger import Logger


def run_main(argv):
    """main を実行して終了コードを返す"""
    with pytest.raises(SystemExit) as e:
        main(argv)
    return e.value.code


@pytest.fixture
def app():
    """画面にログを出さないアプリケーション"""
    return Application(Settings(log_level="ERROR"), Logger("ERROR", echo=False))


@pytest.fixture
def coloring_file(tmp_path):
    """全青の 3-一様彩色ファイル"""
    path = tmp_path / "blue.coloring"
    ColoredHypergraph.constant(12, 3, 2, BLUE).save(str(path))
    return str(path)


def test_main_initialization():
    """メイン関数の初期化テスト"""
    with patch("src.main.Application") as mock_app:
        mock_app.return_value.run.return_value = 3
        assert run_main(["--quiet", "selftest"]) == 3
        mock_app.assert_called_once()
        mock_app.return_value.run.assert_called_once()
        settings = mock_app.call_args[0][0]
        assert settings.log_level == "ERROR"


def test_application_initialization():
    """アプリケーション初期化のテスト"""
    with patch("src.main.Logger") as mock_logger:
        app = Application(Settings(log_level="ERROR"))
        assert mock_logger.called
        assert app.extractor.calculator is app.calculator
        assert app.validator.logger is app.logger


def test_settings_from_args():
    """CLI 引数が環境変数より優先されることのテスト"""
    parser = build_parser()
    args = parser.parse_args(["--verbose", "--bit-budget", "4096", "selftest"])
    settings = settings_from_args(args, {"RAMSEY_BIT_BUDGET": "64", "RAMSEY_ENUM_BUDGET": "99"})
    assert settings.bit_budget == 4096
    assert settings.enum_budget == 99
    assert settings.log_level == "DEBUG"
    quiet = settings_from_args(parser.parse_args(["--quiet", "selftest"]), {})
    assert quiet.log_level == "ERROR"


def test_config_line():
    """設定行に再実行に必要な値が含まれることのテスト"""
    args = build_parser().parse_args(["extract", "--n", "20", "--a", "3", "--seed", "5"])
    line = config_line(args, Settings())
    assert line.startswith("config: command=extract ")
    assert "seed=5" in line
    assert "method=ramsey" in line
    assert "bit_budget=1048576" in line
    assert "quiet" not in line


@pytest.mark.parametrize("argv", [["--bit-budget", "0", "selftest"], ["--quiet", "--verbose", "selftest"], []])
def test_invalid_arguments(argv):
    """引数の解析エラーのテスト"""
    assert run_main(argv) == 2


def test_extract_from_file(capsys, tmp_path, coloring_file):
    """彩色ファイルからの抽出のテスト"""
    prefix = str(tmp_path / "run")
    assert run_main(["--quiet", "extract", "--input", coloring_file, "--k", "4", "--out", prefix]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("config: command=extract")
    assert out[1].startswith("result method=ramsey")
    assert out[1].endswith("color=1")
    assert out[-1].startswith("validation:")
    assert (tmp_path / "run.result").exists()
    assert (tmp_path / "run.trace").exists()
    assert not (tmp_path / "run.coloring").exists()


def test_extract_erdos_rado(capsys):
    """n = 17 の乱数彩色での Erdős–Rado 抽出のテスト"""
    argv = ["--quiet", "extract", "--method", "erdos-rado", "--n", "17", "--a", "3", "--seed", "7", "--k", "3"]
    assert run_main(argv) == 0
    out = capsys.readouterr().out
    assert "size=3" in out
    assert "termination: stage_cap" in out


def test_extract_precondition_failure(capsys):
    """CFS 構成に a = 2 を与えた場合のテスト"""
    argv = ["extract", "--method", "cfs", "--n", "10", "--a", "2", "--seed", "1", "--k", "3"]
    assert run_main(argv) == 2
    assert "エラーコード: EXT_001" in capsys.readouterr().err


def test_extract_needs_coloring(app):
    """彩色の指定が無い場合のテスト"""
    args = build_parser().parse_args(["extract", "--n", "10"])
    assert app.run(args) == 2
    assert any("CLI_001" in entry for entry in app.logger.logs)


def test_exact_inner_only_for_ramsey(app):
    """--exact-inner を他の手法に与えた場合のテスト"""
    args = build_parser().parse_args(
        ["extract", "--method", "cfs", "--n", "8", "--a", "3", "--seed", "0", "--k", "3", "--exact-inner"]
    )
    assert app.run(args) == 2


def test_validate_round_trip(capsys, tmp_path):
    """extract --out の出力を validate で検証するテスト"""
    prefix = str(tmp_path / "cfs")
    argv = ["--quiet", "extract", "--method", "cfs", "--n", "30", "--a", "3", "--seed", "5", "--k", "4", "--out", prefix]
    assert run_main(argv) == 0
    assert (tmp_path / "cfs.coloring").exists()
    capsys.readouterr()

    validate = ["--quiet", "validate", "--input", prefix + ".coloring", "--run", prefix]
    assert run_main(validate) == 0
    out = capsys.readouterr().out
    assert "validate method=cfs3 passed=True" in out
    assert "PASS squash_distinct" in out

    # 結果ファイルを書き換えるとトレースと一致しない
    (tmp_path / "cfs.result").write_text("result method=cfs3 size=1 vertices=1 color=-\n", encoding="utf-8")
    assert run_main(validate) == 4


def test_validate_missing_files(tmp_path, coloring_file):
    """存在しない実行結果のテスト"""
    assert run_main(["--quiet", "validate", "--input", coloring_file, "--run", str(tmp_path / "none")]) == 2


def test_bound_compare(capsys):
    """上界の比較表示のテスト"""
    assert run_main(["--quiet", "bound", "--a", "3", "--k", "5"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    families = [row.split("\t")[0] for row in rows]
    assert "cfs" in families
    assert families[-1] == "ramsey"
    assert all(len(row.split("\t")) == 4 for row in rows)


def test_bound_single_family(capsys):
    """1 系統の表示のテスト"""
    assert run_main(["--quiet", "bound", "--a", "2", "--k", "4", "--family", "base", "--style", "decimal"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("base\t20\t")


def test_bound_tow_and_identity(capsys):
    """TOW の評価と恒等式の確認のテスト"""
    assert run_main(["--quiet", "bound", "--tow", "1", "1", "1"]) == 0
    assert "TOW_2(1,1,1) = 16" in capsys.readouterr().out
    assert run_main(["--quiet", "bound", "--identity", "7", "--count", "3"]) == 0
    assert "-> True" in capsys.readouterr().out


def test_bound_invalid_family(capsys):
    """不正な系統とパラメータの組合せのテスト"""
    assert run_main(["--quiet", "bound", "--a", "3", "--k", "5", "--family", "base"]) == 2


def test_lemma_sigma(capsys):
    """長さ和の表のテスト"""
    assert run_main(["--quiet", "lemma", "--c", "2", "--k", "2", "3", "--enumerate"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "c\tk\texact\tbound\tratio"
    assert out[2].startswith("2\t2\t6\t")


def test_lemma_other_kinds(capsys):
    """辺数和・パスカル・スターリングの表示のテスト"""
    assert run_main(["--quiet", "lemma", "--kind", "hyper", "--a", "3", "--c", "2", "--k", "3"]) == 0
    assert "exact=6 bound=72 holds=True" in capsys.readouterr().out
    assert run_main(["--quiet", "lemma", "--kind", "pascal", "--a", "1", "--n", "2"]) == 0
    assert "lhs=6 rhs=6 equal=True" in capsys.readouterr().out
    assert run_main(["--quiet", "lemma", "--kind", "stirling", "--n", "5", "20"]) == 0
    assert capsys.readouterr().out.count("holds=True") == 2


def test_search(capsys, tmp_path):
    """全探索と証拠の保存のテスト"""
    witness = tmp_path / "witness.coloring"
    assert run_main(["--quiet", "search", "--a", "2", "--k", "3", "--witness", str(witness)]) == 0
    assert "R(2,3,2) = 6" in capsys.readouterr().out
    assert ColoredHypergraph.load(str(witness)).n == 5


def test_search_over_budget(capsys):
    """予算を超えた全探索は区間を表示して終了コード 3 になることのテスト"""
    assert run_main(["--quiet", "search", "--a", "2", "--k", "3", "--budget", "100"]) == 3
    assert "in [5, 6]" in capsys.readouterr().out


def test_selftest(capsys):
    """selftest のテスト"""
    assert run_main(["--quiet", "selftest", "--seeds", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()[1:]
    assert lines
    assert all(line.startswith("ok\t") for line in lines)


def test_unexpected_error(app):
    """予期せぬ例外は終了コード 1 になることのテスト"""
    args = build_parser().parse_args(["bound"])
    with patch.object(app, "cmd_bound", side_effect=RuntimeError("boom")):
        assert app.run(args) == 1
    assert any("SYS_001" in entry for entry in app.logger.logs)


def test_log_file(tmp_path):
    """--log-file にログ履歴が保存されることのテスト"""
    log_file = tmp_path / "run.log"
    argv = ["--quiet", "--log-file", str(log_file), "extract", "--method", "cfs", "--n", "10", "--a", "2", "--seed", "1", "--k", "3"]
    assert run_main(argv) == 2
    assert "エラーコード: EXT_001" in log_file.read_text(encoding="utf-8")
