"""
JSDoc: プロジェクトのエントリーポイント
概要: 本ファイルは、コマンドライン引数の解析、実行設定の組み立てと表示、各サブコマンド（extract / bound / lemma / search / validate / selftest）の振り分け、及び全体のエラーハンドリングと終了コードの決定を行います。
仕様: Python (PEP8準拠、type hint使用)
制限: 計算結果は標準出力、ログは標準エラーに出力する。終了コードは 0 成功、2 入力エラー、3 予算超過、4 法則違反、1 予期せぬエラー
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bound_calc.bound_calculator import FAMILIES, BoundCalculator
from .bound_calc.bound_expr import render
from .extractors.extraction_trace import format_result, load_trace, parse_result, write_trace
from .extractors.ramsey_extractor import RamseyExtractor
from .hypergraph_core.colored_hypergraph import ColoredHypergraph, is_homogeneous
from .lemma_oracle.lemma_calculator import LemmaOracle
from .utils.config import Settings, load_settings
from .utils.errors import (
    EXIT_OK,
    BudgetExceededError,
    InputError,
    InvariantViolationError,
    RamseyError,
    CLI_001,
    SYS_001,
    VER_002,
    VER_003,
)
from .utils.logger import Logger
from .verifier.ramsey_verifier import RamseyQuery, RamseyVerifier
from .verifier.run_validator import RunValidator

# CLI の手法名から抽出器の手法名へ
METHOD_NAMES: Dict[str, str] = {
    "ramsey": "ramsey",
    "erdos-rado": "erdos_rado",
    "cfs": "cfs3",
    "cfs-general": "cfs_general",
}

SELFTEST_RAMSEY: Tuple[Tuple[int, int, int, int], ...] = (
    (1, 3, 2, 5),
    (1, 2, 3, 4),
    (2, 3, 2, 6),
    (3, 3, 2, 3),
)


def _positive(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"整数ではありません: {text}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"正の値が必要です: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """引数パーサを作成する"""
    parser = argparse.ArgumentParser(
        prog="ramsey-extract",
        description="ハイパーグラフ Ramsey 数の均質集合抽出・上界計算・検証ツール",
    )
    parser.add_argument("--log-file", help="終了時にログ履歴を保存するファイル")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="エラーのみ表示する")
    verbosity.add_argument("--verbose", action="store_true", help="DEBUG ログも表示する")
    parser.add_argument("--bit-budget", type=_positive, help="厳密評価のビット予算")
    parser.add_argument("--search-budget", type=_positive, help="全探索で列挙する彩色数の上限")
    parser.add_argument("--enum-budget", type=_positive, help="補題オラクルの列挙上限")
    parser.add_argument("--detection-limit", type=_positive, help="G_i の均質集合探索の頂点数上限")
    commands = parser.add_subparsers(dest="command", required=True)

    extract = commands.add_parser("extract", help="彩色から均質集合を抽出する")
    extract.add_argument("--method", choices=sorted(METHOD_NAMES), default="ramsey")
    extract.add_argument("--input", help="彩色ファイル（テキストまたは .bin）")
    extract.add_argument("--n", type=int, help="乱数彩色の頂点数")
    extract.add_argument("--a", type=int, help="乱数彩色の一様性")
    extract.add_argument("--c", type=int, default=2, help="乱数彩色の色数")
    extract.add_argument("--seed", type=int, help="乱数彩色の seed")
    extract.add_argument("--k", type=int, help="目標サイズ")
    extract.add_argument("--out", help="出力ファイルの接頭辞（.result / .trace / .coloring）")
    extract.add_argument("--exact-inner", action="store_true", help="ramsey の内部集合を真の最大にする")

    bound = commands.add_parser("bound", help="R(a,k,c) の上界を比較する")
    bound.add_argument("--a", type=int, default=3)
    bound.add_argument("--k", type=int, default=5)
    bound.add_argument("--c", type=int, default=2)
    bound.add_argument("--family", choices=FAMILIES, help="1 系統だけ表示する")
    bound.add_argument(
        "--style", choices=("structured", "decimal", "tower"), default="structured"
    )
    bound.add_argument("--tow", type=int, nargs="+", metavar="B", help="TOW_c(B...) を評価する")
    bound.add_argument("--identity", type=int, choices=range(1, 8), help="TOW 補題の恒等式を確かめる")
    bound.add_argument("--args", type=int, nargs="+", default=[], help="恒等式の b_1..b_L")
    bound.add_argument("--b", type=int, default=1)
    bound.add_argument("--delta", type=int, default=0)
    bound.add_argument("--i", type=int, default=1)
    bound.add_argument("--count", type=int, help="恒等式 7 の 1 の個数")

    lemma = commands.add_parser("lemma", help="補題の厳密値と上界を表示する")
    lemma.add_argument(
        "--kind", choices=("sigma", "hyper", "pascal", "stirling"), default="sigma"
    )
    lemma.add_argument("--c", type=int, nargs="+", default=[2, 3])
    lemma.add_argument("--k", type=int, nargs="+", default=[2, 3, 4, 5])
    lemma.add_argument("--a", type=int, default=4)
    lemma.add_argument("--n", type=int, nargs="+", default=[10])
    lemma.add_argument("--r", type=int, help="hyper の上界に代入する R(a-2,k-1,c)")
    lemma.add_argument("--enumerate", action="store_true", help="sigma を列挙でも計算して照合する")

    search = commands.add_parser("search", help="小さな R(a,k,c) を全探索する")
    search.add_argument("--a", type=int, required=True)
    search.add_argument("--k", type=int, required=True)
    search.add_argument("--c", type=int, default=2)
    search.add_argument("--n-max", type=int, default=16)
    search.add_argument("--budget", type=_positive, help="列挙する彩色数の上限")
    search.add_argument("--workers", type=_positive, default=1)
    search.add_argument("--witness", help="証拠彩色の保存先")

    validate = commands.add_parser("validate", help="保存した抽出結果を検証する")
    validate.add_argument("--input", required=True, help="抽出に使った彩色ファイル")
    validate.add_argument("--run", required=True, help="extract --out で指定した接頭辞")

    selftest = commands.add_parser("selftest", help="既知の値と法則を手早く確かめる")
    selftest.add_argument("--seeds", type=_positive, default=20, help="n=17 の Erdős–Rado 検査の seed 数")
    return parser


def settings_from_args(args: argparse.Namespace, environ=None) -> Settings:
    """環境変数の設定に CLI 引数を上書きする"""
    level = "ERROR" if args.quiet else "DEBUG" if args.verbose else None
    return load_settings(environ).override(
        bit_budget=args.bit_budget,
        search_budget=args.search_budget,
        enum_budget=args.enum_budget,
        detection_limit=args.detection_limit,
        log_level=level,
    )


def config_line(args: argparse.Namespace, settings: Settings) -> str:
    """再実行に必要な値をすべて含む 1 行"""
    options = " ".join(
        f"{name}={value}"
        for name, value in sorted(vars(args).items())
        if name not in ("command", "quiet", "verbose") and value is not None
    )
    return f"config: command={args.command} {options} {settings.describe()}".replace("  ", " ")


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise InputError(CLI_001, f"ファイルに書き込めません: {e}")


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise InputError(CLI_001, f"ファイルを開けません: {e}")


class Application:
    """アプリケーションのメインクラス

    Attributes:
        settings (Settings): 実行設定
        logger (Logger): ログ管理
        calculator (BoundCalculator): 上界計算
        extractor (RamseyExtractor): 均質集合の抽出
        oracle (LemmaOracle): 補題オラクル
        verifier (RamseyVerifier): 全探索
        validator (RunValidator): 実行検証
    """

    def __init__(self, settings: Optional[Settings] = None, logger: Optional[Logger] = None) -> None:
        """アプリケーションの初期化"""
        self.settings = settings or load_settings()
        self.logger = logger or Logger(self.settings.log_level)
        self.calculator = BoundCalculator(self.settings, self.logger)
        self.extractor = RamseyExtractor(self.settings, self.logger, self.calculator)
        self.oracle = LemmaOracle(self.settings, self.logger, self.calculator)
        self.verifier = RamseyVerifier(self.settings, self.logger, self.calculator)
        self.validator = RunValidator(self.settings, self.logger)

    def run(self, args: argparse.Namespace) -> int:
        """サブコマンドを実行して終了コードを返す"""
        handlers: Dict[str, Callable[[argparse.Namespace], None]] = {
            "extract": self.cmd_extract,
            "bound": self.cmd_bound,
            "lemma": self.cmd_lemma,
            "search": self.cmd_search,
            "validate": self.cmd_validate,
            "selftest": self.cmd_selftest,
        }
        print(config_line(args, self.settings), flush=True)
        try:
            handlers[args.command](args)
            return EXIT_OK
        except RamseyError as e:
            self.logger.log_failure(e.message, e.code)
            return e.exit_code
        except Exception as e:
            self.logger.log_failure(f"予期せぬエラーが発生しました: {e}", SYS_001)
            return 1
        finally:
            if args.log_file:
                self.logger.save_logs(args.log_file)

    # --- extract / validate ---

    def load_coloring(self, args: argparse.Namespace) -> ColoredHypergraph:
        """--input の彩色、または (n, a, c, seed) の乱数彩色

        Raises:
            InputError: どちらも指定されていない場合
        """
        if args.input:
            return ColoredHypergraph.load(args.input)
        missing = [name for name in ("n", "a", "seed") if getattr(args, name) is None]
        if missing:
            raise InputError(
                CLI_001, f"--input か --n/--a/--seed の指定が必要です（不足: {', '.join(missing)}）"
            )
        if args.n < 0 or args.a < 1 or args.c < 2:
            raise InputError(CLI_001, f"乱数彩色の引数が不正です: n={args.n} a={args.a} c={args.c}")
        return self.verifier.random_coloring(args.n, args.a, args.c, args.seed)

    def cmd_extract(self, args: argparse.Namespace) -> None:
        col = self.load_coloring(args)
        method = METHOD_NAMES[args.method]
        if args.exact_inner:
            if method != "ramsey":
                raise InputError(CLI_001, "--exact-inner は --method ramsey でのみ使用できます")
            result, trace = self.extractor.extract_ramsey(col, args.k, exact_inner=True)
        else:
            result, trace = self.extractor.extract(method, col, args.k)
        if args.out:
            _write_text(f"{args.out}.result", format_result(method, result))
            _write_text(f"{args.out}.trace", write_trace(trace))
            if not args.input:
                col.save(f"{args.out}.coloring")
        print(format_result(method, result), end="")
        print(f"termination: {trace.termination} stages={len(trace.stages)} flags={','.join(trace.flags) or '-'}")
        report = self.validator.require(col, result, trace)
        print(f"validation: {len(report.laws)} laws passed")

    def cmd_validate(self, args: argparse.Namespace) -> None:
        col = ColoredHypergraph.load(args.input)
        trace = load_trace(f"{args.run}.trace")
        result = parse_result(_read_text(f"{args.run}.result"))
        if trace.result is not None and trace.result != result:
            raise InvariantViolationError(VER_003, "結果ファイルとトレースの result が一致しません")
        report = self.validator.validate_run(col, result, trace)
        print(report.as_text())
        if not report.passed:
            raise InvariantViolationError(
                VER_003, f"{len(report.failures())} 件の法則が成り立ちません"
            )

    # --- bound ---

    def cmd_bound(self, args: argparse.Namespace) -> None:
        if args.tow:
            print(f"TOW_{args.c}({','.join(map(str, args.tow))}) = {self.calculator.tow(args.tow, args.c)}")
            return
        if args.identity is not None:
            bindings: Dict[str, object] = {
                "args": args.args,
                "b": args.b,
                "delta": args.delta,
                "i": args.i,
                "count": len(args.args) if args.count is None else args.count,
            }
            check = self.calculator.tow_identity(args.identity, bindings)
            print(f"part {check.part}: {check.lhs} {check.relation} {check.rhs} -> {check.holds}")
            if check.holds is False:
                raise InvariantViolationError(VER_003, f"恒等式 {check.part} が成り立ちません")
            return
        if args.family:
            bounds = [self.calculator.bound(args.family, args.a, args.k, args.c)]
        else:
            bounds = self.calculator.compare_bounds(args.a, args.k, args.c)
        for fb in bounds:
            notes = "; ".join(fb.flags() + fb.notes) or "-"
            text = render(fb.expr, args.style, self.settings.bit_budget)
            print(f"{fb.family}\t{text}\tsize~{fb.magnitude}\t{notes}")

    # --- lemma ---

    def cmd_lemma(self, args: argparse.Namespace) -> None:
        if args.kind == "sigma":
            rows = self.oracle.lemma_table(args.c, args.k)
            print("c\tk\texact\tbound\tratio")
            for row in rows:
                print(row.as_text())
                if args.enumerate:
                    enumerated = self.oracle.sigma_sum_enumerated(row.c, row.k)
                    if enumerated != row.exact:
                        raise InvariantViolationError(
                            VER_003, f"列挙値 {enumerated} と厳密値 {row.exact} が一致しません"
                        )
        elif args.kind == "hyper":
            c, k = args.c[0], args.k[0]
            exact = self.oracle.hyper_edge_sum_exact(args.a, c, k)
            upper = self.oracle.hyper_edge_sum_bound(args.a, c, k, args.r)
            holds = exact <= upper if isinstance(upper, int) else True
            print(f"a={args.a} c={c} k={k} exact={exact} bound={upper} holds={holds}")
            if not holds:
                raise InvariantViolationError(VER_003, "辺数和が上界を超えました")
        elif args.kind == "pascal":
            for n in args.n:
                lhs, rhs, equal = self.oracle.pascal_second_identity(args.a, n)
                print(f"a={args.a} n={n} lhs={lhs} rhs={rhs} equal={equal}")
        else:
            for n in args.n:
                bracket = self.oracle.stirling_bracket(n)
                print(f"{bracket} holds={bracket.holds} slack={bracket.slack():.6g}")
                if not bracket.holds:
                    raise InvariantViolationError(VER_003, f"n={n} でスターリングの評価が成り立ちません")

    # --- search ---

    def cmd_search(self, args: argparse.Namespace) -> None:
        query = RamseyQuery(args.a, args.k, args.c, args.n_max, args.budget, args.workers)
        result = self.verifier.brute_force_ramsey(query)
        print(result.as_text())
        if args.witness and result.witness is not None:
            result.witness.save(args.witness)
        if not result.is_exact:
            raise BudgetExceededError(
                VER_002, f"n={result.frontier} で探索予算を超えました", frontier=result
            )

    # --- selftest ---

    def _selftest_checks(self, seeds: int) -> List[Tuple[str, Callable[[], bool]]]:
        calc, oracle = self.calculator, self.oracle

        def ramsey_value(a: int, k: int, c: int, expected: int) -> bool:
            result = self.verifier.brute_force_ramsey(RamseyQuery(a, k, c, n_max=expected))
            if result.exact != expected or result.witness is None:
                return False
            return self.verifier.check_witness(result.witness, k) is True

        def erdos_rado_sweep() -> bool:
            for seed in range(seeds):
                col = self.verifier.random_coloring(17, 3, 2, seed)
                result, trace = self.extractor.extract_erdos_rado(col, 3)
                if len(result) < 3 or is_homogeneous(col, result.vertices) is None:
                    return False
                self.validator.require(col, result, trace)
            return True

        def lemma_equivalence() -> bool:
            return all(
                oracle.sigma_sum_exact(c, k) == oracle.sigma_sum_enumerated(c, k)
                for c in (1, 2, 3)
                for k in (1, 2, 3, 4)
            ) and all(oracle.pascal_second_identity(a, n)[2] for a in range(11) for n in range(11))

        checks: List[Tuple[str, Callable[[], bool]]] = [
            (f"R({a},{k},{c}) = {v}", (lambda a=a, k=k, c=c, v=v: ramsey_value(a, k, c, v)))
            for a, k, c, v in SELFTEST_RAMSEY
        ]
        checks += [
            ("TOW(1,1,1) = 16", lambda: calc.tow((1, 1, 1)) == 16),
            ("TOW(6) = 64", lambda: calc.tow((6,)) == 64),
            ("TOW_3(2) = 9", lambda: calc.tow((2,), 3) == 9),
            ("TOW 恒等式 2", lambda: calc.tow_identity(2, {"args": (1, 2), "b": 2}).holds is True),
            ("TOW 恒等式 5", lambda: calc.tow_identity(5, {"args": (1, 1)}).holds is True),
            ("TOW 恒等式 7", lambda: calc.tow_identity(7, {"count": 3}).holds is True),
            (f"Erdős–Rado n=17 ({seeds} seeds)", erdos_rado_sweep),
            ("補題の列挙と厳密値", lemma_equivalence),
            ("スターリングの評価 n<=50", lambda: all(oracle.stirling_bracket(n).holds for n in range(1, 51))),
        ]
        return checks

    def cmd_selftest(self, args: argparse.Namespace) -> None:
        failed = []
        for name, check in self._selftest_checks(args.seeds):
            try:
                ok = check()
            except InvariantViolationError as e:
                self.logger.log_warning(f"{name}: {e.message}")
                ok = False
            print(f"{'ok' if ok else 'NG'}\t{name}")
            if not ok:
                failed.append(name)
        if failed:
            raise InvariantViolationError(VER_003, f"selftest 失敗: {', '.join(failed)}")
        self.logger.log_info("selftest はすべて成功しました")


def main(argv: Optional[Sequence[str]] = None) -> None:
    """アプリケーションのメイン処理

    Args:
        argv (Optional[Sequence[str]]): 引数（省略時は sys.argv）
    """
    args = build_parser().parse_args(argv)
    try:
        settings = settings_from_args(args)
        app = Application(settings, Logger(settings.log_level))
        code = app.run(args)
    except RamseyError as e:
        print(f"エラー: {e}", file=sys.stderr)
        code = e.exit_code
    except Exception as e:
        print(f"予期せぬエラーが発生しました: {e} (エラーコード: {SYS_001})", file=sys.stderr)
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
