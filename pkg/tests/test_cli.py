import io
import subprocess
import sys

import pytest

from loopmatch.cli import main

from conftest import CORPUS

SPLITS = "{[{} {1 2 3}] [{1} {2 3}] [{1 2} {3}] [{1 2 3} {}]}"


def cli(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_run_four_queens():
    assert cli("run", str(CORPUS / "four-queens.egi")) == (0, "{{2 4 1 3} {3 1 4 2}}\n", "")


def test_run_twin_primes():
    code, out, _ = cli("run", str(CORPUS / "twin-primes.egi"))
    assert (code, out) == (0, "{[3 5] [5 7] [11 13] [17 19] [29 31] [41 43]}\n")


def test_run_unbound_variable(tmp_path):
    f = tmp_path / "bad.egi"
    f.write_text("(+ 1 2)\n(+ 1 nope)\n")
    code, out, err = cli("run", str(f))
    assert code == 1
    assert out == "3\n"
    assert f"{f}:2:1: error:" in err and "nope" in err


def test_run_parse_error_runs_nothing(tmp_path):
    f = tmp_path / "bad.egi"
    f.write_text("(+ 1 2)\n(+ 1")
    code, out, err = cli("run", str(f))
    assert code == 1 and out == ""
    assert "parse error" in err


def test_run_missing_file(tmp_path):
    code, _, err = cli("run", str(tmp_path / "none.egi"))
    assert code == 1 and "cannot read" in err


def test_eval_flag():
    assert cli("--eval", "(between 1 4)") == (0, "{1 2 3 4}\n", "")


def test_eval_command():
    assert cli("eval", "(match-all {1 2 3} (list integer) [<join $xs $ys> [xs ys]])")[1] == SPLITS + "\n"


def test_take_limits_infinite_output():
    code, out, _ = cli("--take", "3", "--eval", "(from 1)")
    assert (code, out) == (0, "{1 2 3 ...}\n")


def test_take_on_subcommand():
    assert cli("eval", "--take", "0", "(between 1 4)")[1] == "{...}\n"


def test_take_negative_rejected(capsys):
    with pytest.raises(SystemExit):
        cli("--take", "-1", "--eval", "1")


def test_no_prelude():
    code, _, err = cli("--no-prelude", "--eval", "(match-all 1 integer [$x x])")
    assert code == 1 and "integer" in err
    assert cli("--no-prelude", "--eval", "(match-all 1 something [$x x])")[1] == "{1}\n"


def test_trace_goes_to_stderr():
    code, out, err = cli("--trace", "--eval", "(match-all {1 2} (list integer) [<cons $x _> x])")
    assert out == "{1}\n"
    assert err.startswith("[trace] sweep 0: vectors=1")


def test_dump_ast():
    code, out, err = cli("--dump-ast", "--eval", "(+ 1 2)")
    assert out == "3\n" and "App" in err


def test_no_arguments_prints_help():
    code, _, err = cli()
    assert code == 2 and "usage" in err


def test_repl_bracket_balancing():
    code, out, _ = cli("repl", stdin="(+ 1\n2)\n")
    assert (code, out) == (0, "3\n")


def test_repl_defines_persist_and_errors_continue():
    code, out, err = cli("repl", stdin="(define $a 4)\nnope\n(* a a)\n")
    assert out == "16\n" and "nope" in err


def test_repl_comb():
    _, out, _ = cli("repl", stdin=f":load {CORPUS / 'comb.egi'}\n(comb 2 {{1 2 3 4}})\n")
    assert out.splitlines()[-1] == "{{1 2} {1 3} {2 3} {1 4} {2 4} {3 4}}"


def test_repl_load_and_quit():
    stdin = f":load {CORPUS / 'nqueens.egi'}\n(n-queens 4)\n:quit\n(+ 1 1)\n"
    code, out, _ = cli("repl", stdin=stdin)
    assert code == 0
    assert out == "{{|[1 2] [2 4] [3 1] [4 3]|} {|[1 3] [2 1] [3 4] [4 2]|}}\n"


def test_repl_unknown_command_and_bad_load():
    _, out, err = cli("repl", stdin=":frob\n:load /no/such/file\n1\n")
    assert out == "1\n"
    assert "unknown command :frob" in err and "cannot read" in err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "loopmatch", "--eval", "(take 2 (from 5))"],
                       capture_output=True, text=True, timeout=60)
    assert (r.returncode, r.stdout) == (0, "{5 6}\n")


def test_flags_before_subcommand_survive():
    assert cli("--take", "2", "eval", "(between 1 9)")[1] == "{1 2 ...}\n"
    assert cli("--no-prelude", "eval", "integer")[0] == 1
    assert cli("eval", "--no-prelude", "integer")[0] == 1
