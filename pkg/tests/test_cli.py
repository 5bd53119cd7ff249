import io
import json

import pytest

from nncomplete.cli import main
from nncomplete.family import Nn3Certificate

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRank:
    def test_full_matrix(self, capsys):
        code, out, err = run(capsys, "rank", str(DATA / "rank3_product.txt"))
        assert code == 0 and out == "3\n" and err == ""

    def test_stdin_dash(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 2\n2 4\n"))
        code, out, err = run(capsys, "rank", "-")
        assert code == 0 and out == "1\n"

    def test_partial_rejected(self, capsys):
        code, out, err = run(capsys, "rank", str(DATA / "two_missing_column.txt"))
        assert code == 1
        assert err.startswith("error: ") and err.count("\n") == 1

    def test_unreadable_file(self, capsys):
        code, out, err = run(capsys, "rank", "/no/such/file")
        assert code == 1 and err.startswith("error: cannot read")

    def test_parse_error_diagnostic(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 x\n"))
        code, out, err = run(capsys, "rank", "-")
        assert code == 1 and err.startswith("error: parse error")


class TestComplete:
    def test_rank1_unique(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("? 2\n3 6\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "UNIQUE"
        assert lines[1:] == ["1 2", "3 6"]

    def test_rank1_none(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 2\n3 4\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "1")
        assert code == 0 and out == "NONE\n"

    def test_rank1_infinite_describes_freedom(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 ?\n? 2\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "1")
        assert code == 0
        assert out.splitlines()[0].startswith("INFINITE 1 free relative scaling")

    def test_rank2_requires_nonnegative_flag(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 2 3\n? 1 1\n1 ? 1\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "2")
        assert code == 1 and "only with --nonnegative" in err

    def test_rank2_nonnegative(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("3 ? ?\n0 1 2\n0 2 4\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "2", "--nonnegative")
        assert code == 0
        assert out.splitlines()[0] == "SOME"

    def test_unsupported_rank(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 2\n3 4\n"))
        code, out, err = run(capsys, "complete", "-", "--rank", "5")
        assert code == 1 and "--rank 1 and --rank 2" in err


class TestOneMissing:
    def test_unique_with_value(self, capsys):
        code, out, err = run(
            capsys, "one-missing", str(DATA / "one_missing_perturbed.txt"), "--rank", "3"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "UNIQUE 12"
        assert lines[1] == "12 2 1 9"

    def test_explicit_hole_flag(self, capsys):
        code, out, err = run(
            capsys,
            "one-missing",
            str(DATA / "one_missing_perturbed.txt"),
            "--rank",
            "3",
            "--hole",
            "1,1",
        )
        assert code == 0 and out.splitlines()[0] == "UNIQUE 12"

    def test_bad_hole_syntax(self, capsys):
        code, out, err = run(
            capsys,
            "one-missing",
            str(DATA / "one_missing_perturbed.txt"),
            "--rank",
            "3",
            "--hole",
            "oops",
        )
        assert code == 1 and "--hole expects i,j" in err

    def test_infinite(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("? 0 0\n1 1 1\n2 2 2\n"))
        code, out, err = run(capsys, "one-missing", "-", "--rank", "2")
        assert code == 0 and out == "INFINITE\n"

    def test_none(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("? 1 1\n1 2 1\n1 1 3\n"))
        code, out, err = run(capsys, "one-missing", "-", "--rank", "1")
        assert code == 0 and out == "NONE\n"


class TestCheckNnrank3:
    def test_true_with_verifying_witness(self, capsys):
        code, out, err = run(capsys, "check-nnrank3", str(DATA / "rank3_product.txt"))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "TRUE"
        a_start = lines.index("A:") + 1
        b_start = lines.index("B:") + 1
        from fractions import Fraction
        from nncomplete import ExactMatrix, matmul, parse_partial

        a = parse_partial("\n".join(lines[a_start : b_start - 1])).to_full_matrix()
        b = parse_partial("\n".join(lines[b_start:])).to_full_matrix()
        m = parse_partial((DATA / "rank3_product.txt").read_text()).to_full_matrix()
        assert a.is_nonnegative() and b.is_nonnegative()
        assert matmul(a, b) == m

    def test_false(self, capsys):
        code, out, err = run(capsys, "check-nnrank3", str(DATA / "perturbed_full.txt"))
        assert code == 0 and out == "FALSE\n"

    def test_negative_entry_rejected(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 -1\n1 1\n"))
        code, out, err = run(capsys, "check-nnrank3", "-")
        assert code == 1 and "nonnegative" in err


class TestNn3Decide:
    def test_not_completable_text(self, capsys):
        code, out, err = run(capsys, "nn3-decide", str(DATA / "two_missing_column.txt"))
        assert code == 0
        assert out.splitlines()[0] == "NotCompletable (pattern 11_21)"

    def test_not_completable_json(self, capsys):
        code, out, err = run(
            capsys, "nn3-decide", str(DATA / "two_missing_diagonal.txt"), "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "NotCompletable"
        assert doc["envelope"]["t_hi"] == "4284/9959"

    def test_completable_text(self, capsys, monkeypatch):
        monkeypatch.setattr(
            "sys.stdin", io.StringIO("? 5 1 9\n? 1 7 7\n0 5 9 1\n0 9 3 3\n")
        )
        code, out, err = run(capsys, "nn3-decide", "-")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("Completable")
        assert "completion:" in lines

    def test_unknown_exits_2(self, capsys, monkeypatch):
        monkeypatch.setattr(
            "nncomplete.cli.decide_nn3_two_missing",
            lambda m: Nn3Certificate("Unknown", "11_22"),
        )
        monkeypatch.setattr(
            "sys.stdin", io.StringIO("? 5 1 9\n1 ? 7 7\n1 5 9 1\n2 9 3 3\n")
        )
        code, out, err = run(capsys, "nn3-decide", "-")
        assert code == 2
        assert out.splitlines()[0] == "Unknown (pattern 11_22)"

    def test_wrong_hole_count_is_error(self, capsys, monkeypatch):
        monkeypatch.setattr(
            "sys.stdin", io.StringIO("? 5 1 9\n1 1 7 7\n1 5 9 1\n2 9 3 3\n")
        )
        code, out, err = run(capsys, "nn3-decide", "-")
        assert code == 1 and "two entries" in err

    def test_svg_side_output(self, capsys, tmp_path):
        target = tmp_path / "fig.svg"
        code, out, err = run(
            capsys,
            "nn3-decide",
            str(DATA / "two_missing_diagonal.txt"),
            "--svg",
            str(target),
        )
        assert code == 0
        text = target.read_text()
        assert text.startswith('<?xml') and text.rstrip().endswith("</svg>")


class TestPlot:
    def test_full_rank3_to_stdout(self, capsys):
        code, out, err = run(capsys, "plot", str(DATA / "rank3_product.txt"))
        assert code == 0
        assert out.startswith('<?xml') and out.rstrip().endswith("</svg>")

    def test_two_missing_to_file(self, capsys, tmp_path):
        target = tmp_path / "fig.svg"
        code, out, err = run(
            capsys, "plot", str(DATA / "two_missing_column.txt"), "--out", str(target)
        )
        assert code == 0 and out == ""
        assert target.read_text().startswith('<?xml')

    def test_wrong_rank_rejected(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 2\n2 4\n"))
        code, out, err = run(capsys, "plot", "-")
        assert code == 1 and "rank exactly 3" in err
