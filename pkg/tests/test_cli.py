import io
import subprocess
import sys

from rigidloc.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_verify_cross_check():
    code, text = call("verify", "A5", "A6", "--cross-check")
    assert code == 0
    assert text.splitlines()[0] == "A5 -> A6: Localization (criterion+oracle agree)"


def test_verify_refuted():
    code, text = call("verify", "A6", "A7")
    assert code == 0
    assert "NotLocalization" in text and "10080" in text and "5040" in text


def test_verify_expect_mismatch():
    code, _ = call("verify", "A6", "A7", "--expect", "Localization")
    assert code == 1


def test_verify_undecided_exit_code():
    code, text = call("verify", "He", "Fi24p")
    assert code == 2 and "Undecided" in text and "asserted metadata" in text


def test_guard_flags_and_env(monkeypatch):
    code, text = call("verify", "A5", "A7", "--max-order", "100")
    assert code == 2 and "guard" in text
    monkeypatch.setenv("RIGIDLOC_MAX_ORDER", "100")
    code, text = call("verify", "A5", "A7")
    assert code == 2
    monkeypatch.setenv("RIGIDLOC_MAX_ORDER", "-3")
    assert call("verify", "A5", "A7")[0] == 1


def test_path_and_components():
    code, text = call("path", "A6", "A7")
    assert code == 0
    assert text.splitlines()[0].startswith("A6 ↪ T ↪ Ru ↩ L2_13 ↪ A14")
    code, text = call("path", "A5", "M")
    assert (code, text) == (0, "none\n")
    code, text = call("components")
    assert code == 0 and "M: M\n" in text


def test_unknown_group_is_an_error():
    assert call("verify", "A5", "Q8")[0] == 1
    assert call("path", "A5", "Q8")[0] == 1


def test_embed_and_aut():
    code, text = call("embed", "L2_7")
    assert code == 2 and "condition order_maximal fail" in text and "smaller_index 7" in text
    code, text = call("embed", "L2_13")
    assert code == 0 and "condition unique_index_class pass" in text
    code, text = call("aut", "A6")
    assert code == 0 and "aut_order 1440 derived" in text
    code, text = call("aut", "Ru")
    assert code == 2 and "asserted" in text


def test_export_formats(tmp_path):
    code, text = call("export")
    assert code == 0 and text.startswith("alias G2_2p U3_3\n")
    path = tmp_path / "edges.txt"
    path.write_text(text)
    assert call("export", "--edges", str(path))[1] == text
    code, dot = call("export", "--format", "dot")
    assert dot.startswith("digraph rigid {") and "style=dashed" in dot


def test_validate_atlas(tmp_path):
    code, text = call("validate-atlas")
    assert code == 0 and "M11 degree 11 order 7920 simplicity verified" in text
    bad = tmp_path / "bad.txt"
    bad.write_text("group X degree 3\ngen (1 4)\nend\n")
    assert call("validate-atlas", "--atlas", str(bad))[0] == 1


def test_output_is_deterministic():
    assert call("verify", "L2_7", "A8")[1] == call("verify", "L2_7", "A8")[1]
    assert call("components", "--verified-only") == call("components", "--verified-only")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rigidloc.cli", "path", "A5", "A6"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("A5 ↪ A6")
