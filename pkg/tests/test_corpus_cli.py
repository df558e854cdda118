import io
import json
import shutil
from fractions import Fraction

import pytest

from leibniz import corpus
from leibniz.algebra import check_leibniz_identity
from leibniz.cli import main
from leibniz.errors import CorpusFormatError, IdentityViolation


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# --- file format ---------------------------------------------------------------

def test_bundled_files_roundtrip_byte_identical():
    files = corpus.corpus_files()
    assert len(files) >= 13
    for path in files:
        text = path.read_text(encoding="utf-8")
        assert corpus.dumps(corpus.loads(text)) == text, path.name


def test_bundled_files_match_generators():
    on_disk = {p.stem: p.read_text(encoding="utf-8") for p in corpus.corpus_files()}
    for L in corpus.bundled_algebras() + corpus.fixtures():
        assert on_disk[L.name] == corpus.dumps(L), L.name


def test_every_bundled_algebra_passes_identity(bundled):
    assert "bad_table" not in bundled
    for name, L in bundled.items():
        assert check_leibniz_identity(L).ok, name


def test_charnil6_file_is_the_table(bundled):
    L = bundled["charnil6"]
    assert L == corpus.charnil(6)
    assert L.basis_product(4, 0) == {5: 1}  # [e5, e1] = e6
    assert L.basis_product(3, 1) == {5: 1}  # [e4, e2] = e6


def test_generator_tables():
    assert corpus.ex7().basis_product(0, 1) == {3: 1, 4: -2}  # [e1, e2] = e4 - 2e5
    assert corpus.abelian(3).products == {}
    assert corpus.corpus_generate("charnil", 5) == corpus.charnil(5)
    with pytest.raises(ValueError):
        corpus.corpus_generate("charnil", 3)
    with pytest.raises(ValueError):
        corpus.corpus_generate("cas_ex33", 1)
    with pytest.raises(ValueError):
        corpus.corpus_generate("nope")
    assert corpus.cas_ex33(4).dim == 5


def test_printed_ex8_table_violates_identity():
    rep = check_leibniz_identity(corpus.ex8(printed=True))
    assert not rep.ok and rep.triple == (2, 0, 1)
    assert check_leibniz_identity(corpus.ex8()).ok


def test_alpha_variant_validates():
    L = corpus.solvable_ex31(6, [1, 2])
    assert check_leibniz_identity(L).ok
    assert L.basis_product(0, 6) == {1: 1, 3: 1, 4: 2}


DOC = """{
  "name": "t",
  "dim": 2,
  "brackets": [
    {"left": 1, "right": 1, "result": [[2, "1/2"]]}
  ]
}
"""


def test_loads_minimal():
    L = corpus.loads(DOC)
    assert L.basis_product(0, 0) == {1: Fraction(1, 2)}
    assert corpus.dumps(L) == DOC


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d["brackets"].append({"left": 1, "right": 1, "result": []}), "brackets[1]"),
    (lambda d: d["brackets"][0].update(left=3), "brackets[0].left"),
    (lambda d: d["brackets"][0].update(result=[[0, "1"]]), "brackets[0].result[0]"),
    (lambda d: d["brackets"][0].update(result=[[2, "x"]]), "brackets[0].result[0]"),
    (lambda d: d["brackets"][0].update(result=[[2, 0.5]]), "brackets[0].result[0]"),
    (lambda d: d["brackets"][0].pop("right"), "brackets[0]"),
    (lambda d: d.pop("dim"), "dim"),
    (lambda d: d.update(meta={"nilradical": [["1"]]}), "meta.nilradical[0]"),
])
def test_parse_errors_name_the_field(mutate, where):
    doc = json.loads(DOC)
    mutate(doc)
    with pytest.raises(CorpusFormatError) as info:
        corpus.loads(json.dumps(doc))
    assert info.value.location.startswith(where)


def test_syntax_error_reports_line():
    with pytest.raises(CorpusFormatError) as info:
        corpus.loads('{\n  "dim": 2,\n  "brackets": [,]\n}')
    assert "line 3" in str(info.value)


def test_identity_violation_unless_unchecked(tmp_path):
    bad = '{"name": "b", "dim": 1, "brackets": [{"left": 1, "right": 1, "result": [[1, "1"]]}]}'
    with pytest.raises(IdentityViolation):
        corpus.loads(bad)
    assert corpus.loads(bad, unchecked=True).unchecked
    assert corpus.loads(bad.replace('"dim": 1,', '"dim": 1, "unchecked": true,')).unchecked


def test_meta_roundtrip(bundled):
    L = bundled["sl2_plus_cas33"]
    assert L.meta["solvable_radical"].dim == 4 and L.meta["nilradical"].dim == 3
    assert corpus.loads(corpus.dumps(L)).meta == L.meta


def test_save_load(tmp_path, charnil6):
    path = tmp_path / "c.json"
    corpus.save(charnil6, path)
    assert corpus.load(path) == charnil6


def test_change_basis_preserves_identity(rng):
    L = corpus.change_basis(corpus.charnil(6), [[1 if i == j else (1 if j == i + 1 else 0) for j in range(6)]
                                                for i in range(6)])
    assert check_leibniz_identity(L).ok
    assert L != corpus.charnil(6)


# --- command line -----------------------------------------------------------------

def test_cli_nilpotency():
    code, out, _ = run("nilpotency", "corpus/charnil6.json")
    assert (code, out.strip()) == (0, "nilpotent, nilindex 6")
    code, out, _ = run("nilpotency", "solvable_ex31_n6")
    assert (code, out.strip()) == (0, "not nilpotent")


def test_cli_theorem_check():
    code, out, _ = run("theorem-check", "corpus/solvable_ex31_n6.json", "--max-order", "4")
    assert code == 0
    assert out.splitlines()[0] == "not nilpotent; no invertible right Leibniz-derivation of order ≤ 4"


def test_cli_check_bad_table():
    code, out, _ = run("check", "corpus/bad_table.json")
    assert code == 1 and "violation at (e1, e1, e1)" in out
    assert run("check", "charnil6")[0] == 0


def test_cli_usage_errors(tmp_path):
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2
    assert run("nilpotency", str(tmp_path / "missing.json"))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run("nilpotency", str(broken))
    assert code == 2 and "line 1" in err
    assert run("derivations", "charnil6", "--order", "9")[0] == 2
    invalid = tmp_path / "invalid.json"
    invalid.write_text('{"dim": 1, "brackets": [{"left": 1, "right": 1, "result": [[1, "1"]]}]}', encoding="utf-8")
    code, _, err = run("nilpotency", str(invalid))
    assert code == 2 and "violation" in err


def test_cli_series():
    code, out, _ = run("series", "charnil6", "--kind", "lower_central")
    assert code == 0 and "dims [6, 4, 3, 2, 1, 0]" in out
    code, out, _ = run("--json", "series", "charnil6", "--kind", "derived", "--ary", "3")
    payload = json.loads(out)["result"]
    assert payload["kind"] == "n_derived" and payload["dims"][0] == 6


def test_cli_derivations_and_invertible():
    code, out, _ = run("--json", "derivations", "charnil6", "--order", "3")
    assert code == 0 and json.loads(out)["result"]["dim"] == 9
    code, out, _ = run("invertible", "charnil6", "--order", "2")
    assert code == 0 and "no invertible map" in out
    code, out, _ = run("invertible", "charnil6", "--order", "3")
    assert "contains an invertible map" in out


def test_cli_classify():
    code, out, _ = run("classify", "ex7", "--max-order", "3")
    assert code == 0
    assert "characteristically nilpotent: yes" in out and "strongly nilpotent: no" in out


def test_cli_prop_derivation_and_decompose(tmp_path):
    code, out, _ = run("--json", "prop-derivation", "charnil6")
    P = json.loads(out)["result"]["matrix"]
    assert code == 0 and [P[i][i] for i in range(6)] == ["1", "1", "1", "1", "4", "4"]
    assert run("prop-derivation", "cas_ex33_n4")[0] == 1
    m = tmp_path / "p.json"
    m.write_text(json.dumps({"matrix": P}), encoding="utf-8")
    code, out, _ = run("--json", "decompose", "charnil6", "--map", str(m))
    pairs = json.loads(out)["result"]["pairs"]
    assert [(p["eigenvalue"], p["dim"]) for p in pairs] == [("1", 4), ("4", 2)]
    rot = tmp_path / "rot.json"
    rot.write_text('{"matrix": [["0", "-1"], ["1", "0"]]}', encoding="utf-8")
    assert run("decompose", "--map", str(rot))[0] == 1
    assert run("decompose", "charnil6", "--map", str(rot))[0] == 2


def test_cli_identity_n():
    code, out, _ = run("identity-n", "cas_ex33_n4", "--ary", "3")
    assert code == 1 and "violation" in out
    assert run("identity-n", "cas_ex33_n4", "--ary", "3", "--product", "left")[0] == 0


def test_cli_invariance(tmp_path):
    assert run("invariance", "charnil6_plus_cas33", "--ideal", "meta:solvable_radical", "--order", "3")[0] == 0
    assert run("invariance", "charnil6", "--ideal", "L2", "--order", "2")[0] == 0
    line = tmp_path / "line.json"
    line.write_text('{"basis": [["1", "0", "0", "0", "0", "0"]]}', encoding="utf-8")
    code, out, _ = run("invariance", "charnil6", "--ideal", str(line))
    assert code == 1 and "not an ideal" in out
    assert run("invariance", "charnil6", "--ideal", "meta:nilradical")[0] == 2


def test_cli_generate(tmp_path):
    out_path = tmp_path / "c5.json"
    assert run("generate", "charnil", "5", "-o", str(out_path))[0] == 0
    assert corpus.load(out_path) == corpus.charnil(5)
    assert run("generate", "charnil", "2")[0] == 2


def test_cli_json_is_stable():
    a = run("--json", "classify", "charnil7")[1]
    b = run("classify", "charnil7", "--json")[1]
    assert a == b and json.loads(a)["result"]["strongly_nilpotent"] is True


# --- verification runner --------------------------------------------------------------

def test_verify_paper_passes():
    code, out, _ = run("--json", "verify-paper")
    records = json.loads(out)["result"]
    assert code == 0
    assert [r["id"] for r in records] == list(range(1, 13))
    assert all(r["status"] == "pass" for r in records)


def test_verify_paper_detects_tampering(tmp_path):
    target = tmp_path / "corpus"
    shutil.copytree(corpus.corpus_dir(), target)
    path = target / "charnil6.json"
    text = path.read_text(encoding="utf-8")
    # [e4, e2] = e6 becomes 2 e6
    path.write_text(text.replace('{"left": 4, "right": 2, "result": [[6, "1"]]}',
                                 '{"left": 4, "right": 2, "result": [[6, "2"]]}'), encoding="utf-8")
    code, out, _ = run("verify-paper", "--corpus", str(target))
    assert code == 1
    assert "[FAIL]  1 identity" in out
