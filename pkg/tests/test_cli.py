import json

import pytest

from qwp.cache import load, payload_hash, resolve_cache_dir, store
from qwp.cli import main
from qwp.kernels import Flavor
from qwp.render import (
    canonical_json,
    parse_super_doc,
    parse_volume_doc,
    poly_latex,
    poly_text,
    series_text,
    super_doc,
    volume_doc,
)
from qwp.supervolumes import super_volume
from qwp.volumes import volume


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# -- rendering ----------------------------------------------------------------

def test_poly_text_base_case():
    v = volume(Flavor.WP_CLASSICAL, 0, 3)
    assert poly_text(v) == "1"


def test_poly_text_v11():
    v = volume(Flavor.Q_CLASSICAL, 1, 1)
    assert poly_text(v) == "1/48*L1^2 + 1/2*zeta_q(2)"


def test_poly_latex_v12():
    tex = poly_latex(volume(Flavor.Q_CLASSICAL, 1, 2))
    assert r"\frac{1}{192}\,L_{1}^{4}" in tex
    assert r"\frac{1}{96}\,L_{1}^{2}\,L_{2}^{2}" in tex
    assert r"\zeta_q(2)\,L_{1}^{2}" in tex
    assert r"7\,\zeta_q(2)^{2} + 5\,\zeta_q(4)" in tex


def test_poly_latex_wp_uses_pi_powers():
    tex = poly_latex(volume(Flavor.WP_CLASSICAL, 1, 2))
    assert r"\pi^{2}" in tex and r"\pi^{4}" in tex
    assert "zeta" not in tex


def test_series_text_skips_zero_parts():
    s = super_volume(Flavor.Q_SUPER, 0, 1, 4)
    text = series_text(s)
    assert text == "s^2/2! * 1 + s^4/4! * (1/2*L1^2 + 48*zeta_q_odd(2))"
    assert "s^1" not in text and "s^3" not in text


def test_volume_doc_roundtrip_bytes():
    flavor = Flavor.Q_CLASSICAL
    poly = volume(flavor, 1, 3)
    doc = volume_doc(flavor, 1, 3, poly)
    blob = canonical_json(doc)
    back = parse_volume_doc(json.loads(blob))
    assert back == (flavor, 1, 3, poly)
    assert canonical_json(volume_doc(*back[:3], back[3])) == blob


def test_super_doc_roundtrip_bytes():
    s = super_volume(Flavor.WP_SUPER, 1, 1, 4)
    blob = canonical_json(super_doc(s))
    back = parse_super_doc(json.loads(blob))
    assert back == s
    assert canonical_json(super_doc(back)) == blob


def test_doc_terms_sorted_ascending():
    doc = volume_doc(Flavor.Q_CLASSICAL, 1, 2, volume(Flavor.Q_CLASSICAL, 1, 2))
    vecs = [tuple(t["L_exponents"]) for t in doc["terms"]]
    assert vecs == sorted(vecs)


# -- cache ----------------------------------------------------------------------

def test_cache_store_load(tmp_path):
    payload = {"a": [1, 2], "b": "3/4"}
    store(tmp_path, "some_key", payload)
    assert load(tmp_path, "some_key") == payload
    assert load(tmp_path, "other_key") is None


def test_cache_rejects_bad_hash(tmp_path):
    store(tmp_path, "k", {"v": 1})
    path = tmp_path / "k.json"
    entry = json.loads(path.read_text())
    entry["payload"]["v"] = 2
    path.write_text(json.dumps(entry))
    assert load(tmp_path, "k") is None


def test_cache_rejects_version_mismatch(tmp_path):
    store(tmp_path, "k", {"v": 1})
    path = tmp_path / "k.json"
    entry = json.loads(path.read_text())
    entry["engine_version"] = "0.0.0"
    entry["sha256"] = payload_hash(entry["payload"])
    path.write_text(json.dumps(entry))
    assert load(tmp_path, "k") is None


def test_cache_rejects_garbage(tmp_path):
    (tmp_path / "k.json").write_text("{not json")
    assert load(tmp_path, "k") is None


def test_resolve_cache_dir_precedence(monkeypatch, tmp_path):
    monkeypatch.setenv("QWP_CACHE_DIR", str(tmp_path / "env"))
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    assert resolve_cache_dir(None) == tmp_path / "env"
    monkeypatch.delenv("QWP_CACHE_DIR")
    assert resolve_cache_dir(None) is None


# -- commands ---------------------------------------------------------------------

def test_cmd_volume_base_case(capsys):
    code, out = run(capsys, "volume", "--flavor", "wp", "--g", "0", "--n", "3")
    assert code == 0 and out == "1\n"


def test_cmd_volume_latex(capsys):
    code, out = run(capsys, "volume", "--flavor", "q", "--g", "1", "--n", "2", "--format", "latex")
    assert code == 0
    assert r"\frac{1}{192}\,L_{1}^{4}" in out


def test_cmd_volume_unstable_is_usage_error(capsys):
    code, _ = run(capsys, "volume", "--flavor", "q", "--g", "0", "--n", "2")
    assert code == 2


def test_cmd_volume_json_parses(capsys):
    code, out = run(capsys, "volume", "--flavor", "q", "--g", "1", "--n", "1", "--format", "json")
    assert code == 0
    flavor, g, n, poly = parse_volume_doc(json.loads(out))
    assert (flavor, g, n) == (Flavor.Q_CLASSICAL, 1, 1)
    assert poly == volume(Flavor.Q_CLASSICAL, 1, 1)


def test_cmd_super_volume_disk(capsys):
    code, out = run(
        capsys, "super-volume", "--flavor", "qsuper", "--g", "0", "--n", "1", "--m-max", "6"
    )
    assert code == 0
    assert "s^6/6!" in out and "5760*zeta_q_odd(4)" in out


def test_cmd_super_volume_m0_initial(capsys):
    code, out = run(
        capsys, "super-volume", "--flavor", "qsuper", "--g", "1", "--n", "1", "--m-max", "0"
    )
    assert code == 0 and out == "1/8\n"


def test_cmd_super_volume_bad_input(capsys):
    code, _ = run(capsys, "super-volume", "--flavor", "qsuper", "--g", "0", "--n", "1", "--m-max", "-1")
    assert code == 2


def test_cmd_limit_check_classical(capsys):
    code, out = run(capsys, "limit-check", "--g", "1", "--n", "2")
    assert code == 0
    assert "PASS" in out
    # both engine outputs are printed
    assert "pi^2" in out and "zeta_q(2)" in out


def test_cmd_limit_check_base(capsys):
    code, out = run(capsys, "limit-check", "--g", "0", "--n", "3")
    assert code == 0 and "PASS" in out


def test_cmd_limit_check_genus_two(capsys):
    code, out = run(capsys, "limit-check", "--g", "2", "--n", "1")
    assert code == 0 and "PASS" in out


def test_cmd_limit_check_super(capsys):
    code, out = run(capsys, "limit-check", "--g", "1", "--n", "1", "--m-max", "2")
    assert code == 0 and "PASS" in out
    assert "s^2/2!" in out


def test_cmd_limit_check_json(capsys):
    code, out = run(capsys, "limit-check", "--g", "1", "--n", "1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert obj["limit_doc"] == obj["wp_doc"]


def test_cmd_verify_small(capsys):
    code, out = run(
        capsys, "verify", "--k", "-2..2", "--q", "1/3", "--budget", "1e-15"
    )
    assert code == 0
    assert "verify: all passed" in out
    assert "trend qsuper" in out


def test_cmd_verify_space_separated_range(capsys):
    # a leading minus in the range value must parse
    code, out = run(capsys, "verify", "--k", "-1..0", "--q", "1/2", "--budget", "1e-10", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_passed"] is True
    ks = {(r["kind"], r["k"]) for r in obj["identities"]}
    assert ks == {("even", -1), ("even", 0), ("odd", -1), ("odd", 0)}
    assert all(r["strictly_decreasing"] for r in obj["trend"])


def test_cmd_verify_rejects_bad_budget(capsys):
    code, _ = run(capsys, "verify", "--k", "0..1", "--budget", "0")
    assert code == 2


def test_cmd_verify_rejects_low_precision(capsys):
    code, _ = run(capsys, "verify", "--k", "0..0", "--precision", "10")
    assert code == 2


def test_cmd_oracle_f(capsys):
    code, out = run(capsys, "oracle-f", "--flavor", "qsuper", "--k", "1", "--y", "2", "--r", "1/2")
    assert code == 0 and "PASS" in out


def test_cmd_oracle_f_json(capsys):
    code, out = run(
        capsys,
        "oracle-f", "--flavor", "q", "--k", "2", "--y", "-5/3", "--r", "3/5",
        "--format", "json",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True and obj["flavor"] == "q"


def test_cmd_table_enumerates_stable_range(capsys):
    code, out = run(capsys, "table", "--max-level", "3", "--flavor", "q")
    assert code == 0
    heads = [line.split(":")[0] for line in out.strip().splitlines()]
    assert heads == ["g=0 n=3", "g=1 n=1", "g=0 n=4", "g=1 n=2", "g=0 n=5", "g=1 n=3", "g=2 n=1"]


def test_cmd_table_json_docs_parse(capsys):
    code, out = run(capsys, "table", "--max-level", "2", "--flavor", "wp", "--format", "json")
    assert code == 0
    docs = json.loads(out)
    seen = []
    for doc in docs:
        flavor, g, n, poly = parse_volume_doc(doc)
        assert flavor is Flavor.WP_CLASSICAL
        assert poly == volume(flavor, g, n)
        seen.append((g, n))
    assert seen == [(0, 3), (1, 1), (0, 4), (1, 2)]


def test_cmd_table_super(capsys):
    code, out = run(capsys, "table", "--max-level", "3", "--flavor", "qsuper")
    assert code == 0
    assert out.splitlines()[0].startswith("g=0 n=1 (m <= 4)")


def test_cache_cold_warm_identical(capsys, tmp_path):
    argv = ("volume", "--flavor", "q", "--g", "1", "--n", "2", "--format", "json",
            "--cache-dir", str(tmp_path))
    cold = run(capsys, *argv)
    assert (tmp_path / "volume_q_g1_n2.json").exists()
    warm = run(capsys, *argv)
    assert cold == warm


def test_cache_corruption_recomputed(capsys, tmp_path):
    argv = ("super-volume", "--flavor", "qsuper", "--g", "1", "--n", "1", "--m-max", "2",
            "--format", "json", "--cache-dir", str(tmp_path))
    cold = run(capsys, *argv)
    path = tmp_path / "super_qsuper_g1_n1_m2.json"
    entry = json.loads(path.read_text())
    entry["payload"]["parts"][0]["part"]["terms"][0]["coeff"] = "3/7"
    path.write_text(json.dumps(entry))
    again = run(capsys, *argv)
    assert again == cold
    # and the entry was healed on disk
    healed = json.loads(path.read_text())
    assert healed["payload"] == json.loads(cold[1])


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QWP_CACHE_DIR", str(tmp_path))
    code, _ = run(capsys, "volume", "--flavor", "wp", "--g", "1", "--n", "1")
    assert code == 0
    assert (tmp_path / "volume_wp_g1_n1.json").exists()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["volume", "--flavor", "nope", "--g", "0", "--n", "3"])
    assert exc.value.code == 2
