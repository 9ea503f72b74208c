import json
import shutil

import pytest

from primline.arith import prime_powers_between
from primline.fixtures import FIXTURES, FixtureError, fixture_sha, load_fixture


@pytest.mark.parametrize(
    "name,count",
    [("l3_exceptions", 9), ("cubic_146", 146), ("cubic_82", 82), ("e4", 1514),
     ("e4_excluded", 198), ("e4_added", 474), ("g_l", 21), ("g_t", 13)],
)
def test_fixture_sizes(name, count):
    assert len(load_fixture(name)) == count


def test_fixture_relations():
    assert set(load_fixture("cubic_82")) <= set(load_fixture("cubic_146"))
    assert max(load_fixture("cubic_82")) == 4951
    e4 = set(load_fixture("e4"))
    assert max(e4) == 102829
    assert set(load_fixture("g_t")) <= set(load_fixture("g_l")) <= e4
    base = {q for _, _, q in prime_powers_between(2, 9620)}
    assert len(base) == 1238
    assert (base - set(load_fixture("e4_excluded"))) | set(load_fixture("e4_added")) == e4
    assert load_fixture("l3_exceptions") == [3, 4, 5, 7, 9, 11, 13, 31, 37]


def test_fixture_hash_logged(caplog):
    with caplog.at_level("INFO", logger="primline.fixtures"):
        load_fixture("g_t")
    assert fixture_sha("g_t") in caplog.text


def copy_data(tmp_path):
    from importlib import resources

    src = resources.files("primline") / "data"
    for name in list(FIXTURES.values()) + ["manifest.json"]:
        shutil.copy(str(src / name), tmp_path / name)
    return tmp_path


def test_tampered_fixture_rejected(tmp_path):
    d = copy_data(tmp_path)
    with open(d / "g_t.txt", "a") as fh:
        fh.write("47\n")
    with pytest.raises(FixtureError, match="hash"):
        load_fixture("g_t", d)
    assert load_fixture("g_l", d)


def test_unsorted_fixture_rejected(tmp_path):
    import hashlib

    d = copy_data(tmp_path)
    raw = b"5\n3\n"
    (d / "g_t.txt").write_bytes(raw)
    manifest = json.loads((d / "manifest.json").read_text())
    manifest["g_t.txt"]["sha256"] = hashlib.sha256(raw).hexdigest()
    (d / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(FixtureError, match="sorted"):
        load_fixture("g_t", d)


def test_missing_fixture(tmp_path):
    d = copy_data(tmp_path)
    (d / "e4.txt").unlink()
    with pytest.raises(FixtureError, match="missing"):
        load_fixture("e4", d)
