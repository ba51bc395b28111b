"""
Material database: built-in table, CSV ingest and lookups.
"""
import pytest

from src.materials import (
    ComplexPermittivity,
    MaterialDatabase,
    MaterialRecord,
    builtin_database,
    database_violations,
    dump_database,
    find_material,
    load_database,
    loss_tangent,
    normalize_name,
)
from src.materials.builtin import BUILTIN_MATERIALS
from src.utils.errors import DomainError, DuplicateName, EmptyFile, MalformedRow, NonPhysicalValue

HEADER = "name,eps_real,eps_imag,source,category\n"


def _csv(tmp_path, body, name="db.csv"):
    p = tmp_path / name
    p.write_text(HEADER + body, encoding="utf-8")
    return p


# ---------------------------------------------------------------------------
# Built-in table
# ---------------------------------------------------------------------------

def test_builtin_has_every_table_row_once(db):
    assert len(db) == len(BUILTIN_MATERIALS) == 28
    assert len({r.key for r in db}) == len(db)


@pytest.mark.parametrize("name,real,loss", [
    ("TNT", 2.84, 0.005),
    ("Water", 20.0, 30.0),
    ("Dry Skin", 20.0, 16.0),
    ("Sugar", 3.5, 0.0025),
    ("Petroleum Jelly", 2.15, 0.0007),
    ("Sand 1.9 gr/cm³", 4.5, 0.04),
    ("Sand 1.8 gr/cm³", 5.9, 0.01),
    ("Methanol 0.6 Mol Solution", 7.0, 7.0),
])
def test_builtin_values_verbatim(db, name, real, loss):
    r = db.find(name)
    assert r is not None
    assert r.permittivity.real == real
    assert r.permittivity.loss == loss


def test_builtin_matches_table_in_order(db):
    for rec, (name, real, loss, src, cat) in zip(db, BUILTIN_MATERIALS):
        assert (rec.name, rec.permittivity.real, rec.permittivity.loss, rec.source, rec.category) == \
            (name, real, loss, src, cat)


def test_loss_tangent_nonnegative_everywhere(db):
    assert all(loss_tangent(r.permittivity) >= 0 for r in db)


def test_shipped_categories(db):
    explosives = {r.name for r in db.by_category("explosive")}
    assert explosives == {"TNT", "PETN", "RDX", "C4"}
    assert {r.name for r in db.by_category("SURROGATE")} == {"Sugar", "Salt", "Baking Soda"}
    assert {r.name for r in db.by_category("water-based")} == {
        "Water", "Ethanol", "Methanol 0.6 Mol Solution", "Jujube Honey"}
    assert len(db.by_category("nothing-here")) == 0


# ---------------------------------------------------------------------------
# Lookup and loss tangent
# ---------------------------------------------------------------------------

def test_find_material(db):
    assert find_material(db, "tnt").name == "TNT"
    assert find_material(db, "  Water ").name == "Water"
    assert find_material(db, "unobtanium") is None


def test_normalize_name_is_ascii_fold_and_trim():
    assert normalize_name("  Baking SODA ") == "baking soda"
    assert normalize_name("Sand 1.9 gr/cm³") == "sand 1.9 gr/cm³"


def test_loss_tangent_examples():
    assert loss_tangent(ComplexPermittivity(2.84, 0.005)) == pytest.approx(1.7606e-3, rel=1e-4)
    assert loss_tangent(ComplexPermittivity(20.0, 16.0)) == pytest.approx(0.8)
    assert loss_tangent(ComplexPermittivity(5.0, 0.0)) == 0.0


def test_loss_tangent_domain():
    with pytest.raises(DomainError):
        loss_tangent(ComplexPermittivity(0.0, 0.1))


def test_permittivity_rejects_active_media():
    with pytest.raises(NonPhysicalValue):
        ComplexPermittivity(2.0, -0.1)
    with pytest.raises(NonPhysicalValue):
        ComplexPermittivity(float("nan"), 0.0)


def test_record_invariants():
    with pytest.raises(MalformedRow):
        MaterialRecord("   ", ComplexPermittivity(2.0, 0.1))
    with pytest.raises(NonPhysicalValue):
        MaterialRecord("thin air", ComplexPermittivity(0.5, 0.0))
    r = MaterialRecord("  Foam ", ComplexPermittivity(1.1), category="  ")
    assert r.name == "Foam" and r.category is None


def test_database_rejects_case_insensitive_duplicates():
    p = ComplexPermittivity(2.0, 0.1)
    with pytest.raises(DuplicateName):
        MaterialDatabase((MaterialRecord("Wax", p), MaterialRecord(" WAX", p)))


# ---------------------------------------------------------------------------
# CSV ingest
# ---------------------------------------------------------------------------

def test_load_single_row(tmp_path):
    db = load_database(_csv(tmp_path, "TNT,2.84,0.005,[13],explosive\n"))
    assert len(db) == 1
    tnt = db.find("tnt")
    assert tnt.permittivity == ComplexPermittivity(2.84, 0.005)
    assert tnt.source == "[13]" and tnt.category == "explosive"


def test_load_scientific_notation_and_empty_category(tmp_path):
    db = load_database(_csv(tmp_path, "Oil,2.2e0,5E-4,x,\n"))
    rec = db.find("oil")
    assert rec.permittivity == ComplexPermittivity(2.2, 0.0005)
    assert rec.category is None


def test_load_duplicate_names(tmp_path):
    with pytest.raises(DuplicateName) as e:
        load_database(_csv(tmp_path, "A,2,0.1,x,\na,3,0.2,y,\n"))
    assert e.value.row == 3


def test_load_nonphysical_real(tmp_path):
    with pytest.raises(NonPhysicalValue) as e:
        load_database(_csv(tmp_path, "B,0.5,0.1,x,\n"))
    assert e.value.row == 2
    assert "row 2" in str(e.value)


def test_load_negative_loss(tmp_path):
    with pytest.raises(NonPhysicalValue):
        load_database(_csv(tmp_path, "B,2.0,-0.1,x,\n"))


@pytest.mark.parametrize("body", [
    "C,abc,0.1,x,\n",
    "C,\"1,000\",0.1,x,\n",
    "C,2.0,,x,\n",
    "C,inf,0.1,x,\n",
])
def test_load_malformed_numbers(tmp_path, body):
    with pytest.raises(MalformedRow):
        load_database(_csv(tmp_path, body))


def test_load_empty_files(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(EmptyFile):
        load_database(empty)
    with pytest.raises(EmptyFile):
        load_database(_csv(tmp_path, "", name="header_only.csv"))


def test_load_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("name,real,imag\nX,2,0\n", encoding="utf-8")
    with pytest.raises(MalformedRow) as e:
        load_database(p)
    assert e.value.row == 1


def test_load_invalid_utf8(tmp_path):
    p = tmp_path / "latin.csv"
    p.write_bytes(HEADER.encode("utf-8") + b"Caf\xff\xfe,2.0,0.1,x,\n")
    with pytest.raises(MalformedRow) as e:
        load_database(p)
    assert "UTF-8" in str(e.value)
    v = database_violations(p)
    assert len(v) == 1 and "MalformedRow" in v[0].message


def test_round_trip_builtin(tmp_path, db):
    out = dump_database(db, tmp_path / "builtin.csv")
    again = load_database(out)
    assert again == db
    assert [r.name for r in again] == [r.name for r in db]


def test_violations_collects_every_bad_row(tmp_path):
    p = _csv(tmp_path, "Good,2,0.1,x,\nBad,2,-1,x,\nWorse,abc,0,x,\ngood,3,0.1,x,\n")
    v = database_violations(p)
    assert [x.row for x in v] == [3, 4, 5]
    assert "NonPhysicalValue" in v[0].message
    assert "MalformedRow" in v[1].message
    assert "DuplicateName" in v[2].message


def test_violations_clean_file(tmp_path, db):
    assert database_violations(dump_database(db, tmp_path / "ok.csv")) == []
