import json

import pytest

from ihdual.corpus import closed_spaces, cones, get_space
from ihdual.exactfield import QQ
from ihdual.ichains import ih_dims
from ihdual.perversity import constant
from ihdual.spacefile import SpaceFileError, dumps, load, loads, to_document


def test_round_trip_is_idempotent():
    for X in list(closed_spaces().values()) + list(cones().values()):
        text = dumps(X)
        Y = loads(text)
        assert dumps(Y) == text
        assert Y.levels == X.levels
        assert [st.simplices for st in Y.strata] == [st.simplices for st in X.strata]


def test_canonical_form_ignores_input_order():
    X = get_space("ST2")
    doc = to_document(X)
    doc["top_simplices"] = [list(reversed(s)) for s in reversed(doc["top_simplices"])]
    doc["vertices"] = list(reversed(doc["vertices"]))
    assert dumps(loads(json.dumps(doc))) == dumps(X)


def test_orientation_hint_round_trip(tmp_path):
    X = get_space("S2")
    top = X.simplices_of_dim(2)[1]
    Y = X.with_orientation_hint(top)
    path = tmp_path / "s2.json"
    path.write_text(dumps(Y))
    Z = load(str(path))
    assert Z.orientation_hint == top
    assert Z.find_fundamental_cycle(QQ)[top] == 1


def test_empty_skeleta_manifold():
    doc = {"name": "S2", "dimension": 2, "vertices": [0, 1, 2, 3],
           "top_simplices": [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]], "skeleta": {}}
    X = loads(json.dumps(doc))
    assert ih_dims(X, constant(X, 0)) == X.simplicial_betti() == [1, 0, 1]


@pytest.mark.parametrize("doc,where", [
    ({"name": "x", "top_simplices": [[0, 1, 2]]}, None),
    ({"name": "x", "top_simplices": [[0, 1], [1, "a"]]}, "top_simplices[1]"),
    ({"name": "x", "vertices": [0, 1], "top_simplices": [[0, 2]]}, "top_simplices[0]"),
    ({"name": "x", "top_simplices": [[0, 0]]}, "top_simplices[0]"),
    ({"name": "x", "top_simplices": [[0, 1], [1, 2], [0, 2]], "skeleta": {"0": [[7, 8, 9, 10]]}}, None),
    ({"name": "x", "top_simplices": [[0, 1], [1, 2], [0, 2]], "colour": 1}, None),
    ({"name": "x", "dimension": 2, "top_simplices": [[0, 1], [1, 2], [0, 2]]}, None),
    ({"name": "x", "top_simplices": [[0, 1], [1, 2], [0, 2]], "orientation_hint": [0]}, "orientation_hint"),
    ({"top_simplices": []}, None),
])
def test_errors(doc, where):
    with pytest.raises(SpaceFileError) as e:
        loads(json.dumps(doc))
    assert e.value.where == where


def test_not_json():
    with pytest.raises(SpaceFileError):
        loads("{nope")
    with pytest.raises(SpaceFileError):
        loads("[1, 2]")


def test_invalid_points_at_simplex():
    with pytest.raises(SpaceFileError, match=r"\(0, 1\)"):
        loads(json.dumps({"name": "tri", "top_simplices": [[0, 1, 2]]}))
