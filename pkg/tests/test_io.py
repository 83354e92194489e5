import json

import numpy as np
import pytest

from bogofock.decompose import curve_v_phi
from bogofock.io import (
    SpecError,
    bogoliubov_from_spec,
    dump_fock_vector,
    dump_operator,
    load_fock_vector,
    load_operator,
    operator_from_spec,
    operator_to_spec,
    relation_residuals,
)
from bogofock.oracles import random_finite_type
from bogofock.sampling import random_bogoliubov, random_fock_vector
from bogofock.selfdual import BogoliubovOp


def test_operator_roundtrip(tmp_path, rng):
    v = random_bogoliubov(3, 4, rng)
    path = tmp_path / "v.json"
    dump_operator(v, path)
    back = load_operator(path)
    assert isinstance(back, BogoliubovOp)
    assert back.op.max_abs_diff(v.op) == 0


def test_general_operator_roundtrip(rng):
    op = random_finite_type(4, 2, rng)
    back = operator_from_spec(json.loads(json.dumps(operator_to_spec(op, bogoliubov=False))))
    assert back.max_abs_diff(op) == 0


def test_fock_vector_roundtrip(tmp_path, rng):
    vec = random_fock_vector(6, 3, 5, rng)
    dump_fock_vector(vec, tmp_path / "f.json")
    assert load_fock_vector(tmp_path / "f.json").distance(vec) == 0


def test_real_numbers_accepted():
    spec = {"window_cols": 2, "tail_shift": 0, "block": [[1, 0], [0, 1]], "bogoliubov": True}
    assert bogoliubov_from_spec(spec).index == 0


def test_relation_residuals_vanish_for_isometries():
    assert max(relation_residuals(curve_v_phi(0.4).op).values()) <= 1e-15


def _spec(**changes):
    spec = operator_to_spec(curve_v_phi(np.pi / 8))
    spec.update(changes)
    return spec


def test_corrupted_block_names_relation():
    spec = _spec()
    spec["block"][0][0] = [2.0, 0.0]
    with pytest.raises(SpecError, match=r"V11\* V11 \+ V21\* V21 = 1"):
        bogoliubov_from_spec(spec)


@pytest.mark.parametrize("changes,message", [
    ({"tail_shift": 1}, "odd index"),
    ({"tail_shift": -2}, "negative"),
    ({"window_cols": 3}, "even"),
    ({"block": [[1, 0]]}, "rows"),
    ({"block": "nope"}, "list of rows"),
    ({"tail_pattern": [[0, 1], [1, 0]]}, "identity"),
])
def test_invalid_specs(changes, message):
    with pytest.raises(SpecError, match=message):
        bogoliubov_from_spec(_spec(**changes))


def test_missing_field_and_bad_json(tmp_path):
    with pytest.raises(SpecError, match="missing"):
        operator_from_spec({"window_cols": 2})
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SpecError, match="invalid JSON"):
        load_operator(path)
