import json

import numpy as np
import pytest

from bogofock.cli import main
from bogofock.decompose import curve_v_phi
from bogofock.io import dump_operator, operator_to_spec


@pytest.fixture
def curve_spec(tmp_path):
    path = tmp_path / "curve.json"
    dump_operator(curve_v_phi(np.pi / 8), path)
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_inspect_curve(curve_spec, capsys):
    assert main(["inspect", curve_spec, "--json"]) == 0
    info = _json(capsys)["info"]
    assert info["index"] == 2 and info["statistical_dimension"] == 2
    # closed form: theta = (1 + sin(pi/4))/2
    assert abs(info["thetas"][0] - (1 + np.sin(np.pi / 4)) / 2) <= 1e-10


def test_inspect_identity(tmp_path, capsys):
    path = str(tmp_path / "id.json")
    assert main(["spec", "identity", "-o", path]) == 0
    capsys.readouterr()
    assert main(["inspect", path, "--json"]) == 0
    info = _json(capsys)["info"]
    assert info["index"] == 0 and info["statistical_dimension"] == 1


def test_implement_and_decompose(curve_spec, capsys):
    assert main(["implement", curve_spec, "--vectors", "5", "--generators", "5", "--json"]) == 0
    report = _json(capsys)
    assert report["pass"] and report["info"]["family_size"] == 2
    assert main(["decompose", curve_spec, "--vectors", "3"]) == 0
    assert "overall: PASS" in capsys.readouterr().out


def test_random_spec_with_kernel(tmp_path, capsys):
    path = str(tmp_path / "r.json")
    assert main(["spec", "random", "-o", path, "--window-modes", "3", "--index", "4", "--kernel", "1"]) == 0
    assert main(["implement", path, "--vectors", "3", "--generators", "3"]) == 0


def test_watatani(capsys):
    # closed form: Index E = 4 for dim K = 8, dim K2 = 2
    assert main(["watatani", "8", "2", "--samples", "3", "--json"]) == 0
    assert _json(capsys)["info"]["index"] == 4.0
    assert main(["watatani", "7", "2"]) == 2


def test_verify_all_subset(capsys):
    assert main(["verify-all", "--criteria", "1,3", "--json"]) == 0
    report = _json(capsys)
    assert report["pass"] and all(c["name"].startswith(("[1]", "[3]")) for c in report["checks"])
    assert main(["verify-all", "--criteria", "99"]) == 2


def test_reports_are_byte_stable(curve_spec, tmp_path, capsys):
    outputs = []
    for i in range(2):
        report = tmp_path / f"report{i}.json"
        assert main(["implement", curve_spec, "--vectors", "3", "--generators", "3", "--report", str(report)]) == 0
        data = json.loads(report.read_text())
        data.pop("timing")
        outputs.append(json.dumps(data, sort_keys=True))
    assert outputs[0] == outputs[1]


def test_tolerance_override_can_fail(curve_spec, capsys):
    assert main(["implement", curve_spec, "--vectors", "2", "--generators", "2", "--tol", "0"]) == 1


def test_corrupted_spec_reports_relation(tmp_path, capsys):
    spec = operator_to_spec(curve_v_phi(np.pi / 8))
    spec["block"][0][0] = [1.5, 0.0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec))
    assert main(["implement", str(path)]) == 2
    assert "relation violated: V11* V11 + V21* V21 = 1" in capsys.readouterr().err


def test_odd_index_and_missing_file(tmp_path, capsys):
    spec = operator_to_spec(curve_v_phi(np.pi / 8))
    spec["tail_shift"] = 1
    path = tmp_path / "odd.json"
    path.write_text(json.dumps(spec))
    assert main(["implement", str(path)]) == 2
    assert "unsupported: odd index out of scope" in capsys.readouterr().err
    assert main(["inspect", str(tmp_path / "nope.json")]) == 2
