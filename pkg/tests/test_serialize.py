import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catsim.errors import InvalidArgumentError
from catsim.fock import PureState, make_cat, make_coherent
from catsim.modes import TwoModePureState, tensor
from catsim.serialize import dumps, load_state, save_json, state_from_dict, state_to_dict, write_csv


def test_single_mode_round_trip(tmp_path):
    s = make_cat(1.1j, "-", 30)
    path = save_json(tmp_path / "s.json", state_to_dict(s))
    back = load_state(path)
    assert back == s
    data = json.loads(path.read_text())
    assert data["format"] == "catsim-state-v1" and data["modes"] == 1
    assert len(data["amplitudes"]) == 31


def test_two_mode_round_trip(tmp_path):
    s = tensor(make_coherent(0.3, 9), make_coherent(-0.2j, 8))
    back = load_state(save_json(tmp_path / "t.json", state_to_dict(s)))
    assert isinstance(back, TwoModePureState)
    assert back.shape == (10, 9)
    assert np.array_equal(back.amplitudes, s.amplitudes)


@given(st.lists(st.floats(-1e3, 1e3, allow_subnormal=True), min_size=4, max_size=4))
@settings(max_examples=50)
def test_floats_round_trip_bit_exact(values):
    amps = np.array(values[:2]) + 1j * np.array(values[2:])
    s = PureState(1, amps)
    assert np.array_equal(state_from_dict(json.loads(dumps(state_to_dict(s)))).amplitudes, amps)


def test_report_with_state_key():
    s = make_coherent(0.2, 10)
    assert state_from_dict({"fidelity": 0.5, "state": state_to_dict(s)}) == s


def test_bad_inputs():
    with pytest.raises(InvalidArgumentError):
        state_from_dict({"format": "other"})
    with pytest.raises(InvalidArgumentError):
        state_from_dict({"format": "catsim-state-v1", "modes": 3})
    with pytest.raises(InvalidArgumentError):
        dumps(float("nan"))
    with pytest.raises(InvalidArgumentError):
        state_to_dict("not a state")


def test_dumps_layout():
    text = dumps({"a": [1.5, 2], "b": {"c": None, "d": True}, "e": []})
    assert json.loads(text) == {"a": [1.5, 2], "b": {"c": None, "d": True}, "e": []}
    assert '"a": [1.5, 2]' in text
    assert dumps(0.1) == "0.10000000000000001"


def test_csv(tmp_path):
    path = write_csv(tmp_path / "x.csv", "name,value", [("a", 0.5), ("b", 1e-20)])
    assert path.read_text() == "name,value\na,0.5\nb,9.9999999999999995e-21\n"
