import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tplroute.generate import generate_instance
from tplroute.layout import (
    LayoutError,
    layout_from_dict,
    layout_to_dict,
    load_layout,
    save_layout,
    validate,
)


def minimal_dict():
    return {
        "grid": {"width": 4, "height": 4, "layers": [{"dir": "H"}, {"dir": "V"}]},
        "rules": {
            "d_color": 2, "alpha": 1, "beta": 1, "gamma": 50, "stitch_cost": 5,
            "via_cost": 4, "wrong_way_cost": 2, "history_increment": 10,
            "max_iterations": 10,
        },
        "obstacles": [],
        "nets": [{"id": 0, "name": "n0", "pins": [[[0, 0, 0]], [[3, 3, 0]]]}],
    }


def test_minimal_layout_loads(tmp_path):
    path = tmp_path / "l.json"
    path.write_text(json.dumps(minimal_dict()))
    layout = load_layout(path)
    assert layout.num_layers == 2
    assert len(layout.nets) == 1
    assert layout.rules.d_color == 2
    assert validate(layout) == []


def test_out_of_bounds_pin_rejected():
    data = minimal_dict()
    data["grid"]["width"] = 8
    data["nets"][0]["pins"][0] = [[9, 0, 0]]
    with pytest.raises(LayoutError, match="out of bounds"):
        layout_from_dict(data)


def test_missing_rule_field_named():
    data = minimal_dict()
    del data["rules"]["d_color"]
    with pytest.raises(LayoutError, match="d_color"):
        layout_from_dict(data)


def test_unparsable_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(LayoutError, match="cannot parse"):
        load_layout(path)


def test_duplicate_net_id():
    data = minimal_dict()
    data["nets"].append({"id": 0, "name": "dup", "pins": [[[1, 1, 0]], [[2, 2, 0]]]})
    with pytest.raises(LayoutError, match="duplicate net id 0"):
        layout_from_dict(data)


def test_empty_pin_list():
    data = minimal_dict()
    data["nets"][0]["pins"] = []
    with pytest.raises(LayoutError, match="no pins"):
        layout_from_dict(data)


def test_pin_on_obstacle():
    data = minimal_dict()
    data["obstacles"] = [[0, 0, 0]]
    with pytest.raises(LayoutError, match="obstacle"):
        layout_from_dict(data)


def test_shared_pin_vertex_rejected():
    data = minimal_dict()
    data["nets"].append({"id": 1, "name": "n1", "pins": [[[0, 0, 0]], [[2, 2, 0]]]})
    with pytest.raises(LayoutError, match="shared by nets"):
        layout_from_dict(data)


def test_non_alternating_layers_rejected():
    data = minimal_dict()
    data["grid"]["layers"] = [{"dir": "H"}, {"dir": "H"}]
    with pytest.raises(LayoutError, match="alternate"):
        layout_from_dict(data)


def test_guide_box_validation():
    data = minimal_dict()
    data["nets"][0]["guide"] = [{"layer": 0, "x0": 2, "y0": 0, "x1": 1, "y1": 3}]
    with pytest.raises(LayoutError, match="guide"):
        layout_from_dict(data)


def test_valid_guide_round_trips():
    data = minimal_dict()
    data["nets"][0]["guide"] = [{"layer": 0, "x0": 0, "y0": 0, "x1": 3, "y1": 1}]
    layout = layout_from_dict(data)
    assert layout.nets[0].guide == [(0, 0, 0, 3, 1)]
    again = layout_from_dict(layout_to_dict(layout))
    assert again.nets[0].guide == layout.nets[0].guide


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_round_trip_generated_layouts(seed):
    layout = generate_instance(
        seed=seed, width=8, height=8, layers=2,
        num_nets=3, pins_per_net=2, congestion=0.4,
    )
    again = layout_from_dict(layout_to_dict(layout))
    assert layout_to_dict(again) == layout_to_dict(layout)
    assert validate(again) == []


def test_save_and_reload(tmp_path):
    layout = generate_instance(
        seed=5, width=6, height=6, layers=2,
        num_nets=2, pins_per_net=2, congestion=0.3,
    )
    path = tmp_path / "inst.json"
    save_layout(layout, path)
    again = load_layout(path)
    assert layout_to_dict(again) == layout_to_dict(layout)
