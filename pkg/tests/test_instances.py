import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E1_EDGES, random_interval_lpuu, utsp_from_edges
from itsp.instances import generate_instance, instance_from_document, parse_instance, serialize_instance
from itsp.model import Discrete, InstanceError, LpuuInstance, Normal, Uniform, UtspInstance

THREE = {
    "type": "utsp",
    "durations": [[None, {"lo": 1, "hi": 2}, 3], [{"lo": 1, "hi": 2}, None, 4], [3, 4, None]],
}


def lp_doc(**overrides):
    doc = {
        "type": "lpuu",
        "c": [1, 2],
        "Y": [[{"lo": 1, "hi": 2}, {"lo": 0, "hi": 1}], [{"lo": 1, "hi": 1.5}, 2]],
        "Z": [{"lo": 3, "hi": 5}, 6],
        "penalty": -1e8,
    }
    doc.update(overrides)
    return doc


def test_minimal_three_city_document():
    inst = parse_instance(json.dumps(THREE))
    assert isinstance(inst, UtspInstance) and inst.kind == "interval" and inst.n == 3


def test_reversed_interval_names_path():
    doc = json.loads(json.dumps(THREE))
    doc["durations"][0][1] = {"lo": 5, "hi": 2}
    with pytest.raises(InstanceError, match=r"durations\[0\]\[1\]"):
        parse_instance(json.dumps(doc))


def test_lpuu_document():
    inst = parse_instance(json.dumps(lp_doc()))
    assert isinstance(inst, LpuuInstance) and (inst.m, inst.n) == (2, 2) and inst.kind == "interval"


@pytest.mark.parametrize(
    "doc, pattern",
    [
        (lp_doc(penalty=-5), "penalty"),
        (lp_doc(Z=[{"lo": 3}, 6]), r"Z\[0\]"),
        (lp_doc(Y=[[{"lo": 1, "hi": 2}, {"dist": "normal", "mu": 1, "sigma": 1}], [1, 2]]), "mixed uncertainty kinds"),
        (lp_doc(c=[1, "a"]), r"c\[1\]"),
        ({k: v for k, v in lp_doc().items() if k != "penalty"}, "penalty"),
        (lp_doc(extra=1), "unknown fields"),
        ({"type": "graph"}, "type"),
        ({"type": "utsp", "durations": [[None, -1, 1], [-1, None, 1], [1, 1, None]]}, "nonnegative"),
        ({"type": "utsp", "durations": [[None, 1, 2], [1, None, 1], [3, 1, None]]}, "asymmetric"),
        ({"type": "utsp", "durations": [[None, {"dist": "beta"}, 1], [1, None, 1], [1, 1, None]]}, r"durations\[0\]\[1\]"),
    ],
)
def test_invalid_documents(doc, pattern):
    with pytest.raises(InstanceError, match=pattern):
        instance_from_document(doc)


def test_syntax_error():
    with pytest.raises(InstanceError, match="syntax error"):
        parse_instance("{not json")


def test_distribution_documents():
    doc = {
        "type": "lpuu",
        "c": [1],
        "Y": [[{"dist": "normal", "mu": 1, "sigma": 0.1}]],
        "Z": [{"dist": "discrete", "values": [1, 2], "probs": [0.5, 0.5]}],
        "penalty": -1e8,
    }
    inst = instance_from_document(doc)
    assert inst.Y[0][0] == Normal(1, 0.1) and inst.Z[0] == Discrete((1.0, 2.0), (0.5, 0.5))


def test_round_trip():
    rng = np.random.default_rng(0)
    for inst in [utsp_from_edges(E1_EDGES, name="E1"), random_interval_lpuu(rng, 3, 2)]:
        text = serialize_instance(inst)
        back = parse_instance(text, check_penalty=False)
        assert back == inst
        assert serialize_instance(back) == text


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["interval", "dist", "crisp"]), st.integers(3, 9), st.integers(0, 10**6))
def test_generated_utsp_round_trips(kind, n, seed):
    doc = generate_instance("utsp", kind, n, seed)
    inst = instance_from_document(doc)
    assert inst.kind == kind and inst.n == n
    assert json.loads(serialize_instance(inst))["durations"] == json.loads(json.dumps(doc["durations"]))


def test_generator_deterministic():
    a = json.dumps(generate_instance("utsp", "interval", 6, 42))
    assert a == json.dumps(generate_instance("utsp", "interval", 6, 42))
    assert a != json.dumps(generate_instance("utsp", "interval", 6, 43))


def test_zero_spread_is_crisp_equivalent():
    inst = instance_from_document(generate_instance("utsp", "interval", 6, 1, spread=0))
    lo, hi = inst.time_bounds()
    assert np.array_equal(lo, hi)
    lp = instance_from_document(generate_instance("lpuu", "interval", (3, 2), 1, spread=0))
    ylo, yhi, zlo, zhi = lp.bounds()
    assert np.array_equal(ylo, yhi) and np.array_equal(zlo, zhi)


def test_dist_generator_uses_uniforms():
    inst = instance_from_document(generate_instance("utsp", "dist", 5, 7))
    assert all(isinstance(u, Uniform) for row in inst.durations for u in row if u is not None)


def test_generated_lpuu_passes_validation_and_has_inner_point():
    for seed in range(10):
        inst = instance_from_document(generate_instance("lpuu", "interval", (3, 3), seed))
        assert inst.penalty < -(1 + sum(abs(v) for v in inst.c) * 1e6)
        assert np.all(inst.bounds()[2] >= 0)


def test_generator_argument_checks():
    with pytest.raises(ValueError):
        generate_instance("utsp", "interval", 2, 0)
    with pytest.raises(ValueError):
        generate_instance("utsp", "fuzzy", 5, 0)
    with pytest.raises(ValueError):
        generate_instance("utsp", "interval", 5, 0, spread=-1)
    with pytest.raises(ValueError):
        generate_instance("knapsack", "interval", 5, 0)
