import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from momenta.serialize import dumps, loads

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(finite, max_size=20))
def test_floats_roundtrip_bitwise(xs):
    back = loads(dumps({"x": xs}))["x"]
    assert np.array_equal(np.array(back, dtype=float).view(np.int64), np.array(xs, dtype=float).view(np.int64))


def test_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(2.0) == "2.0"


def test_keys_sorted_and_deterministic():
    a = dumps({"b": 1, "a": [1.5, np.float64(2)], "c": {"z": None, "y": True}})
    b = dumps({"c": {"y": True, "z": None}, "a": [1.5, 2.0], "b": 1})
    assert a == b and a.index('"a"') < a.index('"b"') < a.index('"c"')


def test_nonfinite_becomes_null():
    assert loads(dumps([float("nan"), float("inf"), 1.0])) == [None, None, 1.0]


def test_numpy_arrays():
    arr = np.arange(6.0).reshape(2, 3) / 7
    assert np.array_equal(np.array(loads(dumps(arr))), arr)
