"""Hypothesis strategies shared by the test modules."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays


def finite(lo=-10.0, hi=10.0):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def vec(n, lo=-10.0, hi=10.0):
    return arrays(np.float64, (n,), elements=finite(lo, hi))
