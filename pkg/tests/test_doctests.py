import doctest
import importlib

import pytest

MODULES = ["fracdimer.mlfunc", "fracdimer.qlinalg", "fracdimer.dimer_model", "fracdimer.qmeasures", "fracdimer.estimators"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    result = doctest.testmod(importlib.import_module(name), optionflags=doctest.ELLIPSIS)
    assert result.attempted > 0
    assert result.failed == 0
