"""The nine headline criteria, each at its stated tolerance and time limit.

Each test prints one ``[PASS]``/``[FAIL]`` line regardless of output capture.
"""

import json

import pytest

from dynred.acceptance import CHECKS

SEED = 0


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    result = CHECKS[number](SEED)
    with capsys.disabled():
        print(f"\n{result.line()}")
        if not result.passed:
            print(json.dumps(result.details, default=str, sort_keys=True))
    assert result.passed, result.details
