"""One test per acceptance criterion; each prints a single pass/fail line."""

import pytest

from tropfan import acceptance


@pytest.mark.parametrize("number", [num for num, *_ in acceptance.CRITERIA])
def test_criterion(number, capsys):
    outcome = acceptance.run(number)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
    assert outcome.seconds < outcome.limit, f"{outcome.seconds:.2f}s over the {outcome.limit}s limit"
