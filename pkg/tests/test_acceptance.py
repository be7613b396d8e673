"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Tolerances are pinned in josephson_kit.acceptance and are not adjusted here.
"""
import pytest

from josephson_kit import acceptance

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    result = acceptance.run_criterion(number)
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line
