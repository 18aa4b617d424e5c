from numpy.testing import assert_allclose

from app.utils.retry_policy import BracketPolicy, expand_until_found


def test_default_widths():
    assert_allclose(BracketPolicy().widths, [0.02, 0.08, 0.32])


def test_returns_first_result_and_stops():
    calls = []

    def search(width):
        calls.append(width)
        return "root" if width > 0.05 else None

    assert expand_until_found(search) == "root"
    assert_allclose(calls, [0.02, 0.08])


def test_exhausted_policy_returns_none():
    calls = []

    def search(width):
        calls.append(width)
        return None

    policy = BracketPolicy(initial_width=0.1, expansion_base=2.0, max_expansions=3)
    assert expand_until_found(search, policy) is None
    assert_allclose(calls, [0.1, 0.2, 0.4, 0.8])
