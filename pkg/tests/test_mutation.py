"""The oracle harness must catch broken detectors.

Dropping the alternative-entrance writes only costs extra validate calls:
that memo prunes entrance walks that cannot succeed, so output is unchanged.
The other two mutants change output and must be caught.
"""
from conftest import LITERAL_VALID_CHECK, NO_NESTED_CALLS, SKIP_ALT_WRITES, mutant_detect
from superbubble.detector import detect
from superbubble.generate import campaign_graph
from superbubble.verify import verify_graph

SEEDS = range(300)


def failing_seeds(detect_fn):
    return [s for s in SEEDS if not verify_graph(campaign_graph(s)[1], detect_fn=detect_fn).ok]


def test_skipping_alternative_writes_only_costs_calls():
    mutant = mutant_detect(*SKIP_ALT_WRITES)
    extra = []
    for s in SEEDS:
        _, g = campaign_graph(s)
        good, bad = detect(g), mutant(g)
        assert bad.pairs() == good.pairs(), s
        assert bad.validate_calls <= 4 * (g.n + g.m)
        extra.append(bad.validate_calls - good.validate_calls)
    assert min(extra) >= 0
    assert max(extra) > 0


def test_literal_post_loop_check_is_caught():
    assert failing_seeds(mutant_detect(*LITERAL_VALID_CHECK))


def test_missing_nested_calls_are_caught():
    assert failing_seeds(mutant_detect(*NO_NESTED_CALLS))


def test_unmodified_kernel_passes():
    assert failing_seeds(mutant_detect()) == []
