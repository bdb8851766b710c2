import numpy as np

from gapmech import run_suite
from gapmech.verify import check_gradient_fd
from gapmech.surrogate import surrogate_gradient


def test_quick_suite_passes():
    report = run_suite("quick")
    failures = [r.name for r in report.results if not r.passed]
    assert report.ok, f"failing checks: {failures}"
    assert report.level == "quick"
    assert len(report.results) >= 15
    as_dict = report.to_dict()
    assert as_dict["ok"] is True


def test_mutation_is_caught():
    # a sign-flipped gradient must fail the finite-difference check
    def flipped(inst, perm, y):
        return -surrogate_gradient(inst, perm, y)

    result = check_gradient_fd(points=5, grad_fn=flipped)
    assert not result.passed


def test_scaled_gradient_is_caught():
    def inflated(inst, perm, y):
        return 1.01 * surrogate_gradient(inst, perm, y)

    result = check_gradient_fd(points=5, grad_fn=inflated)
    assert not result.passed
