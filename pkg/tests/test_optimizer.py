import math

import pytest

from mollify.errors import DomainError
from mollify.optimizer import SearchSpace, evaluate_theorem_a, optimize, worker_count

SMALL = SearchSpace(upsilon_range=(0.38, 0.5), c_range=(15.0, 30.0), grid=(3, 4),
                    polish_iterations=40)


def test_evaluate_theorem_a_matches_reported(theorem_a):
    assert theorem_a.bound == pytest.approx(4.91, abs=0.02)
    assert theorem_a.delta == pytest.approx(25 / 668 - 1e-10, rel=1e-15)


def test_theta_domain():
    with pytest.raises(DomainError):
        evaluate_theorem_a("1/2", 0.44, 23)
    with pytest.raises((TypeError, ValueError)):
        evaluate_theorem_a(0.1, 0.44, 23)


def test_feasible_point_dominance():
    res = optimize("7/64", SMALL, workers=1)
    for u, c in SMALL.grid_points():
        assert res.result.bound <= evaluate_theorem_a("7/64", u, c).bound + 1e-9
    assert res.evaluations > len(SMALL.grid_points())


def test_deterministic_across_workers():
    a = optimize("7/64", SMALL, workers=1)
    b = optimize("7/64", SMALL, workers=4)
    assert (a.best_upsilon, a.best_c_tilde, a.result.bound) == \
        (b.best_upsilon, b.best_c_tilde, b.result.bound)
    assert a.trace == b.trace


def test_degenerate_space_reproduces_fixed_point(theorem_a):
    space = SearchSpace(upsilon_range=(0.44, 0.44), c_range=(23.0, 23.0))
    res = optimize("7/64", space, workers=1)
    assert res.best_upsilon == 0.44 and res.best_c_tilde == 23.0
    assert res.result.bound == theorem_a.bound


def test_one_free_coordinate():
    space = SearchSpace(upsilon_range=(0.44, 0.44), c_range=(15.0, 30.0), grid=(2, 4),
                        polish_iterations=30)
    res = optimize("7/64", space, workers=1)
    assert res.best_upsilon == 0.44
    assert 15.0 <= res.best_c_tilde <= 30.0


def test_optimum_sits_on_c_edge():
    # the bound keeps decreasing in c_tilde over the default range, so the
    # search ends on the upper c edge rather than in the interior
    res = optimize("7/64", workers=1)
    assert res.best_c_tilde == pytest.approx(40.0)
    assert res.result.bound < 4.75
    assert 0.35 < res.best_upsilon < 0.45


@pytest.mark.parametrize("kwargs", [
    {"upsilon_range": (0.6, 0.3)},
    {"upsilon_range": (0.0, 0.5)},
    {"c_range": (10.0, 300.0)},
    {"grid": (1, 5)},
    {"polish_iterations": -1},
])
def test_search_space_validation(kwargs):
    with pytest.raises(DomainError):
        SearchSpace(**kwargs)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("MOLLIFY_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("MOLLIFY_THREADS", "0")
    with pytest.raises(DomainError):
        worker_count()
    monkeypatch.setenv("MOLLIFY_THREADS", "many")
    with pytest.raises(DomainError):
        worker_count()


def test_infeasible_points_are_skipped(monkeypatch):
    import mollify.optimizer as opt
    real = opt.evaluate_theorem_a

    def patched(theta, u, c, guard=1e-10, spec=None):
        if u > 0.42:
            raise DomainError("pretend infeasible")
        return real(theta, u, c, guard, spec)

    monkeypatch.setattr(opt, "evaluate_theorem_a", patched)
    space = SearchSpace(upsilon_range=(0.40, 0.45), c_range=(20.0, 30.0), grid=(2, 2),
                        polish_iterations=0)
    res = opt.optimize("7/64", space, workers=1)
    assert res.best_upsilon == 0.40
    assert math.isfinite(res.result.bound)
