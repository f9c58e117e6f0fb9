"""Top-level acceptance run: every criterion at its pinned tolerance.

Each test prints one ``PASS``/``FAIL`` line per criterion so a verbose run
reads as the acceptance protocol; the detailed sub-checks live in
``graphcorr.suite``.
"""
import pytest

from graphcorr.suite import CRITERIA, run_criterion

SEED = 42


@pytest.fixture(scope="module")
def all_checks():
    return {i + 1: run_criterion(i + 1, seed=SEED)
            for i in range(len(CRITERIA))}


@pytest.mark.parametrize("index,name",
                         [(i + 1, c[0]) for i, c in enumerate(CRITERIA)],
                         ids=[c[0] for c in CRITERIA])
def test_criterion(index, name, all_checks):
    checks = all_checks[index]
    assert checks, f"criterion {index} produced no checks"
    failed = [c for c in checks if not c.passed]
    worst = max((c.residual for c in checks if c.residual is not None),
                default=0.0)
    status = "FAIL" if failed else "PASS"
    print(f"{status} criterion {index:2d} [{name}]: "
          f"{len(checks) - len(failed)}/{len(checks)} checks, "
          f"max residual {worst:.3e}")
    assert not failed, [f"{c.name}: residual={c.residual} {c.detail}"
                        for c in failed]


def test_every_check_appears_exactly_once(all_checks):
    names = [c.name for checks in all_checks.values() for c in checks]
    assert len(names) == len(set(names))
