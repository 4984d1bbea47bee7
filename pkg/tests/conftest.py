from __future__ import annotations

import itertools

from hypothesis import settings, strategies as st

from altnu.paths import NEPath

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])


settings.register_profile("altnu", max_examples=40, deadline=None)
settings.load_profile("altnu")


@st.composite
def nu_delta(draw, max_n: int = 4, max_run: int = 3, min_run: int = 0, nu0: int | None = None):
    """A path ``nu`` and a valid increment vector for it."""
    n = draw(st.integers(1, max_n))
    runs = [draw(st.integers(0, max_run)) if nu0 is None else nu0] + [draw(st.integers(min_run, max_run)) for _ in range(n)]
    nu = NEPath(tuple(runs))
    delta = tuple(draw(st.integers(0, v)) for v in runs[1:])
    return nu, delta


def brute_nu_dyck(nu: NEPath) -> list[tuple[int, ...]]:
    """Independent oracle: every step word with the right counts, filtered by height."""
    width, n = nu.width, nu.n
    pref = nu.prefix_sums()
    out = []
    for pos in itertools.combinations(range(width + n), n):
        runs, last, x_ok = [], -1, True
        for k, p in enumerate(pos):
            runs.append(p - last - 1)
            last = p
        runs.append(width + n - 1 - last)
        # east run k+... : the north step k+1 happens after sum(runs[:k+1]) east steps
        xs = list(itertools.accumulate(runs))
        if all(xs[k] <= pref[k] for k in range(n)):
            out.append(tuple(runs))
    return out
