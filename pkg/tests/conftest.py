import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rp3links import catalog  # noqa: E402
from rp3links.generate import random_diagram  # noqa: E402
from rp3links.moves import REDUCING, applicable_moves, apply_move  # noqa: E402


def random_wall_free(rng, max_crossings=8):
    return random_diagram(
        rng, components=rng.choice([1, 1, 2]), points=rng.randint(3, 6), max_crossings=max_crossings
    )


def random_knot(rng, wraps=0, max_crossings=8):
    return random_diagram(rng, points=rng.randint(3, 6), wraps=wraps, max_crossings=max_crossings)


def scramble(rng, d, steps, max_crossings=9):
    """Apply ``steps`` random moves, favouring insertions so walls appear."""
    applied = []
    for _ in range(steps):
        moves = applicable_moves(d, insertion_cap=None)
        if len(d.crossings) >= max_crossings:
            moves = [m for m in moves if m.kind in REDUCING] or moves
        elif rng.random() < 0.5:
            moves = [m for m in moves if m.kind == "R5+"] or moves
        if not moves:
            break
        m = rng.choice(moves)
        d = apply_move(d, m)
        applied.append(m)
    return d, applied


@pytest.fixture(scope="session")
def fixtures():
    return {name: catalog.load(name) for name in catalog.available()}


@pytest.fixture
def rng():
    return random.Random(20261014)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
