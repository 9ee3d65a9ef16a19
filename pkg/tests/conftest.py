from __future__ import annotations

import io
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from posetaf.cli import main
from posetaf.poset import Poset

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def vee() -> Poset:
    return Poset.from_covers(["p1", "q", "p2"], [("q", "p1"), ("q", "p2")])


@pytest.fixture
def p4s1() -> Poset:
    return Poset.from_covers(
        ["x1", "x2", "x3", "x4"],
        [("x1", "x2"), ("x1", "x4"), ("x3", "x2"), ("x3", "x4")],
    )


@pytest.fixture
def p6s2() -> Poset:
    return Poset.from_covers(
        ["x1", "x2", "x3", "x4", "x5", "x6"],
        [
            ("x1", "x2"),
            ("x1", "x4"),
            ("x3", "x2"),
            ("x3", "x4"),
            ("x2", "x5"),
            ("x2", "x6"),
            ("x4", "x5"),
            ("x4", "x6"),
        ],
    )


def run_cli(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()
