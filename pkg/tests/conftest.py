import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from henonkato.gaussian import GaussianRational  # noqa: E402
from henonkato.henon import HenonFactor, HenonMap  # noqa: E402

# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def gq(re, im=0):
    return GaussianRational(re, im)


def hmap(*factors):
    """hmap(([c0, c1, ..., 1], a), ...) with coefficients ascending."""
    return HenonMap(tuple(HenonFactor(tuple(gq(x) if not isinstance(x, GaussianRational) else x
                                            for x in poly), a if isinstance(a, GaussianRational) else gq(a))
                          for poly, a in factors))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  {detail}")
