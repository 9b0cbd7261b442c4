import numpy as np
import pytest

from finsler_lab import geometry as geo
from finsler_lab import zoo

ZOO_NAMES = ("riemannian", "randers", "square", "berwald_example",
             "family_m1", "family_m2")


@pytest.fixture(scope="session")
def entries():
    """All built-in zoo entries, constructed once."""
    return {name: zoo.get_entry(name) for name in ZOO_NAMES}


@pytest.fixture(scope="session")
def entry_reports(entries):
    """100 seeded curvature reports per entry, shared across the identity
    criteria so the heavy jet evaluations run once."""
    out = {}
    for name, entry in entries.items():
        pts = entry.sample_points(100, seed=42)
        out[name] = [geo.curvature_report(entry.metric, entry.phi, x, y)
                     for x, y in pts]
    return out
