import os
import sys

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, _ROOT)

import pytest

from src.inversion.locus import SolverConfig
from src.materials import builtin_database
from src.screening.regions import default_regions

LOWER_RED = ("TNT", "PETN", "RDX", "C4", "Sugar", "Salt", "Baking Soda")
WATER_BASED = ("Water", "Ethanol", "Methanol 0.6 Mol Solution", "Jujube Honey")
SURROGATES = ("Sugar", "Salt", "Baking Soda")


@pytest.fixture
def db():
    return builtin_database()


@pytest.fixture
def regions():
    return default_regions()


@pytest.fixture
def solver():
    return SolverConfig()
