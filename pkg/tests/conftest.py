import sys
from pathlib import Path

import pytest

from omltopo.lattice import gen_boolean, gen_greechie, gen_horizontal_sum, gen_mo, gen_product

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_lattices():
    """Named lattices shared across the suite (all satisfy the atom hypotheses
    except where noted)."""
    b2 = gen_boolean(2)
    return {
        "B1": gen_boolean(1),
        "B2": b2,
        "B3": gen_boolean(3),
        "MO2": gen_mo(2),
        "MO3": gen_mo(3),
        "MO4": gen_mo(4),
        "B2xB2": gen_product(b2, b2),
        "star": gen_greechie(["abc", "cde", "cfg"]),
        # below: no atom projection
        "chain3": gen_greechie(["abc", "cde", "efg"]),
        "B2+B3": gen_horizontal_sum(b2, gen_boolean(3)),
    }


LATTICES = fixture_lattices()
ATOMIC_AP = ["B1", "B2", "B3", "MO2", "MO3", "MO4", "B2xB2", "star"]


@pytest.fixture(scope="session")
def lattices():
    return LATTICES


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
