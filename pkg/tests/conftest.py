import numpy as np
import pytest

from rvac.state import Eos, make_base_state


def random_base(rng, eos=None, kappa=None, **fixed):
    """Draw an admissible expansion-regime base state; fixed keywords override draws."""
    params = dict(
        p=rng.uniform(0.2, 5.0),
        u2=rng.uniform(-0.8, 0.8),
        u3=rng.uniform(-0.8, 0.8),
        H2=rng.uniform(-2.0, 2.0),
        H3=rng.uniform(-2.0, 2.0),
        Hc2=rng.uniform(-2.0, 2.0),
        Hc3=rng.uniform(-2.0, 2.0),
        E1=rng.uniform(-1.0, 1.0),
        kappa=rng.uniform(-0.8, -0.01) if kappa is None else kappa,
        S=rng.uniform(-0.5, 0.5),
    )
    params.update(fixed)
    return make_base_state(eos=eos or Eos(), **params)


def family_base(E1, Hc2, Hc3, H3=1.0, u3=0.3, p=1.0, kappa=0.0, eos=None):
    return make_base_state(
        p=p, u2=0.0, u3=u3, H2=0.0, H3=H3, Hc2=Hc2, Hc3=Hc3, E1=E1,
        kappa=kappa, eos=eos, require_expansion=False,
    )


REFERENCE = dict(p=1.0, u2=0.0, u3=0.0, H2=0.0, H3=2.0, Hc2=0.5, Hc3=0.0, E1=0.05, kappa=-0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def reference_base():
    return make_base_state(**REFERENCE)
