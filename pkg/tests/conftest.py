import numpy as np
import pytest
from hypothesis import strategies as st

from qsync.propagator import EnsembleConfig


def random_configs(count, seed=0, n_max=12, lam=(1e-3, 10.0), delta=(-5.0, 5.0), gamma=(0.1, 3.0)):
    """Deterministic random configs; spectral width sampled log-uniformly."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        out.append(EnsembleConfig(
            n_qubits=int(rng.integers(1, n_max + 1)),
            coupling=float(rng.uniform(*gamma)),
            spectral_width=float(10 ** rng.uniform(np.log10(lam[0]), np.log10(lam[1]))),
            detuning=float(rng.uniform(*delta)),
        ))
    return out


configs = st.builds(
    EnsembleConfig,
    n_qubits=st.integers(1, 12),
    coupling=st.floats(0.1, 3.0),
    spectral_width=st.floats(1e-3, 10.0),
    detuning=st.floats(-5.0, 5.0),
)


@pytest.fixture
def default_cfg():
    return EnsembleConfig()
