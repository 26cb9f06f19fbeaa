import numpy as np
import pytest
from hypothesis import strategies as st

from neutralcoat.geometry import Perturbation
from neutralcoat.nystrom import Material
from neutralcoat.oracles import NeutralConfig

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_acceptance(label: str, passed: bool, detail: str):
    _ACCEPTANCE.append((label, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label:<6} {detail}")


@pytest.fixture(scope="session")
def reference_material():
    return Material(5.0, 2.0, 3.0)


@pytest.fixture(scope="session")
def neutral(reference_material):
    return NeutralConfig(reference_material, 1.0)


def perturbations(max_degree=4, max_coeff=0.002, max_a0=0.01):
    """Small Fourier perturbations with |f|_{2,inf} well below 0.2."""
    coeff = st.floats(-max_coeff, max_coeff, allow_nan=False)
    return st.builds(
        Perturbation,
        st.floats(-max_a0, max_a0, allow_nan=False),
        st.lists(coeff, max_size=max_degree),
        st.lists(coeff, max_size=max_degree),
    )


def grid(n):
    return np.arange(n) * (2 * np.pi / n)
