import pytest

from oracles import admission_model


@pytest.fixture
def admission():
    return admission_model()
