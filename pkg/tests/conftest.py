import pytest

from statguide import load_csv, sample_path


@pytest.fixture(scope="session")
def housing():
    return load_csv(str(sample_path("housing")))


@pytest.fixture(scope="session")
def auto_mpg():
    return load_csv(str(sample_path("auto_mpg")))
