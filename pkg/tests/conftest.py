import pytest

from multiarm import datasets
from multiarm.posterior import update_posterior


@pytest.fixture(scope="session")
def dose_config():
    return datasets.case_study_config()


@pytest.fixture(scope="session")
def two_config():
    return datasets.two_treatment_config()


@pytest.fixture(scope="session")
def case_data():
    return datasets.case_study_data()


@pytest.fixture(scope="session")
def case_summary(dose_config, case_data):
    return update_posterior(dose_config.priors, case_data)
