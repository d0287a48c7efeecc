import json
from importlib import resources

import pytest

from cfexplain.similarity import load_bundled_lexicon
from cfexplain.tasks import task_from_dict
from cfexplain.verify import fixed_world


@pytest.fixture(scope="session")
def lexicon():
    return load_bundled_lexicon()


@pytest.fixture(scope="session")
def example_task():
    text = resources.files("cfexplain.fixtures").joinpath("example_task.json").read_text()
    return task_from_dict(json.loads(text))


@pytest.fixture(scope="session")
def world():
    return fixed_world()
