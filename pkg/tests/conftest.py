import os

import pytest

from flexquery.dataset import load_csv, attribute_series, series_from_values
from flexquery.knowledge import load_kb

DATA_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data")

# Age values of the clustering walk-through; the expected 4-way split, the
# kernels and the stitched supports are pinned from the published tables.
AGE_VALUES = [10, 11, 12, 13, 14, 15, 17,
              30, 31, 32, 34, 36, 38, 39, 40, 41, 42, 45, 46, 48, 50,
              69, 70, 72, 75, 76,
              90, 91, 95]

AGE_CLUSTERS = [
    (10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 17.0),
    (30.0, 31.0, 32.0, 34.0, 36.0, 38.0, 39.0, 40.0, 41.0, 42.0,
     45.0, 46.0, 48.0, 50.0),
    (69.0, 70.0, 72.0, 75.0, 76.0),
    (90.0, 91.0, 95.0),
]


@pytest.fixture(scope="session")
def age_series():
    return series_from_values("age", AGE_VALUES)


@pytest.fixture(scope="session")
def employes():
    return load_csv(os.path.join(DATA_DIR, "employes.csv"))


@pytest.fixture(scope="session")
def employes_kb():
    return load_kb(os.path.join(DATA_DIR, "kb_employes.json"))


@pytest.fixture(scope="session")
def employes_series(employes):
    return {c.name: attribute_series(employes, c.name)
            for c in employes.columns if c.kind == "numeric"}


EMPLOYE_QUERY = ("SELECT nom FROM employes WHERE salaire IS faible AND age IS grand "
                 "AND nbAT IS moyen AND nbE IS faible AND taille IS moyenne")


def row_of(ds, name):
    """Row id of the employee with the given nom."""
    j = ds.column_index("nom")
    for i, row in enumerate(ds.rows):
        if row[j] == name:
            return i
    raise AssertionError(f"no row named {name}")
