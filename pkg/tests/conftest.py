import pytest

from sphdist import catalog, schemes


@pytest.fixture(scope="session")
def leech_2025():
    return catalog.leech_derived_2025()


@pytest.fixture(scope="session")
def leech_scheme(leech_2025):
    """(KreinData, SpectralData) in the primary Q-polynomial ordering."""
    spec = schemes.idempotents(schemes.from_distance_classes(leech_2025))
    return schemes.q_polynomial(spec)


@pytest.fixture(scope="session")
def t5_scheme():
    return schemes.q_polynomial(schemes.idempotents(catalog.triangular(5)))
