import pytest

from chebytower.invariants import invariants_recursive

ENV_VARS = (
    "CHEBYTOWER_CACHE_DIR",
    "CHEBYTOWER_MAX_DEGREE_LOG2",
    "CHEBYTOWER_ENUM_GUARD",
    "CHEBYTOWER_PRECISION_BITS",
)

# Coefficients of p_3 and p_4, lowest power first (even powers only).
P3 = [2, -64, 336, -672, 660, -352, 104, -16, 1]
P4 = [2, -256, 5440, -45696, 201552, -537472, 940576, -1136960, 980628,
      -615296, 283360, -95680, 23400, -4032, 464, -32, 1]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("CHEBYTOWER_CACHE_DIR", str(tmp_path / "default-cache"))


@pytest.fixture(scope="session")
def table16():
    return invariants_recursive(16)


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"


@pytest.fixture
def p3_coeffs():
    return list(P3)


@pytest.fixture
def p4_coeffs():
    return list(P4)
