import pytest
from hypothesis import HealthCheck, settings

from revertlab.core import MAX_UINT256

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# names used by the hand-built exploit scenario
EXPLOIT_NAMES = ["Minter", "Attacker", "Accomplice", "B"]
EXPLOIT_AMOUNTS = [0, 1, 10, MAX_UINT256]


@pytest.fixture
def exploit_cfg():
    from revertlab.config import Config

    return Config(
        model="token-notify-vuln",
        addresses=EXPLOIT_NAMES,
        amounts=EXPLOIT_AMOUNTS,
        setup=[{"caller": "Minter", "method": "Mint", "args": ["Attacker", 10]}],
    )
