"""Reference client: SDK, terminal chat, and coverage-state synthesis."""

from cair.client.sdk import ClientError, HubClient, LocalProfile, TurnResult, load_profile
from cair.client.coverage import COVERAGE_FRACTIONS, build_coverage_state

__all__ = [
    "ClientError",
    "HubClient",
    "LocalProfile",
    "TurnResult",
    "load_profile",
    "COVERAGE_FRACTIONS",
    "build_coverage_state",
]
