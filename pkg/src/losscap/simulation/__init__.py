"""Simulation oracle for loss stations and routing networks."""

from .distributions import KINDS, ServiceDistribution
from .engine import FutureEventList, stream
from .runner import (
    CONFIDENCE,
    MIN_REPLICATIONS,
    InsensitivityRow,
    NetworkSimConfig,
    ReplicationResult,
    SimConfig,
    SimEstimate,
    insensitivity_experiment,
    network_config_from_description,
    simulate_loss_station,
    simulate_network,
)

__all__ = [
    "CONFIDENCE",
    "KINDS",
    "MIN_REPLICATIONS",
    "FutureEventList",
    "InsensitivityRow",
    "NetworkSimConfig",
    "ReplicationResult",
    "ServiceDistribution",
    "SimConfig",
    "SimEstimate",
    "insensitivity_experiment",
    "network_config_from_description",
    "simulate_loss_station",
    "simulate_network",
    "stream",
]
