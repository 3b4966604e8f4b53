"""Open routing networks: validation and the traffic equations.

Total arrival rates solve ``gamma = lam + gamma @ P`` where ``P`` is the
substochastic transfer matrix between services; row deficits are discharge
probabilities.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from ._validation import check_count, check_real, check_square_matrix, check_vector
from .exceptions import ConfigError, InvalidRoutingError, UnsolvableNetworkError

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class RoutingReport:
    n: int
    max_row_sum: float
    spectral_radius: float
    solvable: bool


@dataclass(frozen=True)
class TrafficSolution:
    rates: np.ndarray
    residual: float
    iterations: int = 0

    def as_list(self):
        return [float(r) for r in self.rates]


def validate_routing(matrix):
    """Check entry bounds and row sums; report the spectral radius.

    A spectral radius below one is what makes the Neumann series for
    ``(I - P)^-1`` converge, i.e. the traffic equations uniquely solvable.

    Raises:
        InvalidRoutingError: non-square input, entries outside [0, 1], or a
            row sum above one.
    """
    P = check_square_matrix(matrix, "routing matrix", error=InvalidRoutingError)
    if np.any(P < 0) or np.any(P > 1):
        raise InvalidRoutingError("routing entries must lie in [0, 1]")
    row_sums = P.sum(axis=1)
    if np.any(row_sums > 1 + ROW_SUM_TOL):
        worst = int(np.argmax(row_sums))
        raise InvalidRoutingError(f"row {worst} sums to {row_sums[worst]:.15g} > 1")
    radius = float(np.max(np.abs(np.linalg.eigvals(P)))) if P.size else 0.0
    # eigvals carries rounding noise; a row-sum bound below one settles it directly.
    max_row = float(row_sums.max())
    if max_row < 1:
        radius = min(radius, max_row)
    return RoutingReport(n=P.shape[0], max_row_sum=max_row, spectral_radius=radius,
                         solvable=radius < 1 - 1e-12)


def _residual(gamma, lam, P):
    return float(np.max(np.abs(gamma - lam - gamma @ P))) if gamma.size else 0.0


def fixed_point_traffic(external, matrix, *, tol=1e-12, max_iter=100_000):
    """Solve the traffic equations by iterating ``gamma <- lam + gamma @ P``.

    Returns:
        ``(gamma, iterations)``. Raises UnsolvableNetworkError when the
        iteration has not converged after ``max_iter`` steps.
    """
    P = np.asarray(matrix, dtype=float)
    lam = np.asarray(external, dtype=float)
    gamma = lam.copy()
    for it in range(1, max_iter + 1):
        nxt = lam + gamma @ P
        if np.max(np.abs(nxt - gamma), initial=0.0) <= tol * (1.0 + np.max(np.abs(nxt), initial=0.0)):
            return nxt, it
        gamma = nxt
    raise UnsolvableNetworkError(f"fixed-point iteration did not converge in {max_iter} steps")


def solve_traffic(external, matrix):
    """Total (external plus internal) arrival rate at every service.

    A dense solve of ``gamma (I - P) = lam`` is authoritative; the fixed-point
    iteration is only used if the dense solve fails or leaves a residual
    above tolerance.

    Raises:
        UnsolvableNetworkError: spectral radius >= 1 or singular ``I - P``.
    """
    report = validate_routing(matrix)
    P = np.asarray(matrix, dtype=float)
    lam = check_vector(external, report.n, "external arrival rates")
    if not report.solvable:
        raise UnsolvableNetworkError(
            f"spectral radius {report.spectral_radius:.6g} >= 1: some customers never leave"
        )
    iterations = 0
    try:
        gamma = np.linalg.solve((np.eye(report.n) - P).T, lam)
    except np.linalg.LinAlgError:
        gamma = None
    limit = 1e-9 * (1.0 + float(lam.max(initial=0.0)))
    if gamma is None or not np.all(np.isfinite(gamma)) or _residual(gamma, lam, P) > limit:
        gamma, iterations = fixed_point_traffic(lam, P)
    gamma = np.maximum(gamma, 0.0)
    return TrafficSolution(rates=gamma, residual=_residual(gamma, lam, P), iterations=iterations)


@dataclass
class StationSpec:
    """One station in a network description.

    ``servers=None`` marks an infinite-server station.
    """

    servers: Optional[int]
    mean_service: float
    service_kind: str = "exponential"
    service_shape: Optional[float] = None


@dataclass
class NetworkDescription:
    routing: np.ndarray
    external: np.ndarray
    stations: List[StationSpec]
    loss_station: int = 0
    name: str = ""
    simulation: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.stations)

    def solve(self):
        return solve_traffic(self.external, self.routing)

    def to_dict(self):
        doc = {
            "name": self.name,
            "n": self.n,
            "routing": [[float(x) for x in row] for row in self.routing],
            "external": [float(x) for x in self.external],
            "stations": [
                {
                    "servers": s.servers,
                    "mean_service": s.mean_service,
                    "service": {"kind": s.service_kind, "shape": s.service_shape},
                }
                for s in self.stations
            ],
            "loss_station": self.loss_station,
        }
        if self.simulation:
            doc["simulation"] = dict(self.simulation)
        return doc


def network_from_dict(doc):
    """Build a :class:`NetworkDescription` from its JSON document form.

    Raises:
        ConfigError: on missing keys or inconsistent sizes.
    """
    try:
        n = check_count(doc["n"], "n", minimum=1, error=ConfigError)
        flat = doc["routing"]
        stations_doc = doc["stations"]
        external = doc["external"]
    except KeyError as exc:
        raise ConfigError(f"network description is missing {exc.args[0]!r}") from None
    routing = np.asarray(flat, dtype=float)
    if routing.ndim == 1:
        if routing.size != n * n:
            raise ConfigError(f"routing has {routing.size} entries, expected {n * n}")
        routing = routing.reshape(n, n)
    if routing.shape != (n, n):
        raise ConfigError(f"routing has shape {routing.shape}, expected {(n, n)}")
    if len(stations_doc) != n:
        raise ConfigError(f"expected {n} stations, got {len(stations_doc)}")
    stations = []
    for k, st in enumerate(stations_doc):
        servers = st.get("servers")
        if servers is not None:
            servers = check_count(servers, f"stations[{k}].servers", error=ConfigError)
        service = st.get("service") or {}
        stations.append(
            StationSpec(
                servers=servers,
                mean_service=check_real(
                    st.get("mean_service"), f"stations[{k}].mean_service",
                    minimum=0.0, strict=True, error=ConfigError,
                ),
                service_kind=service.get("kind", "exponential"),
                service_shape=service.get("shape"),
            )
        )
    loss = check_count(doc.get("loss_station", 0), "loss_station", error=ConfigError)
    if loss >= n:
        raise ConfigError(f"loss_station {loss} out of range for {n} stations")
    ext = np.asarray(external, dtype=float)
    if ext.shape != (n,):
        raise ConfigError(f"external must have length {n}")
    return NetworkDescription(
        routing=routing,
        external=ext,
        stations=stations,
        loss_station=loss,
        name=str(doc.get("name", "")),
        simulation=dict(doc.get("simulation") or {}),
    )


def load_network(path):
    """Read a JSON network (or scenario) description file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return network_from_dict(doc)
