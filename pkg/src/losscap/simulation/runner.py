"""Discrete-event simulation of loss stations and routing networks.

Customers arrive in Poisson streams. A customer offered to the loss station
while all its servers are busy is lost to the system. Other stations in a
network have unbounded capacity. Statistics are collected at the loss
station only, after a warmup of ``warmup_arrivals`` offered customers.
"""

from bisect import bisect_right
from dataclasses import dataclass, field, replace
from statistics import NormalDist
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .._validation import check_count, check_real
from ..erlang import LossStation, erlang_b
from ..exceptions import ConfigError, UnsolvableNetworkError
from ..network import solve_traffic, validate_routing
from .distributions import ServiceDistribution
from .engine import (
    ARRIVAL,
    ARRIVAL_STREAM,
    DEPARTURE,
    ROUTING_STREAM,
    SERVICE_STREAM,
    BufferedDraws,
    FutureEventList,
    stream,
)

MIN_REPLICATIONS = 10
CONFIDENCE = 0.99
_Z = NormalDist().inv_cdf(0.5 + CONFIDENCE / 2)


def _check_run_lengths(horizon, warmup, replications, seed):
    horizon = check_count(horizon, "horizon_arrivals", minimum=1, error=ConfigError)
    if warmup is None:
        warmup = horizon // 10
    warmup = check_count(warmup, "warmup_arrivals", error=ConfigError)
    if horizon <= warmup:
        raise ConfigError(f"horizon_arrivals={horizon} must exceed warmup_arrivals={warmup}")
    replications = check_count(replications, "replications", minimum=MIN_REPLICATIONS, error=ConfigError)
    seed = check_count(seed, "seed", error=ConfigError)
    if seed >= 2 ** 64:
        raise ConfigError("seed must fit in 64 bits")
    return horizon, warmup, replications, seed


@dataclass(frozen=True)
class SimConfig:
    """Single loss station fed by a Poisson stream.

    ``horizon_arrivals`` and ``warmup_arrivals`` count offered customers per
    replication; ``warmup_arrivals=None`` means 10% of the horizon.
    """

    arrival_rate: float
    servers: int
    service: ServiceDistribution
    horizon_arrivals: int
    warmup_arrivals: Optional[int] = None
    seed: int = 0
    replications: int = 20

    def __post_init__(self):
        object.__setattr__(
            self, "arrival_rate",
            check_real(self.arrival_rate, "arrival_rate", minimum=0.0, strict=True, error=ConfigError),
        )
        object.__setattr__(self, "servers", check_count(self.servers, "servers", error=ConfigError))
        if not isinstance(self.service, ServiceDistribution):
            raise ConfigError("service must be a ServiceDistribution")
        h, w, r, s = _check_run_lengths(self.horizon_arrivals, self.warmup_arrivals, self.replications, self.seed)
        object.__setattr__(self, "horizon_arrivals", h)
        object.__setattr__(self, "warmup_arrivals", w)
        object.__setattr__(self, "replications", r)
        object.__setattr__(self, "seed", s)

    @property
    def station(self):
        return LossStation.from_rate(self.servers, self.arrival_rate, self.service.mean)

    @property
    def rho(self):
        return self.arrival_rate * self.service.mean

    def analytic_blocking(self):
        return erlang_b(self.servers, self.rho)


@dataclass(frozen=True)
class NetworkSimConfig:
    """Open network with one finite loss station; the rest are infinite-server.

    ``stations`` holds ``(servers, service)`` pairs, ``servers=None`` meaning
    unbounded.
    """

    stations: Tuple[Tuple[Optional[int], ServiceDistribution], ...]
    routing: np.ndarray
    external: np.ndarray
    horizon_arrivals: int
    loss_station: int = 0
    warmup_arrivals: Optional[int] = None
    seed: int = 0
    replications: int = 20

    def __post_init__(self):
        stations = tuple((s, d) for s, d in self.stations)
        n = len(stations)
        if n == 0:
            raise ConfigError("network needs at least one station")
        loss = check_count(self.loss_station, "loss_station", error=ConfigError)
        if loss >= n:
            raise ConfigError(f"loss_station {loss} out of range for {n} stations")
        for k, (servers, dist) in enumerate(stations):
            if not isinstance(dist, ServiceDistribution):
                raise ConfigError(f"station {k}: service must be a ServiceDistribution")
            if k == loss:
                if servers is None:
                    raise ConfigError("the loss station needs a finite server count")
                check_count(servers, "loss station servers", error=ConfigError)
            elif servers is not None:
                raise ConfigError(
                    f"station {k} has {servers} servers; only the loss station may be finite"
                )
        P = np.asarray(self.routing, dtype=float)
        if P.shape != (n, n):
            raise ConfigError(f"routing must be {n}x{n}, got {P.shape}")
        lam = np.asarray(self.external, dtype=float)
        if lam.shape != (n,) or np.any(lam < 0) or not np.all(np.isfinite(lam)):
            raise ConfigError("external rates must be a nonnegative vector with one entry per station")
        report = validate_routing(P)
        if not report.solvable:
            raise UnsolvableNetworkError(f"spectral radius {report.spectral_radius:.6g} >= 1")
        if lam.sum() <= 0:
            raise ConfigError("degenerate network: no external arrivals")
        h, w, r, s = _check_run_lengths(self.horizon_arrivals, self.warmup_arrivals, self.replications, self.seed)
        object.__setattr__(self, "stations", stations)
        object.__setattr__(self, "routing", P)
        object.__setattr__(self, "external", lam)
        object.__setattr__(self, "loss_station", loss)
        object.__setattr__(self, "horizon_arrivals", h)
        object.__setattr__(self, "warmup_arrivals", w)
        object.__setattr__(self, "replications", r)
        object.__setattr__(self, "seed", s)

    def traffic(self):
        return solve_traffic(self.external, self.routing)

    @property
    def rho(self):
        gamma = self.traffic().rates[self.loss_station]
        return float(gamma) * self.stations[self.loss_station][1].mean

    def analytic_blocking(self):
        """Erlang loss value with the offered load taken from the traffic equations."""
        return erlang_b(self.stations[self.loss_station][0], self.rho)


@dataclass(frozen=True)
class ReplicationResult:
    offered: int
    admitted: int
    blocked: int
    mean_in_service: float
    time_full: float = 0.0

    @property
    def p_hat(self):
        return self.blocked / self.offered


@dataclass(frozen=True)
class SimEstimate:
    """Blocking estimate at the loss station, pooled over replications."""

    offered: int
    blocked: int
    admitted: int
    p_hat: float
    ci_halfwidth_99: float
    per_replication: List[float]
    mean_in_service: float
    time_full: float = 0.0
    time_full_ci_halfwidth_99: float = 0.0
    replications: List[ReplicationResult] = field(repr=False, default_factory=list)

    @property
    def ci(self):
        return (self.p_hat - self.ci_halfwidth_99, self.p_hat + self.ci_halfwidth_99)

    def covers(self, value):
        lo, hi = self.ci
        return lo <= value <= hi

    @property
    def time_full_ci(self):
        return (self.time_full - self.time_full_ci_halfwidth_99, self.time_full + self.time_full_ci_halfwidth_99)

    def time_full_covers(self, value):
        lo, hi = self.time_full_ci
        return lo <= value <= hi

    def as_dict(self):
        return {
            "offered": self.offered,
            "blocked": self.blocked,
            "admitted": self.admitted,
            "p_hat": self.p_hat,
            "ci_halfwidth_99": self.ci_halfwidth_99,
            "ci_low": self.ci[0],
            "ci_high": self.ci[1],
            "mean_in_service": self.mean_in_service,
            "time_full": self.time_full,
            "time_full_ci_halfwidth_99": self.time_full_ci_halfwidth_99,
            "per_replication": list(self.per_replication),
        }


def _halfwidth(values):
    if len(values) < 2:
        return 0.0
    return float(_Z * np.std(values, ddof=1) / np.sqrt(len(values)))


def _aggregate(results: Sequence[ReplicationResult]) -> SimEstimate:
    per_rep = [r.p_hat for r in results]
    offered = sum(r.offered for r in results)
    blocked = sum(r.blocked for r in results)
    full = [r.time_full for r in results]
    return SimEstimate(
        offered=offered,
        blocked=blocked,
        admitted=sum(r.admitted for r in results),
        p_hat=blocked / offered,
        ci_halfwidth_99=_halfwidth(per_rep),
        per_replication=per_rep,
        mean_in_service=float(np.mean([r.mean_in_service for r in results])),
        time_full=float(np.mean(full)),
        time_full_ci_halfwidth_99=_halfwidth(full),
        replications=list(results),
    )


def _station_replication(config: SimConfig, rep: int) -> ReplicationResult:
    n = config.horizon_arrivals
    warm = config.warmup_arrivals
    c = config.servers
    gaps = stream(config.seed, rep, ARRIVAL_STREAM, 0).exponential(1.0 / config.arrival_rate, n)
    arrivals = np.cumsum(gaps).tolist()
    services = config.service.sample(stream(config.seed, rep, SERVICE_STREAM, 0), n).tolist()

    fel = FutureEventList()
    push, pop = fel.push, fel.pop
    busy = admitted = blocked = 0
    area = full = 0.0
    t_start = last = 0.0
    measuring = False

    push(arrivals[0], ARRIVAL, 0)
    while fel:
        t, kind, idx = pop()
        if measuring:
            dt = t - last
            area += busy * dt
            if busy == c:
                full += dt
            last = t
        if kind == DEPARTURE:
            busy -= 1
            continue
        if idx == warm:
            measuring = True
            t_start = last = t
        s = services[idx]
        if busy < c:
            busy += 1
            push(t + s, DEPARTURE, idx)
            if measuring:
                admitted += 1
        elif measuring:
            blocked += 1
        if idx + 1 == n:
            break
        push(arrivals[idx + 1], ARRIVAL, idx + 1)

    span = last - t_start
    return ReplicationResult(
        offered=n - warm,
        admitted=admitted,
        blocked=blocked,
        mean_in_service=area / span if span > 0 else float(busy),
        time_full=full / span if span > 0 else float(busy == c),
    )


def simulate_loss_station(config: SimConfig) -> SimEstimate:
    """Estimate blocking of a single M/G/c/c station by simulation.

    Identical configurations give bit-identical estimates; replication ``r``
    draws only from the substreams keyed by ``(seed, r)``.
    """
    return _aggregate([_station_replication(config, r) for r in range(config.replications)])


def _network_replication(config: NetworkSimConfig, rep: int) -> ReplicationResult:
    n_st = len(config.stations)
    L = config.loss_station
    c = config.stations[L][0]
    horizon = config.horizon_arrivals
    warm = config.warmup_arrivals
    seed = config.seed

    P = config.routing
    row_total = P.sum(axis=1).tolist()
    cum_rows = [np.cumsum(P[i]).tolist() for i in range(n_st)]
    svc = []
    for k, (_, dist) in enumerate(config.stations):
        g = stream(seed, rep, SERVICE_STREAM, k)
        svc.append(BufferedDraws(lambda size, d=dist, g=g: d.sample(g, size)).next)
    route = BufferedDraws(stream(seed, rep, ROUTING_STREAM, 0).random).next
    arr = [None] * n_st

    fel = FutureEventList()
    push, pop = fel.push, fel.pop
    for k, lam in enumerate(config.external.tolist()):
        if lam > 0:
            g = stream(seed, rep, ARRIVAL_STREAM, k)
            arr[k] = BufferedDraws(lambda size, g=g, scale=1.0 / lam: g.exponential(scale, size)).next
            push(arr[k](), ARRIVAL, k)

    busy = admitted = blocked = offered_total = 0
    area = full = 0.0
    t_start = last = 0.0
    measuring = False
    done = False

    while fel and not done:
        t, kind, k = pop()
        if measuring:
            dt = t - last
            area += busy * dt
            if busy == c:
                full += dt
            last = t
        if kind == DEPARTURE:
            if k == L:
                busy -= 1
            if row_total[k] <= 0:
                continue
            j = bisect_right(cum_rows[k], route())
            if j >= n_st:
                continue
            target = j
        else:
            target = k

        s = svc[target]()
        if target == L:
            idx = offered_total
            offered_total += 1
            if idx == warm:
                measuring = True
                t_start = last = t
            if busy < c:
                busy += 1
                push(t + s, DEPARTURE, L)
                if measuring:
                    admitted += 1
            elif measuring:
                blocked += 1
            if offered_total == horizon:
                done = True
        else:
            push(t + s, DEPARTURE, target)

        if kind == ARRIVAL and not done:
            push(t + arr[k](), ARRIVAL, k)

    if not done:
        raise UnsolvableNetworkError("event list drained before the loss station saw the horizon")
    span = last - t_start
    return ReplicationResult(
        offered=horizon - warm,
        admitted=admitted,
        blocked=blocked,
        mean_in_service=area / span if span > 0 else float(busy),
        time_full=full / span if span > 0 else float(busy == c),
    )


def simulate_network(config: NetworkSimConfig) -> SimEstimate:
    """Estimate blocking at the loss station of a routing network.

    After each service completion a customer moves to station ``j`` with
    probability ``P[i, j]`` or leaves. Customers offered to a full loss
    station leave the network.
    """
    return _aggregate([_network_replication(config, r) for r in range(config.replications)])


@dataclass(frozen=True)
class InsensitivityRow:
    distribution: str
    scv: float
    estimate: SimEstimate
    analytic: float

    @property
    def covered(self):
        return self.estimate.covers(self.analytic)


def insensitivity_experiment(base: SimConfig, kinds: Sequence[ServiceDistribution]) -> List[InsensitivityRow]:
    """Simulate ``base`` once per service distribution and compare to Erlang B.

    All distributions must share the mean of ``base.service``; the analytic
    value depends on nothing else.
    """
    kinds = list(kinds)
    if not kinds:
        raise ConfigError("no distributions given")
    mean = base.service.mean
    for d in kinds:
        if abs(d.mean - mean) > 1e-12 * mean:
            raise ConfigError(f"{d.label()} has mean {d.mean}, expected {mean}")
    analytic = base.analytic_blocking()
    rows = []
    for d in kinds:
        est = simulate_loss_station(replace(base, service=d))
        rows.append(InsensitivityRow(d.label(), d.scv, est, analytic))
    return rows


def network_config_from_description(desc, **overrides) -> NetworkSimConfig:
    """Build a :class:`NetworkSimConfig` from a parsed network/scenario file."""
    sim = {**desc.simulation, **overrides}
    if "horizon_arrivals" not in sim:
        raise ConfigError("scenario needs simulation.horizon_arrivals")
    stations = tuple(
        (st.servers, ServiceDistribution(st.service_kind, st.mean_service, st.service_shape))
        for st in desc.stations
    )
    return NetworkSimConfig(
        stations=stations,
        routing=desc.routing,
        external=desc.external,
        loss_station=desc.loss_station,
        horizon_arrivals=sim["horizon_arrivals"],
        warmup_arrivals=sim.get("warmup_arrivals"),
        seed=sim.get("seed", 0),
        replications=sim.get("replications", 20),
    )
