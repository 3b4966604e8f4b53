"""Future-event list and reproducible random streams.

Every random quantity comes from numpy's PCG64 bit generator seeded by a
``SeedSequence(seed, spawn_key=(replication, purpose, station))``. The
spawn key makes streams for different replications, purposes and stations
independent, and the result does not depend on the platform.
"""

import heapq

import numpy as np

ARRIVAL_STREAM = 0
SERVICE_STREAM = 1
ROUTING_STREAM = 2

ARRIVAL = 0
DEPARTURE = 1


def stream(seed, replication, purpose, station=0):
    """Generator for one (replication, purpose, station) substream."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication), int(purpose), int(station)))
    return np.random.Generator(np.random.PCG64(ss))


class FutureEventList:
    """Events ordered by ``(time, sequence)``.

    The insertion counter breaks ties between simultaneous events, so the
    processing order is fully determined by the inputs.
    """

    __slots__ = ("_heap", "_seq")

    def __init__(self):
        self._heap = []
        self._seq = 0

    def push(self, time, kind, payload):
        heapq.heappush(self._heap, (time, self._seq, kind, payload))
        self._seq += 1

    def pop(self):
        time, _, kind, payload = heapq.heappop(self._heap)
        return time, kind, payload

    def __len__(self):
        return len(self._heap)

    def __bool__(self):
        return bool(self._heap)


class BufferedDraws:
    """Draw from a sampler in blocks and hand out Python floats one at a time.

    Consuming values one by one gives exactly the sequence a single large
    draw would have produced.
    """

    __slots__ = ("_draw", "_block", "_buf", "_pos")

    def __init__(self, draw, block=4096):
        self._draw = draw
        self._block = block
        self._buf = []
        self._pos = 0

    def next(self):
        if self._pos >= len(self._buf):
            self._buf = self._draw(self._block).tolist()
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return value
