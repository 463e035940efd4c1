"""
Reading stop-level order exports, deriving loaded and empty legs, and
placing transfer hubs at frequently used highway access points.

The stop export has one row per stop::

    StopNum,OrderNum,StopArrivalDate,StopDepartureDate,Stop,City,ZipCode,Status,Event

with timestamps written day-month-year, e.g. ``2-10-2019 09:01``.
"""

from __future__ import annotations

import csv
import io
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MalformedOrderError, ParseError
from .model import Order

COLUMNS = ("StopNum", "OrderNum", "StopArrivalDate", "StopDepartureDate", "Stop",
           "City", "ZipCode", "Status", "Event")
TIME_FORMAT = "%d-%m-%Y %H:%M"
MISSING = "NaN"


class UnknownCodeWarning(UserWarning):
    """A status or event code outside the configured code map."""


@dataclass(frozen=True)
class StopRecord:
    stop_number: str
    order_number: str
    arrival: datetime
    departure: datetime
    stop_seq: int
    city: str
    zip_code: str
    status: str | None
    event: str | None

    @property
    def location(self) -> str:
        return self.zip_code


@dataclass(frozen=True)
class CodeMap:
    """How status and event codes translate into loaded / empty movement.

    ``status`` maps the arrival status to True (arrived loaded) or False
    (arrived empty). ``event`` is consulted only when the status is missing.
    ``delivery_events`` mark stops where freight is handed to the customer.
    """

    status: Mapping[str, bool] = field(default_factory=lambda: {"LD": True, "MT": False})
    event: Mapping[str, bool] = field(default_factory=lambda: {
        "LLD": True, "LUL": True, "HPL": True, "DRL": True, "DMT": False})
    delivery_events: frozenset = frozenset({"LUL", "DRL"})

    @classmethod
    def from_csv(cls, text: str) -> "CodeMap":
        """Read ``kind,code,loaded[,delivery]`` rows (kind is status or event)."""
        status, event, delivery = {}, {}, set()
        for row in csv.DictReader(io.StringIO(text)):
            loaded = row["loaded"].strip().lower() in ("1", "true", "yes", "loaded")
            target = status if row["kind"].strip().lower() == "status" else event
            target[row["code"].strip()] = loaded
            if row.get("delivery", "").strip().lower() in ("1", "true", "yes"):
                delivery.add(row["code"].strip())
        return cls(status, event, frozenset(delivery))


@dataclass(frozen=True)
class Leg:
    origin: str
    destination: str
    from_seq: int
    to_seq: int
    loaded: bool


@dataclass(frozen=True)
class DerivedOrder:
    order: Order
    loaded_legs: tuple[Leg, ...]
    empty_legs: tuple[Leg, ...]
    challenging: bool
    corrected: bool = False

    def __iter__(self):
        return iter((self.order, self.loaded_legs, self.empty_legs))


@dataclass(frozen=True)
class AccessPointHistogram:
    counts: Mapping

    def __post_init__(self):
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("access point counts must be >= 0")

    @classmethod
    def from_csv(cls, text: str) -> "AccessPointHistogram":
        rows = csv.DictReader(io.StringIO(text))
        return cls({r["location"]: int(r["count"]) for r in rows})


def _parse_time(value: str, line: int) -> datetime:
    try:
        return datetime.strptime(value.strip(), TIME_FORMAT)
    except ValueError:
        raise ParseError(f"row {line}: unparseable timestamp {value!r}") from None


def _format_time(t: datetime) -> str:
    return f"{t.day}-{t.month}-{t.year} {t:%H:%M}"


def _code(value: str) -> str | None:
    value = value.strip()
    return None if value in ("", MISSING) else value


def parse_stop_records(text: str) -> list[StopRecord]:
    """Parse a stop export into records grouped by order and ordered by stop.

    Raises:
        ParseError: a required column is missing or a timestamp is unreadable.
        MalformedOrderError: an order's stop numbers are not 1..n.
    """
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in COLUMNS:
        if col not in header:
            raise ParseError(f"missing column {col}")
    records = []
    for line, row in enumerate(reader, start=2):
        try:
            seq = int(row["Stop"])
        except ValueError:
            raise ParseError(f"row {line}: bad Stop value {row['Stop']!r}") from None
        arrival = _parse_time(row["StopArrivalDate"], line)
        departure = _parse_time(row["StopDepartureDate"], line)
        if departure < arrival:
            raise ParseError(f"row {line}: departure before arrival")
        records.append(StopRecord(row["StopNum"].strip(), row["OrderNum"].strip(), arrival,
                                  departure, seq, row["City"].strip(), row["ZipCode"].strip(),
                                  _code(row["Status"]), _code(row["Event"])))

    records.sort(key=lambda r: (r.order_number, r.stop_seq))
    for order, stops in _group(records).items():
        if [s.stop_seq for s in stops] != list(range(1, len(stops) + 1)):
            raise MalformedOrderError(order, "stop sequence is not 1..n")
    return records


def write_stop_records(records: Iterable[StopRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([r.stop_number, r.order_number, _format_time(r.arrival),
                    _format_time(r.departure), r.stop_seq, r.city, r.zip_code,
                    r.status or MISSING, r.event or MISSING])
    return buf.getvalue()


def _group(records: Iterable[StopRecord]) -> dict[str, list[StopRecord]]:
    groups = defaultdict(list)
    for r in records:
        groups[r.order_number].append(r)
    return dict(groups)


def _arrives_loaded(stop: StopRecord, codes: CodeMap) -> bool:
    if stop.status is not None:
        if stop.status in codes.status:
            return codes.status[stop.status]
        warnings.warn(f"unknown status code {stop.status!r} at stop {stop.stop_number}",
                      UnknownCodeWarning, stacklevel=3)
    if stop.event is not None:
        if stop.event in codes.event:
            return codes.event[stop.event]
        warnings.warn(f"unknown event code {stop.event!r} at stop {stop.stop_number}",
                      UnknownCodeWarning, stacklevel=3)
    return True


def derive_orders(records: Sequence[StopRecord], codes: CodeMap | None = None,
                  location_ids: Mapping[str, int] | None = None) -> list[DerivedOrder]:
    """Split every order into loaded and empty legs.

    A leg is empty when the truck arrives empty at its end stop. When a truck
    returns to its first stop after only making deliveries, the return leg is
    taken to be empty even if the data says otherwise. An order with one
    loaded delivery leg followed by an empty return is flagged challenging.

    Pickup times are minutes after the earliest first-stop departure in the
    input. ``location_ids`` translates location keys (zip codes) into network
    ids; without it the keys are enumerated in order of first appearance.

    Raises:
        MalformedOrderError: an order has fewer than two stops, or never
            leaves its first location.
    """
    codes = codes or CodeMap()
    groups = _group(records)
    if not groups:
        return []
    t0 = min(stops[0].departure for stops in groups.values())
    if location_ids is None:
        location_ids = {}
        for r in records:
            location_ids.setdefault(r.location, len(location_ids))

    out = []
    for number, stops in groups.items():
        stops = sorted(stops, key=lambda s: s.stop_seq)
        if len(stops) < 2:
            raise MalformedOrderError(number, "fewer than two stops")
        legs = [Leg(a.location, b.location, a.stop_seq, b.stop_seq, _arrives_loaded(b, codes))
                for a, b in zip(stops, stops[1:])]

        corrected = False
        returns = stops[-1].location == stops[0].location
        only_deliveries = all(s.event in codes.delivery_events for s in stops[1:-1])
        if returns and only_deliveries and len(stops) > 2 \
                and stops[-1].event not in codes.delivery_events and legs[-1].loaded:
            legs[-1] = Leg(legs[-1].origin, legs[-1].destination, legs[-1].from_seq,
                           legs[-1].to_seq, False)
            corrected = True

        loaded = tuple(l for l in legs if l.loaded)
        empty = tuple(l for l in legs if not l.loaded)
        challenging = len(legs) == 2 and legs[0].loaded and not legs[1].loaded and returns
        last_loaded = loaded[-1].destination if loaded else stops[-1].location
        origin, destination = location_ids[stops[0].location], location_ids[last_loaded]
        if origin == destination:
            others = [location_ids[s.location] for s in stops if location_ids[s.location] != origin]
            if not others:
                raise MalformedOrderError(number, "all stops at one location")
            destination = others[0]
        pickup = int((stops[0].departure - t0).total_seconds() // 60)
        out.append(DerivedOrder(Order(number, origin, destination, pickup), loaded, empty,
                                challenging, corrected))
    return out


def place_hubs(hist: AccessPointHistogram, k: int, min_separation: float, distance) -> list:
    """Greedily pick up to k busiest access points that are pairwise far enough apart.

    ``distance[a][b]`` must give the distance between candidates a and b.
    Candidates are visited by decreasing count, ties by lowest id; a candidate
    is kept if it is at least ``min_separation`` from every hub kept so far.
    Fewer than k hubs are returned when candidates run out.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    chosen = []
    for loc in sorted(hist.counts, key=lambda c: (-hist.counts[c], c)):
        if all(distance[loc][h] >= min_separation for h in chosen):
            chosen.append(loc)
            if len(chosen) == k:
                break
    return chosen


def read_matrix_csv(text: str) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Read ``location,location,miles,minutes`` rows into square matrices.

    Returns the location keys in first-seen order, the mileage matrix and the
    travel time matrix. Missing off-diagonal pairs raise ParseError.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if rows and not rows[0][2].strip().lstrip("-").isdigit():
        rows = rows[1:]
    keys: dict[str, int] = {}
    for a, b, *_ in rows:
        keys.setdefault(a.strip(), len(keys))
        keys.setdefault(b.strip(), len(keys))
    n = len(keys)
    miles = np.full((n, n), -1, dtype=np.int64)
    minutes = np.full((n, n), -1, dtype=np.int64)
    for line, (a, b, mi, mn) in enumerate(rows, start=1):
        try:
            miles[keys[a.strip()], keys[b.strip()]] = int(mi)
            minutes[keys[a.strip()], keys[b.strip()]] = int(mn)
        except ValueError:
            raise ParseError(f"matrix row {line}: non-integer value") from None
    np.fill_diagonal(miles, 0)
    np.fill_diagonal(minutes, 0)
    if (miles < 0).any() or (minutes < 0).any():
        raise ParseError("distance matrix is incomplete")
    return list(keys), miles, minutes
