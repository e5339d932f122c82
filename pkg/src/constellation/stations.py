"""Ground-station dataset loader.

The dataset is a CSV file with header ``name,lat_deg,lon_deg`` and one row
per station. Row order defines the ground index ``g`` (and therefore the
canonical node id) of each station.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Union

import pandas as pd

from src.constellation.geometry import GeoCoord
from src.exceptions import UnknownStationError

logger = logging.getLogger(__name__)

STATION_COLUMNS = ["name", "lat_deg", "lon_deg"]


@dataclass(frozen=True)
class Station:
    """A named ground station."""

    name: str
    geo: GeoCoord


class StationSet:
    """Ordered, name-addressable collection of ground stations.

    Example:
        >>> stations = StationSet.from_csv("input/stations.csv")
        >>> stations.index_of("Singapore")
        12
    """

    def __init__(self, stations: Sequence[Station]):
        self.stations: List[Station] = list(stations)
        self._by_name: Dict[str, int] = {}
        for g, station in enumerate(self.stations):
            if station.name in self._by_name:
                raise ValueError(f"Duplicate station name: {station.name}")
            self._by_name[station.name] = g

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "StationSet":
        """Load stations from a ``name,lat_deg,lon_deg`` CSV file.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ValueError: If the header or any coordinate is invalid.
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Stations file not found: {path}")

        frame = pd.read_csv(path, dtype={"name": str}, skipinitialspace=True)
        if list(frame.columns) != STATION_COLUMNS:
            raise ValueError(
                f"Stations CSV header must be {','.join(STATION_COLUMNS)}, "
                f"found {','.join(map(str, frame.columns))}"
            )
        if frame.empty:
            raise ValueError(f"Stations CSV has no rows: {path}")

        stations = [
            Station(str(row.name).strip(), GeoCoord(float(row.lat_deg), float(row.lon_deg)))
            for row in frame.itertuples(index=False)
        ]
        logger.info(f"Loaded {len(stations)} ground stations from {path}")
        return cls(stations)

    def __len__(self) -> int:
        return len(self.stations)

    def __iter__(self) -> Iterator[Station]:
        return iter(self.stations)

    def __getitem__(self, g: int) -> Station:
        return self.stations[g]

    @property
    def coords(self) -> List[GeoCoord]:
        return [s.geo for s in self.stations]

    @property
    def names(self) -> List[str]:
        return [s.name for s in self.stations]

    def index_of(self, name: str) -> int:
        """Ground index of a station by name.

        Raises:
            UnknownStationError: If the name is not in the dataset.
        """
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownStationError([name]) from None

    def resolve(self, names: Sequence[str]) -> List[int]:
        """Resolve several names at once, reporting every unknown one.

        Raises:
            UnknownStationError: Listing all names that did not resolve.
        """
        unknown = [n for n in names if n not in self._by_name]
        if unknown:
            raise UnknownStationError(dict.fromkeys(unknown))
        return [self._by_name[n] for n in names]
