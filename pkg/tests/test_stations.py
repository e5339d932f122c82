import pytest

from src.constellation.stations import StationSet
from src.exceptions import UnknownStationError


def test_shipped_dataset(stations):
    assert len(stations) == 60
    assert stations.index_of("NYC") == 0
    assert stations.index_of("Singapore") == 12
    assert stations[0].name == "NYC"
    assert stations.coords[0].lat == pytest.approx(40.7128)


def test_unknown_name(stations):
    with pytest.raises(UnknownStationError):
        stations.index_of("Atlantis")


def test_bad_header(tmp_path):
    path = tmp_path / "stations.csv"
    path.write_text("city,lat,lon\nA,0,0\n")
    with pytest.raises(ValueError):
        StationSet.from_csv(path)


def test_duplicate_names(tmp_path):
    path = tmp_path / "stations.csv"
    path.write_text("name,lat_deg,lon_deg\nA,0,0\nA,1,1\n")
    with pytest.raises(ValueError):
        StationSet.from_csv(path)


def test_latitude_out_of_range(tmp_path):
    path = tmp_path / "stations.csv"
    path.write_text("name,lat_deg,lon_deg\nA,95,0\n")
    with pytest.raises(ValueError):
        StationSet.from_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        StationSet.from_csv(tmp_path / "missing.csv")
