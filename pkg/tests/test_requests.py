from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from src.exceptions import UnknownStationError
from src.network.requests import (
    MAX_VALUE,
    MIN_VALUE,
    Request,
    generate_requests,
    load_batch_file,
    parse_batch_lines,
)
from src.utils.rng import CounterRng, hash_ints, mix64

from conftest import INPUT_DIR


def test_mix64_matches_splitmix64():
    # First output of the reference SplitMix64 generator seeded with 0.
    assert mix64(0) == 0xE220A8397B1DCDAF


def test_counter_rng_is_reproducible():
    a, b = CounterRng(42), CounterRng(42)
    assert [a.draw() for _ in range(10)] == [b.draw() for _ in range(10)]
    assert CounterRng(43).draw() != CounterRng(42).draw()


def test_counter_rng_ranges():
    rng = CounterRng(5)
    values = [rng.integers(1, 5) for _ in range(500)]
    assert set(values) == {1, 2, 3, 4, 5}
    with pytest.raises(ValueError):
        rng.uniform(0)


def test_hash_ints_depends_on_order():
    assert hash_ints(7, 1, 2) != hash_ints(7, 2, 1)
    assert hash_ints(7, 1, 2) == hash_ints(7, 1, 2)


def test_same_seed_same_batch():
    assert generate_requests(2024, 20, 60) == generate_requests(2024, 20, 60)
    assert generate_requests(2024, 20, 60) != generate_requests(2025, 20, 60)


def test_generated_requests_are_valid():
    requests = generate_requests(11, 200, 60)
    assert [r.index for r in requests] == list(range(200))
    for r in requests:
        assert 0 <= r.src < 60 and 0 <= r.dst < 60
        assert r.src != r.dst
        assert MIN_VALUE <= r.demand <= MAX_VALUE
        assert MIN_VALUE <= r.reward <= MAX_VALUE


def test_shorter_batch_is_a_prefix():
    assert generate_requests(9, 10, 60) == generate_requests(9, 30, 60)[:10]


def test_two_stations_always_pair_up():
    for r in generate_requests(3, 50, 2):
        assert {r.src, r.dst} == {0, 1}


@pytest.mark.parametrize("n,stations", [(0, 10), (5, 1)])
def test_generate_rejects_bad_arguments(n, stations):
    with pytest.raises(ValueError):
        generate_requests(1, n, stations)


@pytest.mark.parametrize("args", [(3, 3, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0)])
def test_request_validation(args):
    with pytest.raises(ValueError):
        Request(*args)


def test_parse_batch_lines(stations):
    lines = ["# header", "", "NYC Singapore 1 1", "  Madrid   Sydney 2 3  "]
    requests = parse_batch_lines(lines, stations)
    assert requests == [
        Request(stations.index_of("NYC"), stations.index_of("Singapore"), 1, 1, index=0),
        Request(stations.index_of("Madrid"), stations.index_of("Sydney"), 2, 3, index=1),
    ]


def test_unknown_stations_are_all_listed(stations):
    with pytest.raises(UnknownStationError) as info:
        parse_batch_lines(["NYC Atlantis 1 1", "Gotham Paris 1 1", "Atlantis Paris 1 1"], stations)
    assert info.value.names == ["Atlantis", "Gotham"]


@pytest.mark.parametrize("line", ["NYC Singapore 1", "NYC Singapore one 1"])
def test_malformed_lines(stations, line):
    with pytest.raises(ValueError):
        parse_batch_lines([line], stations)


def test_load_shipped_batch(stations):
    requests = load_batch_file(INPUT_DIR / "batch_example.txt", stations)
    assert len(requests) == 3
    assert requests[1].demand == 2 and requests[1].reward == 3
    assert requests[2].src == stations.index_of("London")


def test_missing_batch_file(stations, tmp_path):
    with pytest.raises(FileNotFoundError):
        load_batch_file(tmp_path / "nope.txt", stations)


@pytest.mark.parametrize(
    "field, categories",
    [("demand", range(1, 6)), ("reward", range(1, 6)), ("src", range(60)), ("dst", range(60))],
)
def test_draws_are_uniform(field, categories):
    requests = generate_requests(31337, 20000, 60)
    counts = Counter(getattr(r, field) for r in requests)
    observed = [counts[c] for c in categories]
    assert sum(observed) == len(requests)
    assert chisquare(observed).pvalue > 0.001


def test_mean_demand_of_a_thousand_requests():
    demands = [r.demand for r in generate_requests(4242, 1000, 60)]
    assert 2.8 <= np.mean(demands) <= 3.2


def test_ratio_is_exact():
    assert Request(0, 1, 3, 2).ratio == Fraction(2, 3)
    assert Request(0, 1, 3, 1).ratio < Request(0, 1, 2, 1).ratio
    assert Request(0, 1, 2, 4).ratio == Request(1, 0, 1, 2).ratio
