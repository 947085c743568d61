import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypersat.codes import (EdgeColoring, HammingCode, cached_coloring, code_neighbor, coloring_path,
                            count_monochromatic, cycle_count, enumerate_short_cycles, find_coloring,
                            hamming_code, is_codeword, read_code, read_coloring, syndrome, syndrome_table,
                            verify_coloring, verify_coloring_slow, verify_perfect_code, weight_coloring,
                            write_code, write_coloring)
from hypersat.grid import GridSpace


@pytest.mark.parametrize("t,size", [(1, 1), (2, 2), (3, 16), (4, 2048)])
def test_hamming_sizes(t, size):
    code = hamming_code(t)
    assert len(code.members) == size
    if t <= 3:
        assert verify_perfect_code(code)


def test_non_codes_rejected():
    assert not verify_perfect_code(HammingCode(2, frozenset({0, 3})))
    assert not verify_perfect_code(HammingCode(2, frozenset({0, 1})))


def test_syndrome_table_matches_scalar():
    tab = syndrome_table(7)
    assert all(tab[x] == syndrome(x) for x in range(128))


@given(st.integers(0, 2**31 - 1))
def test_code_neighbor_is_unique_close_codeword(x):
    c = code_neighbor(x)
    assert is_codeword(c)
    assert bin(c ^ x).count("1") <= 1
    # only meaningful inside Q_{2^t-1}: check the word fits a code length
    n = max(x.bit_length(), 1)
    length = 1
    while length < n:
        length = 2 * length + 1
    assert c < 2**length


@pytest.mark.parametrize("s", range(2, 8))
def test_cycle_enumeration_counts(s):
    sp = GridSpace.cube(s)
    for length in (4, 6):
        cycles = list(enumerate_short_cycles(s, length))
        assert len(cycles) == cycle_count(s, length)
        assert len({tuple(c) for c in cycles}) == len(cycles)
        for c in cycles[:50]:
            deg = {}
            for e in c:
                for v in sp.endpoints(e):
                    deg[v] = deg.get(v, 0) + 1
            assert len(deg) == length and set(deg.values()) == {2}


def test_cycle_counts_quoted():
    assert (cycle_count(4, 4), cycle_count(4, 6)) == (24, 128)
    assert (cycle_count(6, 4), cycle_count(6, 6)) == (240, 2560)


def test_monochromatic_square_detected():
    col = EdgeColoring(3, np.zeros(12, dtype=np.uint8))
    assert not verify_coloring(col) and not verify_coloring_slow(col)
    assert count_monochromatic(col) == cycle_count(3, 4) + cycle_count(3, 6)


@given(st.integers(2, 6), st.data())
def test_fast_and_slow_verifiers_agree(s, data):
    n = s * 2 ** (s - 1)
    colors = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    col = EdgeColoring(s, np.array(colors, dtype=np.uint8))
    assert verify_coloring(col) == verify_coloring_slow(col)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 6])
def test_find_coloring_local(s):
    col = find_coloring(s, seed=0, budget=60, method="local")
    assert verify_coloring_slow(col)


def test_find_coloring_deterministic():
    a = find_coloring(5, seed=3, budget=60)
    b = find_coloring(5, seed=3, budget=60)
    assert np.array_equal(a.colors, b.colors)


@pytest.mark.parametrize("abc", [(0, 1, 2), (0, 2, 1), (1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 1)])
def test_weight_colorings_valid(abc):
    for s in (4, 6, 8):
        assert verify_coloring(EdgeColoring(s, weight_coloring(s, *abc)))


def test_weight_colorings_invalid():
    assert not verify_coloring(EdgeColoring(4, weight_coloring(4, 0, 0, 0)))


def test_family_search_q12():
    col = find_coloring(12, seed=0, budget=120, method="family")
    assert count_monochromatic(col) == 0


def test_color_of_matches_edge_id():
    sp = GridSpace.cube(5)
    col = EdgeColoring(5, np.arange(80) % 3)
    for e in sp.edges():
        u, v = sp.endpoints(e)
        assert col.color_of(u, v) == col.color(e)


def test_coloring_file_roundtrip(tmp_path):
    col = find_coloring(4, seed=1)
    path = coloring_path(tmp_path, 4, 1)
    write_coloring(col, path)
    back = read_coloring(path)
    assert np.array_equal(back.colors, col.colors) and back.seed == 1
    again = cached_coloring(4, 1, cache_dir=tmp_path)
    assert np.array_equal(again.colors, col.colors)


def test_cached_coloring_rejects_corrupt_file(tmp_path):
    write_coloring(EdgeColoring(3, np.zeros(12, dtype=np.uint8), 0), coloring_path(tmp_path, 3, 0))
    with pytest.raises(ValueError):
        cached_coloring(3, 0, cache_dir=tmp_path)


def test_code_file_roundtrip(tmp_path):
    code = hamming_code(3)
    write_code(code, tmp_path / "c.txt")
    assert read_code(tmp_path / "c.txt") == code
