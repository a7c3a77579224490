import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsme.bits import BitString, IndexSet, concat_all


def bitstrings(max_len=16):
    return st.integers(0, max_len).flatmap(
        lambda n: st.integers(0, (1 << n) - 1 if n else 0).map(lambda v: BitString(n, v))
    )


def index_sets(max_ground=16):
    return st.integers(0, max_ground).flatmap(
        lambda g: st.lists(st.integers(0, g - 1), unique=True, max_size=g).map(
            lambda idx: IndexSet(g, sorted(idx))
        )
        if g
        else st.just(IndexSet(0))
    )


class TestBitStringConstruction:
    def test_zeros_ones(self):
        assert BitString.zeros(5).to_int() == 0
        assert BitString.ones(5).to_int() == 31
        assert BitString.zeros(0).length == 0

    def test_value_out_of_range(self):
        with pytest.raises(ValueError):
            BitString(3, 8)
        with pytest.raises(ValueError):
            BitString(3, -1)
        with pytest.raises(ValueError):
            BitString(-1, 0)

    def test_immutable(self):
        x = BitString(4, 0b1010)
        with pytest.raises(AttributeError):
            x._value = 3

    def test_from_bits_order(self):
        # first element of the iterable is bit 0
        x = BitString.from_bits([1, 0, 0, 1])
        assert x.bit(0) == 1 and x.bit(3) == 1
        assert x.to_int() == 0b1001

    def test_from_str_leftmost_is_bit_zero(self):
        x = BitString.from_str("1000")
        assert x.to_int() == 1
        assert x.to_str() == "1000"

    def test_str_roundtrip(self):
        for v in range(16):
            x = BitString(4, v)
            assert BitString.from_str(x.to_str()) == x

    def test_bytes_little_endian(self):
        # bit 0 is the least significant bit of the first byte
        assert BitString.from_str("10000001").to_bytes() == b"\x81"
        assert BitString(12, 0x5A3).to_bytes() == b"\xa3\x05"

    def test_from_bytes_rejects_padding(self):
        with pytest.raises(ValueError):
            BitString.from_bytes(b"\xff", 4)
        with pytest.raises(ValueError):
            BitString.from_bytes(b"\x01\x01", 8)
        assert BitString.from_bytes(b"\x0f", 4) == BitString(4, 15)

    @given(bitstrings())
    def test_bytes_roundtrip(self, x):
        assert BitString.from_bytes(x.to_bytes(), x.length) == x

    def test_random_uses_rng(self):
        a = BitString.random(40, random.Random(1))
        b = BitString.random(40, random.Random(1))
        c = BitString.random(40, random.Random(2))
        assert a == b and a != c


class TestBitStringOps:
    def test_xor_length_mismatch(self):
        with pytest.raises(ValueError):
            BitString(3, 1) ^ BitString(4, 1)

    @given(bitstrings())
    def test_xor_self_is_zero(self, x):
        assert (x ^ x) == BitString.zeros(x.length)

    @given(bitstrings(), st.data())
    def test_hamming_is_xor_weight(self, x, data):
        y = data.draw(st.integers(0, (1 << x.length) - 1 if x.length else 0))
        y = BitString(x.length, y)
        assert x.hamming(y) == (x ^ y).weight()

    def test_weight(self):
        assert BitString(8, 0b10110001).weight() == 4

    def test_lex_key_orders_like_strings(self):
        # lex_key sorts bit strings the way their display strings sort
        for m in (3, 4):
            xs = [BitString(m, v) for v in range(1 << m)]
            by_key = sorted(xs, key=lambda x: x.lex_key())
            by_str = sorted(xs, key=lambda x: x.to_str())
            assert by_key == by_str

    def test_flip(self):
        x = BitString(4, 0b0101)
        assert x.flip(1) == BitString(4, 0b0111)
        assert x.flip(1).flip(1) == x
        with pytest.raises(IndexError):
            x.flip(4)

    def test_slice_and_concat(self):
        x = BitString.from_str("101100")
        assert x.slice_bits(1, 3).to_str() == "011"
        assert x.slice_bits(0, 6) == x
        with pytest.raises(ValueError):
            x.slice_bits(4, 3)

    @given(bitstrings(8), bitstrings(8))
    def test_concat_slices_back(self, a, b):
        joint = a.concat(b)
        assert joint.length == a.length + b.length
        assert joint.slice_bits(0, a.length) == a
        assert joint.slice_bits(a.length, b.length) == b

    def test_concat_all(self):
        parts = [BitString.from_str("10"), BitString.from_str("01"), BitString.from_str("1")]
        assert concat_all(parts).to_str() == "10011"
        assert concat_all([]).length == 0

    def test_restrict_keeps_order(self):
        x = BitString.from_str("10110")
        s = IndexSet(5, (0, 2, 3))
        assert x.restrict(s).to_str() == "111"

    def test_restrict_ground_mismatch(self):
        with pytest.raises(ValueError):
            BitString(4, 0).restrict(IndexSet(5, (0,)))

    @given(bitstrings(12), st.data())
    def test_restrict_bit_by_bit(self, x, data):
        if x.length == 0:
            idx = []
        else:
            idx = data.draw(st.lists(st.integers(0, x.length - 1), unique=True))
        s = IndexSet(x.length, sorted(idx))
        r = x.restrict(s)
        assert r.length == len(idx)
        for j, pos in enumerate(s):
            assert r.bit(j) == x.bit(pos)

    def test_eq_hash_respect_length(self):
        assert BitString(3, 1) != BitString(4, 1)
        assert BitString(3, 1) == BitString(3, 1)
        assert hash(BitString(3, 1)) != hash(BitString(4, 1))
        assert BitString(3, 1) != "001"

    def test_iter_len(self):
        x = BitString.from_str("110")
        assert list(x) == [1, 1, 0]
        assert len(x) == 3


class TestIndexSet:
    def test_init_requires_strictly_increasing(self):
        with pytest.raises(ValueError):
            IndexSet(5, (2, 1))
        with pytest.raises(ValueError):
            IndexSet(5, (1, 1))
        with pytest.raises(ValueError):
            IndexSet(5, (5,))
        with pytest.raises(ValueError):
            IndexSet(5, (-1,))

    def test_from_iterable_sorts_and_dedups(self):
        s = IndexSet.from_iterable(6, [4, 1, 4, 2])
        assert s.indices == (1, 2, 4)

    def test_full_and_empty(self):
        assert IndexSet.full(3).indices == (0, 1, 2)
        assert len(IndexSet(3)) == 0
        assert len(IndexSet(0)) == 0

    @given(index_sets())
    def test_mask_roundtrip(self, s):
        assert IndexSet.from_mask(s.to_mask()) == s
        assert s.to_mask().length == s.ground

    def test_mask_values(self):
        assert IndexSet(4, (0, 2)).to_mask().to_str() == "1010"

    @given(index_sets(12), st.data())
    def test_intersect_matches_set_intersection(self, a, data):
        idx = data.draw(st.lists(st.integers(0, a.ground - 1), unique=True)) if a.ground else []
        b = IndexSet(a.ground, sorted(idx))
        assert set(a.intersect(b)) == set(a) & set(b)

    def test_intersect_ground_mismatch(self):
        with pytest.raises(ValueError):
            IndexSet(4).intersect(IndexSet(5))

    def test_positions_within(self):
        sup = IndexSet(10, (1, 3, 4, 7, 9))
        sub = IndexSet(10, (3, 9))
        rel = sub.positions_within(sup)
        assert rel.ground == 5
        assert rel.indices == (1, 4)

    def test_positions_within_rejects_non_member(self):
        sup = IndexSet(10, (1, 3))
        with pytest.raises(ValueError):
            IndexSet(10, (2,)).positions_within(sup)

    @given(index_sets(12), st.data())
    def test_select_inverts_positions_within(self, sup, data):
        pick = data.draw(st.lists(st.sampled_from(sup.indices), unique=True)) if len(sup) else []
        sub = IndexSet(sup.ground, sorted(pick))
        rel = sub.positions_within(sup)
        assert sup.select(rel) == sub

    def test_select_ground_check(self):
        sup = IndexSet(10, (1, 3, 5))
        with pytest.raises(ValueError):
            sup.select(IndexSet(2, (0,)))

    def test_contains(self):
        s = IndexSet(10, (1, 5, 8))
        assert 5 in s and 4 not in s

    def test_eq_hash(self):
        assert IndexSet(5, (1,)) == IndexSet(5, (1,))
        assert IndexSet(5, (1,)) != IndexSet(6, (1,))
        assert hash(IndexSet(5, (1,))) == hash(IndexSet(5, (1,)))
        assert IndexSet(5, (1,)) != (1,)
