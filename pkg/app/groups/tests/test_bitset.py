"""
Tests for packed bitsets
"""
import numpy as np
from django.test import SimpleTestCase

from groups.bitset import Bitset, pack, rows_intersect, unpack


class BitsetTests(SimpleTestCase):
    """Tests for Bitset"""

    def test_from_indices(self):
        """Test word count and members across word boundaries"""
        bits = Bitset.from_indices(130, [0, 63, 64, 129])

        self.assertEqual(len(bits.words), 3)
        self.assertEqual(bits.count(), 4)
        np.testing.assert_array_equal(
            np.flatnonzero(unpack(bits.words, 130)), [0, 63, 64, 129])

    def test_out_of_range(self):
        """Test indices outside the width raise IndexError"""
        with self.assertRaises(IndexError):
            Bitset.from_indices(10, [10])

    def test_intersects(self):
        """Test intersection of two sets"""
        a = Bitset.from_indices(100, [1, 70])
        b = Bitset.from_indices(100, [70, 99])
        c = Bitset.from_indices(100, [2])

        self.assertTrue(a.intersects(b))
        self.assertFalse(a.intersects(c))
        self.assertEqual(len(a), 2)

    def test_pack_unpack(self):
        """Test a boolean mask comes back from its packed words"""
        mask = np.zeros(77, dtype=bool)
        mask[[3, 76]] = True

        self.assertEqual(Bitset(77, pack(mask)),
                         Bitset.from_indices(77, [3, 76]))
        np.testing.assert_array_equal(unpack(pack(mask), 77), mask)

    def test_rows_intersect(self):
        """Test the row-wise intersection used by the Saxl check"""
        rows = np.zeros((3, 70), dtype=bool)
        rows[0, 5] = True
        rows[1, 69] = True
        rows[2, 6] = True
        target = Bitset.from_indices(70, [5, 69])

        np.testing.assert_array_equal(rows_intersect(pack(rows), target.words),
                                      [True, True, False])
