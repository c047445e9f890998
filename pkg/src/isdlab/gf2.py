"""Packed GF(2) vectors and matrices.

A vector of length n is stored as a Python integer whose bit i is
coordinate i; Python's arbitrary precision integers give packed words with
fast XOR and popcount.  A matrix is a tuple of such row integers.
Everything here is immutable.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _bits_to_int(bits):
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size == 0:
        return 0
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _int_to_bits(value, length):
    nbytes = (length + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length]


def _rows_to_array(rows, ncols):
    if not rows:
        return np.zeros((0, ncols), dtype=np.uint8)
    nbytes = (ncols + 7) // 8
    raw = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8)
    return np.unpackbits(raw.reshape(len(rows), nbytes), axis=1, bitorder="little")[:, :ncols]


def _array_to_rows(arr):
    arr = np.asarray(arr, dtype=np.uint8)
    if arr.shape[1] == 0:
        return tuple(0 for _ in range(arr.shape[0]))
    packed = np.packbits(arr, axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


@dataclass(frozen=True)
class BitVector:
    """Binary vector of fixed length; bit i of ``value`` is coordinate i."""

    length: int
    value: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.value < 0 or self.value >> self.length:
            raise ValueError("value has bits beyond the vector length")

    @classmethod
    def zeros(cls, length):
        return cls(length, 0)

    @classmethod
    def unit(cls, length, j):
        if not 0 <= j < length:
            raise IndexError(j)
        return cls(length, 1 << j)

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits).ravel()
        return cls(int(bits.size), _bits_to_int(bits % 2))

    @classmethod
    def from_support(cls, length, support):
        v = 0
        for j in support:
            v |= 1 << j
        return cls(length, v)

    @classmethod
    def random(cls, length, rng):
        return cls.from_bits(rng.integers(0, 2, size=length))

    def to_bits(self):
        return _int_to_bits(self.value, self.length)

    def words(self):
        """Payload as little-endian 64-bit words (unused tail bits zero)."""
        nwords = max(1, (self.length + 63) // 64)
        return np.frombuffer(self.value.to_bytes(8 * nwords, "little"), dtype="<u8").copy()

    def support(self):
        return [i for i in range(self.length) if (self.value >> i) & 1]

    def weight(self):
        return self.value.bit_count()

    def to_hex(self):
        """Hex digits in increasing coordinate order; digit i holds
        coordinates 4i..4i+3 with coordinate 4i as its least significant bit."""
        ndig = (self.length + 3) // 4
        return format(self.value, f"0{ndig}x")[::-1] if ndig else ""

    @classmethod
    def from_hex(cls, text, length):
        text = text.strip()
        if len(text) != (length + 3) // 4:
            raise ValueError(f"expected {(length + 3) // 4} hex digits, got {len(text)}")
        return cls(length, int(text[::-1], 16) if text else 0)

    def _check(self, other):
        if not isinstance(other, BitVector) or other.length != self.length:
            raise ValueError("vector length mismatch")

    def __xor__(self, other):
        self._check(other)
        return BitVector(self.length, self.value ^ other.value)

    def __and__(self, other):
        self._check(other)
        return BitVector(self.length, self.value & other.value)

    def __getitem__(self, i):
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return (self.value >> (i % self.length)) & 1

    def __len__(self):
        return self.length

    def __index__(self):
        return self.value

    def __str__(self):
        return "".join(str(b) for b in self.to_bits())


def hamming_weight(v):
    return v.weight()


def hamming_distance(u, v):
    return (u ^ v).weight()


@dataclass(frozen=True)
class BitMatrix:
    """Row-major GF(2) matrix; ``rows[i]`` is an int with bit j = entry (i, j)."""

    rows: tuple
    ncols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ValueError("row wider than ncols")

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr) % 2
        return cls(_array_to_rows(arr), int(arr.shape[1]))

    @classmethod
    def from_rows(cls, vectors):
        vectors = list(vectors)
        if not vectors:
            raise ValueError("need at least one row")
        n = vectors[0].length
        if any(v.length != n for v in vectors):
            raise ValueError("rows of unequal length")
        return cls(tuple(v.value for v in vectors), n)

    @classmethod
    def identity(cls, n):
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def random(cls, nrows, ncols, rng):
        return cls.from_array(rng.integers(0, 2, size=(nrows, ncols)))

    @cached_property
    def bits(self):
        """Dense uint8 copy, shape (nrows, ncols)."""
        a = _rows_to_array(self.rows, self.ncols)
        a.setflags(write=False)
        return a

    def to_array(self):
        return self.bits.copy()

    def row(self, i):
        return BitVector(self.ncols, self.rows[i])

    def column(self, j):
        return BitVector(self.nrows, self.column_int(j))

    def column_int(self, j):
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    @cached_property
    def column_ints(self):
        """Every column as an int (bit i = row i)."""
        return _array_to_rows(self.bits.T) if self.nrows else tuple(0 for _ in range(self.ncols))

    def rank(self):
        rows = list(self.rows)
        rank = 0
        for col in range(self.ncols):
            bit = 1 << col
            piv = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] & bit:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank


def mat_vec_mul(M, v):
    """M v over GF(2)."""
    if v.length != M.ncols:
        raise ValueError(f"dimension mismatch: matrix has {M.ncols} columns, vector {v.length}")
    x = v.value
    out = 0
    for i, r in enumerate(M.rows):
        out |= ((r & x).bit_count() & 1) << i
    return BitVector(M.nrows, out)


@dataclass(frozen=True)
class Permutation:
    """Column permutation: column j of the permuted matrix is column
    ``image[j]`` of the original."""

    image: tuple

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        object.__setattr__(self, "image", img)
        if sorted(img) != list(range(len(img))):
            raise ValueError("image is not a bijection on 0..n-1")

    def __len__(self):
        return len(self.image)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n, rng):
        return cls(tuple(rng.permutation(n).tolist()))

    def inverse(self):
        inv = [0] * len(self.image)
        for j, i in enumerate(self.image):
            inv[i] = j
        return Permutation(tuple(inv))

    def permute_vector(self, v):
        """Vector of the permuted instance: v'[j] = v[image[j]]."""
        if v.length != len(self.image):
            raise ValueError("length mismatch")
        bits = v.to_bits()
        return BitVector(v.length, _bits_to_int(bits[list(self.image)]))

    def unpermute_vector(self, v):
        """Inverse of ``permute_vector``."""
        if v.length != len(self.image):
            raise ValueError("length mismatch")
        out = np.zeros(v.length, dtype=np.uint8)
        out[list(self.image)] = v.to_bits()
        return BitVector(v.length, _bits_to_int(out))


def permute_columns(M, p):
    """Matrix whose column j is column ``p.image[j]`` of M.

    If e solves (M, s) then ``p.permute_vector(e)`` solves the permuted
    system, and ``p.unpermute_vector`` maps solutions back.
    """
    if len(p) != M.ncols:
        raise ValueError("permutation length differs from column count")
    return BitMatrix(_array_to_rows(M.bits[:, list(p.image)]), M.ncols)


@dataclass(frozen=True)
class SystematicForm:
    """Reduced system [Q | (0 over I)] e' = sbar for the permuted instance.

    Q has n-k rows and k+window columns.  Its first ``window`` rows face
    the zero block, the remaining rows face the identity.
    """

    Q: BitMatrix
    sbar: BitVector
    perm: Permutation
    window: int

    @property
    def n(self):
        return len(self.perm)

    @property
    def head(self):
        """Number of coordinates k + window covered by Q."""
        return self.Q.ncols

    @cached_property
    def q_columns(self):
        return self.Q.column_ints

    def full_matrix(self):
        m, head = self.Q.nrows, self.Q.ncols
        rows = [r | ((1 << (head + i - self.window)) if i >= self.window else 0)
                for i, r in enumerate(self.Q.rows)]
        return BitMatrix(tuple(rows), head + m - self.window)

    def image_of(self, x):
        """Q x for a head vector given as an int."""
        out = 0
        cols = self.q_columns
        while x:
            low = x & -x
            out ^= cols[low.bit_length() - 1]
            x ^= low
        return out

    def reconstruct(self, x):
        """Full error of the original instance whose head part is ``x``.

        The tail is forced by the identity block: e3 = (Q x + sbar) with the
        window rows dropped.  The caller checks the window is zero.
        """
        resid = self.image_of(x) ^ self.sbar.value
        e_perm = x | ((resid >> self.window) << self.head)
        return self.perm.unpermute_vector(BitVector(self.n, e_perm))


def to_systematic(H, s, ell, p):
    """Reduce the permuted system (H p, s) to windowed systematic form.

    Pivots are taken left to right over the last n-k-ell columns.  Returns
    ``None`` when those columns are singular (a rank failure; the caller
    should draw another permutation).
    """
    m, n = H.nrows, H.ncols
    if s.length != m:
        raise ValueError("syndrome length differs from row count")
    if not 0 <= ell <= m:
        raise ValueError(f"window {ell} outside [0, {m}]")
    Hp = permute_columns(H, p)
    sbit = 1 << n
    rows = [r | (sbit if (s.value >> i) & 1 else 0) for i, r in enumerate(Hp.rows)]
    head = n - m + ell
    remaining = list(range(m))
    pivots = []
    for t in range(m - ell):
        bit = 1 << (head + t)
        piv = next((i for i in remaining if rows[i] & bit), None)
        if piv is None:
            return None
        remaining.remove(piv)
        prow = rows[piv]
        for i in range(m):
            if i != piv and rows[i] & bit:
                rows[i] ^= prow
        pivots.append(piv)
    order = remaining + pivots
    mask = (1 << head) - 1
    Q = BitMatrix(tuple(rows[i] & mask for i in order), head)
    sbar = 0
    for j, i in enumerate(order):
        if rows[i] & sbit:
            sbar |= 1 << j
    return SystematicForm(Q, BitVector(m, sbar), p, ell)
