"""Bit strings, GF(2) linear algebra, and systematic linear codes.

Everything here is deterministic and immutable after construction; randomized
constructors take an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BitString",
    "CosetId",
    "LinearCode",
    "hamming_distance",
    "xor",
    "gf2_rank",
    "gf2_solve",
    "gf2_solution_space",
    "gf2_kernel_basis",
    "random_linear_code",
    "hamming_7_4",
    "even_weight_code",
    "repetition_code",
    "load_code",
    "save_code",
]


class BitString:
    """Immutable binary string of fixed length >= 1.

    Bits are stored as a read-only uint8 array of 0/1 values; bit i of the
    integer encoding is the i-th coordinate.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("BitString needs a 1-D sequence of length >= 1")
        if arr.max(initial=0) > 1:
            raise ValueError("BitString entries must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitString":
        # trusted fast path: arr must already be uint8 0/1
        obj = object.__new__(cls)
        arr.setflags(write=False)
        obj._bits = arr
        return obj

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls._wrap(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from01(cls, s: str) -> "BitString":
        if not s or set(s) - {"0", "1"}:
            raise ValueError("expected a nonempty string over {0,1}")
        return cls._wrap(np.frombuffer(s.encode(), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_int(cls, value: int, n: int) -> "BitString":
        if value < 0 or value >> n:
            raise ValueError("value does not fit in %d bits" % n)
        return cls._wrap(((value >> np.arange(n)) & 1).astype(np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitString":
        return cls._wrap(rng.integers(0, 2, size=n, dtype=np.uint8))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return self._bits.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._bits.size == other._bits.size and bool(
            np.all(self._bits == other._bits)
        )

    def __hash__(self) -> int:
        return hash((self._bits.size, self._bits.tobytes()))

    def __xor__(self, other: "BitString") -> "BitString":
        return xor(self, other)

    def weight(self) -> int:
        return int(np.count_nonzero(self._bits))

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def to_int(self) -> int:
        v = 0
        for i in np.flatnonzero(self._bits):
            v |= 1 << int(i)
        return v

    def __repr__(self) -> str:
        s = self.to01()
        if len(s) > 48:
            s = s[:45] + "..."
        return "BitString(%r)" % s


def hamming_distance(x: BitString, y: BitString) -> int:
    """Number of positions where x and y differ."""
    if len(x) != len(y):
        raise ValueError("length mismatch: %d vs %d" % (len(x), len(y)))
    return int(np.count_nonzero(x.bits != y.bits))


def xor(x: BitString, y: BitString) -> BitString:
    """Coordinatewise sum mod 2."""
    if len(x) != len(y):
        raise ValueError("length mismatch: %d vs %d" % (len(x), len(y)))
    return BitString._wrap(np.bitwise_xor(x.bits, y.bits))


# ---------------------------------------------------------------------------
# GF(2) matrix routines (dense uint8 arrays of 0/1)
# ---------------------------------------------------------------------------


def _pack_rows(mat: np.ndarray) -> list[int]:
    """Matrix rows as integers, bit i of a row = column i."""
    mat = np.asarray(mat, dtype=np.uint8) & 1
    return [int.from_bytes(np.packbits(r, bitorder="little").tobytes(),
                           "little") for r in mat]


def _unpack_row(value: int, ncols: int) -> np.ndarray:
    return ((value >> np.arange(ncols)) & 1).astype(np.uint8)


def _rref_ints(rows: list[int], ncols: int):
    """In-place reduced row echelon form on bitmask rows; returns pivot cols."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i] >> c & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> c & 1:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    return pivots


def gf2_rank(mat: np.ndarray) -> int:
    rows = _pack_rows(mat)
    return len(_rref_ints(rows, np.asarray(mat).shape[1]))


def gf2_solve(mat: np.ndarray, rhs: np.ndarray):
    """One solution u of mat @ u = rhs over GF(2), or None if inconsistent."""
    a = np.asarray(mat, dtype=np.uint8)
    b = np.asarray(rhs, dtype=np.uint8).reshape(-1)
    if a.shape[0] != b.size:
        raise ValueError("shape mismatch")
    ncols = a.shape[1]
    rows = _pack_rows(a)
    rows = [row | (int(b[i]) << ncols) for i, row in enumerate(rows)]
    pivots = _rref_ints(rows, ncols)
    # inconsistent iff some zero row carries a nonzero augmented bit
    for i in range(len(pivots), len(rows)):
        if rows[i]:
            return None
    u = 0
    for row_idx, c in enumerate(pivots):
        if rows[row_idx] >> ncols & 1:
            u |= 1 << c
    return _unpack_row(u, ncols)


def gf2_kernel_basis(mat: np.ndarray) -> np.ndarray:
    """Basis of {u : mat @ u = 0} as rows; shape (nullity, ncols)."""
    a = np.asarray(mat, dtype=np.uint8)
    ncols = a.shape[1]
    rows = _pack_rows(a)
    pivots = _rref_ints(rows, ncols)
    return _kernel_from_rref(rows, pivots, ncols)


def _kernel_from_rref(rows: list[int], pivots: list[int],
                      ncols: int) -> np.ndarray:
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for i, f in enumerate(free):
        vec = 1 << f
        for row_idx, c in enumerate(pivots):
            if rows[row_idx] >> f & 1:
                vec |= 1 << c
        basis[i] = _unpack_row(vec, ncols)
    return basis


def gf2_solution_space(mat: np.ndarray, rhs: np.ndarray):
    """(particular solution, kernel basis) of mat @ u = rhs in one elimination.

    The solution is None when the system is inconsistent.
    """
    a = np.asarray(mat, dtype=np.uint8)
    b = np.asarray(rhs, dtype=np.uint8).reshape(-1)
    if a.shape[0] != b.size:
        raise ValueError("shape mismatch")
    ncols = a.shape[1]
    rows = _pack_rows(a)
    rows = [row | (int(b[i]) << ncols) for i, row in enumerate(rows)]
    pivots = _rref_ints(rows, ncols)
    for i in range(len(pivots), len(rows)):
        if rows[i]:
            return None, None
    u = 0
    for row_idx, c in enumerate(pivots):
        if rows[row_idx] >> ncols & 1:
            u |= 1 << c
    masked = [row & ((1 << ncols) - 1) for row in rows]
    return _unpack_row(u, ncols), _kernel_from_rref(masked, pivots, ncols)


# ---------------------------------------------------------------------------
# Linear codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetId:
    """Syndrome indexing one coset of a code; length n - k."""

    syndrome: BitString

    def __len__(self) -> int:
        return len(self.syndrome)


def _pack_u64(bits: np.ndarray) -> np.ndarray:
    """1-D 0/1 array -> little-endian uint64 words."""
    b = np.packbits(bits, bitorder="little")
    pad = (-b.size) % 8
    if pad:
        b = np.concatenate([b, np.zeros(pad, dtype=np.uint8)])
    return b.view(np.uint64)


class LinearCode:
    """Binary [n, k] code in systematic form, generator [I_k | P].

    Only the k x (n-k) block P is stored; generator and parity-check matrices
    are materialized on demand. The parity check is H = [P^T | I_{n-k}], so
    the syndrome of x is P^T x_msg + x_chk. Check-bit arithmetic runs on rows
    of P packed into 64-bit words.
    """

    __slots__ = ("n", "k", "p_block", "d_claimed", "d_verified", "_p_words")

    def __init__(self, p_block: np.ndarray, d_claimed: int | None = None,
                 d_verified: bool = False):
        p = np.asarray(p_block, dtype=np.uint8) & 1
        if p.ndim != 2:
            raise ValueError("P block must be a 2-D 0/1 matrix")
        k, r = p.shape
        if k < 1 or r < 0:
            raise ValueError("bad code dimensions")
        p.setflags(write=False)
        self.p_block = p
        self.k = k
        self.n = k + r
        self.d_claimed = d_claimed
        self.d_verified = d_verified
        self._p_words = np.vstack([_pack_u64(row) for row in p]) if r else \
            np.zeros((k, 0), dtype=np.uint64)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_generator(cls, gen: np.ndarray, d_claimed: int | None = None,
                       d_verified: bool = False) -> "LinearCode":
        g = np.asarray(gen, dtype=np.uint8) & 1
        k, n = g.shape
        if k > n:
            raise ValueError("k > n")
        if not np.array_equal(g[:, :k], np.eye(k, dtype=np.uint8)):
            raise ValueError("generator is not in systematic form [I_k | P]")
        return cls(g[:, k:], d_claimed=d_claimed, d_verified=d_verified)

    # -- matrices -----------------------------------------------------------

    @property
    def gen(self) -> np.ndarray:
        g = np.zeros((self.k, self.n), dtype=np.uint8)
        g[:, : self.k] = np.eye(self.k, dtype=np.uint8)
        g[:, self.k:] = self.p_block
        return g

    @property
    def par(self) -> np.ndarray:
        r = self.n - self.k
        h = np.zeros((r, self.n), dtype=np.uint8)
        h[:, : self.k] = self.p_block.T
        h[:, self.k:] = np.eye(r, dtype=np.uint8)
        return h

    # -- operations ---------------------------------------------------------

    def encode(self, u: BitString) -> BitString:
        """Codeword u . G for a k-bit message u."""
        if len(u) != self.k:
            raise ValueError("message length %d != k=%d" % (len(u), self.k))
        return BitString._wrap(self._encode_arr(u.bits))

    def _check_words(self, u: np.ndarray) -> np.ndarray:
        sel = np.flatnonzero(u)
        if sel.size:
            return np.bitwise_xor.reduce(self._p_words[sel], axis=0)
        return np.zeros(self._p_words.shape[1], dtype=np.uint64)

    def _encode_arr(self, u: np.ndarray) -> np.ndarray:
        word = np.empty(self.n, dtype=np.uint8)
        word[: self.k] = u
        r = self.n - self.k
        word[self.k:] = np.unpackbits(
            self._check_words(u).view(np.uint8), bitorder="little")[:r]
        return word

    def message_coords(self, x: BitString) -> BitString:
        if len(x) != self.n:
            raise ValueError("length %d != n=%d" % (len(x), self.n))
        return BitString._wrap(x.bits[: self.k].copy())

    def contains(self, x: BitString) -> bool:
        if len(x) != self.n:
            raise ValueError("length %d != n=%d" % (len(x), self.n))
        return bool(np.array_equal(self._check_words(x.bits[: self.k]),
                                   _pack_u64(x.bits[self.k:])))

    def syndrome(self, x: BitString) -> CosetId:
        """Syndrome H x; zero exactly on codewords."""
        if len(x) != self.n:
            raise ValueError("length %d != n=%d" % (len(x), self.n))
        r = self.n - self.k
        words = self._check_words(x.bits[: self.k]) ^ _pack_u64(x.bits[self.k:])
        s = np.unpackbits(words.view(np.uint8), bitorder="little")[:r]
        return CosetId(BitString._wrap(s))

    def coset_representative(self, cid: CosetId) -> BitString:
        """Deterministic coset element: syndrome in the check positions.

        Zero syndrome maps to the all-zero string, so the code itself is its
        own representative's coset.
        """
        if len(cid) != self.n - self.k:
            raise ValueError("syndrome length %d != n-k=%d"
                             % (len(cid), self.n - self.k))
        x = np.zeros(self.n, dtype=np.uint8)
        x[self.k:] = cid.syndrome.bits
        return BitString._wrap(x)

    def random_coset(self, rng: np.random.Generator) -> CosetId:
        return CosetId(BitString.random(self.n - self.k, rng))

    def min_distance_exact(self) -> int:
        """Exact minimum distance by Gray-code enumeration of 2^k - 1 words.

        Refuses for k > 24.
        """
        if self.k > 24:
            raise ValueError("exact distance enumeration limited to k <= 24 "
                             "(got k=%d)" % self.k)
        if self.k == self.n and self.k >= 1:
            return 1
        # rows packed into uint64 words; Gray-code steps XOR one row at a time
        nwords = (self.n + 63) // 64
        packed = np.zeros((self.k, nwords), dtype=np.uint64)
        gen = self.gen
        for i in range(self.k):
            idx = np.flatnonzero(gen[i])
            np.bitwise_or.at(packed[i], idx // 64,
                             (np.uint64(1) << (idx % 64).astype(np.uint64)))
        cur = np.zeros(nwords, dtype=np.uint64)
        best = self.n + 1
        for j in range(1, 1 << self.k):
            # Gray code: bit flipped between j-1 and j is trailing-zero count
            cur ^= packed[(j & -j).bit_length() - 1]
            w = int(np.bitwise_count(cur).sum())
            if w < best:
                best = w
                if best == 1:
                    break
        return best


def random_linear_code(n: int, k: int, target_d: int,
                       rng: np.random.Generator,
                       max_retries: int = 500) -> LinearCode:
    """Random systematic [n, k] code with minimum distance >= target_d.

    For k <= 24 the distance is verified exactly, retrying up to
    ``max_retries`` times; beyond that the code is returned with an
    unverified design distance and a warning. Existence for rates below the
    Gilbert-Varshamov threshold k/n <= 1 - h(target_d/n) is guaranteed only
    asymptotically, so small instances may legitimately exhaust the budget.
    """
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    if not (1 <= target_d <= n):
        raise ValueError("need 1 <= target_d <= n")
    if k > 24:
        code = LinearCode(rng.integers(0, 2, size=(k, n - k), dtype=np.uint8),
                          d_claimed=target_d, d_verified=False)
        warnings.warn("k=%d > 24: design distance %d left unverified"
                      % (k, target_d))
        return code
    best = -1
    for _ in range(max_retries):
        code = LinearCode(rng.integers(0, 2, size=(k, n - k), dtype=np.uint8))
        d = code.min_distance_exact()
        if d >= target_d:
            return LinearCode(code.p_block, d_claimed=target_d,
                              d_verified=True)
        best = max(best, d)
    raise RuntimeError(
        "no [%d,%d] code with distance >= %d found in %d tries "
        "(best distance seen: %d)" % (n, k, target_d, max_retries, best))


def hamming_7_4() -> LinearCode:
    """The [7,4] Hamming code (distance 3) in systematic form."""
    p = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)
    return LinearCode(p, d_claimed=3, d_verified=True)


def even_weight_code(n: int) -> LinearCode:
    """The [n, n-1] even-weight (single parity) code, distance 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    return LinearCode(np.ones((n - 1, 1), dtype=np.uint8),
                      d_claimed=2, d_verified=True)


def repetition_code(n: int) -> LinearCode:
    """The [n, 1] repetition code, distance n."""
    if n < 1:
        raise ValueError("need n >= 1")
    return LinearCode(np.ones((1, n - 1), dtype=np.uint8),
                      d_claimed=n, d_verified=True)


# ---------------------------------------------------------------------------
# Code files: first line "n k", then k generator rows of n characters
# ---------------------------------------------------------------------------


def save_code(code: LinearCode, path) -> None:
    with open(path, "w") as fh:
        fh.write("%d %d\n" % (code.n, code.k))
        gen = code.gen
        for row in gen:
            fh.write("".join("1" if b else "0" for b in row) + "\n")


def load_code(path, d_claimed: int | None = None) -> LinearCode:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("empty code file")
    try:
        n, k = (int(t) for t in lines[0].split())
    except Exception as exc:
        raise ValueError("bad header, expected 'n k'") from exc
    if len(lines) != k + 1:
        raise ValueError("expected %d generator rows, got %d"
                         % (k, len(lines) - 1))
    gen = np.zeros((k, n), dtype=np.uint8)
    for i, ln in enumerate(lines[1:]):
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError("row %d is not %d characters of 0/1" % (i, n))
        gen[i] = np.frombuffer(ln.encode(), dtype=np.uint8) - ord("0")
    return LinearCode.from_generator(gen, d_claimed=d_claimed)
