"""Systematic Reed-Solomon codes over GF(2^m) with worst-case bit accounting.

One bit flip corrupts at most one symbol, so a code correcting t symbol
errors is guaranteed to correct any t bit flips; t_max = (n_sym - k_sym) // 2.
Symbol width is configurable because a single RS block over GF(256) caps out
at 255 symbols, which is too short for the redundancy the signature-wrapped
construction needs (see EccParams docstring).

Hot paths (encode, syndrome computation, Berlekamp-Massey, Chien/Forney) are
vectorized with numpy over symbol arrays; the Monte-Carlo suites decode tens
of thousands of codewords.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitstring import BitString
from .errors import ConfigError, DecodeFailure, FormatError

# First entry per width that generates the full multiplicative group; checked
# at table-build time.
_PRIM_POLY_CANDIDATES = {
    2: (0x7,),
    3: (0xB,),
    4: (0x13,),
    5: (0x25,),
    6: (0x43,),
    7: (0x89,),
    8: (0x11D,),
    9: (0x211,),
    10: (0x409,),
    11: (0x805,),
    12: (0x1053, 0x1069),
    13: (0x201B,),
    14: (0x4443, 0x402B),
    15: (0x8003,),
    16: (0x1100B, 0x1002D, 0x16F63),
}

_TABLE_CACHE: dict = {}


def _build_tables(bps: int):
    """Log/antilog tables for GF(2^bps) with generator alpha=2."""
    if bps in _TABLE_CACHE:
        return _TABLE_CACHE[bps]
    if bps not in _PRIM_POLY_CANDIDATES:
        raise ConfigError(f"unsupported symbol width {bps}")
    q = 1 << bps
    n = q - 1
    for poly in _PRIM_POLY_CANDIDATES[bps]:
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        ok = True
        for i in range(n):
            if log[x] != -1:
                ok = False
                break
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= poly
        if ok and x == 1:
            exp[n:2 * n] = exp[:n]
            _TABLE_CACHE[bps] = (exp, log, n)
            return _TABLE_CACHE[bps]
    raise ConfigError(f"no primitive polynomial validated for width {bps}")


@dataclass(frozen=True, slots=True)
class EccParams:
    """Code geometry.  n_sym must not exceed 2^bits_per_symbol - 1.

    The worked configuration for the signature wrapper uses 16-bit symbols
    (k_sym=32, n_sym=640): the verification key is 512 bits = 32 wide
    symbols, and the correction radius t_max=304 then exceeds the unbounded
    attacker's b + signature-length budget, which an 8-bit-symbol block
    cannot reach.
    """

    k_sym: int
    n_sym: int
    bits_per_symbol: int = 8

    def __post_init__(self) -> None:
        if self.k_sym < 1 or self.n_sym <= self.k_sym:
            raise ConfigError("need n_sym > k_sym >= 1")
        if self.n_sym > (1 << self.bits_per_symbol) - 1:
            raise ConfigError(
                f"n_sym {self.n_sym} exceeds field bound "
                f"{(1 << self.bits_per_symbol) - 1} for {self.bits_per_symbol}-bit symbols")

    @property
    def t_max(self) -> int:
        return (self.n_sym - self.k_sym) // 2

    @property
    def data_bits(self) -> int:
        return self.k_sym * self.bits_per_symbol

    @property
    def n_bits(self) -> int:
        return self.n_sym * self.bits_per_symbol

    @property
    def code_rate(self) -> Fraction:
        return Fraction(self.k_sym, self.n_sym)

    @property
    def error_rate(self) -> Fraction:
        return Fraction(self.t_max, self.n_bits)


class ReedSolomon:
    def __init__(self, params: EccParams) -> None:
        self.params = params
        self.exp, self.log, self.order = _build_tables(params.bits_per_symbol)
        self.nparity = params.n_sym - params.k_sym
        # generator polynomial prod_{j=1..nparity} (x - alpha^j), monic,
        # stored high-degree first
        g = np.ones(1, dtype=np.int64)
        for j in range(1, self.nparity + 1):
            root = int(self.exp[j % self.order])
            nxt = np.zeros(len(g) + 1, dtype=np.int64)
            nxt[:-1] ^= g                       # g * x
            nxt[1:] ^= self._mul_scalar(g, root)  # g * root
            g = nxt
        self.gen = g  # degree nparity, gen[0] == 1
        self.gen_tail = g[1:].copy()
        # syndrome exponent matrix E[j-1, i] = ((n-1-i)*j) mod order
        degs = (params.n_sym - 1 - np.arange(params.n_sym, dtype=np.int64))
        js = np.arange(1, self.nparity + 1, dtype=np.int64)
        self._syn_exp = (degs[None, :] * js[:, None]) % self.order

    # ---- GF helpers ----------------------------------------------------

    def _mul_scalar(self, vec: np.ndarray, s: int) -> np.ndarray:
        if s == 0:
            return np.zeros_like(vec)
        ls = int(self.log[s])
        out = np.zeros_like(vec)
        nz = vec != 0
        out[nz] = self.exp[(self.log[vec[nz]] + ls) % self.order]
        return out

    def _mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(a)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % self.order]
        return out

    def _div(self, a: int, b: int) -> int:
        if a == 0:
            return 0
        return int(self.exp[(self.log[a] - self.log[b]) % self.order])

    # ---- bit packing ---------------------------------------------------

    def _bits_to_symbols(self, bits: BitString, n_sym: int) -> np.ndarray:
        bps = self.params.bits_per_symbol
        if bps == 8:
            return np.frombuffer(bits.to_bytes(), dtype=">u1").astype(np.int64)
        if bps == 16:
            return np.frombuffer(bits.to_bytes(), dtype=">u2").astype(np.int64)
        return np.array([bits.extract(i * bps, bps).value for i in range(n_sym)],
                        dtype=np.int64)

    def _symbols_to_bits(self, syms: np.ndarray) -> BitString:
        bps = self.params.bits_per_symbol
        if bps == 8:
            raw = syms.astype(">u1").tobytes()
            return BitString(int.from_bytes(raw, "big"), len(syms) * 8)
        if bps == 16:
            raw = syms.astype(">u2").tobytes()
            return BitString(int.from_bytes(raw, "big"), len(syms) * 16)
        v = 0
        for s in syms:
            v = (v << bps) | int(s)
        return BitString(v, len(syms) * bps)

    # ---- encode / decode ----------------------------------------------

    def _parity(self, msg: np.ndarray) -> np.ndarray:
        rem = np.zeros(self.nparity, dtype=np.int64)
        for coef in msg:
            feedback = int(coef) ^ int(rem[0])
            rem[:-1] = rem[1:]
            rem[-1] = 0
            if feedback:
                rem ^= self._mul_scalar(self.gen_tail, feedback)
        return rem

    def encode(self, message: BitString) -> BitString:
        p = self.params
        if message.length != p.data_bits:
            raise FormatError(
                f"message must be {p.data_bits} bits, got {message.length}")
        msg = self._bits_to_symbols(message, p.k_sym)
        parity = self._parity(msg)
        return self._symbols_to_bits(np.concatenate([msg, parity]))

    def _syndromes(self, recv: np.ndarray) -> np.ndarray:
        nz = recv != 0
        logs = np.zeros_like(recv)
        logs[nz] = self.log[recv[nz]]
        expo = (logs[None, :] + self._syn_exp) % self.order
        terms = self.exp[expo]
        terms[:, ~nz] = 0
        return np.bitwise_xor.reduce(terms, axis=1)

    def decode(self, codeword: BitString) -> BitString:
        p = self.params
        if codeword.length != p.n_bits:
            raise FormatError(
                f"codeword must be {p.n_bits} bits, got {codeword.length}")
        recv = self._bits_to_symbols(codeword, p.n_sym)
        msg = recv[:p.k_sym]
        # fast path: received word already a codeword
        if np.array_equal(self._parity(msg), recv[p.k_sym:]):
            return self._symbols_to_bits(msg)
        synd = self._syndromes(recv)
        if not synd.any():
            return self._symbols_to_bits(msg)
        locator = self._berlekamp_massey(synd)
        n_err = len(locator) - 1
        if n_err > p.t_max:
            raise DecodeFailure(f"{n_err} errors exceed correction radius {p.t_max}")
        positions = self._chien(locator)
        if len(positions) != n_err:
            raise DecodeFailure("error locator does not split over the field")
        corrected = recv.copy()
        magnitudes = self._forney(synd, locator, positions)
        if np.any(magnitudes == 0):
            raise DecodeFailure("zero error magnitude")
        corrected[positions] ^= magnitudes
        if self._syndromes(corrected).any():
            raise DecodeFailure("correction left nonzero syndromes")
        return self._symbols_to_bits(corrected[:p.k_sym])

    def _berlekamp_massey(self, synd: np.ndarray) -> np.ndarray:
        """Error-locator polynomial, low-degree-first coefficients."""
        nsyn = len(synd)
        C = np.zeros(nsyn + 1, dtype=np.int64)
        B = np.zeros(nsyn + 1, dtype=np.int64)
        C[0] = B[0] = 1
        L, m, b = 0, 1, 1
        for n_ in range(nsyn):
            if L:
                terms = self._mul_vec(C[1:L + 1], synd[n_ - 1::-1][:L])
                d = int(synd[n_]) ^ int(np.bitwise_xor.reduce(terms))
            else:
                d = int(synd[n_])
            if d == 0:
                m += 1
                continue
            coef = self._div(d, b)
            if 2 * L <= n_:
                T = C.copy()
                C[m:] ^= self._mul_scalar(B[:len(B) - m], coef)
                L = n_ + 1 - L
                B = T
                b = d
                m = 1
            else:
                C[m:] ^= self._mul_scalar(B[:len(B) - m], coef)
                m += 1
        return C[:L + 1]

    def _chien(self, locator: np.ndarray) -> np.ndarray:
        """Indices of erroneous symbols (0 = first symbol of the codeword)."""
        p = self.params
        degs = p.n_sym - 1 - np.arange(p.n_sym, dtype=np.int64)  # X_i = alpha^degs
        js = np.arange(len(locator), dtype=np.int64)
        nz = locator != 0
        loclog = np.zeros_like(locator)
        loclog[nz] = self.log[locator[nz]]
        # evaluate locator at X_i^{-1} = alpha^{-degs}
        expo = (loclog[None, :] + (self.order - (degs[:, None] * js[None, :])
                                   % self.order) % self.order) % self.order
        terms = self.exp[expo]
        terms[:, ~nz] = 0
        vals = np.bitwise_xor.reduce(terms, axis=1)
        return np.nonzero(vals == 0)[0]

    def _forney(self, synd: np.ndarray, locator: np.ndarray,
                positions: np.ndarray) -> np.ndarray:
        p = self.params
        # omega = (S * locator) mod x^{2t}, S low-degree-first
        nsyn = len(synd)
        omega = np.zeros(nsyn, dtype=np.int64)
        for j, lam in enumerate(locator):
            if lam == 0 or j >= nsyn:
                continue
            omega[j:] ^= self._mul_scalar(synd[:nsyn - j], int(lam))
        degs = (p.n_sym - 1 - positions).astype(np.int64)
        inv_logs = (self.order - degs % self.order) % self.order  # log of X_i^{-1}

        def eval_many(poly: np.ndarray, shift: int) -> np.ndarray:
            js = np.arange(len(poly), dtype=np.int64)
            nz = poly != 0
            plog = np.zeros_like(poly)
            plog[nz] = self.log[poly[nz]]
            expo = (plog[None, :] + inv_logs[:, None] * (js[None, :] - shift)
                    ) % self.order
            terms = self.exp[expo]
            terms[:, ~nz] = 0
            return np.bitwise_xor.reduce(terms, axis=1)

        om = eval_many(omega, 0)
        deriv = locator.copy()
        deriv[::2] = 0  # char-2 formal derivative keeps odd coefficients
        dprime = eval_many(deriv, 1)
        if np.any(dprime == 0):
            return np.zeros(len(positions), dtype=np.int64)
        mags = self.exp[(self.log[om] - self.log[dprime]) % self.order]
        mags[om == 0] = 0
        return mags


_RS_CACHE: dict = {}


def reed_solomon(params: EccParams) -> ReedSolomon:
    rs = _RS_CACHE.get(params)
    if rs is None:
        rs = _RS_CACHE[params] = ReedSolomon(params)
    return rs


def ecc_encode(message: BitString, params: EccParams) -> BitString:
    return reed_solomon(params).encode(message)


def ecc_decode(codeword: BitString, params: EccParams) -> BitString:
    """Decoded message, or DecodeFailure beyond the correction radius."""
    return reed_solomon(params).decode(codeword)
