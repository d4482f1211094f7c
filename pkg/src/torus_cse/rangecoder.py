"""Byte-oriented range coder for sequences of uniform integer intervals.

48-bit coding window, renormalized a byte at a time with deferred
carry propagation.  Encoding value v in an interval of width w costs
log2(w) bits up to rounding; the flush tail plus rounding stays under
8 bits total for the widths this codec uses (asserted by tests).
"""

from __future__ import annotations

_BITS = 48
_MASK = (1 << _BITS) - 1
_BOT = 1 << (_BITS - 8)
_TOPBYTE = 0xFF << (_BITS - 8)


class RangeEncoder:
    def __init__(self) -> None:
        self._low = 0
        self._range = _MASK
        self._cache = 0
        self._pending = 0
        self._started = False
        self._out = bytearray()
        self._flushed = False

    def encode(self, value: int, width: int) -> None:
        """Narrow the interval to slot `value` of `width` equal parts."""
        if self._flushed:
            raise RuntimeError("encode after flush")
        if not 0 <= value < width:
            raise ValueError(f"value {value} outside width {width}")
        if width == 1:
            return
        if width > _BOT:
            raise ValueError(f"width {width} exceeds coder capacity")
        r = self._range // width
        self._low += value * r
        if value == width - 1:
            self._range -= value * r
        else:
            self._range = r
        while self._range < _BOT:
            self._shift()
            self._range <<= 8

    def _shift(self) -> None:
        low = self._low
        if low < _TOPBYTE or low > _MASK:
            carry = low >> _BITS
            if self._started:
                self._out.append((self._cache + carry) & 0xFF)
            elif carry:
                raise AssertionError("carry into empty stream")
            if self._pending:
                fill = (0xFF + carry) & 0xFF
                self._out.extend(fill for _ in range(self._pending))
                self._pending = 0
            self._cache = (low >> (_BITS - 8)) & 0xFF
            self._started = True
        else:
            # top byte is 0xFF: hold it back until a carry can no longer
            # ripple through
            self._pending += 1
        self._low = (low << 8) & _MASK

    def flush(self) -> bytes:
        """Pick a short representative of the final interval and drain it."""
        if not self._flushed:
            self._flushed = True
            g = min(self._range.bit_length() - 1, _BITS - 1)
            self._low = ((self._low + (1 << g) - 1) >> g) << g
            self._shift()
            self._shift()
            if self._pending:
                self._out.extend(0xFF for _ in range(self._pending))
                self._pending = 0
        return bytes(self._out)


class RangeDecoder:
    def __init__(self, next_byte) -> None:
        """`next_byte()` supplies the stream, returning 0 past its end."""
        self._next = next_byte
        self._range = _MASK
        code = 0
        for _ in range(_BITS // 8):
            code = (code << 8) | next_byte()
        self._code = code

    def decode(self, width: int) -> int:
        if width == 1:
            return 0
        if not 1 <= width <= _BOT:
            raise ValueError(f"width {width} exceeds coder capacity")
        r = self._range // width
        v = self._code // r
        if v >= width:
            v = width - 1
        self._code -= v * r
        if v == width - 1:
            self._range -= v * r
        else:
            self._range = r
        while self._range < _BOT:
            self._code = ((self._code << 8) | self._next()) & _MASK
            self._range <<= 8
        return v
