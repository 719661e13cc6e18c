"""Lévy measures known through tabulated tail functions ``M+(x) = mu((x, inf))``, ``M-(x) = mu((-inf, -x))``.

Tails are interpolated log-log linearly and extended as power laws past the
table ends, which matches both ends for every measure tabulated here.
"""
from __future__ import annotations

import math

import numpy as np


class TailTable:
    def __init__(self, x, m_plus, m_minus):
        x = np.asarray(x, dtype=float)
        self.x = x
        self.lx = np.log(x)
        self._memo = {}
        self.m = {1: np.asarray(m_plus, dtype=float), -1: np.asarray(m_minus, dtype=float)}
        self.lm = {}
        self.slope = {}
        for s, mm in self.m.items():
            if np.all(mm <= 0):
                self.lm[s] = None
                continue
            if np.any(mm <= 0) or np.any(np.diff(mm) > 0):
                raise ValueError("tabulated tail must be positive and non-increasing")
            lm = np.log(mm)
            self.lm[s] = lm
            self.slope[s] = (lm[1] - lm[0]) / (self.lx[1] - self.lx[0]), (lm[-1] - lm[-2]) / (self.lx[-1] - self.lx[-2])

    def _log_tail(self, s, lx):
        lm = self.lm[s]
        lo_s, hi_s = self.slope[s]
        out = np.interp(lx, self.lx, lm)
        out = np.where(lx < self.lx[0], lm[0] + lo_s * (lx - self.lx[0]), out)
        out = np.where(lx > self.lx[-1], lm[-1] + hi_s * (lx - self.lx[-1]), out)
        return out

    def tail(self, x, side=1):
        """``M_side(x)``; ``x = 0`` maps to ``inf`` and ``x = inf`` to 0."""
        x = np.asarray(x, dtype=float)
        if self.lm[side] is None:
            return np.zeros_like(x) if x.ndim else 0.0
        with np.errstate(divide="ignore"):
            lx = np.log(x)
        out = np.exp(self._log_tail(side, lx))
        out = np.where(np.isinf(x), 0.0, out)
        return out if out.ndim else float(out)

    def tail_exponent_at_infinity(self, side=1):
        return -self.slope[side][1]

    def _pieces(self, lo, hi):
        """Breakpoints covering ``[lo, hi]`` (finite) aligned to the table."""
        inner = self.x[(self.x > lo) & (self.x < hi)]
        return np.concatenate(([lo], inner, [hi]))

    def xpow_integral(self, r, lo, hi, side=1):
        """``int_lo^hi x^r M(x) dx`` with the tail exactly power law between breakpoints."""
        if self.lm[side] is None or hi <= lo:
            return 0.0
        total = 0.0
        if math.isinf(hi):
            e = r - self.tail_exponent_at_infinity(side)
            start = max(lo, self.x[-1])
            if e >= -1:
                return math.inf
            total += -start ** (r + 1) * self.tail(start, side) / (e + 1)
            hi = start
        if lo == 0.0:
            e = r + self.slope[side][0]
            end = min(hi, self.x[0])
            if e <= -1:
                return math.inf
            total += end ** (r + 1) * self.tail(end, side) / (e + 1)
            lo = end
        if hi <= lo:
            return total
        b = self._pieces(lo, hi)
        mb = self.tail(b, side)
        a0, a1 = b[:-1], b[1:]
        m0, m1 = mb[:-1], mb[1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.log(m1 / m0) / np.log(a1 / a0) + r
            ratio = a1 / a0
            seg = np.where(np.abs(s + 1) < 1e-12, m0 * a0 ** (r + 1) * np.log(ratio),
                           m0 * a0 ** (r + 1) * (ratio ** (s + 1) - 1.0) / (s + 1))
        return total + float(np.sum(seg))

    def abs_moment(self, r, lo, hi, side):
        """``int_{lo < |x| <= hi, side} |x|^r mu(dx)`` by parts on the tail."""
        key = (float(r), float(lo), float(hi), side)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._abs_moment(r, lo, hi, side)
        return hit

    def _abs_moment(self, r, lo, hi, side):
        if side == 0:
            return self.abs_moment(r, lo, hi, 1) + self.abs_moment(r, lo, hi, -1)
        if self.lm[side] is None or hi <= lo:
            return 0.0
        if r == 0:
            return self.tail(lo, side) - self.tail(hi, side)
        hi_term = 0.0 if math.isinf(hi) else hi ** r * self.tail(hi, side)
        lo_term = 0.0 if lo == 0 else lo ** r * self.tail(lo, side)
        return lo_term - hi_term + r * self.xpow_integral(r - 1, lo, hi, side)

    def sample(self, rng, size, lo, hi):
        """Jump sizes from ``mu`` restricted to ``lo < |x| <= hi`` (``lo > 0``)."""
        mp = self.abs_moment(0, lo, hi, 1)
        mm = self.abs_moment(0, lo, hi, -1)
        sign = np.where(rng.random(size) * (mp + mm) < mp, 1.0, -1.0)
        u = rng.random(size)
        out = np.empty(size)
        for s in (1, -1):
            sel = sign == s
            if not sel.any():
                continue
            t_hi = self.tail(hi, s)
            t_lo = t_hi + self.abs_moment(0, lo, hi, s)
            target = t_hi + u[sel] * (t_lo - t_hi)
            out[sel] = s * self._inverse(np.log(target), s)
        return out

    def _inverse(self, log_m, side):
        lm = self.lm[side]
        lo_s, hi_s = self.slope[side]
        lx = np.interp(-log_m, -lm, self.lx)
        lx = np.where(log_m > lm[0], self.lx[0] + (log_m - lm[0]) / lo_s, lx)
        lx = np.where(log_m < lm[-1], self.lx[-1] + (log_m - lm[-1]) / hi_s, lx)
        return np.exp(lx)
