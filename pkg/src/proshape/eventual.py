"""Eventually periodic sequences and integer staircases.

Every tail question the engine answers ("does this hold for all
sufficiently late indices?") reduces to finite data: a value sequence over
a chain that is eventually periodic, or a monotone reindexing map that is
eventually arithmetic.  This module is the exact kernel for those
reductions.  Values are opaque hashables, maps are integer valued, and
nothing here knows about categories or posets.

Two shapes of data:

  PeriodicSeq   values v(0), v(1), ... given by a finite transient and a
                repeating cycle.  Closed under pointwise zip and under
                composition with a Staircase.

  Staircase     a monotone map s: N -> Z given by a finite prefix and an
                arithmetic tail s(x + P) = s(x) + Q.  Closed under
                composition, pointwise max, constant offset and min-inverse.

grid_tail_equal decides, exactly, whether two "grid families"

    A(x, y) = a(max(alpha1(x), alpha2(y)))
    B(x, y) = b(max(beta1(x),  beta2(y)))

agree for all coordinatewise-large (x, y).  The grid splits by which
coordinate realises each max; the two aligned regions reduce to
one-dimensional tail checks, and the two mixed regions reduce to bounded
window scans when the window width is eventually periodic, or to
eventual-constancy checks when the width grows without bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

_GUARD = 10**6  # hard step bound for internal walks; tripping it is a bug


class EventualError(Exception):
  """Raised when input data leaves the decidable fragment."""


def _divisors(n):
  return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class PeriodicSeq:
  """Eventually periodic sequence: transient values, then a cycle forever."""

  transient: tuple
  cycle: tuple

  def __post_init__(self):
    if not self.cycle:
      raise EventualError("cycle must be nonempty")
    transient, cycle = self.transient, self.cycle
    # reduce the cycle to its primitive period
    for d in _divisors(len(cycle)):
      if cycle == cycle[:d] * (len(cycle) // d):
        cycle = cycle[:d]
        break
    # absorb transient entries that already follow the cycle
    transient = list(transient)
    cycle = list(cycle)
    while transient and transient[-1] == cycle[-1]:
      cycle.insert(0, cycle.pop())
      transient.pop()
    object.__setattr__(self, "transient", tuple(transient))
    object.__setattr__(self, "cycle", tuple(cycle))

  @staticmethod
  def constant(value):
    return PeriodicSeq((), (value,))

  @property
  def tail_start(self):
    return len(self.transient)

  @property
  def period(self):
    return len(self.cycle)

  def at(self, i):
    if i < 0:
      raise EventualError("sequence index must be nonnegative")
    if i < len(self.transient):
      return self.transient[i]
    return self.cycle[(i - len(self.transient)) % len(self.cycle)]

  def map(self, fn):
    return PeriodicSeq(tuple(fn(v) for v in self.transient),
                       tuple(fn(v) for v in self.cycle))

  def zip_with(self, other, fn):
    t = max(self.tail_start, other.tail_start)
    p = lcm(self.period, other.period)
    return PeriodicSeq(tuple(fn(self.at(i), other.at(i)) for i in range(t)),
                       tuple(fn(self.at(t + i), other.at(t + i)) for i in range(p)))

  def tail_equal(self, other):
    """(True, least index from which all values agree) or
    (False, (i, i')): two indices with recurring disagreement."""
    t = max(self.tail_start, other.tail_start)
    p = lcm(self.period, other.period)
    diffs = [i for i in range(t + p) if self.at(i) != other.at(i)]
    recurring = [i for i in diffs if i >= t]
    if recurring:
      return False, (recurring[0], recurring[0] + p)
    return True, (diffs[-1] + 1 if diffs else 0)

  def everywhere_equal(self, other):
    t = max(self.tail_start, other.tail_start)
    p = lcm(self.period, other.period)
    for i in range(t + p):
      if self.at(i) != other.at(i):
        return False, i
    return True, None

  def eventually_constant(self):
    """The single tail value, or None if the tail genuinely oscillates."""
    return self.cycle[0] if len(self.cycle) == 1 else None

  def constant_value(self):
    if not self.transient and len(self.cycle) == 1:
      return self.cycle[0]
    return None

  def compose_stair(self, stair):
    """The sequence i -> self(stair(i)); exact because stair is
    eventually arithmetic and self is eventually periodic."""
    if stair.shift == 0:
      t = stair.start
      p = stair.period
      return PeriodicSeq(tuple(self.at(stair.value(i)) for i in range(t)),
                         tuple(self.at(stair.value(t + i)) for i in range(p)))
    x = stair.start
    guard = 0
    while stair.value(x) < self.tail_start:
      x += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("staircase failed to reach the sequence tail")
    pi = self.period
    p = stair.period * (pi // gcd(stair.shift, pi))
    return PeriodicSeq(tuple(self.at(stair.value(i)) for i in range(x)),
                       tuple(self.at(stair.value(x + i)) for i in range(p)))


@dataclass(frozen=True)
class Staircase:
  """Monotone integer map with an eventually arithmetic tail.

  value(x) = prefix[x] for x < len(prefix); past the prefix the values
  follow cycle with value(x + period) = value(x) + shift.
  """

  prefix: tuple
  cycle: tuple
  shift: int

  def __post_init__(self):
    if not self.cycle:
      raise EventualError("staircase cycle must be nonempty")
    if self.shift < 0:
      raise EventualError("staircase shift must be nonnegative")
    # canonical form: primitive (cycle, shift) pattern, minimal prefix
    cycle, shift = list(self.cycle), self.shift
    n = len(cycle)
    for d in _divisors(n):
      step, rem = divmod(shift * d, n)
      if rem:
        continue
      if all(cycle[j] == cycle[j % d] + step * (j // d) for j in range(n)):
        cycle, shift = cycle[:d], step
        break
    prefix = list(self.prefix)
    while prefix and prefix[-1] == cycle[-1] - shift:
      cycle.insert(0, cycle.pop() - shift)
      prefix.pop()
    object.__setattr__(self, "prefix", tuple(prefix))
    object.__setattr__(self, "cycle", tuple(cycle))
    object.__setattr__(self, "shift", shift)
    vals = [self.value(x) for x in range(len(prefix) + 2 * len(cycle) + 1)]
    if any(a > b for a, b in zip(vals, vals[1:])):
      raise EventualError("staircase must be monotone nondecreasing")

  @property
  def start(self):
    return len(self.prefix)

  @property
  def period(self):
    return len(self.cycle)

  @property
  def slope(self):
    return Fraction(self.shift, self.period)

  def value(self, x):
    if x < 0:
      raise EventualError("staircase argument must be nonnegative")
    if x < len(self.prefix):
      return self.prefix[x]
    d, r = divmod(x - len(self.prefix), len(self.cycle))
    return self.cycle[r] + self.shift * d

  __call__ = value

  @staticmethod
  def identity():
    return Staircase((), (0,), 1)

  @staticmethod
  def constant(c):
    return Staircase((), (c,), 0)

  @staticmethod
  def affine(a, b):
    """x -> a*x + b for a >= 0."""
    if a < 0:
      raise EventualError("affine staircase needs a nonnegative slope")
    return Staircase((), (b,), a) if a else Staircase.constant(b)

  @staticmethod
  def ceil_div_threshold(a, b):
    """k -> max(0, ceil((k - b) / a)) for a >= 1: the least n with
    k <= a*n + b.  The building block of min-threshold maps."""
    if a < 1:
      raise EventualError("threshold staircase needs a positive slope")
    lo = max(b, 0)
    prefix = tuple(max(0, -(-(k - b) // a)) for k in range(lo + 1))
    cyc = tuple(max(0, -(-(k - b) // a)) for k in range(lo + 1, lo + 1 + a))
    return Staircase(prefix, cyc, 1)

  def plus_const(self, c):
    return Staircase(tuple(v + c for v in self.prefix),
                     tuple(v + c for v in self.cycle), self.shift)

  def of(self, other):
    """Composition self(other(x)) as a staircase."""
    if other.shift == 0:
      t, p = other.start, other.period
      return Staircase(tuple(self.value(other.value(x)) for x in range(t)),
                       tuple(self.value(other.value(t + i)) for i in range(p)),
                       0)
    k = self.period // gcd(other.shift, self.period)
    big_p = other.period * k
    big_q = (other.shift * k // self.period) * self.shift
    x = other.start
    guard = 0
    while other.value(x) < self.start:
      x += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("staircase composition failed to stabilise")
    return Staircase(tuple(self.value(other.value(i)) for i in range(x)),
                     tuple(self.value(other.value(x + i)) for i in range(big_p)),
                     big_q)

  def max_with(self, other):
    if self.slope == other.slope:
      p = lcm(self.period, other.period)
      q = self.shift * (p // self.period)
      s = max(self.start, other.start)
      return Staircase(tuple(max(self.value(x), other.value(x)) for x in range(s)),
                       tuple(max(self.value(s + i), other.value(s + i)) for i in range(p)),
                       q)
    lo, hi = (self, other) if self.slope < other.slope else (other, self)
    window = lcm(hi.period, lo.period)
    x = max(hi.start, lo.start)
    guard = 0
    while any(hi.value(x + i) < lo.value(x + i) for i in range(window)):
      x += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("staircase max failed to stabilise")
    # past x the steeper staircase dominates a full common window, and the
    # gap only grows with each further window, so it dominates forever
    return Staircase(tuple(max(self.value(i), other.value(i)) for i in range(x)),
                     tuple(hi.value(x + i) for i in range(hi.period)),
                     hi.shift)

  def inverse_min(self):
    """y -> min{x : self(x) >= y} as a staircase; needs shift >= 1."""
    if self.shift < 1:
      raise EventualError("bounded staircases have no min-inverse")
    y0 = self.value(self.start + self.period)
    vals = []
    x = 0
    for y in range(0, y0 + self.shift + 1):
      guard = 0
      while self.value(x) < y:
        x += 1
        guard += 1
        if guard > _GUARD:
          raise EventualError("min-inverse walk failed to terminate")
      vals.append(x)
    return Staircase(tuple(vals[:y0 + 1]), tuple(vals[y0 + 1:y0 + 1 + self.shift]),
                     self.period)

  def max_arg_leq(self, bound):
    """max{x : self(x) <= bound}, or -1 when even self(0) > bound.
    Needs shift >= 1 so the walk terminates."""
    if self.shift < 1:
      raise EventualError("bounded staircases have no max-argument search")
    if self.value(0) > bound:
      return -1
    x = 0
    guard = 0
    while self.value(x + 1) <= bound:
      x += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("max-argument walk failed to terminate")
    return x


# ---------------------------------------------------------------------------
# grid families: A(x, y) = a(max(alpha1(x), alpha2(y)))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridOutcome:
  equal: bool
  witness: tuple | None          # (x0, y0): agreement for all (x, y) >= it
  counterexample: tuple | None   # ((x, y), (x', y')): two disagreeing points
  detail: str = ""


def grid_value(seq, stairs, point):
  return seq.at(max(st(c) for st, c in zip(stairs, point)))


def _mixed_check(main, sigma, tau, win):
  """Mixed dominance region.  For each parameter value s the other
  coordinate ranges over the window [sigma(s), tau(s)], the left value is
  main(s) and the right value is win(t).

  Returns (True, s_threshold, top_of_small_windows) on success or
  (False, (s, t), (s', t')) with two concrete in-region disagreements."""
  if tau.slope < sigma.slope:
    # sigma outgrows tau: windows are eventually empty forever.  Stop once
    # a full common window past both tails is empty; the gap then only
    # grows on every residue, so emptiness persists.
    span = lcm(sigma.period, tau.period)
    s = 0
    top = -1
    last_nonempty = -1
    guard = 0
    while True:
      if s >= max(sigma.start, tau.start) and \
          all(sigma(s + i) > tau(s + i) for i in range(span)):
        break
      if tau(s) >= sigma(s):
        last_nonempty = s
        top = max(top, tau(s))
      s += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("empty-window scan failed to stabilise")
    return True, last_nonempty + 1, top

  if tau.slope == sigma.slope:
    # eventually periodic windows: verify one aligned block exhaustively.
    # Values and window endpoints all replicate after `block` steps of s
    # (windows shift by exactly `delta`, a multiple of win's period).
    s0 = max(main.tail_start, sigma.start, tau.start)
    guard = 0
    while sigma(s0) < win.tail_start:
      s0 += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("window bottoms failed to clear the value tail")
    l0 = lcm(main.period, sigma.period, tau.period)
    l0 *= sigma.slope.denominator // gcd(l0, sigma.slope.denominator)
    delta0 = int(l0 * sigma.slope)
    factor = win.period // gcd(delta0, win.period) if delta0 else 1
    block = l0 * factor
    delta = delta0 * factor
    small_top = max([tau(s) for s in range(s0)], default=-1)
    for s in range(s0, s0 + block):
      for t in range(sigma(s), tau(s) + 1):
        if main.at(s) != win.at(t):
          return False, (s, t), (s + block, t + delta)
    return True, s0, small_top

  # tau outgrows sigma: window widths grow without bound, so the windows
  # sweep the whole tail of win.  Equality forces win to be eventually
  # constant and main to settle on the same value.
  cw = win.eventually_constant()
  cm = main.eventually_constant()
  if cw is not None and cm is not None and cw == cm:
    s0 = max(main.tail_start, sigma.start, tau.start)
    guard = 0
    while sigma(s0) < win.tail_start:
      s0 += 1
      guard += 1
      if guard > _GUARD:
        raise EventualError("widening windows failed to open")
    small_top = max([tau(s) for s in range(s0)], default=-1)
    return True, s0, small_top
  # hunt two concrete disagreements: walk s until the window contains a
  # full cycle of win past its transient, then pick a mismatching t
  pairs = []
  s = max(main.tail_start, sigma.start, tau.start)
  guard = 0
  while len(pairs) < 2:
    lo = max(sigma(s), win.tail_start)
    hi = tau(s)
    if hi - lo + 1 >= win.period + 1:
      for t in range(lo, hi + 1):
        if main.at(s) != win.at(t):
          pairs.append((s, t))
          break
    s += 1
    guard += 1
    if guard > _GUARD:
      raise EventualError("failed to realise a mixed-region disagreement")
  return False, pairs[0], pairs[1]


def grid_tail_equal(a, alphas, b, betas):
  """Exact tail equality for two grid families over N x N.

  a, b: PeriodicSeq of values; alphas, betas: pairs of Staircases with
  shift >= 1 (the per-coordinate reindexing maps).
  """
  for st in (*alphas, *betas):
    if st.shift < 1:
      raise EventualError("grid comparison needs unbounded staircases")
  a1, a2 = alphas
  b1, b2 = betas

  bounds = [st.start for st in (*alphas, *betas)]

  def _realise_along(first, period, free_window):
    # walk the recurrence class until the free coordinate's window opens,
    # collecting two distinct in-region disagreement points
    pts = []
    s = first
    guard = 0
    while len(pts) < 2:
      t = free_window(s)
      if t >= 0:
        pts.append((s, t))
      s += period
      guard += 1
      if guard > _GUARD:
        raise EventualError("aligned-region window never opened")
    return tuple(pts)

  # aligned region, x realises both maxes: values depend on x only
  left_x = a.compose_stair(a1)
  right_x = b.compose_stair(b1)
  ok, info = left_x.tail_equal(right_x)
  if not ok:
    pts = _realise_along(info[0], info[1] - info[0],
                         lambda s: min(a2.max_arg_leq(a1(s)), b2.max_arg_leq(b1(s))))
    return GridOutcome(False, None, pts, "x-aligned region disagrees")
  bounds.append(info)

  # aligned region, y realises both maxes
  left_y = a.compose_stair(a2)
  right_y = b.compose_stair(b2)
  ok, info = left_y.tail_equal(right_y)
  if not ok:
    pts = _realise_along(info[0], info[1] - info[0],
                         lambda t: min(a1.max_arg_leq(a2(t)), b1.max_arg_leq(b2(t))))
    pts = tuple((s, t) for t, s in pts)
    return GridOutcome(False, None, pts, "y-aligned region disagrees")
  bounds.append(info)

  # mixed region: x realises the a-max, y realises the b-max, so
  # t ranges over [min{t : b2(t) >= b1(s)}, max{t : a2(t) <= a1(s)}]
  sigma = b2.inverse_min().of(b1)
  tau = a2.inverse_min().of(a1.plus_const(1)).plus_const(-1)
  res = _mixed_check(left_x, sigma, tau, right_y)
  if not res[0]:
    return GridOutcome(False, None, (res[1], res[2]), "mixed region disagrees")
  bounds.append(res[1])
  bounds.append(res[2] + 1)

  # mixed region: y realises the a-max, x realises the b-max; the helper's
  # parameter is the y coordinate here, so swap its pairs back
  sigma = b1.inverse_min().of(b2)
  tau = a1.inverse_min().of(a2.plus_const(1)).plus_const(-1)
  res = _mixed_check(left_y, sigma, tau, right_x)
  if not res[0]:
    (u1, v1), (u2, v2) = res[1], res[2]
    return GridOutcome(False, None, (((v1, u1)), (v2, u2)), "mixed region disagrees")
  bounds.append(res[1])
  bounds.append(res[2] + 1)

  w = max(bounds)
  return GridOutcome(True, (w, w), None)
