"""Symmetric Boolean functions, their jump parameter, restrictions and OR embeddings.

Input indices are 1-based throughout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path


class ParameterError(ValueError):
    pass


class DomainError(ValueError):
    pass


class NotApplicableError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetricFunction:
    n: int
    spectrum: tuple[int, ...]
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        spec = tuple(int(v) for v in self.spectrum)
        if len(spec) != self.n + 1:
            raise ParameterError(f"spectrum needs {self.n + 1} entries, got {len(spec)}")
        if any(v not in (0, 1) for v in spec):
            raise ParameterError("spectrum entries must be 0 or 1")
        object.__setattr__(self, "spectrum", spec)

    def __call__(self, x) -> int:
        if len(x) != self.n:
            raise ParameterError(f"input has {len(x)} bits, expected {self.n}")
        return self.spectrum[sum(int(b) for b in x)]

    @property
    def is_constant(self) -> bool:
        return len(set(self.spectrum)) == 1

    def negated(self) -> SymmetricFunction:
        return SymmetricFunction(self.n, tuple(1 - v for v in self.spectrum), f"not({self.name})")

    def reflected(self) -> SymmetricFunction:
        """x -> f(not x); reverses the spectrum."""
        return SymmetricFunction(self.n, self.spectrum[::-1], f"{self.name}(~x)")


def make_named(family: str, n: int, tau: int | None = None) -> SymmetricFunction:
    """Build OR, AND, PARITY, MAJORITY or THRESHOLD(tau) on ``n`` bits.

    ``family`` is case-insensitive; ``"threshold3"`` is accepted as shorthand
    for ``family="threshold", tau=3``.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    fam = family.lower()
    m = re.fullmatch(r"threshold\(?(\d+)\)?", fam)
    if m:
        fam, tau = "threshold", int(m.group(1))
    ks = range(n + 1)
    if fam == "or":
        spec = [int(k > 0) for k in ks]
    elif fam == "and":
        spec = [int(k == n) for k in ks]
    elif fam == "parity":
        spec = [k % 2 for k in ks]
    elif fam == "majority":
        tau = (n + 2) // 2  # ceil((n+1)/2)
        spec = [int(k >= tau) for k in ks]
    elif fam == "threshold":
        if tau is None or not 1 <= tau <= n:
            raise ParameterError(f"threshold needs 1 <= tau <= n, got tau={tau}, n={n}")
        spec = [int(k >= tau) for k in ks]
        return SymmetricFunction(n, tuple(spec), f"threshold{tau}")
    else:
        raise ParameterError(f"unknown family {family!r}")
    return SymmetricFunction(n, tuple(spec), fam)


def _constant_on(spectrum, lo, hi) -> bool:
    return lo > hi or len(set(spectrum[lo:hi + 1])) == 1


def jump_parameter(f: SymmetricFunction) -> int:
    """Smallest t >= 1 such that f is constant on weights t..n-t.

    An empty or single-weight range counts as constant, so the result is at
    most n//2 + 1.
    """
    if f.is_constant:
        raise DomainError("jump parameter is undefined for a constant function")
    t = 1
    while not _constant_on(f.spectrum, t, f.n - t):
        t += 1
    return t


def middle_value(f: SymmetricFunction, t: int | None = None) -> int:
    """Value of f on the middle weights t..n-t (spectrum[t] if that range is empty)."""
    if t is None:
        t = jump_parameter(f)
    return f.spectrum[min(t, f.n)]


@dataclass(frozen=True)
class Restriction:
    n: int
    ones: frozenset[int] = frozenset()
    zeros: frozenset[int] = frozenset()

    def __post_init__(self):
        ones, zeros = frozenset(self.ones), frozenset(self.zeros)
        object.__setattr__(self, "ones", ones)
        object.__setattr__(self, "zeros", zeros)
        for i in ones | zeros:
            if not 1 <= i <= self.n:
                raise ParameterError(f"index {i} out of range 1..{self.n}")
        if ones & zeros:
            raise ParameterError(f"indices fixed to both 0 and 1: {sorted(ones & zeros)}")

    @property
    def free(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if i not in self.ones and i not in self.zeros]

    def assemble(self, y) -> list[int]:
        """Full n-bit input with fixed bits filled in and ``y`` on the free positions."""
        free = self.free
        if len(y) != len(free):
            raise ParameterError(f"expected {len(free)} free bits, got {len(y)}")
        x = [0] * self.n
        for i in self.ones:
            x[i - 1] = 1
        for i, b in zip(free, y):
            x[i - 1] = int(b)
        return x


def restrict(f: SymmetricFunction, r: Restriction) -> SymmetricFunction:
    if r.n != f.n:
        raise ParameterError(f"restriction is for {r.n} bits, function has {f.n}")
    m = len(r.free)
    if m == 0:
        raise ParameterError("restriction leaves no free bits")
    shift = len(r.ones)
    return SymmetricFunction(m, f.spectrum[shift:shift + m + 1], f"{f.name}|r")


POLARITIES = ("identity", "negated", "reflected", "reflected-negated")


def apply_polarity(f: SymmetricFunction, polarity: str) -> SymmetricFunction:
    if polarity not in POLARITIES:
        raise ParameterError(f"unknown polarity {polarity!r}")
    g = f.reflected() if polarity.startswith("reflected") else f
    return g.negated() if polarity.endswith("negated") else g


def embed_or(f: SymmetricFunction) -> tuple[int, Restriction, str]:
    """Find a restriction of f (up to input/output flips) that is an OR.

    Returns ``(m, restriction, polarity)`` such that
    ``restrict(apply_polarity(f, polarity), restriction)`` equals OR_m, with m
    as large as the spectrum allows (always at least n - 2t).
    """
    t = jump_parameter(f)
    if 4 * t >= f.n:
        raise NotApplicableError(f"t={t} is not below n/4 (n={f.n})")
    n = f.n
    c = f.spectrum[t]
    # t is minimal, so the spectrum leaves c just below t or just above n - t.
    if f.spectrum[t - 1] != c:
        g, reflected = f, False
    else:
        g, reflected = f.reflected(), True
    a = t - 1
    m = 0
    while a + m + 1 <= n and g.spectrum[a + m + 1] == c:
        m += 1
    negated = g.spectrum[a] == 1
    polarity = {(False, False): "identity", (False, True): "negated",
                (True, False): "reflected", (True, True): "reflected-negated"}[(reflected, negated)]
    r = Restriction(n, ones=frozenset(range(1, a + 1)), zeros=frozenset(range(a + m + 1, n + 1)))
    return m, r, polarity


def read_spectrum(path) -> SymmetricFunction:
    """Parse the text format ``n= <int>`` followed by n+1 whitespace-separated bits."""
    text = Path(path).read_text()
    m = re.match(r"\s*n\s*=\s*(\d+)\s*\n?(.*)", text, re.S)
    if not m:
        raise ParameterError(f"{path}: expected a leading 'n= <int>' line")
    n = int(m.group(1))
    bits = [int(tok) for tok in m.group(2).split()]
    return SymmetricFunction(n, tuple(bits), Path(path).stem)


def write_spectrum(f: SymmetricFunction, path) -> None:
    Path(path).write_text(f"n= {f.n}\n" + " ".join(map(str, f.spectrum)) + "\n")
