"""Parameter sets for Hilbert space embeddings of the diagram categories."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

KINDS = ("real", "pseudoreal", "general")


class SpecError(ValueError):
    """An embedding parameter set violates its defining constraint."""


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


@dataclass(frozen=True)
class EmbeddingSpec:
    """kind, Hilbert dimension n, pairing count k (real kind), parameters and loop value d.

    real:        0 < l_i < 1, len(lambdas) == k, 2k <= n,
                 sum(l^2 + l^-2) + n - 2k == d
    pseudoreal:  0 < l_i <= 1, n even, len(lambdas) == n/2, sum(l^2 + l^-2) == d
    general:     l_i > 0 monotone, len(lambdas) == n, sum(l^2) == sum(l^-2) == d
    """

    kind: str
    n: int
    lambdas: tuple = ()
    d: float = 0.0
    k: int = 0
    tol: float = field(default=1e-9, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "d", float(self.d))
        validate(self)

    @property
    def category(self) -> str:
        return "oriented" if self.kind == "general" else "tl"

    @property
    def zigzag_sign(self) -> int:
        return -1 if self.kind == "pseudoreal" else 1

    def expected_eigenvalues(self) -> list:
        """Eigenvalues of j*j predicted by the parameters, ascending."""
        lam = self.lambdas
        if self.kind == "general":
            vals = [x * x for x in lam]
        else:
            vals = [x * x for x in lam] + [1 / (x * x) for x in lam]
            if self.kind == "real":
                vals += [1.0] * (self.n - 2 * self.k)
        return sorted(vals)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "lambdas": list(self.lambdas), "d": self.d}
        if self.kind == "real":
            out["k"] = self.k
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddingSpec":
        lambdas = obj.get("lambdas", [])
        k = obj.get("k", len(lambdas) if obj.get("kind") == "real" else 0)
        d = obj.get("d")
        if d is None:
            d = implied_d(obj["kind"], obj["n"], lambdas, k)
        return cls(obj["kind"], int(obj["n"]), tuple(lambdas), float(d), int(k),
                   float(obj.get("tol", 1e-9)))


def implied_d(kind: str, n: int, lambdas, k: int = 0) -> float:
    lam = [float(x) for x in lambdas]
    if kind == "real":
        return sum(x * x + 1 / (x * x) for x in lam) + n - 2 * k
    if kind == "pseudoreal":
        return sum(x * x + 1 / (x * x) for x in lam)
    if kind == "general":
        return sum(x * x for x in lam)
    raise SpecError(f"unknown kind {kind!r}; expected one of {KINDS}")


def validate(spec: EmbeddingSpec) -> None:
    kind, n, lam, d, tol = spec.kind, spec.n, spec.lambdas, spec.d, spec.tol
    if kind not in KINDS:
        raise SpecError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if n < 1:
        raise SpecError("n must be a positive integer")
    if any(not (x > 0) or math.isinf(x) for x in lam):
        raise SpecError("all lambdas must be positive and finite")
    if kind == "real":
        if spec.k < 0 or 2 * spec.k > n:
            raise SpecError(f"real kind requires 0 <= 2k <= n, got k={spec.k}, n={n}")
        if len(lam) != spec.k:
            raise SpecError(f"real kind requires exactly k={spec.k} lambdas, got {len(lam)}")
        if any(not (x < 1) for x in lam):
            raise SpecError("real kind requires 0 < l_i < 1")
        total = implied_d(kind, n, lam, spec.k)
        if not _close(total, d, tol):
            raise SpecError(
                f"real kind requires sum(l^2 + l^-2) + n - 2k == d; got {total!r} vs d={d!r}")
    elif kind == "pseudoreal":
        if n % 2:
            raise SpecError(f"pseudoreal kind requires even n, got n={n}")
        if len(lam) != n // 2:
            raise SpecError(f"pseudoreal kind requires n/2={n // 2} lambdas, got {len(lam)}")
        if any(x > 1 + tol for x in lam):
            raise SpecError("pseudoreal kind requires 0 < l_i <= 1")
        total = implied_d(kind, n, lam)
        if not _close(total, d, tol):
            raise SpecError(
                f"pseudoreal kind requires sum(l^2 + l^-2) == d; got {total!r} vs d={d!r}")
    else:
        if len(lam) != n:
            raise SpecError(f"general kind requires n={n} lambdas, got {len(lam)}")
        inc = all(a <= b for a, b in zip(lam, lam[1:]))
        dec = all(a >= b for a, b in zip(lam, lam[1:]))
        if not (inc or dec):
            raise SpecError("general kind requires a monotone list of lambdas")
        s2 = sum(x * x for x in lam)
        sm2 = sum(1 / (x * x) for x in lam)
        if not (_close(s2, d, tol) and _close(sm2, d, tol)):
            raise SpecError(
                f"general kind requires sum(l^2) == sum(l^-2) == d; "
                f"got {s2!r}, {sm2!r} vs d={d!r}")


def random_spec(kind: str, rng: random.Random, n_max: int = 5,
                lam_range: tuple = (0.3, 3.0)) -> EmbeddingSpec:
    """A random valid parameter set with every lambda inside ``lam_range``."""
    lo, hi = lam_range
    if kind == "real":
        n = rng.randint(1, n_max)
        k = rng.randint(0, n // 2)
        lam = [rng.uniform(max(lo, 1e-3), min(hi, 1.0) - 1e-6) for _ in range(k)]
        return EmbeddingSpec("real", n, tuple(lam), implied_d("real", n, lam, k), k)
    if kind == "pseudoreal":
        n = 2 * rng.randint(1, max(1, n_max // 2))
        lam = [rng.uniform(max(lo, 1e-3), min(hi, 1.0)) for _ in range(n // 2)]
        return EmbeddingSpec("pseudoreal", n, tuple(lam), implied_d("pseudoreal", n, lam))
    if kind == "general":
        for _ in range(1000):
            n = rng.randint(1, n_max)
            if n == 1:
                lam = [1.0]
            else:
                lam = [rng.uniform(lo, hi) for _ in range(n - 1)]
                # solve t^2 - t^-2 = sum(l^-2) - sum(l^2) for the last parameter
                c = sum(1 / (x * x) for x in lam) - sum(x * x for x in lam)
                t = math.sqrt((c + math.sqrt(c * c + 4)) / 2)
                if not (lo <= t <= hi):
                    continue
                lam.append(t)
            lam.sort()
            return EmbeddingSpec("general", n, tuple(lam), implied_d("general", n, lam))
        raise SpecError("could not sample general parameters inside the requested range")
    raise SpecError(f"unknown kind {kind!r}; expected one of {KINDS}")
