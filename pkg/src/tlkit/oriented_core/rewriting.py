"""Normal form for compositions of terms: caps first, then cups.

A term is a tensor product of the six basic arrows.  Each term is split by
the interchange law into single-generator layers; then every place where a
cap sits directly above a cup is rewritten by one of the local moves in
``MOVES`` until all caps precede all cups.  The move table is data so it
can be audited entry by entry.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..tl_core.scalars import Backend
from . import morphism as om
from .morphism import OrientedMorphism, OrientationError

# symbol -> (source word, target word)
SYMBOLS = {
    "1x": ("x", "x"),
    "1X": ("X", "X"),
    "R": ("", "Xx"),
    "Rb": ("", "xX"),
    "R*": ("Xx", ""),
    "Rb*": ("xX", ""),
}


@dataclass(frozen=True)
class Move:
    name: str
    lower: tuple   # applied first
    upper: tuple   # applied second
    result: str    # "scalar", "identity" or "swap"
    rhs: tuple = ()


# One entry per local composition of two pieces.  Words are written with
# X for x̄; "swap" results are stored as (cap piece, cup piece) tensor factors.
MOVES = (
    Move("1_x⊗R*∘R̄⊗1_x=1_x", ("Rb", "1x"), ("1x", "R*"), "identity", ("x",)),
    Move("R*⊗1_X∘1_X⊗R̄=1_X", ("1X", "Rb"), ("R*", "1X"), "identity", ("X",)),
    Move("1_X⊗R̄*∘R⊗1_X=1_X", ("R", "1X"), ("1X", "Rb*"), "identity", ("X",)),
    Move("R̄*⊗1_x∘1_x⊗R=1_x", ("1x", "R"), ("Rb*", "1x"), "identity", ("x",)),
    Move("R*∘R=d", ("R",), ("R*",), "scalar"),
    Move("R̄*∘R̄=d", ("Rb",), ("Rb*",), "scalar"),
    Move("1_x∘1_x=1_x", ("1x",), ("1x",), "identity", ("x",)),
    Move("1_X∘1_X=1_X", ("1X",), ("1X",), "identity", ("X",)),
    Move("1_Xx∘R=R", ("R",), ("1X", "1x"), "swap", ("R",)),
    Move("1_xX∘R̄=R̄", ("Rb",), ("1x", "1X"), "swap", ("Rb",)),
    Move("R*∘1_Xx=R*", ("1X", "1x"), ("R*",), "swap", ("R*",)),
    Move("R̄*∘1_xX=R̄*", ("1x", "1X"), ("Rb*",), "swap", ("Rb*",)),
    Move("1_xX⊗R*∘R̄⊗1_Xx=R̄⊗R*", ("Rb", "1X", "1x"), ("1x", "1X", "R*"), "swap", ("Rb", "R*")),
    Move("1_Xx⊗R*∘R⊗1_Xx=R⊗R*", ("R", "1X", "1x"), ("1X", "1x", "R*"), "swap", ("R", "R*")),
    Move("1_xX⊗R̄*∘R̄⊗1_xX=R̄⊗R̄*", ("Rb", "1x", "1X"), ("1x", "1X", "Rb*"), "swap", ("Rb", "Rb*")),
    Move("1_Xx⊗R̄*∘R⊗1_xX=R⊗R̄*", ("R", "1x", "1X"), ("1X", "1x", "Rb*"), "swap", ("R", "Rb*")),
)
_MOVE_INDEX = {(m.lower, m.upper): m for m in MOVES}


class RewriteError(Exception):
    pass


def layer_words(layer) -> tuple:
    src = "".join(SYMBOLS[s][0] for s in layer)
    tgt = "".join(SYMBOLS[s][1] for s in layer)
    return src, tgt


@dataclass(frozen=True)
class TermExpression:
    """layers[0] is applied last, as in the written composition L0 ∘ L1 ∘ ... ."""

    layers: tuple

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        for layer in layers:
            for s in layer:
                if s not in SYMBOLS:
                    raise RewriteError(f"unknown basic arrow {s!r}")
        for upper, lower in zip(layers, layers[1:]):
            if layer_words(lower)[1] != layer_words(upper)[0]:
                raise RewriteError(
                    f"ill-typed composition: {lower} ends in {layer_words(lower)[1]!r}, "
                    f"{upper} starts at {layer_words(upper)[0]!r}")
        object.__setattr__(self, "layers", layers)

    @property
    def source(self) -> str:
        return layer_words(self.layers[-1])[0] if self.layers else ""

    @property
    def target(self) -> str:
        return layer_words(self.layers[0])[1] if self.layers else ""

    @classmethod
    def parse(cls, text: str) -> "TermExpression":
        """Parse e.g. ``"Rb* ⊗ 1x ∘ 1x ⊗ R"``; ASCII ``o`` and ``(x)`` also work."""
        text = text.replace("(x)", "⊗")
        parts = [p for p in text.replace(" o ", "∘").split("∘")]
        layers = []
        for part in parts:
            syms = [s.strip().strip("()").strip() for s in part.split("⊗")]
            layers.append(tuple(s for s in syms if s))
        return cls(tuple(layers))


# An atomic layer is (kind, word_below, position, symbol): one cup or cap at
# ``position`` with identities elsewhere.  A cup's position is where its two
# letters land in the word above; a cap's is where they sit in the word below.

def _atomize(layer) -> list:
    """Split one term into cap layers (applied first) then cup layers."""
    src, _ = layer_words(layer)
    cap_positions, cup_positions = [], []
    src_pos = tgt_pos = 0
    for s in layer:
        s_src, s_tgt = SYMBOLS[s]
        if s in ("R*", "Rb*"):
            cap_positions.append((src_pos, s))
        elif s in ("R", "Rb"):
            cup_positions.append((tgt_pos, s))
        src_pos += len(s_src)
        tgt_pos += len(s_tgt)
    atoms = []
    word = src
    # right to left keeps the remaining source offsets valid
    for p, s in reversed(cap_positions):
        atoms.append(("cap", word, p, s))
        word = word[:p] + word[p + 2:]
    # target offsets: left to right, each prefix is already final
    for p, s in cup_positions:
        atoms.append(("cup", word, p, s))
        word = word[:p] + SYMBOLS[s][1] + word[p:]
    return atoms


def _pieces(cup_atom, cap_atom):
    """Lower and upper pieces of the minimal local composition cap∘cup."""
    _, below, i, cup_sym = cup_atom
    _, mid, j, cap_sym = cap_atom
    if j == i:
        return (cup_sym,), (cap_sym,)
    if j == i + 1:
        return (cup_sym, "1" + mid[i + 2]), ("1" + mid[i], cap_sym)
    if j == i - 1:
        return ("1" + mid[i - 1], cup_sym), (cap_sym, "1" + mid[i + 1])
    if j == i + 2:
        lower = (cup_sym, "1" + mid[j], "1" + mid[j + 1])
        upper = ("1" + mid[i], "1" + mid[i + 1], cap_sym)
        return lower, upper
    return None


def _swap_disjoint(cup_atom, cap_atom):
    """cap∘cup with disjoint supports, rewritten as cup∘cap."""
    _, below, i, cup_sym = cup_atom
    _, mid, j, cap_sym = cap_atom
    if j >= i + 2:
        new_cap = ("cap", below, j - 2, cap_sym)
        cup_word = below[: j - 2] + below[j:]
        new_cup = ("cup", cup_word, i, cup_sym)
    else:
        new_cap = ("cap", below, j, cap_sym)
        cup_word = below[:j] + below[j + 2:]
        new_cup = ("cup", cup_word, i - 2, cup_sym)
    return new_cap, new_cup


def rewrite(expr: TermExpression, rng: random.Random | None = None):
    """Return (loop count, atomic layers in application order, moves used).

    ``rng`` picks which rewritable spot to treat next; None means leftmost.
    """
    atoms = []
    for layer in reversed(expr.layers):
        atoms.extend(_atomize(layer))
    # identity-only layers vanish by the 1∘1 moves
    loops = 0
    log = []
    while True:
        spots = [k for k in range(len(atoms) - 1)
                 if atoms[k][0] == "cup" and atoms[k + 1][0] == "cap"]
        if not spots:
            break
        k = rng.choice(spots) if rng else spots[0]
        cup_atom, cap_atom = atoms[k], atoms[k + 1]
        pieces = _pieces(cup_atom, cap_atom)
        if pieces is None:
            # disjoint and not adjacent: two separate identity pieces
            i, j = cup_atom[2], cap_atom[2]
            mid = cap_atom[1]
            cap_move = _MOVE_INDEX.get((("1" + mid[j], "1" + mid[j + 1]), (cap_atom[3],)))
            cup_move = _MOVE_INDEX.get(((cup_atom[3],), ("1" + mid[i], "1" + mid[i + 1])))
            if cap_move is None or cup_move is None:
                raise RewriteError("no move for disjoint pieces")
            log.extend([cup_move.name, cap_move.name])
            atoms[k:k + 2] = list(_swap_disjoint(cup_atom, cap_atom))
            continue
        move = _MOVE_INDEX.get(pieces)
        if move is None:
            raise RewriteError(f"no move for pieces {pieces}")
        log.append(move.name)
        if move.result == "scalar":
            loops += 1
            del atoms[k:k + 2]
        elif move.result == "identity":
            del atoms[k:k + 2]
        else:
            atoms[k:k + 2] = list(_swap_disjoint(cup_atom, cap_atom))
    return loops, atoms, log


def _atom_morphism(atom, backend: Backend) -> OrientedMorphism:
    kind, word, p, s = atom
    gen = {"R": om.R, "Rb": om.Rbar}
    if kind == "cup":
        g = gen[s](backend)
        left, right = word[:p], word[p:]
    else:
        g = om.adjoint(gen[s[:-1]](backend))
        left, right = word[:p], word[p + 2:]
    return om.tensor(om.tensor(om.identity(left, backend), g), om.identity(right, backend))


def normal_form(expr: TermExpression, backend: Backend, rng: random.Random | None = None) -> OrientedMorphism:
    """d^k · (cups) ∘ (caps) as a canonical diagram sum."""
    loops, atoms, _ = rewrite(expr, rng)
    result = om.identity(expr.source, backend)
    kinds = [a[0] for a in atoms]
    if "cup" in kinds and "cap" in kinds[kinds.index("cup"):]:
        raise RewriteError("rewriting stopped before caps preceded cups")
    for atom in atoms:
        result = om.compose(_atom_morphism(atom, backend), result)
    return result.scale(backend.power(backend.d, loops))


def evaluate_directly(expr: TermExpression, backend: Backend) -> OrientedMorphism:
    """Compose the layers with the diagram engine, without rewriting."""
    result = om.identity(expr.source, backend)
    for layer in reversed(expr.layers):
        term = om.identity("", backend)
        for s in layer:
            if s in ("1x", "1X"):
                g = om.identity(s[1], backend)
            elif s == "R":
                g = om.R(backend)
            elif s == "Rb":
                g = om.Rbar(backend)
            elif s == "R*":
                g = om.adjoint(om.R(backend))
            else:
                g = om.adjoint(om.Rbar(backend))
            term = om.tensor(term, g)
        result = om.compose(term, result)
    return result


def check_move_table(backend: Backend) -> dict:
    """Evaluate both sides of every move with the diagram engine."""
    report = {}
    for m in MOVES:
        lhs = evaluate_directly(TermExpression((m.upper, m.lower)), backend)
        if m.result == "scalar":
            rhs = om.identity("", backend).scale(backend.d)
        elif m.result == "identity":
            rhs = om.identity(m.rhs[0], backend)
        else:
            rhs = evaluate_directly(TermExpression((m.rhs,)), backend)
        try:
            report[m.name] = lhs == rhs
        except OrientationError:
            report[m.name] = False
    return report
