"""Kripke models, the forcing relation, and a bounded brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .formula import Atom, BlackBox, Bottom, Box, Formula, Implies, atoms, is_core
from .sequent import LinearNestedSequent, formula_translation

DEFAULT_ENUMERATION_CAP = 1 << 24


class UnknownWorld(Exception):
    pass


class BudgetExceeded(Exception):
    pass


@dataclass
class KripkeModel:
    """Finite pointed-frame data; valuation stores the true atoms per world."""

    worlds: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    true_atoms: dict[str, frozenset[str]] = field(default_factory=dict)

    def holds(self, w: str, atom: str) -> bool:
        return atom in self.true_atoms.get(w, frozenset())

    def successors(self, w: str, symmetric: bool = False):
        out = {v for (u, v) in self.edges if u == w}
        if symmetric:
            out |= {u for (u, v) in self.edges if v == w}
        return out

    def predecessors(self, w: str, symmetric: bool = False):
        out = {u for (u, v) in self.edges if v == w}
        if symmetric:
            out |= {v for (u, v) in self.edges if u == w}
        return out

    def to_json(self, root: str | None = None) -> dict:
        data = {
            "worlds": list(self.worlds),
            "edges": sorted([u, v] for (u, v) in self.edges),
            "valuation": {
                w: {a: True for a in sorted(self.true_atoms.get(w, frozenset()))}
                for w in self.worlds
                if self.true_atoms.get(w)
            },
        }
        if root is not None:
            data["root"] = root
        return data

    @classmethod
    def from_json(cls, data: dict) -> KripkeModel:
        worlds = tuple(data["worlds"])
        edges = frozenset((u, v) for u, v in data.get("edges", []))
        val = {
            w: frozenset(a for a, b in val.items() if b)
            for w, val in data.get("valuation", {}).items()
        }
        return cls(worlds, edges, val)

    def to_dot(self, root: str | None = None) -> str:
        lines = ["digraph countermodel {"]
        for w in self.worlds:
            label = w
            trues = sorted(self.true_atoms.get(w, frozenset()))
            if trues:
                label += "\\n" + " ".join(trues)
            shape = "doublecircle" if w == root else "circle"
            lines.append(f'  "{w}" [shape={shape}, label="{label}"];')
        for u, v in sorted(self.edges):
            lines.append(f'  "{u}" -> "{v}";')
        lines.append("}")
        return "\n".join(lines)


def forces(m: KripkeModel, w: str, f: Formula, symmetric: bool = False) -> bool:
    """The forcing relation for core formulas.

    With symmetric=True both modalities quantify over the symmetric closure
    of the relation, which is how KB countermodels are checked.
    """
    if w not in m.worlds:
        raise UnknownWorld(w)
    if isinstance(f, Atom):
        return m.holds(w, f.name)
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Implies):
        return not forces(m, w, f.left, symmetric) or forces(m, w, f.right, symmetric)
    if isinstance(f, Box):
        return all(forces(m, v, f.body, symmetric) for v in m.successors(w, symmetric))
    if isinstance(f, BlackBox):
        return all(forces(m, v, f.body, symmetric) for v in m.predecessors(w, symmetric))
    raise ValueError(f"not a core formula: {f}")


def falsifies(m: KripkeModel, w: str, s: LinearNestedSequent, symmetric: bool = False) -> bool:
    return not forces(m, w, formula_translation(s), symmetric)


def _postorder(f: Formula, seen: list, marked: set):
    if f in marked:
        return
    if isinstance(f, Implies):
        _postorder(f.left, seen, marked)
        _postorder(f.right, seen, marked)
    elif isinstance(f, (Box, BlackBox)):
        _postorder(f.body, seen, marked)
    marked.add(f)
    seen.append(f)


def bounded_countermodel_search(
    f: Formula,
    max_worlds: int = 3,
    symmetric: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
):
    """Exhaustively search all models with up to max_worlds worlds for one
    falsifying f; returns the canonically first (model, world) or None.

    Enumeration order: ascending world count, then relation bitmask, then
    valuation bitmask, then world index. The hit is re-verified with forces
    before it is returned.
    """
    if not is_core(f):
        raise ValueError(f"not a core formula: {f}")
    if max_worlds > 4:
        raise ValueError("max_worlds is capped at 4")
    names = sorted(atoms(f))
    na = len(names)
    total = sum((1 << (k * k)) * (1 << (k * na)) for k in range(1, max_worlds + 1))
    if total > cap:
        raise BudgetExceeded(f"{total} models exceeds cap {cap}")

    subs: list[Formula] = []
    _postorder(f, subs, set())

    for k in range(1, max_worlds + 1):
        full = (1 << k) - 1
        nv = 1 << (k * na)
        vs = np.arange(nv, dtype=np.int64)
        atom_masks = {}
        for i, name in enumerate(names):
            mask = np.zeros(nv, dtype=np.int64)
            for w in range(k):
                mask |= ((vs >> (i * k + w)) & 1) << w
            atom_masks[name] = mask
        zeros = np.zeros(nv, dtype=np.int64)
        for r in range(1 << (k * k)):
            succ = [0] * k
            pred = [0] * k
            for i in range(k):
                for j in range(k):
                    if r >> (i * k + j) & 1:
                        succ[i] |= 1 << j
                        pred[j] |= 1 << i
            if symmetric:
                both = [succ[i] | pred[i] for i in range(k)]
                succ = pred = both
            memo: dict[Formula, np.ndarray] = {}
            for g in subs:
                if isinstance(g, Atom):
                    memo[g] = atom_masks[g.name]
                elif isinstance(g, Bottom):
                    memo[g] = zeros
                elif isinstance(g, Implies):
                    memo[g] = (memo[g.left] ^ full) | memo[g.right]
                else:
                    body = memo[g.body]
                    frame = succ if isinstance(g, Box) else pred
                    acc = np.zeros(nv, dtype=np.int64)
                    for w in range(k):
                        acc |= ((body & frame[w]) == frame[w]).astype(np.int64) << w
                    memo[g] = acc
            res = memo[f]
            bad = np.nonzero(res != full)[0]
            if bad.size:
                v0 = int(bad[0])
                worlds = tuple(f"w{i + 1}" for i in range(k))
                edges = frozenset(
                    (worlds[i], worlds[j])
                    for i in range(k)
                    for j in range(k)
                    if r >> (i * k + j) & 1
                )
                va = {
                    worlds[w]: frozenset(
                        names[i] for i in range(na) if v0 >> (i * k + w) & 1
                    )
                    for w in range(k)
                }
                model = KripkeModel(worlds, edges, {w: s for w, s in va.items() if s})
                mask = int(res[v0])
                w0 = next(worlds[w] for w in range(k) if not (mask >> w) & 1)
                if forces(model, w0, f, symmetric):
                    raise AssertionError("enumeration disagrees with forces")
                return model, w0
    return None
