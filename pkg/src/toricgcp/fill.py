"""Essential subsets, the face-wise fill criterion and greedy irreducible fills."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .geometry import as_tuple, dim_of, face, minkowski_sum, mixed_volume, normal_face_reps


class FillError(ValueError):
    pass


@dataclass(frozen=True)
class FillCertificate:
    D: tuple
    E: tuple
    witnesses: tuple          # (w, J) pairs, J a 1-based essential subset of E^w
    irreducible: bool | None = None

    def to_json(self) -> dict:
        return {
            "fills": True,
            "D": [[list(p) for p in s] for s in self.D],
            "E": [[list(p) for p in s] for s in self.E],
            "irreducible": self.irreducible,
            "witnesses": [{"w": list(w), "essential": list(J)} for w, J in self.witnesses],
        }


@dataclass(frozen=True)
class FillRefutation:
    D: tuple
    E: tuple
    w: tuple                  # first face normal where the criterion fails
    reason: str

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"fills": False, "w": list(self.w) if self.w is not None else None,
                "reason": self.reason}


def _support_indices(t) -> set:
    return {i for i, s in enumerate(t) if s}


def is_essential(t: Sequence, J: Iterable[int]) -> bool:
    """Essentiality of a 1-based index set ``J`` for the tuple ``t``.

    Entries of ``t`` may be empty.
    """
    t = as_tuple(t, allow_empty=True)
    J = tuple(sorted(set(J)))
    if not J:
        raise FillError("J must be nonempty")
    if J[0] < 1 or J[-1] > len(t):
        raise FillError(f"index set {J} not inside [1, {len(t)}]")
    idx = [j - 1 for j in J]
    if not set(idx) <= _support_indices(t):
        return False
    if dim_of(minkowski_sum([t[i] for i in idx])) != len(J) - 1:
        return False
    for r in range(1, len(J)):
        for sub in itertools.combinations(idx, r):
            if dim_of(minkowski_sum([t[i] for i in sub])) < r:
                return False
    return True


def essential_subsets(t: Sequence) -> list:
    """All essential subsets (1-based tuples) by exhaustive enumeration."""
    t = as_tuple(t, allow_empty=True)
    out = []
    for r in range(1, len(t) + 1):
        for J in itertools.combinations(range(1, len(t) + 1), r):
            if is_essential(t, J):
                out.append(J)
    return out


def _face_tuple(t, w):
    return tuple(face(s, w) for s in t)


def fills(D: Sequence, E: Sequence, reps: list | None = None, mv: int | None = None):
    """Decide whether ``D`` fills ``E`` using the face-wise criterion.

    Returns a :class:`FillCertificate` or a falsy :class:`FillRefutation`.
    ``reps`` and ``mv`` may be passed in to reuse work across calls.
    """
    E = as_tuple(E)
    D = as_tuple(D, allow_empty=True)
    if len(D) != len(E):
        raise FillError("D and E have different lengths")
    for i, (d, e) in enumerate(zip(D, E)):
        if not set(d) <= set(e):
            raise FillError(f"D_{i + 1} is not contained in E_{i + 1}")
    if mv is None:
        mv = mixed_volume(E)
    if mv <= 0:
        raise FillError("unfilled hypothesis M(E)>0 violated")
    if any(not d for d in D):
        return FillRefutation(D, E, None, "empty entry in D")
    if reps is None:
        reps = normal_face_reps(E)
    witnesses = []
    for w in reps:
        Ew = _face_tuple(E, w)
        DcapEw = tuple(tuple(p for p in d if p in set(ew)) for d, ew in zip(D, Ew))
        supp = sorted(i + 1 for i in _support_indices(DcapEw))
        found = None
        for r in range(1, len(supp) + 1):
            for J in itertools.combinations(supp, r):
                if is_essential(Ew, J):
                    found = J
                    break
            if found:
                break
        if found is None:
            return FillRefutation(D, E, tuple(w), "no essential subset of E^w inside Supp(D ∩ E^w)")
        witnesses.append((tuple(w), found))
    return FillCertificate(D, E, tuple(witnesses))


def fills_by_definition(D: Sequence, E: Sequence) -> bool:
    """Containment plus equal mixed volume (the defining condition)."""
    E = as_tuple(E)
    D = as_tuple(D, allow_empty=True)
    if any(not set(d) <= set(e) for d, e in zip(D, E)):
        return False
    if any(not d for d in D):
        return False
    return mixed_volume(D) == mixed_volume(E)


def irreducible_fill(E: Sequence) -> tuple:
    """Greedy point removal in (entry, lexicographic point) order."""
    E = as_tuple(E)
    mv = mixed_volume(E)
    if mv <= 0:
        raise FillError("unfilled hypothesis M(E)>0 violated")
    reps = normal_face_reps(E)
    D = [list(s) for s in E]
    changed = True
    while changed:
        changed = False
        for i in range(len(D)):
            for p in list(D[i]):
                if len(D[i]) == 1:
                    break
                trial = [list(s) for s in D]
                trial[i].remove(p)
                if fills(trial, E, reps=reps, mv=mv):
                    D = trial
                    changed = True
    return tuple(tuple(s) for s in D)


def is_irreducible_fill(D: Sequence, E: Sequence) -> bool:
    E = as_tuple(E)
    D = as_tuple(D)
    reps = normal_face_reps(E)
    mv = mixed_volume(E)
    if not fills(D, E, reps=reps, mv=mv):
        return False
    for i, s in enumerate(D):
        for p in s:
            trial = [list(x) for x in D]
            trial[i].remove(p)
            if fills(trial, E, reps=reps, mv=mv):
                return False
    return True


def certify(D: Sequence, E: Sequence):
    """``fills`` plus the irreducibility flag on success."""
    cert = fills(D, E)
    if not cert:
        return cert
    return FillCertificate(cert.D, cert.E, cert.witnesses, is_irreducible_fill(D, E))
