"""Error injection into clean data/FDs and quality scoring of repairs."""

from __future__ import annotations

import logging
import math
import random
from collections import defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction

from fdrepair.conflicts import delta_p
from fdrepair.errors import SchemaError
from fdrepair.fds import FD, ExtensionVector, FDSet, appended_attributes
from fdrepair.relation import Cell, CellEdit, VInstance, is_variable

logger = logging.getLogger(__name__)


@dataclass
class DataInjection:
    instance: VInstance
    injected: list[CellEdit]
    requested: int
    shortfall: int


def _violations_of(rows: list[list[Cell]], fds: FDSet, tid: int) -> int:
    """Number of tuples forming a violating pair with tuple ``tid``."""
    row = rows[tid]
    count = 0
    for other_id, other in enumerate(rows):
        if other_id != tid and any(
            all(row[a] == other[a] for a in fd.lhs) and row[fd.rhs] != other[fd.rhs]
            for fd in fds
        ):
            count += 1
    return count


def _fresh_constant(rows: list[list[Cell]], attr: int, serial: int) -> str:
    used = {r[attr] for r in rows}
    value = f"err{serial}"
    while value in used:
        value += "'"
    return value


def _rhs_candidates(rows, fds, touched) -> list[tuple[int, int, int]]:
    """(t_i, t_j, fd) with t_i, t_j agreeing on X and A; t_i[A] not yet injected."""
    out = []
    for f, fd in enumerate(fds):
        attrs = sorted(fd.lhs | {fd.rhs})
        groups = defaultdict(list)
        for tid, row in enumerate(rows):
            groups[tuple(row[a] for a in attrs)].append(tid)
        for members in groups.values():
            if len(members) < 2:
                continue
            for i in members:
                if (i, fd.rhs) not in touched:
                    j = members[0] if members[0] != i else members[1]
                    out.append((i, j, f))
    return out


def _lhs_candidates(rows, fds, touched, rng: random.Random, limit: int = 64):
    """(t_i, t_j, fd, B): agree on X minus B, differ on B and on A."""
    out = []
    for f, fd in enumerate(fds):
        for b in sorted(fd.lhs):
            rest = sorted(fd.lhs - {b})
            groups = defaultdict(list)
            for tid, row in enumerate(rows):
                groups[tuple(row[a] for a in rest)].append(tid)
            for members in groups.values():
                if len(members) < 2:
                    continue
                for i in members:
                    if (i, b) in touched:
                        continue
                    partners = [
                        j
                        for j in members
                        if j != i and rows[j][b] != rows[i][b] and rows[j][fd.rhs] != rows[i][fd.rhs]
                    ]
                    if partners:
                        out.append((i, partners[0], f, b))
    if len(out) > limit:
        out = rng.sample(out, limit)
    return out


def perturb_data(
    clean: VInstance, fds: FDSet, rate: float, seed: int = 0
) -> DataInjection:
    """Change about ``rate`` of the cells so that each change adds a violation.

    Right-hand-side injections give ``t_i[A]`` a fresh constant where ``t_i``
    and ``t_j`` agree on ``XA``; left-hand-side injections copy ``t_j[B]``
    into ``t_i`` for some ``B`` in ``X``. The two kinds alternate at random,
    falling back to whichever still has an opportunity. A change is kept
    only if it strictly increases the violations involving the changed tuple.
    """
    if not 0 <= rate <= 1:
        raise ValueError("rate must lie in [0, 1]")
    rng = random.Random(seed)
    rows = [list(r) for r in clean.rows]
    target = math.ceil(rate * len(rows) * clean.width)
    touched: set[tuple[int, int]] = set()
    injected: list[CellEdit] = []
    serial = 0

    while len(injected) < target:
        kinds = ["rhs", "lhs"]
        rng.shuffle(kinds)
        done = False
        for kind in kinds:
            if kind == "rhs":
                cands = _rhs_candidates(rows, fds, touched)
            else:
                cands = _lhs_candidates(rows, fds, touched, rng)
            rng.shuffle(cands)
            for cand in cands:
                if kind == "rhs":
                    i, _, f = cand
                    attr = fds[f].rhs
                    new_value: Cell = _fresh_constant(rows, attr, serial)
                else:
                    i, j, f, attr = cand
                    new_value = rows[j][attr]
                before = _violations_of(rows, fds, i)
                old = rows[i][attr]
                rows[i][attr] = new_value
                if _violations_of(rows, fds, i) > before:
                    serial += 1
                    touched.add((i, attr))
                    injected.append(CellEdit(i, attr, old, new_value))
                    done = True
                    break
                rows[i][attr] = old
            if done:
                break
        if not done:
            break

    shortfall = target - len(injected)
    if shortfall:
        logger.warning("injected %d of %d requested cell errors", len(injected), target)
    dirty = VInstance(clean.schema, tuple(tuple(r) for r in rows))
    return DataInjection(dirty, injected, target, shortfall)


@dataclass
class FDInjection:
    fds: FDSet
    removed: ExtensionVector


def perturb_fds(fds: FDSet, rate: float, seed: int = 0) -> FDInjection:
    """Drop ``ceil(rate * total LHS size)`` LHS attributes, keeping every LHS non-empty."""
    if not 0 <= rate <= 1:
        raise ValueError("rate must lie in [0, 1]")
    total = sum(len(fd.lhs) for fd in fds)
    want = math.ceil(rate * total)
    capacity = sum(max(len(fd.lhs) - 1, 0) for fd in fds)
    if want > capacity:
        raise ValueError(
            f"cannot remove {want} LHS attributes without emptying an LHS (at most {capacity})"
        )
    rng = random.Random(seed)
    pool = [(f, a) for f, fd in enumerate(fds) for a in sorted(fd.lhs)]
    rng.shuffle(pool)
    lhs = [set(fd.lhs) for fd in fds]
    removed = [set() for _ in fds]
    for f, a in pool:
        if want == 0:
            break
        if len(lhs[f]) > 1:
            lhs[f].discard(a)
            removed[f].add(a)
            want -= 1
    out = tuple(FD(frozenset(l), fd.rhs) for l, fd in zip(lhs, fds))
    return FDInjection(out, tuple(frozenset(r) for r in removed))


# ------------------------------------------------------------------ scoring


@dataclass
class QualityScores:
    data_precision: float
    data_recall: float
    fd_precision: float
    fd_recall: float
    data_f: float
    fd_f: float
    combined_f: float

    def to_json(self) -> dict:
        return asdict(self)


def _ratio(num: int, den: int) -> float:
    # Empty denominators only arise with empty numerators.
    return 1.0 if den == 0 else num / den


def f_score(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def score_repair(
    clean: VInstance,
    dirty: VInstance,
    repaired: VInstance,
    fds_clean: FDSet,
    fds_dirty: FDSet,
    fds_repaired: FDSet,
) -> QualityScores:
    for other in (dirty, repaired):
        if other.schema.attributes != clean.schema.attributes or len(other) != len(clean):
            raise SchemaError("clean, dirty and repaired instances are not aligned")
    if not len(fds_clean) == len(fds_dirty) == len(fds_repaired):
        raise SchemaError("FD sets are not aligned")

    erroneous = modified = correct = 0
    for rc, rd, rr in zip(clean.rows, dirty.rows, repaired.rows):
        for c, d, r in zip(rc, rd, rr):
            wrong = c != d
            erroneous += wrong
            if r != d:
                modified += 1
                if wrong and (r == c or is_variable(r)):
                    correct += 1

    removed = appended_attributes(fds_dirty, fds_clean)
    appended = appended_attributes(fds_dirty, fds_repaired)
    n_removed = sum(len(y) for y in removed)
    n_appended = sum(len(y) for y in appended)
    n_right = sum(len(a & r) for a, r in zip(appended, removed))

    dp, dr = _ratio(correct, modified), _ratio(correct, erroneous)
    fp, fr = _ratio(n_right, n_appended), _ratio(n_right, n_removed)
    df, ff = f_score(dp, dr), f_score(fp, fr)
    return QualityScores(dp, dr, fp, fr, df, ff, (df + ff) / 2)


def tau_from_relative(tau_rel: float, fds: FDSet, instance: VInstance) -> int:
    """Absolute budget ``ceil(tau_rel * delta_P(fds, instance))``."""
    if not 0 <= tau_rel <= 1:
        raise ValueError("relative budget must lie in [0, 1]")
    return math.ceil(Fraction(str(tau_rel)) * delta_p(fds, instance))
