"""Fixed-point homology of simplicial tensor rings, over the integers.

Everything here works one subgroup at a time: carve the levelwise fixed
points of a simplicial ring out of the expanded additive groups, restrict
the face maps, and read homology off the resulting complex of finitely
generated abelian groups.  Two complexes are kept side by side:

* the normalized one, whose degree-n part is the intersection of the
  kernels of every face but the zeroth (the boundary is face 0 restricted),
* the unnormalized one, on the full fixed levels, with the alternating sum
  of all faces as boundary.

They compute the same homology; holding both turns that into an executable
cross-check rather than a fact we silently rely on.  ``oracle_h0`` is a
third, still more independent route at degree zero.

On top of the per-subgroup tables, ``mackey_homology`` assembles the
restriction, transfer, and conjugation maps between the fixed-point
homologies of all subgroups at once, so identities among them (transfer
followed by restriction, double-coset decompositions, conjugation acting
invertibly) can be checked by exhaustion on small groups.

Sizes are guarded the same way as everywhere else: any level whose expanded
rank would exceed the dense budget raises ``SizeBudgetExceeded``, which
callers are expected to report as a skip rather than swallow.  Integer
Smith-form solves at ambient rank are the dominant cost, so the fixed
carving happens once per level and the normalized part is carved inside the
fixed coordinates rather than back at ambient size.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .exactalg import (ChainComplex, FgAbelianGroup, IntMatrix, PresentedAb,
                       SubQuotient, induced_map, kernel_basis)
from .fingroup import FiniteGroup
from .gring import DENSE_BUDGET


# ---------------------------------------------------------------------------
# carving subgroups out of presented levels


class _FullLift:
    """Unit-vector columns, standing in for an identity matrix nobody stores."""

    __slots__ = ("rows", "cols")

    def __init__(self, n: int):
        self.rows = n
        self.cols = n

    def column(self, j: int) -> list[int]:
        col = [0] * self.rows
        col[j] = 1
        return col

    def apply(self, vec: Sequence[int]) -> list[int]:
        return list(vec)


class _FullLevel:
    """SubQuotient stand-in when the carved subgroup is the whole level."""

    def __init__(self, pres: PresentedAb):
        self.ambient = pres.ngens
        self.pres = pres
        self.lift = _FullLift(pres.ngens)

    def express(self, vec: Sequence[int]) -> list[int]:
        return list(vec)


class _OrbitFixed:
    """Joint fixed points of signed-permutation actions on a free level.

    When every action matrix has exactly one entry, +-1, per column and the
    level carries no additive relations, the fixed subgroup has a basis of
    signed orbit sums; an orbit whose sign monodromy is -1 dies (2x = 0 has
    no free solutions).  That makes carving and expressing linear-time,
    bypassing the Smith-form machinery the general carving needs.
    """

    def __init__(self, rank: int, perms: list[list[tuple[int, int]]]):
        parent = list(range(rank))
        sign = [1] * rank  # sign relative to parent
        dead_roots: set[int] = set()

        def find(i: int) -> tuple[int, int]:
            path = []
            while parent[i] != i:
                path.append(i)
                i = parent[i]
            s = 1
            for j in reversed(path):
                s *= sign[j]
                parent[j] = i
                sign[j] = s
            return i, 1 if not path else sign[path[0]]

        for cols in perms:
            for j, (i, s) in enumerate(cols):
                # x_i = s * x_j must hold on fixed vectors
                ri, si = find(i)
                rj, sj = find(j)
                if ri == rj:
                    if si != s * sj:
                        dead_roots.add(ri)
                else:
                    parent[ri] = rj
                    sign[ri] = s * sj * si  # si is +-1, so this solves for ri
                    if ri in dead_roots:
                        dead_roots.discard(ri)
                        dead_roots.add(rj)

        orbits: dict[int, list[int]] = {}
        pot = [0] * rank
        for i in range(rank):
            r, s = find(i)
            orbits.setdefault(r, []).append(i)
            pot[i] = s
        self.ambient = rank
        self._root_of = [0] * rank
        self._pot = [0] * rank
        cols = []
        self._live_roots = []
        for r in sorted(orbits):
            members = orbits[r]
            head = min(members)
            base = pot[head]
            for m in members:
                self._root_of[m] = head
                self._pot[m] = pot[m] * base if r not in dead_roots else 0
            if r in dead_roots:
                continue
            col = [0] * rank
            for m in members:
                col[m] = self._pot[m]
            cols.append(col)
            self._live_roots.append(head)
        self._live_index = {h: idx for idx, h in enumerate(self._live_roots)}
        self.lift = IntMatrix.from_cols(cols, rank)
        self.pres = PresentedAb(len(cols), IntMatrix.from_cols([], len(cols)))

    def express(self, vec: Sequence[int]) -> Optional[list[int]]:
        out = [0] * len(self._live_roots)
        for h, idx in self._live_index.items():
            out[idx] = vec[h] * self._pot[h]
        for i, v in enumerate(vec):
            p = self._pot[i]
            want = 0 if p == 0 else out[self._live_index[self._root_of[i]]] * p
            if v != want:
                return None
        return out


def _signed_perm_cols(m: IntMatrix) -> Optional[list[tuple[int, int]]]:
    """Per column the single (row, +-1) entry, or None if not that shape."""
    out = []
    for j in range(m.cols):
        col = m.column(j)
        hits = [(i, v) for i, v in enumerate(col) if v]
        if len(hits) != 1 or hits[0][1] not in (1, -1):
            return None
        out.append(hits[0])
    return out


class _SpanOnly:
    """Spanning columns of a carved subgroup, without the express solver.

    Fit for the top materialized level, whose only job is to push its
    boundary image downstairs.  The presentation treats the span columns as
    free generators: degrees at this level are never queried, and an image
    quotient is insensitive to redundancy among its spanning columns.
    """

    def __init__(self, rank: int, rels: IntMatrix,
                 conds: list[tuple[IntMatrix, IntMatrix]]):
        cols = _joint_solution_span(rank, conds)
        if cols is None:
            cols = [list(c) for c in IntMatrix.identity(rank).columns()]
        cols += [list(c) for c in rels.columns()]
        self.ambient = rank
        self.lift = IntMatrix.from_cols(cols, rank)
        self.pres = PresentedAb(self.lift.cols, IntMatrix.from_cols([], self.lift.cols))


Carved = Union[SubQuotient, _FullLevel, _OrbitFixed]


def _joint_solution_span(rank: int,
                         conds: list[tuple[IntMatrix, IntMatrix]]) -> Optional[list[list[int]]]:
    """Columns spanning all x in Z^rank with A @ x in the lattice of B, per (A, B).

    The solution set of each condition is the projection to the first
    ``rank`` coordinates of the kernel of ``[A | -B]``; stacking the
    conditions block-diagonally in the padding columns solves them jointly.
    ``None`` means no conditions survived (everything solves them).
    """
    conds = [(a, b) for (a, b) in conds if a.rows and any(any(c) for c in a.columns())]
    if not conds:
        return None
    pads = [b.cols for (_, b) in conds]
    blocks = []
    for j, (a, b) in enumerate(conds):
        if a.cols != rank:
            raise ValueError("condition matrix has the wrong number of columns")
        row = a
        for jj, width in enumerate(pads):
            pad = (-b) if jj == j else IntMatrix.zeros(a.rows, width)
            if width:
                row = row.hstack(pad)
        blocks.append(row)
    big = blocks[0]
    for extra in blocks[1:]:
        big = big.vstack(extra)
    return [col[:rank] for col in kernel_basis(big).columns()]


def _conditions_subquotient(rank: int, rels: IntMatrix,
                            conds: list[tuple[IntMatrix, IntMatrix]]) -> Carved:
    """The joint solution set packaged as a subgroup of Z^rank / rels."""
    span = _joint_solution_span(rank, conds)
    if span is None:
        return _FullLevel(PresentedAb(rank, rels))
    rel_cols = [list(c) for c in rels.columns()]
    return SubQuotient(rank, span + rel_cols, rel_cols)


def _restricted(dst: Carved, dense_map: Optional[IntMatrix], src: Carved) -> IntMatrix:
    """Matrix of dense_map between two carved-out subgroups, in their bases.

    ``None`` is the identity map (used when the two carvings share ambient
    coordinates but differ as subgroups).
    """
    cols = []
    for j in range(src.lift.cols):
        img = src.lift.column(j)
        if dense_map is not None:
            img = dense_map.apply(img)
        coords = dst.express(img)
        if coords is None:
            raise ValueError("map does not carry the source subgroup into the target")
        cols.append(coords)
    return IntMatrix.from_cols(cols, dst.lift.cols)


def _through_fixed(dst_fixed: Carved, dst_inner: Carved, dense_map: Optional[IntMatrix],
                   src_fixed: Carved, src_inner: Carved) -> IntMatrix:
    """Matrix of an ambient map between subgroups carved inside fixed parts."""
    cols = []
    for j in range(src_inner.lift.cols):
        amb = src_fixed.lift.apply(src_inner.lift.column(j))
        if dense_map is not None:
            amb = dense_map.apply(amb)
        w = dst_fixed.express(amb)
        coords = None if w is None else dst_inner.express(w)
        if coords is None:
            raise ValueError("map does not carry the source subgroup into the target")
        cols.append(coords)
    return IntMatrix.from_cols(cols, dst_inner.lift.cols)


def _generating_subset(g: FiniteGroup, sub: Sequence[int]) -> list[int]:
    """A small generating set for sub; fixity only needs to be imposed there."""
    gens: list[int] = []
    have = (0,)
    for k in sorted(set(sub)):
        if k not in have:
            gens.append(k)
            have = g.subgroup_generated(gens)
    return gens


def _fixed_level(s, n: int, gens: Sequence[int], budget: int) -> Carved:
    pres = s.levels[n].tensor.dense_group(budget)
    if not gens:
        return _FullLevel(pres)
    mats = [s.levels[n].act(k).dense(budget) for k in gens]
    if not pres.relations.cols:
        perms = [_signed_perm_cols(m) for m in mats]
        if all(p is not None for p in perms):
            return _OrbitFixed(pres.ngens, perms)
    ident = IntMatrix.identity(pres.ngens)
    conds = [(m - ident, pres.relations) for m in mats]
    return _conditions_subquotient(pres.ngens, pres.relations, conds)


# ---------------------------------------------------------------------------
# the two complexes of one subgroup


class LevelComplex:
    """Fixed points of a simplicial ring under one subgroup, as complexes.

    ``fixed[n]`` carves the fixed part out of the expanded level;
    ``reduced[n]`` carves the intersection of the kernels of faces 1..n out
    of the *fixed coordinates* (so its lift composes with ``fixed[n].lift``
    to reach ambient vectors).  ``normalized`` and ``unnormalized`` are the
    corresponding chain complexes; ``max_level`` trims how far up the
    truncation is materialized.
    """

    def __init__(self, s, sub: Sequence[int], max_level: Optional[int] = None,
                 budget: int = DENSE_BUDGET, check: bool = True):
        g: FiniteGroup = s.group
        sub = tuple(sorted(set(sub) | {0}))
        if not g.is_subgroup(sub):
            raise ValueError(f"{sub} is not a subgroup")
        top = s.top() if max_level is None else max_level
        if not 0 <= top <= s.top():
            raise ValueError("max_level outside the truncation")
        self.s = s
        self.sub = sub
        self.top = top
        self.budget = budget
        self._face_cache: dict[tuple[int, int], IntMatrix] = {}

        gens = _generating_subset(g, sub)
        self.dense = [s.levels[n].tensor.dense_group(budget) for n in range(top + 1)]
        self.fixed: list[Carved] = [_fixed_level(s, n, gens, budget)
                                    for n in range(top + 1)]

        # faces 1..n restricted to fixed coordinates, then their joint kernel
        # (level 0 has no faces to kill, so its carving is the identity).
        # The top level only ever contributes its boundary image — homology
        # there is out of range — so it keeps a bare span without the
        # expressing machinery a full carving would set up.
        self.reduced: list[Carved] = [_FullLevel(self.fixed[0].pres)]
        for n in range(1, top + 1):
            fx = self.fixed[n]
            conds = []
            for i in range(1, n + 1):
                f = self.dense_face(n, i)
                a = IntMatrix.from_cols(
                    [f.apply(fx.lift.column(j)) for j in range(fx.lift.cols)], f.rows)
                conds.append((a, self.dense[n - 1].relations))
            if n == top:
                self.reduced.append(_SpanOnly(fx.pres.ngens, fx.pres.relations, conds))
            else:
                self.reduced.append(
                    _conditions_subquotient(fx.pres.ngens, fx.pres.relations, conds))

        unnorm = []
        norm = []
        for n in range(1, top + 1):
            total = self.dense_face(n, 0)
            for i in range(1, n + 1):
                term = self.dense_face(n, i)
                total = total + term if i % 2 == 0 else total - term
            unnorm.append(_restricted(self.fixed[n - 1], total, self.fixed[n]))
            norm.append(_through_fixed(self.fixed[n - 1], self.reduced[n - 1],
                                       self.dense_face(n, 0),
                                       self.fixed[n], self.reduced[n]))
        self.unnormalized = ChainComplex([f.pres for f in self.fixed], unnorm, check=check)
        self.normalized = ChainComplex([r.pres for r in self.reduced], norm, check=check)

    def dense_face(self, n: int, i: int) -> IntMatrix:
        key = (n, i)
        if key not in self._face_cache:
            self._face_cache[key] = self.s.face(n, i).dense(self.budget)
        return self._face_cache[key]

    def homology(self, k: int) -> FgAbelianGroup:
        self._check_degree(k)
        return self.normalized.homology(k)

    def homology_data(self, k: int) -> SubQuotient:
        self._check_degree(k)
        return self.normalized.homology_data(k)

    def unnormalized_homology(self, k: int) -> FgAbelianGroup:
        self._check_degree(k)
        return self.unnormalized.homology(k)

    def _check_degree(self, k: int) -> None:
        # degree ``top`` would be missing the boundary coming in from above
        if not 0 <= k <= self.top - 1:
            raise ValueError(f"degree {k} not below the materialized top {self.top}")


def moore(s, sub: Sequence[int], max_level: Optional[int] = None,
          budget: int = DENSE_BUDGET) -> LevelComplex:
    """The normalized fixed-point complex (with its unnormalized shadow)."""
    return LevelComplex(s, sub, max_level=max_level, budget=budget)


def homology_table(s, sub: Sequence[int], max_k: int,
                   budget: int = DENSE_BUDGET) -> list[FgAbelianGroup]:
    """Fixed-point homology in degrees 0..max_k.

    Requires max_k + 1 levels, so max_k must stay below the truncation.
    """
    if max_k < 0:
        raise ValueError("max_k must be nonnegative")
    if max_k > s.top() - 1:
        raise ValueError(
            f"degree {max_k} needs level {max_k + 1}, beyond truncation {s.top()}")
    lc = LevelComplex(s, sub, max_level=max_k + 1, budget=budget)
    return [lc.homology(k) for k in range(max_k + 1)]


def oracle_h0(s, sub: Sequence[int], budget: int = DENSE_BUDGET) -> FgAbelianGroup:
    """Degree-zero homology as a bare coequalizer: coker(d0 - d1) on fixed points.

    Deliberately avoids the normalized complex so the two can check each other.
    """
    g: FiniteGroup = s.group
    subt = tuple(sorted(set(sub) | {0}))
    if not g.is_subgroup(subt):
        raise ValueError(f"{subt} is not a subgroup")
    gens = _generating_subset(g, subt)
    sq = [_fixed_level(s, n, gens, budget) for n in (0, 1)]
    diff = s.face(1, 0).dense(budget) - s.face(1, 1).dense(budget)
    restricted = _restricted(sq[0], diff, sq[1])
    rels = sq[0].pres.relations
    rels = rels.hstack(restricted) if rels.cols else restricted
    return PresentedAb(sq[0].pres.ngens, rels).canonical()


# ---------------------------------------------------------------------------
# all subgroups at once, with restriction / transfer / conjugation


def _relative_transversal(g: FiniteGroup, big: Sequence[int],
                          small: Sequence[int]) -> list[int]:
    """Coset representatives of small inside big, smallest element first."""
    reps = []
    covered: set[int] = set()
    for l in sorted(big):
        if l not in covered:
            reps.append(l)
            covered.update(g.mul(l, k) for k in small)
    return reps


def _double_coset_reps(g: FiniteGroup, left: Sequence[int], amb: Sequence[int],
                       right: Sequence[int]) -> list[int]:
    reps = []
    covered: set[int] = set()
    for l in sorted(amb):
        if l not in covered:
            reps.append(l)
            covered.update(g.mul(a, g.mul(l, b)) for a in left for b in right)
    return reps


@dataclass
class MackeyH:
    """Fixed-point homology of every requested subgroup in one degree.

    ``values`` maps each subgroup (as a sorted element tuple) to its
    homology; ``classes`` groups the subgroups by conjugacy.  The three
    structure maps are returned as integer matrices between the homology
    presentations; use ``maps_equal`` to compare them modulo relations.
    """

    degree: int
    group: FiniteGroup
    subgroups: list[tuple[int, ...]]
    classes: list[list[tuple[int, ...]]]
    values: dict[tuple[int, ...], FgAbelianGroup]
    _lc: dict[tuple[int, ...], "LevelComplex"] = field(repr=False, default_factory=dict)
    _hd: dict[tuple[int, ...], SubQuotient] = field(repr=False, default_factory=dict)

    def _key(self, sub: Sequence[int]) -> tuple[int, ...]:
        key = tuple(sorted(set(sub) | {0}))
        if key not in self._lc:
            raise ValueError(f"subgroup {key} was not included in this table")
        return key

    def _chain_matrix(self, src: tuple[int, ...], dst: tuple[int, ...],
                      dense_map: Optional[IntMatrix]) -> IntMatrix:
        k = self.degree
        a, b = self._lc[src], self._lc[dst]
        return _through_fixed(b.fixed[k], b.reduced[k], dense_map,
                              a.fixed[k], a.reduced[k])

    def res(self, big: Sequence[int], small: Sequence[int]) -> IntMatrix:
        """Induced by the inclusion of fixed points, bigger subgroup to smaller."""
        big, small = self._key(big), self._key(small)
        if not set(small) <= set(big):
            raise ValueError("restriction goes from a subgroup to one contained in it")
        chain = self._chain_matrix(big, small, None)
        return induced_map(self._hd[big], self._hd[small], chain)

    def transfer(self, small: Sequence[int], big: Sequence[int]) -> IntMatrix:
        """Sum over coset translates, smaller subgroup to bigger."""
        small, big = self._key(small), self._key(big)
        if not set(small) <= set(big):
            raise ValueError("transfer goes from a subgroup to one containing it")
        k = self.degree
        reps = _relative_transversal(self.group, big, small)
        lv = self._lc[small].s.levels[k]
        total = lv.act(reps[0]).dense(self._lc[small].budget)
        for l in reps[1:]:
            total = total + lv.act(l).dense(self._lc[small].budget)
        chain = self._chain_matrix(small, big, total)
        return induced_map(self._hd[small], self._hd[big], chain)

    def conj(self, elem: int, sub: Sequence[int]) -> tuple[IntMatrix, tuple[int, ...]]:
        """Action of one group element, sub-fixed points to their conjugate's."""
        sub = self._key(sub)
        target = self._key(self.group.conjugate_subgroup(elem, sub))
        dense = self._lc[sub].s.levels[self.degree].act(elem).dense(self._lc[sub].budget)
        chain = self._chain_matrix(sub, target, dense)
        return induced_map(self._hd[sub], self._hd[target], chain), target

    def maps_equal(self, target: Sequence[int], a: IntMatrix, b: IntMatrix) -> bool:
        pres = self._hd[self._key(target)].pres
        return all(pres.is_zero_element(c) for c in (a - b).columns())

    def double_coset_defects(self) -> list[str]:
        """Every failure of res(tr) = sum of tr(conj(res)) over double cosets.

        Exhausts all triples small <= amb >= other among the stored
        subgroups; empty means the identities all hold.
        """
        g = self.group
        bad = []
        for amb in self.subgroups:
            downs = [h for h in self.subgroups if set(h) <= set(amb)]
            for small in downs:
                for other in downs:
                    lhs = self.res(amb, small) @ self.transfer(other, amb)
                    rhs = None
                    for l in _double_coset_reps(g, small, amb, other):
                        meet_src = tuple(sorted(set(other)
                                                & set(g.conjugate_subgroup(g.inv(l), small))))
                        down = self.res(other, meet_src)
                        across, meet_dst = self.conj(l, meet_src)
                        up = self.transfer(meet_dst, small)
                        term = up @ across @ down
                        rhs = term if rhs is None else rhs + term
                    if not self.maps_equal(small, lhs, rhs):
                        bad.append(f"double coset identity fails: {small} <= {amb} >= {other}")
        return bad


def mackey_homology(s, k: int, subgroups: Optional[Sequence[Sequence[int]]] = None,
                    budget: int = DENSE_BUDGET) -> MackeyH:
    """Homology of every subgroup's fixed points in degree k, with maps.

    ``subgroups`` defaults to all of them; intersections of listed subgroups
    should be listed too if ``double_coset_defects`` is going to be called.
    """
    g: FiniteGroup = s.group
    if subgroups is None:
        subs = g.all_subgroups()
    else:
        subs = sorted({tuple(sorted(set(h) | {0})) for h in subgroups},
                      key=lambda h: (len(h), h))
        for h in subs:
            if not g.is_subgroup(h):
                raise ValueError(f"{h} is not a subgroup")
    classes: list[list[tuple[int, ...]]] = []
    for h in subs:
        for cls in classes:
            if g.are_conjugate_subgroups(cls[0], h) is not None:
                cls.append(h)
                break
        else:
            classes.append([h])
    lcs = {h: LevelComplex(s, h, max_level=k + 1, budget=budget) for h in subs}
    hds = {h: lc.homology_data(k) for h, lc in lcs.items()}
    values = {h: hd.pres.canonical() for h, hd in hds.items()}
    return MackeyH(degree=k, group=g, subgroups=list(subs), classes=classes,
                   values=values, _lc=lcs, _hd=hds)
