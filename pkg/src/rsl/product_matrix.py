"""Exact-repair storage codes built from symmetric product matrices.

The base construction works at d = 2k-2, where each node stores
alpha0 = k-1 symbols.  The message fills two symmetric alpha0 x alpha0
matrices S1, S2 (upper triangles, row-major, S1 first), stacked into a
d x alpha0 matrix M.  Node i holds psi_i^T M for the evaluation row
psi_i = (phi_i | lambda_i * phi_i), with phi_i = (1, x_i, ..., x_i^(alpha0-1))
and lambda_i = x_i^alpha0, so psi_i is a full Vandermonde row and any d
of them are linearly independent.

Repair of node f: every helper i sends the single symbol
dot(share_i, phi_f).  Any d such symbols invert to M phi_f, and the lost
share is phi_f^T S1 + lambda_f * phi_f^T S2 by symmetry of S1 and S2.
The symbol a helper sends depends only on (helper, failed node, its own
share), never on which other helpers were chosen, which is what makes
repeated repairs leak nothing new to an eavesdropper.

Wider codes concatenate m independent copies over the same evaluation
points: per-node storage alpha = m*alpha0, per-link repair beta = m.

Every stored or transmitted symbol is a linear functional of the message,
exposed through observation_rows()/observe() as coefficient rows for the
entropy oracle.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass

from .entropy import ObsSet
from .errors import (BadSelector, DegenerateLambda, FieldTooSmall,
                     Inconsistent, LengthMismatch, RankDeficient, SelfRepair,
                     Singular, SingularSystem, UnknownNode, WrongHelperCount,
                     WrongNodeCount)
from .matrix import Matrix


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d: int
    m: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.d != 2 * self.k - 2:
            raise ValueError(f"d must be 2k-2 = {2 * self.k - 2}, got {self.d}")
        if self.n < self.d + 1:
            raise ValueError(f"n must be >= d+1 = {self.d + 1}, got {self.n}")
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def base_alpha(self) -> int:
        return self.k - 1

    @property
    def alpha(self) -> int:
        return self.m * self.base_alpha

    @property
    def beta(self) -> int:
        return self.m

    @property
    def base_message_length(self) -> int:
        return self.k * self.base_alpha

    @property
    def message_length(self) -> int:
        return self.k * self.alpha


# -- observation selectors

@dataclass(frozen=True)
class Stored:
    """Shares of the listed nodes."""

    nodes: tuple[int, ...]

    def __init__(self, nodes):
        object.__setattr__(self, "nodes", tuple(sorted(set(nodes))))


@dataclass(frozen=True)
class RepairTo:
    """Repair symbols sent to each listed node by all its potential helpers."""

    failed: tuple[int, ...]

    def __init__(self, failed):
        object.__setattr__(self, "failed", tuple(sorted(set(failed))))


@dataclass(frozen=True)
class RepairFromTo:
    """Repair symbols from the helper set to each failed node (helper != failed)."""

    helpers: tuple[int, ...]
    failed: tuple[int, ...]

    def __init__(self, helpers, failed):
        object.__setattr__(self, "helpers", tuple(sorted(set(helpers))))
        object.__setattr__(self, "failed", tuple(sorted(set(failed))))


@dataclass(frozen=True)
class StoredSymbol:
    node: int
    slot: int


@dataclass(frozen=True)
class RepairSymbol:
    helper: int
    failed: int
    slot: int
    epoch: int = 0


@dataclass(frozen=True)
class Observation:
    """One emitted symbol: its provenance tag and its coefficient row."""

    tag: StoredSymbol | RepairSymbol
    row: tuple[int, ...]


class ProductMatrixCode:
    """An (n, k, d=2k-2) exact-repair code instance over a field."""

    def __init__(self, params: CodeParams, field, points=None):
        if field.order <= params.n:
            raise FieldTooSmall(
                f"need more than n={params.n} elements, {field!r} has "
                f"{field.order}")
        a0 = params.base_alpha
        if points is None:
            points = self._pick_points(field, params.n, a0)
        else:
            points = [field.element(x) for x in points]
            if len(points) != params.n:
                raise LengthMismatch(
                    f"need {params.n} points, got {len(points)}")
            if 0 in points or len(set(points)) != params.n:
                raise ValueError("points must be distinct and nonzero")
            if len({field.pow(x, a0) for x in points}) != params.n:
                raise DegenerateLambda(
                    "alpha0-th powers of the points collide")
        self.params = params
        self.field = field
        self.points = tuple(points)
        self.phi = tuple(self._powers(x, a0) for x in self.points)
        self.lam = tuple(field.pow(x, a0) for x in self.points)
        self.psi = tuple(
            phi + tuple(field.mul(lam, c) for c in phi)
            for phi, lam in zip(self.phi, self.lam))
        if params.n <= 8:
            self._check_submatrices()

    @staticmethod
    def _pick_points(field, n: int, a0: int):
        # greedy over generator powers, skipping lambda collisions
        g = field.generator()
        points, seen, x = [], set(), 1
        for _ in range(field.order - 1):
            lam = field.pow(x, a0)
            if lam not in seen:
                seen.add(lam)
                points.append(x)
                if len(points) == n:
                    return points
            x = field.mul(x, g)
        raise DegenerateLambda(
            f"cannot find {n} points with distinct alpha0-th powers in {field!r}")

    def _powers(self, x: int, count: int) -> tuple[int, ...]:
        out = [1]
        for _ in range(count - 1):
            out.append(self.field.mul(out[-1], x))
        return tuple(out[:count])

    def _check_submatrices(self):
        a0, d = self.params.base_alpha, self.params.d
        phi_m = Matrix(self.field, self.phi)
        psi_m = Matrix(self.field, self.psi)
        for rows in itertools.combinations(range(self.params.n), a0):
            sub = Matrix(self.field, [phi_m.rows[i] for i in rows])
            assert sub.rank() == a0, "degenerate phi rows"
        for rows in itertools.combinations(range(self.params.n), d):
            sub = Matrix(self.field, [psi_m.rows[i] for i in rows])
            assert sub.rank() == d, "degenerate psi rows"

    # -- node bookkeeping

    @property
    def nodes(self) -> range:
        return range(1, self.params.n + 1)

    def _node_index(self, node: int, err=UnknownNode) -> int:
        if not isinstance(node, int) or not 1 <= node <= self.params.n:
            raise err(f"node {node} not in 1..{self.params.n}")
        return node - 1

    # -- message layout

    def message_index(self, copy: int, half: int, r: int, s: int) -> int:
        """Index of entry (r, s) of copy's symmetric matrix S1 (half=0) or S2."""
        a0 = self.params.base_alpha
        if r > s:
            r, s = s, r
        tri = r * a0 - r * (r - 1) // 2 + (s - r)
        half_size = a0 * (a0 + 1) // 2
        return copy * 2 * half_size + half * half_size + tri

    def _message_matrices(self, message, copy: int):
        """Copy's (S1, S2) as filled-in symmetric alpha0 x alpha0 arrays."""
        a0 = self.params.base_alpha
        out = []
        for half in (0, 1):
            mat = [[0] * a0 for _ in range(a0)]
            for r in range(a0):
                for s in range(r, a0):
                    v = message[self.message_index(copy, half, r, s)]
                    mat[r][s] = v
                    mat[s][r] = v
            out.append(mat)
        return out

    # -- codec

    def encode(self, message) -> list[list[int]]:
        """All n shares, alpha symbols each, copies consecutive."""
        p = self.params
        message = [self.field.element(x) for x in message]
        if len(message) != p.message_length:
            raise LengthMismatch(
                f"message needs {p.message_length} symbols, got {len(message)}")
        add, mul = self.field.add, self.field.mul
        a0 = p.base_alpha
        shares = [[] for _ in range(p.n)]
        for copy in range(p.m):
            s1, s2 = self._message_matrices(message, copy)
            for i in range(p.n):
                phi, lam = self.phi[i], self.lam[i]
                for a in range(a0):
                    acc1 = acc2 = 0
                    for j in range(a0):
                        if phi[j]:
                            acc1 = add(acc1, mul(phi[j], s1[j][a]))
                            acc2 = add(acc2, mul(phi[j], s2[j][a]))
                    shares[i].append(add(acc1, mul(lam, acc2)))
        return shares

    def repair_symbol(self, helper: int, failed: int, helper_share) -> list[int]:
        """The beta symbols the helper sends toward the failed node.

        A pure function of (helper, failed, helper's share): helper choice
        elsewhere in the system cannot change what this node transmits.
        """
        hi = self._node_index(helper)
        fi = self._node_index(failed)
        if hi == fi:
            raise SelfRepair(f"node {failed} cannot help repair itself")
        p = self.params
        share = [self.field.element(x) for x in helper_share]
        if len(share) != p.alpha:
            raise LengthMismatch(
                f"share needs {p.alpha} symbols, got {len(share)}")
        add, mul = self.field.add, self.field.mul
        a0 = p.base_alpha
        phi_f = self.phi[fi]
        out = []
        for copy in range(p.m):
            acc = 0
            for j in range(a0):
                acc = add(acc, mul(share[copy * a0 + j], phi_f[j]))
            out.append(acc)
        return out

    def repair(self, failed: int, helper_symbols) -> list[int]:
        """Rebuild the failed share from d helpers' repair symbols.

        helper_symbols maps helper id -> the beta symbols it sent.
        """
        fi = self._node_index(failed)
        helpers = sorted(helper_symbols)
        if len(helpers) != self.params.d:
            raise WrongHelperCount(
                f"need exactly d={self.params.d} helpers, got {len(helpers)}")
        if failed in helpers:
            raise SelfRepair(f"node {failed} cannot help repair itself")
        rows = [self.psi[self._node_index(h)] for h in helpers]
        system = Matrix(self.field, rows)
        p = self.params
        a0 = p.base_alpha
        columns = []
        for h in helpers:
            sym = [self.field.element(x) for x in helper_symbols[h]]
            if len(sym) != p.beta:
                raise LengthMismatch(
                    f"helper {h} sent {len(sym)} symbols, expected {p.beta}")
            columns.append(sym)
        rhs = Matrix(self.field, columns)  # d x m, copy per column
        try:
            sol = system.solve(rhs)  # rows of M phi_f, per copy
        except (Inconsistent, Singular) as exc:  # pragma: no cover - guarded
            raise SingularSystem(str(exc)) from exc
        add, mul = self.field.add, self.field.mul
        lam_f = self.lam[fi]
        share = []
        for copy in range(p.m):
            for a in range(a0):
                s1_part = sol.rows[a][copy]
                s2_part = sol.rows[a0 + a][copy]
                share.append(add(s1_part, mul(lam_f, s2_part)))
        return share

    def reconstruct(self, shares) -> list[int]:
        """Recover the message from any k complete shares."""
        p = self.params
        nodes = sorted(shares)
        if len(nodes) != p.k:
            raise WrongNodeCount(f"need exactly k={p.k} shares, got {len(nodes)}")
        for node in nodes:
            self._node_index(node)
        rows, values = [], []
        for node in nodes:
            share = [self.field.element(x) for x in shares[node]]
            if len(share) != p.alpha:
                raise LengthMismatch(
                    f"share of node {node} has {len(share)} symbols, "
                    f"expected {p.alpha}")
            for slot in range(p.alpha):
                rows.append(self.stored_row(node, slot))
                values.append([share[slot]])
        system = Matrix(self.field, rows, ncols=p.message_length)
        if system.rank() != p.message_length:
            raise RankDeficient(
                f"{len(rows)} rows span only rank {system.rank()}")
        sol = system.solve(Matrix(self.field, values, ncols=1))
        return [row[0] for row in sol.rows]

    # -- observation rows

    def stored_row(self, node: int, slot: int) -> tuple[int, ...]:
        """Coefficient row of the node's stored symbol in the given slot."""
        i = self._node_index(node, BadSelector)
        p = self.params
        if not 0 <= slot < p.alpha:
            raise BadSelector(f"slot {slot} not in 0..{p.alpha - 1}")
        copy, a = divmod(slot, p.base_alpha)
        add, mul = self.field.add, self.field.mul
        row = [0] * p.message_length
        phi, lam = self.phi[i], self.lam[i]
        for j in range(p.base_alpha):
            c = phi[j]
            if c == 0:
                continue
            i1 = self.message_index(copy, 0, j, a)
            row[i1] = add(row[i1], c)
            i2 = self.message_index(copy, 1, j, a)
            row[i2] = add(row[i2], mul(lam, c))
        return tuple(row)

    def repair_row(self, helper: int, failed: int, copy: int) -> tuple[int, ...]:
        """Coefficient row of one repair symbol (one per copy)."""
        hi = self._node_index(helper, BadSelector)
        fi = self._node_index(failed, BadSelector)
        if hi == fi:
            raise BadSelector("helper and failed node coincide")
        p = self.params
        if not 0 <= copy < p.m:
            raise BadSelector(f"copy {copy} not in 0..{p.m - 1}")
        add, mul = self.field.add, self.field.mul
        row = [0] * p.message_length
        phi_h, lam_h = self.phi[hi], self.lam[hi]
        phi_f = self.phi[fi]
        for j in range(p.base_alpha):
            if phi_h[j] == 0:
                continue
            for l in range(p.base_alpha):
                c = mul(phi_h[j], phi_f[l])
                if c == 0:
                    continue
                i1 = self.message_index(copy, 0, j, l)
                row[i1] = add(row[i1], c)
                i2 = self.message_index(copy, 1, j, l)
                row[i2] = add(row[i2], mul(lam_h, c))
        return tuple(row)

    def observation_rows(self, selector) -> list[Observation]:
        p = self.params
        out = []
        if isinstance(selector, Stored):
            for node in selector.nodes:
                self._node_index(node, BadSelector)
                for slot in range(p.alpha):
                    out.append(Observation(StoredSymbol(node, slot),
                                           self.stored_row(node, slot)))
        elif isinstance(selector, RepairTo):
            helpers = tuple(self.nodes)
            for f in selector.failed:
                self._node_index(f, BadSelector)
                for h in helpers:
                    if h == f:
                        continue
                    for copy in range(p.m):
                        out.append(Observation(RepairSymbol(h, f, copy),
                                               self.repair_row(h, f, copy)))
        elif isinstance(selector, RepairFromTo):
            for f in selector.failed:
                self._node_index(f, BadSelector)
                for h in selector.helpers:
                    self._node_index(h, BadSelector)
                    if h == f:
                        continue
                    for copy in range(p.m):
                        out.append(Observation(RepairSymbol(h, f, copy),
                                               self.repair_row(h, f, copy)))
        else:
            raise BadSelector(f"unknown selector {type(selector).__name__}")
        return out

    def observe(self, *selectors) -> ObsSet:
        rows = []
        for sel in selectors:
            rows.extend(o.row for o in self.observation_rows(sel))
        return ObsSet(self.field, self.params.message_length, rows)

    def truncate(self) -> "ProductMatrixCode":
        """The same code restricted to nodes 1..d+1."""
        p = self.params
        if p.n == p.d + 1:
            return self
        small = dataclasses.replace(p, n=p.d + 1)
        return ProductMatrixCode(small, self.field,
                                 self.points[:p.d + 1])

    def __repr__(self):
        p = self.params
        return (f"ProductMatrixCode(n={p.n}, k={p.k}, d={p.d}, m={p.m}, "
                f"field={self.field!r})")
