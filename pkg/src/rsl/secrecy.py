"""Eavesdropper accounting and information-theoretic secure wrapping.

An eavesdropper model (E, F) reads the shares of the nodes in E and all
repair traffic ever sent toward the nodes in F -- from every potential
helper, since over enough epochs every other node will have helped.
Its knowledge is a set of linear observation rows; the leakage is their
rank, and B minus that rank is the secure message size the instance
actually achieves against that model.

To use that capacity, wrap() pre-codes the payload with a maximum-rank-
distance code over the extension L of degree B: the message becomes
c_j = sum_i u_i * g_j^(|F|^i) with g_j = y^(j-1), i.e. Moore-matrix
evaluations of u = (R || D), where R is ell fresh random symbols and ell
is the worst-case leakage enumerated over all models of shape (l1, l2).
verify_perfect() then checks mechanically, per model, that what the
eavesdropper sees is statistically independent of D: the seen rows,
composed with the Moore matrix, must have the same rank as their
restriction to the randomness columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import capacity as cap
from .entropy import ObsSet, joint_entropy
from .errors import (AsymmetricLeakage, BadModel, CapacityZero,
                     LengthMismatch)
from .field import ExtensionSpec
from .matrix import Matrix
from .product_matrix import ProductMatrixCode, RepairTo, Stored


@dataclass(frozen=True)
class EavesdropperModel:
    """Nodes read at rest (stored) and nodes whose repairs are observed."""

    stored: tuple[int, ...]
    repaired: tuple[int, ...]

    def __init__(self, stored, repaired):
        object.__setattr__(self, "stored", tuple(sorted(set(stored))))
        object.__setattr__(self, "repaired", tuple(sorted(set(repaired))))

    @property
    def l1(self) -> int:
        return len(self.stored)

    @property
    def l2(self) -> int:
        return len(self.repaired)


def check_model(code: ProductMatrixCode, model: EavesdropperModel):
    p = code.params
    for node in model.stored + model.repaired:
        if not 1 <= node <= p.n:
            raise BadModel(f"node {node} not in 1..{p.n}")
    overlap = set(model.stored) & set(model.repaired)
    if overlap:
        raise BadModel(f"nodes {sorted(overlap)} both stored and repaired")
    if model.l1 + model.l2 > p.k - 1:
        raise BadModel(
            f"l1+l2 = {model.l1 + model.l2} exceeds k-1 = {p.k - 1}")


def eavesdropped_rows(code: ProductMatrixCode,
                      model: EavesdropperModel) -> ObsSet:
    check_model(code, model)
    return code.observe(Stored(model.stored), RepairTo(model.repaired))


def leakage(code: ProductMatrixCode, model: EavesdropperModel) -> int:
    return joint_entropy(eavesdropped_rows(code, model))


def achieved_secure_size(code: ProductMatrixCode,
                         model: EavesdropperModel) -> int:
    return code.params.message_length - leakage(code, model)


def enumerate_models(code: ProductMatrixCode, l1: int, l2: int):
    """All (E, F) with |E|=l1, |F|=l2, disjoint, over the code's nodes."""
    if l1 < 0 or l2 < 0 or l1 + l2 > code.params.k - 1:
        raise BadModel(f"(l1={l1}, l2={l2}) out of range for k={code.params.k}")
    nodes = list(code.nodes)
    for stored in itertools.combinations(nodes, l1):
        rest = [x for x in nodes if x not in stored]
        for repaired in itertools.combinations(rest, l2):
            yield EavesdropperModel(stored, repaired)


def worst_case_leakage(code: ProductMatrixCode, l1: int, l2: int) -> int:
    """Common leakage across all models of the shape; must not vary."""
    leaks = {}
    for model in enumerate_models(code, l1, l2):
        leaks[model] = leakage(code, model)
    values = set(leaks.values())
    if len(values) > 1:
        lo, hi = min(values), max(values)
        raise AsymmetricLeakage(
            f"leakage varies across ({l1},{l2}) models: {lo}..{hi}")
    return values.pop() if values else 0


class SecureScheme:
    """Moore-matrix pre-coding sized for one eavesdropper shape."""

    def __init__(self, code: ProductMatrixCode, l1: int, l2: int, ell: int):
        B = code.params.message_length
        if not 0 <= ell <= B:
            raise ValueError(f"ell must be in 0..{B}")
        self.code = code
        self.l1 = l1
        self.l2 = l2
        self.ell = ell
        self.ext = ExtensionSpec(code.field, B)
        q = code.field.order
        self.points = tuple(q**j for j in range(B))  # y^j, a basis of L over F
        rows = []
        for g in self.points:
            row, v = [], g
            for _ in range(B):
                row.append(v)
                v = self.ext.frobenius(v)
            rows.append(row)
        self.moore = Matrix(self.ext, rows)
        self._moore_inv = self.moore.inverse()  # construction guarantees this

    @property
    def secret_size(self) -> int:
        return self.code.params.message_length - self.ell

    def wrap(self, secret, randomness) -> list[int]:
        """Message symbols over L for (randomness || secret)."""
        ext = self.ext
        secret = [ext.element(x) for x in secret]
        randomness = [ext.element(x) for x in randomness]
        if len(secret) != self.secret_size:
            raise LengthMismatch(
                f"secret needs {self.secret_size} symbols, got {len(secret)}")
        if len(randomness) != self.ell:
            raise LengthMismatch(
                f"randomness needs {self.ell} symbols, got {len(randomness)}")
        u = Matrix(ext, [[x] for x in randomness + secret],
                   ncols=1)
        return [row[0] for row in (self.moore @ u).rows]

    def unwrap(self, message) -> list[int]:
        """Secret symbols back out of a wrapped message."""
        ext = self.ext
        message = [ext.element(x) for x in message]
        B = self.code.params.message_length
        if len(message) != B:
            raise LengthMismatch(
                f"message needs {B} symbols, got {len(message)}")
        c = Matrix(ext, [[x] for x in message], ncols=1)
        u = [row[0] for row in (self._moore_inv @ c).rows]
        return u[self.ell:]


def scheme_make(code: ProductMatrixCode, l1: int, l2: int) -> SecureScheme:
    """Scheme with enumerated worst-case randomness for shape (l1, l2)."""
    ell = worst_case_leakage(code, l1, l2)
    if ell >= code.params.message_length:
        raise CapacityZero(
            f"worst-case leakage {ell} swallows the whole message")
    return SecureScheme(code, l1, l2, ell)


def verify_perfect(scheme: SecureScheme, model: EavesdropperModel,
                   code: ProductMatrixCode | None = None) -> bool:
    """True iff the model's view is independent of the wrapped secret.

    The eavesdropper sees A @ Moore @ u for its coefficient rows A.
    Splitting the composed map into randomness columns (first ell) and
    data columns, independence of the data is exactly
    rank(full) == rank(randomness part).
    """
    code = code or scheme.code
    rows = eavesdropped_rows(code, model).rows
    ext = scheme.ext
    seen = Matrix(ext, rows, ncols=scheme.code.params.message_length)
    composed = seen @ scheme.moore
    left = Matrix(ext, [row[:scheme.ell] for row in composed.rows],
                  ncols=scheme.ell)
    return composed.rank() == left.rank()


def attack_report(code: ProductMatrixCode, model: EavesdropperModel,
                  observed_leakage: int | None = None,
                  scheme: SecureScheme | None = None) -> dict:
    """JSON-ready summary of what a model learns, vs. the formula value.

    observed_leakage, when given, is the rank actually accumulated (for
    example from an event log); the formula comparison always uses the
    worst case over all potential helpers.
    """
    worst = leakage(code, model)
    leak = worst if observed_leakage is None else observed_leakage
    B = code.params.message_length
    query = cap.CapacityQuery.for_code(code.params, model.l1, model.l2)
    formula = cap.secrecy_capacity(query)
    achieved = B - worst
    if formula.kind == cap.EXACT:
        match = formula.value == achieved
    else:
        match = achieved <= formula.value
    report = {
        "model": {"stored": list(model.stored),
                  "repaired": list(model.repaired)},
        "leakage": leak,
        "secure_size": B - leak,
        "perfect": (verify_perfect(scheme, model, code)
                    if scheme is not None else None),
        "formula_value": cap.render_value(formula.value),
        "formula_kind": formula.kind,
        "match": bool(match),
    }
    return report
