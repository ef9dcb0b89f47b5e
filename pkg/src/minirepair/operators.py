"""Repair operators: AST transformations drawn at suspicious statements.

Three families, gated by engine mode:

  jgenprog    statement-level InsertBefore / Replace / Remove, with
              payload statements harvested from the program itself (the
              ingredient pool, local or global scope);
  jpar        repair templates: bounds-guarding an array access, adding
              or removing a term of an if/while condition, and swapping
              a call argument for another in-scope variable;
  jmutrepair  operator swaps: relational, logical, and arithmetic
              operator replacement plus condition negation.

Every apply_* function is pure: the parent unit is never touched and the
returned child is normalized and re-type-checked. Inapplicable or stale
operations raise a PatchSkip subclass, which callers treat as "discard
and draw again", never as a fatal error. Template parameters left
unresolved at enumeration time are drawn from the caller's random stream
on first application and recorded in the returned concrete op, so a
lineage of concrete ops replays byte-for-byte.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field
from typing import Any

from minirepair.minilang import (
    SourceUnit,
    StatementId,
    iter_statements,
    normalize,
    path_of,
    resolve_container,
    resolve_path,
    strip_ids,
)
from minirepair.minilang.checker import binding_env_at, check_unit, signatures, typed_free_vars
from minirepair.minilang.errors import CheckError
from minirepair.minilang.nodes import (
    ARITH_OPS,
    ArrayLit,
    Binary,
    Call,
    Expr,
    IfStmt,
    Index,
    IndexAssignStmt,
    IntLit,
    Len,
    LOGIC_OPS,
    Path,
    REL_OPS,
    ReturnStmt,
    Stmt,
    T_INT,
    Unary,
    Var,
    WhileStmt,
)
from minirepair.minilang.printer import print_stmt


class PatchSkip(Exception):
    """Non-fatal: skip this operation and draw another."""


class StalePoint(PatchSkip):
    """The modification point no longer resolves in the variant."""


class ScopeViolation(PatchSkip):
    """An ingredient uses names not bound at the insertion position."""


class TypeCheckFailed(PatchSkip):
    """The edited unit no longer type-checks."""


class NotApplicable(PatchSkip):
    """The operator has no eligible site at this statement."""


GENPROG_KINDS = ("InsertBefore", "Replace", "Remove")
TEMPLATE_KINDS = ("TemplateGuardArrayAccess", "TemplateMutateConditionTerm", "TemplateSwapCallArg")
MUTATION_KINDS = ("MutRelationalOp", "MutLogicalOp", "MutArithmeticOp", "MutNegateCondition")
MODE_KINDS = {"jgenprog": GENPROG_KINDS, "jpar": TEMPLATE_KINDS, "jmutrepair": MUTATION_KINDS}
MODES = tuple(MODE_KINDS)


@dataclass(frozen=True)
class ModificationPoint:
    statement: StatementId
    path: Path
    suspiciousness: float


@dataclass(frozen=True)
class Ingredient:
    stmt: Stmt
    origin: StatementId
    free_vars: frozenset[tuple[str, str]]

    @property
    def is_return_rooted(self) -> bool:
        return isinstance(self.stmt, ReturnStmt)

    @property
    def text(self) -> str:
        return _condense(print_stmt(self.stmt))


@dataclass(frozen=True)
class IngredientPool:
    scope: str  # "local" | "global"
    entries: tuple[Ingredient, ...]


EMPTY_POOL = IngredientPool("local", ())


@dataclass
class PatchOp:
    kind: str
    point: ModificationPoint
    payload: dict[str, Any] = field(default_factory=dict)
    generation: int | None = None

    def summary(self) -> str:
        p = self.payload
        if self.kind == "InsertBefore":
            return f"insert `{p['ingredient'].text}`"
        if self.kind == "Replace":
            return f"replace with `{p['ingredient'].text}`"
        if self.kind == "Remove":
            return "remove statement"
        if self.kind == "TemplateGuardArrayAccess":
            array = p.get("array", "?")
            return f"wrap in bounds guard for `{array}[...]`"
        if self.kind == "TemplateMutateConditionTerm":
            if p.get("action") == "remove":
                return f"condition: keep only the {p['keep']} term"
            if p.get("action") == "add":
                return f"condition: append `{p['connective']} {p['lhs']} {p['op']} {p['rhs']}`"
            return "condition: add or remove a term"
        if self.kind == "TemplateSwapCallArg":
            if "arg_index" in p:
                return f"call argument {p['arg_index']} -> `{p['var_name']}`"
            return "swap a call argument"
        if self.kind in ("MutRelationalOp", "MutArithmeticOp"):
            original = p.get("original", "?")
            return f"operator `{original}` -> `{p['replacement']}`"
        if self.kind == "MutLogicalOp":
            original = p.get("original", "?")
            return f"operator `{original}` -> `{_other_logic(original)}`"
        if self.kind == "MutNegateCondition":
            return "negate condition"
        return self.kind

    def trace_entry(self) -> dict[str, Any]:
        """Patch trace row: one JSON object per applied operation."""
        return {
            "kind": self.kind,
            "statement_id": str(self.point.statement),
            "payload_summary": self.summary(),
            "generation": self.generation,
        }


def _condense(text: str) -> str:
    return " ".join(text.split())


def _other_logic(op: str) -> str:
    return "||" if op == "&&" else "&&"


# --- site collection ----------------------------------------------------
# Sites are collected from a statement's own expressions only (an
# if/while contributes just its condition); nested statements are their
# own modification points. Pre-order, so site indices are reproducible.


def _own_exprs(stmt: Stmt) -> list[Expr]:
    if isinstance(stmt, IndexAssignStmt):
        return [stmt.index, stmt.value]
    if isinstance(stmt, (IfStmt, WhileStmt)):
        return [stmt.cond]
    value = getattr(stmt, "value", None)
    return [value] if value is not None else []


def _walk_expr(expr: Expr):
    yield expr
    if isinstance(expr, Unary):
        yield from _walk_expr(expr.operand)
    elif isinstance(expr, Binary):
        yield from _walk_expr(expr.lhs)
        yield from _walk_expr(expr.rhs)
    elif isinstance(expr, Index):
        yield from _walk_expr(expr.index)
    elif isinstance(expr, Len):
        yield from _walk_expr(expr.arg)
    elif isinstance(expr, Call):
        for arg in expr.args:
            yield from _walk_expr(arg)
    elif isinstance(expr, ArrayLit):
        for item in expr.items:
            yield from _walk_expr(item)


def binary_sites(stmt: Stmt, ops: tuple[str, ...]) -> list[Binary]:
    return [
        node
        for expr in _own_exprs(stmt)
        for node in _walk_expr(expr)
        if isinstance(node, Binary) and node.op in ops
    ]


def index_access_sites(stmt: Stmt) -> list[tuple[str, Expr]]:
    """(array name, index expression) pairs; an index-assign target counts."""
    sites: list[tuple[str, Expr]] = []
    if isinstance(stmt, IndexAssignStmt):
        sites.append((stmt.name, stmt.index))
    for expr in _own_exprs(stmt):
        for node in _walk_expr(expr):
            if isinstance(node, Index):
                sites.append((node.name, node.index))
    return sites


def call_sites(stmt: Stmt) -> list[Call]:
    return [
        node for expr in _own_exprs(stmt) for node in _walk_expr(expr) if isinstance(node, Call)
    ]


# --- ingredients ---------------------------------------------------------


def harvest_ingredients(unit: SourceUnit, point: ModificationPoint, scope: str) -> IngredientPool:
    """Collect reusable statements for a modification point.

    Local scope draws from the point's function only; global from the
    whole unit. The statement at the point itself is excluded, and
    structurally identical statements are deduplicated (first occurrence
    in program order wins).
    """
    entries: list[Ingredient] = []
    seen: set[str] = set()
    for sid, stmt in iter_statements(unit):
        if sid == point.statement:
            continue
        if scope == "local" and sid.function != point.statement.function:
            continue
        text = _condense(print_stmt(stmt))
        if text in seen:
            continue
        seen.add(text)
        origin_path = path_of(unit, sid)
        env = binding_env_at(unit, sid.function, origin_path) or {}
        entries.append(
            Ingredient(
                stmt=strip_ids(copy.deepcopy(stmt)),
                origin=sid,
                free_vars=typed_free_vars(stmt, env),
            )
        )
    return IngredientPool(scope, tuple(entries))


def check_scope(ingredient: Ingredient, point: ModificationPoint, unit: SourceUnit) -> bool:
    """True when all free variables are bound, type-compatibly, at the point."""
    env = binding_env_at(unit, point.statement.function, point.path)
    if env is None:
        raise StalePoint(f"point {point.statement} does not resolve")
    return all(env.get(name) == type_ for name, type_ in ingredient.free_vars)


# --- application ---------------------------------------------------------


def _locate(unit: SourceUnit, point: ModificationPoint) -> tuple[list[Stmt], int]:
    located = resolve_container(unit, point.statement.function, point.path)
    if located is None:
        raise StalePoint(f"point {point.statement} does not resolve")
    return located


def _finish(child: SourceUnit) -> SourceUnit:
    normalize(child)
    try:
        check_unit(child)
    except CheckError as exc:
        raise TypeCheckFailed(str(exc)) from exc
    return child


def apply_genprog(parent: SourceUnit, op: PatchOp) -> SourceUnit:
    """Insert an ingredient before, replace, or remove the point statement."""
    _locate(parent, op.point)  # fail fast before copying
    if op.kind in ("InsertBefore", "Replace"):
        ingredient: Ingredient = op.payload["ingredient"]
        if op.kind == "InsertBefore" and ingredient.is_return_rooted:
            raise NotApplicable("return statements are never inserted")
        if not check_scope(ingredient, op.point, parent):
            raise ScopeViolation(f"ingredient from {ingredient.origin} out of scope")
    child = copy.deepcopy(parent)
    block, index = _locate(child, op.point)
    if op.kind == "Remove":
        del block[index]
    elif op.kind == "InsertBefore":
        block.insert(index, copy.deepcopy(op.payload["ingredient"].stmt))
    elif op.kind == "Replace":
        block[index] = copy.deepcopy(op.payload["ingredient"].stmt)
    else:
        raise NotApplicable(f"not a statement operation: {op.kind}")
    return _finish(child)


def apply_mutation(parent: SourceUnit, op: PatchOp) -> tuple[SourceUnit, PatchOp]:
    """Swap one operator (or negate one condition) at the recorded site."""
    _locate(parent, op.point)
    child = copy.deepcopy(parent)
    stmt = resolve_path(child, op.point.statement.function, op.point.path)
    payload = dict(op.payload)
    if op.kind == "MutNegateCondition":
        if not isinstance(stmt, (IfStmt, WhileStmt)):
            raise NotApplicable("statement has no condition")
        stmt.cond = Unary("!", stmt.cond)
    else:
        family = {
            "MutRelationalOp": REL_OPS,
            "MutLogicalOp": LOGIC_OPS,
            "MutArithmeticOp": ARITH_OPS,
        }[op.kind]
        sites = binary_sites(stmt, family)
        site = payload.get("site", 0)
        if site >= len(sites):
            raise NotApplicable(f"no {op.kind} site #{site} at {op.point.statement}")
        node = sites[site]
        payload.setdefault("original", node.op)
        if op.kind == "MutLogicalOp":
            node.op = _other_logic(node.op)
        else:
            replacement = payload["replacement"]
            if replacement == node.op:
                raise NotApplicable("replacement equals the original operator")
            node.op = replacement
    concrete = PatchOp(op.kind, op.point, payload, op.generation)
    return _finish(child), concrete


def apply_par_template(
    parent: SourceUnit, op: PatchOp, rng: random.Random | None
) -> tuple[SourceUnit, PatchOp]:
    """Apply one template; draws unresolved parameters from `rng`."""
    _locate(parent, op.point)
    child = copy.deepcopy(parent)
    block, index = _locate(child, op.point)
    stmt = block[index]
    payload = dict(op.payload)

    if op.kind == "TemplateGuardArrayAccess":
        sites = index_access_sites(stmt)
        site = payload.get("site", 0)
        if site >= len(sites):
            raise NotApplicable("statement contains no such array access")
        array, index_expr = sites[site]
        payload["site"] = site
        payload["array"] = array
        guard = Binary(
            "&&",
            Binary(">=", copy.deepcopy(index_expr), IntLit(0)),
            Binary("<", copy.deepcopy(index_expr), Len(Var(array))),
        )
        block[index] = IfStmt(guard, [stmt], None)

    elif op.kind == "TemplateMutateConditionTerm":
        if not isinstance(stmt, (IfStmt, WhileStmt)):
            raise NotApplicable("statement has no condition")
        if "action" not in payload:
            payload.update(_draw_condition_edit(parent, op.point, stmt, rng))
        if payload["action"] == "remove":
            cond = stmt.cond
            if not (isinstance(cond, Binary) and cond.op in LOGIC_OPS):
                raise NotApplicable("condition has no top-level term to remove")
            stmt.cond = cond.lhs if payload["keep"] == "lhs" else cond.rhs
        else:
            atom = Binary(payload["op"], Var(payload["lhs"]), Var(payload["rhs"]))
            stmt.cond = Binary(payload["connective"], stmt.cond, atom)

    elif op.kind == "TemplateSwapCallArg":
        sites = call_sites(stmt)
        site = payload.get("site", 0)
        if site >= len(sites):
            raise NotApplicable("statement contains no such call")
        call = sites[site]
        payload["site"] = site
        if "arg_index" not in payload:
            payload.update(_draw_argument_swap(parent, op.point, call, rng))
        call.args[payload["arg_index"]] = Var(payload["var_name"])

    else:
        raise NotApplicable(f"not a template operation: {op.kind}")

    concrete = PatchOp(op.kind, op.point, payload, op.generation)
    return _finish(child), concrete


def _require_rng(rng: random.Random | None) -> random.Random:
    if rng is None:
        raise ValueError("template parameters unresolved and no random stream provided")
    return rng


def _scope_vars(unit: SourceUnit, point: ModificationPoint, type_: str) -> list[str]:
    env = binding_env_at(unit, point.statement.function, point.path)
    if env is None:
        raise StalePoint(f"point {point.statement} does not resolve")
    return [name for name, t in env.items() if t == type_]


def _draw_condition_edit(
    unit: SourceUnit, point: ModificationPoint, stmt: Stmt, rng: random.Random | None
) -> dict[str, Any]:
    rng = _require_rng(rng)
    int_vars = _scope_vars(unit, point, T_INT)
    removable = isinstance(stmt.cond, Binary) and stmt.cond.op in LOGIC_OPS
    if not removable and not int_vars:
        raise NotApplicable("no condition term to remove and no int variables to compare")
    if removable and (not int_vars or rng.random() < 0.5):
        return {"action": "remove", "keep": rng.choice(("lhs", "rhs"))}
    return {
        "action": "add",
        "connective": rng.choice(LOGIC_OPS),
        "lhs": rng.choice(int_vars),
        "op": rng.choice(REL_OPS),
        "rhs": rng.choice(int_vars),
    }


def _draw_argument_swap(
    unit: SourceUnit, point: ModificationPoint, call: Call, rng: random.Random | None
) -> dict[str, Any]:
    rng = _require_rng(rng)
    sigs = signatures(unit)
    if call.fn not in sigs:
        raise NotApplicable(f"call to unknown function {call.fn!r}")
    param_types = sigs[call.fn][0]
    choices: list[tuple[int, str]] = []
    for position, param_type in enumerate(param_types):
        current = call.args[position]
        current_name = current.name if isinstance(current, Var) else None
        for name in _scope_vars(unit, point, param_type):
            if name != current_name:
                choices.append((position, name))
    if not choices:
        raise NotApplicable("no in-scope replacement variable for any argument")
    position, name = rng.choice(choices)
    return {"arg_index": position, "var_name": name}


def apply_patch_op(
    parent: SourceUnit, op: PatchOp, rng: random.Random | None = None
) -> tuple[SourceUnit, PatchOp]:
    """Apply any operation; returns (child, concrete op suitable for replay)."""
    if op.kind in GENPROG_KINDS:
        return apply_genprog(parent, op), op
    if op.kind in TEMPLATE_KINDS:
        return apply_par_template(parent, op, rng)
    if op.kind in MUTATION_KINDS:
        return apply_mutation(parent, op)
    raise NotApplicable(f"unknown operation kind {op.kind!r}")


# --- enumeration ----------------------------------------------------------


def enumerate_ops(
    mode: str, point: ModificationPoint, ast: SourceUnit, pool: IngredientPool = EMPTY_POOL
) -> list[PatchOp]:
    """Every applicable operation of the mode at the point, in a fixed order.

    Template parameters that are drawn at application time are left
    unresolved here (one op per template kind per site); mutation ops
    are fully concrete (one per site per replacement operator).
    """
    stmt = resolve_path(ast, point.statement.function, point.path)
    if stmt is None:
        raise StalePoint(f"point {point.statement} does not resolve")
    ops: list[PatchOp] = []
    if mode == "jgenprog":
        ops.append(PatchOp("Remove", point))
        for ingredient in pool.entries:
            if not check_scope(ingredient, point, ast):
                continue
            ops.append(PatchOp("Replace", point, {"ingredient": ingredient}))
            if not ingredient.is_return_rooted:
                ops.append(PatchOp("InsertBefore", point, {"ingredient": ingredient}))
    elif mode == "jpar":
        for site in range(len(index_access_sites(stmt))):
            ops.append(PatchOp("TemplateGuardArrayAccess", point, {"site": site}))
        if isinstance(stmt, (IfStmt, WhileStmt)):
            ops.append(PatchOp("TemplateMutateConditionTerm", point))
        for site in range(len(call_sites(stmt))):
            ops.append(PatchOp("TemplateSwapCallArg", point, {"site": site}))
    elif mode == "jmutrepair":
        for family, kind in (
            (REL_OPS, "MutRelationalOp"),
            (LOGIC_OPS, "MutLogicalOp"),
            (ARITH_OPS, "MutArithmeticOp"),
        ):
            for site, node in enumerate(binary_sites(stmt, family)):
                if kind == "MutLogicalOp":
                    ops.append(PatchOp(kind, point, {"site": site}))
                    continue
                for replacement in family:
                    if replacement != node.op:
                        ops.append(
                            PatchOp(kind, point, {"site": site, "replacement": replacement})
                        )
        if isinstance(stmt, (IfStmt, WhileStmt)):
            ops.append(PatchOp("MutNegateCondition", point))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ops
