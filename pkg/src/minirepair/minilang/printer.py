"""Canonical pretty-printer.

One statement per line, two-space indent per block depth, minimal
parentheses consistent with parser precedence, empty else branches
omitted. The output is the canonical form: reparsing it yields a
structurally identical unit with identical statement ids.
"""

from __future__ import annotations

from minirepair.minilang.nodes import (
    ArrayLit,
    AssignStmt,
    Binary,
    BoolLit,
    Call,
    Expr,
    ExprStmt,
    FunctionDef,
    IfStmt,
    Index,
    IndexAssignStmt,
    IntLit,
    Len,
    LetStmt,
    ReturnStmt,
    SourceUnit,
    Stmt,
    Unary,
    Var,
    WhileStmt,
)

_PRECEDENCE = {"||": 1, "&&": 2}
_PRECEDENCE.update({op: 3 for op in ("<", "<=", ">", ">=", "==", "!=")})
_PRECEDENCE.update({"+": 4, "-": 4})
_PRECEDENCE.update({"*": 5, "/": 5, "%": 5})
_UNARY_PRECEDENCE = 6


def print_expr(expr: Expr) -> str:
    return _expr(expr, 0)


def _expr(expr: Expr, parent_prec: int, right_side: bool = False) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Unary):
        return expr.op + _expr(expr.operand, _UNARY_PRECEDENCE)
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        text = f"{_expr(expr.lhs, prec)} {expr.op} {_expr(expr.rhs, prec, right_side=True)}"
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    if isinstance(expr, Index):
        return f"{expr.name}[{_expr(expr.index, 0)}]"
    if isinstance(expr, Len):
        return f"len({_expr(expr.arg, 0)})"
    if isinstance(expr, Call):
        return f"{expr.fn}({', '.join(_expr(a, 0) for a in expr.args)})"
    if isinstance(expr, ArrayLit):
        return f"[{', '.join(_expr(i, 0) for i in expr.items)}]"
    raise ValueError(f"unknown expression kind {type(expr).__name__}")


def print_stmt(stmt: Stmt, depth: int = 0) -> str:
    """Render one statement (including nested blocks) at the given depth."""
    return "\n".join(_stmt_lines(stmt, depth))


def _stmt_lines(stmt: Stmt, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(stmt, LetStmt):
        return [f"{pad}let {stmt.name} = {print_expr(stmt.value)};"]
    if isinstance(stmt, AssignStmt):
        return [f"{pad}{stmt.name} = {print_expr(stmt.value)};"]
    if isinstance(stmt, IndexAssignStmt):
        return [f"{pad}{stmt.name}[{print_expr(stmt.index)}] = {print_expr(stmt.value)};"]
    if isinstance(stmt, IfStmt):
        lines = [f"{pad}if ({print_expr(stmt.cond)}) {{"]
        lines.extend(_block_lines(stmt.then_body, depth + 1))
        if stmt.else_body:
            lines.append(f"{pad}}} else {{")
            lines.extend(_block_lines(stmt.else_body, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, WhileStmt):
        lines = [f"{pad}while ({print_expr(stmt.cond)}) {{"]
        lines.extend(_block_lines(stmt.body, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, ReturnStmt):
        return [f"{pad}return {print_expr(stmt.value)};"]
    if isinstance(stmt, ExprStmt):
        return [f"{pad}{print_expr(stmt.value)};"]
    raise ValueError(f"unknown statement kind {type(stmt).__name__}")


def _block_lines(block: list[Stmt], depth: int) -> list[str]:
    lines: list[str] = []
    for stmt in block:
        lines.extend(_stmt_lines(stmt, depth))
    return lines


def print_function(fn: FunctionDef) -> str:
    params = ", ".join(f"{name}: {type_}" for name, type_ in fn.params)
    lines = [f"fn {fn.name}({params}) -> {fn.return_type} {{"]
    lines.extend(_block_lines(fn.body, 1))
    lines.append("}")
    return "\n".join(lines)


def pretty_print(unit: SourceUnit) -> str:
    return "\n\n".join(print_function(fn) for fn in unit.functions) + "\n"
