"""Tiny arithmetic-expression evaluator on top of :mod:`ast`.

Accepts ``+ - * / ^`` (``^`` is read as a power), integer literals, names and
parentheses.  Division is only allowed by constants.  The caller supplies the
values of names and a factory turning rational constants into ring elements.
"""

import ast
from fractions import Fraction


class ExprError(ValueError):
    """Malformed expression; ``col`` is the 0-based column inside the text."""

    def __init__(self, message, col=0):
        super().__init__(message)
        self.col = col


def _constant_value(node):
    """Return the rational value of a constant-only subtree, or None."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _constant_value(node.operand)
        if v is None:
            return None
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        a = _constant_value(node.left)
        b = _constant_value(node.right)
        if a is None or b is None:
            return None
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if b == 0:
            raise ExprError("division by zero", node.col_offset)
        return a / b
    return None


def evaluate(text, names, const):
    """Evaluate ``text`` with ``names`` mapping identifiers to ring elements.

    ``const(Fraction)`` must return the ring element for a rational constant.
    """
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        col = (exc.offset or 1) - 1
        raise ExprError(f"cannot parse expression {text.strip()!r}", max(col, 0)) from None
    lead = len(source) - len(source.lstrip())
    return _walk(tree.body, names, const, lead)


def _walk(node, names, const, lead):
    col = getattr(node, "col_offset", 0) + lead
    value = _constant_value(node)
    if value is not None:
        return const(value)
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ExprError(f"unknown variable {node.id!r}", col)
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _walk(node.operand, names, const, lead)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = _constant_value(node.right)
            if exp is None or exp.denominator != 1:
                raise ExprError("exponent must be an integer constant", col)
            base = _walk(node.left, names, const, lead)
            try:
                return base ** int(exp)
            except (ValueError, ZeroDivisionError) as exc:
                raise ExprError(str(exc), col) from None
        if isinstance(node.op, ast.Div):
            d = _constant_value(node.right)
            if d is None:
                raise ExprError("can only divide by a constant", col)
            if d == 0:
                raise ExprError("division by zero", col)
            return _walk(node.left, names, const, lead) * const(1 / d)
        left = _walk(node.left, names, const, lead)
        right = _walk(node.right, names, const, lead)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
    raise ExprError(f"unsupported syntax {ast.dump(node)[:40]}", col)
