"""Alternative patch classifiers to compare the main approach against.

Three signals: syntactic distance (minimum AST node insertions+deletions
between versions), semantic distance LED (mean before/after full-spectrum
distance over covering original tests), and a crash oracle (a patch that
introduces a new crash on any test is incorrect). The first two produce raw
scores; thresholding them is left to the evaluation harness.
"""

from __future__ import annotations

from statistics import fmean
from typing import Mapping, Sequence

from .classify import MissingTrace, measure_patch_distances
from .distance import DEFAULT_CONFIG, DistanceConfig
from .minilang.syntax import (
    ArrayLit,
    Assert,
    Assign,
    BinOp,
    BoolLit,
    Call,
    ExprStmt,
    Function,
    If,
    Index,
    IndexAssign,
    IntLit,
    Let,
    Name,
    Program,
    Return,
    StrLit,
    Throw,
    TryCatch,
    UnaryOp,
    While,
)
from .trace import Alignment, Spectrum, TestCase

CRASH_INCORRECT = "incorrect"
CRASH_NO_SIGNAL = "no-signal"


class EmptyCoveringSet(Exception):
    """No original test covers a modified method."""


# AST node inventory for the edit distance. Every node is (label, children);
# identifiers, literal values, and operators live in the label, so changing
# any of them costs one deletion plus one insertion.
def ast_tree(p: Program) -> tuple:
    return (("program",), tuple(_fn_node(f) for f in p.functions))


def _fn_node(f: Function) -> tuple:
    params = tuple((("param", name), ()) for name in f.params)
    return (("fn", f.name), params + (_block(f.body),))


def _block(stmts) -> tuple:
    return (("block",), tuple(_stmt_node(s) for s in stmts))


def _stmt_node(s) -> tuple:
    kind = type(s)
    if kind is Let:
        return (("let", s.var), (_expr_node(s.value),))
    if kind is Assign:
        return (("assign", s.var), (_expr_node(s.value),))
    if kind is IndexAssign:
        return (("index-assign", s.var), (_expr_node(s.index), _expr_node(s.value)))
    if kind is If:
        children = [_expr_node(s.cond), _block(s.then)]
        if s.orelse:
            children.append(_block(s.orelse))
        return (("if",), tuple(children))
    if kind is While:
        return (("while",), (_expr_node(s.cond), _block(s.body)))
    if kind is Return:
        return (("return",), (_expr_node(s.value),) if s.value is not None else ())
    if kind is Throw:
        return (("throw", s.tag), ())
    if kind is TryCatch:
        return (("try", s.tag), (_block(s.body), _block(s.handler)))
    if kind is Assert:
        return (("assert",), (_expr_node(s.cond),))
    if kind is ExprStmt:
        return (("expr-stmt",), (_expr_node(s.value),))
    raise TypeError(f"not a statement: {s!r}")


def _expr_node(e) -> tuple:
    kind = type(e)
    if kind is IntLit:
        return (("int", e.value), ())
    if kind is BoolLit:
        return (("bool", e.value), ())
    if kind is StrLit:
        return (("str", e.value), ())
    if kind is Name:
        return (("name", e.ident), ())
    if kind is BinOp:
        return (("binop", e.op), (_expr_node(e.left), _expr_node(e.right)))
    if kind is UnaryOp:
        return (("unop", e.op), (_expr_node(e.operand),))
    if kind is Call:
        return (("call", e.func), tuple(_expr_node(a) for a in e.args))
    if kind is Index:
        return (("index",), (_expr_node(e.base), _expr_node(e.index)))
    if kind is ArrayLit:
        return (("array",), tuple(_expr_node(x) for x in e.items))
    raise TypeError(f"not an expression: {e!r}")


def _index_tree(root: tuple):
    """Postorder labels and leftmost-leaf indices for the edit distance DP."""
    labels: list = []
    lml: list[int] = []

    def walk(node) -> int:
        label, children = node
        first = None
        for c in children:
            idx = walk(c)
            if first is None:
                first = idx
        my = len(labels)
        labels.append(label)
        lml.append(first if first is not None else my)
        return lml[my]

    walk(root)
    return labels, lml


def _keyroots(lml: Sequence[int]) -> list[int]:
    seen: set[int] = set()
    roots = []
    for i in range(len(lml) - 1, -1, -1):
        if lml[i] not in seen:
            roots.append(i)
            seen.add(lml[i])
    return sorted(roots)


def tree_edit_distance(t1: tuple, t2: tuple) -> int:
    """Minimum node edits between ordered labeled trees.

    Insert and delete cost 1; a label change costs 2 (delete plus insert),
    so the result counts pure node insertions and deletions.
    """
    labels1, lml1 = _index_tree(t1)
    labels2, lml2 = _index_tree(t2)
    n1, n2 = len(labels1), len(labels2)
    td = [[0] * n2 for _ in range(n1)]

    for i in _keyroots(lml1):
        for j in _keyroots(lml2):
            ioff, joff = lml1[i] - 1, lml2[j] - 1
            m, n = i - ioff, j - joff
            fd = [[0] * (n + 1) for _ in range(m + 1)]
            for x in range(1, m + 1):
                fd[x][0] = fd[x - 1][0] + 1
            for y in range(1, n + 1):
                fd[0][y] = fd[0][y - 1] + 1
            for x in range(1, m + 1):
                for y in range(1, n + 1):
                    if lml1[x + ioff] == lml1[i] and lml2[y + joff] == lml2[j]:
                        relabel = 0 if labels1[x + ioff] == labels2[y + joff] else 2
                        fd[x][y] = min(
                            fd[x - 1][y] + 1,
                            fd[x][y - 1] + 1,
                            fd[x - 1][y - 1] + relabel,
                        )
                        td[x + ioff][y + joff] = fd[x][y]
                    else:
                        p = lml1[x + ioff] - 1 - ioff
                        q = lml2[y + joff] - 1 - joff
                        fd[x][y] = min(
                            fd[x - 1][y] + 1,
                            fd[x][y - 1] + 1,
                            fd[p][q] + td[x + ioff][y + joff],
                        )
    return td[n1 - 1][n2 - 1]


def syntactic_distance(buggy: Program, patched: Program) -> int:
    """AST node insertions+deletions turning one version into the other."""
    return tree_edit_distance(ast_tree(buggy), ast_tree(patched))


def semantic_distance_led(
    originals: Sequence[TestCase],
    buggy_full: Mapping[str, Spectrum],
    patched_full: Mapping[str, Spectrum],
    buggy_context: Mapping[str, Spectrum],
    alignment: Alignment,
    config: DistanceConfig = DEFAULT_CONFIG,
) -> float:
    """Mean before/after full-spectrum distance over covering originals.

    Reuses the patch-distance measurer, so this equals the mean of the
    patch classifier's vector restricted to covering original tests.
    """
    covering = []
    for t in originals:
        if t.test_id not in buggy_context:
            raise MissingTrace(f"no context spectrum for original {t.test_id!r}")
        if buggy_context[t.test_id].events:
            covering.append(t)
    if not covering:
        raise EmptyCoveringSet("no original test covers a modified method")
    vec = measure_patch_distances(covering, buggy_full, patched_full, alignment, config)
    return fmean(e.value for e in vec.entries)


def crash_oracle(
    tests: Sequence[TestCase],
    buggy: Mapping[str, Spectrum],
    patched: Mapping[str, Spectrum],
) -> str:
    """incorrect iff some test crashes on the patched version only.

    Never asserts correctness: the absence of new crashes is merely
    no-signal. Adding tests can only strengthen the verdict.
    """
    for t in tests:
        if t.test_id not in buggy or t.test_id not in patched:
            raise MissingTrace(f"missing spectra for test {t.test_id!r}")
        if patched[t.test_id].crashed and not buggy[t.test_id].crashed:
            return CRASH_INCORRECT
    return CRASH_NO_SIGNAL
