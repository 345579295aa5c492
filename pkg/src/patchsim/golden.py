"""Built-in evaluation corpus with planted ground truth.

Seven small buggy programs, each paired with one or more plausible patches:
every patch makes the whole original suite pass, but only some are actually
correct. The patches span three repair archetypes, recorded in the entry's
``group`` field:

- ``deletion``: the patch short-circuits or removes functionality,
- ``guard``: the patch inserts or alters a branch condition,
- ``mutation``: the patch replaces a statement or expression.

The mix is engineered to exercise every decision path of the classifier:
patches excluded from passing-test disturbance alone, patches that require
generated tests to expose, and plausible-but-wrong patches that survive (no
dynamic heuristic catches everything). Entry construction is deterministic,
including each family's generation recipe.
"""

from __future__ import annotations

from .corpus import CorpusEntry, make_entry, original_test
from .generate import GenConfig, ValuePools
from .minilang.interp import Oracle
from .trace import RESULT_FAILING, RESULT_PASSING

GROUP_DELETION = "deletion"
GROUP_GUARD = "guard"
GROUP_MUTATION = "mutation"


def _patched(source: str, *edits: tuple[str, str]) -> str:
    """Apply exact-match text edits, insisting each occurs exactly once."""
    for old, new in edits:
        if source.count(old) != 1:
            raise ValueError(f"edit target occurs {source.count(old)} times: {old!r}")
        source = source.replace(old, new)
    return source


def _value(test_id: str, result: str, entry: str, args: tuple, expected) -> tuple:
    return (test_id, result, entry, args, Oracle("value", expected))


# --- renderer: a draw call that throws on an empty dataset ------------------
# The failing test hits an undesired exception; all oracles only observe
# whether rendering completed, so skipping the work entirely still "passes".

CHART_BUGGY = """\
fn render(dataset) {
  let ok = 0;
  try {
    draw(dataset);
    ok = 1;
  } catch (NullData) {
    ok = 0;
  }
  return ok;
}

fn draw(dataset) {
  if (len(dataset) == 0) {
    throw NullData;
  }
  let drawn = 0;
  let i = 0;
  while (i < len(dataset)) {
    drawn = drawn + cell(dataset[i]);
    i = i + 1;
  }
  return drawn;
}

fn cell(v) {
  if (v < 0) {
    return 0;
  }
  return v;
}
"""

CHART_TESTS = [
    _value("t-null-dataset", RESULT_FAILING, "render", ([],), 1),
    _value("t-small", RESULT_PASSING, "render", ([3, 5, -1],), 1),
    _value("t-two", RESULT_PASSING, "render", ([2, 4],), 1),
]

CHART_GEN = GenConfig(seed=11, pools=ValuePools(strings=()))

CHART_PATCHES = [
    # skip the whole method; trivially avoids the exception
    (
        "chart-skip-draw",
        "incorrect",
        GROUP_DELETION,
        [(
            "fn draw(dataset) {\n  if (len(dataset) == 0) {",
            "fn draw(dataset) {\n  return 0;\n  if (len(dataset) == 0) {",
        )],
    ),
    # replace the whole body, guard included, with a size readout
    (
        "chart-gut-loop",
        "incorrect",
        GROUP_DELETION,
        [(
            """\
  if (len(dataset) == 0) {
    throw NullData;
  }
  let drawn = 0;
  let i = 0;
  while (i < len(dataset)) {
    drawn = drawn + cell(dataset[i]);
    i = i + 1;
  }
  return drawn;
""",
            "  return len(dataset);\n",
        )],
    ),
    # report success even when drawing failed
    (
        "chart-swallow",
        "incorrect",
        GROUP_MUTATION,
        [("  } catch (NullData) {\n    ok = 0;", "  } catch (NullData) {\n    ok = 1;")],
    ),
    # move the exception to size-one datasets instead of empty ones
    (
        "chart-guard-one",
        "incorrect",
        GROUP_GUARD,
        [("if (len(dataset) == 0) {", "if (len(dataset) == 1) {")],
    ),
    # the real fix: draw nothing instead of throwing
    (
        "chart-fix",
        "correct",
        GROUP_MUTATION,
        [("    throw NullData;", "    return 0;")],
    ),
    # same fix, spelled as a rewritten guard
    (
        "chart-fix-guardform",
        "correct",
        GROUP_GUARD,
        [(
            "  if (len(dataset) == 0) {\n    throw NullData;\n  }",
            "  if (len(dataset) < 1) {\n    return 0;\n  }",
        )],
    ),
]


# --- replace: per-element expansion that crashes on null-like elements ------
# Negative numbers stand in for null entries. The buggy loop calls elen() on
# every element and elen throws on null-likes. The repeat flag happens to be
# true in all passing tests and false in the failing one, so guarding the
# loop on it fools the original suite.

REPLACE_BUGGY = """\
fn total_increase(search, repl, repeat) {
  let increase = 0;
  let i = 0;
  while (i < len(search)) {
    let greater = elen(repl[i]) - elen(search[i]);
    if (greater > 0) {
      increase = increase + 3 * greater;
    }
    i = i + 1;
  }
  if (repeat) {
    increase = increase * 2;
  }
  return increase;
}

fn elen(x) {
  if (x < 0) {
    throw NullElem;
  }
  return x;
}
"""

REPLACE_TESTS = [
    _value("t-rep-null", RESULT_FAILING, "total_increase", ([-1, 2], [-1, 2], False), 0),
    _value("t-rep-null2", RESULT_FAILING, "total_increase", ([5], [-1], False), 0),
    _value("t-rep-two", RESULT_PASSING, "total_increase", ([1, 2], [4, 2], True), 18),
    _value("t-rep-one", RESULT_PASSING, "total_increase", ([1], [2], True), 6),
]

# Equal-length array pairs only: a search/repl length mismatch crashes inside
# the rewritten guard itself, which reads as behavior change on the real fix.
# Crashes from scalar arguments land before the loop and stay version-neutral.
REPLACE_GEN = GenConfig(
    seed=12,
    max_selected=10,
    entries=("total_increase",),
    pools=ValuePools(ints=(), strings=(), arrays=((), (-1, 2), (4, 2), (0, 0))),
)

REPLACE_PATCHES = [
    # run the loop only when repeat is set; dodges the crash by accident
    (
        "replace-guard-repeat",
        "incorrect",
        GROUP_GUARD,
        [(
            """\
  while (i < len(search)) {
    let greater = elen(repl[i]) - elen(search[i]);
    if (greater > 0) {
      increase = increase + 3 * greater;
    }
    i = i + 1;
  }
""",
            """\
  if (repeat) {
    while (i < len(search)) {
      let greater = elen(repl[i]) - elen(search[i]);
      if (greater > 0) {
        increase = increase + 3 * greater;
      }
      i = i + 1;
    }
  }
""",
        )],
    ),
    # same dodge expressed in the loop condition
    (
        "replace-guard-loopand",
        "incorrect",
        GROUP_GUARD,
        [("while (i < len(search)) {", "while (i < len(search) && repeat) {")],
    ),
    # neutralize the null check instead of handling nulls
    (
        "replace-nullmask",
        "incorrect",
        GROUP_GUARD,
        [("if (x < 0) {", "if (x < 0 && false) {")],
    ),
    # the real fix: skip null-like pairs, process the rest
    (
        "replace-fix",
        "correct",
        GROUP_GUARD,
        [(
            """\
    let greater = elen(repl[i]) - elen(search[i]);
    if (greater > 0) {
      increase = increase + 3 * greater;
    }
""",
            """\
    if (search[i] >= 0 && repl[i] >= 0) {
      let greater = elen(repl[i]) - elen(search[i]);
      if (greater > 0) {
        increase = increase + 3 * greater;
      }
    }
""",
        )],
    ),
]


# --- bank: fee misses the boundary amount -----------------------------------

BANK_BUGGY = """\
fn withdraw(balance, amount) {
  if (amount > balance) {
    throw Overdraft;
  }
  let fee = compute_fee(amount);
  let net = balance - amount;
  let left = net - fee;
  return left;
}

fn compute_fee(amount) {
  let fee = 0;
  if (amount > 100) {
    fee = 2;
  }
  return fee;
}
"""

BANK_TESTS = [
    _value("t-fee-boundary", RESULT_FAILING, "withdraw", (500, 100), 398),
    _value("t-small-amt", RESULT_PASSING, "withdraw", (500, 50), 450),
    _value("t-large-amt", RESULT_PASSING, "withdraw", (500, 120), 378),
    _value("t-tiny-amt", RESULT_PASSING, "withdraw", (80, 10), 70),
]

BANK_GEN = GenConfig(
    seed=13,
    entries=("withdraw",),
    pools=ValuePools(bools=(), strings=(), arrays=()),
)

BANK_PATCHES = [
    # the real fix: charge the fee from the boundary upward
    ("bank-fix", "correct", GROUP_GUARD, [("amount > 100", "amount >= 100")]),
    # same fix under integer arithmetic
    ("bank-fix-alt", "correct", GROUP_GUARD, [("amount > 100", "amount > 99")]),
    # hardcode the one failing input
    (
        "bank-special",
        "incorrect",
        GROUP_MUTATION,
        [(
            "fn withdraw(balance, amount) {\n  if (amount > balance) {",
            "fn withdraw(balance, amount) {\n  if (amount == 100) {\n"
            "    return balance - amount - 2;\n  }\n  if (amount > balance) {",
        )],
    ),
    # fix the fee, but also drop the overdraft check: the disturbance of
    # passing runs matches the failing run's, leaving no margin between them
    (
        "bank-delete-check",
        "incorrect",
        GROUP_DELETION,
        [
            ("amount > 100", "amount >= 100"),
            (
                "  if (amount > balance) {\n    throw Overdraft;\n  }\n  let fee",
                "  let fee",
            ),
        ],
    ),
    # replace the fee table with an integer-division formula that happens to
    # agree on every original amount
    (
        "bank-fee-formula",
        "incorrect",
        GROUP_MUTATION,
        [(
            """\
fn compute_fee(amount) {
  let fee = 0;
  if (amount > 100) {
    fee = 2;
  }
  return fee;
}
""",
            """\
fn compute_fee(amount) {
  return amount / 100 * 2;
}
""",
        )],
    ),
]


# --- stats: summary triple that crashes on empty input -----------------------

STATS_BUGGY = """\
fn summarize(xs) {
  if (len(xs) == 0) {
    throw EmptyInput;
  }
  let lo = xs[0];
  let hi = xs[0];
  let total = 0;
  let i = 0;
  while (i < len(xs)) {
    let v = xs[i];
    if (v < lo) {
      lo = v;
    }
    if (v > hi) {
      hi = v;
    }
    total = total + v;
    i = i + 1;
  }
  return [lo, hi, total / len(xs)];
}
"""

STATS_TESTS = [
    _value("t-stats-empty", RESULT_FAILING, "summarize", ([],), [0, 0, 0]),
    _value("t-stats-mixed", RESULT_PASSING, "summarize", ([1, 5, 2],), [1, 5, 2]),
    _value("t-stats-flat", RESULT_PASSING, "summarize", ([4, 4, 4],), [4, 4, 4]),
    _value("t-stats-two", RESULT_PASSING, "summarize", ([2, 6],), [2, 6, 4]),
]

STATS_GEN = GenConfig(seed=14, pools=ValuePools(strings=(), bools=()))

STATS_PATCHES = [
    # the real fix: empty input gets the zero triple
    (
        "stats-fix",
        "correct",
        GROUP_MUTATION,
        [("    throw EmptyInput;", "    return [0, 0, 0];")],
    ),
    # equally real: catch the exception at the boundary
    (
        "stats-fix-wrap",
        "correct",
        GROUP_MUTATION,
        [(
            """\
fn summarize(xs) {
  if (len(xs) == 0) {
    throw EmptyInput;
  }
""",
            """\
fn summarize(xs) {
  try {
  if (len(xs) == 0) {
    throw EmptyInput;
  }
""",
        ), (
            """\
  return [lo, hi, total / len(xs)];
}
""",
            """\
  return [lo, hi, total / len(xs)];
  } catch (EmptyInput) {
    return [0, 0, 0];
  }
}
""",
        )],
    ),
    # fix plus a magic-number escape hatch nobody asked for
    (
        "stats-magic",
        "incorrect",
        GROUP_GUARD,
        [
            ("if (len(xs) == 0) {", "if (len(xs) == 0 || xs[0] == 99) {"),
            ("    throw EmptyInput;", "    return [0, 0, 0];"),
        ],
    ),
    # overshoot: treat singletons like empty input too
    (
        "stats-len1",
        "incorrect",
        GROUP_GUARD,
        [
            ("if (len(xs) == 0) {", "if (len(xs) <= 1) {"),
            ("    throw EmptyInput;", "    return [0, 0, 0];"),
        ],
    ),
]


# --- score: token weights misclassify length-3 tokens ------------------------

SCORE_BUGGY = """\
fn score(tokens) {
  let total = 0;
  let i = 0;
  while (i < len(tokens)) {
    total = total + weight(tokens[i]);
    i = i + 1;
  }
  return total;
}

fn weight(t) {
  if (t == "stop") {
    return 0;
  }
  if (len(t) > 3) {
    return 2;
  }
  return 1;
}
"""

SCORE_TESTS = [
    _value("t-score-edge", RESULT_FAILING, "score", (["abc"],), 2),
    _value("t-score-edge2", RESULT_FAILING, "score", (["abc", "abc"],), 4),
    _value("t-score-mixed", RESULT_PASSING, "score", (["ab", "abcd", "stop"],), 3),
    _value("t-score-short", RESULT_PASSING, "score", (["xy"],), 1),
]

SCORE_GEN = GenConfig(
    seed=15,
    entries=("score",),
    pools=ValuePools(
        ints=(),
        bools=(),
        strings=("", "a", "ab", "abc", "abcd", "stop"),
        arrays=(("ab",), ("abc", "xy"), ("stop", "abcd"), ()),
    ),
)

SCORE_PATCHES = [
    # the real fix: heavy weight starts at length 3
    ("score-fix", "correct", GROUP_GUARD, [("len(t) > 3", "len(t) >= 3")]),
    # fix plus an unrelated cap on how many tokens get scored; the original
    # suite never scores more than two non-stop tokens, so it slips through
    (
        "score-trunc",
        "incorrect",
        GROUP_GUARD,
        [
            ("len(t) > 3", "len(t) >= 3"),
            ("while (i < len(tokens)) {", "while (i < len(tokens) && i < 2) {"),
        ],
    ),
    # hardcode the failing token
    (
        "score-special",
        "incorrect",
        GROUP_MUTATION,
        [(
            "fn weight(t) {\n  if (t == \"stop\") {",
            "fn weight(t) {\n  if (t == \"abc\") {\n    return 2;\n  }\n  if (t == \"stop\") {",
        )],
    ),
]


# --- cart: checkout rejects zero-quantity orders ------------------------------
# Oracles only observe the ok flag, mirroring exception-presence tests.

CART_BUGGY = """\
fn checkout(prices, qty) {
  let count = len(prices);
  if (count == 0) {
    return 1;
  }
  let ok = 0;
  try {
    let t = subtotal(prices, qty);
    ok = 1;
  } catch (BadQty) {
    ok = 0;
  }
  return ok;
}

fn subtotal(prices, qty) {
  let n = len(prices);
  if (qty <= 0) {
    throw BadQty;
  }
  let total = 0;
  let i = 0;
  while (i < n) {
    total = total + prices[i] * qty;
    i = i + 1;
  }
  return total;
}
"""

CART_TESTS = [
    _value("t-cart-zero", RESULT_FAILING, "checkout", ([5], 0), 1),
    _value("t-cart-pair", RESULT_PASSING, "checkout", ([2, 3], 2), 1),
    _value("t-cart-empty", RESULT_PASSING, "checkout", ([], 1), 1),
]

# Route generation through checkout: its len() probe rejects non-array prices
# before subtotal is entered, so such calls never count as covering and the
# selected sample stays on the guard-relevant inputs.
CART_GEN = GenConfig(
    seed=1016,
    entries=("checkout",),
    pools=ValuePools(ints=(0, 2), strings=()),
)

CART_PATCHES = [
    # the real fix: only negative quantities are bad
    ("cart-fix", "correct", GROUP_GUARD, [("qty <= 0", "qty < 0")]),
    # skip the computation entirely
    (
        "cart-skip-subtotal",
        "incorrect",
        GROUP_DELETION,
        [(
            "fn subtotal(prices, qty) {\n  let n = len(prices);",
            "fn subtotal(prices, qty) {\n  return 0;\n  let n = len(prices);",
        )],
    ),
    # report success without doing anything
    (
        "cart-skip-checkout",
        "incorrect",
        GROUP_DELETION,
        [(
            "fn checkout(prices, qty) {\n  let count = len(prices);",
            "fn checkout(prices, qty) {\n  return 1;\n  let count = len(prices);",
        )],
    ),
    # call the failure a success in the handler
    (
        "cart-swallow",
        "incorrect",
        GROUP_MUTATION,
        [("  } catch (BadQty) {\n    ok = 0;", "  } catch (BadQty) {\n    ok = 1;")],
    ),
    # fix zero quantities but reject four-item carts for no reason
    (
        "cart-guard-len4",
        "incorrect",
        GROUP_GUARD,
        [("if (qty <= 0) {", "if (qty < 0 || len(prices) == 4) {")],
    ),
    # silently coerce bad quantities to one
    (
        "cart-qty-reset",
        "incorrect",
        GROUP_MUTATION,
        [("    throw BadQty;", "    qty = 1;")],
    ),
]


# --- steps: accumulator with a stray extra increment --------------------------

STEPS_BUGGY = """\
fn total_steps(xs) {
  let t = 0;
  let i = 0;
  while (i < len(xs)) {
    t = t + xs[i];
    t = t + 1;
    i = i + 1;
  }
  return t;
}
"""

STEPS_TESTS = [
    _value("t-steps-pair", RESULT_FAILING, "total_steps", ([2, 3],), 5),
    _value("t-steps-one", RESULT_FAILING, "total_steps", ([7],), 7),
    _value("t-steps-empty", RESULT_PASSING, "total_steps", ([],), 0),
]

STEPS_GEN = GenConfig(
    seed=17,
    pools=ValuePools(strings=(), bools=(), arrays=((), (0,), (1, 2), (3, 1))),
)

STEPS_PATCHES = [
    # the real fix: delete the stray increment
    (
        "steps-fix",
        "correct",
        GROUP_DELETION,
        [("    t = t + xs[i];\n    t = t + 1;\n", "    t = t + xs[i];\n")],
    ),
    # neutralize it instead of deleting it
    ("steps-noop", "correct", GROUP_MUTATION, [("t = t + 1;", "t = t + 0;")]),
    # fix it, then refuse inputs longer than the test suite's
    (
        "steps-guard-big",
        "incorrect",
        GROUP_DELETION,
        [(
            "fn total_steps(xs) {\n  let t = 0;",
            "fn total_steps(xs) {\n  if (len(xs) > 2) {\n    return 0;\n  }\n  let t = 0;",
        ), (
            "    t = t + xs[i];\n    t = t + 1;\n",
            "    t = t + xs[i];\n",
        )],
    ),
]


_FAMILIES = [
    (CHART_BUGGY, CHART_TESTS, CHART_GEN, CHART_PATCHES),
    (REPLACE_BUGGY, REPLACE_TESTS, REPLACE_GEN, REPLACE_PATCHES),
    (BANK_BUGGY, BANK_TESTS, BANK_GEN, BANK_PATCHES),
    (STATS_BUGGY, STATS_TESTS, STATS_GEN, STATS_PATCHES),
    (SCORE_BUGGY, SCORE_TESTS, SCORE_GEN, SCORE_PATCHES),
    (CART_BUGGY, CART_TESTS, CART_GEN, CART_PATCHES),
    (STEPS_BUGGY, STEPS_TESTS, STEPS_GEN, STEPS_PATCHES),
]


def golden_corpus() -> list[CorpusEntry]:
    """All bundled entries, ordered by patch id."""
    entries = []
    for buggy, tests, gen_cfg, patches in _FAMILIES:
        originals = [original_test(*t) for t in tests]
        for patch_id, truth, group, edits in patches:
            entries.append(
                make_entry(
                    patch_id,
                    buggy,
                    _patched(buggy, *edits),
                    originals,
                    ground_truth=truth,
                    group=group,
                    gen=gen_cfg,
                )
            )
    return sorted(entries, key=lambda e: e.patch_id)
