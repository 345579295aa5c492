import pytest

from patchsim.minilang import (
    Oracle,
    ParseError,
    TestInvocation,
    align_versions,
    build_patch_spec,
    modified_methods,
    parse,
    pretty_print,
    run_traced,
)
from patchsim.trace import ENTER, EXIT, STATEMENT, TEST_END, UNWIND, extract_full_spectrum

SUM_TO = """
fn sum_to(n) {
  let total = 0;
  let i = 1;
  while (i <= n) {
    total = total + i;
    i = i + 1;
  }
  return total;
}
"""


def stmt_ids(events):
    return [e.stmt for e in events if e.kind == STATEMENT]


class TestParser:
    def test_dense_ids_in_source_order(self):
        p = parse("fn f() { let a = 1; let b = 2; return a + b; }")
        assert p.n_statements == 3
        assert sorted(p.statement_owners()) == [0, 1, 2]

    def test_nested_ids_preorder(self):
        p = parse(
            """
            fn f(x) {
              if (x > 0) {
                return 1;
              } else {
                return 2;
              }
            }
            fn g() {
              return 3;
            }
            """
        )
        f = p.function("f")
        assert f.body[0].stmt_id == 0
        assert f.body[0].then[0].stmt_id == 1
        assert f.body[0].orelse[0].stmt_id == 2
        assert p.function("g").body[0].stmt_id == 3
        assert p.n_statements == 4

    def test_owners(self):
        p = parse(SUM_TO)
        assert p.statement_owners() == {i: "sum_to" for i in range(6)}

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as err:
            parse("fn f() { let = 3; }")
        assert err.value.line == 1

    def test_duplicate_function_rejected(self):
        with pytest.raises(ParseError):
            parse("fn f() { return 1; } fn f() { return 2; }")

    def test_duplicate_param_rejected(self):
        with pytest.raises(ParseError):
            parse("fn f(a, a) { return a; }")

    def test_comments_ignored(self):
        p = parse("fn f() { # setup\n  return 1; # done\n}")
        assert p.n_statements == 1

    ROUND_TRIP_SOURCES = [
        SUM_TO,
        "fn f(a, b, c) { return a - b - c; }",
        "fn f(a, b, c) { return a - (b - c); }",
        "fn f(a, b) { return -a * b; }",
        "fn f(a, b) { return -(a * b); }",
        "fn f(a, b, c) { return !(a == b) && c || a < b == c; }",
        'fn f() { let s = "he\\"llo\\n"; return s + "x"; }',
        "fn f(m, i) { return m[i][0] + g(m)[1]; } fn g(x) { return x; }",
        "fn f() { let a = [1, [2, 3], \"s\", true]; a[0] = 9; return a; }",
        """
        fn f(x) {
          try {
            if (x % 2 == 0) {
              throw Even;
            }
            while (x > 0) {
              x = x - 1;
            }
          } catch (Even) {
            assert x != 1;
          }
          return x;
        }
        """,
        "fn f() { return; }",
        "fn f(a) { a; -a; !true; [1][0]; return 0; }",
    ]

    @pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
    def test_pretty_print_round_trip(self, src):
        p = parse(src)
        assert parse(pretty_print(p)) == p

    @pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
    def test_ids_dense(self, src):
        p = parse(src)
        assert set(p.statement_owners()) == set(range(p.n_statements))
        lines = p.statement_lines()
        assert set(lines) == set(range(p.n_statements))


class TestInterpreter:
    def test_identity_function(self):
        p = parse("fn id(x) { return x; }")
        r = run_traced(p, TestInvocation("id", (5,), Oracle("value", 5)))
        assert r.outcome == "passed"
        assert r.value == 5
        kinds = [e.kind for e in r.events]
        assert kinds == [ENTER, STATEMENT, EXIT, TEST_END]

    def test_loop_trace_hand_derived(self):
        # ids: 0 let total, 1 let i, 2 while, 3 total=, 4 i=, 5 return
        p = parse(SUM_TO)
        r = run_traced(p, TestInvocation("sum_to", (3,)))
        assert r.value == 6
        assert stmt_ids(r.events) == [0, 1, 2, 3, 4, 2, 3, 4, 2, 3, 4, 2, 5]

    def test_value_oracle_violation_fails(self):
        p = parse("fn id(x) { return x; }")
        r = run_traced(p, TestInvocation("id", (5,), Oracle("value", 6)))
        assert r.outcome == "failed"

    def test_completes_oracle(self):
        p = parse("fn f(x) { return 10 / x; }")
        ok = run_traced(p, TestInvocation("f", (2,), Oracle("completes")))
        assert ok.outcome == "passed"
        bad = run_traced(p, TestInvocation("f", (0,), Oracle("completes")))
        assert bad.outcome == "crashed"

    def test_division_by_zero_unwinds(self):
        p = parse("fn f(a) { let b = 10 / a; return b; }")
        r = run_traced(p, TestInvocation("f", (0,)))
        assert r.outcome == "crashed"
        assert r.error_tag == "DivByZero"
        assert [e.kind for e in r.events] == [ENTER, STATEMENT, UNWIND, TEST_END]
        assert extract_full_spectrum(r.events).crashed is True

    def test_nested_crash_unwinds_every_frame(self):
        p = parse(
            "fn outer(a) { let r = inner(a); return r; } fn inner(a) { return 10 / a; }"
        )
        r = run_traced(p, TestInvocation("outer", (0,)))
        kinds_methods = [(e.kind, e.method) for e in r.events if e.kind in (ENTER, EXIT, UNWIND)]
        assert kinds_methods == [
            (ENTER, "outer"), (ENTER, "inner"), (UNWIND, "inner"), (UNWIND, "outer"),
        ]

    CATCH = """
    fn safe(a) {
      let r = 0;
      try {
        r = 10 / a;
      } catch (DivByZero) {
        r = -1;
      }
      return r;
    }
    """

    def test_catch_matching_tag(self):
        p = parse(self.CATCH)
        r = run_traced(p, TestInvocation("safe", (0,)))
        assert r.outcome == "passed" and r.value == -1
        assert stmt_ids(r.events) == [0, 1, 2, 3, 4]
        assert extract_full_spectrum(r.events).crashed is False

    def test_non_matching_tag_propagates(self):
        p = parse(self.CATCH.replace("DivByZero", "IndexOutOfBounds"))
        r = run_traced(p, TestInvocation("safe", (0,)))
        assert r.outcome == "crashed" and r.error_tag == "DivByZero"

    def test_user_tags(self):
        p = parse(
            """
            fn f(x) {
              try {
                if (x < 0) {
                  throw Negative;
                }
              } catch (Negative) {
                return -1;
              }
              return 1;
            }
            """
        )
        assert run_traced(p, TestInvocation("f", (-3,))).value == -1
        assert run_traced(p, TestInvocation("f", (3,))).value == 1

    def test_fuel_exhaustion_is_uncatchable(self):
        p = parse(
            """
            fn spin() {
              try {
                while (true) {
                }
              } catch (FuelExhausted) {
                return 1;
              }
              return 0;
            }
            """
        )
        r = run_traced(p, TestInvocation("spin"), fuel=50)
        assert r.outcome == "crashed"
        assert r.fuel_exhausted is True
        assert r.error_tag == "FuelExhausted"
        assert extract_full_spectrum(r.events).crashed is True

    def test_recursion_depth_cap(self):
        p = parse("fn r(n) { return r(n); }")
        out = run_traced(p, TestInvocation("r", (1,)), max_depth=10)
        assert out.outcome == "crashed" and out.error_tag == "StackOverflow"
        assert extract_full_spectrum(out.events).events  # still well-formed

    def test_assert_failure(self):
        p = parse("fn f(x) { assert x > 0; return x; }")
        assert run_traced(p, TestInvocation("f", (1,))).outcome == "passed"
        r = run_traced(p, TestInvocation("f", (0,)))
        assert r.outcome == "crashed" and r.error_tag == "AssertFail"

    @pytest.mark.parametrize(
        "src,args,tag",
        [
            ("fn f() { return x; }", (), "UndefVar"),
            ("fn f() { x = 1; return 0; }", (), "UndefVar"),
            ("fn f() { return g(); }", (), "UnknownFunction"),
            ("fn f(a) { return f(); }", (1,), "ArityError"),
            ("fn f(a) { return a[5]; }", ([1, 2],), "IndexOutOfBounds"),
            ("fn f(a) { return a[-1]; }", ([1, 2],), "IndexOutOfBounds"),
            ("fn f(a) { return a + true; }", (1,), "TypeError"),
            ("fn f(a) { if (a) { return 1; } return 0; }", (3,), "TypeError"),
            ("fn f(a) { return len(a); }", (7,), "TypeError"),
            ('fn f() { return "a" < 1; }', (), "TypeError"),
        ],
    )
    def test_runtime_error_tags(self, src, args, tag):
        r = run_traced(parse(src), TestInvocation("f", args))
        assert r.outcome == "crashed" and r.error_tag == tag

    def test_builtins(self):
        p = parse(
            """
            fn f(a) {
              push(a, 10);
              let n = len(a);
              return [n, a, len("xyz")];
            }
            """
        )
        r = run_traced(p, TestInvocation("f", ([1, 2],)))
        assert r.value == [3, [1, 2, 10], 3]

    def test_invocation_arguments_not_mutated(self):
        p = parse("fn mutate(a) { push(a, 99); return len(a); }")
        inv = TestInvocation("mutate", ([1],))
        assert run_traced(p, inv).value == 2
        assert run_traced(p, inv).value == 2
        assert inv.args == ([1],)

    def test_determinism(self):
        p = parse(SUM_TO)
        inv = TestInvocation("sum_to", (25,))
        assert run_traced(p, inv) == run_traced(p, inv)

    def test_int_bool_distinct(self):
        p = parse("fn f() { return 1 == true; }")
        assert run_traced(p, TestInvocation("f")).value is False

    def test_short_circuit(self):
        p = parse("fn f(a) { return a != 0 && 10 / a > 1; }")
        r = run_traced(p, TestInvocation("f", (0,)))
        assert r.outcome == "passed" and r.value is False

    def test_string_ops(self):
        p = parse('fn f(s) { return [s + "!", s < "zz", s[1]]; }')
        r = run_traced(p, TestInvocation("f", ("ab",)))
        assert r.value == ["ab!", True, "b"]

    def test_floor_division_and_modulo(self):
        p = parse("fn f(a, b) { return [a / b, a % b]; }")
        assert run_traced(p, TestInvocation("f", (7, 2))).value == [3, 1]
        assert run_traced(p, TestInvocation("f", (-7, 2))).value == [-4, 1]

    def test_float_argument_rejected(self):
        p = parse("fn f(x) { return x; }")
        with pytest.raises(ValueError):
            run_traced(p, TestInvocation("f", (1.5,)))

    def test_missing_entry_rejected(self):
        with pytest.raises(ValueError):
            run_traced(parse("fn f() { return 1; }"), TestInvocation("g"))


BUGGY_GUARDED = """
fn process(items) {
  let total = 0;
  let i = 0;
  while (i < len(items)) {
    total = total + items[i];
    i = i + 1;
  }
  return total;
}
"""

PATCHED_GUARDED = """
fn process(items) {
  let total = 0;
  let i = 0;
  while (i < len(items)) {
    if (items[i] > 0) {
      total = total + items[i];
    }
    i = i + 1;
  }
  return total;
}
"""


class TestAlignment:
    def test_identical_sources_total_bijection(self):
        b = parse(SUM_TO)
        p = parse(SUM_TO)
        al = align_versions(b, p)
        assert al.pairs == tuple((i, i) for i in range(b.n_statements))
        assert modified_methods(b, p, al) == frozenset()

    def test_inserted_guard_gets_fresh_id(self):
        b = parse(BUGGY_GUARDED)
        p = parse(PATCHED_GUARDED)
        al = align_versions(b, p)
        aligned_patched = {pp for _, pp in al.pairs}
        # buggy ids: 0 let,1 let,2 while,3 total=,4 i=,5 return
        # patched ids: 0 let,1 let,2 while,3 if,4 total=,5 i=,6 return
        assert dict(al.pairs) == {0: 0, 1: 1, 2: 2, 3: 4, 4: 5, 5: 6}
        assert 3 not in aligned_patched  # the new guard
        assert modified_methods(b, p, al) == {"process"}

    def test_rewritten_function_unaligned(self):
        b = parse("fn f(a) {\n  let x = a + 1;\n  return x;\n}\nfn g() {\n  return 7;\n}")
        p = parse("fn f(a) {\n  let y = a * 2;\n  return y + 1;\n}\nfn g() {\n  return 7;\n}")
        al = align_versions(b, p)
        owners_b = b.statement_owners()
        assert all(owners_b[sb] != "f" for sb, _ in al.pairs)
        assert modified_methods(b, p, al) == {"f"}

    def test_deleted_statement_marks_method(self):
        b = parse("fn f(a) { let x = 1; let y = 2; return x + y; }")
        p = parse("fn f(a) { let x = 1; return x + 2; }")
        assert "f" in modified_methods(b, p)

    def test_function_only_in_one_version(self):
        b = parse("fn f() {\n  return 1;\n}")
        p = parse("fn f() {\n  return 1;\n}\nfn helper() {\n  return 2;\n}")
        assert modified_methods(b, p) == {"helper"}

    def test_signature_change_marks_method(self):
        b = parse("fn f(a) { return 1; }")
        p = parse("fn f(a, b) { return 1; }")
        assert modified_methods(b, p) == {"f"}

    def test_whitespace_only_change_aligns_everything(self):
        b = parse(SUM_TO)
        p = parse(SUM_TO.replace("  ", "      "))
        al = align_versions(b, p)
        assert len(al.pairs) == b.n_statements
        assert modified_methods(b, p, al) == frozenset()

    def test_aligned_statements_textually_identical(self):
        b = parse(BUGGY_GUARDED)
        p = parse(PATCHED_GUARDED)
        al = align_versions(b, p)
        b_lines = BUGGY_GUARDED.splitlines()
        p_lines = PATCHED_GUARDED.splitlines()
        bl, pl = b.statement_lines(), p.statement_lines()
        for sb, sp in al.pairs:
            assert b_lines[bl[sb] - 1].strip() == p_lines[pl[sp] - 1].strip()

    def test_build_patch_spec(self):
        spec = build_patch_spec(BUGGY_GUARDED, PATCHED_GUARDED)
        assert spec.modified_methods == {"process"}
        assert spec.alignment.buggy_max == 5

    def test_identical_sources_make_no_patch(self):
        with pytest.raises(ValueError):
            build_patch_spec(SUM_TO, SUM_TO)
