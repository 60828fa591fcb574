"""Command-line interface: subcommands, formats, exit codes, streams."""

import io
import json

import jsonschema
import pytest

from lcfield.cli import (
    CliConfig,
    UsageError,
    load_corpus,
    main,
    parse_bindings,
    run,
)

RATIONAL = r"^-?\d+(/\d+)?$"

LC_NUMBER_SCHEMA = {
    "type": "object",
    "required": ["terms", "precision"],
    "additionalProperties": False,
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exp", "coef"],
                "additionalProperties": False,
                "properties": {
                    "exp": {"type": "string", "pattern": RATIONAL},
                    "coef": {"type": "string", "pattern": RATIONAL},
                },
            },
        },
        "precision": {"type": "integer", "minimum": 1},
    },
}

GALLERY_SCHEMA = {
    "type": "object",
    "required": ["example", "parameters", "claims", "pass"],
    "additionalProperties": False,
    "properties": {
        "example": {"type": "string"},
        "parameters": {"type": "array", "items": {"type": "string"}},
        "claims": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["description", "computed", "expected", "pass"],
                "additionalProperties": False,
                "properties": {
                    "description": {"type": "string"},
                    "computed": {"type": "string"},
                    "expected": {"type": "string"},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "pass": {"type": "boolean"},
    },
}

SAMPLE_SCHEMA = {
    "type": "object",
    "required": ["point", "agree"],
    "additionalProperties": False,
    "properties": {
        "point": {
            "type": "object",
            "additionalProperties": {"type": "string"},
        },
        "agree": {"type": ["boolean", "null"]},
    },
}

TRANSFER_SCHEMA = {
    "type": "object",
    "required": [
        "identity",
        "finite_samples",
        "infinite_samples",
        "counterexample",
        "seed",
    ],
    "additionalProperties": False,
    "properties": {
        "identity": {"type": "boolean"},
        "finite_samples": {"type": "array", "items": SAMPLE_SCHEMA},
        "infinite_samples": {"type": "array", "items": SAMPLE_SCHEMA},
        "counterexample": {
            "type": ["object", "null"],
            "required": ["point", "lhs", "rhs"],
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- eval ----------------------------------------------------------------


def test_eval_text(capsys):
    code, out, err = invoke(capsys, "eval", "2 + 3*eps")
    assert code == 0
    assert out == "2 + 3·eps (appreciable)\nshadow: 2\n"
    assert err == ""


def test_eval_infinite_has_no_shadow_line(capsys):
    code, out, err = invoke(capsys, "eval", "H")
    assert code == 0
    assert out == "eps^-1 (infinite)\n"


def test_eval_json_matches_schema(capsys):
    code, out, err = invoke(capsys, "eval", "--format", "json", "2 + 3*eps")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, LC_NUMBER_SCHEMA)
    assert payload["terms"] == [
        {"exp": "0", "coef": "2"},
        {"exp": "1", "coef": "3"},
    ]
    assert payload["precision"] == 16


def test_eval_respects_precision_flag(capsys):
    code, out, _ = invoke(
        capsys, "eval", "-T", "4", "--format", "json", "1/(1-eps)"
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["terms"]) == 4
    assert payload["precision"] == 4


def test_eval_precision_below_two_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "-T", "1", "1"])
    assert info.value.code == 2


def test_eval_bindings_chain_left_to_right(capsys):
    code, out, _ = invoke(
        capsys, "eval", "-b", "a=2", "-b", "b=a+1", "b^2"
    )
    assert code == 0
    assert out.splitlines()[0] == "9 (appreciable)"


def test_eval_binding_may_use_units(capsys):
    code, out, _ = invoke(capsys, "eval", "-b", "x=3+eps", "st(x)")
    assert code == 0
    assert out.splitlines()[0] == "3 (appreciable)"


def test_eval_forward_binding_reference_fails(capsys):
    code, out, err = invoke(capsys, "eval", "-b", "a=b+1", "-b", "b=2", "a")
    assert code == 3
    assert err.startswith("error:")


@pytest.mark.parametrize(
    "binding", ["noequals", "2x=3", "H=2", "eps=1", "st=5"]
)
def test_eval_rejects_bad_bindings(capsys, binding):
    code, _, err = invoke(capsys, "eval", "-b", binding, "1")
    assert code == 2
    assert err.startswith("error:")


def test_eval_parse_error_exits_two(capsys):
    code, _, err = invoke(capsys, "eval", "1 +")
    assert code == 2
    assert "position" in err


def test_eval_division_by_zero_exits_three(capsys):
    code, _, err = invoke(capsys, "eval", "1/(eps - eps)")
    assert code == 3
    assert err.startswith("error:")


def test_eval_text_and_json_agree(capsys):
    from lcfield import LCNumber

    code, text_out, _ = invoke(capsys, "eval", "1/(2 + eps)")
    code2, json_out, _ = invoke(
        capsys, "eval", "--format", "json", "1/(2 + eps)"
    )
    assert code == code2 == 0
    series = LCNumber.from_json(json.loads(json_out))
    assert text_out.splitlines()[0] == f"{series.render()} (appreciable)"


# -- diff ----------------------------------------------------------------


def test_diff_text(capsys):
    code, out, err = invoke(capsys, "diff", "x^2", "x", "3")
    assert code == 0
    assert out == "quotient: 6 + eps\nshadow: 6\nsuperfluous: eps\n"
    assert err == ""


def test_diff_rational_point(capsys):
    code, out, _ = invoke(capsys, "diff", "x^2", "x", "5/2")
    assert "shadow: 5" in out.splitlines()


def test_diff_json(capsys):
    code, out, _ = invoke(
        capsys, "diff", "--format", "json", "x^3", "x", "2"
    )
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"quotient", "shadow", "superfluous"}
    jsonschema.validate(payload["quotient"], LC_NUMBER_SCHEMA)
    jsonschema.validate(payload["superfluous"], LC_NUMBER_SCHEMA)
    assert payload["shadow"] == "12"


def test_diff_with_bound_environment(capsys):
    code, out, _ = invoke(
        capsys, "diff", "-b", "y=2", "y*x^2", "x", "3"
    )
    assert code == 0
    assert "shadow: 12" in out.splitlines()


def test_diff_invalid_point_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["diff", "x^2", "x", "abc"])
    assert info.value.code == 2


def test_diff_infinite_quotient_exits_three(capsys):
    code, _, err = invoke(capsys, "diff", "sqrt(x)", "x", "0")
    assert code == 3
    assert "infinite" in err


# -- gallery -------------------------------------------------------------


@pytest.mark.parametrize(
    "example",
    [
        "parallel_lines",
        "infinitesimal_equality",
        "ellipse_parabola",
        "product_rule",
    ],
)
def test_gallery_text_passes(capsys, example):
    code, out, err = invoke(capsys, "gallery", example)
    assert code == 0
    assert out.startswith(f"example: {example}")
    assert out.rstrip().endswith("PASS")
    assert err == ""


def test_gallery_json_matches_schema(capsys):
    code, out, _ = invoke(
        capsys, "gallery", "--format", "json", "ellipse_parabola"
    )
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, GALLERY_SCHEMA)
    assert payload["example"] == "ellipse_parabola"
    assert payload["pass"] is True


def test_gallery_unknown_id_is_rejected_by_the_parser(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gallery", "banana"])
    assert info.value.code == 2


def test_gallery_csv_writes_rows(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    code, out, _ = invoke(
        capsys, "gallery", "ellipse_parabola", "--csv", str(path)
    )
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "x0,y0,st_of_lhs"
    assert len(lines) == 8


def test_gallery_csv_limited_to_the_conic_example(capsys, tmp_path):
    code, _, err = invoke(
        capsys,
        "gallery",
        "parallel_lines",
        "--csv",
        str(tmp_path / "rows.csv"),
    )
    assert code == 2
    assert "--csv" in err


def test_gallery_runs_at_low_precision(capsys):
    code, out, _ = invoke(capsys, "gallery", "-T", "4", "ellipse_parabola")
    assert code == 0
    assert out.rstrip().endswith("PASS")


# -- transfer ------------------------------------------------------------


def corpus(tmp_path, text):
    path = tmp_path / "corpus.txt"
    path.write_text(text)
    return str(path)


def test_transfer_identities_pass(capsys, tmp_path):
    path = corpus(
        tmp_path,
        "# binomial\n\nx^2 - y^2 == (x - y)*(x + y)\n"
        "H*(1/H) == 1  # trailing note\n",
    )
    code, out, err = invoke(capsys, "transfer", path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "[PASS] line 3: x^2 - y^2 == (x - y)*(x + y)"
    assert lines[1] == "[PASS] line 4: H*(1/H) == 1"
    assert lines[-1] == "checked 2: 2 hold, 0 fail"
    assert err == ""


def test_transfer_failure_prints_counterexample_and_exits_four(
    capsys, tmp_path
):
    path = corpus(tmp_path, "(x + 1)^2 == x^2 + 1\n")
    code, out, _ = invoke(capsys, "transfer", path)
    assert code == 4
    lines = out.splitlines()
    assert lines[0].startswith("[FAIL] line 1:")
    assert lines[1].lstrip().startswith("counterexample at x = ")
    assert lines[-1] == "checked 1: 0 hold, 1 fail"


def test_transfer_zero_variable_counterexample(capsys, tmp_path):
    path = corpus(tmp_path, "1 == 2\n")
    code, out, _ = invoke(capsys, "transfer", path)
    assert code == 4
    assert "counterexample at (no variables): 1 != 2" in out


def test_transfer_reports_every_parse_error(capsys, tmp_path):
    path = corpus(tmp_path, "x + == 1\n1 == 1\ny ^ == 2\n")
    code, out, err = invoke(capsys, "transfer", path)
    assert code == 2
    assert "line 1:" in err
    assert "line 3:" in err
    assert out == ""


def test_transfer_missing_file_exits_two(capsys):
    code, _, err = invoke(capsys, "transfer", "/no/such/corpus.txt")
    assert code == 2
    assert err != ""


def test_transfer_malformed_line_exits_two(capsys, tmp_path):
    path = corpus(tmp_path, "a == b == c\n")
    code, _, err = invoke(capsys, "transfer", path)
    assert code == 2
    assert "exactly one '=='" in err


def test_transfer_json_shape_and_seed(capsys, tmp_path):
    path = corpus(tmp_path, "x*(x + 1) == x^2 + x\n1 == 2\n")
    code, out, _ = invoke(
        capsys, "transfer", "--format", "json", "--seed", "7", path
    )
    assert code == 4
    payload = json.loads(out)
    assert [entry["line"] for entry in payload] == [1, 2]
    for entry in payload:
        assert set(entry) == {"line", "lhs", "rhs", "report"}
        jsonschema.validate(entry["report"], TRANSFER_SCHEMA)
        assert entry["report"]["seed"] == 7
    assert payload[0]["report"]["identity"] is True
    assert payload[1]["report"]["identity"] is False


def test_load_corpus_parses_lines_and_comments(tmp_path):
    path = corpus(
        tmp_path, "# header\n\n a == b \nc==d # note\n#only comment\n"
    )
    assert load_corpus(path) == [(3, "a", "b"), (4, "c", "d")]


def test_load_corpus_rejects_missing_separator(tmp_path):
    path = corpus(tmp_path, "a = b\n")
    with pytest.raises(UsageError):
        load_corpus(path)


# -- repl ----------------------------------------------------------------


def repl(monkeypatch, capsys, script):
    monkeypatch.setattr("sys.stdin", io.StringIO(script))
    code = main(["repl"])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_repl_binds_and_evaluates(monkeypatch, capsys):
    code, out, err = repl(monkeypatch, capsys, "x = 3\nx^2\nexit\n")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "3 (appreciable)"
    assert lines[2] == "9 (appreciable)"
    assert err == ""


def test_repl_recovers_from_errors(monkeypatch, capsys):
    code, out, err = repl(monkeypatch, capsys, "1 +\n2*3\nquit\n")
    assert code == 0
    assert "error:" in err
    assert out.splitlines()[0] == "6 (appreciable)"


def test_repl_skips_blanks_and_comments(monkeypatch, capsys):
    code, out, _ = repl(monkeypatch, capsys, "\n# hi\n1 + 1\n")
    assert code == 0
    assert out.splitlines()[0] == "2 (appreciable)"


def test_repl_cannot_rebind_reserved_words(monkeypatch, capsys):
    code, out, err = repl(monkeypatch, capsys, "H = 2\nH\nexit\n")
    assert code == 0
    assert "error:" in err
    assert out.splitlines()[0] == "eps^-1 (infinite)"


def test_repl_accepts_cli_bindings(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("a + 1\n"))
    code = main(["repl", "-b", "a=41"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "42 (appreciable)"


# -- dispatch ------------------------------------------------------------


def test_missing_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_run_raises_system_exit(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["lcfield", "eval", "1"])
    with pytest.raises(SystemExit) as info:
        run()
    assert info.value.code == 0


def test_config_defaults():
    config = CliConfig()
    assert config.precision == 16
    assert config.format == "text"
    assert config.seed == 0
    assert config.bindings == ()


def test_parse_bindings_returns_named_trees():
    pairs = parse_bindings(["a=1+eps", "b=a^2"])
    assert [name for name, _ in pairs] == ["a", "b"]
