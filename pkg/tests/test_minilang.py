"""Lexer, binder, and slicing behavior of the miniature language."""
from __future__ import annotations

import random

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from corename.minilang import (
    CodeModel,
    MiniSyntaxError,
    ResolutionError,
    build_model,
    layout_from_texts,
    slice_decl,
    tokenize,
)
from corename.minilang.lexer import KEYWORDS, code_and_comment_regions
from corename.projgen import generate_project

import oracles


def model_of(texts: dict[str, str]) -> CodeModel:
    return build_model(layout_from_texts(texts))


LEDGER = {
    "src/main/app/Ledger.mini": (
        "// Ledger holds one running balance.\n"
        "public class Ledger {\n"
        "    private field int balance = 0;\n"
        "    public method int deposit(int amount) {\n"
        "        balance = balance + amount;\n"
        "        return balance;\n"
        "    }\n"
        "    public method int addTwice(int amount) {\n"
        "        deposit(amount);\n"
        "        return deposit(amount);\n"
        "    }\n"
        "}\n"
    ),
    "src/main/app/Teller.mini": (
        "// Teller drives a Ledger.\n"
        "public class Teller {\n"
        "    public field Ledger book;\n"
        "    public method int workday(int size) {\n"
        "        var int moved = book.deposit(size);\n"
        "        while (moved < 10) {\n"
        "            moved = moved + 1;\n"
        "        }\n"
        "        return moved;\n"
        "    }\n"
        "}\n"
    ),
}


def decl_named(model: CodeModel, name: str, kind: str | None = None):
    found = [
        d
        for d in model.declarations
        if d.name == name and (kind is None or d.kind == kind)
    ]
    assert found, f"no declaration named {name}"
    return found[0]


def test_models_are_pure_functions_of_the_text():
    a = model_of(LEDGER)
    b = model_of(LEDGER)
    assert a.declarations == b.declarations
    assert a.references == b.references
    assert a.statements == b.statements
    assert a.defuse == b.defuse
    assert a.version == b.version


def test_layout_preserves_text_byte_for_byte():
    model = model_of(LEDGER)
    for path, text in LEDGER.items():
        assert model.layout.file(path).text == text


def test_keywords_are_never_identifiers():
    tokens, _ = tokenize("src/main/x/A.mini", LEDGER["src/main/app/Ledger.mini"])
    idents = {t.text for t in tokens if t.kind == "ident"}
    assert idents.isdisjoint(KEYWORDS)


def test_comments_are_kept_out_of_the_code_region():
    text = LEDGER["src/main/app/Ledger.mini"]
    _, comments = tokenize("src/main/x/A.mini", text)
    assert "//" not in oracles.strip_noncode(text)
    assert len(comments) == 1
    assert comments[0].line == 1
    code_regions, comment_regions = code_and_comment_regions(text, comments)
    covered = sorted(code_regions + comment_regions)
    assert all(a[1] == b[0] for a, b in zip(covered, covered[1:]))
    assert covered[0][0] == 0 and covered[-1][1] == len(text)


def test_string_literals_hide_identifier_lookalikes():
    model = model_of(
        {
            "src/main/app/Sign.mini": (
                'public class Sign {\n'
                '    private field string label = "balance deposit";\n'
                "}\n"
            )
        }
    )
    assert {d.name for d in model.declarations} == {"Sign", "label"}
    assert model.references == ()


def test_every_identifier_token_is_a_declaration_or_a_reference():
    model = model_of(LEDGER)
    assert oracles.census(model) == oracles.model_name_usage(model)


def test_census_identity_holds_on_the_bundled_projects(
    decoy_model, swallow_model, flink_model
):
    for model in (decoy_model, swallow_model, flink_model):
        assert oracles.census(model) == oracles.model_name_usage(model)


def test_field_reads_and_writes_land_in_defuse():
    model = model_of(LEDGER)
    balance = decl_named(model, "balance")
    use = model.defuse[balance.id]
    write_lines = {line for _, line in use.writes}
    read_lines = {line for _, line in use.reads}
    assert 3 in write_lines  # the initializer
    assert 5 in write_lines
    assert 5 in read_lines
    assert 6 in read_lines


def test_calls_connect_caller_and_callee():
    model = model_of(LEDGER)
    deposit = decl_named(model, "deposit")
    workday = decl_named(model, "workday")
    assert (workday.id, deposit.id) in model.calls


def test_class_references_include_field_types_and_new():
    model = model_of(LEDGER)
    ledger = decl_named(model, "Ledger", "class")
    ref_lines = {r.line for r in model.references if r.target == ledger.id}
    assert 3 in ref_lines  # "public field Ledger book;"


def test_unknown_name_raises_resolution_error():
    with pytest.raises(ResolutionError):
        model_of(
            {
                "src/main/app/Bad.mini": (
                    "public class Bad {\n"
                    "    public method int go() {\n"
                    "        return missing;\n"
                    "    }\n"
                    "}\n"
                )
            }
        )


def test_duplicate_class_name_raises_resolution_error():
    with pytest.raises(ResolutionError):
        model_of(
            {
                "src/main/a/Twin.mini": "public class Twin {}\n",
                "src/main/b/Twin.mini": "public class Twin {}\n",
            }
        )


def test_bad_syntax_raises_with_location():
    with pytest.raises(MiniSyntaxError):
        model_of({"src/main/app/Oops.mini": "public class {\n"})


def test_methods_with_one_signature_share_an_override_group():
    model = model_of(
        {
            "src/main/app/Base.mini": (
                "public class Base {\n"
                "    public method int size() {\n"
                "        return 1;\n"
                "    }\n"
                "}\n"
            ),
            "src/main/app/Sub.mini": (
                "public class Sub extends Base {\n"
                "    public method int size() {\n"
                "        return 2;\n"
                "    }\n"
                "}\n"
            ),
        }
    )
    base = decl_named(model, "size", "method")
    group = model.override_group(base.id)
    assert len(group) == 2
    files = {model.decl(d).file for d in group}
    assert files == {"src/main/app/Base.mini", "src/main/app/Sub.mini"}


def test_slices_match_the_reachability_oracle_on_the_bundled_projects(
    decoy_model, swallow_model, flink_model
):
    for model in (decoy_model, swallow_model, flink_model):
        for decl in model.declarations:
            for direction in ("forward", "backward"):
                assert slice_decl(model, decl, direction) == oracles.brute_slice(
                    model, decl, direction
                ), (decl.name, direction)


def test_slice_includes_its_own_declaring_statement():
    model = model_of(LEDGER)
    balance = decl_named(model, "balance")
    assert ("src/main/app/Ledger.mini", 3) in slice_decl(model, balance, "forward")
    assert ("src/main/app/Ledger.mini", 3) in slice_decl(model, balance, "backward")


def test_forward_slice_of_a_field_reaches_its_readers():
    model = model_of(LEDGER)
    balance = decl_named(model, "balance")
    locations = slice_decl(model, balance, "forward")
    # deposit reads balance, every statement of deposit affects its call
    # sites, so the slice crosses into Teller.workday
    assert ("src/main/app/Teller.mini", 5) in locations


def test_backward_slice_of_a_parameter_reaches_call_arguments():
    model = model_of(LEDGER)
    amount = [
        d
        for d in model.declarations
        if d.name == "amount" and d.kind == "parameter" and d.line == 4
    ][0]
    assert ("src/main/app/Teller.mini", 5) in slice_decl(model, amount, "backward")


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_generated_projects_parse_and_satisfy_the_census(seed):
    project = generate_project(random.Random(seed))
    model = build_model(layout_from_texts(project.texts))
    assert model.declarations
    assert oracles.census(model) == oracles.model_name_usage(model)


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_generated_projects_reparse_identically(seed):
    project = generate_project(random.Random(seed))
    a = build_model(layout_from_texts(project.texts))
    b = build_model(layout_from_texts(project.texts))
    assert a.declarations == b.declarations
    assert a.references == b.references
