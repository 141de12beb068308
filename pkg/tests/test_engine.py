"""Rename engine: resolution, preconditions, atomic application."""
from __future__ import annotations

import pytest

from corename.engine import (
    PreconditionViolated,
    RenameRefactoring,
    apply_rename,
    check_preconditions,
    resolve_identifier,
    update_comment,
)
from corename.minilang import build_model, layout_from_texts

import oracles


def model_of(texts: dict[str, str]):
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
        "}\n"
    ),
    "src/main/app/Teller.mini": (
        "// Teller drives a Ledger all day.\n"
        "public class Teller {\n"
        "    public field Ledger book;\n"
        "    public method int workday(int size) {\n"
        "        var int moved = book.deposit(size);\n"
        "        return moved;\n"
        "    }\n"
        "}\n"
    ),
}

HIERARCHY = {
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
        "    public method int doubled() {\n"
        "        return size() + size();\n"
        "    }\n"
        "}\n"
    ),
}


def rename(file, old, new, line, kind) -> RenameRefactoring:
    return RenameRefactoring(file, old, new, line, kind)


def test_rename_rejects_malformed_requests():
    with pytest.raises(ValueError):
        rename("a.mini", "x", "x", 1, "field")
    with pytest.raises(ValueError):
        rename("a.mini", "x", "9y", 1, "field")
    with pytest.raises(ValueError):
        rename("a.mini", "x", "y", 0, "field")
    with pytest.raises(ValueError):
        rename("a.mini", "x", "y", 1, "constant")


def test_resolve_prefers_the_nearest_line():
    model = model_of(LEDGER)
    matches = resolve_identifier(
        model, "balance", "src/main/app/Ledger.mini", 5, "field"
    )
    assert matches and matches[0].line == 3


def test_resolve_treats_line_and_kind_as_soft_hints():
    model = model_of(LEDGER)
    matches = resolve_identifier(
        model, "balance", "src/main/app/Ledger.mini", 3, "method"
    )
    assert matches and matches[0].kind == "field"
    far = resolve_identifier(model, "balance", "src/main/app/Ledger.mini", 99, "field")
    assert far and far[0].line == 3


def test_collision_with_a_sibling_field_is_refused():
    model = model_of(
        {
            "src/main/app/Pair.mini": (
                "public class Pair {\n"
                "    private field int first = 1;\n"
                "    private field int second = 2;\n"
                "}\n"
            )
        }
    )
    result = check_preconditions(
        model, rename("src/main/app/Pair.mini", "first", "second", 2, "field")
    )
    assert not result.ok
    assert any(v.code == "collision" for v in result.violations)


def test_collision_with_a_sibling_method_is_refused():
    model = model_of(HIERARCHY)
    result = check_preconditions(
        model, rename("src/main/app/Sub.mini", "size", "doubled", 2, "method")
    )
    assert not result.ok
    assert any(v.code == "collision" for v in result.violations)


def test_renaming_a_local_onto_a_parameter_is_refused():
    model = model_of(LEDGER)
    result = check_preconditions(
        model,
        rename("src/main/app/Teller.mini", "moved", "size", 5, "local_variable"),
    )
    assert not result.ok
    assert any(v.code in ("collision", "shadowing") for v in result.violations)


def test_unresolved_target_is_refused():
    model = model_of(LEDGER)
    result = check_preconditions(
        model, rename("src/main/app/Ledger.mini", "ghost", "spirit", 3, "field")
    )
    assert not result.ok
    assert any(v.code == "unresolved_target" for v in result.violations)


def test_apply_rewrites_every_reference_and_nothing_else():
    model = model_of(LEDGER)
    before = oracles.census(model)
    new_model, delta = apply_rename(
        model, rename("src/main/app/Ledger.mini", "balance", "pool", 3, "field")
    )
    after = oracles.census(new_model)
    assert "balance" not in after
    assert after["pool"] == before["balance"]
    assert {k: v for k, v in after.items() if k != "pool"} == {
        k: v for k, v in before.items() if k != "balance"
    }
    assert new_model.version == model.version + 1
    assert delta.edited_files == ("src/main/app/Ledger.mini",)


def test_apply_leaves_the_input_model_untouched():
    model = model_of(LEDGER)
    texts = {f.path: f.text for f in model.layout.files}
    apply_rename(
        model, rename("src/main/app/Ledger.mini", "balance", "pool", 3, "field")
    )
    assert {f.path: f.text for f in model.layout.files} == texts


def test_apply_renames_a_class_across_files():
    model = model_of(LEDGER)
    new_model, delta = apply_rename(
        model, rename("src/main/app/Ledger.mini", "Ledger", "Journal", 2, "class")
    )
    assert set(delta.edited_files) == set(LEDGER)
    teller = new_model.layout.file("src/main/app/Teller.mini").text
    assert "public field Journal book;" in teller
    assert oracles.census(new_model) == oracles.model_name_usage(new_model)


def test_apply_renames_the_whole_override_group():
    model = model_of(HIERARCHY)
    new_model, delta = apply_rename(
        model, rename("src/main/app/Base.mini", "size", "extent", 2, "method")
    )
    assert len(delta.group) == 2
    base = new_model.layout.file("src/main/app/Base.mini").text
    sub = new_model.layout.file("src/main/app/Sub.mini").text
    assert "method int extent()" in base
    assert "method int extent()" in sub
    assert "return extent() + extent();" in sub


def test_failed_apply_raises_and_changes_no_text():
    texts = {
        "src/main/app/Pair.mini": (
            "public class Pair {\n"
            "    private field int first = 1;\n"
            "    private field int second = 2;\n"
            "}\n"
        )
    }
    model = model_of(texts)
    with pytest.raises(PreconditionViolated):
        apply_rename(
            model, rename("src/main/app/Pair.mini", "first", "second", 2, "field")
        )
    assert {f.path: f.text for f in model.layout.files} == texts


def test_rename_then_inverse_rename_round_trips_byte_for_byte():
    model = model_of(LEDGER)
    texts = {f.path: f.text for f in model.layout.files}
    step, _ = apply_rename(
        model, rename("src/main/app/Ledger.mini", "Ledger", "Journal", 2, "class")
    )
    back, _ = apply_rename(
        step, rename("src/main/app/Ledger.mini", "Journal", "Ledger", 2, "class")
    )
    assert {f.path: f.text for f in back.layout.files} == texts


def test_apply_preserves_the_shape_of_the_model():
    """Renaming must not create or destroy structure, only respell one name."""
    model = model_of(LEDGER)
    new_model, _ = apply_rename(
        model, rename("src/main/app/Ledger.mini", "deposit", "put", 4, "method")
    )
    assert len(new_model.declarations) == len(model.declarations)
    assert len(new_model.references) == len(model.references)
    assert [s.kind for s in new_model.statements] == [s.kind for s in model.statements]
    assert len(new_model.calls) == len(model.calls)


def test_comment_update_replaces_whole_words_only():
    model = model_of(
        {
            "src/main/app/Note.mini": (
                "// The cache wins; cachePrefix stays.\n"
                "public class Note {\n"
                "    private field int cache = 1;\n"
                "}\n"
            )
        }
    )
    new_model, edits = update_comment(model, "src/main/app/Note.mini", "cache", "pool")
    assert [e.line for e in edits] == [1]
    line = new_model.layout.file("src/main/app/Note.mini").text.splitlines()[0]
    assert line == "// The pool wins; cachePrefix stays."


def test_comment_update_never_touches_code():
    model = model_of(LEDGER)
    new_model, edits = update_comment(
        model, "src/main/app/Teller.mini", "Ledger", "Journal"
    )
    assert [e.line for e in edits] == [1]
    text = new_model.layout.file("src/main/app/Teller.mini").text
    assert "public field Ledger book;" in text
    assert "// Teller drives a Journal all day." in text


def test_comment_update_without_a_hit_returns_no_edits():
    model = model_of(LEDGER)
    same_model, edits = update_comment(
        model, "src/main/app/Ledger.mini", "moved", "shifted"
    )
    assert edits == []
