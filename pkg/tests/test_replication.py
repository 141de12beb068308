"""Replication: structural slicing search plus lexical keyword search."""
from __future__ import annotations

import itertools

from corename.engine import RenameRefactoring, apply_rename
from corename.minilang import build_model, layout_from_texts
from corename.naming import extract_fragments
from corename.reasoner import DeterministicReasoner
from corename.replication import discover, keyword_search, slice_files
from corename.scope import DeclaredScope, NamePattern

import oracles
from conftest import case_model, load_case


def model_of(texts: dict[str, str]):
    return build_model(layout_from_texts(texts))


MIRRORED = {
    "src/main/app/io/Channel.mini": (
        "// Moves events from the source to the writer.\n"
        "public class Channel {\n"
        "    public field Writer writer;\n"
        "    public method int pump(int raw) {\n"
        "        var int e = raw;\n"
        "        writer.handle(e);\n"
        "        return e;\n"
        "    }\n"
        "}\n"
    ),
    "src/main/app/io/Writer.mini": (
        "public class Writer {\n"
        "    public method int handle(int value) {\n"
        "        var int e = value;\n"
        "        return e;\n"
        "    }\n"
        "}\n"
    ),
    "src/main/app/util/Clock.mini": (
        "// Keeps time for everyone else.\n"
        "public class Clock {\n"
        "    public method int tick() {\n"
        "        return 1;\n"
        "    }\n"
        "}\n"
    ),
    "src/test/app/io/ChannelTest.mini": (
        "// Exercises the channel with a fake writer; e stays tiny here.\n"
        "public class ChannelTest {\n"
        "    public field Channel subject;\n"
        "    public method int checkPump() {\n"
        "        var int e = subject.pump(3);\n"
        "        return e;\n"
        "    }\n"
        "}\n"
    ),
}


def applied_on(model, renames):
    """Apply each rename in order; return the final model."""
    for rename in renames:
        model, _ = apply_rename(model, rename)
    return model


def fixture_cases():
    for name in ("decoy", "swallow_port", "flink_port"):
        case = load_case(name)
        yield name, case, case_model(case)


def test_slice_files_matches_the_oracle_after_each_gold_rename():
    for name, case, model in fixture_cases():
        renames = [
            RenameRefactoring(g.file, g.old_name, g.new_name, g.line, g.kind)
            for g in case.gold.entries
        ]
        current = model
        applied: list[RenameRefactoring] = []
        for rename in renames:
            current = applied_on(current, [rename])
            applied.append(rename)
            assert slice_files(current, applied) == oracles.brute_slice_files(
                current, applied
            ), (name, rename.old_name)


def test_slice_files_skips_renames_it_cannot_resolve():
    model = model_of(MIRRORED)
    ghost = RenameRefactoring(
        "src/main/app/io/Channel.mini", "gone", "missing", 4, "method"
    )
    assert slice_files(model, [ghost]) == set()


def test_keyword_search_matches_the_oracle_on_the_bundled_projects():
    for name, case, model in fixture_cases():
        decl_names = sorted({d.name for d in model.declarations})[:4]
        files = [f.path for f in model.layout.files]
        for k in (1, 2):
            for names in itertools.combinations(decl_names, k):
                for modified in ([files[0]], files[:2]):
                    got = keyword_search(model, list(names), modified)
                    want = oracles.brute_keyword_search(
                        model.layout, list(names), modified
                    )
                    assert got == want, (name, names, modified)


def test_keyword_search_needs_names_and_modified_files():
    model = model_of(MIRRORED)
    assert keyword_search(model, [], ["src/main/app/io/Channel.mini"]) == set()
    assert keyword_search(model, ["e"], []) == set()


def test_keyword_search_covers_the_test_mirror_of_a_modified_package():
    model = model_of(MIRRORED)
    hits = keyword_search(model, ["pump"], ["src/main/app/io/Channel.mini"])
    assert "src/test/app/io/ChannelTest.mini" in hits


def test_keyword_search_stays_inside_the_modified_packages():
    model = model_of(MIRRORED)
    hits = keyword_search(model, ["tick"], ["src/main/app/io/Channel.mini"])
    # Clock.mini declares tick but lives in an untouched package
    assert hits == set()


def test_keyword_comment_hits_are_word_bounded():
    model = model_of(MIRRORED)
    hits = keyword_search(model, ["e"], ["src/main/app/io/Channel.mini"])
    # the test twin mentions "e" as a word in its comment
    assert "src/test/app/io/ChannelTest.mini" in hits
    hits = keyword_search(model, ["stay"], ["src/main/app/io/Channel.mini"])
    # "stays" contains "stay" but is a different word
    assert hits == set()


def seeded_scope() -> DeclaredScope:
    return DeclaredScope(NamePattern(("e",), ("swallow",)))


def test_discover_orders_structural_before_semantic():
    model = model_of(MIRRORED)
    seed = RenameRefactoring(
        "src/main/app/io/Channel.mini", "e", "swallow", 5, "local_variable"
    )
    current = applied_on(model, [seed])
    result = discover(
        current,
        seeded_scope(),
        DeterministicReasoner(),
        visited={"src/main/app/io/Channel.mini"},
        modified_files=["src/main/app/io/Channel.mini"],
        applied=[seed],
        accepted_old_names=["e"],
        capacity=50,
    )
    assert list(result.enqueued) == list(result.structural) + [
        f for f in result.semantic if f in result.enqueued
    ]
    assert set(result.structural).isdisjoint(result.semantic)
    assert "src/main/app/io/Channel.mini" not in result.enqueued


def test_discover_respects_the_reasoner_veto():
    class VetoEverything(DeterministicReasoner):
        def filter_file(self, model, file, scope):
            return False

    model = model_of(MIRRORED)
    seed = RenameRefactoring(
        "src/main/app/io/Channel.mini", "e", "swallow", 5, "local_variable"
    )
    current = applied_on(model, [seed])
    result = discover(
        current,
        seeded_scope(),
        VetoEverything(),
        visited={"src/main/app/io/Channel.mini"},
        modified_files=["src/main/app/io/Channel.mini"],
        applied=[seed],
        accepted_old_names=["e"],
        capacity=50,
    )
    assert result.enqueued == ()
    assert result.fruitful is False


def test_discover_truncates_to_capacity():
    model = model_of(MIRRORED)
    seed = RenameRefactoring(
        "src/main/app/io/Channel.mini", "e", "swallow", 5, "local_variable"
    )
    current = applied_on(model, [seed])
    everything = discover(
        current,
        seeded_scope(),
        DeterministicReasoner(),
        visited={"src/main/app/io/Channel.mini"},
        modified_files=["src/main/app/io/Channel.mini"],
        applied=[seed],
        accepted_old_names=["e"],
        capacity=50,
    )
    assert len(everything.enqueued) >= 2
    capped = discover(
        current,
        seeded_scope(),
        DeterministicReasoner(),
        visited={"src/main/app/io/Channel.mini"},
        modified_files=["src/main/app/io/Channel.mini"],
        applied=[seed],
        accepted_old_names=["e"],
        capacity=1,
    )
    assert len(capped.enqueued) == 1
    assert capped.enqueued == everything.enqueued[:1]
    assert capped.fruitful is True


def test_discover_enqueues_only_from_its_two_searches():
    for name, case, model in fixture_cases():
        seed = case.seed
        current = applied_on(model, [seed])
        result = discover(
            current,
            DeclaredScope(NamePattern(*extract_fragments(seed.old_name, seed.new_name))),
            DeterministicReasoner(),
            visited={seed.file_path},
            modified_files=[seed.file_path],
            applied=[seed],
            accepted_old_names=[seed.old_name],
            capacity=50,
        )
        assert set(result.enqueued) <= set(result.structural) | set(result.semantic)
        assert result.fruitful == bool(result.enqueued)
