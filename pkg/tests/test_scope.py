"""Declared scopes: patterns, guards, refinement, and the admitted domain."""
from __future__ import annotations

import hypothesis.strategies as st
import pytest
from hypothesis import given

from corename.engine import RenameRefactoring
from corename.minilang import Declaration
from corename.scope import (
    ATOM_KINDS,
    DeclaredScope,
    Guard,
    GuardAtom,
    NamePattern,
    infer_from_seed,
    refine,
    scope_domain,
)

import oracles


def mkdecl(
    name: str,
    kind: str = "field",
    file: str = "src/main/app/A.mini",
    line: int = 3,
    visibility: str | None = "private",
) -> Declaration:
    return Declaration(
        id=f"{kind}:{file}:{line}:{name}",
        kind=kind,
        name=name,
        file=file,
        line=line,
        span=(0, len(name)),
        owner=None,
        visibility=visibility,
        type_name=None,
        arity=None,
    )


CACHE_PATTERN = NamePattern(("cache",), ("buffer",))


def test_pattern_rewrites_and_reports_membership():
    assert CACHE_PATTERN.rewrite("cacheTimeout") == "bufferTimeout"
    assert CACHE_PATTERN.matches("refreshCache")
    assert not CACHE_PATTERN.matches("refresh")


def test_infer_from_seed_starts_at_revision_zero():
    seed = RenameRefactoring("src/main/app/A.mini", "Cache", "Buffer", 2, "class")
    scope = infer_from_seed(seed)
    assert scope.revision == 0
    assert scope.guards == ()
    assert scope.pattern == CACHE_PATTERN


def test_seed_rewrite_survives_any_number_of_refinements():
    seed = RenameRefactoring("src/main/app/A.mini", "Cache", "Buffer", 2, "class")
    scope = infer_from_seed(seed)
    for i in range(5):
        scope = refine(scope, [mkdecl(f"cacheSpare{i}", kind="method")], [])
        assert scope.pattern.rewrite(seed.old_name) == seed.new_name
    assert scope.revision == 5


def test_guard_atom_kinds_are_closed():
    assert ATOM_KINDS == (
        "exclude_kind",
        "exclude_visibility",
        "exclude_name_regex",
        "restrict_dir",
    )
    with pytest.raises(ValueError):
        GuardAtom("exclude_everything", "x")


def test_guard_is_a_conjunction():
    guard = Guard(
        (GuardAtom("exclude_visibility", "public"), GuardAtom("exclude_kind", "method"))
    )
    assert guard.excludes(mkdecl("cacheGet", kind="method", visibility="public"))
    assert not guard.excludes(mkdecl("cacheGet", kind="method", visibility="private"))
    assert not guard.excludes(mkdecl("cacheGet", kind="field", visibility="public"))


def test_restrict_dir_excludes_files_outside_the_prefix():
    guard = Guard((GuardAtom("restrict_dir", "src/main/app"),))
    assert not guard.excludes(mkdecl("cacheA", file="src/main/app/core/A.mini"))
    assert guard.excludes(mkdecl("cacheB", file="src/test/app/core/B.mini"))
    # prefix means path components, not raw characters
    assert guard.excludes(mkdecl("cacheC", file="src/main/apps/C.mini"))


def test_name_regex_guard_matches_the_full_name():
    guard = Guard((GuardAtom("exclude_name_regex", "cacheHack"),))
    assert guard.excludes(mkdecl("cacheHack"))
    assert not guard.excludes(mkdecl("cacheHacks"))


def test_scope_admits_pattern_matches_not_carved_out():
    scope = DeclaredScope(CACHE_PATTERN).with_guard(
        Guard((GuardAtom("exclude_kind", "method"),))
    )
    assert scope.admits(mkdecl("cacheTimeout", kind="field"))
    assert not scope.admits(mkdecl("refreshCache", kind="method"))
    assert not scope.admits(mkdecl("unrelated", kind="field"))


def test_refine_requires_at_least_one_rejection():
    with pytest.raises(ValueError):
        refine(DeclaredScope(CACHE_PATTERN), [], [mkdecl("cacheKeep")])


def test_refine_appends_exactly_one_guard_and_bumps_the_revision():
    scope = DeclaredScope(CACHE_PATTERN)
    refined = refine(scope, [mkdecl("cacheHack")], [mkdecl("cacheTimeout")])
    assert refined.revision == 1
    assert len(refined.guards) == 1
    assert refined.pattern == scope.pattern


def test_refine_prefers_the_visibility_and_kind_conjunction():
    rejected = [mkdecl("getCacheStats", kind="method", visibility="public")]
    accepted = [
        mkdecl("cacheTimeout", kind="field", visibility="private"),
        mkdecl("refreshCache", kind="method", visibility="private"),
    ]
    refined = refine(DeclaredScope(CACHE_PATTERN), rejected, accepted)
    atoms = refined.guards[0].atoms
    assert {(a.kind, a.value) for a in atoms} == {
        ("exclude_visibility", "public"),
        ("exclude_kind", "method"),
    }


def test_refine_falls_back_to_exact_names_when_shape_cannot_split():
    # rejected and accepted share kind and visibility, so only the name works
    rejected = [mkdecl("cacheHack", line=4)]
    accepted = [mkdecl("cacheTimeout", line=3)]
    refined = refine(DeclaredScope(CACHE_PATTERN), rejected, accepted)
    atoms = refined.guards[0].atoms
    assert [a.kind for a in atoms] == ["exclude_name_regex"]
    assert atoms[0].value == "cacheHack"


def test_refine_excludes_all_rejected_and_keeps_all_accepted():
    rejected = [
        mkdecl("cacheHack", kind="method", visibility="public"),
        mkdecl("cacheProbe", kind="field", visibility="public"),
    ]
    accepted = [mkdecl("cacheTimeout", kind="field", visibility="private")]
    refined = refine(DeclaredScope(CACHE_PATTERN), rejected, accepted)
    guard = refined.guards[0]
    assert all(guard.excludes(d) for d in rejected)
    assert not any(guard.excludes(d) for d in accepted)


def test_refine_narrows_monotonically():
    """Every later revision admits a subset of every earlier one."""
    probe = [
        mkdecl(name, kind=kind, visibility=vis, file=file)
        for name in ("cacheA", "cacheB", "getCache")
        for kind in ("field", "method")
        for vis in ("public", "private")
        for file in ("src/main/app/A.mini", "src/test/app/B.mini")
    ]
    scope = DeclaredScope(CACHE_PATTERN)
    admitted = {d.id for d in probe if scope.admits(d)}
    for reject in ("cacheA", "cacheB"):
        scope = refine(scope, [mkdecl(reject, kind="method", visibility="public")], [])
        now = {d.id for d in probe if scope.admits(d)}
        assert now <= admitted
        admitted = now


def test_scope_domain_matches_the_oracle_on_the_bundled_projects(
    decoy_model, swallow_model, flink_model
):
    scopes = {
        "decoy": DeclaredScope(CACHE_PATTERN),
        "swallow": DeclaredScope(NamePattern(("e",), ("swallow",))),
        "flink": DeclaredScope(NamePattern(("join", "hints"), ("query", "hints"))),
    }
    models = {
        "decoy": decoy_model,
        "swallow": swallow_model,
        "flink": flink_model,
    }
    for key, scope in scopes.items():
        model = models[key]
        for variant in (
            scope,
            scope.with_guard(Guard((GuardAtom("exclude_kind", "method"),))),
            scope.with_guard(Guard((GuardAtom("exclude_visibility", "public"),))),
            scope.with_guard(Guard((GuardAtom("restrict_dir", "src/main"),))),
        ):
            domain = scope_domain(model, variant)
            assert domain == oracles.brute_scope_domain(model, variant.as_dict()), key


names = st.sampled_from(
    ["cacheSize", "cacheHack", "getCache", "cacheIndex", "warmCacheFast", "plain"]
)
kinds = st.sampled_from(["class", "method", "field", "parameter", "local_variable"])
vis = st.sampled_from(["public", "private", None])
files = st.sampled_from(
    ["src/main/app/A.mini", "src/main/app/sub/B.mini", "src/test/app/C.mini"]
)
decls = st.builds(
    lambda n, k, v, f, line: mkdecl(n, kind=k, visibility=v, file=f, line=line),
    names,
    kinds,
    vis,
    files,
    st.integers(1, 40),
)


@given(st.lists(decls, min_size=1, max_size=6), st.lists(decls, max_size=6))
def test_refine_contract_holds_for_arbitrary_splits(rejected, accepted):
    """Whenever no rejected name is also accepted, the new guard separates
    them perfectly and leaves the pattern alone."""
    rejected_names = {d.name for d in rejected}
    accepted = [d for d in accepted if d.name not in rejected_names]
    scope = DeclaredScope(CACHE_PATTERN)
    refined = refine(scope, rejected, accepted)
    assert refined.revision == 1
    assert refined.pattern == scope.pattern
    guard = refined.guards[-1]
    assert all(guard.excludes(d) for d in rejected)
    assert not any(guard.excludes(d) for d in accepted)


@given(st.lists(decls, min_size=1, max_size=6))
def test_rejected_declarations_never_come_back(rejected):
    scope = refine(DeclaredScope(CACHE_PATTERN), rejected, [])
    assert not any(scope.admits(d) for d in rejected)
