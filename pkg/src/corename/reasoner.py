"""Reasoner roles: scope inference, candidate finding, guard refinement,
file filtering.

Two implementations share one interface. The deterministic reasoner is a
pure function of the model, file, and scope; it is the reference the rest of
the system is tested against. The external reasoner forwards each role to an
HTTP endpoint and falls back to the deterministic answer when the endpoint
misbehaves, so a flaky model can degrade quality but never correctness.

Whatever the source, proposals go through validate_proposals() before anyone
sees them: targets are re-resolved against the current model (correcting
line and kind drift), and proposals that do not name a safe, local, existing
declaration are dropped with a reason.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass

import requests

from .engine import (
    RenameRefactoring,
    check_preconditions,
    resolve_identifier,
)
from .minilang import CodeModel, Declaration
from .scope import DeclaredScope, Guard, GuardAtom, NamePattern, infer_from_seed, refine

URL_ENV = "CORENAME_REASONER_URL"
TOKEN_ENV = "CORENAME_REASONER_TOKEN"


@dataclass(frozen=True)
class RenameProposal:
    """Unvalidated reasoner output; line and kind are hints, not facts."""

    old_name: str
    new_name: str
    line: int | None = None
    kind: str | None = None


@dataclass(frozen=True)
class ValidatedCandidate:
    decl: Declaration
    rename: RenameRefactoring
    pattern_mismatch: bool


@dataclass(frozen=True)
class DroppedProposal:
    proposal: RenameProposal
    reason: str  # not_found | foreign_declaration | precondition_violation |
    #              invalid_name | duplicate


class DeterministicReasoner:
    """Reference reasoner: exactly the scope domain, file by file."""

    name = "deterministic"

    def __init__(self):
        self.degraded = False

    def infer_scope(self, model: CodeModel, seed: RenameRefactoring) -> DeclaredScope:
        return infer_from_seed(seed)

    def find_candidates(
        self, model: CodeModel, file: str, scope: DeclaredScope, shots
    ) -> list[RenameProposal]:
        # pure in the model and scope; the shots exist for the external twin
        proposals = []
        for decl in sorted(model.decls_in_file(file), key=lambda d: (d.line, d.span[0])):
            if not scope.admits(decl):
                continue
            new_name = scope.pattern.rewrite(decl.name)
            if new_name is None or new_name == decl.name:
                continue
            proposals.append(RenameProposal(decl.name, new_name, decl.line, decl.kind))
        return proposals

    def refine_guards(
        self,
        model: CodeModel,
        scope: DeclaredScope,
        rejected: list[Declaration],
        accepted: list[Declaration],
    ) -> DeclaredScope:
        return refine(scope, rejected, accepted)

    def filter_file(self, model: CodeModel, file: str, scope: DeclaredScope) -> bool:
        return any(scope.admits(d) for d in model.decls_in_file(file))


class ExternalReasoner:
    """HTTP adapter speaking newline-delimited JSON.

    One request per role call: a single JSON object line out, zero or more
    JSON object lines back. Two attempts per call, then the deterministic
    fallback answers and the reasoner marks itself degraded.
    """

    name = "external"

    def __init__(
        self,
        url: str | None = None,
        token: str | None = None,
        timeout: float = 10.0,
        session: requests.Session | None = None,
    ):
        self.url = url or os.environ.get(URL_ENV)
        if not self.url:
            raise ValueError(f"external reasoner needs a URL ({URL_ENV})")
        self.token = token if token is not None else os.environ.get(TOKEN_ENV)
        self.timeout = timeout
        self.degraded = False
        self.fallback = DeterministicReasoner()
        self._http = session or requests.Session()

    def _call(self, request: dict) -> list[dict] | None:
        body = json.dumps(request, sort_keys=True) + "\n"
        headers = {"Content-Type": "application/x-ndjson"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        for _ in range(2):  # one retry
            try:
                response = self._http.post(
                    self.url, data=body.encode("utf-8"), headers=headers,
                    timeout=self.timeout,
                )
                if response.status_code != 200:
                    continue
                lines = [
                    json.loads(line)
                    for line in response.text.splitlines()
                    if line.strip()
                ]
                if all(isinstance(line, dict) for line in lines):
                    return lines
            except (requests.RequestException, json.JSONDecodeError):
                continue
        self.degraded = True
        return None

    def infer_scope(self, model: CodeModel, seed: RenameRefactoring) -> DeclaredScope:
        lines = self._call({"role": "infer_scope", "seed": seed.as_dict()})
        if lines and "old_fragment" in lines[0] and "new_fragment" in lines[0]:
            raw = lines[0]
            try:
                pattern = NamePattern(
                    tuple(str(t) for t in raw["old_fragment"]),
                    tuple(str(t) for t in raw["new_fragment"]),
                )
                if pattern.rewrite(seed.old_name) == seed.new_name:
                    return DeclaredScope(pattern)
            except (TypeError, ValueError):
                pass
            self.degraded = True
        return self.fallback.infer_scope(model, seed)

    def find_candidates(
        self, model: CodeModel, file: str, scope: DeclaredScope, shots
    ) -> list[RenameProposal]:
        declarations = [
            {"name": d.name, "line": d.line, "kind": d.kind, "visibility": d.visibility}
            for d in model.decls_in_file(file)
        ]
        lines = self._call(
            {
                "role": "find_candidates",
                "file": file,
                "scope": scope.as_dict(),
                "shots": [s.as_dict() for s in shots],
                "declarations": declarations,
            }
        )
        if lines is None:
            return self.fallback.find_candidates(model, file, scope, shots)
        proposals = []
        for raw in lines:
            try:
                proposals.append(
                    RenameProposal(
                        str(raw["old_name"]),
                        str(raw["new_name"]),
                        int(raw["line"]) if raw.get("line") is not None else None,
                        raw.get("kind"),
                    )
                )
            except (KeyError, TypeError, ValueError):
                self.degraded = True
        return proposals

    def refine_guards(
        self,
        model: CodeModel,
        scope: DeclaredScope,
        rejected: list[Declaration],
        accepted: list[Declaration],
    ) -> DeclaredScope:
        def decl_row(d: Declaration) -> dict:
            return {
                "name": d.name,
                "file": d.file,
                "line": d.line,
                "kind": d.kind,
                "visibility": d.visibility,
            }

        lines = self._call(
            {
                "role": "refine_guards",
                "scope": scope.as_dict(),
                "rejected": [decl_row(d) for d in rejected],
                "accepted": [decl_row(d) for d in accepted],
            }
        )
        if lines and "atoms" in lines[0]:
            try:
                guard = Guard(
                    tuple(
                        GuardAtom(str(a["kind"]), str(a["value"]))
                        for a in lines[0]["atoms"]
                    )
                )
            except (KeyError, TypeError, ValueError):
                guard = None
            # an external guard must meet the same contract refine() enforces
            if (
                guard is not None
                and guard.atoms
                and all(guard.excludes(d) for d in rejected)
                and not any(guard.excludes(d) for d in accepted)
            ):
                return scope.with_guard(guard)
            self.degraded = True
        return self.fallback.refine_guards(model, scope, rejected, accepted)

    def filter_file(self, model: CodeModel, file: str, scope: DeclaredScope) -> bool:
        lines = self._call(
            {"role": "filter_file", "file": file, "scope": scope.as_dict()}
        )
        if lines and isinstance(lines[0].get("keep"), bool):
            return lines[0]["keep"]
        if lines is not None:
            self.degraded = True
        return self.fallback.filter_file(model, file, scope)


def validate_proposals(
    model: CodeModel,
    file: str,
    scope: DeclaredScope,
    proposals: list[RenameProposal],
) -> tuple[list[ValidatedCandidate], list[DroppedProposal]]:
    """Re-ground proposals in the model; keep only safe, local, real targets.

    Line and kind from the proposal are treated as hints: the nearest
    matching declaration wins and its true coordinates replace the hints.
    A pattern mismatch is not a drop reason; the human gets to see it.
    """
    valid: list[ValidatedCandidate] = []
    dropped: list[DroppedProposal] = []
    seen: set[str] = set()
    for proposal in proposals:
        matches = resolve_identifier(
            model, proposal.old_name, file, proposal.line, proposal.kind
        )
        if not matches:
            dropped.append(DroppedProposal(proposal, "not_found"))
            continue
        decl = matches[0]
        if decl.file != file:
            dropped.append(DroppedProposal(proposal, "foreign_declaration"))
            continue
        if decl.id in seen:
            dropped.append(DroppedProposal(proposal, "duplicate"))
            continue
        try:
            rename = RenameRefactoring(
                decl.file, decl.name, proposal.new_name, decl.line, decl.kind
            )
        except ValueError:
            dropped.append(DroppedProposal(proposal, "invalid_name"))
            continue
        if not check_preconditions(model, rename).ok:
            dropped.append(DroppedProposal(proposal, "precondition_violation"))
            continue
        seen.add(decl.id)
        mismatch = scope.pattern.rewrite(decl.name) != proposal.new_name
        valid.append(ValidatedCandidate(decl, rename, mismatch))
    return valid, dropped
