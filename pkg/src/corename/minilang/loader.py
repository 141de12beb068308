"""Loading MiniLang projects from disk or from in-memory file maps."""
from __future__ import annotations

import os

from .binder import build_model
from .model import CodeModel, ProjectLayout, SourceFile

DEFAULT_SOURCE_DIRS = ("src/main", "src/test")


def load_layout(
    root: str, source_dirs: tuple[str, ...] = DEFAULT_SOURCE_DIRS
) -> ProjectLayout:
    """Scan ``root`` for .mini files under the source dirs."""
    files: list[SourceFile] = []
    for source_dir in source_dirs:
        base = os.path.join(root, source_dir) if source_dir else root
        if not os.path.isdir(base):
            continue
        for dirpath, dirnames, filenames in os.walk(base):
            dirnames.sort()
            for filename in sorted(filenames):
                if not filename.endswith(".mini"):
                    continue
                full = os.path.join(dirpath, filename)
                rel = os.path.relpath(full, root).replace(os.sep, "/")
                with open(full, encoding="utf-8") as handle:
                    files.append(SourceFile(rel, handle.read()))
    files.sort(key=lambda f: f.path)
    return ProjectLayout(root, tuple(source_dirs), tuple(files))


def layout_from_texts(
    texts: dict[str, str],
    root: str = "<memory>",
    source_dirs: tuple[str, ...] = DEFAULT_SOURCE_DIRS,
) -> ProjectLayout:
    files = tuple(SourceFile(path, texts[path]) for path in sorted(texts))
    return ProjectLayout(root, tuple(source_dirs), files)


def parse_project(
    root: str, source_dirs: tuple[str, ...] = DEFAULT_SOURCE_DIRS
) -> CodeModel:
    """Parse and bind every .mini file under the project root.

    An empty or missing source tree yields a model with zero declarations.
    """
    return build_model(load_layout(root, source_dirs))
