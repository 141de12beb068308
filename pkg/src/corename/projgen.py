"""Random MiniLang project generation.

Produces projects that always bind cleanly, with a planted name family (two
adjacent tokens, e.g. join+hints) spread across classes, members, locals,
and comments. The family gives every generated project a meaningful seed
rename, which makes the generator the workhorse for randomized session
safety tests and for sizing performance runs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import RenameRefactoring, check_preconditions
from .minilang import CodeModel, build_model, layout_from_texts
from .naming import apply_tokens

FAMILIES = (
    (("join", "hints"), ("query", "hints")),
    (("rescale", "manager"), ("state", "transition", "manager")),
    (("checkpoint", "barrier"), ("sync", "barrier")),
    (("session", "window"), ("scan", "window")),
)

NEUTRAL_TOKENS = (
    "alpha", "batch", "count", "delta", "entry", "flag", "gear", "index",
    "label", "merge", "omega", "pivot", "quota", "ratio", "slot", "total",
)

NOUNS = ("Resolver", "Planner", "Router", "Keeper", "Tracker", "Mapper")

BASE_TYPES = ("int", "string", "bool")


def _camel(tokens: list[str]) -> str:
    head, *rest = tokens
    return head + "".join(t[0].upper() + t[1:] for t in rest)


def _pascal(tokens: list[str]) -> str:
    return "".join(t[0].upper() + t[1:] for t in tokens)


@dataclass(frozen=True)
class GeneratedProject:
    texts: dict[str, str]
    seed: RenameRefactoring
    family_old: tuple[str, ...]
    family_new: tuple[str, ...]


@dataclass
class _Method:
    visibility: str
    ret: str
    name: str
    params: list[tuple[str, str]]  # (type, name)
    body: list[str]

    def arity(self) -> int:
        return len(self.params)


@dataclass
class _Class:
    package: str
    visibility: str
    name: str
    superclass: str | None
    fields: list[tuple[str, str, str, str | None]]  # vis, type, name, init
    methods: list[_Method]
    comment: str


class _Generator:
    def __init__(self, rng: random.Random, family, density: float):
        self.rng = rng
        self.family_old, self.family_new = family
        self.density = density
        self.classes: list[_Class] = []
        self.by_name: dict[str, _Class] = {}
        self.counter = 0
        self.neutral = [t for t in NEUTRAL_TOKENS if t not in self.family_old]
        self.primed = False

    def unique(self) -> int:
        self.counter += 1
        return self.counter

    def family_bearing(self) -> bool:
        # the very first name always bears the family, so a seed exists at
        # any density; everything after that is a coin flip
        if not self.primed:
            self.primed = True
            return True
        return self.rng.random() < self.density

    def member_name(self, extra: str) -> str:
        n = self.unique()
        if self.family_bearing():
            return _camel(list(self.family_old) + [extra + str(n)])
        tokens = self.rng.sample(self.neutral, 2)
        return _camel(tokens + [extra + str(n)])

    def class_name(self) -> str:
        n = self.unique()
        noun = self.rng.choice(NOUNS)
        if self.family_bearing():
            return _pascal(list(self.family_old)) + noun + str(n)
        return _pascal(self.rng.sample(self.neutral, 2)) + noun + str(n)

    # ---- expressions -------------------------------------------------

    def literal(self, type_name: str) -> str:
        if type_name == "int":
            return str(self.rng.randrange(0, 100))
        if type_name == "bool":
            return self.rng.choice(("true", "false"))
        return '"' + self.rng.choice(self.neutral) + '"'

    def expr(self, type_name: str, env: dict[str, str], cls: _Class, depth: int) -> str:
        rng = self.rng
        options = ["literal"]
        vars_of_type = [n for n, t in env.items() if t == type_name]
        if vars_of_type:
            options += ["var", "var"]
        fields_of_type = [f[2] for f in cls.fields if f[1] == type_name]
        if fields_of_type:
            options.append("field")
        if depth > 0 and type_name in ("int", "string"):
            options.append("additive")
        if depth > 0 and type_name == "bool":
            options.append("compare")
        own = [m for m in cls.methods if m.ret == type_name and m.arity() <= 2]
        if depth > 0 and own:
            options.append("own_call")
        choice = rng.choice(options)
        if choice == "var":
            return rng.choice(sorted(vars_of_type))
        if choice == "field":
            return rng.choice(sorted(fields_of_type))
        if choice == "additive":
            left = self.expr(type_name, env, cls, 0)
            right = self.expr(type_name, env, cls, 0)
            return f"{left} + {right}"
        if choice == "compare":
            left = self.expr("int", env, cls, 0)
            right = self.expr("int", env, cls, 0)
            return f"{left} {rng.choice(('<', '>', '==', '!='))} {right}"
        if choice == "own_call":
            m = rng.choice(own)
            args = ", ".join(self.literal(t) for t, _ in m.params)
            return f"{m.name}({args})"
        return self.literal(type_name)

    # ---- statements ----------------------------------------------------

    def visible_classes(self, package: str) -> list[str]:
        return sorted(
            c.name
            for c in self.classes
            if c.visibility == "public" or c.package == package
        )

    def body(self, cls: _Class, method: _Method) -> list[str]:
        rng = self.rng
        env: dict[str, str] = {name: t for t, name in method.params}
        lines: list[str] = []
        for _ in range(rng.randrange(2, 6)):
            kind = rng.choice(("local", "local", "assign", "call", "if", "while"))
            if kind == "local":
                name = self.member_name("v")
                if name in env:
                    continue
                visible = self.visible_classes(cls.package)
                if visible and rng.random() < 0.2:
                    t = rng.choice(visible)
                    lines.append(f"        var {t} {name} = new {t}();")
                else:
                    t = rng.choice(BASE_TYPES)
                    lines.append(f"        var {t} {name} = {self.expr(t, env, cls, 1)};")
                env[name] = t
            elif kind == "assign":
                targets = sorted(n for n, t in env.items() if t in BASE_TYPES) + [
                    f[2] for f in cls.fields if f[1] in BASE_TYPES
                ]
                if not targets:
                    continue
                target = rng.choice(targets)
                t = env.get(target) or next(
                    f[1] for f in cls.fields if f[2] == target
                )
                lines.append(f"        {target} = {self.expr(t, env, cls, 1)};")
            elif kind == "call":
                call = self.call_stmt(cls, env)
                if call:
                    lines.append(f"        {call}")
            elif kind == "if":
                inner_t = rng.choice(BASE_TYPES)
                inner = self.member_name("v")
                if inner in env:
                    continue
                guard = self.expr("bool", env, cls, 1)
                lines.append(f"        if ({guard}) {{")
                lines.append(
                    f"            var {inner_t} {inner} = {self.expr(inner_t, env, cls, 0)};"
                )
                target = inner
                lines.append(f"            {target} = {self.expr(inner_t, env, cls, 0)};")
                lines.append("        }")
            else:  # while
                counter = self.member_name("v")
                if counter in env:
                    continue
                lines.append(f"        var int {counter} = 0;")
                env[counter] = "int"
                lines.append(f"        while ({counter} < 3) {{")
                lines.append(f"            {counter} = {counter} + 1;")
                lines.append("        }")
        lines.append(f"        return {self.expr(method.ret, env, cls, 1)};")
        return lines

    def call_stmt(self, cls: _Class, env: dict[str, str]) -> str | None:
        rng = self.rng
        receivers = [
            (name, t) for _vis, t, name, _init in cls.fields if t not in BASE_TYPES
        ] + sorted((name, t) for name, t in env.items() if t not in BASE_TYPES)
        own = [m for m in cls.methods if m.arity() <= 2]
        candidates: list[str] = []
        if own:
            m = rng.choice(own)
            args = ", ".join(self.literal(t) for t, _ in m.params)
            candidates.append(f"{m.name}({args});")
        for name, type_name in receivers:
            target = self.by_name.get(type_name)
            if target is None:
                continue
            public = [m for m in target.methods if m.visibility == "public"]
            if public:
                m = rng.choice(public)
                args = ", ".join(self.literal(t) for t, _ in m.params)
                candidates.append(f"{name}.{m.name}({args});")
        if not candidates:
            return None
        return rng.choice(candidates)

    # ---- classes ---------------------------------------------------------

    def make_class(self, package: str, test_of: _Class | None = None) -> _Class:
        rng = self.rng
        if test_of is not None:
            name = test_of.name + "Test"
            visibility = "public"
        else:
            name = self.class_name()
            visibility = "public" if rng.random() < 0.8 else "private"
        comment_token = (
            _camel(list(self.family_old) + ["flow"])
            if self.family_bearing()
            else rng.choice(self.neutral)
        )
        cls = _Class(
            package=package,
            visibility=visibility,
            name=name,
            superclass=None,
            fields=[],
            methods=[],
            comment=f"// {name} keeps {comment_token} bookkeeping.",
        )
        same_package = [
            c for c in self.classes
            if c.package == package and c.visibility == "public" and c.superclass is None
        ]
        if test_of is None and same_package and rng.random() < 0.2:
            cls.superclass = rng.choice(same_package).name

        field_types: list[str] = [rng.choice(BASE_TYPES) for _ in range(rng.randrange(1, 3))]
        visible = [
            c.name
            for c in self.classes
            if c.visibility == "public" or c.package == package
        ]
        if test_of is not None:
            field_types.append(test_of.name)
        elif visible and rng.random() < 0.6:
            field_types.append(rng.choice(sorted(visible)))
        for t in field_types:
            field_vis = rng.choice(("public", "private"))
            fname = self.member_name("f")
            init = self.literal(t) if t in BASE_TYPES else None
            cls.fields.append((field_vis, t, fname, init))

        signatures = []
        for _ in range(rng.randrange(2, 5)):
            ret = rng.choice(BASE_TYPES)
            mvis = "public" if rng.random() < 0.7 else "private"
            mname = self.member_name("m")
            params = []
            for _p in range(rng.randrange(0, 3)):
                params.append((rng.choice(BASE_TYPES), self.member_name("p")))
            signatures.append(_Method(mvis, ret, mname, params, body=None))
        cls.methods = signatures
        for method in cls.methods:
            method.body = self.body(cls, method)
        self.classes.append(cls)
        self.by_name[cls.name] = cls
        return cls

    def render(self, cls: _Class) -> str:
        lines = [cls.comment]
        head = f"{cls.visibility} class {cls.name}"
        if cls.superclass:
            head += f" extends {cls.superclass}"
        lines.append(head + " {")
        for vis, t, name, init in cls.fields:
            if init is None:
                lines.append(f"    {vis} field {t} {name};")
            else:
                lines.append(f"    {vis} field {t} {name} = {init};")
        for m in cls.methods:
            params = ", ".join(f"{t} {n}" for t, n in m.params)
            lines.append(f"    {m.visibility} method {m.ret} {m.name}({params}) {{")
            lines.extend(m.body)
            lines.append("    }")
        lines.append("}")
        return "\n".join(lines) + "\n"


def generate_project(
    rng: random.Random,
    packages: int = 2,
    classes_per_package: int = 3,
    density: float = 0.45,
    with_tests: bool = True,
    target_lines: int | None = None,
) -> GeneratedProject:
    family = FAMILIES[rng.randrange(len(FAMILIES))]
    gen = _Generator(rng, family, density)
    texts: dict[str, str] = {}

    def add(cls: _Class, source_dir: str):
        path = f"{source_dir}/{cls.package}/{cls.name}.mini"
        texts[path] = gen.render(cls)

    package_names = [f"app/pkg{i}" for i in range(packages)]
    done = False
    while not done:
        for package in package_names:
            for _ in range(classes_per_package):
                cls = gen.make_class(package)
                add(cls, "src/main")
                if with_tests and cls.visibility == "public" and rng.random() < 0.4:
                    add(gen.make_class(package, test_of=cls), "src/test")
        if target_lines is None:
            done = True
        else:
            total = sum(text.count("\n") for text in texts.values())
            done = total >= target_lines

    model = build_model(layout_from_texts(texts))
    seed = _pick_seed(model, gen.family_old, gen.family_new)
    return GeneratedProject(
        texts=texts,
        seed=seed,
        family_old=gen.family_old,
        family_new=gen.family_new,
    )


def _pick_seed(
    model: CodeModel, family_old: tuple[str, ...], family_new: tuple[str, ...]
) -> RenameRefactoring:
    """First renameable family-bearing declaration, classes preferred."""
    ranked = sorted(
        model.declarations,
        key=lambda d: (0 if d.kind == "class" else 1, d.file, d.line, d.span[0]),
    )
    for decl in ranked:
        new_name = apply_tokens(family_old, family_new, decl.name)
        if new_name is None or new_name == decl.name:
            continue
        rename = RenameRefactoring(decl.file, decl.name, new_name, decl.line, decl.kind)
        if check_preconditions(model, rename).ok:
            return rename
    raise RuntimeError("generated project has no renameable family declaration")
