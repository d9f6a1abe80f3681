#!/usr/bin/env python3
"""Record the call edges a program actually performs.

Runs <root>/<entry> under a profile hook and prints the observed call graph
in the canonical JSON form used by callflow. Only frames whose code lives
under <root> are recorded. Function names follow the analyzer's naming:
nested definitions are joined with dots, lambdas are numbered <lambdaN> in
source order per file, comprehensions and class bodies are attributed to
the enclosing function or module.

usage: trace_calls.py ROOT [--entry main.py] [--output FILE]
"""

import argparse
import ast
import json
import os
import runpy
import sys


class Names(ast.NodeVisitor):
    """Maps (first line, code name) of every def/lambda/class in a file to
    its dotted path and kind."""

    def __init__(self, module):
        self.path = [module]
        self.table = {}
        self.functions = []
        self.lambda_numbers = {}

    def number_lambdas(self, tree):
        positions = sorted(
            (node.lineno, node.col_offset) for node in ast.walk(tree) if isinstance(node, ast.Lambda)
        )
        for index, pos in enumerate(positions, 1):
            self.lambda_numbers.setdefault(pos[0], index)

    def _first_line(self, node):
        lines = [node.lineno] + [d.lineno for d in getattr(node, "decorator_list", [])]
        return min(lines)

    def _enter(self, node, name, kind, code_name):
        dotted = ".".join(self.path + [name])
        self.table[(self._first_line(node), code_name)] = (dotted, kind)
        if kind == "func":
            self.functions.append(dotted)
        self.path.append(name)
        self.generic_visit(node)
        self.path.pop()

    def visit_FunctionDef(self, node):
        self._enter(node, node.name, "func", node.name)

    visit_AsyncFunctionDef = visit_FunctionDef

    def visit_ClassDef(self, node):
        self._enter(node, node.name, "cls", node.name)

    def visit_Lambda(self, node):
        number = self.lambda_numbers.get(node.lineno, 0)
        self._enter(node, "<lambda%d>" % number, "func", "<lambda>")


class Tracer:
    def __init__(self, root):
        self.root = os.path.realpath(root)
        self.files = {}
        self.nodes = set()
        self.edges = set()

    def module_name(self, filename):
        rel = os.path.relpath(filename, self.root)
        parts = rel[: -len(".py")].split(os.sep)
        if parts[-1] == "__init__":
            parts.pop()
        return ".".join(parts)

    def names_for(self, filename):
        if filename in self.files:
            return self.files[filename]
        names = None
        real = os.path.realpath(filename)
        if real.endswith(".py") and os.path.commonpath([real, self.root]) == self.root:
            module = self.module_name(real)
            with open(real, encoding="utf-8") as handle:
                tree = ast.parse(handle.read(), real)
            names = Names(module)
            names.number_lambdas(tree)
            names.visit(tree)
            self.nodes.add(module)
            self.nodes.update(names.functions)
        self.files[filename] = names
        return names

    def describe(self, frame):
        """(dotted name, kind) of a project frame, or None."""
        names = self.names_for(frame.f_code.co_filename)
        if names is None:
            return None
        code = frame.f_code
        if code.co_name == "<module>":
            return names.path[0], "mod"
        entry = names.table.get((code.co_firstlineno, code.co_name))
        if entry is None:
            return None, "transparent"  # comprehension scopes
        return entry

    def caller_of(self, frame):
        while frame is not None:
            info = self.describe(frame)
            if info is None:
                return None
            name, kind = info
            if kind in ("func", "mod"):
                return name
            frame = frame.f_back
        return None

    def hook(self, frame, event, arg):
        if event != "call":
            return
        callee = self.describe(frame)
        if callee is None or callee[1] != "func":
            return
        caller = self.caller_of(frame.f_back)
        if caller is not None:
            self.edges.add((caller, callee[0]))

    def graph(self):
        out = {node: [] for node in self.nodes}
        for caller, callee in self.edges:
            out.setdefault(caller, []).append(callee)
            out.setdefault(callee, [])
        return {key: sorted(set(value)) for key, value in out.items()}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("root")
    parser.add_argument("--entry", default="main.py")
    parser.add_argument("--output")
    args = parser.parse_args()

    root = os.path.realpath(args.root)
    entry = os.path.join(root, args.entry)
    tracer = Tracer(root)
    sys.path.insert(0, root)
    sys.dont_write_bytecode = True
    stdout = sys.stdout
    sys.stdout = open(os.devnull, "w")
    sys.setprofile(tracer.hook)
    try:
        runpy.run_path(entry, run_name="__main__")
    finally:
        sys.setprofile(None)
        sys.stdout.close()
        sys.stdout = stdout
    # The entry module runs as __main__ but is named after its file.
    text = json.dumps(tracer.graph(), indent=2, sort_keys=True, ensure_ascii=False)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    main()
