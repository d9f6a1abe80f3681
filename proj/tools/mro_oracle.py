#!/usr/bin/env python3
"""Print the interpreter's method resolution order for every class of a
program.

Runs <root>/<entry>, then reports `__mro__` for each class defined at module
or class level in a module under <root>, keeping only classes of the
program itself. Names are dotted paths like `pkg.mod.Outer.Inner`; the entry
module is named after its file.

usage: mro_oracle.py ROOT [--entry main.py]
"""

import argparse
import io
import json
import os
import runpy
import sys
import contextlib


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("root")
    parser.add_argument("--entry", default="main.py")
    args = parser.parse_args()

    root = os.path.realpath(args.root)
    entry = os.path.join(root, args.entry)
    entry_name = os.path.splitext(args.entry)[0].replace(os.sep, ".")
    sys.path.insert(0, root)
    sys.dont_write_bytecode = True
    with contextlib.redirect_stdout(io.StringIO()):
        entry_globals = runpy.run_path(entry, run_name="__main__")

    namespaces = {entry_name: entry_globals}
    for name, module in list(sys.modules.items()):
        path = getattr(module, "__file__", None)
        if path and os.path.realpath(path).startswith(root + os.sep) and name != "__main__":
            namespaces[name] = vars(module)

    def module_of(cls):
        return entry_name if cls.__module__ == "__main__" else cls.__module__

    def project_name(cls):
        module = module_of(cls)
        if module not in namespaces or "<locals>" in cls.__qualname__:
            return None
        return module + "." + cls.__qualname__

    result = {}

    def visit(namespace, module):
        for value in list(namespace.values()):
            if not isinstance(value, type) or module_of(value) != module:
                continue
            name = project_name(value)
            if name is None or name in result:
                continue
            result[name] = [n for n in (project_name(c) for c in value.__mro__) if n is not None]
            visit(vars(value), module)

    for module, namespace in namespaces.items():
        visit(namespace, module)
    print(json.dumps(result, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
