#!/usr/bin/env -S python3 -I -S
# Copyright 2026 The SCG Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Minimal runner used by the test suite.

Speaks the line-delimited runner protocol: one JSON request per line on
stdin, one JSON reply per line on stdout. Every request runs in a fresh
namespace. Not a sandbox.
"""
import io
import json
import os
import sys

CAP = int(os.environ.get("SCG_OUTPUT_CAP", "1048576"))


def run(request):
    entry = request["entry"]
    code = compile(request["code"], "<snippet>", "exec")
    namespace = {"__name__": "__snippet__", "__builtins__": __builtins__}
    captured = io.StringIO()
    saved = sys.stdin, sys.stdout
    try:
        sys.stdout = captured
        if entry["kind"] == "function":
            sys.stdin = io.StringIO("")
            exec(code, namespace)
            fn = namespace.get(entry["name"])
            if not callable(fn):
                raise NameError("entry %r is not defined" % entry["name"])
            return fn(*request["input"])
        sys.stdin = io.StringIO(request["input"])
        try:
            exec(code, namespace)
        except SystemExit as e:
            if e.code not in (None, 0):
                raise RuntimeError("exit status %r" % (e.code,))
        return captured.getvalue()
    finally:
        sys.stdin, sys.stdout = saved


def main():
    out = sys.stdout
    for line in sys.stdin:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except ValueError:
            sys.exit(2)
        try:
            result = run(request)
            reply = json.dumps({"status": "ok", "output": result},
                               separators=(",", ":"), allow_nan=False)
            if len(reply) > CAP:
                reply = json.dumps({"status": "error", "message": "output exceeds cap"})
        except Exception as e:  # candidate failure, never fatal
            message = ("%s: %s" % (type(e).__name__, e))[:CAP]
            reply = json.dumps({"status": "error", "message": message})
        out.write(reply + "\n")
        out.flush()


if __name__ == "__main__":
    main()
