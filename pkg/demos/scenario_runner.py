"""Driving the engine from a declarative scenario file.

The same YAML documents the command line consumes can be parsed, checked
and executed in process.  Validation is a separate, total pass: it
reports every failed invariant instead of stopping at the first.
"""

import pathlib

import convexop as cx

here = pathlib.Path(__file__).resolve().parent.parent
doc = cx.parse_scenario(here / "scenarios" / "quantum_zx.yaml")

print(f"model: {doc.model['kind']}, steps: {len(doc.steps)}")

checks = cx.validate_scenario(doc)
for row in checks:
    status = "ok" if row.passed else "FAIL"
    print(f"  [{status}] {row.check} on {row.target}")

report = cx.run_scenario(doc)
print(f"chain probability: {report.probability}")
print("rendered report:")
print(cx.render_report(report))
