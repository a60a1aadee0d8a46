import json
from importlib import resources

import pytest

ACCEPTANCE_LINES = []


def load_schema(name):
    text = resources.files("packlab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@pytest.fixture(scope="session")
def validate():
    jsonschema = pytest.importorskip("jsonschema")
    from referencing import Registry, Resource

    names = ["packing", "solve_result", "enumeration_result", "constraint",
             "check_report", "sequence", "code_report"]
    schemas = {n: load_schema(n) for n in names}
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values())

    def check(instance, name):
        jsonschema.Draft202012Validator(schemas[name], registry=registry).validate(instance)

    return check


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(number, ok, detail):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {status}  {detail}")
        print(ACCEPTANCE_LINES[-1])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
