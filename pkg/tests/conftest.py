import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def read_fixture(name: str) -> dict:
    with open(FIXTURES / name) as fh:
        return json.load(fh)
