"""Script to check that the versions in pyproject.toml, constants.py and
__init__.py agree, and that the changelog has an entry for that version.
Intended to be run as part of CI checks, but can also be run locally."""

import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
PYPROJECT_PATH = ROOT / "pyproject.toml"
APP_MODULE_PATH = ROOT / "dtpoints_app" / "constants.py"
APP_INIT_PATH = ROOT / "dtpoints_app" / "__init__.py"
CHANGELOG_PATH = ROOT / "CHANGELOG.md"


def parse_version(value: str) -> tuple[int, int, int]:
    """Parse version string into tuple of integers."""
    cleaned = value.strip().lower().lstrip("v")
    parts = cleaned.split(".")
    nums = []
    for part in parts[:3]:
        match = re.match(r"\d*", part)
        nums.append(int(match.group(0) or 0))
    while len(nums) < 3:
        nums.append(0)
    return tuple(nums[:3])


def read_pyproject_version() -> str:
    """Read version from pyproject.toml file."""
    content = PYPROJECT_PATH.read_text(encoding="utf-8")
    match = re.search(r'^\s*version\s*=\s*"(.*?)"\s*$', content, re.MULTILINE)
    if not match:
        raise RuntimeError("Could not find version in pyproject.toml")
    return match.group(1).strip()


def read_app_version() -> str:
    """Read version from constants.py file."""
    content = APP_MODULE_PATH.read_text(encoding="utf-8")
    match = re.search(r'^\s*APP_VERSION\s*=\s*"(.*?)"\s*$', content, re.MULTILINE)
    if not match:
        raise RuntimeError("Could not find APP_VERSION in constants.py")
    return match.group(1).strip()


def init_uses_app_version() -> bool:
    """__init__.py must take __version__ from constants.APP_VERSION."""
    content = APP_INIT_PATH.read_text(encoding="utf-8")
    return bool(
        re.search(r"from \.constants import APP_VERSION", content)
        and re.search(r"__version__\s*=\s*APP_VERSION", content)
    )


def changelog_versions() -> list[tuple[int, int, int]]:
    """Released versions listed in CHANGELOG.md, newest first."""
    content = CHANGELOG_PATH.read_text(encoding="utf-8")
    return [parse_version(v) for v in re.findall(r"^## \[(\d+\.\d+\.\d+)\]", content, re.MULTILINE)]


def main() -> int:
    """Check version consistency."""
    pyproject_version = read_pyproject_version()
    app_version = read_app_version()

    if pyproject_version != app_version:
        print(
            "Version mismatch: pyproject.toml has "
            f"{pyproject_version}, constants.py has {app_version}"
        )
        return 1

    if not init_uses_app_version():
        print("__init__.py does not set __version__ from APP_VERSION")
        return 1

    released = changelog_versions()
    if not released or released[0] != parse_version(app_version):
        print(f"CHANGELOG.md has no entry for {app_version} at the top")
        return 1

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
