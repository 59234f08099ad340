#!/usr/bin/env python
"""Package setup for the ΛVaR insurance design toolkit."""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).parent


def _version() -> str:
    scope: dict = {}
    exec((HERE / "version.py").read_text(encoding="utf-8"), scope)
    return scope["__version__"]


def _requirements() -> list[str]:
    lines = (HERE / "requirements.txt").read_text(encoding="utf-8").splitlines()
    return [line.split("#")[0].strip() for line in lines if line.split("#")[0].strip()]


setup(
    name="lambdavar-insurance",
    version=_version(),
    description="Optimal insurance contracts under Lambda-Value-at-Risk",
    long_description=(HERE / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("examples", "examples.*")),
    py_modules=["cli", "config", "version"],
    python_requires=">=3.10",
    install_requires=_requirements(),
    entry_points={"console_scripts": ["lambdavar=cli:main"]},
)
