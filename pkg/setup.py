import codecs
import os
import re
from typing import List

from pkg_resources import parse_requirements
from setuptools import find_packages, setup

here = os.path.abspath(os.path.dirname(__file__))


def read_requirements(filename: str) -> List[str]:
    with open(os.path.join(here, filename)) as requirements_file:
        return [str(requirement) for requirement in parse_requirements(requirements_file)]


def read_version() -> str:
    with codecs.open(os.path.join(here, "dualbasis", "__init__.py"), encoding="utf-8") as init_file:
        match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", init_file.read(), re.MULTILINE)
    if match is None:
        raise RuntimeError("__version__ is missing from dualbasis/__init__.py")
    return match.group(1)


extras = {"dev": read_requirements("requirements-dev.txt")}
extras["all"] = sorted({requirement for group in extras.values() for requirement in group})

setup(
    name="dualbasis",
    version=read_version(),
    description="Metric, reciprocal and angle identities of a basis and its dual",
    long_description=(
        "Geometry of two sets of basis vectors in 2D and 3D: metric matrices, reciprocal bases, closed-form "
        "angle identities and a reproducible randomized verification harness."
    ),
    author="dualbasis contributors",
    license="MIT",
    packages=find_packages(exclude=["tests"]),
    package_data={"dualbasis": ["dualbasis_cli/config.yml"]},
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=read_requirements("requirements.txt"),
    extras_require=extras,
    entry_points={"console_scripts": ["dualbasis = dualbasis.dualbasis_cli.run:main"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    keywords="dual basis, reciprocal lattice, metric tensor, direction cosines, crystallography",
)
