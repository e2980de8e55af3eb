# Copyright 2026 The novikov-cubes Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#!/usr/bin/env python3
import re
from setuptools import setup


with open("./novikov_cubes/_version.py") as f:
    (version,) = re.findall('__version__ = "(.*)"', f.read())

requirements = ["numpy>=1.16", "sympy>=1.9", 'tomli>=1.1.0; python_version < "3.11"']

info = {
    "name": "novikov-cubes",
    "version": version,
    "license": "Apache License 2.0",
    "packages": ["novikov_cubes"],
    "entry_points": {"console_scripts": ["novikov-cubes = novikov_cubes.cli:main"]},
    "description": "Homotopy commutative cubes, mapping tori and finite-domination tests over Laurent rings.",
    "long_description": open("README.rst").read(),
    "long_description_content_type": "text/x-rst",
    "provides": ["novikov_cubes"],
    "install_requires": requirements,
    "python_requires": ">=3.10",
    "package_data": {"novikov_cubes": ["NovikovCubesConfig.toml"]},
    "include_package_data": True,
}

classifiers = [
    "Development Status :: 3 - Alpha",
    "Environment :: Console",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: Apache Software License",
    "Natural Language :: English",
    "Operating System :: OS Independent",
    "Programming Language :: Python",
    # Make sure to specify here the versions of Python supported
    "Programming Language :: Python :: 3",
    "Programming Language :: Python :: 3.10",
    "Programming Language :: Python :: 3.11",
    "Programming Language :: Python :: 3.12",
    "Programming Language :: Python :: 3 :: Only",
    "Topic :: Scientific/Engineering :: Mathematics",
]

setup(classifiers=classifiers, **info)
