# Copyright 2026 The novikov-cubes Developers

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Exception hierarchy shared by all modules of the package.
"""


class NovikovCubesError(Exception):
    """Base class of all errors raised by novikov_cubes."""


class StructuralError(NovikovCubesError, ValueError):
    """Mismatch of rings, variable counts, shapes or degrees."""


class DomainError(NovikovCubesError, ValueError):
    """Argument outside the domain of an operation (e.g. a non-invertible
    specialization point or a cone of the wrong dimension)."""


class ParseError(NovikovCubesError, ValueError):
    """Malformed textual polynomial or input document."""


class UnsupportedError(NovikovCubesError):
    """Operation not available for the given size or structure."""


class UnsupportedRingError(UnsupportedError):
    """Operation needs a principal ideal domain or a field."""


class ContractViolation(NovikovCubesError):
    """A precondition identity fails, e.g. a map is not a cochain map.

    Args:
        message (str): description of the failure
        where: offending index data, such as a degree or a pair ``(k, l)``
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class InternalConsistencyError(NovikovCubesError):
    """An identity that holds by construction failed to hold."""


class PreconditionError(NovikovCubesError):
    """Input rejected because a checked hypothesis does not hold."""
