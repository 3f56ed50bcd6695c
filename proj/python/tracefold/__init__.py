# Copyright 2026 The Tracefold Authors
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

"""Exact tracial spectral calculus on a commutative finite model.

Values and masses are accepted in any form ``fractions.Fraction`` takes and are
returned as ``Fraction``.
"""

import json
from fractions import Fraction

from . import _core
from ._core import FormatError, PreconditionError

__all__ = [
    "FormatError",
    "PreconditionError",
    "decompose",
    "distribution",
    "equivalent",
    "is_symmetric",
    "mediator_moment",
    "moments",
    "quantile_moments",
    "verify",
]


def _atoms(atoms):
    return [(str(Fraction(v)), str(Fraction(m))) for v, m in atoms]


def moments(atoms, order):
    return [Fraction(q) for q in _core.moments(_atoms(atoms), order)]


def quantile_moments(atoms, order):
    return [Fraction(q) for q in _core.quantile_moments(_atoms(atoms), order)]


def distribution(atoms):
    return [(Fraction(v), Fraction(m)) for v, m in _core.distribution(_atoms(atoms))]


def is_symmetric(atoms):
    return _core.is_symmetric(_atoms(atoms))


def equivalent(a, b):
    return _core.equivalent(_atoms(a), _atoms(b))


def mediator_moment(k):
    return Fraction(_core.mediator_moment(k))


def decompose(atoms, stabilize=False, order=9):
    """Returns the decomposition report as a dict."""
    return json.loads(_core.decompose(_atoms(atoms), stabilize, order))


def verify(report):
    """Returns the list of verification failures for a report dict."""
    return _core.verify(json.dumps(report))
