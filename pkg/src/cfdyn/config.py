"""Precision knobs.

Adaptive comparisons start at ``START_BITS`` and double until they resolve
or hit the cap.  The cap and the default working precision can be overridden
with the ``CFDYN_PRECISION_BITS`` environment variable or per call.
"""

import os

START_BITS = 64
DEFAULT_BITS = 128
PRECISION_CAP = 4096

_ENV_VAR = "CFDYN_PRECISION_BITS"


def default_bits() -> int:
    """Working precision in bits for high-precision (non-exact) results."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_BITS
    bits = int(raw)
    if bits < 8 or bits > PRECISION_CAP:
        raise ValueError(f"{_ENV_VAR} must be in [8, {PRECISION_CAP}], got {bits}")
    return bits
