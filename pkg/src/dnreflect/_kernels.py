"""Backend selection for the term-map kernels.

The compiled extension is used when it imports; set ``DNREFLECT_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from dnreflect import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("DNREFLECT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from dnreflect import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

mul = _impl.mul
muladd_into = _impl.muladd_into
add_into = _impl.add_into
scale = _impl.scale
prune = _impl.prune
matmul_terms = _impl.matmul_terms
pack = _pykernels.pack
unpack = _pykernels.unpack
EXP_LIMIT = _pykernels.EXP_LIMIT
OFFSET = _pykernels.OFFSET
