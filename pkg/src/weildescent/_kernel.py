"""Kernel selection: compiled extension when built, pure Python otherwise.

Set WEILDESCENT_PURE=1 to force the pure kernel (used by the benchmark and
by tests that cross-check the two implementations)."""

import os

from . import _kernel_py

if os.environ.get("WEILDESCENT_PURE") == "1":
    impl = _kernel_py
    COMPILED = False
else:
    try:
        from . import _speedups as impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        impl = _kernel_py
        COMPILED = False

zpoly_mul = impl.zpoly_mul
zpoly_rem = impl.zpoly_rem
lpoly_mul = impl.lpoly_mul
lpoly_rem = impl.lpoly_rem
