"""Build script: compiles the optional Cython kernels.

The compiled extension is a speedup only. If Cython or a C compiler is
unavailable the install still succeeds and the package falls back to the
pure-numpy kernels at import time (see costwalk._kernels).
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "costwalk._kernels._native",
                ["src/costwalk/_kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError as exc:  # pragma: no cover - environment dependent
    warnings.warn(f"Cython unavailable ({exc}); installing without compiled kernels")

setup(ext_modules=ext_modules)
