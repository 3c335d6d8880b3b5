"""Build script: compiles the optional fast-kernel extension.

Set MMSGEO_PURE_PYTHON=1 to skip the extension entirely; the package
falls back to NumPy kernels at import time when the extension is absent.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("MMSGEO_PURE_PYTHON"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mmsgeo._core",
                    ["src/mmsgeo/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
