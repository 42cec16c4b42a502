"""Build script for the optional compiled CCD kernel.

The package is pure Python plus one Cython extension for the hot
orthant-counting loop. If Cython or a C compiler is unavailable the
extension is skipped and the numpy fallback in unidex._kernels is used.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "unidex._kernels._orthants_cy",
                ["src/unidex/_kernels/_orthants_cy.pyx"],
                include_dirs=[numpy.get_include()],
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
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"unidex: skipping compiled kernel ({exc}); numpy fallback will be used",
          file=sys.stderr)

setup(ext_modules=ext_modules)
