"""Build script for the compiled statevector kernels.

The extension is optional: if Cython (or a C compiler) is unavailable the
package installs without it and qtc.qsim falls back to the pure-NumPy
implementation at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qtc.qsim._apply_cy",
                sources=["src/qtc/qsim/_apply_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
