"""Build script: compiles the optional kernel extension.

The package is fully functional without the extension (a pure-Python twin of
every kernel ships in nearfeas._kernels_py); the build therefore degrades
gracefully when Cython or a C compiler is unavailable.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nearfeas._kernels_cy", ["src/nearfeas/_kernels_cy.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
