"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
twin is selected at import time), so a missing Cython toolchain or a
failed compile must not break installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("oddmc._kernels", ["src/oddmc/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
