"""Build script: compiles the optional Cython kernel.

The package works without the compiled extension (a pure-Python kernel is
selected at import time), so a failed extension build is not fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "decospace._speedups",
                sources=["src/decospace/_speedups.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
