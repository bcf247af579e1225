"""Build script: compiles the optional CDCL extension when Cython is available.

The package works without the extension (a pure-Python solver core with
identical semantics is selected at import time), so a missing compiler or
Cython only costs speed, never correctness.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/npverify/_satcore.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
