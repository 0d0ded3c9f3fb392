"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure numpy fallback is
selected at import time), so a failed extension build is not fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "specdeg._kernels._core",
        sources=["src/specdeg/_kernels/_core.pyx"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    pass

setup(ext_modules=ext_modules)
