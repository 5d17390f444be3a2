"""Build hook for the optional compiled scan kernel.

The package is pure Python; if Cython and a C compiler are available the
byte-scanning kernel is compiled for speed, otherwise the pure-Python
fallback in imartifacts._scan.pykernels is used at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/imartifacts/_scan/kernels.pyx"],
        language_level=3,
    )
except Exception:  # no Cython or no compiler: fall back to pure Python
    ext_modules = []

setup(ext_modules=ext_modules)
