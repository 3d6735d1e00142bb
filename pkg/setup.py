"""Build script: compiles the optional fast kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so any compiler or Cython failure downgrades to a plain build
instead of aborting the install.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("ELEGANTPRIMES_PURE") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("elegantprimes._kernel", ["src/elegantprimes/_kernel.pyx"])
    try:
        return cythonize([ext], language_level=3)
    except Exception:
        return []


setup(ext_modules=_extensions())
